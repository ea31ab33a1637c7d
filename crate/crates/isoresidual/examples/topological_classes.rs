//! Topological classes of strata ending in two simple poles.
//!
//! ```bash
//! cargo run -p isoresidual --example topological_classes
//! ```

use isoresidual::monodromy::topological_class_partition;
use isoresidual::StratumSignature;

fn main() -> isoresidual::Result<()> {
    for (a, b) in [(4u32, vec![4u32, 1, 1]), (4, vec![2, 2, 1, 1]), (6, vec![3, 3, 1, 1])] {
        let sig = StratumSignature::new(a, b)?;
        let tc = topological_class_partition(&sig)?;
        println!("{sig}: {} classes in a fiber of {}", tc.k, tc.fiber_size);
        for (i, class) in tc.classes.iter().enumerate() {
            println!("  class {i}: {class:?}");
        }
        println!("  simple-pole meridian shifts classes by {}", tc.shift.cycle_notation());
    }
    Ok(())
}

//! Monodromy groups of three-pole strata, identified structurally.
//!
//! ```bash
//! cargo run -p isoresidual --example group_identification
//! ```

use isoresidual::monodromy::monodromy_group;
use isoresidual::{SignFunction, StratumSignature};

fn main() -> isoresidual::Result<()> {
    let base = SignFunction::standard(3);
    for (a, b) in [
        (4u32, vec![4u32, 1, 1]),
        (5, vec![3, 3, 1]),
        (3, vec![2, 2, 1]),
        (6, vec![2, 3, 3]),
        (6, vec![2, 2, 4]),
        (7, vec![3, 3, 3]),
    ] {
        let sig = StratumSignature::new(a, b)?;
        let (gens, _, report) = monodromy_group(&sig, &base)?;
        println!(
            "{sig}: {} (order {}, {} transported meridians, fiber {})",
            report.kind,
            report.order,
            gens.generators.len(),
            report.fiber_size
        );
    }
    Ok(())
}

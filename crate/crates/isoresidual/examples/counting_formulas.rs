//! The closed-form fiber counts next to brute-force enumeration.
//!
//! ```bash
//! cargo run -p isoresidual --example counting_formulas
//! ```

use isoresidual::fiber::{
    deep_resonance_count, deep_resonance_psi, enumerate_fiber, generic_degree,
    single_resonance_count,
};
use isoresidual::stratum::canonical_subsets;
use isoresidual::{SignFunction, StratumSignature};

fn main() -> isoresidual::Result<()> {
    for (a, b) in [(4u32, vec![2u32, 2, 2]), (6, vec![2, 3, 3]), (5, vec![2, 2, 2, 1])] {
        let sig = StratumSignature::new(a, b)?;
        let p = sig.num_poles();
        let generic = enumerate_fiber(&sig, &SignFunction::standard(p))?.len();
        println!("{sig}");
        println!("  generic degree: {} (formula) = {} (enumerated)", generic_degree(&sig), generic);
        for subset in canonical_subsets(p) {
            println!("  over the wall of {{{subset}}}: {}", single_resonance_count(&sig, &subset));
        }
        let deep = enumerate_fiber(&sig, &deep_resonance_psi(p))?.len();
        println!(
            "  deep resonance: {} (formula) = {} (enumerated)",
            deep_resonance_count(&sig),
            deep
        );
    }
    Ok(())
}

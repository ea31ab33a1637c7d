//! The meridian of a resonance hyperplane acting on an adjacent fiber.
//!
//! ```bash
//! cargo run -p isoresidual --example meridian_cycles
//! ```

use isoresidual::arrangement::Chamber;
use isoresidual::monodromy::{local_gamma, predicted_meridian_cycle_type};
use isoresidual::stratum::canonical_subsets;
use isoresidual::{ResidueConfig, StratumSignature};

fn main() -> isoresidual::Result<()> {
    let sig = StratumSignature::new(6, vec![2, 3, 3])?;
    let chamber = Chamber::from_residues(&ResidueConfig::from_integers(&[-2, -3, 5])?)?;
    println!("{sig} over the chamber [{}]", chamber.psi.key());
    for subset in canonical_subsets(3) {
        match local_gamma(&sig, &chamber, &subset) {
            Ok((fiber, gamma)) => {
                println!(
                    "  meridian of {{{subset}}} on {} trees: {}  cycle type {:?} (predicted {:?})",
                    fiber.len(),
                    gamma.cycle_notation(),
                    gamma.cycle_type(),
                    predicted_meridian_cycle_type(&sig, &subset),
                );
            }
            Err(e) => println!("  meridian of {{{subset}}}: {e}"),
        }
    }
    Ok(())
}

//! Transport a fiber across a wall, half a meridian loop at a time.
//!
//! ```bash
//! cargo run -p isoresidual --example wall_crossing
//! ```

use isoresidual::arrangement::Chamber;
use isoresidual::monodromy::{local_gamma, wall_cross, Half};
use isoresidual::{PoleSubset, ResidueConfig, StratumSignature};

fn main() -> isoresidual::Result<()> {
    let sig = StratumSignature::new(6, vec![2, 3, 3])?;
    let near = Chamber::from_residues(&ResidueConfig::from_integers(&[-2, -3, 5])?)?;
    let wall = PoleSubset::new(3, &[1])?;

    let upper = wall_cross(&sig, &near, &wall, Half::Upper)?;
    println!(
        "crossing the wall of {{{wall}}} from [{}] to [{}]:",
        upper.from.psi.key(),
        upper.to.psi.key()
    );
    for (i, &j) in upper.map.iter().enumerate() {
        println!("  {}  ->  {}", upper.from_fiber.keys()[i], upper.to_fiber.keys()[j]);
    }

    // two opposite half-crossings compose to the meridian
    let lower = wall_cross(&sig, &near, &wall, Half::Lower)?;
    let lower_inv = lower.inverse_map();
    let composed: Vec<usize> = (0..upper.map.len()).map(|x| lower_inv[upper.map[x]]).collect();
    let (_, gamma) = local_gamma(&sig, &near, &wall)?;
    println!("lower-back after upper: {:?}", composed);
    println!("meridian images:        {:?}", gamma.images());
    Ok(())
}

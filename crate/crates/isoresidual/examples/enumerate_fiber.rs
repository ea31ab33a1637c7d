//! Enumerate an isoresidual fiber over a residue configuration.
//!
//! ```bash
//! cargo run -p isoresidual --example enumerate_fiber
//! ```

use isoresidual::fiber::enumerate_fiber;
use isoresidual::{ResidueConfig, StratumSignature};

fn main() -> isoresidual::Result<()> {
    let sig = StratumSignature::new(4, vec![2, 2, 2])?;
    let residues = ResidueConfig::parse("1,-1/4,-3/4")?;
    let fiber = enumerate_fiber(&sig, &residues.sign_function())?;

    println!("stratum {sig} over residues ({residues})");
    println!("fiber has {} elements:", fiber.len());
    for key in fiber.keys() {
        println!("  {key}");
    }

    // over a wall the fiber shrinks: here the residue of pole 2 vanishes
    let wall = ResidueConfig::parse("1,0,-1")?;
    let on_wall = enumerate_fiber(&sig, &wall.sign_function())?;
    println!("over residues ({wall}) only {} element remains:", on_wall.len());
    for key in on_wall.keys() {
        println!("  {key}");
    }
    Ok(())
}

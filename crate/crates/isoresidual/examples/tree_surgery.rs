//! The two counting surgeries: attaching a simple pole at a legal corner,
//! and transferring pole weight toward the root.
//!
//! ```bash
//! cargo run -p isoresidual --example tree_surgery
//! ```

use isoresidual::fiber::{add_simple_pole, enumerate_fiber, weight_transfer};
use isoresidual::{SignFunction, StratumSignature};

fn main() -> isoresidual::Result<()> {
    let sig = StratumSignature::new(4, vec![2, 2, 2])?;
    let fiber = enumerate_fiber(&sig, &SignFunction::standard(3))?;
    let tree = fiber.tree(0);
    println!("tree {}", tree.canonical_key());

    let corners = tree.corners();
    println!(
        "{} corners, {} admit an incoming edge:",
        corners.len(),
        corners.iter().filter(|c| c.legal_incoming).count()
    );
    for corner in corners.iter().filter(|c| c.legal_incoming) {
        let bigger = add_simple_pole(tree, corner)?;
        println!("  glue a simple pole at vertex {} -> {}", corner.vertex, bigger.canonical_key());
    }

    // moving one unit of weight from pole 2 to pole 1 keeps the count
    println!("\nweight transfer into the root:");
    for t in fiber.trees() {
        let moved = weight_transfer(t, 2, &sig)?;
        println!("  {}  ->  {}", t.canonical_key(), moved.canonical_key());
    }
    Ok(())
}

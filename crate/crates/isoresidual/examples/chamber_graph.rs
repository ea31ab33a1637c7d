//! Walk the chambers of the real resonance arrangement.
//!
//! ```bash
//! cargo run -p isoresidual --example chamber_graph
//! ```

use isoresidual::arrangement::{chamber_graph, chamber_walls, is_simplicial};

fn main() -> isoresidual::Result<()> {
    for p in 2..=4usize {
        let graph = chamber_graph(p)?;
        let simplicial = graph.chambers.iter().filter(|c| is_simplicial(c)).count();
        println!(
            "p = {p}: {} chambers, {} shared walls, {} simplicial, connected: {}",
            graph.chambers.len(),
            graph.edges.len(),
            simplicial,
            graph.is_connected()
        );
    }

    // facets of one chamber in detail
    let graph = chamber_graph(3)?;
    let chamber = &graph.chambers[0];
    println!(
        "\nchamber [{}] with witness ({}) has walls:",
        chamber.psi.key(),
        chamber.witness
    );
    for wall in chamber_walls(chamber) {
        println!("  sum over {{{wall}}} = 0");
    }
    Ok(())
}

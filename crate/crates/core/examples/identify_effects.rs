//! List every identified estimand and the role of each variable.

use causal_core::identify::{classify_all, identify_effect};
use causal_core::parse_graph;
use causal_core::simulate::{EXAMPLE1_GRAPH, EXAMPLE2_GRAPH};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let hidden = "digraph { u [observed=no]; u -> t; u -> y; t -> m; m -> y; z -> t; }";
    for dot in [EXAMPLE1_GRAPH, EXAMPLE2_GRAPH, hidden] {
        let g = parse_graph(dot)?;
        println!(
            "graph: {}",
            dot.split_whitespace().collect::<Vec<_>>().join(" ")
        );
        for e in identify_effect(&g, "t", "y")? {
            println!("  {e}");
        }
        for (v, role) in classify_all(&g, "t", "y")? {
            println!("  {v}: {role}");
        }
    }
    Ok(())
}

//! Parse a DOT graph and ask d-separation questions.

use causal_core::graph::node_set;
use causal_core::parse_graph;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let g = parse_graph(
        r#"digraph {
            u [observed="no"];
            u -> t; u -> y;
            w -> t; w -> y;
            t -> m -> y;
            t -> c; y -> c;
        }"#,
    )?;
    println!("{g}");
    println!("topological order: {:?}", g.topological_order());
    println!("observed: {:?}", g.observed_nodes());

    let queries = [
        ("t", "y", vec![]),
        ("w", "m", vec![]),
        ("w", "m", vec!["t"]),
        ("m", "c", vec!["t"]),
        ("m", "c", vec!["t", "y"]),
        ("w", "u", vec![]),
        ("w", "u", vec!["c"]),
    ];
    for (x, y, z) in queries {
        let sep = g.d_separated(&node_set([x]), &node_set([y]), &node_set(z.clone()))?;
        println!("{x} _||_ {y} | {z:?}: {sep}");
    }
    for p in g.backdoor_paths("t", "y")? {
        println!("backdoor path: {p}");
    }
    for p in g.simple_paths_between("w", "c")? {
        println!("w..c path: {p}, colliders {:?}", p.colliders());
    }
    Ok(())
}

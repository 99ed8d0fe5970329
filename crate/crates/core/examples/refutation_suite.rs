//! Run every refuter on a correct and a misspecified pipeline.

use std::sync::Arc;

use causal_core::estimate::LinearRegression;
use causal_core::refute::{RefuterOutcome, REFUTER_NAMES};
use causal_core::simulate::{dgp_example1, EXAMPLE1_GRAPH};
use causal_core::{
    parse_graph, EstimandChoice, EstimandKind, Pipeline, RandomSeed, RefuteSettings, RefuterSpec,
};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let sim = dgp_example1(5_000, RandomSeed(1))?;
    let settings = RefuteSettings::with_replications(50);
    let graphs = [
        ("correct", EXAMPLE1_GRAPH),
        (
            "z as confounder",
            "digraph { w -> t; w -> y; z -> t; z -> y; t -> y; }",
        ),
    ];
    for (label, dot) in graphs {
        let p = Pipeline::new(
            parse_graph(dot)?,
            "t",
            "y",
            EstimandChoice::new(EstimandKind::Backdoor, 0),
            Arc::new(LinearRegression),
        )?;
        println!("{label}: {}", p.estimand()?);
        for (i, name) in REFUTER_NAMES.iter().enumerate() {
            let spec = RefuterSpec::from_name(name).unwrap();
            match spec.run(&p, &sim.data, &settings, RandomSeed(7).derive(i as u64)) {
                Ok(RefuterOutcome::Report(r)) => println!(
                    "  {name:<30} original {:>8.4} refuted {:>8.4} p {:.3} {}",
                    r.original_ate,
                    r.refuted_mean,
                    r.p_value,
                    if r.passed { "pass" } else { "FAIL" }
                ),
                Ok(RefuterOutcome::Sensitivity(s)) => {
                    println!("  {name:<30} {} grid cells", s.grid.len())
                }
                Err(e) => println!("  {name:<30} error: {e}"),
            }
        }
    }
    Ok(())
}

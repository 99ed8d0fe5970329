//! Run every estimator against the estimand it supports.

use causal_core::estimate::{estimator_by_name, ESTIMATOR_NAMES};
use causal_core::simulate::{dgp_example1, dgp_example2};
use causal_core::{identify_effect, RandomSeed};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let seed = RandomSeed(42);
    let ex1 = dgp_example1(10_000, seed)?;
    let ex2 = dgp_example2(10_000, seed)?;
    for sim in [&ex1, &ex2] {
        println!("true effect {}", sim.true_ate);
        for estimand in identify_effect(&sim.graph, "t", "y")? {
            for name in ESTIMATOR_NAMES {
                let est = estimator_by_name(name).unwrap();
                if !est.supports(estimand.kind()) {
                    continue;
                }
                let e = est.estimate(&sim.data, &estimand, seed.derive(1))?;
                println!("  {name:<28} {estimand}: {e}");
            }
        }
    }
    Ok(())
}

//! Generate a configurable linear dataset, write it out and check the
//! effect is recovered through the identified adjustment set.

use causal_core::estimate::estimate_backdoor_regression;
use causal_core::simulate::{generate_linear_dgp, LinearDgpConfig};
use causal_core::{identify_effect, RandomSeed};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let cfg = LinearDgpConfig {
        n: 20_000,
        num_confounders: 4,
        num_instruments: 2,
        include_mediator: true,
        effect: 2.5,
        noise_variance: 1.0,
        seed: RandomSeed(11),
    };
    let sim = generate_linear_dgp(&cfg)?;
    println!("{}", sim.graph.to_dot());
    let mut csv = Vec::new();
    sim.data.write_csv(&mut csv)?;
    let text = String::from_utf8(csv)?;
    for line in text.lines().take(3) {
        println!("{line}");
    }
    let estimands = identify_effect(&sim.graph, "t", "y")?;
    let e = estimate_backdoor_regression(&sim.data, &estimands[0])?;
    println!("{}: {e} (true {})", estimands[0], sim.true_ate);
    Ok(())
}

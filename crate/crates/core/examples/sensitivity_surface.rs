//! Print the simulated unobserved-confounder surface as a table.

use causal_core::refute::{sensitivity_unobserved_confounder, SensitivityGrid};
use causal_core::simulate::{dgp_example1, EXAMPLE1_GRAPH};
use causal_core::{
    estimate::LinearRegression, parse_graph, EstimandChoice, EstimandKind, Pipeline, RandomSeed,
};
use std::sync::Arc;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let sim = dgp_example1(5_000, RandomSeed(3))?;
    let p = Pipeline::new(
        parse_graph(EXAMPLE1_GRAPH)?,
        "t",
        "y",
        EstimandChoice::new(EstimandKind::Backdoor, 0),
        Arc::new(LinearRegression),
    )?;
    let grid = SensitivityGrid {
        kappa_t: vec![0.0, 0.5, 1.0, 2.0],
        kappa_y: vec![0.0, 1.0, 2.0, 5.0],
        replications: 20,
    };
    let s = sensitivity_unobserved_confounder(&p, &sim.data, &grid, RandomSeed(9))?;
    println!("original {:.4}", s.original_ate);
    print!("{:>8}", "kt \\ ky");
    for ky in &grid.kappa_y {
        print!("{ky:>10}");
    }
    println!();
    for &kt in &grid.kappa_t {
        print!("{kt:>8}");
        for &ky in &grid.kappa_y {
            print!("{:>10.4}", s.cell(kt, ky).unwrap().adjusted_ate);
        }
        println!();
    }
    Ok(())
}

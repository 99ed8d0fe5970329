//! Adjusting for an instrument leaves the estimate unbiased but inflates
//! its spread across datasets.

use causal_core::simulate::{replicate_figure1, summarize_figure};
use causal_core::RandomSeed;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let rows = replicate_figure1(1, 100, 10_000, RandomSeed(0))?;
    let s = summarize_figure(1, &rows)?;
    println!("true effect {}", s.true_ate);
    println!(
        "adjust {:?}: mean {:.4} std {:.4}",
        s.correct_adjustment, s.correct_mean, s.correct_std
    );
    println!(
        "adjust {:?}: mean {:.4} std {:.4}",
        s.faulty_adjustment, s.faulty_mean, s.faulty_std
    );
    println!("std ratio {:.2}", s.std_ratio);
    Ok(())
}

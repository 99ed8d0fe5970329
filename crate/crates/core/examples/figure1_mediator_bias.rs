//! Adjusting for a mediator blocks the effect it carries.

use causal_core::simulate::{replicate_figure1, summarize_figure, write_figure_csv};
use causal_core::RandomSeed;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let rows = replicate_figure1(2, 100, 10_000, RandomSeed(0))?;
    let s = summarize_figure(2, &rows)?;
    println!("true effect {}", s.true_ate);
    println!(
        "adjust {:?}: mean {:.4}",
        s.correct_adjustment, s.correct_mean
    );
    println!(
        "adjust {:?}: mean {:.4}",
        s.faulty_adjustment, s.faulty_mean
    );
    let mut head = Vec::new();
    write_figure_csv(&rows[..4], &mut head)?;
    print!("{}", String::from_utf8(head)?);
    Ok(())
}

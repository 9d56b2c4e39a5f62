//! End-to-end structure search on data from a known system:
//! y(k) = 0.5 y(k-1) - 0.3 y(k-2) + 0.1 u(k-1).
use narx_select::data::Dataset;
use narx_select::run::{run_identify, RunConfig};
use narx_select::synthetic::NarxSystem;

fn main() -> narx_select::Result<()> {
    let samples = NarxSystem::reference().generate(500, 4);

    // min-max scaling would turn the +-1 input into {0, 1}, where u^2 = u
    let mut config = RunConfig { normalize: false, ..RunConfig::default() };
    config.optimizer.seed = 4;
    let data = Dataset::prepare(samples, &config)?;
    let report = run_identify(&config, &data)?;

    println!("searched {} structures", report.search_space);
    for ((term, theta), relevant) in report.terms.iter().zip(&report.theta).zip(&report.relevant) {
        println!("  {term:>8}  {theta:+.6}{}", if *relevant { "" } else { "  (irrelevant)" });
    }
    println!("penalty {:.4}  cost {:.3e}", report.penalty_rho, report.cost);
    println!("free-run MSE: identification {:.3e}, validation {:.3e}", report.mse_identification, report.mse_validation);
    println!("{:.3} s", report.wall_clock_seconds);
    Ok(())
}

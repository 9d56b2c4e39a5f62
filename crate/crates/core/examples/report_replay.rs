//! Writes a dataset to CSV, identifies a model from it, saves the report and
//! convergence curve, then reloads the report and re-simulates it.
use narx_select::data::{load_csv, save_csv, Dataset};
use narx_select::report::Report;
use narx_select::run::{replay_report, run_identify, RunConfig};
use narx_select::synthetic::NarxSystem;

fn main() -> narx_select::Result<()> {
    let dir = std::env::temp_dir().join("narx-select-replay");
    std::fs::create_dir_all(&dir).map_err(|source| narx_select::Error::Io { path: dir.clone(), source })?;

    let system = NarxSystem::from_pairs(&[("y(k-1)", 0.6), ("u(k-1)", 1.0), ("y(k-1)*u(k-1)", -0.25), ("1", 0.1)]);
    let csv = dir.join("data.csv");
    save_csv(&csv, &system.generate(600, 9))?;

    let samples = load_csv(&csv, true)?;
    let config = RunConfig::default();
    let report = run_identify(&config, &Dataset::prepare(samples.clone(), &config)?)?;
    report.save(dir.join("report.toml"))?;
    report.save_convergence(dir.join("convergence.csv"))?;
    println!("wrote {}", dir.display());

    let loaded = Report::load(dir.join("report.toml"))?;
    let replay = replay_report(&loaded, samples)?;
    println!("terms: {}", loaded.terms.join(" + "));
    println!("reported validation MSE {:.17e}", loaded.mse_validation);
    println!("replayed validation MSE {:.17e}", replay.mse_validation);
    Ok(())
}

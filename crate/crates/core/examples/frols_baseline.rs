//! Forward orthogonal least squares on the same data as the swarm search.
//! On this system the greedy ERR order prefers u(k-2) over y(k-1), so a
//! three-term budget misses the true structure.
use narx_select::data::Dataset;
use narx_select::dictionary::Dictionary;
use narx_select::frols::{frols_select, StopRule};
use narx_select::run::{run_baseline, run_identify, RunConfig};
use narx_select::synthetic::NarxSystem;

fn main() -> narx_select::Result<()> {
    let samples = NarxSystem::reference().generate(500, 4);
    let mut config = RunConfig { normalize: false, ..RunConfig::default() };
    let data = Dataset::prepare(samples, &config)?;
    let dict = Dictionary::build(config.dictionary)?;

    for stop in [StopRule::terms(3), StopRule::terms(5), StopRule::threshold(1e-10)] {
        let ranking = frols_select(&dict, data.identification(), stop)?;
        println!("{stop:?}");
        for (idx, err) in ranking.selected.iter().zip(&ranking.err_values) {
            println!("  {:>14}  ERR {err:.6}", dict.terms()[*idx].to_string());
        }
        println!("  sum {:.10}", ranking.cumulative_err);
    }

    config.frols.max_terms = Some(3);
    let frols = run_baseline(&config, &data)?;
    let swarm = run_identify(&config, &data)?;
    println!("\nERR, 3 terms: {:?}  validation MSE {:.3e}", frols.terms, frols.mse_validation);
    println!("swarm:        {:?}  validation MSE {:.3e}", swarm.terms, swarm.mse_validation);
    Ok(())
}

//! One-step-ahead prediction hides structural errors that free-run simulation
//! exposes. A model missing y(k-2) is compared with the true one.
use narx_select::data::Signals;
use narx_select::dictionary::{Dictionary, DictionarySpec};
use narx_select::estimation::estimate;
use narx_select::simulation::{free_run, one_step_predict};
use narx_select::synthetic::NarxSystem;

fn main() -> narx_select::Result<()> {
    let samples = NarxSystem::reference().generate(400, 2);
    let data = Signals::new(&samples.u, &samples.y);
    let dict = Dictionary::build(DictionarySpec::default())?;

    for (label, indices) in [("true", vec![1, 2, 3]), ("missing y(k-2)", vec![1, 3])] {
        let model = estimate(&dict.structure(&indices)?, data, 0.05)?;
        let osa = one_step_predict(&model, data)?.mse(data.y)?;
        let sim = free_run(&model, data)?.mse(data.y)?;
        println!("{label:>15}: one-step MSE {osa:.3e}  free-run MSE {sim:.3e}");
    }
    Ok(())
}

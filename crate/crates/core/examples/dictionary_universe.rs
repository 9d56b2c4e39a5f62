//! Enumerates candidate regressors for a few model orders and shows how a bit
//! vector selects a model structure.
use narx_select::dictionary::{candidate_count, Dictionary, DictionarySpec};
use narx_select::report::search_space;

fn main() -> narx_select::Result<()> {
    for (ny, nu, ell) in [(2, 2, 1), (2, 2, 2), (2, 2, 3), (3, 3, 3)] {
        let n = candidate_count(ny, nu, ell)?;
        println!("n_y={ny} n_u={nu} ell={ell}: {n} candidates, {}", search_space(n));
    }

    let dict = Dictionary::build(DictionarySpec::default())?;
    println!();
    for (i, term) in dict.terms().iter().enumerate() {
        println!("{i:2}  degree {}  {term}", term.degree());
    }

    // bits 1, 2 and 3 pick y(k-1), y(k-2) and u(k-1)
    let mut bits = vec![false; dict.len()];
    bits[1..4].fill(true);
    let structure = dict.decode(&bits)?;
    println!("\nselected: {}", structure.term_names().join(" + "));

    // with a dead time of 3 the input lags start at u(k-3)
    let delayed = Dictionary::build(DictionarySpec { dead_time: 3, ..DictionarySpec::new(1, 2, 1) })?;
    let names: Vec<String> = delayed.terms().iter().map(ToString::to_string).collect();
    println!("dead time 3: {}", names.join(", "));
    Ok(())
}

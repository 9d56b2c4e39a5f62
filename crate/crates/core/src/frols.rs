//! Forward orthogonal least squares with the error reduction ratio (ERR).
//!
//! Greedy baseline: at each step every remaining candidate is orthogonalized
//! against the already chosen ones (classical Gram-Schmidt) and the one
//! explaining the largest share of the output energy is kept.

use nalgebra::DVector;

use crate::data::Signals;
use crate::dictionary::{Dictionary, ModelStructure};
use crate::error::{Error, Result};
use crate::estimation::least_squares;

/// Candidates whose orthogonalized energy falls below this fraction of their
/// original energy are treated as linearly dependent and skipped.
const DEPENDENCE_TOLERANCE: f64 = 1e-10;

/// Steps whose best ERR is at or below this are not taken.
const MIN_ERR: f64 = 1e-14;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct StopRule {
    /// Hard cap on the number of selected terms.
    pub max_terms: Option<usize>,
    /// Stop once `1 - sum(ERR)` drops below this.
    pub err_threshold: f64,
}

impl Default for StopRule {
    fn default() -> Self {
        Self { max_terms: None, err_threshold: 1e-4 }
    }
}

impl StopRule {
    pub fn terms(n: usize) -> Self {
        Self { max_terms: Some(n), err_threshold: 0.0 }
    }

    pub fn threshold(err_threshold: f64) -> Self {
        Self { max_terms: None, err_threshold }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ErrRanking {
    /// Dictionary indices in selection order.
    pub selected: Vec<usize>,
    /// ERR of each selected term, in selection order.
    pub err_values: Vec<f64>,
    pub cumulative_err: f64,
    /// Least-squares parameters of the selected terms, in selection order.
    pub theta: Vec<f64>,
}

impl ErrRanking {
    pub fn structure(&self, dictionary: &Dictionary) -> Result<ModelStructure> {
        dictionary.structure(&self.selected)
    }

    /// Parameters reordered to match [`ErrRanking::structure`] (dictionary order).
    pub fn theta_in_dictionary_order(&self) -> Vec<f64> {
        let mut pairs: Vec<(usize, f64)> = self.selected.iter().copied().zip(self.theta.iter().copied()).collect();
        pairs.sort_by_key(|&(i, _)| i);
        pairs.into_iter().map(|(_, t)| t).collect()
    }
}

pub fn frols_select(dictionary: &Dictionary, data: Signals<'_>, stop: StopRule) -> Result<ErrRanking> {
    let (p, y) = dictionary.candidate_matrix(data)?;
    let (rows, n_candidates) = p.shape();
    let cap = stop.max_terms.unwrap_or(n_candidates).min(n_candidates);
    if rows <= cap {
        return Err(Error::TooFewRows { rows, params: cap });
    }
    let yy = y.norm_squared();
    if yy == 0.0 {
        return Err(Error::InvalidArgument("output is identically zero".into()));
    }

    let mut chosen_q: Vec<DVector<f64>> = Vec::new();
    let mut selected = Vec::new();
    let mut err_values = Vec::new();
    let mut remaining: Vec<usize> = (0..n_candidates).collect();
    let mut cumulative = 0.0;

    while selected.len() < cap && 1.0 - cumulative >= stop.err_threshold {
        let mut best: Option<(usize, f64, DVector<f64>)> = None;
        for (slot, &c) in remaining.iter().enumerate() {
            let p_c = p.column(c).into_owned();
            let energy = p_c.norm_squared();
            let mut w = p_c.clone();
            for q in &chosen_q {
                w -= q * (p_c.dot(q) / q.norm_squared());
            }
            let ww = w.norm_squared();
            if energy == 0.0 || ww <= DEPENDENCE_TOLERANCE * energy {
                continue;
            }
            let g = y.dot(&w) / ww;
            let err = g * g * ww / yy;
            if best.as_ref().is_none_or(|(_, e, _)| err > *e) {
                best = Some((slot, err, w));
            }
        }
        let Some((slot, err, w)) = best else { break };
        if err <= MIN_ERR {
            break;
        }
        selected.push(remaining.remove(slot));
        err_values.push(err);
        chosen_q.push(w);
        cumulative += err;
    }

    let theta = if selected.is_empty() {
        Vec::new()
    } else {
        let psi = p.select_columns(&selected);
        least_squares(&psi, &y)?.iter().copied().collect()
    };
    Ok(ErrRanking { selected, err_values, cumulative_err: cumulative, theta })
}

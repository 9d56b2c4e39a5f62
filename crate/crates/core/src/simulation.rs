//! One-step-ahead prediction and free-run simulation of estimated models.

use crate::data::Signals;
use crate::dictionary::RegressorTerm;
use crate::error::{Error, Result};
use crate::estimation::EstimatedModel;

/// Free-run outputs beyond this magnitude count as divergence.
pub const DIVERGENCE_BOUND: f64 = 1e6;

#[derive(Debug, Clone, PartialEq)]
pub struct SimulationResult {
    /// Full-length output. Entries before `start` are the measured seed values;
    /// entries after a divergence are NaN.
    pub predicted: Vec<f64>,
    /// First predicted sample (the dictionary max lag).
    pub start: usize,
    pub diverged: bool,
    pub first_invalid_index: Option<usize>,
}

impl SimulationResult {
    /// Predicted samples, seed window excluded.
    pub fn window(&self) -> &[f64] {
        &self.predicted[self.start..]
    }

    /// MSE against measured `y` over the predicted window; `+inf` when diverged.
    pub fn mse(&self, y: &[f64]) -> Result<f64> {
        if y.len() != self.predicted.len() {
            return Err(Error::InvalidArgument(format!(
                "measured series has {} samples, simulation has {}",
                y.len(),
                self.predicted.len()
            )));
        }
        if self.diverged {
            return Ok(f64::INFINITY);
        }
        mse(&y[self.start..], self.window())
    }
}

/// `(1/N) sum (y - yhat)^2`. Non-finite predictions give `+inf`.
pub fn mse(y: &[f64], yhat: &[f64]) -> Result<f64> {
    if y.len() != yhat.len() {
        return Err(Error::InvalidArgument(format!("lengths differ: {} vs {}", y.len(), yhat.len())));
    }
    if y.is_empty() {
        return Err(Error::InvalidArgument("mse of empty series".into()));
    }
    if yhat.iter().any(|v| !v.is_finite()) {
        return Ok(f64::INFINITY);
    }
    let ss: f64 = y.iter().zip(yhat).map(|(a, b)| (a - b) * (a - b)).sum();
    Ok(ss / y.len() as f64)
}

fn check_len(model: &EstimatedModel, data: Signals<'_>) -> Result<usize> {
    let start = model.structure.max_lag();
    if data.len() <= start {
        return Err(Error::InsufficientData { needed: start + 1, got: data.len() });
    }
    Ok(start)
}

#[inline]
fn predict_at(terms: &[RegressorTerm], theta: &[f64], y: &[f64], u: &[f64], k: usize) -> f64 {
    terms.iter().zip(theta).map(|(t, th)| th * t.evaluate(y, u, k)).sum()
}

/// Predicts each sample from measured past outputs and inputs.
pub fn one_step_predict(model: &EstimatedModel, data: Signals<'_>) -> Result<SimulationResult> {
    let start = check_len(model, data)?;
    let terms = model.structure.terms();
    let mut predicted = data.y[..start].to_vec();
    predicted.extend((start..data.len()).map(|k| predict_at(terms, &model.theta, data.y, data.u, k)));
    let first_invalid_index = predicted[start..]
        .iter()
        .position(|v| !v.is_finite() || v.abs() > DIVERGENCE_BOUND)
        .map(|i| i + start);
    Ok(SimulationResult { predicted, start, diverged: first_invalid_index.is_some(), first_invalid_index })
}

/// Recursive simulation fed by the model's own past outputs. The first
/// `max_lag` samples are seeded from the measured output.
pub fn free_run(model: &EstimatedModel, data: Signals<'_>) -> Result<SimulationResult> {
    let start = check_len(model, data)?;
    let terms = model.structure.terms();
    let n = data.len();
    let mut predicted = Vec::with_capacity(n);
    predicted.extend_from_slice(&data.y[..start]);
    let mut first_invalid_index = None;
    for k in start..n {
        // only entries below k are read
        predicted.push(0.0);
        let v = predict_at(terms, &model.theta, &predicted, data.u, k);
        if !v.is_finite() || v.abs() > DIVERGENCE_BOUND {
            first_invalid_index = Some(k);
            predicted.truncate(k);
            predicted.resize(n, f64::NAN);
            break;
        }
        predicted[k] = v;
    }
    Ok(SimulationResult { predicted, start, diverged: first_invalid_index.is_some(), first_invalid_index })
}

//! Penalized free-run cost of a candidate structure.
//!
//! A candidate is decoded, fitted by least squares, tested for regressor
//! relevance and simulated in free run on the identification data. Its cost is
//! the free-run MSE scaled by a sigmoid penalty that grows with the number of
//! terms plus the number of statistically irrelevant terms.

use nalgebra::{DMatrix, DVector};

use crate::bpsogsa::Objective;
use crate::data::Signals;
use crate::dictionary::Dictionary;
use crate::error::{Error, Result};
use crate::estimation::{estimate_from_matrix, EstimatedModel};
use crate::simulation::free_run;

/// Sigmoid penalty `1 / (1 + exp(-a (x - c)))` with `c = noV / 2`,
/// `a = n_terms / c` and `x = n_terms + n_irrelevant`.
pub fn sigmoid_penalty(n_terms: usize, n_irrelevant: usize, n_candidates: usize) -> Result<f64> {
    if n_terms == 0 || n_terms > n_candidates {
        return Err(Error::InvalidArgument(format!(
            "term count {n_terms} must lie in 1..={n_candidates}"
        )));
    }
    if n_irrelevant > n_terms {
        return Err(Error::InvalidArgument(format!(
            "irrelevant count {n_irrelevant} exceeds term count {n_terms}"
        )));
    }
    let c = n_candidates as f64 / 2.0;
    let a = n_terms as f64 / c;
    let x = (n_terms + n_irrelevant) as f64;
    Ok(1.0 / (1.0 + (-a * (x - c)).exp()))
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EvalConfig {
    /// Significance level of the relevance test.
    pub alpha: f64,
    /// Relative numerical resolution. Free-run MSE and residual variance below
    /// `(resolution * rms(y))^2` are treated as that floor.
    pub resolution: f64,
}

impl Default for EvalConfig {
    fn default() -> Self {
        Self { alpha: 0.05, resolution: 1e-9 }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Rejection {
    Empty,
    RankDeficient,
    Diverged,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Fitness {
    /// `mse_free_run * penalty_rho`, or `+inf` for a rejected candidate.
    pub cost: f64,
    pub mse_free_run: f64,
    /// NaN for rejected candidates.
    pub penalty_rho: f64,
    pub n_terms: usize,
    pub n_irrelevant: usize,
    pub model: Option<EstimatedModel>,
    pub rejection: Option<Rejection>,
}

impl Fitness {
    fn rejected(n_terms: usize, why: Rejection) -> Self {
        Self {
            cost: f64::INFINITY,
            mse_free_run: f64::INFINITY,
            penalty_rho: f64::NAN,
            n_terms,
            n_irrelevant: 0,
            model: None,
            rejection: Some(why),
        }
    }

    pub fn is_rejected(&self) -> bool {
        self.rejection.is_some()
    }
}

/// Scores candidates against one dataset. The full candidate matrix is built
/// once and columns are picked per candidate.
#[derive(Debug, Clone)]
pub struct CandidateEvaluator<'a> {
    dictionary: &'a Dictionary,
    data: Signals<'a>,
    candidates: DMatrix<f64>,
    target: DVector<f64>,
    floor: f64,
    config: EvalConfig,
}

impl<'a> CandidateEvaluator<'a> {
    pub fn new(dictionary: &'a Dictionary, data: Signals<'a>, config: EvalConfig) -> Result<Self> {
        let (candidates, target) = dictionary.candidate_matrix(data)?;
        let mean_square = target.norm_squared() / target.len() as f64;
        let floor = config.resolution * config.resolution * mean_square;
        Ok(Self { dictionary, data, candidates, target, floor, config })
    }

    pub fn dictionary(&self) -> &Dictionary {
        self.dictionary
    }

    pub fn config(&self) -> &EvalConfig {
        &self.config
    }

    pub fn evaluate(&self, bits: &[bool]) -> Result<Fitness> {
        let structure = self.dictionary.decode(bits)?;
        let n_terms = structure.len();
        if n_terms == 0 {
            return Ok(Fitness::rejected(0, Rejection::Empty));
        }
        let psi = self.candidates.select_columns(structure.selected());
        let model = match estimate_from_matrix(structure, &psi, &self.target, self.config.alpha, self.floor) {
            Ok(model) => model,
            Err(Error::RankDeficient) | Err(Error::TooFewRows { .. }) => {
                return Ok(Fitness::rejected(n_terms, Rejection::RankDeficient))
            }
            Err(e) => return Err(e),
        };
        let sim = free_run(&model, self.data)?;
        let mse = sim.mse(self.data.y)?;
        if sim.diverged || !mse.is_finite() {
            return Ok(Fitness::rejected(n_terms, Rejection::Diverged));
        }
        let n_irrelevant = model.n_irrelevant();
        let rho = sigmoid_penalty(n_terms, n_irrelevant, self.dictionary.len())?;
        Ok(Fitness {
            cost: mse.max(self.floor) * rho,
            mse_free_run: mse,
            penalty_rho: rho,
            n_terms,
            n_irrelevant,
            model: Some(model),
            rejection: None,
        })
    }
}

impl Objective for CandidateEvaluator<'_> {
    fn dimension(&self) -> usize {
        self.dictionary.len()
    }

    fn cost(&self, bits: &[bool]) -> f64 {
        self.evaluate(bits).map_or(f64::INFINITY, |f| f.cost)
    }
}

/// One-shot evaluation of a single candidate.
pub fn evaluate_candidate(bits: &[bool], dictionary: &Dictionary, data: Signals<'_>, config: EvalConfig) -> Result<Fitness> {
    CandidateEvaluator::new(dictionary, data, config)?.evaluate(bits)
}

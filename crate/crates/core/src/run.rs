//! Identification runs: structure search, baseline selection and replay.

use std::time::Instant;

use serde::{Deserialize, Serialize};

use crate::bpsogsa::{optimize, OptimizerConfig};
use crate::data::{Dataset, Samples};
use crate::dictionary::{Dictionary, DictionarySpec, ModelStructure, RegressorTerm};
use crate::error::{Error, Result};
use crate::estimation::{estimate, EstimatedModel};
use crate::frols::{frols_select, StopRule};
use crate::objective::{sigmoid_penalty, CandidateEvaluator, EvalConfig};
use crate::report::{Method, Report};
use crate::simulation::{free_run, SimulationResult};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct FrolsConfig {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub max_terms: Option<usize>,
    pub err_threshold: f64,
}

impl Default for FrolsConfig {
    fn default() -> Self {
        let stop = StopRule::default();
        Self { max_terms: stop.max_terms, err_threshold: stop.err_threshold }
    }
}

impl From<FrolsConfig> for StopRule {
    fn from(c: FrolsConfig) -> Self {
        StopRule { max_terms: c.max_terms, err_threshold: c.err_threshold }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RunConfig {
    /// Significance level of the relevance test.
    pub p_value: f64,
    /// Fraction of samples used for identification.
    pub split: f64,
    pub normalize: bool,
    /// Relative numerical resolution of the cost (see [`EvalConfig`]).
    pub resolution: f64,
    pub dictionary: DictionarySpec,
    pub optimizer: OptimizerConfig,
    pub frols: FrolsConfig,
}

impl Default for RunConfig {
    fn default() -> Self {
        Self {
            p_value: 0.05,
            split: 0.5,
            normalize: true,
            resolution: EvalConfig::default().resolution,
            dictionary: DictionarySpec::default(),
            optimizer: OptimizerConfig::default(),
            frols: FrolsConfig::default(),
        }
    }
}

impl RunConfig {
    pub fn validate(&self) -> Result<()> {
        self.dictionary.validate()?;
        self.optimizer.validate()?;
        if !(self.p_value > 0.0 && self.p_value < 1.0) {
            return Err(Error::InvalidConfig(format!("p-value {} must lie in (0, 1)", self.p_value)));
        }
        if !(self.split > 0.0 && self.split < 1.0) {
            return Err(Error::InvalidConfig(format!("split {} must lie in (0, 1)", self.split)));
        }
        if !(self.resolution >= 0.0) {
            return Err(Error::InvalidConfig("resolution must be non-negative".into()));
        }
        Ok(())
    }

    pub fn eval_config(&self) -> EvalConfig {
        EvalConfig { alpha: self.p_value, resolution: self.resolution }
    }
}

/// Searches the structure space with the hybrid swarm and reports the winner.
pub fn run_identify(config: &RunConfig, data: &Dataset) -> Result<Report> {
    let started = Instant::now();
    config.validate()?;
    let dictionary = Dictionary::build(config.dictionary)?;
    data.check_lag(dictionary.max_lag())?;

    let evaluator = CandidateEvaluator::new(&dictionary, data.identification(), config.eval_config())?;
    let result = optimize(&evaluator, &config.optimizer)?;
    let fitness = evaluator.evaluate(&result.best_bits)?;
    let model = fitness.model.ok_or(Error::NoValidStructure)?;

    let mse_validation = free_run(&model, data.validation())?.mse(data.validation().y)?;
    let mut report = Report::new(Method::Bpsogsa, config, &dictionary, data, &model);
    report.penalty_rho = fitness.penalty_rho;
    report.cost = fitness.cost;
    report.mse_identification = fitness.mse_free_run;
    report.mse_validation = mse_validation;
    report.convergence = result.curve;
    report.wall_clock_seconds = started.elapsed().as_secs_f64();
    Ok(report)
}

/// Selects a structure by forward orthogonal least squares (ERR).
pub fn run_baseline(config: &RunConfig, data: &Dataset) -> Result<Report> {
    let started = Instant::now();
    config.validate()?;
    let dictionary = Dictionary::build(config.dictionary)?;
    data.check_lag(dictionary.max_lag())?;

    let ranking = frols_select(&dictionary, data.identification(), config.frols.into())?;
    if ranking.selected.is_empty() {
        return Err(Error::NoValidStructure);
    }
    let structure = ranking.structure(&dictionary)?;
    let model = estimate(&structure, data.identification(), config.p_value)?;
    let mse_identification = free_run(&model, data.identification())?.mse(data.identification().y)?;
    let mse_validation = free_run(&model, data.validation())?.mse(data.validation().y)?;
    let rho = sigmoid_penalty(model.n_params, model.n_irrelevant(), dictionary.len())?;

    let mut report = Report::new(Method::Frols, config, &dictionary, data, &model);
    report.penalty_rho = rho;
    report.cost = mse_identification * rho;
    report.mse_identification = mse_identification;
    report.mse_validation = mse_validation;
    // ERR values listed against the dictionary-ordered terms
    let mut err = vec![0.0; ranking.selected.len()];
    for (&idx, &e) in ranking.selected.iter().zip(&ranking.err_values) {
        let pos = structure.selected().iter().position(|&s| s == idx).expect("selected term");
        err[pos] = e;
    }
    report.err_values = err;
    report.wall_clock_seconds = started.elapsed().as_secs_f64();
    Ok(report)
}

/// Free-run output of a reported model on both splits of a dataset.
#[derive(Debug, Clone, PartialEq)]
pub struct Replay {
    pub identification: SimulationResult,
    pub validation: SimulationResult,
    pub mse_identification: f64,
    pub mse_validation: f64,
}

/// Rebuilds the reported model and simulates it on raw samples, applying the
/// report's split and normalization.
pub fn replay_report(report: &Report, samples: Samples) -> Result<Replay> {
    let mut data = Dataset::new(samples, report.split_index)?;
    if let Some(stats) = report.normalization {
        data = data.with_normalization(stats);
    }
    let model = report.model()?;
    data.check_lag(model.structure.max_lag())?;
    let identification = free_run(&model, data.identification())?;
    let validation = free_run(&model, data.validation())?;
    Ok(Replay {
        mse_identification: identification.mse(data.identification().y)?,
        mse_validation: validation.mse(data.validation().y)?,
        identification,
        validation,
    })
}

impl Report {
    /// The estimated model described by this report.
    pub fn model(&self) -> Result<EstimatedModel> {
        let terms = self
            .terms
            .iter()
            .map(|t| t.parse::<RegressorTerm>())
            .collect::<Result<Vec<_>>>()?;
        let m = terms.len();
        if [self.theta.len(), self.std_errors.len(), self.relevant.len()].iter().any(|&l| l != m) {
            return Err(Error::Report("term, theta, std_error and relevance lists differ in length".into()));
        }
        let structure = ModelStructure::from_terms(
            terms,
            self.term_indices.clone(),
            self.n_candidates,
            self.config.dictionary.max_lag(),
        )?;
        Ok(EstimatedModel {
            structure,
            theta: self.theta.clone(),
            residual_variance: self.residual_variance,
            param_variances: self.std_errors.iter().map(|s| s * s).collect(),
            std_errors: self.std_errors.clone(),
            relevant: self.relevant.clone(),
            n_rows: self.n_rows,
            n_params: m,
        })
    }
}

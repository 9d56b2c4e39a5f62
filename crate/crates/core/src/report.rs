//! Run reports and convergence curves.
//!
//! A report is a TOML document. Every float is written with 17 significant
//! digits so that a report parses back to bit-identical values.

use std::fmt::Write as _;
use std::io::Write;
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::data::{Dataset, Normalization};
use crate::dictionary::Dictionary;
use crate::error::{Error, Result};
use crate::estimation::EstimatedModel;
use crate::run::RunConfig;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Method {
    Bpsogsa,
    Frols,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Report {
    pub method: Method,
    pub terms: Vec<String>,
    pub term_indices: Vec<usize>,
    pub theta: Vec<f64>,
    pub std_errors: Vec<f64>,
    pub relevant: Vec<bool>,
    pub n_irrelevant: usize,
    pub residual_variance: f64,
    pub penalty_rho: f64,
    pub cost: f64,
    pub mse_identification: f64,
    pub mse_validation: f64,
    pub n_candidates: usize,
    pub search_space: String,
    pub data_rows: usize,
    pub split_index: usize,
    /// Regression rows used for estimation.
    pub n_rows: usize,
    pub validation_out_of_range: bool,
    #[serde(with = "seed_string")]
    pub seed: u64,
    pub wall_clock_seconds: f64,
    /// Global-best cost per iteration (empty for the ERR baseline).
    pub convergence: Vec<f64>,
    /// ERR of each term (empty for the swarm search).
    pub err_values: Vec<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub normalization: Option<Normalization>,
    pub config: RunConfig,
}

impl Report {
    pub(crate) fn new(method: Method, config: &RunConfig, dictionary: &Dictionary, data: &Dataset, model: &EstimatedModel) -> Self {
        Self {
            method,
            terms: model.structure.term_names(),
            term_indices: model.structure.selected().to_vec(),
            theta: model.theta.clone(),
            std_errors: model.std_errors.clone(),
            relevant: model.relevant.clone(),
            n_irrelevant: model.n_irrelevant(),
            residual_variance: model.residual_variance,
            penalty_rho: f64::NAN,
            cost: f64::NAN,
            mse_identification: f64::NAN,
            mse_validation: f64::NAN,
            n_candidates: dictionary.len(),
            search_space: search_space(dictionary.len()),
            data_rows: data.len(),
            split_index: data.split_index(),
            n_rows: model.n_rows,
            validation_out_of_range: data.validation_out_of_range(),
            seed: config.optimizer.seed,
            wall_clock_seconds: 0.0,
            convergence: Vec::new(),
            err_values: Vec::new(),
            normalization: data.normalization(),
            config: *config,
        }
    }

    pub fn to_toml_string(&self) -> String {
        let value = toml::Value::try_from(self).expect("report serializes to a table");
        let toml::Value::Table(table) = value else { unreachable!("report is a struct") };
        let mut out = String::new();
        emit_table(&mut out, &mut Vec::new(), &table);
        out
    }

    pub fn from_toml_str(s: &str) -> Result<Self> {
        toml::from_str(s).map_err(|e| Error::Report(e.to_string()))
    }

    pub fn save(&self, path: impl AsRef<Path>) -> Result<()> {
        let path = path.as_ref();
        std::fs::write(path, self.to_toml_string()).map_err(|source| Error::Io { path: path.to_path_buf(), source })
    }

    pub fn load(path: impl AsRef<Path>) -> Result<Self> {
        let path = path.as_ref();
        let text = std::fs::read_to_string(path).map_err(|source| Error::Io { path: path.to_path_buf(), source })?;
        Self::from_toml_str(&text)
    }

    /// Two-column `iteration,gbest_cost` CSV of the convergence curve.
    pub fn write_convergence<W: Write>(&self, mut writer: W) -> std::io::Result<()> {
        writeln!(writer, "iteration,gbest_cost")?;
        for (i, c) in self.convergence.iter().enumerate() {
            writeln!(writer, "{},{}", i + 1, fmt_float(*c))?;
        }
        Ok(())
    }

    pub fn save_convergence(&self, path: impl AsRef<Path>) -> Result<()> {
        let path = path.as_ref();
        let io = |source| Error::Io { path: path.to_path_buf(), source };
        let mut buf = Vec::new();
        self.write_convergence(&mut buf).map_err(io)?;
        std::fs::write(path, buf).map_err(io)
    }
}

/// `"2^n = value"` when the value fits in 128 bits, `"2^n"` otherwise.
pub fn search_space(n_candidates: usize) -> String {
    match 1u128.checked_shl(n_candidates as u32).filter(|_| n_candidates < 128) {
        Some(v) => format!("2^{n_candidates} = {v}"),
        None => format!("2^{n_candidates}"),
    }
}

/// 17 significant digits; `inf`/`nan` spelled the TOML way.
pub fn fmt_float(x: f64) -> String {
    if x.is_nan() {
        "nan".into()
    } else if x.is_infinite() {
        if x > 0.0 { "inf".into() } else { "-inf".into() }
    } else {
        format!("{x:.16e}")
    }
}

fn fmt_value(v: &toml::Value) -> String {
    match v {
        toml::Value::Float(f) => fmt_float(*f),
        toml::Value::Array(items) => {
            let inner: Vec<String> = items.iter().map(fmt_value).collect();
            format!("[{}]", inner.join(", "))
        }
        other => other.to_string(),
    }
}

fn emit_table(out: &mut String, path: &mut Vec<String>, table: &toml::Table) {
    for (k, v) in table.iter().filter(|(_, v)| !v.is_table()) {
        let _ = writeln!(out, "{k} = {}", fmt_value(v));
    }
    for (k, v) in table.iter() {
        if let toml::Value::Table(sub) = v {
            path.push(k.clone());
            let _ = writeln!(out, "\n[{}]", path.join("."));
            emit_table(out, path, sub);
            path.pop();
        }
    }
}

/// Seeds are written as strings: TOML integers stop at `i64::MAX`.
pub(crate) mod seed_string {
    use serde::{Deserialize, Deserializer, Serializer};

    pub fn serialize<S: Serializer>(seed: &u64, s: S) -> Result<S::Ok, S::Error> {
        s.collect_str(seed)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<u64, D::Error> {
        String::deserialize(d)?.parse().map_err(serde::de::Error::custom)
    }
}

//! Structure selection for polynomial NARX models.
//!
//! The crate builds the candidate regressor universe for a polynomial NARX
//! model, scores candidate structures by free-run simulation error times a
//! sigmoid penalty on model size and statistically irrelevant regressors, and
//! searches the structure space with a binary hybrid particle-swarm /
//! gravitational-search optimizer. A forward orthogonal least-squares (ERR)
//! selector is included as a baseline.
//!
//! ```no_run
//! use narx_select::{data::Dataset, run::{run_identify, RunConfig}};
//!
//! let samples = narx_select::data::load_csv("data.csv", true).unwrap();
//! let config = RunConfig::default();
//! let data = Dataset::prepare(samples, &config).unwrap();
//! let report = run_identify(&config, &data).unwrap();
//! println!("{}", report.to_toml_string());
//! ```

pub mod bpsogsa;
pub mod data;
pub mod dictionary;
pub mod error;
pub mod estimation;
pub mod frols;
pub mod objective;
pub mod report;
pub mod run;
pub mod simulation;
pub mod synthetic;

pub use error::{Error, Result};

//! Input/output sample storage, CSV ingestion, normalization and splitting.

use std::fs::File;
use std::io::{Read, Write};
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Minimum number of samples a dataset must hold.
pub const MIN_ROWS: usize = 10;

/// Borrowed view of paired input/output sequences.
#[derive(Debug, Clone, Copy)]
pub struct Signals<'a> {
    pub u: &'a [f64],
    pub y: &'a [f64],
}

impl<'a> Signals<'a> {
    pub fn new(u: &'a [f64], y: &'a [f64]) -> Self {
        assert_eq!(u.len(), y.len(), "input and output lengths differ");
        Self { u, y }
    }

    pub fn len(&self) -> usize {
        self.y.len()
    }

    pub fn is_empty(&self) -> bool {
        self.y.is_empty()
    }
}

/// Raw samples in file order.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct Samples {
    pub u: Vec<f64>,
    pub y: Vec<f64>,
}

impl Samples {
    pub fn new(u: Vec<f64>, y: Vec<f64>) -> Result<Self> {
        if u.len() != y.len() {
            return Err(Error::InvalidArgument(format!(
                "input has {} samples, output has {}",
                u.len(),
                y.len()
            )));
        }
        Ok(Self { u, y })
    }

    pub fn len(&self) -> usize {
        self.y.len()
    }

    pub fn is_empty(&self) -> bool {
        self.y.is_empty()
    }

    pub fn signals(&self) -> Signals<'_> {
        Signals::new(&self.u, &self.y)
    }
}

/// Min-max scaling statistics per channel.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Normalization {
    pub u_min: f64,
    pub u_max: f64,
    pub y_min: f64,
    pub y_max: f64,
}

impl Normalization {
    fn fit(u: &[f64], y: &[f64]) -> Result<Self> {
        let (u_min, u_max) = min_max(u);
        let (y_min, y_max) = min_max(y);
        if u_max <= u_min {
            return Err(Error::ConstantChannel("u"));
        }
        if y_max <= y_min {
            return Err(Error::ConstantChannel("y"));
        }
        Ok(Self { u_min, u_max, y_min, y_max })
    }

    fn scale(v: f64, min: f64, max: f64) -> f64 {
        (v - min) / (max - min)
    }

    fn unscale(v: f64, min: f64, max: f64) -> f64 {
        v * (max - min) + min
    }

    pub fn apply(&self, samples: &Samples) -> Samples {
        Samples {
            u: samples.u.iter().map(|&v| Self::scale(v, self.u_min, self.u_max)).collect(),
            y: samples.y.iter().map(|&v| Self::scale(v, self.y_min, self.y_max)).collect(),
        }
    }

    pub fn invert(&self, samples: &Samples) -> Samples {
        Samples {
            u: samples.u.iter().map(|&v| Self::unscale(v, self.u_min, self.u_max)).collect(),
            y: samples.y.iter().map(|&v| Self::unscale(v, self.y_min, self.y_max)).collect(),
        }
    }
}

fn min_max(v: &[f64]) -> (f64, f64) {
    v.iter().fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), &x| (lo.min(x), hi.max(x)))
}

/// Samples split into an identification prefix and a validation suffix.
#[derive(Debug, Clone, PartialEq)]
pub struct Dataset {
    samples: Samples,
    normalization: Option<Normalization>,
    split_index: usize,
}

impl Dataset {
    pub fn new(samples: Samples, split_index: usize) -> Result<Self> {
        if samples.len() < MIN_ROWS {
            return Err(Error::InsufficientData { needed: MIN_ROWS, got: samples.len() });
        }
        if split_index == 0 || split_index >= samples.len() {
            return Err(Error::InvalidArgument(format!(
                "split index {split_index} must lie strictly inside 0..{}",
                samples.len()
            )));
        }
        Ok(Self { samples, normalization: None, split_index })
    }

    /// Splits at `floor(len * fraction)`.
    pub fn with_split_fraction(samples: Samples, fraction: f64) -> Result<Self> {
        if !(fraction > 0.0 && fraction < 1.0) {
            return Err(Error::InvalidArgument(format!("split fraction {fraction} must lie in (0, 1)")));
        }
        let split = (samples.len() as f64 * fraction).floor() as usize;
        Self::new(samples, split)
    }

    /// Splits by the configured fraction and normalizes when requested.
    pub fn prepare(samples: Samples, config: &crate::run::RunConfig) -> Result<Self> {
        let data = Self::with_split_fraction(samples, config.split)?;
        if config.normalize {
            data.normalize()
        } else {
            Ok(data)
        }
    }

    /// Min-max scales each channel to [0, 1] using identification-split
    /// statistics, applied to both splits.
    pub fn normalize(&self) -> Result<Self> {
        let id = self.identification();
        let stats = Normalization::fit(id.u, id.y)?;
        Ok(self.with_normalization(stats))
    }

    /// Applies previously fitted statistics.
    pub fn with_normalization(&self, stats: Normalization) -> Self {
        let samples = stats.apply(&self.samples);
        let combined = match self.normalization {
            // scaling an already scaled dataset composes the two maps
            Some(prev) => Normalization {
                u_min: Normalization::unscale(stats.u_min, prev.u_min, prev.u_max),
                u_max: Normalization::unscale(stats.u_max, prev.u_min, prev.u_max),
                y_min: Normalization::unscale(stats.y_min, prev.y_min, prev.y_max),
                y_max: Normalization::unscale(stats.y_max, prev.y_min, prev.y_max),
            },
            None => stats,
        };
        Self { samples, normalization: Some(combined), split_index: self.split_index }
    }

    /// Maps the samples back to physical units.
    pub fn denormalize(&self) -> Self {
        match self.normalization {
            Some(stats) => Self { samples: stats.invert(&self.samples), normalization: None, split_index: self.split_index },
            None => self.clone(),
        }
    }

    pub fn samples(&self) -> &Samples {
        &self.samples
    }

    pub fn normalization(&self) -> Option<Normalization> {
        self.normalization
    }

    pub fn split_index(&self) -> usize {
        self.split_index
    }

    pub fn len(&self) -> usize {
        self.samples.len()
    }

    pub fn is_empty(&self) -> bool {
        self.samples.is_empty()
    }

    pub fn all(&self) -> Signals<'_> {
        self.samples.signals()
    }

    pub fn identification(&self) -> Signals<'_> {
        Signals::new(&self.samples.u[..self.split_index], &self.samples.y[..self.split_index])
    }

    pub fn validation(&self) -> Signals<'_> {
        Signals::new(&self.samples.u[self.split_index..], &self.samples.y[self.split_index..])
    }

    /// Checks both splits leave room for at least two regression rows.
    pub fn check_lag(&self, max_lag: usize) -> Result<()> {
        let shortest = self.split_index.min(self.len() - self.split_index);
        if shortest < max_lag + 2 {
            return Err(Error::InsufficientData { needed: max_lag + 2, got: shortest });
        }
        Ok(())
    }

    /// True when normalized validation samples fall outside [0, 1].
    pub fn validation_out_of_range(&self) -> bool {
        if self.normalization.is_none() {
            return false;
        }
        let v = self.validation();
        v.u.iter().chain(v.y).any(|&x| !(0.0..=1.0).contains(&x))
    }
}

/// Reads a two-column `u,y` CSV. With `has_header`, columns are located by
/// name; otherwise the first column is `u` and the second `y`.
pub fn read_csv<R: Read>(reader: R, has_header: bool) -> Result<Samples> {
    let mut rdr = csv::ReaderBuilder::new()
        .has_headers(has_header)
        .flexible(true)
        .trim(csv::Trim::All)
        .from_reader(reader);

    let (u_col, y_col) = if has_header {
        let headers = rdr.headers().map_err(|e| Error::Csv { row: 1, message: e.to_string() })?;
        let find = |name: &str| {
            headers
                .iter()
                .position(|h| h.eq_ignore_ascii_case(name))
                .ok_or_else(|| Error::Csv { row: 1, message: format!("missing `{name}` column") })
        };
        let cols = (find("u")?, find("y")?);
        if headers.len() != 2 {
            return Err(Error::Csv { row: 1, message: format!("expected 2 columns, found {}", headers.len()) });
        }
        cols
    } else {
        (0, 1)
    };

    let mut samples = Samples::default();
    for record in rdr.records() {
        let record = record.map_err(|e| Error::Csv {
            row: e.position().map_or(0, |p| p.line() as usize),
            message: e.to_string(),
        })?;
        let row = record.position().map_or(0, |p| p.line() as usize);
        if record.len() != 2 {
            return Err(Error::Csv { row, message: format!("expected 2 columns, found {}", record.len()) });
        }
        let cell = |col: usize| -> Result<f64> {
            let raw = &record[col];
            let v: f64 = raw
                .parse()
                .map_err(|_| Error::Csv { row, message: format!("non-numeric value `{raw}`") })?;
            if !v.is_finite() {
                return Err(Error::Csv { row, message: format!("non-finite value `{raw}`") });
            }
            Ok(v)
        };
        samples.u.push(cell(u_col)?);
        samples.y.push(cell(y_col)?);
    }
    Ok(samples)
}

pub fn load_csv(path: impl AsRef<Path>, has_header: bool) -> Result<Samples> {
    let path = path.as_ref();
    let file = File::open(path).map_err(|source| Error::Io { path: path.to_path_buf(), source })?;
    read_csv(file, has_header)
}

/// Writes samples with a `u,y` header and 17 significant digits.
pub fn write_csv<W: Write>(mut writer: W, samples: &Samples) -> std::io::Result<()> {
    writeln!(writer, "u,y")?;
    for (u, y) in samples.u.iter().zip(&samples.y) {
        writeln!(writer, "{u:.16e},{y:.16e}")?;
    }
    Ok(())
}

pub fn save_csv(path: impl AsRef<Path>, samples: &Samples) -> Result<()> {
    let path = path.as_ref();
    let io = |source| Error::Io { path: path.to_path_buf(), source };
    let mut file = std::io::BufWriter::new(File::create(path).map_err(io)?);
    write_csv(&mut file, samples).map_err(io)?;
    file.flush().map_err(io)
}

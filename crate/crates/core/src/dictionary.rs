//! Candidate regressor universe for polynomial NARX models.
//!
//! A [`Dictionary`] enumerates every monomial of lagged outputs and inputs up
//! to the degree of nonlinearity, plus the constant term. Candidate model
//! structures are bit vectors over this ordered list.

use std::cmp::Ordering;
use std::fmt;
use std::str::FromStr;

use nalgebra::{DMatrix, DVector};
use serde::{Deserialize, Serialize};

use crate::data::Signals;
use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct DictionarySpec {
    /// Maximum output lag.
    pub n_y: usize,
    /// Number of input lags, starting at `dead_time`.
    pub n_u: usize,
    pub dead_time: usize,
    /// Degree of nonlinearity.
    pub ell: usize,
    pub include_constant: bool,
}

impl Default for DictionarySpec {
    fn default() -> Self {
        Self { n_y: 2, n_u: 2, dead_time: 1, ell: 2, include_constant: true }
    }
}

impl DictionarySpec {
    pub fn new(n_y: usize, n_u: usize, ell: usize) -> Self {
        Self { n_y, n_u, dead_time: 1, ell, include_constant: true }
    }

    pub fn validate(&self) -> Result<()> {
        if self.ell < 1 {
            return Err(Error::InvalidSpec("degree of nonlinearity must be at least 1".into()));
        }
        if self.n_y + self.n_u == 0 {
            return Err(Error::InvalidSpec("n_y + n_u must be at least 1".into()));
        }
        if self.dead_time < 1 {
            return Err(Error::InvalidSpec("dead time must be at least 1".into()));
        }
        Ok(())
    }

    /// Largest lag any candidate can reference.
    pub fn max_lag(&self) -> usize {
        let input = if self.n_u > 0 { self.dead_time + self.n_u - 1 } else { 0 };
        self.n_y.max(input)
    }

    /// Lagged signals in canonical order: outputs by lag, then inputs by lag.
    fn base_factors(&self) -> Vec<Factor> {
        let outputs = (1..=self.n_y).map(Factor::output);
        let inputs = (self.dead_time..self.dead_time + self.n_u).map(Factor::input);
        outputs.chain(inputs).collect()
    }
}

/// Number of candidate terms `M + 1` for the given lags and degree, where
/// `M = sum_{i=1..ell} n_i` and `n_i = n_{i-1} (n_y + n_u + i - 1) / i`.
pub fn candidate_count(n_y: usize, n_u: usize, ell: usize) -> Result<usize> {
    if ell < 1 {
        return Err(Error::InvalidSpec("degree of nonlinearity must be at least 1".into()));
    }
    if n_y + n_u == 0 {
        return Err(Error::InvalidSpec("n_y + n_u must be at least 1".into()));
    }
    let mut n_i: usize = 1;
    let mut total: usize = 0;
    for i in 1..=ell {
        // exact: n_{i-1} * (n + i - 1) is always divisible by i
        n_i = n_i * (n_y + n_u + i - 1) / i;
        total += n_i;
    }
    Ok(total + 1)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum Signal {
    Output,
    Input,
}

/// One lagged signal inside a monomial.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct Factor {
    pub signal: Signal,
    pub lag: usize,
}

impl Factor {
    pub fn output(lag: usize) -> Self {
        Self { signal: Signal::Output, lag }
    }

    pub fn input(lag: usize) -> Self {
        Self { signal: Signal::Input, lag }
    }
}

impl fmt::Display for Factor {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let name = match self.signal {
            Signal::Output => 'y',
            Signal::Input => 'u',
        };
        write!(f, "{name}(k-{})", self.lag)
    }
}

impl FromStr for Factor {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let err = || Error::TermParse(s.to_string());
        let s = s.trim();
        let (signal, rest) = if let Some(rest) = s.strip_prefix("y(k-") {
            (Signal::Output, rest)
        } else if let Some(rest) = s.strip_prefix("u(k-") {
            (Signal::Input, rest)
        } else {
            return Err(err());
        };
        let lag: usize = rest.strip_suffix(')').ok_or_else(err)?.parse().map_err(|_| err())?;
        if lag == 0 {
            return Err(err());
        }
        Ok(Self { signal, lag })
    }
}

/// A monomial of lagged signals. No factors means the constant term.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Default)]
pub struct RegressorTerm {
    factors: Vec<Factor>,
}

impl RegressorTerm {
    pub fn constant() -> Self {
        Self::default()
    }

    pub fn new(mut factors: Vec<Factor>) -> Self {
        factors.sort();
        Self { factors }
    }

    pub fn factors(&self) -> &[Factor] {
        &self.factors
    }

    pub fn degree(&self) -> usize {
        self.factors.len()
    }

    pub fn is_constant(&self) -> bool {
        self.factors.is_empty()
    }

    pub fn max_lag(&self) -> usize {
        self.factors.iter().map(|f| f.lag).max().unwrap_or(0)
    }

    /// Value of the monomial at sample `k`, reading outputs from `y` and inputs
    /// from `u`. Caller guarantees `k >= max_lag()`.
    #[inline]
    pub fn evaluate(&self, y: &[f64], u: &[f64], k: usize) -> f64 {
        self.factors.iter().fold(1.0, |acc, f| {
            acc * match f.signal {
                Signal::Output => y[k - f.lag],
                Signal::Input => u[k - f.lag],
            }
        })
    }
}

impl Ord for RegressorTerm {
    fn cmp(&self, other: &Self) -> Ordering {
        self.degree().cmp(&other.degree()).then_with(|| self.factors.cmp(&other.factors))
    }
}

impl PartialOrd for RegressorTerm {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for RegressorTerm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.factors.is_empty() {
            return f.write_str("1");
        }
        for (i, factor) in self.factors.iter().enumerate() {
            if i > 0 {
                f.write_str("*")?;
            }
            write!(f, "{factor}")?;
        }
        Ok(())
    }
}

impl FromStr for RegressorTerm {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        if s.trim() == "1" {
            return Ok(Self::constant());
        }
        let factors = s.split('*').map(str::parse).collect::<Result<Vec<Factor>>>()?;
        Ok(Self::new(factors))
    }
}

impl Serialize for RegressorTerm {
    fn serialize<S: serde::Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        serializer.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for RegressorTerm {
    fn deserialize<D: serde::Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        let s = String::deserialize(deserializer)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

/// The ordered candidate universe. Constant first, then ascending degree,
/// lexicographic on the canonical factor list within a degree.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Dictionary {
    spec: DictionarySpec,
    terms: Vec<RegressorTerm>,
}

impl Dictionary {
    pub fn build(spec: DictionarySpec) -> Result<Self> {
        spec.validate()?;
        let base = spec.base_factors();
        let mut terms = Vec::new();
        if spec.include_constant {
            terms.push(RegressorTerm::constant());
        }
        for degree in 1..=spec.ell {
            // non-decreasing index tuples enumerate multisets in lexicographic order
            let mut idx = vec![0usize; degree];
            loop {
                terms.push(RegressorTerm { factors: idx.iter().map(|&i| base[i]).collect() });
                let Some(pos) = (0..degree).rev().find(|&p| idx[p] + 1 < base.len()) else {
                    break;
                };
                let next = idx[pos] + 1;
                idx[pos..].iter_mut().for_each(|i| *i = next);
            }
        }
        Ok(Self { spec, terms })
    }

    pub fn spec(&self) -> &DictionarySpec {
        &self.spec
    }

    pub fn terms(&self) -> &[RegressorTerm] {
        &self.terms
    }

    /// Number of candidate terms (`noV`).
    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn max_lag(&self) -> usize {
        self.spec.max_lag()
    }

    pub fn position(&self, term: &RegressorTerm) -> Option<usize> {
        self.terms.iter().position(|t| t == term)
    }

    /// Maps a bit vector onto the structure it encodes.
    pub fn decode(&self, bits: &[bool]) -> Result<ModelStructure> {
        if bits.len() != self.len() {
            return Err(Error::LengthMismatch { expected: self.len(), actual: bits.len() });
        }
        let selected = bits.iter().enumerate().filter_map(|(i, &b)| b.then_some(i)).collect();
        Ok(self.structure_from_indices(selected))
    }

    /// Builds a structure from term indices. Indices are sorted and deduplicated.
    pub fn structure(&self, indices: &[usize]) -> Result<ModelStructure> {
        let mut selected = indices.to_vec();
        selected.sort_unstable();
        selected.dedup();
        if let Some(&bad) = selected.iter().find(|&&i| i >= self.len()) {
            return Err(Error::InvalidArgument(format!(
                "term index {bad} out of range for {} candidates",
                self.len()
            )));
        }
        Ok(self.structure_from_indices(selected))
    }

    /// Builds a structure from the given terms, which must all be in the dictionary.
    pub fn structure_from_terms(&self, terms: &[RegressorTerm]) -> Result<ModelStructure> {
        let indices = terms
            .iter()
            .map(|t| {
                self.position(t)
                    .ok_or_else(|| Error::InvalidArgument(format!("term {t} is not in the dictionary")))
            })
            .collect::<Result<Vec<_>>>()?;
        self.structure(&indices)
    }

    fn structure_from_indices(&self, selected: Vec<usize>) -> ModelStructure {
        let mut bits = vec![false; self.len()];
        selected.iter().for_each(|&i| bits[i] = true);
        ModelStructure {
            terms: selected.iter().map(|&i| self.terms[i].clone()).collect(),
            selected,
            bits,
            max_lag: self.max_lag(),
        }
    }

    /// Every candidate column evaluated on `data`, rows starting at the
    /// dictionary's max lag.
    pub fn candidate_matrix(&self, data: Signals<'_>) -> Result<(DMatrix<f64>, DVector<f64>)> {
        regressor_matrix(&self.terms, self.max_lag(), data)
    }
}

/// A selected subset of dictionary terms.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ModelStructure {
    selected: Vec<usize>,
    bits: Vec<bool>,
    terms: Vec<RegressorTerm>,
    max_lag: usize,
}

impl ModelStructure {
    /// Builds a structure directly from terms, without a dictionary. Used when
    /// replaying a saved model.
    pub fn from_terms(terms: Vec<RegressorTerm>, indices: Vec<usize>, n_candidates: usize, max_lag: usize) -> Result<Self> {
        if terms.len() != indices.len() {
            return Err(Error::InvalidArgument("terms and indices differ in length".into()));
        }
        if indices.windows(2).any(|w| w[0] >= w[1]) || indices.iter().any(|&i| i >= n_candidates) {
            return Err(Error::InvalidArgument("indices must be strictly increasing and in range".into()));
        }
        if terms.iter().any(|t| t.max_lag() > max_lag) {
            return Err(Error::InvalidArgument("term lag exceeds the maximum lag".into()));
        }
        let mut bits = vec![false; n_candidates];
        indices.iter().for_each(|&i| bits[i] = true);
        Ok(Self { selected: indices, bits, terms, max_lag })
    }

    pub fn selected(&self) -> &[usize] {
        &self.selected
    }

    pub fn bits(&self) -> &[bool] {
        &self.bits
    }

    pub fn terms(&self) -> &[RegressorTerm] {
        &self.terms
    }

    pub fn len(&self) -> usize {
        self.selected.len()
    }

    pub fn is_empty(&self) -> bool {
        self.selected.is_empty()
    }

    /// The dictionary's max lag; the first simulated/regressed sample.
    pub fn max_lag(&self) -> usize {
        self.max_lag
    }

    pub fn term_names(&self) -> Vec<String> {
        self.terms.iter().map(ToString::to_string).collect()
    }
}

/// Regression matrix and target for a structure. One row per sample from the
/// dictionary max lag onward, one column per selected term.
pub fn build_regressor_matrix(structure: &ModelStructure, data: Signals<'_>) -> Result<(DMatrix<f64>, DVector<f64>)> {
    if structure.is_empty() {
        return Err(Error::EmptyStructure);
    }
    regressor_matrix(structure.terms(), structure.max_lag(), data)
}

fn regressor_matrix(terms: &[RegressorTerm], max_lag: usize, data: Signals<'_>) -> Result<(DMatrix<f64>, DVector<f64>)> {
    let n = data.len();
    if n < max_lag + 2 {
        return Err(Error::InsufficientData { needed: max_lag + 2, got: n });
    }
    let rows = n - max_lag;
    let psi = DMatrix::from_fn(rows, terms.len(), |r, c| terms[c].evaluate(data.y, data.u, r + max_lag));
    let target = DVector::from_column_slice(&data.y[max_lag..]);
    Ok((psi, target))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn names(dict: &Dictionary) -> Vec<String> {
        dict.terms().iter().map(ToString::to_string).collect()
    }

    #[test]
    fn counts_match_closed_form() {
        assert_eq!(candidate_count(2, 2, 1).unwrap(), 5);
        assert_eq!(candidate_count(2, 2, 2).unwrap(), 15);
        assert_eq!(candidate_count(3, 3, 3).unwrap(), 84);
        assert_eq!(candidate_count(2, 2, 3).unwrap(), 35);
        assert!(candidate_count(2, 2, 0).is_err());
        assert!(candidate_count(0, 0, 2).is_err());
    }

    #[test]
    fn linear_dictionary_order() {
        let dict = Dictionary::build(DictionarySpec::new(2, 2, 1)).unwrap();
        assert_eq!(names(&dict), ["1", "y(k-1)", "y(k-2)", "u(k-1)", "u(k-2)"]);
    }

    #[test]
    fn smallest_dictionary() {
        let dict = Dictionary::build(DictionarySpec::new(1, 0, 1)).unwrap();
        assert_eq!(names(&dict), ["1", "y(k-1)"]);
    }

    #[test]
    fn quadratic_dictionary_has_ten_cross_terms() {
        let dict = Dictionary::build(DictionarySpec::new(2, 2, 2)).unwrap();
        assert_eq!(dict.len(), 15);
        assert_eq!(dict.terms().iter().filter(|t| t.degree() == 2).count(), 10);
        let mut sorted = dict.terms().to_vec();
        sorted.sort();
        assert_eq!(sorted, dict.terms());
    }

    #[test]
    fn no_constant_drops_one() {
        let spec = DictionarySpec { include_constant: false, ..DictionarySpec::new(2, 2, 2) };
        let dict = Dictionary::build(spec).unwrap();
        assert_eq!(dict.len(), 14);
        assert!(dict.terms().iter().all(|t| !t.is_constant()));
    }

    #[test]
    fn dead_time_shifts_input_lags() {
        let spec = DictionarySpec { dead_time: 3, ..DictionarySpec::new(1, 2, 1) };
        let dict = Dictionary::build(spec).unwrap();
        assert_eq!(names(&dict), ["1", "y(k-1)", "u(k-3)", "u(k-4)"]);
        assert_eq!(dict.max_lag(), 4);
    }

    #[test]
    fn decode_picks_set_bits() {
        let dict = Dictionary::build(DictionarySpec::new(2, 2, 1)).unwrap();
        let s = dict.decode(&[false, true, false, false, true]).unwrap();
        assert_eq!(s.selected(), [1, 4]);
        assert_eq!(s.term_names(), ["y(k-1)", "u(k-2)"]);

        assert!(dict.decode(&[false; 5]).unwrap().is_empty());
        assert_eq!(dict.decode(&[true; 5]).unwrap().len(), 5);
        assert!(matches!(dict.decode(&[true; 4]), Err(Error::LengthMismatch { .. })));
    }

    #[test]
    fn term_names_parse_back() {
        let dict = Dictionary::build(DictionarySpec::new(2, 2, 3)).unwrap();
        for term in dict.terms() {
            let parsed: RegressorTerm = term.to_string().parse().unwrap();
            assert_eq!(&parsed, term);
        }
        assert!("x(k-1)".parse::<RegressorTerm>().is_err());
        assert!("y(k-0)".parse::<RegressorTerm>().is_err());
        assert!("y(k-1)*".parse::<RegressorTerm>().is_err());
    }

    #[test]
    fn single_lag_matrix() {
        let dict = Dictionary::build(DictionarySpec::new(1, 0, 1)).unwrap();
        let s = dict.structure(&[1]).unwrap();
        let y = [1.0, 2.0, 3.0, 4.0];
        let u = [0.0; 4];
        let (psi, target) = build_regressor_matrix(&s, Signals::new(&u, &y)).unwrap();
        assert_eq!(psi.as_slice(), [1.0, 2.0, 3.0]);
        assert_eq!(target.as_slice(), [2.0, 3.0, 4.0]);

        let (ones, _) = build_regressor_matrix(&dict.structure(&[0]).unwrap(), Signals::new(&u, &y)).unwrap();
        assert!(ones.iter().all(|&v| v == 1.0));
    }

    #[test]
    fn cross_product_matrix() {
        let dict = Dictionary::build(DictionarySpec::new(2, 2, 2)).unwrap();
        let term: RegressorTerm = "y(k-1)*u(k-2)".parse().unwrap();
        let s = dict.structure_from_terms(&[term]).unwrap();
        let y = [1.0, 2.0, 3.0, 4.0];
        let u = [1.0, 0.0, 1.0, 0.0];
        let (psi, target) = build_regressor_matrix(&s, Signals::new(&u, &y)).unwrap();
        assert_eq!(psi.as_slice(), [2.0, 0.0]);
        assert_eq!(target.as_slice(), [3.0, 4.0]);
    }

    #[test]
    fn short_data_rejected() {
        let dict = Dictionary::build(DictionarySpec::new(2, 2, 1)).unwrap();
        let s = dict.structure(&[1]).unwrap();
        let y = [1.0, 2.0, 3.0];
        assert!(matches!(
            build_regressor_matrix(&s, Signals::new(&y, &y)),
            Err(Error::InsufficientData { needed: 4, got: 3 })
        ));
        assert!(matches!(
            build_regressor_matrix(&dict.structure(&[]).unwrap(), Signals::new(&y, &y)),
            Err(Error::EmptyStructure)
        ));
    }
}

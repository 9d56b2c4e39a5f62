//! Synthetic NARX systems for experiments, examples and tests.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Normal};

use crate::data::Samples;
use crate::dictionary::RegressorTerm;

/// A polynomial NARX system `y(k) = sum theta_i term_i(k)`.
#[derive(Debug, Clone, PartialEq)]
pub struct NarxSystem {
    pub terms: Vec<(RegressorTerm, f64)>,
}

impl NarxSystem {
    /// Parses `("y(k-1)", 0.5)`-style pairs. Panics on malformed term names.
    pub fn from_pairs(pairs: &[(&str, f64)]) -> Self {
        Self { terms: pairs.iter().map(|(t, c)| (t.parse().expect("valid term"), *c)).collect() }
    }

    /// `y(k) = 0.5 y(k-1) - 0.3 y(k-2) + 0.1 u(k-1)`.
    pub fn reference() -> Self {
        Self::from_pairs(&[("y(k-1)", 0.5), ("y(k-2)", -0.3), ("u(k-1)", 0.1)])
    }

    pub fn max_lag(&self) -> usize {
        self.terms.iter().map(|(t, _)| t.max_lag()).max().unwrap_or(0)
    }

    /// Simulates from zero initial output.
    pub fn simulate(&self, u: &[f64]) -> Vec<f64> {
        let mut y = vec![0.0; u.len()];
        for k in self.max_lag()..u.len() {
            y[k] = self.terms.iter().map(|(t, c)| c * t.evaluate(&y, u, k)).sum();
        }
        y
    }

    /// Noiseless input/output record driven by a fair binary input.
    pub fn generate(&self, n: usize, seed: u64) -> Samples {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let u = binary_input(n, &mut rng);
        let y = self.simulate(&u);
        Samples { u, y }
    }
}

/// Fair random sequence over {-1, +1}.
///
/// Levels {0, 1} would make `u^2` identical to `u`, so squared input terms
/// could not be told apart from linear ones.
pub fn binary_input<R: Rng + ?Sized>(n: usize, rng: &mut R) -> Vec<f64> {
    (0..n).map(|_| if rng.random_bool(0.5) { 1.0 } else { -1.0 }).collect()
}

/// Adds white Gaussian noise so that `var(y) / var(noise)` equals `snr_db`.
pub fn add_noise<R: Rng + ?Sized>(y: &[f64], snr_db: f64, rng: &mut R) -> Vec<f64> {
    let n = y.len() as f64;
    let mean = y.iter().sum::<f64>() / n;
    let var = y.iter().map(|v| (v - mean) * (v - mean)).sum::<f64>() / n;
    let sd = (var / 10f64.powf(snr_db / 10.0)).sqrt();
    let noise = Normal::new(0.0, sd).expect("finite standard deviation");
    y.iter().map(|v| v + noise.sample(rng)).collect()
}

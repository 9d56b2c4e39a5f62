#![allow(dead_code)]

use std::collections::BTreeSet;

use nalgebra::{DMatrix, DVector};
use rand::Rng;
use rand_chacha::ChaCha8Rng;
use statrs::function::gamma::ln_gamma;

use narx_select::data::Samples;
use narx_select::synthetic::NarxSystem;

/// Every multiset of lagged signals up to `ell` factors, found by sorting all
/// ordered tuples. Signals are `('y', lag)` or `('u', lag)`.
pub fn brute_force_multisets(n_y: usize, n_u: usize, dead_time: usize, ell: usize) -> BTreeSet<Vec<(char, usize)>> {
    let mut base: Vec<(char, usize)> = (1..=n_y).map(|l| ('y', l)).collect();
    base.extend((0..n_u).map(|i| ('u', dead_time + i)));
    let mut out = BTreeSet::new();
    out.insert(Vec::new());
    for degree in 1..=ell {
        let total = base.len().pow(degree as u32);
        for code in 0..total {
            let mut c = code;
            let mut tuple = Vec::with_capacity(degree);
            for _ in 0..degree {
                tuple.push(base[c % base.len()]);
                c /= base.len();
            }
            tuple.sort();
            out.insert(tuple);
        }
    }
    out
}

/// Solves `A x = b` by Gaussian elimination with partial pivoting.
pub fn gauss_solve(mut a: Vec<Vec<f64>>, mut b: Vec<f64>) -> Vec<f64> {
    let n = b.len();
    for col in 0..n {
        let pivot = (col..n).max_by(|&i, &j| a[i][col].abs().total_cmp(&a[j][col].abs())).unwrap();
        a.swap(col, pivot);
        b.swap(col, pivot);
        for row in col + 1..n {
            let f = a[row][col] / a[col][col];
            for k in col..n {
                a[row][k] -= f * a[col][k];
            }
            b[row] -= f * b[col];
        }
    }
    let mut x = vec![0.0; n];
    for row in (0..n).rev() {
        let s: f64 = (row + 1..n).map(|k| a[row][k] * x[k]).sum();
        x[row] = (b[row] - s) / a[row][row];
    }
    x
}

/// `Psi^T Psi` by explicit sums.
pub fn gram(psi: &DMatrix<f64>) -> Vec<Vec<f64>> {
    let m = psi.ncols();
    (0..m)
        .map(|i| (0..m).map(|j| (0..psi.nrows()).map(|k| psi[(k, i)] * psi[(k, j)]).sum()).collect())
        .collect()
}

/// Least squares through the normal equations.
pub fn normal_equations(psi: &DMatrix<f64>, y: &DVector<f64>) -> Vec<f64> {
    let rhs: Vec<f64> = (0..psi.ncols()).map(|i| (0..psi.nrows()).map(|k| psi[(k, i)] * y[k]).sum()).collect();
    gauss_solve(gram(psi), rhs)
}

/// Diagonal of `(Psi^T Psi)^-1`, one column of the inverse at a time.
pub fn inverse_gram_diagonal(psi: &DMatrix<f64>) -> Vec<f64> {
    let g = gram(psi);
    let m = g.len();
    (0..m)
        .map(|i| {
            let mut e = vec![0.0; m];
            e[i] = 1.0;
            gauss_solve(g.clone(), e)[i]
        })
        .collect()
}

fn student_density(x: f64, dof: f64) -> f64 {
    let ln_c = ln_gamma((dof + 1.0) / 2.0) - ln_gamma(dof / 2.0) - 0.5 * (dof * std::f64::consts::PI).ln();
    (ln_c - (dof + 1.0) / 2.0 * (1.0 + x * x / dof).ln()).exp()
}

fn simpson(f: impl Fn(f64) -> f64, a: f64, b: f64, intervals: usize) -> f64 {
    let h = (b - a) / intervals as f64;
    let mut s = f(a) + f(b);
    for i in 1..intervals {
        let w = if i % 2 == 1 { 4.0 } else { 2.0 };
        s += w * f(a + i as f64 * h);
    }
    s * h / 3.0
}

/// Two-sided critical value found by bisection on a Simpson integral of the
/// Student-t density.
pub fn t_critical_by_integration(alpha: f64, dof: usize) -> f64 {
    let nu = dof as f64;
    let target = (1.0 - alpha) / 2.0;
    let mass = |t: f64| simpson(|x| student_density(x, nu), 0.0, t, 40_000);
    let (mut lo, mut hi) = (0.0, 1.0);
    while mass(hi) < target {
        hi *= 2.0;
    }
    for _ in 0..60 {
        let mid = 0.5 * (lo + hi);
        if mass(mid) < target {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    0.5 * (lo + hi)
}

/// Random matrix with i.i.d. standard-normal-ish entries (sum of uniforms).
pub fn random_matrix(rows: usize, cols: usize, rng: &mut ChaCha8Rng) -> DMatrix<f64> {
    DMatrix::from_fn(rows, cols, |_, _| (0..4).map(|_| rng.random::<f64>() - 0.5).sum::<f64>())
}

/// Reference system driven by a fair ±1 input.
pub fn reference_samples(n: usize, seed: u64) -> Samples {
    NarxSystem::reference().generate(n, seed)
}

/// Dictionary indices of `y(k-1)`, `y(k-2)`, `u(k-1)` for `(n_y, n_u, ell) = (2, 2, 2)`.
pub const REFERENCE_INDICES: [usize; 3] = [1, 2, 3];

pub fn max_relative_error(a: &[f64], b: &[f64]) -> f64 {
    a.iter()
        .zip(b)
        .map(|(x, y)| (x - y).abs() / y.abs().max(f64::MIN_POSITIVE))
        .fold(0.0, f64::max)
}

pub fn relative_error(a: &[f64], b: &[f64]) -> f64 {
    let diff: f64 = a.iter().zip(b).map(|(x, y)| (x - y).powi(2)).sum::<f64>().sqrt();
    diff / b.iter().map(|y| y * y).sum::<f64>().sqrt()
}

//! Least-squares estimation and regressor relevance testing.

use nalgebra::{DMatrix, DVector};
use statrs::function::beta::beta_reg;

use crate::data::Signals;
use crate::dictionary::{build_regressor_matrix, ModelStructure};
use crate::error::{Error, Result};

/// A pivot of the triangular factor below this fraction of the largest pivot
/// marks the regressor matrix as rank deficient.
pub const RANK_TOLERANCE: f64 = 1e-10;

/// A structure with fitted parameters and relevance statistics.
#[derive(Debug, Clone, PartialEq)]
pub struct EstimatedModel {
    pub structure: ModelStructure,
    pub theta: Vec<f64>,
    pub residual_variance: f64,
    pub param_variances: Vec<f64>,
    pub std_errors: Vec<f64>,
    /// True where the confidence interval excludes zero.
    pub relevant: Vec<bool>,
    pub n_rows: usize,
    pub n_params: usize,
}

impl EstimatedModel {
    /// Count of regressors whose confidence interval contains zero.
    pub fn n_irrelevant(&self) -> usize {
        self.relevant.iter().filter(|&&r| !r).count()
    }
}

/// Thin QR factorization of a regressor matrix with its rank check done.
#[derive(Debug, Clone)]
pub struct QrFit {
    q: DMatrix<f64>,
    r: DMatrix<f64>,
}

impl QrFit {
    pub fn new(psi: &DMatrix<f64>) -> Result<Self> {
        let (rows, cols) = psi.shape();
        if cols == 0 {
            return Err(Error::EmptyStructure);
        }
        if rows <= cols {
            return Err(Error::TooFewRows { rows, params: cols });
        }
        let qr = psi.clone().qr();
        let r = qr.r();
        let pivots: Vec<f64> = r.diagonal().iter().map(|v| v.abs()).collect();
        let largest = pivots.iter().cloned().fold(0.0, f64::max);
        if !largest.is_finite() || largest == 0.0 || pivots.iter().any(|&p| !(p > RANK_TOLERANCE * largest)) {
            return Err(Error::RankDeficient);
        }
        Ok(Self { q: qr.q(), r })
    }

    pub fn solve(&self, y: &DVector<f64>) -> DVector<f64> {
        let qty = self.q.tr_mul(y);
        self.r.solve_upper_triangular(&qty).expect("pivots checked non-zero")
    }

    /// Diagonal of `(Psi^T Psi)^{-1} = R^{-1} R^{-T}`: squared row norms of `R^{-1}`.
    pub fn inverse_gram_diagonal(&self) -> DVector<f64> {
        let m = self.r.nrows();
        let r_inv = self
            .r
            .solve_upper_triangular(&DMatrix::identity(m, m))
            .expect("pivots checked non-zero");
        DVector::from_iterator(m, r_inv.row_iter().map(|row| row.norm_squared()))
    }
}

/// Parameters minimizing `||y - Psi theta||^2`, solved through a QR factorization.
pub fn least_squares(psi: &DMatrix<f64>, y: &DVector<f64>) -> Result<DVector<f64>> {
    if psi.nrows() != y.len() {
        return Err(Error::InvalidArgument(format!("matrix has {} rows, target has {}", psi.nrows(), y.len())));
    }
    Ok(QrFit::new(psi)?.solve(y))
}

/// `sum(residual^2) / (N - m)`, the mean square scaled by `N / (N - m)`.
pub fn residual_variance(residuals: &[f64], n_params: usize) -> Result<f64> {
    let n = residuals.len();
    if n <= n_params {
        return Err(Error::TooFewRows { rows: n, params: n_params });
    }
    let ss: f64 = residuals.iter().map(|r| r * r).sum();
    Ok(ss / (n - n_params) as f64)
}

/// `sigma_e^2 * diag((Psi^T Psi)^{-1})`.
pub fn parameter_variances(psi: &DMatrix<f64>, sigma_e2: f64) -> Result<DVector<f64>> {
    Ok(QrFit::new(psi)?.inverse_gram_diagonal() * sigma_e2)
}

pub fn standard_errors(psi: &DMatrix<f64>, sigma2: f64) -> Result<DVector<f64>> {
    Ok(parameter_variances(psi, sigma2)?.map(f64::sqrt))
}

/// Two-sided Student-t critical value: `P(|T_dof| > t) = alpha`.
///
/// Uses `P(|T| > t) = I_x(dof/2, 1/2)` with `x = dof / (dof + t^2)` and
/// bisects for `x`.
pub fn t_critical(alpha: f64, dof: usize) -> Result<f64> {
    if !(alpha > 0.0 && alpha < 1.0) {
        return Err(Error::InvalidArgument(format!("alpha {alpha} must lie in (0, 1)")));
    }
    if dof == 0 {
        return Err(Error::InvalidArgument("degrees of freedom must be positive".into()));
    }
    let nu = dof as f64;
    let (mut lo, mut hi) = (0.0_f64, 1.0_f64);
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            break;
        }
        if beta_reg(0.5 * nu, 0.5, mid) < alpha {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    let x = 0.5 * (lo + hi);
    Ok((nu * (1.0 - x) / x).sqrt())
}

/// Flags regressors whose `100(1 - alpha)%` confidence interval excludes zero.
pub fn relevance_flags(theta: &[f64], sigmas: &[f64], alpha: f64, dof: usize) -> Result<Vec<bool>> {
    if theta.len() != sigmas.len() {
        return Err(Error::InvalidArgument("theta and sigma lengths differ".into()));
    }
    let t = t_critical(alpha, dof)?;
    Ok(theta.iter().zip(sigmas).map(|(th, s)| th.abs() > s * t).collect())
}

/// Fits a structure on `data` and runs the relevance test at level `alpha`.
pub fn estimate(structure: &ModelStructure, data: Signals<'_>, alpha: f64) -> Result<EstimatedModel> {
    let (psi, y) = build_regressor_matrix(structure, data)?;
    estimate_from_matrix(structure.clone(), &psi, &y, alpha, 0.0)
}

/// Estimation on a prebuilt regressor matrix. `variance_floor` lower-bounds
/// the residual variance used by the relevance test.
pub(crate) fn estimate_from_matrix(
    structure: ModelStructure,
    psi: &DMatrix<f64>,
    y: &DVector<f64>,
    alpha: f64,
    variance_floor: f64,
) -> Result<EstimatedModel> {
    let fit = QrFit::new(psi)?;
    let theta = fit.solve(y);
    let residuals = y - psi * &theta;
    let (n_rows, n_params) = psi.shape();
    let sigma_e2 = residual_variance(residuals.as_slice(), n_params)?;
    let inv_gram = fit.inverse_gram_diagonal();
    let param_variances = &inv_gram * sigma_e2;
    let std_errors = param_variances.map(f64::sqrt);
    let test_sigmas: Vec<f64> = inv_gram.iter().map(|v| (v * sigma_e2.max(variance_floor)).sqrt()).collect();
    let relevant = relevance_flags(theta.as_slice(), &test_sigmas, alpha, n_rows - n_params)?;
    Ok(EstimatedModel {
        structure,
        theta: theta.iter().copied().collect(),
        residual_variance: sigma_e2,
        param_variances: param_variances.iter().copied().collect(),
        std_errors: std_errors.iter().copied().collect(),
        relevant,
        n_rows,
        n_params,
    })
}

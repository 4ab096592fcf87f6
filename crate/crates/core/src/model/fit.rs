use nalgebra::DMatrix;
use serde::Serialize;

use super::likelihood::{unchecked_loglik, StateSpace, LOGLIK_PENALTY};
use super::{ModelOrder, SarimaParams};
use crate::error::{Error, Result};
use crate::optim::NelderMead;
use crate::selection::aic;
use crate::series::{difference, TimeSeries};

/// Extra observations required beyond the parameter count.
pub const MIN_EXTRA_OBSERVATIONS: usize = 10;

#[derive(Debug, Clone)]
pub struct FitOptions {
    pub optimizer: NelderMead,
    /// Estimate the coefficient covariance from a numerical Hessian.
    pub covariance: bool,
}

impl Default for FitOptions {
    fn default() -> Self {
        Self {
            optimizer: NelderMead::default(),
            covariance: true,
        }
    }
}

/// A fitted model.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct FitResult {
    pub order: ModelOrder,
    pub params: SarimaParams,
    pub loglik: f64,
    pub aic: f64,
    /// Observations left after differencing; the likelihood is over these only.
    pub n_effective: usize,
    /// One-step prediction errors divided by their standard deviation.
    pub residuals: Vec<f64>,
    /// Covariance of the estimates in [`ModelOrder::param_names`] order, or
    /// `None` when the Hessian could not be inverted to a valid covariance.
    pub covariance: Option<Vec<Vec<f64>>>,
    pub converged: bool,
    pub iterations: usize,
}

impl FitResult {
    pub fn n_params(&self) -> usize {
        self.order.n_params()
    }

    /// Estimates in covariance order, sigma2 last.
    pub fn estimates(&self) -> Vec<f64> {
        let mut v = self.params.to_vector(&self.order);
        v.push(self.params.sigma2);
        v
    }
}

/// Maximum-likelihood fit of `order` to `series`.
pub fn fit(series: &TimeSeries, order: &ModelOrder) -> Result<FitResult> {
    fit_values(series.values(), order, &FitOptions::default())
}

/// Maximum-likelihood fit of `order` to raw (undifferenced) values.
///
/// Sigma2 is profiled out of the simplex search: for fixed coefficients its
/// maximiser is available in closed form from the filter.
pub fn fit_values(values: &[f64], order: &ModelOrder, opts: &FitOptions) -> Result<FitResult> {
    let k = order.n_params();
    let required = k + MIN_EXTRA_OBSERVATIONS;
    let lost = order.lost_to_differencing();
    if values.len() < lost + required {
        return Err(Error::InsufficientData {
            n_effective: values.len().saturating_sub(lost),
            required,
        });
    }
    let data = difference(values, order.d, order.seasonal_d, order.m)?;
    let n = data.len();

    let mean = if order.estimates_constant() {
        data.iter().sum::<f64>() / n as f64
    } else {
        0.0
    };
    let var = data.iter().map(|y| (y - mean).powi(2)).sum::<f64>() / n as f64;
    if !(var > 0.0) || !var.is_finite() {
        return Err(Error::Numerical("differenced data has zero variance".into()));
    }

    let objective = |x: &[f64]| -> f64 {
        let params = SarimaParams::from_vector(order, x, 1.0);
        if !params.is_stationary() || !params.is_invertible() {
            return -LOGLIK_PENALTY;
        }
        let Ok(ss) = StateSpace::from_params(order, &params) else {
            return -LOGLIK_PENALTY;
        };
        let centered: Vec<f64> = data.iter().map(|y| y - params.constant).collect();
        match ss.filter(&centered) {
            Ok(out) if out.sigma2_hat() > 0.0 => {
                let ll = out.concentrated_loglik();
                if ll.is_finite() {
                    -ll
                } else {
                    -LOGLIK_PENALTY
                }
            }
            _ => -LOGLIK_PENALTY,
        }
    };

    let start = SarimaParams {
        constant: mean,
        ..SarimaParams::zeros(order, var)
    }
    .to_vector(order);
    let mut steps = vec![0.1; start.len()];
    if order.estimates_constant() {
        steps[0] = 0.1 * var.sqrt();
    }
    let min = opts.optimizer.minimize(objective, &start, &steps);
    if min.f >= -LOGLIK_PENALTY {
        return Err(Error::Numerical(format!("no admissible parameters found for {order}")));
    }

    let coeffs = SarimaParams::from_vector(order, &min.x, 1.0);
    let ss = StateSpace::from_params(order, &coeffs)?;
    let centered: Vec<f64> = data.iter().map(|y| y - coeffs.constant).collect();
    let out = ss.filter(&centered)?;
    let sigma2 = out.sigma2_hat();
    let params = SarimaParams { sigma2, ..coeffs };
    let loglik = out.loglik(sigma2);

    let residuals = out
        .innovations
        .iter()
        .zip(&out.prediction_variances)
        .map(|(v, f)| v / (sigma2 * f).sqrt())
        .collect();

    let covariance = if opts.covariance {
        let mut theta = params.to_vector(order);
        theta.push(sigma2);
        numerical_covariance(&data, order, &theta)
    } else {
        None
    };

    Ok(FitResult {
        order: *order,
        aic: aic(loglik, k),
        params,
        loglik,
        n_effective: n,
        residuals,
        covariance,
        converged: min.converged,
        iterations: min.iterations,
    })
}

/// Inverse of the negative central-difference Hessian of the log-likelihood.
fn numerical_covariance(data: &[f64], order: &ModelOrder, theta: &[f64]) -> Option<Vec<Vec<f64>>> {
    let k = theta.len();
    let ll = |x: &[f64]| -> Option<f64> {
        let (coeffs, sigma2) = x.split_at(k - 1);
        if !(sigma2[0] > 0.0) {
            return None;
        }
        let params = SarimaParams::from_vector(order, coeffs, sigma2[0]);
        unchecked_loglik(data, order, &params)
    };

    let sigma2 = theta[k - 1];
    let h: Vec<f64> = theta
        .iter()
        .enumerate()
        .map(|(i, x)| {
            let scale = if i == k - 1 {
                sigma2
            } else if i == 0 && order.estimates_constant() {
                sigma2.sqrt()
            } else {
                1.0
            };
            1e-4 * x.abs().max(scale)
        })
        .collect();
    let f0 = ll(theta)?;
    let at = |moves: &[(usize, f64)]| -> Option<f64> {
        let mut x = theta.to_vec();
        for &(i, s) in moves {
            x[i] += s * h[i];
        }
        ll(&x)
    };

    let mut hess = DMatrix::<f64>::zeros(k, k);
    for i in 0..k {
        let fp = at(&[(i, 1.0)])?;
        let fm = at(&[(i, -1.0)])?;
        hess[(i, i)] = (fp - 2.0 * f0 + fm) / (h[i] * h[i]);
        for j in 0..i {
            let fpp = at(&[(i, 1.0), (j, 1.0)])?;
            let fpm = at(&[(i, 1.0), (j, -1.0)])?;
            let fmp = at(&[(i, -1.0), (j, 1.0)])?;
            let fmm = at(&[(i, -1.0), (j, -1.0)])?;
            let v = (fpp - fpm - fmp + fmm) / (4.0 * h[i] * h[j]);
            hess[(i, j)] = v;
            hess[(j, i)] = v;
        }
    }

    let info = -hess;
    let cov = info.try_inverse()?;
    let cov = (&cov + cov.transpose()) * 0.5;
    if cov.iter().any(|v| !v.is_finite()) {
        return None;
    }
    let eig = cov.clone().symmetric_eigen();
    let scale = eig.eigenvalues.iter().fold(0.0f64, |a, v| a.max(v.abs()));
    if eig.eigenvalues.iter().any(|&v| v < -1e-10 * scale) {
        return None;
    }
    Some((0..k).map(|i| (0..k).map(|j| cov[(i, j)]).collect()).collect())
}

//! Exact Gaussian likelihood of a stationary ARMA process.
//!
//! The process is put in the forecast-state form
//! `x_t = (y_t, E_t y_{t+1}, ..., E_t y_{t+r-1})` with `r = max(p, q + 1)`,
//! whose transition is a companion matrix and whose disturbance loading is
//! the leading psi-weights. The initial state covariance follows directly
//! from the autocovariances, so no Lyapunov solve is needed.

use std::f64::consts::PI;

use nalgebra::{DMatrix, DVector};

use super::{expand_polynomials, ModelOrder, SarimaParams};
use crate::error::{Error, Result};
use crate::poly;

/// Returned by [`log_likelihood`] for non-stationary or non-invertible parameters.
pub const LOGLIK_PENALTY: f64 = -1.0e10;

const MIN_PREDICTION_VARIANCE: f64 = 1e-12;
const STEADY_STATE_TOL: f64 = 1e-13;

/// Autocovariances `gamma(0..=max_lag)` of the ARMA process
/// `w_t = sum ar[i] w_{t-i-1} + e_t + sum ma[j] e_{t-j-1}`, `Var(e) = sigma2`.
///
/// Solves the first `p + 1` Yule-Walker-type equations jointly and extends
/// by the AR recursion.
pub fn autocovariances(ar: &[f64], ma: &[f64], sigma2: f64, max_lag: usize) -> Result<Vec<f64>> {
    let p = ar.len();
    let q = ma.len();
    let mut theta = Vec::with_capacity(q + 1);
    theta.push(1.0);
    theta.extend_from_slice(ma);

    let mut ar_poly = Vec::with_capacity(p + 1);
    ar_poly.push(1.0);
    ar_poly.extend(ar.iter().map(|c| -c));
    let psi = poly::divide_series(&theta, &ar_poly, q + 1);

    // rhs[k] = sigma2 * sum_{j=k..q} theta_j psi_{j-k}
    let rhs_at = |k: usize| -> f64 {
        (k..=q).map(|j| theta[j] * psi[j - k]).sum::<f64>() * sigma2
    };

    let mut a = DMatrix::<f64>::zeros(p + 1, p + 1);
    let mut b = DVector::<f64>::zeros(p + 1);
    for k in 0..=p {
        a[(k, k)] += 1.0;
        for j in 1..=p {
            a[(k, k.abs_diff(j))] -= ar[j - 1];
        }
        b[k] = rhs_at(k);
    }
    let head = a
        .lu()
        .solve(&b)
        .filter(|x| x.iter().all(|v| v.is_finite()) && x[0] > 0.0)
        .ok_or(Error::NonStationary)?;

    let mut gamma: Vec<f64> = head.iter().copied().collect();
    gamma.truncate(max_lag + 1);
    for k in gamma.len()..=max_lag {
        let mut g = if k <= q { rhs_at(k) } else { 0.0 };
        for j in 1..=p {
            g += ar[j - 1] * gamma[k - j];
        }
        gamma.push(g);
    }
    Ok(gamma)
}

/// Companion-form state space of a zero-mean ARMA process with unit innovation variance.
#[derive(Debug, Clone)]
pub(crate) struct StateSpace {
    r: usize,
    /// Non-zero AR coefficients as (lag, coefficient).
    lags: Vec<(usize, f64)>,
    psi: Vec<f64>,
    p0: Vec<f64>,
}

/// Output of one filtering pass with unit innovation variance.
#[derive(Debug, Clone)]
pub(crate) struct FilterOutput {
    pub sum_log_f: f64,
    pub sum_sq: f64,
    pub innovations: Vec<f64>,
    pub prediction_variances: Vec<f64>,
    /// Predicted state after the last observation.
    pub state: Vec<f64>,
}

impl FilterOutput {
    pub fn n(&self) -> usize {
        self.innovations.len()
    }

    /// Maximum-likelihood innovation variance given the coefficients.
    pub fn sigma2_hat(&self) -> f64 {
        self.sum_sq / self.n() as f64
    }

    pub fn loglik(&self, sigma2: f64) -> f64 {
        let n = self.n() as f64;
        -0.5 * n * (2.0 * PI).ln()
            - 0.5 * (self.sum_log_f + n * sigma2.ln())
            - 0.5 * self.sum_sq / sigma2
    }

    /// Log-likelihood with sigma2 replaced by its maximizer.
    pub fn concentrated_loglik(&self) -> f64 {
        let n = self.n() as f64;
        -0.5 * n * ((2.0 * PI).ln() + 1.0 + self.sigma2_hat().ln()) - 0.5 * self.sum_log_f
    }
}

impl StateSpace {
    pub fn new(full_ar: &[f64], full_ma: &[f64]) -> Result<Self> {
        let r = full_ar.len().max(full_ma.len() + 1);
        let lags = full_ar
            .iter()
            .enumerate()
            .filter(|(_, c)| **c != 0.0)
            .map(|(i, c)| (i + 1, *c))
            .collect();

        let mut ar_poly = vec![1.0];
        ar_poly.extend(full_ar.iter().map(|c| -c));
        let mut ma_poly = vec![1.0];
        ma_poly.extend_from_slice(full_ma);
        let psi = poly::divide_series(&ma_poly, &ar_poly, r);

        let gamma = autocovariances(full_ar, full_ma, 1.0, r)?;
        let mut p0 = vec![0.0; r * r];
        for i in 0..r {
            for j in i..r {
                let lag = j - i;
                let known: f64 = (0..i).map(|k| psi[k] * psi[k + lag]).sum();
                let v = gamma[lag] - known;
                p0[i * r + j] = v;
                p0[j * r + i] = v;
            }
        }
        Ok(Self { r, lags, psi, p0 })
    }

    pub fn from_params(order: &ModelOrder, params: &SarimaParams) -> Result<Self> {
        let (ar, ma) = expand_polynomials(order, params)?;
        Self::new(&ar, &ma)
    }

    /// Advances a state mean one step: `T a`.
    pub fn transition(&self, a: &[f64]) -> Vec<f64> {
        let mut out = a.to_vec();
        self.transition_in_place(&mut out);
        out
    }

    fn transition_in_place(&self, a: &mut [f64]) {
        let r = self.r;
        let last: f64 = self.lags.iter().map(|&(j, phi)| phi * a[r - j]).sum();
        a.copy_within(1.., 0);
        a[r - 1] = last;
    }

    /// Runs the prediction-error recursion over zero-mean `data`.
    ///
    /// Once the predicted covariance stops changing the gain is frozen and
    /// only the state mean is propagated.
    pub fn filter(&self, data: &[f64]) -> Result<FilterOutput> {
        let r = self.r;
        let mut a = vec![0.0; r];
        let mut p = self.p0.clone();
        let mut prev = vec![0.0; r * r];
        let mut tp = vec![0.0; r * r];
        let mut row0 = vec![0.0; r];
        let mut steady = false;
        let mut innovations = Vec::with_capacity(data.len());
        let mut variances = Vec::with_capacity(data.len());
        let mut sum_log_f = 0.0;
        let mut sum_sq = 0.0;

        for &y in data {
            let f = p[0];
            if !(f > MIN_PREDICTION_VARIANCE) || !f.is_finite() {
                return Err(Error::Numerical(format!("prediction variance {f} not positive")));
            }
            let v = y - a[0];
            sum_log_f += f.ln();
            sum_sq += v * v / f;
            innovations.push(v);
            variances.push(f);

            // Measurement update; the first state element is observed exactly.
            row0.copy_from_slice(&p[..r]);
            for i in 0..r {
                a[i] += row0[i] / f * v;
            }
            self.transition_in_place(&mut a);
            if steady {
                continue;
            }
            prev.copy_from_slice(&p);

            for i in 0..r {
                let gi = row0[i] / f;
                if gi == 0.0 {
                    continue;
                }
                for (pij, r0j) in p[i * r..(i + 1) * r].iter_mut().zip(&row0) {
                    *pij -= gi * r0j;
                }
            }
            // first row and column are zero up to rounding
            for j in 0..r {
                p[j] = 0.0;
                p[j * r] = 0.0;
            }

            // Time update: P <- T P T' + psi psi'.
            tp[..(r - 1) * r].copy_from_slice(&p[r..]);
            let last = &mut tp[(r - 1) * r..];
            last.fill(0.0);
            for &(j, phi) in &self.lags {
                for (t, pk) in last.iter_mut().zip(&p[(r - j) * r..(r - j + 1) * r]) {
                    *t += phi * pk;
                }
            }
            for i in 0..r {
                let row = &tp[i * r..(i + 1) * r];
                let out = &mut p[i * r..(i + 1) * r];
                out[..r - 1].copy_from_slice(&row[1..]);
                out[r - 1] = self.lags.iter().map(|&(j, phi)| phi * row[r - j]).sum();
                let psi_i = self.psi[i];
                for (o, psi_k) in out.iter_mut().zip(&self.psi) {
                    *o += psi_i * psi_k;
                }
            }

            let scale = p[0].abs().max(1.0);
            steady = p
                .iter()
                .zip(&prev)
                .all(|(x, y)| (x - y).abs() <= STEADY_STATE_TOL * scale);
        }

        Ok(FilterOutput {
            sum_log_f,
            sum_sq,
            innovations,
            prediction_variances: variances,
            state: a,
        })
    }
}

/// Exact Gaussian log-likelihood of already-differenced `data` under the ARMA
/// part of `order`.
///
/// Non-stationary or non-invertible parameters, and numerically degenerate
/// filters, yield [`LOGLIK_PENALTY`] rather than an error.
pub fn log_likelihood(data: &[f64], order: &ModelOrder, params: &SarimaParams) -> Result<f64> {
    params.check_dims(order)?;
    if data.is_empty() {
        return Err(Error::EmptySeries);
    }
    if !(params.sigma2 > 0.0) || !params.is_stationary() || !params.is_invertible() {
        return Ok(LOGLIK_PENALTY);
    }
    Ok(unchecked_loglik(data, order, params).unwrap_or(LOGLIK_PENALTY))
}

/// Likelihood without the stationarity/invertibility screen.
pub(crate) fn unchecked_loglik(data: &[f64], order: &ModelOrder, params: &SarimaParams) -> Option<f64> {
    let ss = StateSpace::from_params(order, params).ok()?;
    let centered: Vec<f64> = data.iter().map(|y| y - params.constant).collect();
    let out = ss.filter(&centered).ok()?;
    let ll = out.loglik(params.sigma2);
    ll.is_finite().then_some(ll)
}

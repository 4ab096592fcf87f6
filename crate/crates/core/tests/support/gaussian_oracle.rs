//! Dense multivariate-normal log-density of a stationary SARMA sample, with
//! autocovariances from long psi-weight sums. Shares no code with the filter.

use nalgebra::{DMatrix, DVector};
use rand::Rng;
use rand_chacha::ChaCha8Rng;
use sarima_core::{ModelOrder, SarimaParams};

/// Coefficients of `(1 + sign*c_1 B^s + ...)` multiplied out, from scratch.
fn factor(coeffs: &[f64], stride: usize, sign: f64) -> Vec<f64> {
    let mut p = vec![0.0; coeffs.len() * stride + 1];
    p[0] = 1.0;
    for (i, c) in coeffs.iter().enumerate() {
        p[(i + 1) * stride] = sign * c;
    }
    p
}

fn mul(a: &[f64], b: &[f64]) -> Vec<f64> {
    let mut out = vec![0.0; a.len() + b.len() - 1];
    for (i, x) in a.iter().enumerate() {
        for (j, y) in b.iter().enumerate() {
            out[i + j] += x * y;
        }
    }
    out
}

/// gamma(k) = sigma2 * sum_j psi_j psi_{j+k}, with psi from long division.
pub fn oracle_autocov(order: &ModelOrder, params: &SarimaParams, max_lag: usize) -> Vec<f64> {
    let ar = mul(&factor(&params.ar, 1, -1.0), &factor(&params.sar, order.m, -1.0));
    let ma = mul(&factor(&params.ma, 1, 1.0), &factor(&params.sma, order.m, 1.0));
    let terms = 20_000;
    let mut psi = vec![0.0; terms];
    for j in 0..terms {
        let mut v = ma.get(j).copied().unwrap_or(0.0);
        for k in 1..ar.len().min(j + 1) {
            v -= ar[k] * psi[j - k];
        }
        psi[j] = v;
    }
    (0..=max_lag)
        .map(|k| params.sigma2 * (0..terms - k).map(|j| psi[j] * psi[j + k]).sum::<f64>())
        .collect()
}

pub fn oracle_loglik(data: &[f64], order: &ModelOrder, params: &SarimaParams) -> f64 {
    let n = data.len();
    let gamma = oracle_autocov(order, params, n);
    let cov = DMatrix::from_fn(n, n, |i, j| gamma[i.abs_diff(j)]);
    let chol = cov.cholesky().expect("autocovariance matrix positive definite");
    let x = DVector::from_iterator(n, data.iter().map(|y| y - params.constant));
    let solved = chol.solve(&x);
    let quad = x.dot(&solved);
    let log_det: f64 = 2.0 * chol.l().diagonal().iter().map(|v| v.ln()).sum::<f64>();
    -0.5 * (n as f64 * (2.0 * std::f64::consts::PI).ln() + log_det + quad)
}

fn random_coeffs(rng: &mut ChaCha8Rng, n: usize) -> Vec<f64> {
    (0..n).map(|_| rng.random_range(-0.7..0.7)).collect()
}

/// Random order with total lag `p + mP + q + mQ <= 4` and admissible parameters
/// whose reflection coefficients stay away from the unit circle.
pub fn random_instance(rng: &mut ChaCha8Rng) -> (ModelOrder, SarimaParams, Vec<f64>) {
    loop {
        let m = rng.random_range(1..=4usize);
        let (p, q) = (rng.random_range(0..=2usize), rng.random_range(0..=2usize));
        let (sp, sq) = if m > 1 {
            (rng.random_range(0..=1usize), rng.random_range(0..=1usize))
        } else {
            (0, 0)
        };
        if p + q + m * (sp + sq) > 4 {
            continue;
        }
        let order = ModelOrder::new((p, 0, q), (sp, 0, sq, m)).unwrap();
        let params = SarimaParams {
            ar: random_coeffs(rng, p),
            ma: random_coeffs(rng, q),
            sar: random_coeffs(rng, sp),
            sma: random_coeffs(rng, sq),
            constant: if rng.random_bool(0.5) { rng.random_range(-2.0..2.0) } else { 0.0 },
            sigma2: rng.random_range(0.2..3.0),
        };
        let shrunk = |v: &[f64]| v.iter().map(|c| c / 0.9).collect::<Vec<_>>();
        let margin_ok = SarimaParams {
            ar: shrunk(&params.ar),
            ma: shrunk(&params.ma),
            sar: shrunk(&params.sar),
            sma: shrunk(&params.sma),
            ..params.clone()
        };
        if !(margin_ok.is_stationary() && margin_ok.is_invertible()) {
            continue;
        }
        let n = rng.random_range(1..=20usize);
        let data = (0..n).map(|_| rng.random_range(-3.0..3.0) + params.constant).collect();
        return (order, params, data);
    }
}


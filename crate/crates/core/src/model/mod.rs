//! Multiplicative seasonal ARIMA models.
//!
//! A model of order `(p,d,q)x(P,D,Q,m)` is
//!
//! ```text
//! phi(B) PHI(B^m) (1-B)^d (1-B^m)^D y_t = theta(B) THETA(B^m) e_t
//! ```
//!
//! with `phi(B) = 1 - ar_1 B - ... - ar_p B^p` and
//! `theta(B) = 1 + ma_1 B + ... + ma_q B^q` (seasonal factors alike).
//! Row labels follow the usual `ar.L1`, `ma.L1`, `ar.S.L12`, `ma.S.L12` scheme.

mod fit;
mod inference;
mod likelihood;
mod simulate;

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::poly;

pub use fit::{fit, fit_values, FitOptions, FitResult};
pub use inference::{coefficient_table, CoefficientRow, CoefficientTable};
pub use likelihood::{autocovariances, log_likelihood, LOGLIK_PENALTY};
pub(crate) use likelihood::StateSpace;
pub use simulate::{simulate, simulate_with_burn_in};

/// Default cap on `p + q + P + Q`.
pub const DEFAULT_MAX_TERMS: usize = 12;

/// The seven integers `(p, d, q) x (P, D, Q, m)`.
///
/// Ordering is lexicographic in `(p, d, q, P, D, Q, m)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct ModelOrder {
    pub p: usize,
    pub d: usize,
    pub q: usize,
    pub seasonal_p: usize,
    pub seasonal_d: usize,
    pub seasonal_q: usize,
    pub m: usize,
}

impl ModelOrder {
    pub fn new(
        (p, d, q): (usize, usize, usize),
        (seasonal_p, seasonal_d, seasonal_q, m): (usize, usize, usize, usize),
    ) -> Result<Self> {
        Self::with_cap((p, d, q), (seasonal_p, seasonal_d, seasonal_q, m), DEFAULT_MAX_TERMS)
    }

    pub fn with_cap(
        (p, d, q): (usize, usize, usize),
        (seasonal_p, seasonal_d, seasonal_q, m): (usize, usize, usize, usize),
        max_terms: usize,
    ) -> Result<Self> {
        let order = Self {
            p,
            d,
            q,
            seasonal_p,
            seasonal_d,
            seasonal_q,
            m,
        };
        if m == 0 {
            return Err(Error::InvalidOrder("season length m must be >= 1".into()));
        }
        if m == 1 && (seasonal_p | seasonal_d | seasonal_q) != 0 {
            return Err(Error::InvalidOrder(
                "seasonal terms require a season length m > 1".into(),
            ));
        }
        if p + q + seasonal_p + seasonal_q > max_terms {
            return Err(Error::InvalidOrder(format!(
                "{order} has more than {max_terms} ARMA terms"
            )));
        }
        Ok(order)
    }

    /// Non-seasonal ARIMA(p,d,q).
    pub fn arima(p: usize, d: usize, q: usize) -> Result<Self> {
        Self::new((p, d, q), (0, 0, 0, 1))
    }

    /// Observations consumed by differencing.
    pub fn lost_to_differencing(&self) -> usize {
        self.d + self.seasonal_d * self.m
    }

    /// The constant is estimated only when the model is not differenced.
    pub fn estimates_constant(&self) -> bool {
        self.d + self.seasonal_d == 0
    }

    /// Number of estimated parameters, counting sigma2 and the constant when present.
    pub fn n_params(&self) -> usize {
        self.p + self.q + self.seasonal_p + self.seasonal_q + 1 + usize::from(self.estimates_constant())
    }

    pub fn full_ar_degree(&self) -> usize {
        self.p + self.m * self.seasonal_p
    }

    pub fn full_ma_degree(&self) -> usize {
        self.q + self.m * self.seasonal_q
    }

    /// Parameter names in covariance order: constant, ar, ma, seasonal ar, seasonal ma, sigma2.
    pub fn param_names(&self) -> Vec<String> {
        let mut names = Vec::with_capacity(self.n_params());
        if self.estimates_constant() {
            names.push("const".to_string());
        }
        names.extend((1..=self.p).map(|i| format!("ar.L{i}")));
        names.extend((1..=self.q).map(|i| format!("ma.L{i}")));
        names.extend((1..=self.seasonal_p).map(|i| format!("ar.S.L{}", i * self.m)));
        names.extend((1..=self.seasonal_q).map(|i| format!("ma.S.L{}", i * self.m)));
        names.push("sigma2".to_string());
        names
    }
}

impl fmt::Display for ModelOrder {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "SARIMA({},{},{})x({},{},{},{})",
            self.p, self.d, self.q, self.seasonal_p, self.seasonal_d, self.seasonal_q, self.m
        )
    }
}

/// Coefficients of a seasonal ARIMA model.
///
/// `constant` is the mean of the differenced process; it is held at zero when
/// the model is differenced.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SarimaParams {
    pub ar: Vec<f64>,
    pub ma: Vec<f64>,
    pub sar: Vec<f64>,
    pub sma: Vec<f64>,
    pub constant: f64,
    pub sigma2: f64,
}

impl SarimaParams {
    /// All coefficients zero.
    pub fn zeros(order: &ModelOrder, sigma2: f64) -> Self {
        Self {
            ar: vec![0.0; order.p],
            ma: vec![0.0; order.q],
            sar: vec![0.0; order.seasonal_p],
            sma: vec![0.0; order.seasonal_q],
            constant: 0.0,
            sigma2,
        }
    }

    /// White noise with variance `sigma2`.
    pub fn white_noise(sigma2: f64) -> Self {
        Self {
            ar: vec![],
            ma: vec![],
            sar: vec![],
            sma: vec![],
            constant: 0.0,
            sigma2,
        }
    }

    pub fn check_dims(&self, order: &ModelOrder) -> Result<()> {
        let dims = [
            ("ar", self.ar.len(), order.p),
            ("ma", self.ma.len(), order.q),
            ("sar", self.sar.len(), order.seasonal_p),
            ("sma", self.sma.len(), order.seasonal_q),
        ];
        for (name, got, want) in dims {
            if got != want {
                return Err(Error::DimensionMismatch(format!(
                    "{name} has {got} coefficients, {order} needs {want}"
                )));
            }
        }
        Ok(())
    }

    /// Whether both AR factors have all roots outside the unit circle.
    pub fn is_stationary(&self) -> bool {
        poly::roots_outside_unit_circle(&self.ar) && poly::roots_outside_unit_circle(&self.sar)
    }

    /// Whether both MA factors have all roots outside the unit circle.
    pub fn is_invertible(&self) -> bool {
        let neg = |v: &[f64]| v.iter().map(|x| -x).collect::<Vec<_>>();
        poly::roots_outside_unit_circle(&neg(&self.ma))
            && poly::roots_outside_unit_circle(&neg(&self.sma))
    }

    /// Estimated coefficients in covariance order, excluding sigma2.
    pub(crate) fn to_vector(&self, order: &ModelOrder) -> Vec<f64> {
        let mut v = Vec::with_capacity(order.n_params());
        if order.estimates_constant() {
            v.push(self.constant);
        }
        v.extend(&self.ar);
        v.extend(&self.ma);
        v.extend(&self.sar);
        v.extend(&self.sma);
        v
    }

    /// Inverse of [`to_vector`](Self::to_vector).
    pub(crate) fn from_vector(order: &ModelOrder, v: &[f64], sigma2: f64) -> Self {
        let mut it = v.iter().copied();
        let constant = if order.estimates_constant() {
            it.next().unwrap_or(0.0)
        } else {
            0.0
        };
        let mut take = |n: usize| it.by_ref().take(n).collect::<Vec<_>>();
        let ar = take(order.p);
        let ma = take(order.q);
        let sar = take(order.seasonal_p);
        let sma = take(order.seasonal_q);
        Self {
            ar,
            ma,
            sar,
            sma,
            constant,
            sigma2,
        }
    }
}

/// Multiplies out the seasonal and non-seasonal factors.
///
/// Returns `(full_ar, full_ma)` of lengths `p + m*P` and `q + m*Q`, where
/// `full_ar[i]` is the coefficient on lag `i + 1` in
/// `w_t = sum full_ar[i] w_{t-i-1} + e_t + sum full_ma[j] e_{t-j-1}`.
pub fn expand_polynomials(order: &ModelOrder, params: &SarimaParams) -> Result<(Vec<f64>, Vec<f64>)> {
    params.check_dims(order)?;
    let m = order.m;

    let lag_poly = |coeffs: &[f64], stride: usize, sign: f64| {
        let mut p = vec![0.0; coeffs.len() * stride + 1];
        p[0] = 1.0;
        for (i, c) in coeffs.iter().enumerate() {
            p[(i + 1) * stride] = sign * c;
        }
        p
    };

    let ar = poly::multiply(&lag_poly(&params.ar, 1, -1.0), &lag_poly(&params.sar, m, -1.0));
    let ma = poly::multiply(&lag_poly(&params.ma, 1, 1.0), &lag_poly(&params.sma, m, 1.0));

    let full_ar: Vec<f64> = ar[1..].iter().map(|c| -c).collect();
    let full_ma = ma[1..].to_vec();
    debug_assert_eq!(full_ar.len(), order.full_ar_degree());
    debug_assert_eq!(full_ma.len(), order.full_ma_degree());
    Ok((full_ar, full_ma))
}

//! Holdout accuracy metrics.

use std::fmt::Write as _;

use serde::Serialize;

use crate::error::{Error, Result};

/// Forecast accuracy over paired points, with error `e = actual - predicted`.
/// Percentage metrics are on a 0-100 scale.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct MetricsReport {
    pub mape: f64,
    pub me: f64,
    pub mae: f64,
    pub mpe: f64,
    pub rmse: f64,
    pub n: usize,
}

pub fn compute_metrics(actual: &[f64], predicted: &[f64]) -> Result<MetricsReport> {
    if actual.len() != predicted.len() {
        return Err(Error::LengthMismatch(actual.len(), predicted.len()));
    }
    if actual.is_empty() {
        return Err(Error::InvalidArgument("no points to compare".into()));
    }
    if let Some(i) = actual.iter().position(|&a| a == 0.0) {
        return Err(Error::ZeroActual(i));
    }

    let n = actual.len() as f64;
    let (mut me, mut mae, mut mse, mut mpe, mut mape) = (0.0, 0.0, 0.0, 0.0, 0.0);
    for (a, p) in actual.iter().zip(predicted) {
        let e = a - p;
        me += e;
        mae += e.abs();
        mse += e * e;
        mpe += 100.0 * e / a;
        mape += (100.0 * e / a).abs();
    }
    Ok(MetricsReport {
        mape: mape / n,
        me: me / n,
        mae: mae / n,
        mpe: mpe / n,
        rmse: (mse / n).sqrt(),
        n: actual.len(),
    })
}

impl MetricsReport {
    /// `(long name, abbreviation, value)` rows in report order.
    pub fn rows(&self) -> [(&'static str, &'static str, f64); 5] {
        [
            ("Mean Absolute Percentage Error", "MAPE", self.mape),
            ("Mean Error", "ME", self.me),
            ("Mean Absolute Error", "MAE", self.mae),
            ("Mean Percentage Error", "MPE", self.mpe),
            ("Root Mean Square Error", "RMSE", self.rmse),
        ]
    }

    pub fn to_text(&self) -> String {
        let mut out = String::new();
        for (name, abbr, v) in self.rows() {
            let _ = writeln!(out, "{name:<32} {abbr:<5} {v:>10.2}");
        }
        out
    }
}

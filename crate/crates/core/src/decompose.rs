//! Classical additive decomposition into trend, seasonal and residual parts.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::series::TimeSeries;

/// Aligned components. `trend` and `residual` are `None` for the first and
/// last `m/2` points, where the centred moving average is undefined.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct DecompositionResult {
    pub period: usize,
    pub observed: Vec<f64>,
    pub trend: Vec<Option<f64>>,
    pub seasonal: Vec<f64>,
    pub residual: Vec<Option<f64>>,
}

/// Trend is a centred moving average (`2 x m` for even `m`); the seasonal
/// component is the per-position mean of the detrended values, re-centred to
/// sum to zero over a period.
pub fn classical_decompose(series: &TimeSeries, m: usize) -> Result<DecompositionResult> {
    if m < 2 {
        return Err(Error::InvalidArgument("season length must be at least 2".into()));
    }
    let y = series.values();
    let n = y.len();
    if n < 2 * m {
        return Err(Error::TooShort { len: n, needed: 2 * m });
    }

    let half = m / 2;
    let mut trend = vec![None; n];
    for t in half..n - half {
        let window = &y[t - half..=t + half];
        let value = if m.is_multiple_of(2) {
            let inner: f64 = window[1..m].iter().sum();
            (0.5 * window[0] + inner + 0.5 * window[m]) / m as f64
        } else {
            window.iter().sum::<f64>() / m as f64
        };
        trend[t] = Some(value);
    }

    let mut sums = vec![0.0; m];
    let mut counts = vec![0usize; m];
    for (t, tr) in trend.iter().enumerate() {
        if let Some(tr) = tr {
            sums[t % m] += y[t] - tr;
            counts[t % m] += 1;
        }
    }
    let means: Vec<f64> = sums.iter().zip(&counts).map(|(s, &c)| s / c as f64).collect();
    let centre = means.iter().sum::<f64>() / m as f64;
    let index: Vec<f64> = means.iter().map(|v| v - centre).collect();

    let seasonal: Vec<f64> = (0..n).map(|t| index[t % m]).collect();
    let residual = trend
        .iter()
        .enumerate()
        .map(|(t, tr)| tr.map(|tr| y[t] - tr - seasonal[t]))
        .collect();

    Ok(DecompositionResult {
        period: m,
        observed: y.to_vec(),
        trend,
        seasonal,
        residual,
    })
}

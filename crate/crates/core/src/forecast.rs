//! Point forecasts with prediction intervals, and rolling one-step backtests.

use rayon::prelude::*;
use serde::Serialize;
use statrs::distribution::{ContinuousCDF, Normal};

use crate::error::{Error, Result};
use crate::model::{expand_polynomials, fit, FitResult, ModelOrder, SarimaParams, StateSpace};
use crate::poly;
use crate::series::{difference, differencing_polynomial, Period, TimeSeries};

/// Forecasts on the original scale.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ForecastResult {
    /// Period of the last observation used.
    pub origin: Period,
    pub horizon: usize,
    pub periods: Vec<Period>,
    pub point: Vec<f64>,
    pub lo: Vec<f64>,
    pub hi: Vec<f64>,
    /// Forecast-error standard deviation per step.
    pub sd: Vec<f64>,
    pub level: f64,
}

/// Forecasts `horizon` steps past the end of `series` with a fitted model.
pub fn forecast(fit: &FitResult, series: &TimeSeries, horizon: usize, level: f64) -> Result<ForecastResult> {
    forecast_with(&fit.order, &fit.params, series, horizon, level)
}

/// Forecasts with explicit parameters, treated as known.
///
/// Point forecasts come from the exact filter on the differenced scale and are
/// integrated back through the differencing recursion. Interval widths use the
/// psi-weights of `theta(B) / (phi(B) (1-B)^d (1-B^m)^D)`.
pub fn forecast_with(
    order: &ModelOrder,
    params: &SarimaParams,
    series: &TimeSeries,
    horizon: usize,
    level: f64,
) -> Result<ForecastResult> {
    if horizon == 0 {
        return Err(Error::InvalidArgument("horizon must be at least 1".into()));
    }
    if !(level > 0.0 && level < 1.0) {
        return Err(Error::InvalidArgument(format!("level {level} outside (0, 1)")));
    }
    if !(params.sigma2 > 0.0) {
        return Err(Error::InvalidArgument("sigma2 must be positive".into()));
    }
    let (full_ar, full_ma) = expand_polynomials(order, params)?;

    let w = difference(series.values(), order.d, order.seasonal_d, order.m)?;
    let centered: Vec<f64> = w.iter().map(|v| v - params.constant).collect();
    let ss = StateSpace::new(&full_ar, &full_ma)?;
    let filtered = ss.filter(&centered)?;

    let mut state = filtered.state;
    let mut w_hat = Vec::with_capacity(horizon);
    for _ in 0..horizon {
        w_hat.push(state[0] + params.constant);
        state = ss.transition(&state);
    }

    let delta = differencing_polynomial(order.d, order.seasonal_d, order.m);
    let mut y: Vec<f64> = series.values().to_vec();
    let n = y.len();
    for wh in &w_hat {
        let t = y.len();
        let carried: f64 = (1..delta.len()).map(|k| delta[k] * y[t - k]).sum();
        y.push(wh - carried);
    }
    let point = y[n..].to_vec();

    let mut ar_poly = vec![1.0];
    ar_poly.extend(full_ar.iter().map(|c| -c));
    let denominator = poly::multiply(&ar_poly, &delta);
    let mut numerator = vec![1.0];
    numerator.extend_from_slice(&full_ma);
    let psi = poly::divide_series(&numerator, &denominator, horizon);

    let z = Normal::standard().inverse_cdf(0.5 + level / 2.0);
    let mut acc = 0.0;
    let sd: Vec<f64> = psi
        .iter()
        .map(|p| {
            acc += p * p;
            (params.sigma2 * acc).sqrt()
        })
        .collect();
    let lo = point.iter().zip(&sd).map(|(p, s)| p - z * s).collect();
    let hi = point.iter().zip(&sd).map(|(p, s)| p + z * s).collect();

    let origin = series.end();
    let ppy = series.periods_per_year();
    Ok(ForecastResult {
        origin,
        horizon,
        periods: (1..=horizon as i64).map(|i| origin.offset(i, ppy)).collect(),
        point,
        lo,
        hi,
        sd,
        level,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct BacktestRow {
    pub period: Period,
    pub actual: f64,
    pub predicted: f64,
}

/// One-step-ahead predictions for every period in `window` (inclusive).
///
/// Each prediction uses only data strictly before its period. Without refit,
/// parameters are estimated once on the data preceding the window; with
/// refit they are re-estimated at every step.
pub fn rolling_one_step(
    series: &TimeSeries,
    order: &ModelOrder,
    window: (Period, Period),
    refit: bool,
) -> Result<Vec<BacktestRow>> {
    let (first, last) = window_indices(series, window)?;
    if refit {
        (first..=last)
            .into_par_iter()
            .map(|t| {
                let history = series.slice(0, t)?;
                let f = fit(&history, order)?;
                one_step(series, order, &f.params, t)
            })
            .collect()
    } else {
        let f = fit(&series.slice(0, first)?, order)?;
        rolling_one_step_with(series, order, &f.params, window)
    }
}

/// One-step-ahead predictions over `window` with fixed parameters.
pub fn rolling_one_step_with(
    series: &TimeSeries,
    order: &ModelOrder,
    params: &SarimaParams,
    window: (Period, Period),
) -> Result<Vec<BacktestRow>> {
    let (first, last) = window_indices(series, window)?;
    (first..=last).map(|t| one_step(series, order, params, t)).collect()
}

fn one_step(series: &TimeSeries, order: &ModelOrder, params: &SarimaParams, t: usize) -> Result<BacktestRow> {
    let history = series.slice(0, t)?;
    let fc = forecast_with(order, params, &history, 1, 0.95)?;
    Ok(BacktestRow {
        period: series.period_at(t),
        actual: series.values()[t],
        predicted: fc.point[0],
    })
}

fn window_indices(series: &TimeSeries, (start, end): (Period, Period)) -> Result<(usize, usize)> {
    let first = series.index_of(start).ok_or(Error::OutOfSpan(start))?;
    let last = series.index_of(end).ok_or(Error::OutOfSpan(end))?;
    if last < first {
        return Err(Error::InvalidArgument(format!("window {start}..{end} is reversed")));
    }
    if first == 0 {
        return Err(Error::EmptySplit(start));
    }
    Ok((first, last))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn monthly(values: Vec<f64>) -> TimeSeries {
        TimeSeries::monthly(values, 2010, 1).unwrap()
    }

    #[test]
    fn white_noise_forecast() {
        let o = ModelOrder::arima(0, 0, 0).unwrap();
        let s = monthly(vec![0.3, -0.1, 0.5, 1.0]);
        let f = forecast_with(&o, &SarimaParams::white_noise(1.0), &s, 3, 0.95).unwrap();
        assert_eq!(f.point, vec![0.0; 3]);
        for (lo, hi) in f.lo.iter().zip(&f.hi) {
            assert!((hi - 1.96).abs() < 1e-3 && (lo + 1.96).abs() < 1e-3);
        }
        assert_eq!(f.periods[0], Period::new(2010, 5));
        assert_eq!(f.origin, Period::new(2010, 4));
    }

    #[test]
    fn random_walk_forecast() {
        let o = ModelOrder::arima(0, 1, 0).unwrap();
        let s = monthly(vec![1.0, 4.0, 2.0, 7.5]);
        let f = forecast_with(&o, &SarimaParams::white_noise(4.0), &s, 5, 0.95).unwrap();
        assert_eq!(f.point, vec![7.5; 5]);
        for (h, sd) in f.sd.iter().enumerate() {
            assert!((sd - 2.0 * ((h + 1) as f64).sqrt()).abs() < 1e-12);
        }
    }

    #[test]
    fn ar1_forecast_decays() {
        let o = ModelOrder::arima(1, 0, 0).unwrap();
        let params = SarimaParams {
            ar: vec![0.5],
            ..SarimaParams::zeros(&o, 1.0)
        };
        let s = monthly(vec![0.2, -1.0, 3.0, 8.0]);
        let f = forecast_with(&o, &params, &s, 4, 0.9).unwrap();
        for (h, p) in f.point.iter().enumerate() {
            assert!((p - 8.0 * 0.5f64.powi(h as i32 + 1)).abs() < 1e-12);
        }
    }

    #[test]
    fn double_difference_continues_a_line() {
        let o = ModelOrder::arima(0, 2, 0).unwrap();
        let s = monthly((0..10).map(|t| 3.0 + 2.0 * t as f64).collect());
        let f = forecast_with(&o, &SarimaParams::white_noise(1e-12), &s, 4, 0.95).unwrap();
        for (h, p) in f.point.iter().enumerate() {
            assert!((p - (3.0 + 2.0 * (10 + h) as f64)).abs() < 1e-9);
        }
        // psi weights of 1/(1-B)^2 are 1, 2, 3, ...
        let var: Vec<f64> = f.sd.iter().map(|s| s * s / 1e-12).collect();
        assert!((var[2] - 14.0).abs() < 1e-6);
    }

    #[test]
    fn seasonal_difference_repeats_last_season() {
        let o = ModelOrder::new((0, 0, 0), (0, 1, 0, 4)).unwrap();
        let s = TimeSeries::new(vec![1.0, 5.0, 3.0, 2.0, 1.5, 5.5, 3.5, 2.5], Period::new(2000, 1), 4)
            .unwrap();
        let f = forecast_with(&o, &SarimaParams::white_noise(1.0), &s, 6, 0.95).unwrap();
        assert_eq!(f.point, vec![1.5, 5.5, 3.5, 2.5, 1.5, 5.5]);
        assert!(f.sd[3] == 1.0 && (f.sd[4] - 2f64.sqrt()).abs() < 1e-12);
    }

    #[test]
    fn interval_bounds_ordered_and_widening() {
        let o = ModelOrder::new((1, 1, 1), (1, 1, 0, 12)).unwrap();
        let params = SarimaParams {
            ar: vec![0.3],
            ma: vec![-0.4],
            sar: vec![-0.5],
            ..SarimaParams::zeros(&o, 2.0)
        };
        let s = crate::model::simulate(&o, &params, 80, 1).unwrap();
        let f = forecast_with(&o, &params, &s, 24, 0.8).unwrap();
        for i in 0..24 {
            assert!(f.lo[i] <= f.point[i] && f.point[i] <= f.hi[i]);
            if i > 0 {
                assert!(f.hi[i] - f.point[i] >= f.hi[i - 1] - f.point[i - 1]);
            }
        }
    }

    #[test]
    fn argument_errors() {
        let o = ModelOrder::arima(0, 0, 0).unwrap();
        let s = monthly(vec![1.0, 2.0]);
        let p = SarimaParams::white_noise(1.0);
        assert!(forecast_with(&o, &p, &s, 0, 0.95).is_err());
        assert!(forecast_with(&o, &p, &s, 1, 1.0).is_err());
    }

    #[test]
    fn random_walk_backtest_is_previous_value() {
        let o = ModelOrder::arima(0, 1, 0).unwrap();
        let values: Vec<f64> = (0..30).map(|t| ((t * 7919) % 13) as f64 + 100.0).collect();
        let s = monthly(values.clone());
        let rows = rolling_one_step(&s, &o, (Period::new(2011, 1), Period::new(2011, 12)), false).unwrap();
        assert_eq!(rows.len(), 12);
        for (i, row) in rows.iter().enumerate() {
            assert_eq!(row.actual, values[12 + i]);
            assert!((row.predicted - values[11 + i]).abs() < 1e-9);
        }
    }

    #[test]
    fn window_errors() {
        let o = ModelOrder::arima(1, 0, 0).unwrap();
        let s = monthly((0..30).map(|t| (t as f64).sin()).collect());
        assert!(rolling_one_step(&s, &o, (Period::new(2010, 1), Period::new(2010, 3)), false).is_err());
        assert!(rolling_one_step(&s, &o, (Period::new(2010, 3), Period::new(2010, 8)), false).is_err());
        assert!(rolling_one_step(&s, &o, (Period::new(2011, 3), Period::new(2011, 1)), false).is_err());
        assert!(rolling_one_step(&s, &o, (Period::new(2012, 1), Period::new(2013, 1)), false).is_err());
    }
}

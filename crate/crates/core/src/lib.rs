//! Seasonal ARIMA forecasting for monthly series.
//!
//! The pipeline: resample daily quotes to monthly means ([`series`]), inspect a
//! classical decomposition ([`decompose`]), fit `(p,d,q)x(P,D,Q,m)` models by
//! exact maximum likelihood ([`model`]), pick an order by AIC over a grid
//! ([`selection`]), backtest and forecast with intervals ([`forecast`]), and
//! score holdout accuracy ([`metrics`]).

pub mod decompose;
pub mod error;
pub mod forecast;
pub mod io;
pub mod metrics;
pub mod model;
pub mod optim;
pub mod poly;
pub mod selection;
pub mod series;

pub use decompose::{classical_decompose, DecompositionResult};
pub use error::{Error, Result};
pub use forecast::{forecast, forecast_with, rolling_one_step, rolling_one_step_with, BacktestRow, ForecastResult};
pub use metrics::{compute_metrics, MetricsReport};
pub use model::{
    coefficient_table, expand_polynomials, fit, log_likelihood, simulate, CoefficientTable, FitResult, ModelOrder,
    SarimaParams,
};
pub use selection::{aic, grid_search, grid_search_with, GridResult, GridSpec, SearchOptions};
pub use series::{difference, integrate, resample_monthly_mean, DailyQuotes, Period, TimeSeries};

//! The single-step subcommands and the helpers shared with the pipeline.

use std::fs::File;
use std::io::{BufRead, BufReader, Read};
use std::path::Path;

use sarima_core::io::{is_series_header, read_daily_quotes, read_series_csv, write_series_csv, QuoteColumns};
use sarima_core::model::FitResult;
use sarima_core::{
    classical_decompose, coefficient_table, compute_metrics, fit, forecast, grid_search_with, resample_monthly_mean,
    rolling_one_step, BacktestRow, ForecastResult, GridResult, GridSpec, MetricsReport, ModelOrder, Period,
    SearchOptions, TimeSeries,
};
use serde::Serialize;

use crate::args::{GlobalOpts, GridArgs, ModelArgs};
use crate::error::CliError;
use crate::figures;
use crate::output::{OutputDir, Table};

/// Where the monthly series came from.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum InputKind {
    DailyQuotes,
    MonthlySeries,
}

/// Reads the input as a `period,value` series when the header says so,
/// otherwise as daily quotes resampled to monthly means.
pub fn load_series(global: &GlobalOpts) -> Result<(TimeSeries, InputKind), CliError> {
    let path = global.input()?;
    let read_err = |e| CliError::Input {
        path: path.clone(),
        source: e,
    };
    let mut reader = BufReader::new(File::open(path).map_err(read_err)?);
    let first = {
        let buf = reader.fill_buf().map_err(read_err)?;
        let end = buf.iter().position(|b| *b == b'\n').unwrap_or(buf.len());
        String::from_utf8_lossy(&buf[..end]).trim_start_matches('\u{feff}').to_string()
    };
    if is_series_header(&first) {
        return Ok((read_series_csv(reader)?, InputKind::MonthlySeries));
    }
    let columns = QuoteColumns {
        date: global.date_column.clone(),
        close: global.close_column.clone(),
    };
    let quotes = read_daily_quotes(skip_bom(reader), &columns)?;
    Ok((resample_monthly_mean(&quotes)?, InputKind::DailyQuotes))
}

fn skip_bom<R: BufRead>(mut r: R) -> impl Read {
    if let Ok(buf) = r.fill_buf() {
        if buf.starts_with(&[0xEF, 0xBB, 0xBF]) {
            r.consume(3);
        }
    }
    r
}

pub fn model_order(m: &ModelArgs) -> Result<ModelOrder, CliError> {
    let (p, d, q) = m.order;
    Ok(ModelOrder::new((p, d, q), m.seasonal)?)
}

pub fn grid_spec(g: &GridArgs) -> GridSpec {
    let pick = |o: &Option<crate::args::Choices>| o.as_ref().unwrap_or(&g.grid).0.clone();
    GridSpec {
        p: pick(&g.grid_p),
        d: pick(&g.grid_d),
        q: pick(&g.grid_q),
        seasonal_p: pick(&g.grid_sp),
        seasonal_d: pick(&g.grid_sd),
        seasonal_q: pick(&g.grid_sq),
        m: g.period,
        ..GridSpec::default()
    }
}

pub fn search_options(global: &GlobalOpts) -> Result<SearchOptions, CliError> {
    if global.jobs == Some(0) {
        return Err(CliError::Config("--jobs must be at least 1".into()));
    }
    Ok(SearchOptions {
        jobs: global.jobs,
        ..Default::default()
    })
}

pub fn check_level(level: f64) -> Result<(), CliError> {
    if level > 0.0 && level < 1.0 {
        Ok(())
    } else {
        Err(CliError::Config(format!("--level must lie in (0, 1), got {level}")))
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct SeriesSummary {
    pub source: InputKind,
    pub start: String,
    pub end: String,
    pub n: usize,
    pub min: f64,
    pub max: f64,
    pub mean: f64,
}

impl SeriesSummary {
    pub fn new(s: &TimeSeries, source: InputKind) -> Self {
        let v = s.values();
        Self {
            source,
            start: s.start().to_string(),
            end: s.end().to_string(),
            n: v.len(),
            min: v.iter().copied().fold(f64::INFINITY, f64::min),
            max: v.iter().copied().fold(f64::NEG_INFINITY, f64::max),
            mean: v.iter().sum::<f64>() / v.len() as f64,
        }
    }
}

/// Order identity plus its display label.
#[derive(Debug, Clone, Serialize)]
pub struct OrderInfo {
    pub label: String,
    pub p: usize,
    pub d: usize,
    pub q: usize,
    #[serde(rename = "P")]
    pub seasonal_p: usize,
    #[serde(rename = "D")]
    pub seasonal_d: usize,
    #[serde(rename = "Q")]
    pub seasonal_q: usize,
    pub m: usize,
}

impl From<&ModelOrder> for OrderInfo {
    fn from(o: &ModelOrder) -> Self {
        Self {
            label: o.to_string(),
            p: o.p,
            d: o.d,
            q: o.q,
            seasonal_p: o.seasonal_p,
            seasonal_d: o.seasonal_d,
            seasonal_q: o.seasonal_q,
            m: o.m,
        }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct FitSummary {
    pub order: OrderInfo,
    pub sample: (String, String),
    pub n_effective: usize,
    pub loglik: f64,
    pub aic: f64,
    pub k: usize,
    pub converged: bool,
    pub iterations: usize,
    pub coefficients: Vec<sarima_core::model::CoefficientRow>,
}

impl FitSummary {
    pub fn new(f: &FitResult, sample: &TimeSeries) -> Self {
        Self {
            order: (&f.order).into(),
            sample: (sample.start().to_string(), sample.end().to_string()),
            n_effective: f.n_effective,
            loglik: f.loglik,
            aic: f.aic,
            k: f.n_params(),
            converged: f.converged,
            iterations: f.iterations,
            coefficients: coefficient_table(f).rows,
        }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct SelectionSummary {
    pub attempted: usize,
    pub ranked: usize,
    pub failed: usize,
    pub not_converged: usize,
    pub winner: WinnerInfo,
    pub failures: Vec<FailureInfo>,
}

#[derive(Debug, Clone, Serialize)]
pub struct WinnerInfo {
    pub order: OrderInfo,
    pub k: usize,
    pub loglik: f64,
    pub aic: f64,
}

#[derive(Debug, Clone, Serialize)]
pub struct FailureInfo {
    pub order: String,
    pub reason: String,
}

impl SelectionSummary {
    /// Fails when no candidate converged.
    pub fn new(grid: &GridResult) -> Result<Self, CliError> {
        let w = grid
            .winner()
            .ok_or(sarima_core::Error::AllFitsFailed(grid.attempted()))?;
        Ok(Self {
            attempted: grid.attempted(),
            ranked: grid.ranked.len(),
            failed: grid.failures.len(),
            not_converged: grid.ranked.iter().filter(|c| !c.converged).count(),
            winner: WinnerInfo {
                order: (&w.order).into(),
                k: w.k,
                loglik: w.loglik,
                aic: w.aic,
            },
            failures: grid
                .failures
                .iter()
                .map(|f| {
                    let [p, d, q, sp, sd, sq] = f.combination;
                    FailureInfo {
                        order: format!("SARIMA({p},{d},{q})x({sp},{sd},{sq},{})", f.m),
                        reason: f.reason.clone(),
                    }
                })
                .collect(),
        })
    }
}

pub fn ranking_table(grid: &GridResult) -> Table {
    let mut t = Table::new(&["p", "d", "q", "P", "D", "Q", "m", "k", "loglik", "aic", "converged"]);
    for c in &grid.ranked {
        let o = c.order;
        t.push(vec![
            o.p.to_string(),
            o.d.to_string(),
            o.q.to_string(),
            o.seasonal_p.to_string(),
            o.seasonal_d.to_string(),
            o.seasonal_q.to_string(),
            o.m.to_string(),
            c.k.to_string(),
            c.loglik.to_string(),
            c.aic.to_string(),
            c.converged.to_string(),
        ]);
    }
    t
}

#[derive(Debug, Clone, Serialize)]
pub struct ActualPredicted {
    pub period: String,
    pub actual: f64,
    pub predicted: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub lo: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub hi: Option<f64>,
}

pub fn backtest_rows(rows: &[BacktestRow]) -> Vec<ActualPredicted> {
    rows.iter()
        .map(|r| ActualPredicted {
            period: r.period.to_string(),
            actual: r.actual,
            predicted: r.predicted,
            lo: None,
            hi: None,
        })
        .collect()
}

pub fn backtest_outputs(out: &mut OutputDir, rows: &[BacktestRow]) -> Result<MetricsReport, CliError> {
    let mut t = Table::new(&["period", "actual", "predicted"]);
    for r in rows {
        t.push(vec![r.period.to_string(), r.actual.to_string(), r.predicted.to_string()]);
    }
    out.table("backtest.csv", &t)?;
    let periods: Vec<Period> = rows.iter().map(|r| r.period).collect();
    let actual: Vec<f64> = rows.iter().map(|r| r.actual).collect();
    let predicted: Vec<f64> = rows.iter().map(|r| r.predicted).collect();
    out.figure(&figures::actual_vs_predicted(
        "fig5_backtest",
        "Rolling one-step-ahead predictions",
        &periods,
        &actual,
        &predicted,
        None,
    ))?;
    Ok(compute_metrics(&actual, &predicted)?)
}

/// Multi-step forecast over the holdout from a fit on everything before it.
pub struct Holdout {
    pub fit: FitResult,
    pub forecast: ForecastResult,
    pub actual: Vec<f64>,
    pub metrics: MetricsReport,
}

pub fn evaluate_holdout(
    series: &TimeSeries,
    order: &ModelOrder,
    (start, end): (Period, Period),
    level: f64,
) -> Result<Holdout, CliError> {
    let first = series.index_of(start).ok_or(sarima_core::Error::OutOfSpan(start))?;
    let last = series.index_of(end).ok_or(sarima_core::Error::OutOfSpan(end))?;
    if last < first {
        return Err(CliError::Config(format!("holdout window {start}:{end} is reversed")));
    }
    let (history, _) = series.split(start)?;
    let f = fit(&history, order)?;
    let fc = forecast(&f, &history, last - first + 1, level)?;
    let actual = series.values()[first..=last].to_vec();
    let metrics = compute_metrics(&actual, &fc.point)?;
    Ok(Holdout {
        fit: f,
        forecast: fc,
        actual,
        metrics,
    })
}

pub fn holdout_rows(h: &Holdout) -> Vec<ActualPredicted> {
    (0..h.actual.len())
        .map(|i| ActualPredicted {
            period: h.forecast.periods[i].to_string(),
            actual: h.actual[i],
            predicted: h.forecast.point[i],
            lo: Some(h.forecast.lo[i]),
            hi: Some(h.forecast.hi[i]),
        })
        .collect()
}

pub fn holdout_outputs(out: &mut OutputDir, h: &Holdout) -> Result<(), CliError> {
    let fc = &h.forecast;
    let mut t = Table::new(&["period", "actual", "predicted", "lo", "hi"]);
    for (i, a) in h.actual.iter().enumerate() {
        t.push(vec![
            fc.periods[i].to_string(),
            a.to_string(),
            fc.point[i].to_string(),
            fc.lo[i].to_string(),
            fc.hi[i].to_string(),
        ]);
    }
    out.table("holdout.csv", &t)?;
    out.text("metrics.txt", &h.metrics.to_text())?;
    out.json("metrics.json", &h.metrics)?;
    out.figure(&figures::actual_vs_predicted(
        "fig6_holdout",
        "Holdout: forecast against actual",
        &fc.periods,
        &h.actual,
        &fc.point,
        Some((&fc.lo, &fc.hi)),
    ))
}

#[derive(Debug, Clone, Serialize)]
pub struct ForecastRow {
    pub period: String,
    pub point: f64,
    pub lo: f64,
    pub hi: f64,
}

pub fn forecast_rows(fc: &ForecastResult) -> Vec<ForecastRow> {
    (0..fc.horizon)
        .map(|i| ForecastRow {
            period: fc.periods[i].to_string(),
            point: fc.point[i],
            lo: fc.lo[i],
            hi: fc.hi[i],
        })
        .collect()
}

pub fn forecast_outputs(out: &mut OutputDir, series: &TimeSeries, fc: &ForecastResult) -> Result<(), CliError> {
    let mut t = Table::new(&["period", "point", "lo", "hi"]);
    for r in forecast_rows(fc) {
        t.push(vec![r.period, r.point.to_string(), r.lo.to_string(), r.hi.to_string()]);
    }
    out.table("forecast.csv", &t)?;
    out.figure(&figures::forecast_fan(series, fc))
}

fn restrict(series: TimeSeries, end: Option<Period>) -> Result<TimeSeries, CliError> {
    Ok(match end {
        Some(e) => series.through(e)?,
        None => series,
    })
}

fn input_name(global: &GlobalOpts) -> String {
    global
        .input
        .as_deref()
        .and_then(Path::file_name)
        .map_or_else(|| "input".into(), |n| n.to_string_lossy().into_owned())
}

pub fn ingest(global: &GlobalOpts) -> Result<(), CliError> {
    let (series, kind) = load_series(global)?;
    let mut out = OutputDir::create(&global.out, global.plots)?;
    let mut buf = Vec::new();
    write_series_csv(&mut buf, &series)?;
    out.text("series.csv", &String::from_utf8_lossy(&buf))?;
    let summary = SeriesSummary::new(&series, kind);
    out.json("summary.json", &summary)?;
    out.figure(&figures::series_line(&series, &input_name(global)))?;
    out.figure(&figures::yearly_boxplot(&series))?;
    out.figure(&figures::monthly_overlay(&series))?;
    println!(
        "{} monthly values, {} to {}, min {:.2}, max {:.2}",
        summary.n, summary.start, summary.end, summary.min, summary.max
    );
    Ok(())
}

pub fn decompose(global: &GlobalOpts, period: usize) -> Result<(), CliError> {
    let (series, _) = load_series(global)?;
    let d = classical_decompose(&series, period)?;
    let mut out = OutputDir::create(&global.out, global.plots)?;
    out.table("decomposition.csv", &figures::decomposition_table(&series, &d))?;
    out.figure(&figures::decomposition(&series, &d))?;
    println!("decomposed {} values with period {period}", series.len());
    Ok(())
}

pub fn fit_cmd(global: &GlobalOpts, model: &ModelArgs, end: Option<Period>) -> Result<(), CliError> {
    let order = model_order(model)?;
    let (series, _) = load_series(global)?;
    let sample = restrict(series, end)?;
    let f = fit(&sample, &order)?;
    let table = coefficient_table(&f);
    let mut out = OutputDir::create(&global.out, global.plots)?;
    out.text("coefficients.txt", &table.to_text())?;
    out.json("fit.json", &FitSummary::new(&f, &sample))?;
    println!("{order}  loglik {:.2}  AIC {:.2}  converged {}", f.loglik, f.aic, f.converged);
    print!("{table}");
    Ok(())
}

pub fn select(global: &GlobalOpts, grid: &GridArgs, end: Option<Period>) -> Result<(), CliError> {
    let spec = grid_spec(grid);
    let opts = search_options(global)?;
    let (series, _) = load_series(global)?;
    let sample = restrict(series, end)?;
    let result = grid_search_with(&sample, &spec, &opts)?;
    let mut out = OutputDir::create(&global.out, global.plots)?;
    out.table("ranking.csv", &ranking_table(&result))?;
    out.figure(&figures::aic_by_rank(&result))?;
    let summary = SelectionSummary::new(&result)?;
    out.json("selection.json", &summary)?;
    println!(
        "{} orders attempted, {} ranked, {} failed; best {} with AIC {:.2}",
        summary.attempted, summary.ranked, summary.failed, summary.winner.order.label, summary.winner.aic
    );
    Ok(())
}

pub fn backtest(global: &GlobalOpts, model: &ModelArgs, window: (Period, Period), refit: bool) -> Result<(), CliError> {
    let order = model_order(model)?;
    let (series, _) = load_series(global)?;
    let rows = rolling_one_step(&series, &order, window, refit)?;
    let mut out = OutputDir::create(&global.out, global.plots)?;
    let metrics = backtest_outputs(&mut out, &rows)?;
    print!("{}", metrics.to_text());
    Ok(())
}

pub fn validate(global: &GlobalOpts, model: &ModelArgs, holdout: (Period, Period)) -> Result<(), CliError> {
    let order = model_order(model)?;
    let (series, _) = load_series(global)?;
    let h = evaluate_holdout(&series, &order, holdout, 0.95)?;
    let mut out = OutputDir::create(&global.out, global.plots)?;
    holdout_outputs(&mut out, &h)?;
    print!("{}", h.metrics.to_text());
    Ok(())
}

pub fn forecast_cmd(global: &GlobalOpts, model: &ModelArgs, horizon: usize, level: f64) -> Result<(), CliError> {
    check_level(level)?;
    if horizon == 0 {
        return Err(CliError::Config("--horizon must be at least 1".into()));
    }
    let order = model_order(model)?;
    let (series, _) = load_series(global)?;
    let f = fit(&series, &order)?;
    let fc = forecast(&f, &series, horizon, level)?;
    let mut out = OutputDir::create(&global.out, global.plots)?;
    forecast_outputs(&mut out, &series, &fc)?;
    for r in forecast_rows(&fc) {
        println!("{}  {:>12.2}  [{:.2}, {:.2}]", r.period, r.point, r.lo, r.hi);
    }
    Ok(())
}

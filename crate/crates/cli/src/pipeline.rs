//! End-to-end run: select on the training span, backtest, score the holdout,
//! refit on everything and forecast. Writes `report.json` whatever happens.

use std::time::Instant;

use sarima_core::{
    coefficient_table, fit, forecast, grid_search_with, rolling_one_step, rolling_one_step_with, MetricsReport,
    ModelOrder, Period, TimeSeries,
};
use serde::Serialize;

use crate::args::{GlobalOpts, PipelineArgs};
use crate::commands::{
    backtest_outputs, backtest_rows, check_level, evaluate_holdout, forecast_outputs, forecast_rows, grid_spec,
    holdout_outputs, holdout_rows, load_series, ranking_table, search_options, ActualPredicted, FitSummary,
    ForecastRow, OrderInfo, SelectionSummary, SeriesSummary,
};
use crate::error::CliError;
use crate::figures;
use crate::output::OutputDir;

/// Everything in `report.json`. Contains no timestamps, paths to the output
/// directory or thread counts, so identical inputs give identical bytes.
#[derive(Debug, Clone, Default, Serialize)]
pub struct Report {
    pub status: &'static str,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub error: Option<FailureMarker>,
    pub config: Option<ConfigEcho>,
    pub data: Option<SeriesSummary>,
    pub selection: Option<SelectionSummary>,
    pub training_fit: Option<FitSummary>,
    pub backtest: Option<WindowResult>,
    pub holdout: Option<WindowResult>,
    pub final_fit: Option<FitSummary>,
    pub forecast: Option<ForecastSection>,
    /// Files written under the output directory, in order.
    pub outputs: Vec<String>,
}

#[derive(Debug, Clone, Serialize)]
pub struct FailureMarker {
    pub stage: &'static str,
    pub message: String,
    pub exit_code: i32,
}

#[derive(Debug, Clone, Serialize)]
pub struct ConfigEcho {
    pub input: String,
    pub date_column: String,
    pub close_column: String,
    pub train_end: String,
    pub backtest: (String, String),
    pub holdout: (String, String),
    pub horizon: usize,
    pub level: f64,
    pub refit: bool,
    pub seed: u64,
    pub grid: GridEcho,
}

#[derive(Debug, Clone, Serialize)]
pub struct GridEcho {
    pub p: Vec<usize>,
    pub d: Vec<usize>,
    pub q: Vec<usize>,
    #[serde(rename = "P")]
    pub seasonal_p: Vec<usize>,
    #[serde(rename = "D")]
    pub seasonal_d: Vec<usize>,
    #[serde(rename = "Q")]
    pub seasonal_q: Vec<usize>,
    pub m: usize,
    pub size: usize,
}

#[derive(Debug, Clone, Serialize)]
pub struct WindowResult {
    pub window: (String, String),
    pub rows: Vec<ActualPredicted>,
    pub metrics: MetricsReport,
}

#[derive(Debug, Clone, Serialize)]
pub struct ForecastSection {
    pub origin: String,
    pub horizon: usize,
    pub level: f64,
    pub order: OrderInfo,
    pub rows: Vec<ForecastRow>,
}

/// Run metadata that legitimately varies between runs; kept out of the report.
#[derive(Debug, Serialize)]
struct RunInfo {
    jobs: Option<usize>,
    elapsed_seconds: f64,
}

fn window_str((a, b): (Period, Period)) -> (String, String) {
    (a.to_string(), b.to_string())
}

/// `train_end < backtest <= holdout`, non-overlapping, all inside the series;
/// the forecast origin is the end of the series.
pub fn validate_windows(series: &TimeSeries, args: &PipelineArgs) -> Result<(), CliError> {
    let (bs, be) = args.backtest;
    let (hs, he) = args.holdout;
    let order_err = |what: &str| Err(CliError::Config(what.to_string()));
    if be < bs {
        return order_err("backtest window is reversed");
    }
    if he < hs {
        return order_err("holdout window is reversed");
    }
    if bs <= args.train_end {
        return order_err("backtest window must start after --train-end");
    }
    if hs <= be {
        return order_err("holdout window must start after the backtest window ends");
    }
    for p in [args.train_end, bs, be, hs, he] {
        if series.index_of(p).is_none() {
            return Err(CliError::Config(format!(
                "period {p} lies outside the data span {}..{}",
                series.start(),
                series.end()
            )));
        }
    }
    if args.train_end < series.start() {
        return order_err("training span is empty");
    }
    if args.horizon == 0 {
        return order_err("--horizon must be at least 1");
    }
    check_level(args.level)
}

struct Runner<'a> {
    global: &'a GlobalOpts,
    args: &'a PipelineArgs,
    report: Report,
    stage: &'static str,
}

pub fn run(global: &GlobalOpts, args: &PipelineArgs) -> Result<(), CliError> {
    let started = Instant::now();
    let mut out = OutputDir::create(&global.out, global.plots)?;
    let mut runner = Runner {
        global,
        args,
        report: Report {
            status: "running",
            ..Default::default()
        },
        stage: "config",
    };
    let result = runner.execute(&mut out);
    let mut report = runner.report;
    report.status = if result.is_ok() { "ok" } else { "failed" };
    if let Err(e) = &result {
        report.error = Some(FailureMarker {
            stage: runner.stage,
            message: e.to_string(),
            exit_code: e.exit_code(),
        });
    }
    let info = RunInfo {
        jobs: global.jobs,
        elapsed_seconds: started.elapsed().as_secs_f64(),
    };
    out.json("run_info.json", &info)?;
    report.outputs = out.written().to_vec();
    report.outputs.push("report.json".into());
    out.json("report.json", &report)?;
    result
}

impl Runner<'_> {
    fn execute(&mut self, out: &mut OutputDir) -> Result<(), CliError> {
        let (global, args) = (self.global, self.args);
        let spec = grid_spec(&args.grid);
        self.report.config = Some(ConfigEcho {
            input: global.input.as_ref().map_or_else(String::new, |p| p.display().to_string()),
            date_column: global.date_column.clone(),
            close_column: global.close_column.clone(),
            train_end: args.train_end.to_string(),
            backtest: window_str(args.backtest),
            holdout: window_str(args.holdout),
            horizon: args.horizon,
            level: args.level,
            refit: args.refit,
            seed: global.seed,
            grid: GridEcho {
                p: spec.p.clone(),
                d: spec.d.clone(),
                q: spec.q.clone(),
                seasonal_p: spec.seasonal_p.clone(),
                seasonal_d: spec.seasonal_d.clone(),
                seasonal_q: spec.seasonal_q.clone(),
                m: spec.m,
                size: spec.size(),
            },
        });
        let opts = search_options(global)?;

        self.stage = "load";
        let (series, kind) = load_series(global)?;
        self.report.data = Some(SeriesSummary::new(&series, kind));
        self.stage = "config";
        validate_windows(&series, args)?;

        self.stage = "selection";
        let train = series.through(args.train_end)?;
        let grid = grid_search_with(&train, &spec, &opts)?;
        out.table("ranking.csv", &ranking_table(&grid))?;
        out.figure(&figures::aic_by_rank(&grid))?;
        let selection = SelectionSummary::new(&grid)?;
        let order: ModelOrder = grid.winner().expect("selection summary checked the winner").order;
        self.report.selection = Some(selection);
        println!("selected {order} on {}..{}", train.start(), train.end());

        self.stage = "training_fit";
        let train_fit = fit(&train, &order)?;
        let table = coefficient_table(&train_fit);
        out.text("coefficients.txt", &table.to_text())?;
        print!("{table}");
        self.report.training_fit = Some(FitSummary::new(&train_fit, &train));

        self.stage = "backtest";
        let rows = if args.refit {
            rolling_one_step(&series, &order, args.backtest, true)?
        } else {
            rolling_one_step_with(&series, &order, &train_fit.params, args.backtest)?
        };
        let bt_metrics = backtest_outputs(out, &rows)?;
        self.report.backtest = Some(WindowResult {
            window: window_str(args.backtest),
            rows: backtest_rows(&rows),
            metrics: bt_metrics,
        });

        self.stage = "holdout";
        let h = evaluate_holdout(&series, &order, args.holdout, args.level)?;
        holdout_outputs(out, &h)?;
        print!("{}", h.metrics.to_text());
        self.report.holdout = Some(WindowResult {
            window: window_str(args.holdout),
            rows: holdout_rows(&h),
            metrics: h.metrics,
        });

        self.stage = "forecast";
        let final_fit = fit(&series, &order)?;
        let fc = forecast(&final_fit, &series, args.horizon, args.level)?;
        forecast_outputs(out, &series, &fc)?;
        self.report.final_fit = Some(FitSummary::new(&final_fit, &series));
        self.report.forecast = Some(ForecastSection {
            origin: fc.origin.to_string(),
            horizon: fc.horizon,
            level: fc.level,
            order: (&order).into(),
            rows: forecast_rows(&fc),
        });
        Ok(())
    }
}

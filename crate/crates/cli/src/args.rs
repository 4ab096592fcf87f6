use std::path::PathBuf;

use clap::{Args, Parser, Subcommand};
use sarima_core::Period;

use crate::error::CliError;

#[derive(Debug, Parser)]
#[command(name = "sarima", version, about = "Seasonal ARIMA modelling of monthly series")]
pub struct Cli {
    #[command(flatten)]
    pub global: GlobalOpts,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, Args)]
pub struct GlobalOpts {
    /// Daily quotes CSV, or a normalized `period,value` monthly series.
    #[arg(long, global = true)]
    pub input: Option<PathBuf>,

    /// Output directory (created if missing).
    #[arg(long, global = true, default_value = "out")]
    pub out: PathBuf,

    /// Worker threads for the order search (default: available parallelism).
    #[arg(long, global = true)]
    pub jobs: Option<usize>,

    /// Seed recorded in the run report.
    #[arg(long, global = true, default_value_t = 42)]
    pub seed: u64,

    /// Also write SVG figures next to their CSV twins.
    #[arg(long, global = true)]
    pub plots: bool,

    /// Date column of a daily quotes file.
    #[arg(long, global = true, default_value = "Date")]
    pub date_column: String,

    /// Close column of a daily quotes file.
    #[arg(long, global = true, default_value = "Close")]
    pub close_column: String,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Resample daily quotes to monthly means and write `series.csv`.
    Ingest,
    /// Classical additive decomposition.
    Decompose {
        #[arg(long, default_value_t = 12)]
        period: usize,
    },
    /// Fit one order and print its coefficient table.
    Fit {
        #[command(flatten)]
        model: ModelArgs,
        /// Last period used for fitting (default: end of series).
        #[arg(long, value_parser = parse_period)]
        end: Option<Period>,
    },
    /// Fit every order in a grid and rank by AIC.
    Select {
        #[command(flatten)]
        grid: GridArgs,
        /// Last period used for fitting (default: end of series).
        #[arg(long, value_parser = parse_period)]
        end: Option<Period>,
    },
    /// Rolling one-step-ahead predictions over a window.
    Backtest {
        #[command(flatten)]
        model: ModelArgs,
        #[arg(long, value_parser = parse_window)]
        window: (Period, Period),
        /// Re-estimate at every step instead of once before the window.
        #[arg(long)]
        refit: bool,
    },
    /// Multi-step forecast over a holdout window scored with accuracy metrics.
    Validate {
        #[command(flatten)]
        model: ModelArgs,
        #[arg(long, value_parser = parse_window)]
        holdout: (Period, Period),
    },
    /// Forecast beyond the end of the series.
    Forecast {
        #[command(flatten)]
        model: ModelArgs,
        /// Months to forecast past the end of the series.
        #[arg(long, default_value_t = 12)]
        horizon: usize,
        /// Prediction interval coverage, in (0, 1).
        #[arg(long, default_value_t = 0.95)]
        level: f64,
    },
    /// Selection, backtest, holdout scoring and forecast in one run.
    Pipeline(PipelineArgs),
}

#[derive(Debug, Clone, Args)]
pub struct ModelArgs {
    /// Non-seasonal order `p,d,q`.
    #[arg(long, value_parser = parse_triple)]
    pub order: (usize, usize, usize),

    /// Seasonal order `P,D,Q,m`.
    #[arg(long, value_parser = parse_seasonal, default_value = "0,0,0,12")]
    pub seasonal: (usize, usize, usize, usize),
}

#[derive(Debug, Clone, Args)]
pub struct GridArgs {
    /// Range applied to all six order components: `lo..hi` (inclusive) or `a,b,c`.
    #[arg(long, value_parser = parse_range, default_value = "0..2")]
    pub grid: Choices,
    /// Override for p.
    #[arg(long, value_parser = parse_range)]
    pub grid_p: Option<Choices>,
    /// Override for d.
    #[arg(long, value_parser = parse_range)]
    pub grid_d: Option<Choices>,
    /// Override for q.
    #[arg(long, value_parser = parse_range)]
    pub grid_q: Option<Choices>,
    /// Override for P.
    #[arg(long = "grid-P", value_parser = parse_range)]
    pub grid_sp: Option<Choices>,
    /// Override for D.
    #[arg(long = "grid-D", value_parser = parse_range)]
    pub grid_sd: Option<Choices>,
    /// Override for Q.
    #[arg(long = "grid-Q", value_parser = parse_range)]
    pub grid_sq: Option<Choices>,
    /// Season length.
    #[arg(long, default_value_t = 12)]
    pub period: usize,
}

#[derive(Debug, Clone, Args)]
pub struct PipelineArgs {
    /// Last training period.
    #[arg(long, value_parser = parse_period, default_value = "2017-12")]
    pub train_end: Period,
    /// Rolling one-step window `start:end`.
    #[arg(long, value_parser = parse_window, default_value = "2018-01:2018-12")]
    pub backtest: (Period, Period),
    /// Holdout window `start:end`.
    #[arg(long, value_parser = parse_window, default_value = "2019-01:2019-06")]
    pub holdout: (Period, Period),
    /// Months to forecast past the end of the series.
    #[arg(long, default_value_t = 12)]
    pub horizon: usize,
    /// Prediction interval coverage, in (0, 1).
    #[arg(long, default_value_t = 0.95)]
    pub level: f64,
    #[command(flatten)]
    pub grid: GridArgs,
    /// Re-estimate at every backtest step.
    #[arg(long)]
    pub refit: bool,
}

fn parse_period(s: &str) -> Result<Period, String> {
    s.parse::<Period>().map_err(|e| e.to_string())
}

fn parse_window(s: &str) -> Result<(Period, Period), String> {
    let (a, b) = s.split_once(':').ok_or("expected START:END, e.g. 2018-01:2018-12")?;
    Ok((parse_period(a)?, parse_period(b)?))
}

fn parse_list(s: &str, n: usize) -> Result<Vec<usize>, String> {
    let v: Vec<usize> = s
        .split(',')
        .map(|x| x.trim().parse::<usize>().map_err(|e| format!("{x:?}: {e}")))
        .collect::<Result<_, _>>()?;
    if v.len() != n {
        return Err(format!("expected {n} comma-separated integers, got {}", v.len()));
    }
    Ok(v)
}

fn parse_triple(s: &str) -> Result<(usize, usize, usize), String> {
    let v = parse_list(s, 3)?;
    Ok((v[0], v[1], v[2]))
}

fn parse_seasonal(s: &str) -> Result<(usize, usize, usize, usize), String> {
    let v = parse_list(s, 4)?;
    Ok((v[0], v[1], v[2], v[3]))
}

/// Candidate values for one order component.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Choices(pub Vec<usize>);

/// `lo..hi` inclusive, a single value, or a comma list.
pub fn parse_range(s: &str) -> Result<Choices, String> {
    let s = s.trim();
    let mut v = if let Some((lo, hi)) = s.split_once("..") {
        let lo: usize = lo.trim().parse().map_err(|_| format!("bad range start in {s:?}"))?;
        let hi: usize = hi.trim().trim_start_matches('=').parse().map_err(|_| format!("bad range end in {s:?}"))?;
        if hi < lo {
            return Err(format!("empty range {s:?}"));
        }
        (lo..=hi).collect()
    } else {
        s.split(',')
            .map(|x| x.trim().parse::<usize>().map_err(|_| format!("bad value in {s:?}")))
            .collect::<Result<Vec<_>, _>>()?
    };
    v.sort_unstable();
    v.dedup();
    Ok(Choices(v))
}

impl GlobalOpts {
    pub fn input(&self) -> Result<&PathBuf, CliError> {
        self.input
            .as_ref()
            .ok_or_else(|| CliError::Config("--input is required".into()))
    }
}

//! Command-line front end: ingestion, decomposition, order selection,
//! validation and forecasting, with SVG figures and CSV twins.

pub mod args;
pub mod commands;
pub mod error;
pub mod figures;
pub mod output;
pub mod pipeline;
pub mod svg;

pub use args::{Cli, Command};
pub use error::{CliError, EXIT_DATA, EXIT_NUMERICAL, EXIT_OK, EXIT_USAGE};

/// Dispatches a parsed command line.
pub fn run(cli: &Cli) -> Result<(), CliError> {
    let g = &cli.global;
    match &cli.command {
        Command::Ingest => commands::ingest(g),
        Command::Decompose { period } => commands::decompose(g, *period),
        Command::Fit { model, end } => commands::fit_cmd(g, model, *end),
        Command::Select { grid, end } => commands::select(g, grid, *end),
        Command::Backtest { model, window, refit } => commands::backtest(g, model, *window, *refit),
        Command::Validate { model, holdout } => commands::validate(g, model, *holdout),
        Command::Forecast { model, horizon, level } => commands::forecast_cmd(g, model, *horizon, *level),
        Command::Pipeline(args) => pipeline::run(g, args),
    }
}

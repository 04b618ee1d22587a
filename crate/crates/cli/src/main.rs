//! `nkpolicy` command-line front end.

mod commands;
mod config;
mod output;

use std::io::IsTerminal;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, CommandFactory, Parser, Subcommand};

use config::{Format, ModelArgs, RegimeArg};

#[derive(Debug, Parser)]
#[command(
    name = "nkpolicy",
    version,
    about = "Taylor-rule stability geometry and Ramsey policy in the New-Keynesian model"
)]
struct Cli {
    /// JSON file with default values for any option; flags override it.
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    /// Output format. `ramsey` and `hopf-demo` default to json, the rest to csv.
    #[arg(long, global = true, value_enum)]
    format: Option<Format>,
    /// Output file (a directory for `tables`). Defaults to stdout (`.` for `tables`).
    #[arg(long, short, global = true)]
    output: Option<PathBuf>,
    #[command(flatten)]
    model: ModelArgs,
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Region, eigenvalues and determinacy of one rule.
    Classify(RuleArgs),
    /// Region classification over a grid of (F_pi, F_x).
    Sweep(GridArgs),
    /// Samples of the saddle-node, flip, Hopf and discriminant borders.
    Borders(GridArgs),
    /// Writes table1, table2 and table3 into the output directory.
    Tables,
    /// Ramsey policy for one set of weights, or the LQR table sweep.
    Ramsey(RamseyArgs),
    /// Simulates a trajectory under Ramsey policy or a Taylor rule.
    Simulate(SimArgs),
    /// Compares Ramsey gains with a Taylor rule and locates the Hopf crossing.
    HopfDemo(HopfArgs),
}

#[derive(Debug, Clone, Default, Args)]
struct RuleArgs {
    #[arg(long, allow_hyphen_values = true)]
    f_pi: Option<f64>,
    #[arg(long, allow_hyphen_values = true)]
    f_x: Option<f64>,
    #[arg(long, allow_hyphen_values = true)]
    f_z: Option<f64>,
    #[arg(long, allow_hyphen_values = true)]
    f_u: Option<f64>,
    /// Border tolerance.
    #[arg(long)]
    tol: Option<f64>,
}

#[derive(Debug, Clone, Default, Args)]
struct GridArgs {
    #[arg(long, allow_hyphen_values = true)]
    f_pi_min: Option<f64>,
    #[arg(long, allow_hyphen_values = true)]
    f_pi_max: Option<f64>,
    #[arg(long, allow_hyphen_values = true)]
    f_x_min: Option<f64>,
    #[arg(long, allow_hyphen_values = true)]
    f_x_max: Option<f64>,
    /// Points on the F_pi axis (default 500).
    #[arg(long)]
    n_pi: Option<usize>,
    /// Points on the F_x axis (default 500).
    #[arg(long)]
    n_x: Option<usize>,
    /// Grid step on both axes; overrides the point counts.
    #[arg(long)]
    step: Option<f64>,
    /// Border tolerance.
    #[arg(long)]
    tol: Option<f64>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum)]
enum SweepName {
    /// The twelve weight settings of the published LQR table.
    Table2,
}

#[derive(Debug, Clone, Default, Args)]
struct WeightArgs {
    #[arg(long)]
    mu_pi: Option<f64>,
    #[arg(long)]
    mu_x: Option<f64>,
    #[arg(long)]
    mu_i: Option<f64>,
    /// Shock-block convention: `appendix-a` or `discounted`.
    #[arg(long, value_parser = config::parse_convention)]
    convention: Option<nkpolicy::ShockConvention>,
}

#[derive(Debug, Clone, Args)]
struct RamseyArgs {
    #[command(flatten)]
    weights: WeightArgs,
    /// Solve a predefined list of weights instead of a single setting.
    #[arg(long, value_enum)]
    sweep: Option<SweepName>,
}

#[derive(Debug, Clone, Args)]
struct SimArgs {
    #[arg(long, value_enum)]
    regime: Option<RegimeArg>,
    #[command(flatten)]
    weights: WeightArgs,
    #[command(flatten)]
    rule: RuleArgs,
    #[arg(long, allow_hyphen_values = true)]
    z0: Option<f64>,
    #[arg(long, allow_hyphen_values = true)]
    u0: Option<f64>,
    /// Initial output gap, `taylor-forward` only.
    #[arg(long, allow_hyphen_values = true)]
    x0: Option<f64>,
    /// Initial inflation, `taylor-forward` only.
    #[arg(long, allow_hyphen_values = true)]
    pi0: Option<f64>,
    /// Periods after t = 0 (default 40).
    #[arg(long)]
    horizon: Option<usize>,
    /// Seed for Gaussian innovations. Giving a seed or a standard deviation
    /// turns innovations on; unset deviations default to 1.
    #[arg(long)]
    seed: Option<u64>,
    #[arg(long)]
    sd_z: Option<f64>,
    #[arg(long)]
    sd_u: Option<f64>,
}

#[derive(Debug, Clone, Args)]
struct HopfArgs {
    #[command(flatten)]
    weights: WeightArgs,
    #[command(flatten)]
    rule: RuleArgs,
}

/// Failure carrying the process exit code: 2 for bad input, 3 for numerical failure.
#[derive(Debug)]
pub struct CliError {
    code: u8,
    message: String,
}

impl CliError {
    pub fn input(message: impl Into<String>) -> Self {
        CliError {
            code: 2,
            message: message.into(),
        }
    }

    pub fn numeric(message: impl Into<String>) -> Self {
        CliError {
            code: 3,
            message: message.into(),
        }
    }

    /// Missing required option, with the subcommand's usage line.
    pub fn missing(subcommand: &str, what: &str) -> Self {
        let mut cmd = Cli::command();
        cmd.build();
        let usage = cmd
            .find_subcommand_mut(subcommand)
            .map(|c| c.render_usage().to_string())
            .unwrap_or_default();
        CliError::input(format!("missing {what}\n\n{usage}"))
    }
}

impl From<nkpolicy::Error> for CliError {
    fn from(e: nkpolicy::Error) -> Self {
        if e.is_input_error() {
            CliError::input(e.to_string())
        } else {
            CliError::numeric(e.to_string())
        }
    }
}

fn paint(tag: &str, ansi: &str) -> String {
    let plain = std::env::var_os("NO_COLOR").is_some_and(|v| !v.is_empty());
    if plain || !std::io::stderr().is_terminal() {
        tag.to_string()
    } else {
        format!("\x1b[{ansi}m{tag}\x1b[0m")
    }
}

pub fn warn(msg: &str) {
    eprintln!("{}: {msg}", paint("warning", "33"));
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 2 } else { 0 });
        }
    };
    match commands::run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("{}: {}", paint("error", "31"), e.message);
            ExitCode::from(e.code)
        }
    }
}

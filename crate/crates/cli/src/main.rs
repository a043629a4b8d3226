//! `biflab`: bifurcation curves, scans, rescaled return maps, 1:4 flows and phase portraits.

mod commands;
mod model;
mod range;

use std::path::PathBuf;
use std::process::ExitCode;

use biflab::Sign;
use clap::{Args, Parser, Subcommand, ValueEnum};

use range::{IntRange, Range};

#[derive(Debug)]
pub enum CliError {
    /// Bad flags or parameters outside a domain: exit code 2.
    Usage(String),
    /// Numerical or I/O failure: exit code 1.
    Failure(String),
}

impl From<biflab::Error> for CliError {
    fn from(e: biflab::Error) -> Self {
        if e.is_usage() {
            CliError::Usage(e.to_string())
        } else {
            CliError::Failure(e.to_string())
        }
    }
}

fn parse_sign(s: &str) -> Result<Sign, String> {
    s.parse::<Sign>().map_err(|e| e.to_string())
}

#[derive(Parser, Debug)]
#[command(name = "biflab", version, about = "Bifurcation analysis of conservative cubic Henon maps")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Sample closed-form bifurcation curves.
    Curves(CurvesArgs),
    /// Locate bifurcations of period-n orbits along a one-parameter path.
    Scan(ScanArgs),
    /// Compare rescaled first-return maps with their cubic Henon limit.
    Rescale(RescaleArgs),
    /// Normal-form coefficients of a 1:4 resonant fixed point.
    Resonance(ResonanceArgs),
    /// Equilibria of the truncated 1:4 flow normal forms.
    Flow(FlowArgs),
    /// Orbit clouds as CSV and/or SVG.
    Portrait(PortraitArgs),
    /// Periodic orbits of one map.
    Orbits(OrbitsArgs),
}

#[derive(Args, Debug)]
pub struct CurvesArgs {
    /// Curve tag: Lplus, Lminus, L2plus, L2plusI, L2minusI, Lphi, Lpihalf, nontwist, L4_1, L4_2, L4_3, H0.
    #[arg(long = "curve", required = true)]
    pub curves: Vec<String>,
    /// Map sign (+1 or -1).
    #[arg(long, value_parser = parse_sign, allow_hyphen_values = true)]
    pub nu: Option<Sign>,
    /// Sign of the non-twist condition; same as --nu.
    #[arg(long, value_parser = parse_sign, allow_hyphen_values = true, conflicts_with = "nu")]
    pub sign: Option<Sign>,
    /// Branch index i for L2plusI / L2minusI.
    #[arg(long)]
    pub index: Option<u8>,
    /// Rotation angle for Lphi.
    #[arg(long)]
    pub phi: Option<f64>,
    /// M2 samples, start:end:count or a single value.
    #[arg(long, allow_hyphen_values = true)]
    pub m2: Option<Range>,
    /// For nontwist: list the M2 roots at this M1 instead of sampling in M2.
    #[arg(long, allow_hyphen_values = true)]
    pub m1: Option<f64>,
    /// For H0: the cubic tangency coefficient.
    #[arg(long, allow_hyphen_values = true, default_value_t = 1.0)]
    pub d: f64,
    /// For H0: mu2 samples.
    #[arg(long, allow_hyphen_values = true)]
    pub mu2: Option<Range>,
    /// Pull the curve back to (mu1, mu2) through this model file.
    #[arg(long, requires = "k")]
    pub model: Option<PathBuf>,
    /// Return-map index for --model.
    #[arg(long)]
    pub k: Option<u32>,
    #[arg(short, long)]
    pub output: Option<PathBuf>,
}

#[derive(Args, Debug)]
pub struct ScanArgs {
    #[arg(long, value_parser = parse_sign, allow_hyphen_values = true)]
    pub nu: Sign,
    /// M1: a fixed value or the scanned range start:end:count.
    #[arg(long, allow_hyphen_values = true)]
    pub m1: Range,
    /// M2: a fixed value or the scanned range start:end:count.
    #[arg(long, allow_hyphen_values = true)]
    pub m2: Range,
    #[arg(long)]
    pub period: usize,
    /// Track only reversible orbits along the symmetry lines (even periods).
    #[arg(long)]
    pub symmetric: bool,
    /// Half-width of the square of Newton seeds.
    #[arg(long)]
    pub seed_radius: Option<f64>,
    /// Seeds per side.
    #[arg(long, default_value_t = 48)]
    pub seed_grid: usize,
    #[arg(short, long)]
    pub output: Option<PathBuf>,
}

#[derive(Args, Debug)]
pub struct RescaleArgs {
    /// JSON model: lambda, beta1, mu1, mu2, b, d, x_plus, y_minus.
    #[arg(long)]
    pub model: PathBuf,
    /// Return-map indices, a:b inclusive or a single k.
    #[arg(long)]
    pub k: IntRange,
    /// Hold the rescaled M1 fixed for every k (with --m2) instead of using the model's mu.
    #[arg(long, allow_hyphen_values = true, requires = "m2")]
    pub m1: Option<f64>,
    #[arg(long, allow_hyphen_values = true, requires = "m1")]
    pub m2: Option<f64>,
    /// Half-width of the comparison box |X|, |Y| <= box.
    #[arg(long = "box", default_value_t = 2.0)]
    pub half_width: f64,
    /// Grid points per side.
    #[arg(long, default_value_t = 21)]
    pub grid: usize,
    #[arg(short, long)]
    pub output: Option<PathBuf>,
}

#[derive(Args, Debug)]
pub struct ResonanceArgs {
    #[arg(long, value_parser = parse_sign, allow_hyphen_values = true)]
    pub nu: Sign,
    #[arg(long, allow_hyphen_values = true)]
    pub m2: f64,
    /// Emit JSON instead of key = value lines.
    #[arg(long)]
    pub json: bool,
}

#[derive(ValueEnum, Debug, Clone, Copy, PartialEq, Eq)]
pub enum Variant {
    /// Rotation-invariant family with B1, beta, mu.
    Eq11,
    /// The A = 1 family.
    Eq12,
}

#[derive(Args, Debug)]
pub struct FlowArgs {
    #[arg(long, value_enum)]
    pub variant: Variant,
    #[arg(long, allow_hyphen_values = true, default_value_t = 0.0)]
    pub beta: f64,
    #[arg(long, allow_hyphen_values = true, default_value_t = 0.0)]
    pub mu: f64,
    #[arg(long, allow_hyphen_values = true, default_value_t = 0.0)]
    pub b1: f64,
    #[arg(long, allow_hyphen_values = true, default_value_t = 0.0)]
    pub b2: f64,
    /// Coefficient of |z|^2 z*^3 (default 0 for eq11, 0.5 for eq12).
    #[arg(long, allow_hyphen_values = true)]
    pub c: Option<f64>,
    #[arg(long, default_value_t = biflab::resonance::DEFAULT_FLOW_RADIUS)]
    pub radius: f64,
    /// eq12 only: list the mu values in lo:hi where parabolic equilibria appear, at --beta.
    #[arg(long, allow_hyphen_values = true)]
    pub parabolic_mu: Option<String>,
    #[arg(short, long)]
    pub output: Option<PathBuf>,
}

#[derive(Args, Debug)]
pub struct PortraitArgs {
    #[arg(long, value_parser = parse_sign, allow_hyphen_values = true)]
    pub nu: Sign,
    #[arg(long, allow_hyphen_values = true)]
    pub m1: f64,
    #[arg(long, allow_hyphen_values = true)]
    pub m2: f64,
    /// Explicit seed x,y (repeatable).
    #[arg(long = "seed", allow_hyphen_values = true)]
    pub seeds: Vec<String>,
    /// Seed grid in x, start:end:count.
    #[arg(long, allow_hyphen_values = true, requires = "grid_y")]
    pub grid_x: Option<Range>,
    /// Seed grid in y, start:end:count.
    #[arg(long, allow_hyphen_values = true, requires = "grid_x")]
    pub grid_y: Option<Range>,
    #[arg(long, default_value_t = biflab::portrait::DEFAULT_ITERATIONS)]
    pub iterations: usize,
    #[arg(long, default_value_t = biflab::portrait::DEFAULT_ESCAPE_RADIUS)]
    pub escape_radius: f64,
    #[arg(long)]
    pub csv: Option<PathBuf>,
    #[arg(long)]
    pub svg: Option<PathBuf>,
}

#[derive(Args, Debug)]
pub struct OrbitsArgs {
    #[arg(long, value_parser = parse_sign, allow_hyphen_values = true)]
    pub nu: Sign,
    #[arg(long, allow_hyphen_values = true)]
    pub m1: f64,
    #[arg(long, allow_hyphen_values = true)]
    pub m2: f64,
    #[arg(long)]
    pub period: usize,
    /// Only reversible orbits, searched along both symmetry lines.
    #[arg(long)]
    pub symmetric: bool,
    #[arg(long, default_value_t = 3.0)]
    pub radius: f64,
    #[arg(long, default_value_t = 48)]
    pub grid: usize,
    #[arg(short, long)]
    pub output: Option<PathBuf>,
}

fn configure_threads() -> Result<(), CliError> {
    if let Ok(v) = std::env::var("BIFLAB_THREADS") {
        let n: usize = v
            .parse()
            .ok()
            .filter(|n| *n > 0)
            .ok_or_else(|| CliError::Usage(format!("BIFLAB_THREADS must be a positive integer, got '{v}'")))?;
        rayon::ThreadPoolBuilder::new()
            .num_threads(n)
            .build_global()
            .map_err(|e| CliError::Failure(e.to_string()))?;
    }
    Ok(())
}

fn run(cli: Cli) -> Result<(), CliError> {
    configure_threads()?;
    match cli.command {
        Command::Curves(a) => commands::curves(&a),
        Command::Scan(a) => commands::scan(&a),
        Command::Rescale(a) => commands::rescale(&a),
        Command::Resonance(a) => commands::resonance(&a),
        Command::Flow(a) => commands::flow(&a),
        Command::Portrait(a) => commands::portrait(&a),
        Command::Orbits(a) => commands::orbits(&a),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(CliError::Usage(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
        Err(CliError::Failure(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(1)
        }
    }
}

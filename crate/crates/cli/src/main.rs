//! `pathdim`: simulate sample paths and run dimension experiments.
//!
//! Every subcommand resolves its settings from defaults, then a
//! `--config` JSON file, then explicit flags (later wins), runs one
//! experiment, and writes its artifacts plus the resolved `config.json`
//! into `--out`. A failed run prints a one-line JSON error to stderr
//! and exits nonzero; artifacts are only renamed into place complete.

mod commands;
mod config;
mod plot;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::error::ErrorKind;
use clap::{Args, Parser, Subcommand};

#[derive(Parser, Debug)]
#[command(
    name = "pathdim",
    version,
    about = "Sample-path simulation and dimension-estimation experiments"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Draw one sample path and persist it as CSV plus metadata
    Simulate(SimulateArgs),
    /// Box-counting dimension fit for a coordinate graph
    Boxdim(BoxdimArgs),
    /// Local two-scale scaling profile over anchors on a graph
    Assouad(AssouadArgs),
    /// Scan proof-scheme windows for fully occupied ones
    Fullwindow(FullwindowArgs),
    /// Window-threading frequency with a quadrature lower bound
    Pn(PnArgs),
    /// Quadratic variation and covariation report
    Qv(QvArgs),
    /// Box-counting dimension fit for a planar or spatial trail
    Trail(TrailArgs),
}

/// Flags shared by every subcommand. All of them are optional here;
/// each subcommand fills the gaps from its config file and defaults.
#[derive(Args, Clone, Debug, Default)]
pub struct CommonArgs {
    /// Process family: wiener | bm | stable | fbm | ito
    #[arg(long)]
    pub process: Option<String>,
    /// Hurst index in (0, 1), for --process fbm
    #[arg(long)]
    pub hurst: Option<f64>,
    /// Stability index in (0, 2], for --process stable
    #[arg(long)]
    pub beta: Option<f64>,
    /// Coordinate count, for --process bm
    #[arg(long)]
    pub dim: Option<usize>,
    /// Integrand coefficients, constant first: "1,0,1" is 1 + t^2
    #[arg(long)]
    pub integrand: Option<String>,
    /// Time steps on [0, 1]
    #[arg(long)]
    pub steps: Option<usize>,
    /// Master seed; all replica streams derive from it
    #[arg(long)]
    pub seed: Option<u64>,
    /// Monte Carlo replica count
    #[arg(long)]
    pub replicas: Option<usize>,
    /// Output directory (created if missing; default ".")
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// JSON config file; explicit flags override its values
    #[arg(long)]
    pub config: Option<PathBuf>,
    /// Also write SVG plots next to the reports
    #[arg(long)]
    pub emit_plots: bool,
    /// Worker threads (0 = scheduler default); never changes results
    #[arg(long)]
    pub threads: Option<usize>,
}

#[derive(Args, Debug)]
pub struct SimulateArgs {
    #[command(flatten)]
    pub common: CommonArgs,
}

#[derive(Args, Debug)]
pub struct BoxdimArgs {
    #[command(flatten)]
    pub common: CommonArgs,
    /// Directory holding path.csv + path.json from a simulate run
    #[arg(long)]
    pub input: Option<PathBuf>,
    /// Path coordinate whose graph is counted
    #[arg(long)]
    pub coordinate: Option<usize>,
    /// Coarsest dyadic scale 2^-j in the fit
    #[arg(long)]
    pub min_octave: Option<u32>,
    /// Finest dyadic scale 2^-j in the fit
    #[arg(long)]
    pub max_octave: Option<u32>,
}

#[derive(Args, Debug)]
pub struct AssouadArgs {
    #[command(flatten)]
    pub common: CommonArgs,
    /// Directory holding path.csv + path.json from a simulate run
    #[arg(long)]
    pub input: Option<PathBuf>,
    /// Path coordinate whose graph is profiled
    #[arg(long)]
    pub coordinate: Option<usize>,
    /// Outer octaves m (R = 2^-m), comma separated, e.g. "4,5,6"
    #[arg(long)]
    pub outer_octaves: Option<String>,
    /// Ratio octaves k (r = R/2^k), comma separated, e.g. "3,4,5"
    #[arg(long)]
    pub ratio_octaves: Option<String>,
    /// Anchor budget when the stride is automatic
    #[arg(long)]
    pub max_anchors: Option<usize>,
    /// Walk every k-th vertex as an anchor (0 = derive from budget)
    #[arg(long)]
    pub anchor_stride: Option<usize>,
}

#[derive(Args, Debug)]
pub struct FullwindowArgs {
    #[command(flatten)]
    pub common: CommonArgs,
    /// Directory holding path.csv + path.json from a simulate run
    #[arg(long)]
    pub input: Option<PathBuf>,
    /// Window subdivisions per axis
    #[arg(long)]
    pub n: Option<usize>,
    /// Occupied-fraction threshold in (0, 1]; 1 keeps full windows only
    #[arg(long)]
    pub threshold: Option<f64>,
    /// Cap on proof-scheme levels (resolution may stop the scheme first)
    #[arg(long)]
    pub max_level: Option<usize>,
}

#[derive(Args, Debug)]
pub struct PnArgs {
    #[command(flatten)]
    pub common: CommonArgs,
    /// Window subdivisions per axis
    #[arg(long)]
    pub n: Option<usize>,
    /// Quadrature bins per band for the lower bound
    #[arg(long)]
    pub bins: Option<usize>,
}

#[derive(Args, Debug)]
pub struct QvArgs {
    #[command(flatten)]
    pub common: CommonArgs,
    /// Horizon for the covariation sums (grid-aligned)
    #[arg(long)]
    pub t: Option<f64>,
}

#[derive(Args, Debug)]
pub struct TrailArgs {
    #[command(flatten)]
    pub common: CommonArgs,
    /// Directory holding path.csv + path.json from a simulate run
    #[arg(long)]
    pub input: Option<PathBuf>,
    /// Coarsest dyadic scale 2^-j in the fit
    #[arg(long)]
    pub min_octave: Option<u32>,
    /// Finest dyadic scale 2^-j in the fit
    #[arg(long)]
    pub max_octave: Option<u32>,
}

fn error_kind(e: &pathdim_core::Error) -> &'static str {
    use pathdim_core::Error;
    match e {
        Error::InvalidArgument(_) => "invalid_argument",
        Error::Unsupported(_) => "unsupported",
        Error::EmbeddingFailure { .. } => "embedding_failure",
        Error::Io { .. } => "io",
        Error::Parse { .. } => "parse",
    }
}

fn emit_error(kind: &str, message: &str) {
    eprintln!(
        "{}",
        serde_json::json!({ "error": message, "kind": kind })
    );
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            if matches!(e.kind(), ErrorKind::DisplayHelp | ErrorKind::DisplayVersion) {
                let _ = e.print();
                return ExitCode::SUCCESS;
            }
            emit_error("usage", &e.to_string());
            return ExitCode::from(2);
        }
    };
    let result = match cli.command {
        Command::Simulate(args) => commands::run_simulate(&args),
        Command::Boxdim(args) => commands::run_boxdim(&args),
        Command::Assouad(args) => commands::run_assouad(&args),
        Command::Fullwindow(args) => commands::run_fullwindow(&args),
        Command::Pn(args) => commands::run_pn(&args),
        Command::Qv(args) => commands::run_qv(&args),
        Command::Trail(args) => commands::run_trail(&args),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            emit_error(error_kind(&e), &e.to_string());
            ExitCode::FAILURE
        }
    }
}

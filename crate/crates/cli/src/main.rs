//! `wedgekit` command-line front end.

mod commands;

use std::io::Write;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use log::{debug, info};
use wedgekit::atlas::{Report, RunConfig};
use wedgekit::WedgeError;

/// Default seed; the symmetry searches in the embedded table were run with it.
pub const DEFAULT_SEED: u64 = 0x5eed;

#[derive(Parser, Debug)]
#[command(name = "wedgekit", version, about = "Euler elements, wedge spaces and standard subspaces at desk scale")]
pub struct Cli {
    /// Seed for every randomized step.
    #[arg(long, global = true, default_value_t = DEFAULT_SEED)]
    pub seed: u64,
    /// Pass threshold for the command's primary residual (command-specific default).
    #[arg(long, global = true)]
    pub tolerance: Option<f64>,
    /// Write the JSON report to PATH ("-" for stdout).
    #[arg(long, global = true, value_name = "PATH")]
    pub json: Option<String>,
    /// Worker threads; 1 runs everything sequentially.
    #[arg(long, global = true, default_value_t = 1)]
    pub threads: usize,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Euler orbits of a simple family, checked against the embedded table.
    Classify(ClassifyArgs),
    /// 3-grading of an element.
    Grade(ElementArgs),
    /// Symmetry certificate for an Euler element.
    Symmetric(SymmetricArgs),
    #[command(subcommand)]
    Stdsub(StdsubCommand),
    #[command(subcommand)]
    Bgl(BglCommand),
    #[command(subcommand)]
    Fock(FockCommand),
    #[command(subcommand)]
    Modcov(ModcovCommand),
    /// Classification table for every family of the embedded table.
    Atlas,
    #[command(subcommand)]
    Wedge(WedgeCommand),
}

#[derive(Args, Debug)]
pub struct ClassifyArgs {
    /// sl, so or sp.
    #[arg(long)]
    pub family: String,
    /// n for sl_n, n for sp_2n.
    #[arg(long)]
    pub rank: Option<usize>,
    #[arg(long)]
    pub p: Option<usize>,
    #[arg(long)]
    pub q: Option<usize>,
}

#[derive(Args, Debug)]
pub struct ElementArgs {
    /// Algebra label, e.g. sl3, so(1,3), sp4, gl2, iso(1,3), sl2+so(3,0).
    #[arg(long)]
    pub algebra: String,
    /// Coordinates in the algebra's basis, comma separated.
    #[arg(long, value_delimiter = ',', allow_hyphen_values = true, conflicts_with = "node")]
    pub h: Option<Vec<f64>>,
    /// Canonical Euler representative for this node.
    #[arg(long)]
    pub node: Option<usize>,
}

#[derive(Args, Debug)]
pub struct SymmetricArgs {
    #[command(flatten)]
    pub element: ElementArgs,
    /// Multi-start count of the certificate search.
    #[arg(long, default_value_t = 32)]
    pub starts: usize,
}

#[derive(Subcommand, Debug)]
pub enum StdsubCommand {
    /// Round trips pair → subspace → pair on random admissible pairs.
    Roundtrip(RoundtripArgs),
}

#[derive(Args, Debug)]
pub struct RoundtripArgs {
    /// Largest ambient dimension; instances cycle through 1..=dim.
    #[arg(long, default_value_t = 8)]
    pub dim: usize,
    #[arg(long, default_value_t = 100)]
    pub trials: usize,
    /// Bound on the spectral spread of the modular generator.
    #[arg(long, default_value_t = 3.0)]
    pub max_norm: f64,
}

#[derive(Subcommand, Debug)]
pub enum BglCommand {
    /// Bisognano-Wichmann, locality and regularity probes in the rapidity model.
    Rapidity(RapidityArgs),
}

#[derive(Args, Debug)]
pub struct RapidityArgs {
    #[arg(long, default_value_t = 1.0)]
    pub mass: f64,
    /// Grid size, a power of two.
    #[arg(long, default_value_t = 2048)]
    pub grid: usize,
    #[arg(long, default_value_t = 20.0)]
    pub theta_max: f64,
    /// Comma-separated subset of bw, locality, regularity.
    #[arg(long, value_delimiter = ',', default_value = "bw,locality")]
    pub check: Vec<String>,
    /// Extra right-wedge Gaussian "x0,x1,width" added to the bw family.
    #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
    pub probe: Option<Vec<f64>>,
}

#[derive(Subcommand, Debug)]
pub enum FockCommand {
    /// Vacuum expectation and composition law of truncated Weyl operators.
    WeylCheck(WeylArgs),
}

#[derive(Args, Debug)]
pub struct WeylArgs {
    /// Levels per mode.
    #[arg(long, default_value_t = 64)]
    pub n_max: usize,
    #[arg(long, default_value_t = 1)]
    pub modes: usize,
    /// Largest ‖ξ‖ and ‖η‖ sampled.
    #[arg(long, default_value_t = 0.5)]
    pub amplitude: f64,
    #[arg(long, default_value_t = 8)]
    pub samples: usize,
}

#[derive(Subcommand, Debug)]
pub enum ModcovCommand {
    /// The covariance obstruction for the node-1 Euler element of sl_n.
    Counterexample(CounterexampleArgs),
}

#[derive(Args, Debug)]
pub struct CounterexampleArgs {
    #[arg(long, default_value = "sl3")]
    pub algebra: String,
}

#[derive(Subcommand, Debug)]
pub enum WedgeCommand {
    /// Compare g1.W and g2.W for the standard sl2 wedge.
    Order(OrderArgs),
}

#[derive(Args, Debug)]
pub struct OrderArgs {
    /// 2×2 matrix "a,b,c,d" (row major); odd when det < 0.
    #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
    pub g1: Vec<f64>,
    #[arg(long, value_delimiter = ',', allow_hyphen_values = true, default_value = "1,0,0,1")]
    pub g2: Vec<f64>,
    /// sl2 or trivial.
    #[arg(long, default_value = "sl2")]
    pub cone: String,
}

/// What a command produced.
pub struct Outcome {
    pub passed: bool,
    pub json: String,
    pub text: String,
}

impl Outcome {
    pub fn new<T: serde::Serialize>(cfg: &RunConfig, passed: bool, result: T, text: String) -> Outcome {
        Outcome { passed, json: Report::new(cfg, passed, result).to_json(), text }
    }
}

/// Exit status for a library error.
pub fn exit_code(e: &WedgeError) -> u8 {
    match e {
        WedgeError::Unsupported(_) | WedgeError::Parse(_) | WedgeError::Domain(_) => 2,
        WedgeError::Numeric(_)
        | WedgeError::Conditioning(_)
        | WedgeError::Envelope(_)
        | WedgeError::Closure(_)
        | WedgeError::InconsistentGrading(_) => 3,
    }
}

fn command_name(c: &Command) -> &'static str {
    match c {
        Command::Classify(_) => "classify",
        Command::Grade(_) => "grade",
        Command::Symmetric(_) => "symmetric",
        Command::Stdsub(_) => "stdsub roundtrip",
        Command::Bgl(_) => "bgl rapidity",
        Command::Fock(_) => "fock weyl-check",
        Command::Modcov(_) => "modcov counterexample",
        Command::Atlas => "atlas",
        Command::Wedge(_) => "wedge order",
    }
}

fn default_tolerance(c: &Command) -> f64 {
    match c {
        Command::Bgl(_) => commands::BW_THRESHOLD,
        _ => 1e-8,
    }
}

fn write_json(path: &str, json: &str) -> std::io::Result<()> {
    if path == "-" {
        let mut out = std::io::stdout().lock();
        out.write_all(json.as_bytes())?;
        out.write_all(b"\n")
    } else {
        std::fs::write(path, format!("{json}\n"))
    }
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().filter_or("WEDGEKIT_LOG", "warn")).init();
    let cli = Cli::parse();
    let name = command_name(&cli.command);
    let tolerance = cli.tolerance.unwrap_or_else(|| default_tolerance(&cli.command));
    let cfg = match RunConfig::new(name, cli.seed, tolerance, cli.json.clone(), cli.threads) {
        Ok(c) => c,
        Err(e) => {
            eprintln!("wedgekit: {e}");
            return ExitCode::from(2);
        }
    };
    if cfg.threads > 1 && !wedgekit::par::configure_threads(cfg.threads) {
        info!("thread pool not configured; running with the default pool or sequentially");
    }
    info!("running {name} with seed {} and tolerance {tolerance:e}", cfg.seed);

    let (code, json, text) = match commands::run(&cli.command, &cfg) {
        Ok(o) => (if o.passed { 0 } else { 1 }, o.json, o.text),
        Err(e) => {
            debug!("{name} failed: {e:?}");
            let code = exit_code(&e);
            let body = serde_json::json!({ "error": e.to_string(), "exitCode": code });
            (code, Report::new(&cfg, false, body).to_json(), format!("error: {e}\n"))
        }
    };
    if code >= 2 {
        eprint!("wedgekit: {text}");
    }
    match &cli.json {
        Some(path) => {
            if let Err(e) = write_json(path, &json) {
                eprintln!("wedgekit: cannot write {path}: {e}");
                return ExitCode::from(2);
            }
            if path != "-" && code < 2 {
                print!("{text}");
            }
        }
        None if code < 2 => print!("{text}"),
        None => {}
    }
    ExitCode::from(code)
}

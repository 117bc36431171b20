//! `qstatfn`: batch front end for quantum statistical functions.

mod commands;
mod input;

use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

const EXIT_VALIDATION: u8 = 2;
const EXIT_NUMERICAL: u8 = 3;

#[derive(Debug, Parser)]
#[command(
    name = "qstatfn",
    version,
    about = "Quantum statistical functions on dense operators"
)]
pub struct Cli {
    /// Hermiticity and trace tolerance for input matrices.
    #[arg(long, global = true, default_value_t = 1e-9)]
    pub tol: f64,
    /// Seed for sampled quantities (overrides a config file seed).
    #[arg(long, global = true)]
    pub seed: Option<u64>,
    /// Parameter grid `a:b:n` per axis.
    #[arg(long, global = true, allow_hyphen_values = true, value_parser = input::parse_grid)]
    pub grid: Option<input::Grid>,
    /// Write the primary output here instead of stdout.
    #[arg(long, short, global = true)]
    pub output: Option<PathBuf>,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Evaluate a generating function over a parameter grid (CSV).
    Statefn(StatefnArgs),
    /// Kirkwood-Dirac or Margenau-Hill table (CSV), optionally with a Bochner test.
    Quasiprob(QuasiprobArgs),
    /// Discrete Wigner function of an odd-dimensional state (CSV), or its inverse.
    Wigner(WignerArgs),
    /// Geometric-mean, fidelity and Chernoff quantities.
    Geo(GeoArgs),
    /// Run a moment-matching estimation described by a JSON config.
    Estimate(EstimateArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Function {
    Qmgf,
    Qcf,
    Qcgf,
    Qscf,
    Mqmgf,
    Mqcf,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum OrderingKind {
    Kd,
    Mh,
    Wigner,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum TableKind {
    Kd,
    Mh,
}

#[derive(Debug, Args)]
pub struct StatefnArgs {
    /// State as a JSON matrix.
    #[arg(long)]
    pub state: PathBuf,
    /// Observable as a JSON matrix; repeat for multivariable functions.
    #[arg(long = "observable", required = true)]
    pub observables: Vec<PathBuf>,
    #[arg(long, value_enum)]
    pub function: Function,
    /// Operator ordering for mqmgf and mqcf.
    #[arg(long, value_enum, default_value = "kd")]
    pub ordering: OrderingKind,
    /// Explicit parameter point (comma-separated for several variables);
    /// repeatable. Overrides --grid.
    #[arg(long, allow_hyphen_values = true)]
    pub theta: Vec<String>,
}

#[derive(Debug, Args)]
pub struct QuasiprobArgs {
    #[arg(long)]
    pub state: PathBuf,
    /// Observables in measurement order; at least two.
    #[arg(long = "observable", required = true)]
    pub observables: Vec<PathBuf>,
    #[arg(long, value_enum, default_value = "kd")]
    pub kind: TableKind,
    /// Run the Bochner test on the matching characteristic function.
    #[arg(long)]
    pub bochner: bool,
    /// Write the Bochner report JSON here instead of after the table.
    #[arg(long)]
    pub report: Option<PathBuf>,
    /// Eigenvalue clustering tolerance.
    #[arg(long, default_value_t = 1e-9)]
    pub cluster_tol: f64,
}

#[derive(Debug, Args)]
#[command(group(clap::ArgGroup::new("input").required(true).args(["state", "reconstruct"])))]
pub struct WignerArgs {
    /// State as a JSON matrix; prints `q,p,w` rows.
    #[arg(long)]
    pub state: Option<PathBuf>,
    /// A `q,p,w` CSV table; prints the reconstructed state as JSON.
    #[arg(long)]
    pub reconstruct: Option<PathBuf>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum GeoOp {
    /// Weighted geometric mean `A #_u B` (JSON matrix).
    Mean,
    /// Fidelity and trace of the geometric mean of two states (JSON).
    Fidelity,
    /// Chernoff functional over a grid in [0, 1] (CSV).
    Chernoff,
    /// Relative entropy and its variance (JSON).
    Relent,
    /// Golden-Thompson comparison of two Hermitian operators (JSON).
    Gt,
    /// Geometric-mean generating function over a grid (CSV) and its
    /// closed-form derivatives at zero (JSON).
    Geomgf,
}

#[derive(Debug, Args)]
pub struct GeoArgs {
    #[arg(value_enum)]
    pub op: GeoOp,
    /// First operator or state (`rho` for the state functionals).
    #[arg(long)]
    pub a: PathBuf,
    /// Second operator, state (`sigma`) or, for geomgf, the observable `V`.
    #[arg(long)]
    pub b: PathBuf,
    /// Geodesic weight for `mean`.
    #[arg(long, default_value_t = 0.5)]
    pub weight: f64,
}

#[derive(Debug, Args)]
pub struct EstimateArgs {
    /// Estimation config JSON.
    pub config: PathBuf,
}

fn configure_threads() -> anyhow::Result<()> {
    let Ok(value) = std::env::var("QSTATFN_THREADS") else {
        return Ok(());
    };
    let n: usize = value.trim().parse().map_err(|_| {
        qstatfn::Error::InvalidArgument(format!(
            "QSTATFN_THREADS must be an integer, got `{value}`"
        ))
    })?;
    if n > 0 {
        rayon::ThreadPoolBuilder::new()
            .num_threads(n)
            .build_global()
            .map_err(|e| qstatfn::Error::InvalidArgument(e.to_string()))?;
    }
    Ok(())
}

fn exit_code(err: &anyhow::Error) -> u8 {
    match err.downcast_ref::<qstatfn::Error>() {
        Some(e) if e.is_numerical() => EXIT_NUMERICAL,
        _ => EXIT_VALIDATION,
    }
}

fn run(cli: &Cli) -> anyhow::Result<()> {
    configure_threads()?;
    let out = commands::dispatch(cli)?;
    match &cli.output {
        Some(path) => input::write_file(path, &out.primary)?,
        None => std::io::stdout().write_all(out.primary.as_bytes())?,
    }
    if let Some(extra) = out.secondary {
        std::io::stdout().write_all(extra.as_bytes())?;
    }
    Ok(())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(err) => {
            let message = format!("{err:#}").replace('\n', " ");
            eprintln!("error: {message}");
            ExitCode::from(exit_code(&err))
        }
    }
}

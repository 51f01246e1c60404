//! Command-line surface of the waveguide toolkit.
//!
//! Every subcommand writes a fixed set of CSV/JSON files (plus SVG plots
//! where a picture helps) into `--out-dir`, together with a `manifest.json`
//! naming the command, the resolved parameters and a SHA-256 hash of every
//! output. Identical flags produce byte-identical files regardless of the
//! thread count; the CSV and JSON are the contract, the plots a courtesy.

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

mod commands;
mod gridfile;
mod output;
mod svg;

/// Everything that can go wrong, ranked by exit code: 64 for a request the
/// tool refuses to interpret (bad flags, malformed input files, parameter
/// values outside a precondition), 2 for a computation that was accepted
/// but failed, with the library's error name on standard error.
#[derive(Debug)]
pub enum Failure {
    Usage(String),
    Solver(waveguide::Error),
    Io(String),
}

impl From<waveguide::Error> for Failure {
    fn from(e: waveguide::Error) -> Self {
        Failure::Solver(e)
    }
}

impl Failure {
    fn exit_code(&self) -> u8 {
        use waveguide::Error::*;
        match self {
            Failure::Usage(_) => 64,
            // Library-side input validation is still a usage problem: the
            // flags parsed but asked for something out of contract.
            Failure::Solver(InvalidInput(_) | DeltaOutOfRange { .. }) => 64,
            Failure::Solver(_) | Failure::Io(_) => 2,
        }
    }

    fn message(&self) -> String {
        match self {
            Failure::Usage(m) => format!("usage error: {m}"),
            Failure::Solver(e) => e.to_string(),
            Failure::Io(m) => format!("io error: {m}"),
        }
    }
}

#[derive(Parser)]
#[command(
    name = "waveguide",
    version,
    about = "Eigenvalue tables, branch portraits, resolvent maps and time evolution \
             for the Schrödinger equation on a strip with impedance boundary conditions"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Solve branches 0..=nmax for one boundary pair (spectrum.csv, gap.json, gram.json)
    Spectrum(SpectrumArgs),
    /// Sweep all branches along a boundary ray (trajectories.csv, trajectories.svg)
    Trajectories(TrajectoriesArgs),
    /// Propagate initial data and compare norms to the decay bound (norms.csv, fit.json)
    Evolve(EvolveArgs),
    /// Map the resolvent bound over a complex window (resolvent.csv, resolvent.svg)
    Pseudospec(PseudospecArgs),
    /// Locate eigenvalue axis crossings on a sign-indefinite ray (crossings.json, gap_curve.csv)
    Overdamp(OverdampArgs),
    /// Riesz-basis diagnostics of the eigenfunction family (riesz.json)
    Riesz(RieszArgs),
    /// Evaluate the local-smoothing functional of one evolution (smoothing.json)
    Smoothing(SmoothingArgs),
}

impl Command {
    fn common(&self) -> &CommonArgs {
        match self {
            Command::Spectrum(a) => &a.common,
            Command::Trajectories(a) => &a.common,
            Command::Evolve(a) => &a.common,
            Command::Pseudospec(a) => &a.common,
            Command::Overdamp(a) => &a.common,
            Command::Riesz(a) => &a.common,
            Command::Smoothing(a) => &a.common,
        }
    }
}

/// Flags shared by every subcommand. Requiredness and defaults differ per
/// command (the sweeps default to the reference ray, the single-pair
/// commands insist on explicit coefficients), so resolution happens at run
/// time rather than in the parser.
#[derive(Args)]
struct CommonArgs {
    /// Strip width; the transverse interval is (0, l)
    #[arg(long)]
    l: Option<f64>,
    /// Boundary coefficient on the wall y = l
    #[arg(long, allow_negative_numbers = true)]
    al: Option<f64>,
    /// Boundary coefficient on the wall y = 0
    #[arg(long, allow_negative_numbers = true)]
    a0: Option<f64>,
    /// Highest branch index to compute
    #[arg(long)]
    nmax: Option<usize>,
    /// Convergence threshold on the scaled characteristic residual
    #[arg(long)]
    tol: Option<f64>,
    /// Directory the output files go to; created if missing
    #[arg(long, default_value = ".")]
    out_dir: PathBuf,
    /// Worker threads; defaults to all cores and never changes the output bytes
    #[arg(long)]
    threads: Option<usize>,
    /// Seed for reproducible random initial data
    #[arg(long, default_value_t = 0)]
    seed: u64,
}

#[derive(Args)]
struct SpectrumArgs {
    #[command(flatten)]
    common: CommonArgs,
}

#[derive(Args)]
struct TrajectoriesArgs {
    #[command(flatten)]
    common: CommonArgs,
    /// Ray endpoint: branches are swept for boundary pairs s * (al, a0), s in [0, smax]
    #[arg(long, default_value_t = 1.0)]
    smax: f64,
    /// Number of grid points on the ray, endpoints included
    #[arg(long, default_value_t = 33)]
    steps: usize,
}

#[derive(Args)]
struct EvolveArgs {
    #[command(flatten)]
    common: CommonArgs,
    /// Time horizon
    #[arg(long, default_value_t = 20.0)]
    tmax: f64,
    /// Number of sample times, endpoints included
    #[arg(long, default_value_t = 81)]
    samples: usize,
    /// Initial data: gaussian | random | mode:N | file:PATH
    #[arg(long, default_value = "gaussian")]
    data: String,
    /// Also evaluate the smoothing functional with this weight exponent (> 0.5)
    #[arg(long)]
    delta: Option<f64>,
    /// Half-width of the periodic longitudinal box
    // Sized for the default horizon: the default packet's significant group
    // velocities stay below ~3, so 3 * 20 < 100 keeps wrap-around mass
    // under the warning threshold.
    #[arg(long, default_value_t = 100.0)]
    xbox: f64,
    /// Longitudinal grid size (power of two)
    #[arg(long, default_value_t = 1024)]
    nx: usize,
    /// Transverse quadrature nodes
    #[arg(long, default_value_t = 64)]
    ynodes: usize,
}

#[derive(Args)]
struct PseudospecArgs {
    #[command(flatten)]
    common: CommonArgs,
    #[arg(long, default_value_t = -2.0, allow_negative_numbers = true)]
    re_min: f64,
    #[arg(long, default_value_t = 30.0, allow_negative_numbers = true)]
    re_max: f64,
    #[arg(long, default_value_t = -3.0, allow_negative_numbers = true)]
    im_min: f64,
    #[arg(long, default_value_t = 1.0, allow_negative_numbers = true)]
    im_max: f64,
    /// Samples along the real axis
    #[arg(long, default_value_t = 61)]
    nre: usize,
    /// Samples along the imaginary axis
    #[arg(long, default_value_t = 41)]
    nim: usize,
}

#[derive(Args)]
struct OverdampArgs {
    #[command(flatten)]
    common: CommonArgs,
    /// Ray endpoint for the crossing scan
    #[arg(long, default_value_t = 12.0)]
    smax: f64,
    /// Number of grid points on the ray, endpoints included
    #[arg(long, default_value_t = 25)]
    steps: usize,
    /// Branch depth used to certify the gap along the ray
    #[arg(long, default_value_t = 48)]
    gap_nmax: usize,
}

#[derive(Args)]
struct RieszArgs {
    #[command(flatten)]
    common: CommonArgs,
}

#[derive(Args)]
struct SmoothingArgs {
    #[command(flatten)]
    common: CommonArgs,
    /// Weight exponent of the spatial decay; must exceed 0.5
    #[arg(long, default_value_t = 0.75)]
    delta: f64,
    /// Time horizon of the functional
    #[arg(long, default_value_t = 8.0)]
    tmax: f64,
    /// Time quadrature nodes
    #[arg(long, default_value_t = 129)]
    nt: usize,
    /// Initial data: gaussian | random | mode:N | file:PATH
    #[arg(long, default_value = "random")]
    data: String,
    /// Half-width of the periodic longitudinal box
    #[arg(long, default_value_t = 100.0)]
    xbox: f64,
    /// Longitudinal grid size (power of two)
    #[arg(long, default_value_t = 1024)]
    nx: usize,
    /// Transverse quadrature nodes
    #[arg(long, default_value_t = 64)]
    ynodes: usize,
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            // Help and version requests land here too; only real parse
            // failures are usage errors.
            let code = if e.use_stderr() { 64 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };

    if let Some(threads) = cli.command.common().threads {
        if threads >= 1 {
            if let Err(e) = rayon::ThreadPoolBuilder::new().num_threads(threads).build_global() {
                eprintln!("io error: cannot configure {threads} worker threads: {e}");
                return ExitCode::from(2);
            }
        }
    }

    let result = match cli.command {
        Command::Spectrum(a) => commands::spectrum(a),
        Command::Trajectories(a) => commands::trajectories(a),
        Command::Evolve(a) => commands::evolve(a),
        Command::Pseudospec(a) => commands::pseudospec(a),
        Command::Overdamp(a) => commands::overdamp(a),
        Command::Riesz(a) => commands::riesz(a),
        Command::Smoothing(a) => commands::smoothing(a),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(f) => {
            eprintln!("{}", f.message());
            ExitCode::from(f.exit_code())
        }
    }
}

//! Command-line front-end for the lattice CPWL approximation library.
//!
//! Five subcommands: `constants` prints the asymptotic error constants of a
//! lattice direction pair, `sweep` maps the constant over the whole angle
//! plane, `rate` runs an L2 projection error study over a stepsize list,
//! `disk` compares the closed-form disk-spectrum errors against quadrature,
//! and `relu` builds, checks, and exports a ReLU network equivalent of a
//! random spline. Outputs are CSV (stdout by default, `--output` to a
//! file); identical invocations produce byte-identical artifacts for any
//! thread count.
//!
//! Exit codes: 0 success, 2 invalid input, 3 numerical failure.

mod commands;

use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

#[derive(Parser)]
#[command(name = "lattice-cpwl", version, about = "CPWL approximation studies on 2D lattices")]
struct Cli {
    /// Worker thread cap for parallel sections; defaults to all cores.
    /// The LATTICE_CPWL_THREADS environment variable applies when the flag
    /// is absent. Output bytes do not depend on this value.
    #[arg(long, global = true)]
    threads: Option<usize>,

    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Print the asymptotic error constants alpha, beta, gamma, and C
    Constants(ConstantsArgs),
    /// Write the C(theta1, delta) landscape as CSV with a min/argmin summary
    Sweep(SweepArgs),
    /// Project a test function at several stepsizes and report the error decay
    Rate(RateArgs),
    /// Compare closed-form disk-spectrum errors with Fourier quadrature
    Disk(DiskArgs),
    /// Build a random-coefficient ReLU network, verify it, and export it
    Relu(ReluArgs),
}

/// Lattice direction selection shared by angle-taking subcommands: either a
/// preset or an explicit angle pair, optionally in degrees.
#[derive(Args)]
struct LatticeArgs {
    /// Named lattice preset; overrides the angle flags
    #[arg(long, value_enum)]
    preset: Option<Preset>,

    /// First direction angle (radians unless --degrees)
    #[arg(long)]
    theta1: Option<f64>,

    /// Second direction angle (radians unless --degrees)
    #[arg(long)]
    theta2: Option<f64>,

    /// Interpret --theta1/--theta2 in degrees
    #[arg(long)]
    degrees: bool,
}

#[derive(Clone, Copy, ValueEnum)]
enum Preset {
    /// Square grid: (0, pi/2)
    Cartesian,
    /// Equal-area hexagonal grid: (0, 2 pi / 3)
    Hexagonal,
}

impl LatticeArgs {
    fn angles(&self) -> Result<(f64, f64), CliError> {
        if let Some(preset) = self.preset {
            return Ok(match preset {
                Preset::Cartesian => (0.0, std::f64::consts::FRAC_PI_2),
                Preset::Hexagonal => (0.0, 2.0 * std::f64::consts::FRAC_PI_3),
            });
        }
        match (self.theta1, self.theta2) {
            (Some(t1), Some(t2)) => {
                let scale = if self.degrees {
                    std::f64::consts::PI / 180.0
                } else {
                    1.0
                };
                Ok((t1 * scale, t2 * scale))
            }
            _ => Err(invalid(
                "either --preset or both --theta1 and --theta2 are required",
            )),
        }
    }
}

#[derive(Args)]
struct ConstantsArgs {
    #[command(flatten)]
    lattice: LatticeArgs,

    /// Write the report to this file instead of stdout
    #[arg(long)]
    output: Option<std::path::PathBuf>,
}

#[derive(Args)]
struct SweepArgs {
    /// Samples per axis over the (0, 2 pi) x (0, 2 pi) angle plane
    #[arg(long, default_value_t = 500)]
    resolution: usize,

    /// Write the CSV to this file instead of stdout
    #[arg(long)]
    output: Option<std::path::PathBuf>,

    /// Also write a plotting script here; switches the CSV to plot mode,
    /// which blanks values >= 10 the way the reference figure clips them.
    /// Requires --output so the script can reference the data file.
    #[arg(long)]
    plot_script: Option<std::path::PathBuf>,
}

#[derive(Clone, Copy, ValueEnum)]
enum FunctionId {
    /// Isotropic Gaussian exp(-|x|^2 / (2 sigma^2))
    Gaussian,
    /// Axis-aligned anisotropic Gaussian with widths sigma and sigma2
    AnisotropicGaussian,
    /// Separable sinusoid under a Gaussian window
    Sinusoid,
    /// Affine map c0 + cx x1 + cy x2 measured on a square window
    Affine,
}

#[derive(Args)]
struct RateArgs {
    #[command(flatten)]
    lattice: LatticeArgs,

    /// Test function to project
    #[arg(long, value_enum)]
    function: FunctionId,

    /// Decreasing stepsizes, comma separated; fractions like 1/8 are accepted
    #[arg(long, default_value = "1/8,1/16,1/32,1/64")]
    stepsizes: String,

    /// Gaussian width sigma
    #[arg(long, default_value_t = 0.5)]
    sigma: f64,

    /// Second width for the anisotropic Gaussian
    #[arg(long, default_value_t = 1.0)]
    sigma2: f64,

    /// Sinusoid frequency along x1
    #[arg(long, default_value_t = 1.5)]
    freq1: f64,

    /// Sinusoid frequency along x2
    #[arg(long, default_value_t = 0.8)]
    freq2: f64,

    /// Gaussian window width for the sinusoid
    #[arg(long, default_value_t = 0.9)]
    window_sigma: f64,

    /// Affine coefficients constant term
    #[arg(long, default_value_t = 0.3)]
    c0: f64,

    /// Affine coefficient on x1
    #[arg(long, default_value_t = -0.7)]
    cx: f64,

    /// Affine coefficient on x2
    #[arg(long, default_value_t = 0.45)]
    cy: f64,

    /// Half-width of the affine measurement window
    #[arg(long, default_value_t = 2.0)]
    half_width: f64,

    /// Lattice cells of index-box dilation beyond the region; the default
    /// pushes boundary truncation below the affine reproduction tolerance
    #[arg(long, default_value_t = 24)]
    dilation: usize,

    /// Write the CSV to this file instead of stdout
    #[arg(long)]
    output: Option<std::path::PathBuf>,

    /// Also write a log-log plotting script here; requires --output
    #[arg(long)]
    plot_script: Option<std::path::PathBuf>,
}

#[derive(Args)]
struct DiskArgs {
    /// Spectrum amplitude c
    #[arg(long, default_value_t = 1.0)]
    amplitude: f64,

    /// Spectrum cutoff radius
    #[arg(long, default_value_t = 1.0)]
    omega_max: f64,

    /// Lattice stepsize T; fractions like 1/4 are accepted
    #[arg(long, default_value = "1")]
    stepsize: String,

    /// Write the CSV to this file instead of stdout
    #[arg(long)]
    output: Option<std::path::PathBuf>,
}

#[derive(Args)]
struct ReluArgs {
    /// Stepsize 1/n with integer n >= 2; fractions like 1/4 are accepted
    #[arg(long)]
    stepsize: String,

    /// Seed for the random coefficient grid and the check points
    #[arg(long, default_value_t = 7)]
    seed: u64,

    /// Write the network export here; stdout when absent
    #[arg(long)]
    output: Option<std::path::PathBuf>,
}

/// CLI failure: a library error, an I/O problem, or a failed numerical
/// self-check. Governs the process exit code.
enum CliError {
    Core(lattice_cpwl::Error),
    Io(std::path::PathBuf, std::io::Error),
    CheckFailed(String),
}

impl From<lattice_cpwl::Error> for CliError {
    fn from(e: lattice_cpwl::Error) -> Self {
        CliError::Core(e)
    }
}

impl std::fmt::Display for CliError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            CliError::Core(e) => write!(f, "{e}"),
            CliError::Io(path, e) => write!(f, "cannot write {}: {e}", path.display()),
            CliError::CheckFailed(msg) => write!(f, "self-check failed: {msg}"),
        }
    }
}

impl CliError {
    fn exit_code(&self) -> ExitCode {
        match self {
            CliError::Core(e) if e.is_invalid_input() => ExitCode::from(2),
            CliError::Io(..) => ExitCode::from(2),
            _ => ExitCode::from(3),
        }
    }
}

fn invalid(msg: &str) -> CliError {
    CliError::Core(lattice_cpwl::Error::InvalidInput(msg.to_string()))
}

/// Parses a stepsize written as a decimal or a fraction "a/b".
fn parse_stepsize(text: &str) -> Result<f64, CliError> {
    let text = text.trim();
    let value = match text.split_once('/') {
        Some((num, den)) => {
            let n: f64 = num
                .trim()
                .parse()
                .map_err(|_| invalid(&format!("bad stepsize fraction '{text}'")))?;
            let d: f64 = den
                .trim()
                .parse()
                .map_err(|_| invalid(&format!("bad stepsize fraction '{text}'")))?;
            n / d
        }
        None => text
            .parse()
            .map_err(|_| invalid(&format!("bad stepsize '{text}'")))?,
    };
    if !(value.is_finite() && value > 0.0) {
        return Err(invalid(&format!("stepsize '{text}' is not positive")));
    }
    Ok(value)
}

fn configure_threads(flag: Option<usize>) -> Result<(), CliError> {
    let count = match flag {
        Some(n) => Some(n),
        None => match std::env::var("LATTICE_CPWL_THREADS") {
            Ok(text) => Some(
                text.trim()
                    .parse()
                    .map_err(|_| invalid(&format!("bad LATTICE_CPWL_THREADS value '{text}'")))?,
            ),
            Err(_) => None,
        },
    };
    if let Some(n) = count {
        if n == 0 {
            return Err(invalid("thread count must be at least 1"));
        }
        rayon::ThreadPoolBuilder::new()
            .num_threads(n)
            .build_global()
            .map_err(|e| invalid(&format!("cannot configure thread pool: {e}")))?;
    }
    Ok(())
}

/// Writes an artifact to the given path, or to stdout when absent.
fn write_artifact(path: Option<&std::path::Path>, bytes: &[u8]) -> Result<(), CliError> {
    match path {
        Some(p) => std::fs::write(p, bytes).map_err(|e| CliError::Io(p.to_path_buf(), e)),
        None => {
            use std::io::Write;
            std::io::stdout()
                .write_all(bytes)
                .map_err(|e| CliError::Io(std::path::PathBuf::from("<stdout>"), e))
        }
    }
}

fn cmd_constants(args: &ConstantsArgs) -> Result<(), CliError> {
    let (theta1, theta2) = args.lattice.angles()?;
    let report = commands::constants_report(theta1, theta2)?;
    write_artifact(args.output.as_deref(), report.as_bytes())
}

fn cmd_sweep(args: &SweepArgs) -> Result<(), CliError> {
    let clip = args.plot_script.is_some().then_some(commands::PLOT_CLIP);
    if args.plot_script.is_some() && args.output.is_none() {
        return Err(invalid("--plot-script requires --output"));
    }
    let (csv, table) = commands::sweep_csv(args.resolution, clip)?;
    write_artifact(args.output.as_deref(), csv.as_bytes())?;
    if let Some(script_path) = &args.plot_script {
        let script = commands::sweep_plot_script(args.output.as_ref().unwrap());
        write_artifact(Some(script_path), script.as_bytes())?;
    }
    eprintln!(
        "min M = {} at theta1 = {}, delta = {}",
        table.min_value, table.argmin.0, table.argmin.1
    );
    Ok(())
}

fn cmd_rate(args: &RateArgs) -> Result<(), CliError> {
    if args.plot_script.is_some() && args.output.is_none() {
        return Err(invalid("--plot-script requires --output"));
    }
    let (theta1, theta2) = args.lattice.angles()?;
    let mut stepsizes = Vec::new();
    for part in args.stepsizes.split(',') {
        stepsizes.push(parse_stepsize(part)?);
    }
    let f = commands::build_function(args)?;
    let csv = commands::rate_csv(&f, theta1, theta2, &stepsizes, args.dilation)?;
    write_artifact(args.output.as_deref(), csv.as_bytes())?;
    if let Some(script_path) = &args.plot_script {
        let script = commands::rate_plot_script(args.output.as_ref().unwrap());
        write_artifact(Some(script_path), script.as_bytes())?;
    }
    Ok(())
}

fn cmd_disk(args: &DiskArgs) -> Result<(), CliError> {
    let t = parse_stepsize(&args.stepsize)?;
    let csv = commands::disk_csv(args.amplitude, args.omega_max, t)?;
    write_artifact(args.output.as_deref(), csv.as_bytes())
}

fn cmd_relu(args: &ReluArgs) -> Result<(), CliError> {
    let t = parse_stepsize(&args.stepsize)?;
    let outcome = commands::relu_build_and_check(t, args.seed)?;
    let relation = if outcome.max_deviation <= commands::RELU_TOLERANCE {
        "<="
    } else {
        ">"
    };
    println!(
        "{} neurons, max |delta| {:.3e} {relation} 1e-10 over {} points",
        outcome.neurons, outcome.max_deviation, commands::RELU_CHECK_POINTS
    );
    if outcome.max_deviation > commands::RELU_TOLERANCE {
        return Err(CliError::CheckFailed(format!(
            "network deviates from the spline by {:.3e}",
            outcome.max_deviation
        )));
    }
    write_artifact(args.output.as_deref(), outcome.export.as_bytes())
}

fn run(cli: Cli) -> Result<(), CliError> {
    configure_threads(cli.threads)?;
    match cli.command {
        Command::Constants(args) => cmd_constants(&args),
        Command::Sweep(args) => cmd_sweep(&args),
        Command::Rate(args) => cmd_rate(&args),
        Command::Disk(args) => cmd_disk(&args),
        Command::Relu(args) => cmd_relu(&args),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(err) => {
            eprintln!("error: {err}");
            err.exit_code()
        }
    }
}

use std::fs;
use std::io::{self, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use num_complex::Complex64;
use serde::Serialize;

use nlcs::states::{self, StateSpec};
use nlcs::verify::{self, CheckConfig, Family, Suite};
use nlcs::{Error, FockVector, Truncation};

const EXIT_FAILED: u8 = 1;
const EXIT_USAGE: u8 = 2;
const EXIT_NUMERIC: u8 = 3;

#[derive(Parser)]
#[command(
    name = "nlcs",
    version,
    about = "Build nonlinear coherent states and verify their identities"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Build a state and write its amplitudes as JSON.
    Build(BuildArgs),
    /// Run a check suite and write the report as JSON.
    Check(CheckArgs),
    /// Photon-number statistics of a state file.
    Stats { path: PathBuf },
}

#[derive(Clone, Copy, ValueEnum)]
enum BuildFamily {
    Coherent,
    Excited,
    Nbs,
    Binomial,
    Perelomov,
}

#[derive(clap::Args)]
struct BuildArgs {
    #[arg(
        long,
        value_enum,
        conflicts_with = "spec",
        required_unless_present = "spec"
    )]
    family: Option<BuildFamily>,
    /// State spec as a file path or inline JSON.
    #[arg(long)]
    spec: Option<String>,
    #[arg(long, default_value_t = 0.0, allow_negative_numbers = true)]
    alpha: f64,
    #[arg(
        long = "alpha-im",
        default_value_t = 0.0,
        allow_negative_numbers = true
    )]
    alpha_im: f64,
    #[arg(long, default_value_t = 0)]
    m: usize,
    #[arg(long, allow_negative_numbers = true)]
    eta: Option<f64>,
    #[arg(long = "M")]
    big_m: Option<usize>,
    #[arg(long)]
    k: Option<usize>,
    /// Fixed truncation dimension; adaptive when omitted.
    #[arg(long)]
    dim: Option<usize>,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(clap::Args)]
struct CheckArgs {
    #[arg(value_parser = parse_suite)]
    suite: Suite,
    #[arg(long, value_delimiter = ',', allow_negative_numbers = true)]
    eta: Vec<f64>,
    #[arg(long = "M", value_delimiter = ',')]
    big_m: Vec<usize>,
    #[arg(long, value_delimiter = ',')]
    m: Vec<usize>,
    #[arg(long, value_delimiter = ',')]
    k: Vec<usize>,
    /// Eigenvalues for the Perelomov checks.
    #[arg(long, value_delimiter = ',', allow_negative_numbers = true)]
    alpha: Vec<f64>,
    #[arg(long)]
    dim: Option<usize>,
    #[arg(long)]
    seed: Option<u64>,
    #[arg(long = "random-functions")]
    random_functions: Option<usize>,
    #[arg(long, value_parser = parse_family)]
    family: Option<Family>,
    #[arg(long)]
    out: Option<PathBuf>,
}

fn parse_suite(s: &str) -> Result<Suite, String> {
    s.parse().map_err(|e: Error| e.to_string())
}

fn parse_family(s: &str) -> Result<Family, String> {
    s.parse().map_err(|e: Error| e.to_string())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let outcome = match cli.command {
        Command::Build(args) => cmd_build(args),
        Command::Check(args) => cmd_check(args),
        Command::Stats { path } => cmd_stats(&path),
    };
    match outcome {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("nlcs: {}", e.message);
            ExitCode::from(e.code)
        }
    }
}

struct Failure {
    code: u8,
    message: String,
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        let code = if e.is_numeric() {
            EXIT_NUMERIC
        } else {
            EXIT_USAGE
        };
        Failure {
            code,
            message: e.to_string(),
        }
    }
}

fn usage(message: impl Into<String>) -> Failure {
    Failure {
        code: EXIT_USAGE,
        message: message.into(),
    }
}

fn io_failure(what: &Path, e: std::io::Error) -> Failure {
    usage(format!("{}: {e}", what.display()))
}

fn emit<T: Serialize>(value: &T, out: Option<&Path>) -> Result<(), Failure> {
    let text = serde_json::to_string_pretty(value).map_err(|e| usage(e.to_string()))?;
    match out {
        Some(path) => fs::write(path, text + "\n").map_err(|e| io_failure(path, e)),
        None => {
            let mut stdout = io::stdout().lock();
            match writeln!(stdout, "{text}") {
                Err(e) if e.kind() != io::ErrorKind::BrokenPipe => {
                    Err(usage(format!("stdout: {e}")))
                }
                _ => Ok(()),
            }
        }
    }
}

fn need<T>(value: Option<T>, flag: &str) -> Result<T, Failure> {
    value.ok_or_else(|| usage(format!("--{flag} is required for this family")))
}

fn state_spec(args: &BuildArgs) -> Result<StateSpec, Failure> {
    if let Some(src) = &args.spec {
        let path = Path::new(src);
        let text = if path.is_file() {
            fs::read_to_string(path).map_err(|e| io_failure(path, e))?
        } else {
            src.clone()
        };
        return serde_json::from_str(&text).map_err(|e| usage(format!("invalid state spec: {e}")));
    }
    let alpha = Complex64::new(args.alpha, args.alpha_im);
    let family = args.family.expect("clap enforces --family or --spec");
    Ok(match family {
        BuildFamily::Coherent => StateSpec::Coherent { alpha },
        BuildFamily::Excited => StateSpec::ExcitedCoherent { alpha, m: args.m },
        BuildFamily::Nbs => StateSpec::NegativeBinomial {
            eta: need(args.eta, "eta")?,
            big_m: need(args.big_m, "M")?,
        },
        BuildFamily::Binomial => StateSpec::Binomial {
            eta: need(args.eta, "eta")?,
            big_m: need(args.big_m, "M")?,
        },
        BuildFamily::Perelomov => StateSpec::PerelomovK {
            alpha,
            k: need(args.k, "k")?,
        },
    })
}

fn cmd_build(args: BuildArgs) -> Result<u8, Failure> {
    let spec = state_spec(&args)?;
    let trunc = match args.dim {
        Some(0) => return Err(usage("--dim must be positive")),
        Some(d) => Truncation::Fixed(d),
        None => Truncation::default(),
    };
    let v = spec.build(trunc)?;
    emit(&v, args.out.as_deref())?;
    Ok(0)
}

fn cmd_check(args: CheckArgs) -> Result<u8, Failure> {
    let mut cfg = CheckConfig::default();
    if !args.eta.is_empty() {
        cfg.etas = args.eta;
    }
    if !args.big_m.is_empty() {
        cfg.big_ms = args.big_m;
    }
    if !args.m.is_empty() {
        cfg.excitations = args.m;
    }
    if !args.k.is_empty() {
        cfg.ks = args.k;
    }
    if !args.alpha.is_empty() {
        cfg.perelomov_alphas = args.alpha;
    }
    if let Some(d) = args.dim {
        cfg.dim = d;
    }
    if let Some(s) = args.seed {
        cfg.seed = s;
    }
    if let Some(n) = args.random_functions {
        cfg.random_functions = n;
    }
    cfg.family = args.family;

    let report = verify::run(args.suite, &cfg)?;
    emit(&report, args.out.as_deref())?;
    for c in report.checks.iter().filter(|c| !c.passed) {
        eprintln!("FAILED {}: {:e} > {:e}", c.name, c.value, c.tolerance);
    }
    eprintln!(
        "{}: {}/{} checks passed",
        report.suite, report.summary.passed, report.summary.total
    );
    Ok(if report.all_passed() { 0 } else { EXIT_FAILED })
}

fn cmd_stats(path: &Path) -> Result<u8, Failure> {
    let text = fs::read_to_string(path).map_err(|e| io_failure(path, e))?;
    let v: FockVector = serde_json::from_str(&text)
        .map_err(|e| usage(format!("{}: malformed state: {e}", path.display())))?;
    let stats = states::photon_stats(&v)?;
    emit(&stats, None)?;
    Ok(0)
}

mod emit;

use std::fmt;
use std::process::ExitCode;
use std::str::FromStr;

use clap::error::ErrorKind;
use clap::{Args, Parser, Subcommand, ValueEnum};
use twist_lo::riley::{all_roots, DEFAULT_TOL_T};
use twist_lo::slope::{g_eval_with, scan_with, DEFAULT_GRID_MAX, DEFAULT_GRID_MIN, DEFAULT_GRID_POINTS, DEFAULT_TOL_G};
use twist_lo::verify::{verify, Grid};
use twist_lo::{certificate_with, invert_with, riley_poly, solve_with, CertOptions, Exec, InvertOptions, SolveOptions};

use emit::{Emitter, Failure};

#[derive(Parser, Debug)]
#[command(
    name = "twist-lo",
    version,
    about = "Twist knot representations, slope inversion and cover certificates"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,

    /// Output format.
    #[arg(long, global = true, value_enum, default_value_t = Format::Json)]
    format: Format,

    /// Absolute tolerance on T for the Riley root.
    #[arg(long = "tol-T", global = true, value_parser = positive, default_value_t = DEFAULT_TOL_T)]
    tol_t: f64,

    /// Tolerance on |g(s) - r| for slope inversion.
    #[arg(long = "tol-g", global = true, value_parser = positive, default_value_t = DEFAULT_TOL_G)]
    tol_g: f64,

    /// Tolerance on the final cover element of a certificate.
    #[arg(long = "tol-cert", global = true, value_parser = positive)]
    tol_cert: Option<f64>,

    /// Evaluate grid points one at a time.
    #[arg(long, global = true)]
    sequential: bool,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Exact Riley polynomial of K_n.
    Riley(TwistArg),
    /// Root of Riley's equation in the certified bracket.
    Solve(SolveArgs),
    /// Slope g at a given s, or s* with g(s*) = r.
    Slope(SlopeArgs),
    /// Table of (s, T, t, B, g) on a log-spaced grid.
    Scan(ScanArgs),
    /// Universal-cover certificate for surgery slope r.
    Certify(CertifyArgs),
    /// Invariant report over the standard grid.
    Verify,
}

#[derive(Args, Debug)]
struct TwistArg {
    /// Twist parameter, not 0 or -1.
    #[arg(long, allow_negative_numbers = true)]
    n: i64,
}

#[derive(Args, Debug)]
struct SolveArgs {
    #[command(flatten)]
    twist: TwistArg,
    /// Representation parameter s > 0.
    #[arg(long, allow_negative_numbers = true)]
    s: f64,
    /// Also list every root of Riley's equation in the band.
    #[arg(long)]
    all_roots: bool,
    /// Sample count for --all-roots.
    #[arg(long, default_value_t = 4000)]
    samples: usize,
}

#[derive(Args, Debug)]
#[group(id = "point", required = true, multiple = false, args = ["s", "r"])]
struct SlopeArgs {
    #[command(flatten)]
    twist: TwistArg,
    /// Evaluate g at this s > 0.
    #[arg(long, allow_negative_numbers = true)]
    s: Option<f64>,
    /// Target slope p/q.
    #[arg(long)]
    r: Option<Rational>,
}

#[derive(Args, Debug)]
struct ScanArgs {
    #[command(flatten)]
    twist: TwistArg,
    /// Smallest s on the grid.
    #[arg(long, allow_negative_numbers = true, default_value_t = DEFAULT_GRID_MIN)]
    s_min: f64,
    /// Largest s on the grid.
    #[arg(long, allow_negative_numbers = true, default_value_t = DEFAULT_GRID_MAX)]
    s_max: f64,
    /// Number of grid points.
    #[arg(long, default_value_t = DEFAULT_GRID_POINTS)]
    samples: usize,
}

#[derive(Args, Debug)]
struct CertifyArgs {
    #[command(flatten)]
    twist: TwistArg,
    /// Surgery slope p/q.
    #[arg(long)]
    r: Rational,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Csv,
    Text,
}

/// `p/q` with `q > 0`, or a bare integer.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
struct Rational {
    p: i64,
    q: i64,
}

impl FromStr for Rational {
    type Err = String;

    fn from_str(text: &str) -> Result<Self, Self::Err> {
        let bad = || format!("expected p/q with integers p and q > 0, got {text:?}");
        let (p, q) = match text.split_once('/') {
            Some((p, q)) => (
                p.trim().parse().map_err(|_| bad())?,
                q.trim().parse().map_err(|_| bad())?,
            ),
            None => (text.trim().parse().map_err(|_| bad())?, 1),
        };
        if q <= 0 {
            return Err(bad());
        }
        Ok(Rational { p, q })
    }
}

impl fmt::Display for Rational {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}/{}", self.p, self.q)
    }
}

fn positive(text: &str) -> Result<f64, String> {
    match text.parse::<f64>() {
        Ok(x) if x > 0.0 && x.is_finite() => Ok(x),
        _ => Err(format!("expected a positive finite number, got {text:?}")),
    }
}

impl Cli {
    fn solve_options(&self) -> SolveOptions {
        SolveOptions {
            tol: self.tol_t,
            ..SolveOptions::default()
        }
    }

    fn exec(&self) -> Exec {
        if self.sequential {
            Exec::Sequential
        } else {
            Exec::Parallel
        }
    }

    fn invert_options(&self) -> InvertOptions {
        InvertOptions {
            tol_g: self.tol_g,
            solve: self.solve_options(),
            exec: self.exec(),
            ..InvertOptions::default()
        }
    }
}

fn run(cli: &Cli) -> Result<(), Failure> {
    let out = Emitter::new(cli.format);
    match &cli.command {
        Command::Riley(a) => out.riley(a.n, &riley_poly(a.n)?),
        Command::Solve(a) => {
            let sol = solve_with(a.twist.n, a.s, &cli.solve_options())?;
            let roots = match a.all_roots {
                true => Some(all_roots(a.twist.n, a.s, a.samples, cli.tol_t)?),
                false => None,
            };
            out.solve(&sol, roots.as_deref());
        }
        Command::Slope(a) => match (a.s, a.r) {
            (Some(s), _) => out.slope_at(a.twist.n, &g_eval_with(a.twist.n, s, &cli.solve_options())?),
            (None, Some(r)) => {
                let inv = invert_with(a.twist.n, r.p, r.q, &cli.invert_options())?;
                out.inversion(a.twist.n, &r.to_string(), &inv);
            }
            (None, None) => unreachable!("clap requires --s or --r"),
        },
        Command::Scan(a) => {
            let table = scan_with(a.twist.n, a.s_min, a.s_max, a.samples, &cli.solve_options(), cli.exec())?;
            out.scan(a.twist.n, &table);
        }
        Command::Certify(a) => {
            let opts = CertOptions {
                invert: cli.invert_options(),
                tol_cert: cli.tol_cert,
            };
            out.certificate(&certificate_with(a.twist.n, a.r.p, a.r.q, &opts)?);
        }
        Command::Verify => {
            let report = verify(&Grid::default(), cli.exec());
            out.verify(&report);
            if !report.passed() {
                return Err(Failure::ReportFailed);
            }
        }
    }
    Ok(())
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            if matches!(e.kind(), ErrorKind::DisplayHelp | ErrorKind::DisplayVersion) {
                print!("{e}");
                return ExitCode::SUCCESS;
            }
            return emit::usage_error(&e.render().to_string());
        }
    };
    match run(&cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(failure) => failure.report(),
    }
}

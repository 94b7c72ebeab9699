//! `tenderiv`: run the identity suites, evaluate catalog derivatives and
//! convert between derivative layouts.
//!
//! Exit codes: 0 when every check passes, 1 when a check fails or a domain
//! guard trips, 2 for usage and parse errors.

use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};

use tenderiv::bridge::{to_group2, to_group3};
use tenderiv::calculus::{fd_report, lookup, FDConfig};
use tenderiv::json::{parse_matrix, parse_tensor4, summary_to_json, tensor4_to_json, tensor_to_json};
use tenderiv::suite::run_identities;
use tenderiv::Error;

#[derive(Parser)]
#[command(
    name = "tenderiv",
    version,
    about = "Tensor algebra and tensor-derivative identity checks"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run every identity suite on seeded random inputs.
    Identities {
        #[arg(long, env = "TENDERIV_SEED", default_value_t = 42)]
        seed: u64,
        /// Random trials per check.
        #[arg(long, default_value_t = 200, value_parser = clap::value_parser!(u32).range(1..))]
        trials: u32,
        /// Override the algebraic-identity tolerance.
        #[arg(long)]
        tol: Option<f64>,
        /// Write the run summary as JSON.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Analytic derivative of a catalog function at a matrix.
    Deriv {
        /// I1, I2, I3, trI_pow_<n>, id, transpose, square, cube or inverse.
        #[arg(long = "fn")]
        function: String,
        /// JSON file holding {"matrix": [[...]]}.
        #[arg(long)]
        at: PathBuf,
        /// Compare against central differences.
        #[arg(long)]
        fd_check: bool,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Permute a fourth-rank derivative between layouts.
    Convert {
        #[arg(long, value_enum)]
        direction: Direction,
        /// JSON file holding {"tensor4": [...]}.
        #[arg(long)]
        tensor: PathBuf,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum Direction {
    ToGroup2,
    ToGroup3,
}

enum Failure {
    Usage(String),
    Check(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        match e {
            Error::Domain(_) | Error::Singular { .. } => Failure::Check(e.to_string()),
            _ => Failure::Usage(e.to_string()),
        }
    }
}

fn read(path: &Path) -> Result<String, Failure> {
    fs::read_to_string(path).map_err(|e| Failure::Usage(format!("cannot read {}: {e}", path.display())))
}

fn emit(text: &str, out: Option<&Path>) -> Result<(), Failure> {
    match out {
        Some(p) => fs::write(p, text).map_err(|e| Failure::Usage(format!("cannot write {}: {e}", p.display()))),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn run(cmd: Command) -> Result<(), Failure> {
    match cmd {
        Command::Identities { seed, trials, tol, out } => {
            if let Some(t) = tol.filter(|t| !(t.is_finite() && *t >= 0.0)) {
                return Err(Failure::Usage(format!(
                    "tolerance must be a non-negative number, got {t}"
                )));
            }
            let summary = run_identities(seed, trials, tol);
            for r in &summary.reports {
                println!("{}", r.line());
            }
            let failed = summary.failures().count();
            println!(
                "{} checks, {} failed, seed {seed}, {trials} trials, {} ms",
                summary.reports.len(),
                failed,
                summary.wall_time_ms
            );
            if let Some(p) = out.as_deref() {
                emit(&summary_to_json(&summary), Some(p))?;
            }
            if summary.all_pass {
                Ok(())
            } else {
                Err(Failure::Check(format!("{failed} check(s) failed")))
            }
        }
        Command::Deriv {
            function,
            at,
            fd_check,
            out,
        } => {
            let f = lookup(&function)?;
            let a = parse_matrix(&read(&at)?)?;
            let derivative = f.derivative(&a)?;
            let report = if fd_check {
                Some(fd_report(&f, &a, &FDConfig::default())?)
            } else {
                None
            };
            emit(&tensor_to_json(&derivative, report.as_ref()), out.as_deref())?;
            match report {
                Some(r) if !r.pass => {
                    eprintln!("{}", r.line());
                    Err(Failure::Check("finite-difference check failed".into()))
                }
                _ => Ok(()),
            }
        }
        Command::Convert { direction, tensor, out } => {
            let l = parse_tensor4(&read(&tensor)?)?;
            let converted = match direction {
                Direction::ToGroup2 => to_group2(&l),
                Direction::ToGroup3 => to_group3(&l),
            };
            emit(&tensor4_to_json(&converted), out.as_deref())
        }
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match run(cli.command) {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Check(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(1)
        }
        Err(Failure::Usage(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
    }
}

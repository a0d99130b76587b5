//! Command-line front end for the `commutant` library.
//!
//! [`run`] parses arguments, executes one subcommand and returns the process
//! exit code: 0 on success, 2 for usage and parse errors, 3 for dimension and
//! domain errors, 4 when a verification suite fails.

use std::ffi::OsString;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand, ValueEnum};
use commutant::matrix::parse_matrix_text;
use commutant::{
    CommutationMatrix, CommutationTensor, DenseTensor, Error, Gct, Permutation, RankPreserver,
};

pub mod verify;

pub use verify::{RunConfig, Suite, SuiteReport};

pub const EXIT_OK: i32 = 0;
pub const EXIT_USAGE: i32 = 2;
pub const EXIT_DOMAIN: i32 = 3;
pub const EXIT_VERIFY: i32 = 4;

/// Environment variable that, when set, replaces `--seed`.
pub const SEED_ENV: &str = "COMMUTANT_SEED";

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Text,
    Json,
}

#[derive(Debug, Parser)]
#[command(
    name = "commutant",
    version,
    about = "Commutation matrices, commutation tensors and rank preservers"
)]
pub struct Cli {
    /// Output format
    #[arg(long, global = true, value_enum, default_value = "text")]
    pub format: Format,
    /// Comparison tolerance for inexact checks
    #[arg(long, global = true, default_value_t = 1e-9)]
    pub tol: f64,
    /// Seed for random draws; COMMUTANT_SEED overrides it
    #[arg(long, global = true, default_value_t = 0)]
    pub seed: u64,
    /// Random draws per check
    #[arg(long, global = true, default_value_t = 20)]
    pub trials: usize,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Print the commutation matrix K_{p,q}
    GenKmat { p: usize, q: usize },
    /// Print the fourth-order commutation tensor for m×n operands as tensor JSON
    GenKtensor { m: usize, n: usize },
    /// Print the generalized commutation tensor of a permutation
    GenGct {
        /// Number of slots
        m: usize,
        /// Permutation of 1..n as comma-separated 1-based images, e.g. 2,3,1
        #[arg(value_delimiter = ',', required = true)]
        perm: Vec<usize>,
        /// Emit the dense order-2m tensor instead of the generators
        #[arg(long)]
        dense: bool,
    },
    /// Run identity suites over random draws
    Verify {
        /// Suites to run (repeatable or comma-separated)
        #[arg(long, value_enum, value_delimiter = ',', default_value = "all")]
        suite: Vec<Suite>,
        /// Sizes as AxB, comma-separated
        #[arg(long, value_delimiter = ',', value_parser = parse_size, default_value = "2x2,2x3")]
        sizes: Vec<(usize, usize)>,
        /// Corrupt one computed object per suite so the run must fail
        #[arg(long)]
        inject_fault: bool,
    },
    /// Apply a rank preserver file to a tensor or matrix file
    Apply { preserver: PathBuf, tensor: PathBuf },
    /// Print the balance unfolding of an even-order tensor file
    Unfold { tensor: PathBuf },
}

fn parse_size(s: &str) -> Result<(usize, usize), String> {
    let (a, b) = s
        .split_once(['x', 'X'])
        .ok_or_else(|| format!("size {s:?} is not of the form AxB"))?;
    let parse = |t: &str| {
        t.trim()
            .parse::<usize>()
            .ok()
            .filter(|&v| v > 0)
            .ok_or_else(|| format!("size component {t:?} is not a positive integer"))
    };
    Ok((parse(a)?, parse(b)?))
}

/// Failure of a subcommand, carrying its exit code.
#[derive(Debug)]
struct Failure {
    code: i32,
    message: String,
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        let code = match e {
            Error::Parse(_) | Error::Argument(_) => EXIT_USAGE,
            _ => EXIT_DOMAIN,
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

/// Runs one invocation. `env_seed` is the value of [`SEED_ENV`], if set.
pub fn run<I, T>(args: I, env_seed: Option<&str>, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = e.exit_code();
            let text = e.render().to_string();
            let sink: &mut dyn Write = if e.use_stderr() { err } else { out };
            let _ = sink.write_all(text.as_bytes());
            return code;
        }
    };
    match execute(cli, env_seed, out) {
        Ok(code) => code,
        Err(f) => {
            let _ = writeln!(err, "error: {}", f.message);
            f.code
        }
    }
}

fn execute(mut cli: Cli, env_seed: Option<&str>, out: &mut dyn Write) -> Result<i32, Failure> {
    if let Some(s) = env_seed {
        cli.seed = s.trim().parse().map_err(|_| {
            usage(format!(
                "{SEED_ENV}={s:?} is not an unsigned 64-bit integer"
            ))
        })?;
    }
    let text = match cli.command {
        Command::GenKmat { p, q } => {
            let k = CommutationMatrix::new(p, q)?;
            match cli.format {
                Format::Text => k.to_dense().to_string(),
                Format::Json => k.to_json() + "\n",
            }
        }
        Command::GenKtensor { m, n } => CommutationTensor::new(m, n)?.backing().to_json() + "\n",
        Command::GenGct { m, ref perm, dense } => {
            let pi = Permutation::from_one_based(perm)?;
            let g = Gct::from_permutation(&pi, m)?;
            if dense {
                g.to_dense().to_json() + "\n"
            } else {
                match cli.format {
                    Format::Json => g.to_json() + "\n",
                    Format::Text => g
                        .generators()
                        .iter()
                        .map(ToString::to_string)
                        .collect::<Vec<_>>()
                        .join("\n"),
                }
            }
        }
        Command::Verify {
            ref suite,
            ref sizes,
            inject_fault,
        } => {
            let config =
                RunConfig::new(sizes.clone(), cli.seed, cli.trials, cli.tol).map_err(usage)?;
            let reports = verify::run_suites(&Suite::expand(suite), &config, inject_fault)?;
            let rendered = match cli.format {
                Format::Text => verify::render_text(&reports),
                Format::Json => verify::render_json(&reports, &config) + "\n",
            };
            write_out(out, &rendered)?;
            let ok = reports.iter().all(SuiteReport::passed_all);
            return Ok(if ok { EXIT_OK } else { EXIT_VERIFY });
        }
        Command::Apply {
            ref preserver,
            ref tensor,
        } => {
            let phi = RankPreserver::from_json(&read(preserver)?)?;
            let a = read_tensor(tensor)?;
            phi.apply(&a)?.to_json() + "\n"
        }
        Command::Unfold { ref tensor } => {
            let unfolded = read_tensor(tensor)?.balance_unfold()?;
            match cli.format {
                Format::Text => unfolded.to_string(),
                Format::Json => DenseTensor::from_matrix(&unfolded).to_json() + "\n",
            }
        }
    };
    write_out(out, &text)?;
    Ok(EXIT_OK)
}

fn write_out(out: &mut dyn Write, text: &str) -> Result<(), Failure> {
    out.write_all(text.as_bytes()).map_err(|e| Failure {
        code: 1,
        message: format!("write failed: {e}"),
    })
}

fn read(path: &Path) -> Result<String, Failure> {
    std::fs::read_to_string(path).map_err(|e| usage(format!("{}: {e}", path.display())))
}

/// Tensor JSON, or matrix text for an order-2 tensor.
fn read_tensor(path: &Path) -> Result<DenseTensor, Failure> {
    let text = read(path)?;
    if text.trim_start().starts_with('{') {
        return Ok(DenseTensor::from_json(&text)?);
    }
    let m = parse_matrix_text(&text).map_err(|e| usage(format!("{}: {e}", path.display())))?;
    Ok(DenseTensor::from_matrix(&m))
}

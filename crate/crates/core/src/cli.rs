//! The `spheregeom` command line: JSON files in, one JSON document out.
//!
//! Exit codes: 0 success, 1 a verify command found mismatches, 2 invalid input,
//! 3 size refusal.

use std::ffi::OsString;
use std::path::PathBuf;

use clap::{Parser, Subcommand};
use serde_json::{json, Value};

use crate::diagonal::{
    diag_compact_probe, diag_distance, diag_double_sphere_membership, diag_norm, diag_range, diag_support,
    DiagonalOperator,
};
use crate::error::{Error, Result};
use crate::json;
use crate::linalg::{is_projection, HermitianMatrix, PositiveContraction};
use crate::oracle::isometry::sample_set;
use crate::oracle::{verify_bispherical_identity, verify_projection_preservation, GridSpec, IsometryModel};
use crate::sphere::{distance_one_witness, double_sphere_membership, is_projection_via_double_sphere, refutation_witness};

pub const EXIT_OK: i32 = 0;
pub const EXIT_MISMATCH: i32 = 1;
pub const EXIT_INVALID: i32 = 2;
pub const EXIT_REFUSED: i32 = 3;

/// Thread-count variable; `0` or unset lets rayon decide.
pub const THREADS_ENV: &str = "SPHEREGEOM_THREADS";

const MAX_ISOMETRY_DIM: usize = 16;
const MAX_ISOMETRY_SAMPLES: usize = 2000;

#[derive(Debug, Parser)]
#[command(name = "spheregeom", version, about = "Metric-sphere characterizations of projections")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Decide whether a matrix is a projection via its double sphere.
    CheckProjection { file: PathBuf },
    /// Distance between A and B, and a witness when it equals 1.
    Witness { a: PathBuf, b: PathBuf },
    /// Is B in the double sphere of A?
    DoubleSphere { b: PathBuf, a: PathBuf },
    /// A second member of the double sphere of a non-projection A.
    Refute { a: PathBuf },
    /// Compare brute-force double spheres with the closed form on a diagonal grid.
    VerifyGrid {
        #[arg(long)]
        dim: usize,
        #[arg(long)]
        k: u32,
        /// Report wall-clock time (makes output non-reproducible).
        #[arg(long)]
        timing: bool,
    },
    /// Check that a seeded unitary isometry preserves projections and distances.
    VerifyIsometry {
        #[arg(long)]
        dim: usize,
        #[arg(long)]
        seed: u64,
        #[arg(long)]
        samples: usize,
        /// Follow the conjugation by the transpose.
        #[arg(long)]
        twist: bool,
        #[arg(long)]
        timing: bool,
    },
    /// Exact diagonal operators on l2.
    #[command(subcommand)]
    Diag(DiagCommand),
}

#[derive(Debug, Subcommand)]
enum DiagCommand {
    Norm { a: PathBuf },
    Distance { a: PathBuf, b: PathBuf },
    Support { a: PathBuf },
    Range { a: PathBuf },
    DoubleSphere { b: PathBuf, a: PathBuf },
    /// The compact probe with support at a 1-based index.
    Probe {
        #[arg(long)]
        index: usize,
    },
}

/// What one invocation produced.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Outcome {
    pub code: i32,
    pub stdout: String,
    pub stderr: String,
}

impl Outcome {
    fn report(doc: &Value, clean: bool) -> Self {
        Self {
            code: if clean { EXIT_OK } else { EXIT_MISMATCH },
            stdout: json::to_pretty(doc),
            stderr: String::new(),
        }
    }

    fn error(e: &Error) -> Self {
        let code = match e {
            Error::SizeRefused(_) => EXIT_REFUSED,
            _ => EXIT_INVALID,
        };
        Self {
            code,
            stdout: json::to_pretty(&json!({ "error": e.to_string() })),
            stderr: format!("error: {e}\n"),
        }
    }
}

/// Parses `argv` (including the program name) and runs the command.
pub fn run<I, T>(argv: I) -> Outcome
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_INVALID } else { EXIT_OK };
            let text = e.render().to_string();
            return if e.use_stderr() {
                Outcome {
                    code,
                    stdout: String::new(),
                    stderr: text,
                }
            } else {
                Outcome {
                    code,
                    stdout: text,
                    stderr: String::new(),
                }
            };
        }
    };
    let pool = match thread_pool() {
        Ok(p) => p,
        Err(e) => return Outcome::error(&e),
    };
    match pool.install(|| execute(cli.command)) {
        Ok((doc, clean)) => Outcome::report(&doc, clean),
        Err(e) => Outcome::error(&e),
    }
}

fn thread_pool() -> Result<rayon::ThreadPool> {
    let n = match std::env::var(THREADS_ENV) {
        Ok(s) if !s.trim().is_empty() => s
            .trim()
            .parse::<usize>()
            .map_err(|_| Error::Parse(format!("{THREADS_ENV} must be a non-negative integer, got {s:?}")))?,
        _ => 0,
    };
    rayon::ThreadPoolBuilder::new()
        .num_threads(n)
        .build()
        .map_err(|e| Error::Precondition(e.to_string()))
}

fn read_matrix(path: &PathBuf) -> Result<PositiveContraction> {
    PositiveContraction::new(HermitianMatrix::from_json(&json::read_file(path)?)?)
}

fn read_diag(path: &PathBuf) -> Result<DiagonalOperator> {
    DiagonalOperator::from_json(&json::read_file(path)?)
}

fn execute(cmd: Command) -> Result<(Value, bool)> {
    let doc = match cmd {
        Command::CheckProjection { file } => {
            let a = read_matrix(&file)?;
            let via = is_projection_via_double_sphere(&a)?;
            json!({
                "projection": via,
                "via": "double-sphere",
                "spectral_agree": via == is_projection(a.as_hermitian()),
            })
        }
        Command::Witness { a, b } => {
            let (a, b) = (read_matrix(&a)?, read_matrix(&b)?);
            let w = distance_one_witness(&a, &b)?;
            json!({
                "distance": json::number(a.distance(&b)?),
                "witness": w.as_ref().map_or(Value::Null, |w| w.to_json()),
            })
        }
        Command::DoubleSphere { b, a } => {
            let (b, a) = (read_matrix(&b)?, read_matrix(&a)?);
            double_sphere_membership(&b, &a)?.to_json(None)
        }
        Command::Refute { a } => {
            let a = read_matrix(&a)?;
            match refutation_witness(&a)? {
                Some(r) => json!({ "c": r.c.as_hermitian().to_json(), "t0": json::number(r.t0) }),
                None => json!({ "c": null, "t0": null }),
            }
        }
        Command::VerifyGrid { dim, k, timing } => {
            let report = verify_bispherical_identity(&GridSpec::new(dim, k)?)?;
            return Ok((report.to_json(timing), report.is_clean()));
        }
        Command::VerifyIsometry {
            dim,
            seed,
            samples,
            twist,
            timing,
        } => {
            if dim == 0 {
                return Err(Error::Precondition("--dim must be at least 1".into()));
            }
            if dim > MAX_ISOMETRY_DIM || samples > MAX_ISOMETRY_SAMPLES {
                return Err(Error::SizeRefused(format!(
                    "isometry check limited to dim <= {MAX_ISOMETRY_DIM} and samples <= {MAX_ISOMETRY_SAMPLES}"
                )));
            }
            let model = IsometryModel::random(dim, twist, seed);
            let mut report = verify_projection_preservation(&model, &sample_set(dim, samples, seed))?;
            report.seed = Some(seed);
            return Ok((report.to_json(timing), report.is_clean()));
        }
        Command::Diag(d) => diag(d)?,
    };
    Ok((doc, true))
}

fn diag(cmd: DiagCommand) -> Result<Value> {
    Ok(match cmd {
        DiagCommand::Norm { a } => diag_norm(&read_diag(&a)?).to_json(),
        DiagCommand::Distance { a, b } => diag_distance(&read_diag(&a)?, &read_diag(&b)?).to_json(),
        DiagCommand::Support { a } => diag_support(&read_diag(&a)?).to_json(),
        DiagCommand::Range { a } => diag_range(&read_diag(&a)?).to_json(),
        DiagCommand::DoubleSphere { b, a } => diag_double_sphere_membership(&read_diag(&b)?, &read_diag(&a)?)?.to_json(None),
        DiagCommand::Probe { index } => diag_compact_probe(index)?.to_json(),
    })
}

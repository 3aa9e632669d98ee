//! The `geninv` command line.
//!
//! Every subcommand prints one JSON report. Exit status is 0 on success, 1
//! for input errors and 2 when a requested inverse or decomposition does not
//! exist; errors are reported as `{"error", "clause", "margin"}` objects.

use std::ffi::OsString;
use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use crate::calculus::{self, CurveProblem, DerivativeKind, MatrixCurve};
use crate::diagnostics::{self, families, BcProblem};
use crate::error::{GenInvError, Result};
use crate::inverse;
use crate::io::{self, RunConfig};
use crate::kernel::{self, Matrix, C64};
use crate::perturb;
use crate::random;
use crate::subspace;

pub const EXIT_SUCCESS: i32 = 0;
pub const EXIT_INPUT_ERROR: i32 = 1;
pub const EXIT_EXISTENCE_FAILURE: i32 = 2;

#[derive(Debug, Parser)]
#[command(
    name = "geninv",
    version,
    about = "Generalized inverses with residual certificates"
)]
pub struct Cli {
    /// Relative singular-value cutoff for numerical rank.
    #[arg(long, global = true)]
    pub tol_rank: Option<f64>,
    /// Residual acceptance threshold, relative to each residual's scale.
    #[arg(long, global = true)]
    pub tol_res: Option<f64>,
    /// Seed for generated data.
    #[arg(long, global = true, env = "GENINV_SEED")]
    pub seed: Option<u64>,
    /// Decreasing finite-difference steps, comma separated.
    #[arg(long, global = true, value_delimiter = ',')]
    pub steps: Option<Vec<f64>>,
    /// Write the JSON report here instead of stdout.
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Moore-Penrose inverse of A.
    Pinv { a: PathBuf },
    /// (B,C)-inverse of A.
    Bcinv { a: PathBuf, b: PathBuf, c: PathBuf },
    /// Outer inverse of A with range R(T) and null space R(S).
    Outer { a: PathBuf, t: PathBuf, s: PathBuf },
    /// Inverse of A along D.
    Along { a: PathBuf, d: PathBuf },
    /// Bott-Duffin (P,Q)-inverse of A for idempotent P, Q.
    Bottduffin { a: PathBuf, p: PathBuf, q: PathBuf },
    /// Gap between the column spaces of M and N.
    Gap { m: PathBuf, n: PathBuf },
    /// (B,C)-inverse of A + E from the closed form around A.
    Perturb {
        a: PathBuf,
        b: PathBuf,
        c: PathBuf,
        e: PathBuf,
        /// Evaluate outside the openness ball instead of failing.
        #[arg(long)]
        flagged: bool,
    },
    /// Compare a derivative formula with central differences.
    ///
    /// With `--operand` the operand curve is `A₀ + t·A₁` (`A₁` from
    /// `--direction`, zero by default) and the generators are fixed files;
    /// otherwise a random smooth problem is drawn from the seed.
    Derivcheck {
        #[arg(long, value_enum)]
        kind: Kind,
        #[arg(long, default_value_t = 0.0)]
        t0: f64,
        #[arg(long, default_value_t = 4)]
        size: usize,
        #[arg(long, default_value_t = 2)]
        rank: usize,
        #[arg(long)]
        complex: bool,
        #[arg(long)]
        operand: Option<PathBuf>,
        #[arg(long)]
        direction: Option<PathBuf>,
        /// B for `bc`, P for `oip`.
        #[arg(long)]
        first: Option<PathBuf>,
        /// C for `bc`, Q for `oip`.
        #[arg(long)]
        second: Option<PathBuf>,
    },
    /// Convergence diagnostics for a generated sequence around a limit.
    ///
    /// Takes A, B, C (or only A with `--mp`).
    Seqcheck {
        #[arg(long, value_enum)]
        family: Family,
        #[arg(long)]
        mp: bool,
        #[arg(long, default_value_t = 100)]
        len: usize,
        /// Rotation angle at n = 1, or perturbation size for `--mp additive`.
        #[arg(long, default_value_t = 0.1)]
        amplitude: f64,
        #[arg(required = true, num_args = 1..=3)]
        inputs: Vec<PathBuf>,
    },
}

#[derive(Debug, Clone, Copy, ValueEnum)]
pub enum Kind {
    Bc,
    Oip,
    Mp,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
pub enum Family {
    Constant,
    Additive,
    Rotating,
    RankDrop,
}

/// Parses `args` (program name first), runs the subcommand and returns the
/// exit status.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            use clap::error::ErrorKind;
            if matches!(e.kind(), ErrorKind::DisplayHelp | ErrorKind::DisplayVersion) {
                print!("{e}");
                return EXIT_SUCCESS;
            }
            let err = GenInvError::InvalidArgument(e.kind().to_string());
            eprint!("{e}");
            println!("{}", io::error_json(&err));
            return EXIT_INPUT_ERROR;
        }
    };
    let out = cli.out.clone();
    let outcome = RunConfig::new(
        cli.tol_rank,
        cli.tol_res,
        cli.steps.clone(),
        cli.seed,
        out.clone(),
    )
    .and_then(|config| {
        let report = execute(&cli.command, &config)?;
        config.emit(&report)
    });
    match outcome {
        Ok(()) => EXIT_SUCCESS,
        Err(err) => {
            eprintln!("geninv: {err}");
            let config = RunConfig {
                out,
                ..RunConfig::default()
            };
            if config.emit(&io::error_json(&err)).is_err() {
                println!("{}", io::error_json(&err));
            }
            exit_code(&err)
        }
    }
}

pub fn exit_code(err: &GenInvError) -> i32 {
    if err.is_existence_failure() {
        EXIT_EXISTENCE_FAILURE
    } else {
        EXIT_INPUT_ERROR
    }
}

fn read(path: &Path) -> Result<Matrix> {
    io::read_matrix(path)
}

/// Runs one subcommand and returns its report.
pub fn execute(command: &Command, config: &RunConfig) -> Result<Value> {
    let tol = &config.tol;
    match command {
        Command::Pinv { a } => {
            let cert = inverse::moore_penrose(&read(a)?, tol)?;
            Ok(io::report("pinv", io::certificate_json(&cert)))
        }
        Command::Bcinv { a, b, c } => {
            let cert = inverse::bc_inverse(&read(a)?, &read(b)?, &read(c)?, tol)?;
            Ok(io::report("bcinv", io::certificate_json(&cert)))
        }
        Command::Outer { a, t, s } => {
            let t = subspace::column_space(&read(t)?, tol)?;
            let s = subspace::column_space(&read(s)?, tol)?;
            let cert = inverse::outer_prescribed(&read(a)?, &t, &s)?;
            Ok(io::report("outer", io::certificate_json(&cert)))
        }
        Command::Along { a, d } => {
            let cert = inverse::inverse_along(&read(a)?, &read(d)?, tol)?;
            Ok(io::report("along", io::certificate_json(&cert)))
        }
        Command::Bottduffin { a, p, q } => {
            let p = subspace::ObliqueProjector::from_matrix(read(p)?, tol)?;
            let q = subspace::ObliqueProjector::from_matrix(read(q)?, tol)?;
            let cert = inverse::bott_duffin(&read(a)?, &p, &q, tol)?;
            Ok(io::report("bottduffin", io::certificate_json(&cert)))
        }
        Command::Gap { m, n } => {
            let m = subspace::column_space(&read(m)?, tol)?;
            let n = subspace::column_space(&read(n)?, tol)?;
            let g = subspace::gap(&m, &n)?;
            let ds = subspace::direct_sum_check(&m, &n);
            Ok(io::report(
                "gap",
                json!({
                    "dim_m": m.dim(),
                    "dim_n": n.dim(),
                    "delta_mn": g.delta_mn,
                    "delta_nm": g.delta_nm,
                    "gap": g.gap,
                    "direct_sum": {"holds": ds.holds, "margin": ds.margin},
                }),
            ))
        }
        Command::Perturb {
            a,
            b,
            c,
            e,
            flagged,
        } => {
            let cert = inverse::bc_inverse(&read(a)?, &read(b)?, &read(c)?, tol)?;
            let e = read(e)?;
            let rep = if *flagged {
                perturb::perturbed_bc_inverse_flagged(&cert, &e)?
            } else {
                perturb::perturbed_bc_inverse(&cert, &e)?
            };
            Ok(io::report(
                "perturb",
                json!({
                    "radius": rep.radius,
                    "perturbation_norm": rep.perturbation_norm,
                    "outside_ball": rep.outside_ball,
                    "formula_inverse": io::matrix_json(&rep.formula_inverse),
                    "factorization_discrepancy": rep.factorization_discrepancy,
                    "direct_inverse": rep.direct_inverse.as_ref().map(io::matrix_json),
                    "discrepancy": rep.discrepancy,
                    "bound": rep.bound_value,
                    "actual_error": rep.actual_error,
                    "scale": rep.scale,
                }),
            ))
        }
        Command::Derivcheck {
            kind,
            t0,
            size,
            rank,
            complex,
            operand,
            direction,
            first,
            second,
        } => {
            let kind = match kind {
                Kind::Bc => DerivativeKind::Bc,
                Kind::Oip => DerivativeKind::Oip,
                Kind::Mp => DerivativeKind::Mp,
            };
            let problem = match operand {
                Some(path) => affine_problem(
                    kind,
                    path,
                    direction.as_deref(),
                    first.as_deref(),
                    second.as_deref(),
                )?,
                None => random::smooth_curve_problem(
                    &mut random::rng(config.seed),
                    kind,
                    *size,
                    *rank,
                    *complex,
                    tol,
                )?,
            };
            let rep = calculus::finite_difference_check(&problem, *t0, tol)?;
            let errors: Vec<Value> = rep
                .fd_errors
                .iter()
                .map(|(h, e)| json!({"step": h, "error": e}))
                .collect();
            Ok(io::report(
                "derivcheck",
                json!({
                    "kind": rep.kind,
                    "t0": rep.t0,
                    "formula_derivative": io::matrix_json(&rep.formula_derivative),
                    "fd_errors": errors,
                    "observed_order": rep.observed_order,
                    "final_error": rep.final_error(),
                    "scale": rep.scale,
                }),
            ))
        }
        Command::Seqcheck {
            family,
            mp,
            len,
            amplitude,
            inputs,
        } => seqcheck(*family, *mp, *len, *amplitude, inputs, config),
    }
}

fn affine_problem(
    kind: DerivativeKind,
    operand: &Path,
    direction: Option<&Path>,
    first: Option<&Path>,
    second: Option<&Path>,
) -> Result<CurveProblem> {
    let a0 = read(operand)?;
    let a1 = match direction {
        Some(p) => read(p)?,
        None => Matrix::zeros(a0.nrows(), a0.ncols()),
    };
    kernel::check_same_shape("derivcheck direction", &a0, &a1)?;
    let a = MatrixCurve::global("A", move |t| &a0 + &a1 * C64::from(t));
    let fixed = |p: Option<&Path>, name: &str| -> Result<MatrixCurve> {
        let p = p.ok_or_else(|| GenInvError::InvalidArgument(format!("--{name} is required")))?;
        Ok(MatrixCurve::constant(name, read(p)?))
    };
    Ok(match kind {
        DerivativeKind::Bc => CurveProblem::Bc {
            a,
            b: fixed(first, "first")?,
            c: fixed(second, "second")?,
            inner: None,
        },
        DerivativeKind::Oip => CurveProblem::Oip {
            a,
            p: fixed(first, "first")?,
            q: fixed(second, "second")?,
        },
        DerivativeKind::Mp => CurveProblem::Mp { a },
    })
}

fn seqcheck(
    family: Family,
    mp: bool,
    len: usize,
    amplitude: f64,
    inputs: &[PathBuf],
    config: &RunConfig,
) -> Result<Value> {
    let tol = &config.tol;
    let mut rng = random::rng(config.seed);
    let expected = if mp { 1 } else { 3 };
    if inputs.len() != expected {
        return Err(GenInvError::InvalidArgument(format!(
            "seqcheck expects {expected} matrix files, got {}",
            inputs.len()
        )));
    }
    let diag = if mp {
        let a = read(&inputs[0])?;
        let seq = match family {
            Family::Constant => families::mp_constant(&a, len),
            Family::Additive => families::mp_additive(&a, len, amplitude, &mut rng, tol)?,
            Family::Rotating => families::mp_rotating(&a, len, amplitude, &mut rng),
            Family::RankDrop => families::mp_rank_drop(&a, len, tol)?,
        };
        diagnostics::mp_continuity_report(&a, &seq, tol)?
    } else {
        let limit = BcProblem::new(read(&inputs[0])?, read(&inputs[1])?, read(&inputs[2])?);
        let seq = match family {
            Family::Constant => families::constant(&limit, len),
            Family::Additive => {
                let cert = inverse::bc_inverse(&limit.a, &limit.b, &limit.c, tol)?;
                let radius = perturb::openness_radius(&cert)?;
                families::additive(&limit, len, 0.5 * radius, &mut rng)
            }
            Family::Rotating => families::rotating(&limit, len, amplitude, &mut rng),
            Family::RankDrop => families::rank_drop(&limit, len, tol)?,
        };
        diagnostics::sequence_report(&limit, &seq, tol)?
    };
    let body = serde_json::to_value(&diag).map_err(|e| GenInvError::Io(e.to_string()))?;
    Ok(io::report(
        "seqcheck",
        json!({
            "family": family.to_possible_value().map(|v| v.get_name().to_string()),
            "mp": mp,
            "alarms": diag.alarms(),
            "all_true": diag.all_true(),
            "all_false": diag.all_false(),
            "bound_violations": diag.bound_violations(),
            "diagnostics": body,
        }),
    ))
}

//! `mst`: batch front-end for model-space operator computations.
//!
//! Exit codes: 0 success, 1 input error, 2 verification failure.

mod commands;
mod input;
mod output;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};

use crate::input::{load_problem, pick, InputError, ProblemFile};
use crate::output::{emit, render, Format};

#[derive(Parser, Debug)]
#[command(
    name = "mst",
    version,
    about = "Truncated Toeplitz operators on model spaces of finite Blaschke products"
)]
struct Cli {
    /// Output format.
    #[arg(long, global = true, value_enum)]
    format: Option<Format>,
    /// Write output here instead of stdout.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    /// Replace every default tolerance.
    #[arg(long, global = true, env = "MST_TOL")]
    tol: Option<f64>,
    /// JSON problem file; flags given on the command line take precedence.
    #[arg(long, global = true)]
    problem: Option<PathBuf>,
    #[command(subcommand)]
    command: Command,
}

/// Spaces (`--space`, `--theta`, ...) take Blaschke JSON such as
/// `{"zeros":[[0.5,0]]}` or shorthand `z^3`, `blaschke(0.5, 0.3-0.2i)`.
/// Symbols take rational JSON `{"num":[...],"den":[...]}` or an expression
/// such as `(1 + 0.5z)/z^2`.
#[derive(Subcommand, Debug)]
enum Command {
    /// Matrix of the truncated Toeplitz operator in Takenaka–Malmquist bases.
    Tto {
        #[arg(long)]
        space: Option<String>,
        /// Codomain space; defaults to the domain.
        #[arg(long)]
        codomain: Option<String>,
        #[arg(long)]
        symbol: Option<String>,
    },
    /// Factor A_φ^{θ,α} = E A_φ̃^{η,γ} F and check the identity.
    Equiv {
        #[arg(long)]
        theta: Option<String>,
        /// Defaults to theta.
        #[arg(long)]
        alpha: Option<String>,
        /// Defaults to z^deg(theta).
        #[arg(long)]
        eta: Option<String>,
        /// Defaults to z^deg(alpha).
        #[arg(long)]
        gamma: Option<String>,
        #[arg(long)]
        symbol: Option<String>,
    },
    /// Kernel of the dual operator with symbol α(z - 1) on the complement of K_θ.
    DualKernel {
        #[arg(long)]
        theta: Option<String>,
        #[arg(long)]
        alpha: Option<String>,
    },
    /// Inverse through the Wiener–Hopf factorization, checked against direct inversion.
    WhInverse {
        /// Dimension, for the space of z^n.
        #[arg(long)]
        n: Option<usize>,
        /// Any space; reduced to z^n by equivalence when it is not a power of z.
        #[arg(long)]
        space: Option<String>,
        #[arg(long)]
        symbol: Option<String>,
    },
    /// Crofoot transform and the isometry condition for k / (1 - h B).
    Crofoot {
        #[arg(long)]
        space: Option<String>,
        /// Shift point, `[re, im]` or `0.3-0.2i`.
        #[arg(long)]
        w: Option<String>,
        /// Analytic h with sup |h| < 1; defaults to conj(w).
        #[arg(long)]
        h: Option<String>,
        /// Nonzero constant k; defaults to sqrt(1 - |w|^2).
        #[arg(long)]
        k: Option<String>,
    },
    /// Check complex selfadjointness of A_φ against the natural conjugation.
    ConjugationCheck {
        #[arg(long)]
        space: Option<String>,
        #[arg(long)]
        symbol: Option<String>,
    },
    /// Invertible E, F with A = E B F for square matrices of equal rank.
    RankEquiv {
        /// `{"rows":..,"cols":..,"entries":[[[re,im],..],..]}` or the bare entries.
        #[arg(long)]
        a: Option<String>,
        #[arg(long)]
        b: Option<String>,
    },
    /// Run a named invariant suite: rational, blaschke, model, operators, dual, wh or all.
    Verify {
        #[arg(long)]
        suite: Option<String>,
    },
}

enum Failure {
    Input(String),
    Verification(Vec<String>),
}

impl From<InputError> for Failure {
    fn from(e: InputError) -> Self {
        Failure::Input(e.0)
    }
}

fn run(cli: Cli) -> Result<(), Failure> {
    let problem = match &cli.problem {
        Some(p) => load_problem(p)?,
        None => ProblemFile::default(),
    };
    let tol = cli.tol.or(problem.options.tol);
    if let Some(t) = tol {
        if !(t >= 0.0 && t.is_finite()) {
            return Err(Failure::Input(format!(
                "tolerance must be a nonnegative number, got {t}"
            )));
        }
    }
    let format = match (cli.format, problem.options.format.as_deref()) {
        (Some(f), _) => f,
        (None, None | Some("json")) => Format::Json,
        (None, Some("csv")) => Format::Csv,
        (None, Some(other)) => {
            return Err(Failure::Input(format!(
                "unknown format '{other}', expected json or csv"
            )))
        }
    };
    let p = problem;
    let outcome = match cli.command {
        Command::Tto {
            space,
            codomain,
            symbol,
        } => commands::tto(
            pick(space, p.space),
            pick(codomain, p.codomain),
            pick(symbol, p.symbol),
        )?,
        Command::Equiv {
            theta,
            alpha,
            eta,
            gamma,
            symbol,
        } => commands::equiv(
            commands::EquivArgs {
                theta: pick(theta, p.theta),
                alpha: pick(alpha, p.alpha),
                eta: pick(eta, p.eta),
                gamma: pick(gamma, p.gamma),
                symbol: pick(symbol, p.symbol),
            },
            tol,
        )?,
        Command::DualKernel { theta, alpha } => {
            commands::dual_kernel_cmd(pick(theta, p.theta), pick(alpha, p.alpha), tol)?
        }
        Command::WhInverse { n, space, symbol } => {
            commands::wh_inverse(n.or(p.n), pick(space, p.space), pick(symbol, p.symbol), tol)?
        }
        Command::Crofoot { space, w, h, k } => commands::crofoot(
            commands::CrofootArgs {
                space: pick(space, p.space),
                w: pick(w, p.w),
                h: pick(h, p.h),
                k: pick(k, p.k),
            },
            tol,
        )?,
        Command::ConjugationCheck { space, symbol } => {
            commands::conjugation_check(pick(space, p.space), pick(symbol, p.symbol), tol)?
        }
        Command::RankEquiv { a, b } => commands::rank_equiv(pick(a, p.a), pick(b, p.b), tol)?,
        Command::Verify { suite } => {
            let suite = suite
                .or(p.suite)
                .ok_or_else(|| Failure::Input("missing --suite".into()))?;
            commands::verify(&suite, tol)?
        }
    };
    let bytes = render(&outcome, format).map_err(Failure::Input)?;
    emit(&bytes, cli.out.as_deref()).map_err(Failure::Input)?;
    let failed: Vec<String> = outcome
        .verdicts
        .iter()
        .filter(|v| !v.passed)
        .map(|v| {
            format!(
                "{}: residual {:e} exceeds tolerance {:e}",
                v.check, v.residual, v.tolerance
            )
        })
        .collect();
    if failed.is_empty() {
        Ok(())
    } else {
        Err(Failure::Verification(failed))
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Input(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(1)
        }
        Err(Failure::Verification(lines)) => {
            for l in lines {
                eprintln!("verification failed: {l}");
            }
            ExitCode::from(2)
        }
    }
}

use std::sync::Arc;

use mst_core::dual::{complement_residual, dual_kernel};
use mst_core::json::{
    blaschke_to_json, complement_to_json, factorization_to_json, matrix_to_json, rational_to_json,
};
use mst_core::linalg::{cond, frobenius, inverse};
use mst_core::model_space::{condition_515n_residual, crofoot_multiplier};
use mst_core::operators::{
    conjugation_matrix, equivalence_transform, multiplication_matrix, rank_equivalence,
    selfadjoint_residual, tto_matrix,
};
use mst_core::suites;
use mst_core::wiener_hopf::{invert_direct, invert_via_equivalence, wh_factorize};
use mst_core::{BlaschkeProduct, ComplexPoly, Error, ModelSpace, RationalFn, C64};
use nalgebra::DMatrix;
use serde_json::json;

use crate::input::{blaschke, complex, matrix, rational, required, Arg, InputError};
use crate::output::{matrix_json, Outcome, Table, Verdict};

type Run = Result<Outcome, InputError>;

fn library(e: Error) -> InputError {
    InputError(e.to_string())
}

fn checks_json(verdicts: &[Verdict]) -> serde_json::Value {
    serde_json::to_value(verdicts).expect("verdicts serialize")
}

pub fn tto(space: Option<Arg>, codomain: Option<Arg>, symbol: Option<Arg>) -> Run {
    let domain = blaschke("space", required("space", space)?)?;
    let codomain = match codomain {
        Some(c) => blaschke("codomain", c)?,
        None => domain.clone(),
    };
    let symbol = rational("symbol", required("symbol", symbol)?)?;
    let k1 = Arc::new(ModelSpace::new(domain));
    let k2 = Arc::new(ModelSpace::new(codomain));
    let m = tto_matrix(&k1, &k2, &symbol);
    let mut table = Table::new(&["row", "col", "re", "im"]);
    table.push_matrix(&[], &m.entries);
    Ok(Outcome {
        json: serde_json::to_value(matrix_to_json(&m)).expect("matrix serializes"),
        table,
        verdicts: Vec::new(),
    })
}

pub struct EquivArgs {
    pub theta: Option<Arg>,
    pub alpha: Option<Arg>,
    pub eta: Option<Arg>,
    pub gamma: Option<Arg>,
    pub symbol: Option<Arg>,
}

pub fn equiv(args: EquivArgs, tol: Option<f64>) -> Run {
    let theta = blaschke("theta", required("theta", args.theta)?)?;
    let alpha = match args.alpha {
        Some(a) => blaschke("alpha", a)?,
        None => theta.clone(),
    };
    let eta = match args.eta {
        Some(e) => blaschke("eta", e)?,
        None => BlaschkeProduct::z_pow(theta.degree()),
    };
    let gamma = match args.gamma {
        Some(g) => blaschke("gamma", g)?,
        None => BlaschkeProduct::z_pow(alpha.degree()),
    };
    let symbol = rational("symbol", required("symbol", args.symbol)?)?;
    let eq = equivalence_transform(&theta, &alpha, &eta, &gamma, &symbol).map_err(library)?;
    let verdicts = vec![Verdict::below(
        "equivalence",
        eq.residual,
        tol.unwrap_or(1e-9),
    )];
    let mut table = Table::new(&["matrix", "row", "col", "re", "im"]);
    for (name, m) in [
        ("lhs", &eq.lhs),
        ("e", &eq.e),
        ("middle", &eq.middle),
        ("f", &eq.f),
    ] {
        table.push_matrix(&[name], &m.entries);
    }
    Ok(Outcome {
        json: json!({
            "lhs": matrix_to_json(&eq.lhs),
            "e": matrix_to_json(&eq.e),
            "middle": matrix_to_json(&eq.middle),
            "f": matrix_to_json(&eq.f),
            "tilde_symbol": rational_to_json(&eq.tilde_symbol),
            "residual": eq.residual,
            "cond_e": eq.cond_e,
            "cond_f": eq.cond_f,
            "checks": checks_json(&verdicts),
        }),
        table,
        verdicts,
    })
}

pub fn dual_kernel_cmd(theta: Option<Arg>, alpha: Option<Arg>, tol: Option<f64>) -> Run {
    let theta = blaschke("theta", required("theta", theta)?)?;
    let alpha = blaschke("alpha", required("alpha", alpha)?)?;
    let ker = dual_kernel(&theta, &alpha).map_err(library)?;
    let space = ModelSpace::new(theta.clone());
    let phi = &alpha.to_rational() * &RationalFn::polynomial(ComplexPoly::from_real(&[-1.0, 1.0]));
    let mut membership: f64 = 0.0;
    let mut table = Table::new(&["element", "part", "field", "power", "re", "im"]);
    for (i, f) in ker.basis.iter().enumerate() {
        let g = f.to_rational();
        membership = membership
            .max(complement_residual(&space, &g))
            .max(space.membership_residual(&(&phi * &g)));
        let idx = i.to_string();
        table.push_rational(&[&idx, "analytic"], &f.analytic);
        table.push_rational(&[&idx, "antianalytic"], &f.antianalytic);
    }
    let verdicts = vec![Verdict::below(
        "membership",
        membership,
        tol.unwrap_or(1e-9),
    )];
    let basis: Vec<_> = ker.basis.iter().map(complement_to_json).collect();
    Ok(Outcome {
        json: json!({
            "dim": ker.dim,
            "k": ker.k,
            "gamma": blaschke_to_json(&ker.gamma),
            "basis": basis,
            "checks": checks_json(&verdicts),
        }),
        table,
        verdicts,
    })
}

fn is_power_of_z(b: &BlaschkeProduct) -> bool {
    b.zeros().iter().all(|z| z.norm() == 0.0)
}

pub fn wh_inverse(
    n: Option<usize>,
    space: Option<Arg>,
    symbol: Option<Arg>,
    tol: Option<f64>,
) -> Run {
    let symbol = rational("symbol", required("symbol", symbol)?)?;
    let space = match (n, space) {
        (Some(n), None) => BlaschkeProduct::z_pow(n),
        (None, Some(s)) => blaschke("space", s)?,
        (Some(_), Some(_)) => {
            return Err(InputError("give either --n or --space, not both".into()))
        }
        (None, None) => return Err(InputError("missing --n or --space".into())),
    };
    let n = space.degree();
    if n == 0 {
        return Err(InputError(
            "the space must have dimension at least 1".into(),
        ));
    }
    let tol = tol.unwrap_or(1e-8);
    let k = Arc::new(ModelSpace::new(space.clone()));
    let direct_matrix = tto_matrix(&k, &k, &symbol).entries;
    // Reciprocal condition number: finite, and 0 for a singular matrix.
    let direct_rcond = 1.0 / cond(&direct_matrix);

    let (formula, factorization) = if is_power_of_z(&space) {
        match wh_factorize(n, &symbol) {
            Ok(f) => (Ok(f.inverse_matrix().map_err(library)?), Some(f)),
            Err(e) => (Err(e), None),
        }
    } else {
        (invert_via_equivalence(&space, &symbol), None)
    };
    let formula = match formula {
        Ok(m) => m,
        Err(
            e @ (Error::NoCanonicalFactorization
            | Error::FactorizationUndetermined { .. }
            | Error::Singular { .. }),
        ) => {
            let singular = if is_power_of_z(&space) {
                invert_direct(n, &symbol).is_err()
            } else {
                direct_rcond < 1e-10
            };
            let verdicts = vec![Verdict {
                check: "invertible".into(),
                residual: 1.0,
                tolerance: 0.0,
                passed: false,
            }];
            return Ok(Outcome {
                json: json!({
                    "n": n,
                    "invertible": false,
                    "reason": e.to_string(),
                    "direct_singular": singular,
                    "direct_rcond": direct_rcond,
                    "checks": checks_json(&verdicts),
                }),
                table: Table::verdicts(&verdicts),
                verdicts,
            });
        }
        Err(e) => return Err(library(e)),
    };
    let direct = inverse(&direct_matrix);
    let residual = match &direct {
        Some(d) => frobenius(&(&formula - d)) / (1.0 + frobenius(d)),
        None => f64::MAX,
    };
    let verdicts = vec![Verdict::below("direct_agreement", residual, tol)];
    let mut table = Table::new(&["row", "col", "re", "im"]);
    table.push_matrix(&[], &formula);
    let mut doc = json!({
        "n": n,
        "invertible": true,
        "inverse": matrix_json(&formula),
        "direct_rcond": direct_rcond,
        "checks": checks_json(&verdicts),
    });
    if let Some(f) = factorization {
        doc["factorization"] = serde_json::to_value(factorization_to_json(&f)).expect("serializes");
    }
    Ok(Outcome {
        json: doc,
        table,
        verdicts,
    })
}

pub struct CrofootArgs {
    pub space: Option<Arg>,
    pub w: Option<Arg>,
    pub h: Option<Arg>,
    pub k: Option<Arg>,
}

/// Crofoot transform by `w`; with `h` and `k`, also the isometry condition
/// for multiplication by `k / (1 - h B)`.
pub fn crofoot(args: CrofootArgs, tol: Option<f64>) -> Run {
    let b = blaschke("space", required("space", args.space)?)?;
    let w = complex("w", required("w", args.w)?)?;
    let space = ModelSpace::new(b.clone());
    let n = space.dim();
    let (j, target) = crofoot_multiplier(&space, w).map_err(library)?;
    let k_b = Arc::new(space);
    let k_t = Arc::new(target);
    let m = multiplication_matrix(&k_b, &k_t, &j).map_err(library)?;
    let gram = m.entries.adjoint() * &m.entries;
    let gram_defect = frobenius(&(gram - DMatrix::<C64>::identity(n, n)));

    let (h, k) = match (args.h, args.k) {
        (None, None) => (
            RationalFn::constant(w.conj()),
            C64::new((1.0 - w.norm_sqr()).sqrt(), 0.0),
        ),
        (Some(h), Some(k)) => (rational("h", h)?, complex("k", k)?),
        _ => return Err(InputError("--h and --k go together".into())),
    };
    let condition = condition_515n_residual(&b, &h, k).map_err(library)?;
    let verdicts = vec![
        Verdict::below("gram", gram_defect, tol.unwrap_or(1e-9)),
        Verdict::below("isometry_condition", condition, tol.unwrap_or(1e-10)),
    ];
    Ok(Outcome {
        json: json!({
            "multiplier": rational_to_json(&j),
            "target": blaschke_to_json(k_t.inner()),
            "matrix": matrix_to_json(&m),
            "gram_defect": gram_defect,
            "condition_residual": condition,
            "checks": checks_json(&verdicts),
        }),
        table: Table::verdicts(&verdicts),
        verdicts,
    })
}

pub fn conjugation_check(space: Option<Arg>, symbol: Option<Arg>, tol: Option<f64>) -> Run {
    let b = blaschke("space", required("space", space)?)?;
    let symbol = rational("symbol", required("symbol", symbol)?)?;
    let k = Arc::new(ModelSpace::new(b));
    let a = tto_matrix(&k, &k, &symbol);
    let c = conjugation_matrix(&k);
    let residual = selfadjoint_residual(&a, &c).map_err(library)?;
    let verdicts = vec![Verdict::below(
        "complex_selfadjoint",
        residual,
        tol.unwrap_or(1e-9),
    )];
    Ok(Outcome {
        json: json!({
            "matrix": matrix_to_json(&a),
            "conjugation": matrix_json(&c.j),
            "residual": residual,
            "checks": checks_json(&verdicts),
        }),
        table: Table::verdicts(&verdicts),
        verdicts,
    })
}

pub fn rank_equiv(a: Option<Arg>, b: Option<Arg>, tol: Option<f64>) -> Run {
    let a = matrix("a", required("a", a)?)?;
    let b = matrix("b", required("b", b)?)?;
    match rank_equivalence(&a, &b) {
        Ok(eq) => {
            let verdicts = vec![Verdict::below(
                "equivalence",
                eq.residual,
                tol.unwrap_or(1e-8),
            )];
            let mut table = Table::new(&["matrix", "row", "col", "re", "im"]);
            table.push_matrix(&["e"], &eq.e);
            table.push_matrix(&["f"], &eq.f);
            Ok(Outcome {
                json: json!({
                    "equivalent": true,
                    "rank": eq.rank,
                    "e": matrix_json(&eq.e),
                    "f": matrix_json(&eq.f),
                    "residual": eq.residual,
                    "cond_e": eq.cond_e,
                    "cond_f": eq.cond_f,
                    "checks": checks_json(&verdicts),
                }),
                table,
                verdicts,
            })
        }
        Err(Error::NotEquivalent { rank_a, rank_b }) => {
            let verdicts = vec![Verdict {
                check: "equal_rank".into(),
                residual: rank_a.abs_diff(rank_b) as f64,
                tolerance: 0.0,
                passed: false,
            }];
            Ok(Outcome {
                json: json!({
                    "equivalent": false,
                    "rank_a": rank_a,
                    "rank_b": rank_b,
                    "checks": checks_json(&verdicts),
                }),
                table: Table::verdicts(&verdicts),
                verdicts,
            })
        }
        Err(e) => Err(library(e)),
    }
}

pub fn verify(suite: &str, tol: Option<f64>) -> Run {
    let reports = suites::run(suite, tol).map_err(library)?;
    let mut table = Table::new(&["suite", "check", "residual", "tolerance", "passed"]);
    let mut verdicts = Vec::new();
    let mut docs = Vec::new();
    for r in &reports {
        let max_residual = r
            .checks
            .iter()
            .filter(|c| !c.fixed)
            .map(|c| c.residual)
            .fold(0.0, f64::max);
        for c in &r.checks {
            table.push(vec![
                r.suite.to_string(),
                c.name.to_string(),
                c.residual.to_string(),
                c.tolerance.to_string(),
                c.passed().to_string(),
            ]);
            verdicts.push(Verdict {
                check: format!("{}/{}", r.suite, c.name),
                residual: c.residual,
                tolerance: c.tolerance,
                passed: c.passed(),
            });
        }
        docs.push(json!({
            "suite": r.suite,
            "passed": r.passed(),
            "max_residual": max_residual,
            "checks": r.checks,
        }));
    }
    Ok(Outcome {
        json: json!({
            "passed": verdicts.iter().all(|v| v.passed),
            "suites": docs,
        }),
        table,
        verdicts,
    })
}

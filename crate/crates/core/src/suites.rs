//! Named invariant suites, one per module, run on seeded random instances.
//!
//! Each check reports the worst residual it saw next to the tolerance it is
//! held to. Checks marked `fixed` count discrete failures (a wrong dimension,
//! a criterion that answered the wrong way) and ignore tolerance overrides.

use std::sync::Arc;

use nalgebra::DMatrix;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::blaschke::BlaschkeProduct;
use crate::dual::{
    complement_residual, dual_apply, dual_equivalence, dual_kernel, hankel_rank, ComplementElement,
};
use crate::error::{Error, Result};
use crate::linalg::{frobenius, inverse, max_abs, null_space};
use crate::model_space::{crofoot_multiplier, gram_of, multiplier_between, ModelSpace};
use crate::operators::{
    brown_halmos_product, conjugation_matrix, equivalence_transform, is_zero_symbol,
    multiplication_matrix, selfadjoint_residual, tto_matrix,
};
use crate::poly::ComplexPoly;
use crate::rational::{circle_points, inner_product, RationalFn};
use crate::sampling::*;
use crate::wiener_hopf::{invert_direct, invert_via_equivalence, wh_factorize};
use crate::C64;

pub const SUITES: [&str; 6] = ["rational", "blaschke", "model", "operators", "dual", "wh"];

#[derive(Clone, Debug, Serialize)]
pub struct Check {
    pub name: &'static str,
    pub residual: f64,
    pub tolerance: f64,
    pub fixed: bool,
}

impl Check {
    fn residual(name: &'static str, residual: f64, tolerance: f64) -> Self {
        Self {
            name,
            residual,
            tolerance,
            fixed: false,
        }
    }

    fn count(name: &'static str, failures: usize) -> Self {
        Self {
            name,
            residual: failures as f64,
            tolerance: 0.5,
            fixed: true,
        }
    }

    pub fn passed(&self) -> bool {
        self.residual <= self.tolerance
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct SuiteReport {
    pub suite: &'static str,
    pub checks: Vec<Check>,
}

impl SuiteReport {
    pub fn passed(&self) -> bool {
        self.checks.iter().all(Check::passed)
    }
}

/// Runs one suite by name, or all of them for `"all"`. A tolerance override
/// replaces every non-fixed tolerance.
pub fn run(name: &str, tol: Option<f64>) -> Result<Vec<SuiteReport>> {
    let names: Vec<&'static str> = if name == "all" {
        SUITES.to_vec()
    } else {
        match SUITES.iter().find(|s| **s == name) {
            Some(s) => vec![*s],
            None => {
                return Err(Error::InvalidSymbol(format!(
                    "unknown suite '{name}', expected one of {} or all",
                    SUITES.join(", ")
                )))
            }
        }
    };
    let mut out = Vec::new();
    for s in names {
        let mut checks = match s {
            "rational" => rational_suite()?,
            "blaschke" => blaschke_suite()?,
            "model" => model_suite()?,
            "operators" => operators_suite()?,
            "dual" => dual_suite()?,
            _ => wh_suite()?,
        };
        if let Some(t) = tol {
            for c in checks.iter_mut().filter(|c| !c.fixed) {
                c.tolerance = t;
            }
        }
        out.push(SuiteReport { suite: s, checks });
    }
    Ok(out)
}

fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Fourier coefficients `-n..=n` by a direct DFT on `m` circle samples.
fn sampled_coefficients(f: &RationalFn, n: usize, m: usize) -> Vec<C64> {
    let values: Vec<C64> = circle_points(m).into_iter().map(|z| f.eval(z)).collect();
    (-(n as i64)..=n as i64)
        .map(|k| {
            let mut acc = C64::new(0.0, 0.0);
            for (j, v) in values.iter().enumerate() {
                let t = -std::f64::consts::TAU * (k * j as i64) as f64 / m as f64;
                acc += v * C64::from_polar(1.0, t);
            }
            acc / m as f64
        })
        .collect()
}

fn rational_suite() -> Result<Vec<Check>> {
    let mut rng = rng(1);
    let (mut recon, mut idem, mut adj, mut parseval, mut invol) =
        (0.0f64, 0.0f64, 0.0f64, 0.0f64, 0.0f64);
    for i in 0..100 {
        let f = random_rational(&mut rng);
        let g = random_rational(&mut rng);
        let split = f.riesz_project()?;
        let scale = 1.0 + f.sup_on_circle(32);
        let sum = &split.analytic + &split.antianalytic;
        recon = recon.max(sum.distance_on_circle(&f, 32) / scale);

        idem = idem.max(
            split
                .analytic
                .analytic_part()
                .coeff_residual(&split.analytic),
        );
        idem = idem.max(
            split
                .antianalytic
                .antianalytic_part()
                .coeff_residual(&split.antianalytic),
        );

        let lhs = inner_product(&split.analytic, &g);
        let rhs = inner_product(&f, &g.analytic_part());
        adj = adj.max((lhs - rhs).norm() / (1.0 + f.norm() * g.norm()));

        invol = invol.max(f.circle_conjugate().circle_conjugate().coeff_residual(&f));

        if i < 20 {
            // poles sit at radius <= 0.8 or >= 1.25, so 0.8^200 bounds the tail
            let (fa, ga) = (
                sampled_coefficients(&f, 200, 1024),
                sampled_coefficients(&g, 200, 1024),
            );
            let series: C64 = fa.iter().zip(&ga).map(|(a, b)| a * b.conj()).sum();
            parseval =
                parseval.max((inner_product(&f, &g) - series).norm() / (1.0 + f.norm() * g.norm()));
        }
    }
    Ok(vec![
        Check::residual("riesz_reconstruction", recon, 1e-10),
        Check::residual("riesz_idempotence", idem, 1e-12),
        Check::residual("riesz_selfadjoint", adj, 1e-10),
        Check::residual("parseval", parseval, 1e-10),
        Check::residual("conjugation_involution", invol, 1e-12),
    ])
}

fn blaschke_suite() -> Result<Vec<Check>> {
    let mut rng = rng(2);
    let samples = circle_points(32);
    let one = C64::new(1.0, 0.0);
    let (mut shift, mut fact, mut gen_mod, mut gen_prod) = (0.0f64, 0.0f64, 0.0f64, 0.0f64);
    let mut gcd_failures = 0;
    for _ in 0..30 {
        let b = random_blaschke(&mut rng, 4);
        let a = random_in_annulus(&mut rng, 0.0, 0.8);
        let shifted = b.frostman_shift(a)?;
        let direct = |z: C64| {
            let v = b.eval(z);
            (v - a) / (one - a.conj() * v)
        };
        let u = direct(samples[3]) / shifted.eval(samples[3]);
        for &z in &samples {
            shift = shift.max((direct(z) - u * shifted.eval(z)).norm());
        }

        let (am, n, ap) = b.factorize();
        let rebuilt = &(&am * &RationalFn::z_pow(n as i32)) * &ap;
        fact = fact.max(rebuilt.distance_on_circle(&b.to_rational(), 32));

        let h = random_analytic(&mut rng);
        let h = h.scale(C64::new(0.7 / (1e-3 + h.sup_on_circle(256)), 0.0));
        let (theta_h, am, ap) = b.generalized_frostman(&h)?;
        for &z in &samples {
            gen_mod = gen_mod.max((theta_h.eval(z).norm() - 1.0).abs());
        }
        let prod = &(&am * &b.to_rational()) * &ap;
        gen_prod = gen_prod.max(prod.distance_on_circle(&theta_h, 32));

        // two products sharing a random common factor
        let common = random_blaschke(&mut rng, 2);
        let mut z1 = common.zeros().to_vec();
        z1.extend(random_blaschke(&mut rng, 2).zeros());
        let mut z2 = common.zeros().to_vec();
        z2.extend(random_blaschke(&mut rng, 2).zeros());
        let (b1, b2) = (
            BlaschkeProduct::from_zeros(z1)?,
            BlaschkeProduct::from_zeros(z2)?,
        );
        let g = b1.gcd(&b2);
        for bi in [&b1, &b2] {
            match bi.quotient(&g) {
                Ok(q) if q.degree() + g.degree() == bi.degree() => {
                    let r = samples
                        .iter()
                        .map(|&z| (bi.eval(z) - g.eval(z) * q.eval(z)).norm())
                        .fold(0.0, f64::max);
                    if r > 1e-10 {
                        gcd_failures += 1;
                    }
                }
                _ => gcd_failures += 1,
            }
        }
        if g.degree() < common.degree() {
            gcd_failures += 1;
        }
    }
    Ok(vec![
        Check::residual("frostman_shift", shift, 1e-9),
        Check::residual("factorization", fact, 1e-10),
        Check::residual("generalized_frostman_unimodular", gen_mod, 1e-9),
        Check::residual("generalized_frostman_product", gen_prod, 1e-9),
        Check::count("gcd_divides", gcd_failures),
    ])
}

fn model_suite() -> Result<Vec<Check>> {
    let mut rng = rng(3);
    let (mut proj, mut proj_conj, mut annihilator, mut crofoot, mut reproducing) =
        (0.0f64, 0.0f64, 0.0f64, 0.0f64, 0.0f64);
    let mut pole_failures = 0;
    for _ in 0..10 {
        let kb = random_blaschke(&mut rng, 4);
        let hb = random_blaschke_of_degree(&mut rng, kb.degree());
        let k = ModelSpace::new(kb);
        let h = ModelSpace::new(hb.clone());
        let a = multiplier_between(&k, &h)?;
        let a_inv = a.inverse()?;
        let a_bar = a.circle_conjugate();
        let a_bar_inv = a_bar.inverse()?;
        for _ in 0..5 {
            let f = random_rational(&mut rng);
            let ph = h.project(&f);
            let scale = 1.0 + ph.sup_on_circle(32);
            let via_k = &a * &k.project(&(&a_inv * &ph));
            proj = proj.max(via_k.distance_on_circle(&ph, 32) / scale);
            let via_conj = h.project(&(&a_bar_inv * &k.project(&(&a_bar * &f))));
            proj_conj = proj_conj.max(via_conj.distance_on_circle(&ph, 32) / scale);

            // g in K_H^⊥ as θ_H p + q with q antianalytic
            let p = RationalFn::polynomial(random_poly(&mut rng, 2));
            let q = random_rational(&mut rng).antianalytic_part();
            let g = &(&hb.to_rational() * &p) + &q;
            annihilator = annihilator.max(k.project(&(&a_bar * &g)).norm() / (1.0 + g.norm()));
        }
        for r in a
            .num()
            .roots_flat()
            .into_iter()
            .chain(a.poles().iter().copied())
        {
            if r.norm() <= 1.0 {
                pole_failures += 1;
            }
        }

        let b5 = random_blaschke(&mut rng, 5);
        let s = ModelSpace::new(b5);
        let w = random_in_annulus(&mut rng, 0.0, 0.8);
        let (j, _) = crofoot_multiplier(&s, w)?;
        let images: Vec<RationalFn> = s.basis().iter().map(|e| &j * e).collect();
        let gram = gram_of(&images);
        crofoot = crofoot.max(frobenius(&(gram - DMatrix::identity(s.dim(), s.dim()))));

        for _ in 0..10 {
            let lambda = random_in_annulus(&mut rng, 0.0, 0.9);
            let kernels = k.reproducing_kernels(lambda)?;
            for e in k.basis() {
                reproducing =
                    reproducing.max((inner_product(e, &kernels.k) - e.eval(lambda)).norm());
            }
        }
    }
    Ok(vec![
        Check::residual("projection_identity", proj, 1e-9),
        Check::residual("projection_identity_conjugate", proj_conj, 1e-9),
        Check::residual("annihilator_duality", annihilator, 1e-9),
        Check::residual("crofoot_isometry", crofoot, 1e-9),
        Check::residual("reproducing_property", reproducing, 1e-9),
        Check::count("multiplier_pole_free", pole_failures),
    ])
}

/// Orthonormal basis of the column span of `vs`.
fn orthonormal(vs: &DMatrix<C64>) -> DMatrix<C64> {
    if vs.ncols() == 0 {
        return vs.clone();
    }
    let svd = vs.clone().svd(true, false);
    let u = svd.u.expect("requested");
    u.columns(0, vs.ncols()).into_owned()
}

/// Sine of the largest principal angle between two subspaces of equal dimension.
pub fn subspace_gap(a: &DMatrix<C64>, b: &DMatrix<C64>) -> f64 {
    if a.ncols() != b.ncols() {
        return f64::INFINITY;
    }
    if a.ncols() == 0 {
        return 0.0;
    }
    let (qa, qb) = (orthonormal(a), orthonormal(b));
    let rest = &qa - &qb * (qb.adjoint() * &qa);
    rest.singular_values().max()
}

fn columns(vs: &[nalgebra::DVector<C64>], rows: usize) -> DMatrix<C64> {
    DMatrix::from_fn(rows, vs.len(), |i, j| vs[j][i])
}

fn operators_suite() -> Result<Vec<Check>> {
    let mut rng = rng(4);
    let (mut equiv, mut transport, mut inv_a, mut inv_b, mut selfadj, mut bh) =
        (0.0f64, 0.0f64, 0.0f64, 0.0f64, 0.0f64, 0.0f64);
    let mut unitary_failures = 0;
    for _ in 0..25 {
        let theta = random_blaschke(&mut rng, 4);
        let alpha = random_blaschke(&mut rng, 4);
        let eta = random_blaschke_of_degree(&mut rng, theta.degree());
        let gamma = random_blaschke_of_degree(&mut rng, alpha.degree());
        let phi = random_rational(&mut rng);
        let eq = equivalence_transform(&theta, &alpha, &eta, &gamma, &phi)?;
        equiv = equiv.max(eq.residual);
    }
    for _ in 0..10 {
        // φ = α / z on K_α kills every f with f(0) = 0
        let deg = rng.gen_range(2..=4);
        let alpha = random_blaschke_of_degree(&mut rng, deg);
        let eta = random_blaschke_of_degree(&mut rng, alpha.degree());
        let gamma = random_blaschke_of_degree(&mut rng, alpha.degree());
        let phi = &alpha.to_rational() * &RationalFn::z_pow(-1);
        let eq = equivalence_transform(&alpha, &alpha, &eta, &gamma, &phi)?;
        let (ker_lhs, _) = null_space(&eq.lhs.entries);
        let (ker_mid, _) = null_space(&eq.middle.entries);
        let n = alpha.degree();
        let moved = &eq.f.entries * columns(&ker_lhs, n);
        transport = transport.max(subspace_gap(&moved, &columns(&ker_mid, n)));

        let k = Arc::new(ModelSpace::new(alpha.clone()));
        let h = Arc::new(ModelSpace::new(eta.clone()));
        let a = multiplier_between(&k, &h)?;
        let m_a = multiplication_matrix(&k, &h, &a)?;
        let m_inv = multiplication_matrix(&h, &k, &a.inverse()?)?;
        inv_a = inv_a.max(frobenius(
            &(&m_inv.entries * &m_a.entries - DMatrix::identity(n, n)),
        ));
        let t = tto_matrix(&k, &h, &a.circle_conjugate().inverse()?);
        let want = inverse(&m_a.entries.adjoint()).ok_or(Error::Singular {
            cond: f64::INFINITY,
        })?;
        inv_b = inv_b.max(frobenius(&(&t.entries - want)) / (1.0 + frobenius(&t.entries)));

        // Crofoot multipliers are unitary; a rescaled one is not.
        let w = random_in_annulus(&mut rng, 0.0, 0.8);
        let (j, target) = crofoot_multiplier(&k, w)?;
        let target = Arc::new(target);
        let cases = [
            (j.clone(), &target, true),
            (j.scale(C64::new(1.5, 0.0)), &target, false),
            (a.clone(), &h, false),
        ];
        for (mult, range, unitary) in cases {
            let m = multiplication_matrix(&k, range, &mult)?;
            let gram_ok =
                frobenius(&(m.entries.adjoint() * &m.entries - DMatrix::identity(n, n))) < 1e-9;
            let defect = &RationalFn::one() - &(&mult * &mult.circle_conjugate());
            let symbol_ok = is_zero_symbol(&k, &k, &defect);
            if gram_ok != symbol_ok || gram_ok != unitary {
                unitary_failures += 1;
            }
        }

        let b = random_blaschke(&mut rng, 4);
        let kb = Arc::new(ModelSpace::new(b));
        let a_phi = tto_matrix(&kb, &kb, &random_rational(&mut rng));
        selfadj = selfadj.max(selfadjoint_residual(&a_phi, &conjugation_matrix(&kb))?);

        // φ K₁ ⊂ H through a multiplier, and through a polynomial into K_{z^m B}
        let k1 = ModelSpace::new(random_blaschke(&mut rng, 3));
        let mid = ModelSpace::new(random_blaschke_of_degree(&mut rng, k1.dim()));
        let k2 = ModelSpace::new(random_blaschke(&mut rng, 3));
        let phi = multiplier_between(&k1, &mid)?;
        let psi = random_rational(&mut rng);
        bh = bh.max(brown_halmos_product(&k1, &mid, &k2, &psi, &phi)?);
        let m = rng.gen_range(1..=2);
        let mut zeros = k1.inner().zeros().to_vec();
        zeros.extend(std::iter::repeat_n(C64::new(0.0, 0.0), m));
        let mid = ModelSpace::new(BlaschkeProduct::from_zeros(zeros)?);
        let phi = RationalFn::polynomial(random_poly(&mut rng, m));
        bh = bh.max(brown_halmos_product(&k1, &mid, &k2, &psi, &phi)?);
    }
    Ok(vec![
        Check::residual("equivalence_identity", equiv, 1e-9),
        Check::residual("kernel_transport", transport, 1e-7),
        Check::residual("inverse_transport_multiplication", inv_a, 1e-9),
        Check::residual("inverse_transport_adjoint", inv_b, 1e-9),
        Check::count("unitary_criterion", unitary_failures),
        Check::residual("complex_selfadjoint", selfadj, 1e-9),
        Check::residual("brown_halmos", bh, 1e-9),
    ])
}

/// `z^n` as a complement element, for `n < 0`, or `θ z^n` for `n >= 0`.
fn probe(theta: &BlaschkeProduct, n: i32) -> ComplementElement {
    let zero = RationalFn::zero();
    if n < 0 {
        ComplementElement {
            analytic: zero,
            antianalytic: RationalFn::z_pow(n),
            theta: theta.clone(),
        }
    } else {
        ComplementElement {
            analytic: &theta.to_rational() * &RationalFn::z_pow(n),
            antianalytic: zero,
            theta: theta.clone(),
        }
    }
}

/// Symbols `α` used for the kernel dimension sweep.
pub fn kernel_alphas() -> Vec<BlaschkeProduct> {
    let c = |re: f64| C64::new(re, 0.0);
    vec![
        BlaschkeProduct::one(),
        BlaschkeProduct::z_pow(1),
        BlaschkeProduct::z_pow(2),
        BlaschkeProduct::from_zeros(vec![c(0.5)]).expect("inside"),
        BlaschkeProduct::from_zeros(vec![c(0.5), c(1.0 / 3.0)]).expect("inside"),
    ]
}

/// `max(0, n - 1 - k)` with `k = deg(θ / gcd(θ, zα))`, counted from zeros at the origin.
pub fn expected_kernel_dim(n: usize, alpha: &BlaschkeProduct) -> usize {
    let origin = 1 + alpha.zeros().iter().filter(|z| z.norm() == 0.0).count();
    let k = n - n.min(origin);
    n.saturating_sub(1 + k)
}

fn dual_suite() -> Result<Vec<Check>> {
    let mut rng = rng(5);
    let mut uniqueness: f64 = 0.0;
    let mut zero_symbol: f64 = 0.0;
    let mut equivalence: f64 = 0.0;
    for _ in 0..10 {
        let theta = random_blaschke(&mut rng, 3);
        let alpha = random_blaschke(&mut rng, 3);
        let phi = random_rational(&mut rng);
        let size = phi.sup_on_circle(64);
        if size <= 1e-6 {
            continue;
        }
        let mut best: f64 = 0.0;
        for n in [0, 1, -1, -2] {
            let image = dual_apply(&theta, &alpha, &phi, &probe(&theta, n))?;
            best = best.max(image.to_rational().norm());
            let zero = dual_apply(&theta, &alpha, &RationalFn::zero(), &probe(&theta, n))?;
            zero_symbol = zero_symbol.max(zero.to_rational().norm());
        }
        // ratio below 1 means some probe saw a nonzero image
        uniqueness = uniqueness.max(1e-8 * size / best);

        let eta = random_blaschke_of_degree(&mut rng, theta.degree());
        let gamma = random_blaschke_of_degree(&mut rng, alpha.degree());
        equivalence = equivalence.max(dual_equivalence(&theta, &alpha, &eta, &gamma, &phi)?);
    }

    let mut dim_failures = 0;
    let mut membership: f64 = 0.0;
    for n in 1..=5 {
        let theta = BlaschkeProduct::z_pow(n);
        let space = ModelSpace::new(theta.clone());
        for alpha in kernel_alphas() {
            let ker = dual_kernel(&theta, &alpha)?;
            if ker.dim != expected_kernel_dim(n, &alpha) {
                dim_failures += 1;
            }
            let phi = &alpha.to_rational()
                * &RationalFn::polynomial(ComplexPoly::from_real(&[-1.0, 1.0]));
            for f in &ker.basis {
                let g = f.to_rational();
                membership = membership.max(complement_residual(&space, &g));
                membership = membership.max(space.membership_residual(&(&phi * &g)));
            }
        }
    }

    let mut hankel_failures = 0;
    for _ in 0..10 {
        let phi = random_rational(&mut rng);
        let inside = phi.poles().iter().filter(|p| p.norm() < 1.0).count();
        let ranks: Vec<usize> = (1..=inside + 3).map(|m| hankel_rank(&phi, m)).collect();
        if ranks.windows(2).any(|w| w[1] < w[0]) || ranks[inside..].iter().any(|&r| r != inside) {
            hankel_failures += 1;
        }
    }

    Ok(vec![
        Check {
            name: "symbol_uniqueness",
            residual: uniqueness,
            tolerance: 1.0,
            fixed: true,
        },
        Check::residual("zero_symbol_vanishes", zero_symbol, 1e-12),
        Check::count("kernel_dimension", dim_failures),
        Check::residual("kernel_membership", membership, 1e-9),
        Check::count("hankel_rank_stabilizes", hankel_failures),
        Check::residual("dual_equivalence", equivalence, 1e-9),
    ])
}

fn wh_suite() -> Result<Vec<Check>> {
    let mut rng = rng(6);
    let (mut consistency, mut oracle, mut chaining) = (0.0f64, 0.0f64, 0.0f64);
    let mut dichotomy_failures = 0;
    let mut symbols: Vec<(usize, RationalFn)> = Vec::new();
    for n in 1..=4 {
        for _ in 0..20 {
            let w = n as i32;
            symbols.push((n, random_laurent(&mut rng, -w + 1, w - 1)));
        }
        symbols.push((n, RationalFn::zero()));
        symbols.push((n, RationalFn::z()));
        symbols.push((n, RationalFn::z_pow(-(n as i32))));
    }
    for (n, phi) in &symbols {
        let direct = invert_direct(*n, phi);
        let fact = wh_factorize(*n, phi);
        if direct.is_ok() != fact.is_ok() {
            dichotomy_failures += 1;
        }
        if let (Ok(d), Ok(f)) = (direct, fact) {
            consistency = consistency.max(f.residuals.consistency);
            let m = f.inverse_matrix()?;
            if crate::linalg::cond(&d.entries) < 1e6 {
                oracle = oracle.max(frobenius(&(m - &d.entries)) / (1.0 + frobenius(&d.entries)));
            }
        }
    }
    for _ in 0..8 {
        let alpha = random_blaschke(&mut rng, 3);
        let k = Arc::new(ModelSpace::new(alpha.clone()));
        let phi = &RationalFn::constant(C64::new(2.0, 0.0))
            + &random_laurent(&mut rng, -1, 1).scale(C64::new(0.3, 0.0));
        let a = tto_matrix(&k, &k, &phi);
        let Some(direct) = inverse(&a.entries) else {
            continue;
        };
        let via = invert_via_equivalence(&alpha, &phi)?;
        chaining = chaining.max(max_abs(&(via - &direct)) / (1.0 + max_abs(&direct)));
    }
    Ok(vec![
        Check::residual("factorization_consistency", consistency, 1e-9),
        Check::residual("oracle_agreement", oracle, 1e-8),
        Check::count("dichotomy", dichotomy_failures),
        Check::residual("equivalence_chaining", chaining, 1e-8),
    ])
}

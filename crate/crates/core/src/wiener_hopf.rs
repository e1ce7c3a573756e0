//! Canonical Wiener–Hopf factorization of `G = [[conj(z)^n, 0], [φ, z^n]]`
//! for Laurent-polynomial `φ`, and the inverse of `A_φ^{z^n}` it yields.
//!
//! The unknown `X = G₊^-1` has polynomial entries. Each column of `G X = G₋`
//! must have no positive frequencies and take the value of the identity at
//! infinity, which is a linear system in the coefficients of `X`. The degree
//! bound on the second row of `X` is raised until the system is consistent
//! and `det X = 1`.

use std::sync::Arc;

use nalgebra::{DMatrix, DVector};

use crate::blaschke::BlaschkeProduct;
use crate::error::{Error, Result};
use crate::linalg::{cond, inverse, least_squares};
use crate::model_space::ModelSpace;
use crate::operators::{equivalence_transform, tto_matrix, OperatorMatrix};
use crate::poly::ComplexPoly;
use crate::rational::{circle_points, RationalFn};
use crate::C64;

/// Relative residual below which the coefficient system counts as solved.
pub const SOLVE_TOL: f64 = 1e-10;

/// Condition number above which the direct inverse is refused.
pub const DIRECT_COND_MAX: f64 = 1e10;

/// A Laurent polynomial `sum_{k=low}^{low+len-1} c_k z^k`.
#[derive(Clone, Debug, PartialEq)]
pub struct Laurent {
    pub low: i32,
    pub coeffs: Vec<C64>,
}

impl Laurent {
    /// Reads a rational function whose only poles sit at the origin.
    pub fn from_rational(f: &RationalFn) -> Result<Self> {
        if f.poles().iter().any(|p| *p != C64::new(0.0, 0.0)) {
            return Err(Error::InvalidSymbol(
                "symbol must be a Laurent polynomial (poles only at 0)".into(),
            ));
        }
        let coeffs = f.num().coeffs().to_vec();
        let skip = coeffs
            .iter()
            .take_while(|c| **c == C64::new(0.0, 0.0))
            .count();
        Ok(Self {
            low: skip as i32 - f.poles().len() as i32,
            coeffs: coeffs[skip..].to_vec(),
        })
    }

    pub fn coeff(&self, k: i32) -> C64 {
        let i = k - self.low;
        if i < 0 {
            return C64::new(0.0, 0.0);
        }
        self.coeffs.get(i as usize).copied().unwrap_or_default()
    }

    pub fn high(&self) -> i32 {
        self.low + self.coeffs.len() as i32 - 1
    }

    /// `high - low`, or 0 for the zero polynomial.
    pub fn width(&self) -> usize {
        self.coeffs.len().saturating_sub(1)
    }

    pub fn to_rational(&self) -> RationalFn {
        RationalFn::laurent(self.low, &self.coeffs)
    }
}

/// `sum_{|k| < n} f^(k) z^k`, which determines `A_f^{z^n}`.
pub fn laurent_truncation(f: &RationalFn, n: usize) -> RationalFn {
    let n = n as i32;
    let coeffs: Vec<C64> = (1 - n..n).map(|k| f.fourier_coefficient(k)).collect();
    RationalFn::laurent(1 - n, &coeffs)
}

/// Residuals recorded while factorizing.
#[derive(Clone, Debug)]
pub struct FactorizationResiduals {
    /// Least-squares residual of the coefficient system.
    pub system: f64,
    /// `max |det X - 1|` over the coefficients.
    pub determinant: f64,
    /// `max |G₋ G₊ - G|` on 32 circle samples.
    pub consistency: f64,
}

#[derive(Clone, Debug)]
pub struct MatrixFactorization {
    /// `G₊^-1 = [g_ij^+]`, polynomial entries.
    pub g_plus_inv: [[ComplexPoly; 2]; 2],
    /// `G₋^-1 = [g_ij^-]`, entries in `conj(H^inf)` with value `I` at infinity.
    pub g_minus_inv: [[RationalFn; 2]; 2],
    /// `G₋ = G G₊^-1`.
    pub g_minus: [[RationalFn; 2]; 2],
    pub n: usize,
    pub phi: RationalFn,
    /// Degree bound on the second row of `G₊^-1` at which the system was solved.
    pub degree_bound: usize,
    pub residuals: FactorizationResiduals,
}

/// Solves one column of `G X = G₋`: `x_top` has degree `< top_len`,
/// `x_bot` degree `<= bound`, and `φ x_top + z^n x_bot` has no positive
/// frequencies and constant term `target`. `top_fixed` pins the `z^n`
/// coefficient of `x_top`.
fn solve_column(
    phi: &Laurent,
    n: usize,
    bound: usize,
    top_fixed: C64,
    target: C64,
) -> Option<(ComplexPoly, ComplexPoly, f64)> {
    let top_len = n + 1;
    let bot_len = bound + 1;
    let max_freq = (phi.high().max(0) as usize + n).max(n + bound);
    let rows = 1 + max_freq + 1;
    let cols = top_len + bot_len;
    let mut a = DMatrix::<C64>::zeros(rows, cols);
    let mut b = DVector::<C64>::zeros(rows);
    a[(0, n)] = C64::new(1.0, 0.0);
    b[0] = top_fixed;
    for f in 0..=max_freq {
        let row = f + 1;
        for k in 0..top_len {
            a[(row, k)] = phi.coeff(f as i32 - k as i32);
        }
        if f >= n && f - n < bot_len {
            a[(row, top_len + f - n)] = C64::new(1.0, 0.0);
        }
    }
    b[1] = target;
    let (x, resid) = least_squares(&a, &b);
    let scale = 1.0 + a.iter().map(|v| v.norm()).fold(0.0, f64::max) * x.norm();
    if resid > SOLVE_TOL * scale {
        return None;
    }
    let top = ComplexPoly::new(x.rows(0, top_len).iter().copied().collect());
    let bot = ComplexPoly::new(x.rows(top_len, bot_len).iter().copied().collect());
    Some((top, bot, resid / scale))
}

/// Canonical factorization `G = G₋ G₊` normalized by `G₋(∞) = I`.
pub fn wh_factorize(n: usize, phi: &RationalFn) -> Result<MatrixFactorization> {
    if n == 0 {
        return Err(Error::InvalidSymbol("n must be at least 1".into()));
    }
    let lp = Laurent::from_rational(phi)?;
    let cap = n + 2 * lp.width() + 4;
    let one = C64::new(1.0, 0.0);
    let zero = C64::new(0.0, 0.0);
    for bound in n..=cap {
        let Some((x11, x21, r1)) = solve_column(&lp, n, bound, one, zero) else {
            continue;
        };
        let Some((x12, x22, r2)) = solve_column(&lp, n, bound, zero, one) else {
            continue;
        };
        let det = &(&x11 * &x22) - &(&x12 * &x21);
        let det_dev = (&det - &ComplexPoly::one()).max_abs();
        if det_dev
            > 1e-8
                * (1.0
                    + x11
                        .max_abs()
                        .max(x22.max_abs())
                        .max(x12.max_abs())
                        .max(x21.max_abs()))
        {
            continue;
        }
        return Ok(assemble(
            n,
            phi,
            &lp,
            [[x11, x12], [x21, x22]],
            bound,
            r1.max(r2),
            det_dev,
        ));
    }
    match invert_direct(n, phi) {
        Err(Error::Singular { .. }) => Err(Error::NoCanonicalFactorization),
        _ => Err(Error::FactorizationUndetermined { cap }),
    }
}

fn assemble(
    n: usize,
    phi: &RationalFn,
    lp: &Laurent,
    x: [[ComplexPoly; 2]; 2],
    bound: usize,
    system: f64,
    determinant: f64,
) -> MatrixFactorization {
    let g = symbol_matrix(n, &lp.to_rational());
    let xr: [[RationalFn; 2]; 2] = [
        [x[0][0].clone().into(), x[0][1].clone().into()],
        [x[1][0].clone().into(), x[1][1].clone().into()],
    ];
    let g_minus = mat_mul(&g, &xr);
    // det G₋ = det X = 1, so the inverse is the adjugate.
    let g_minus_inv = [
        [g_minus[1][1].clone(), -&g_minus[0][1]],
        [-&g_minus[1][0], g_minus[0][0].clone()],
    ];
    let g_plus = [
        [xr[1][1].clone(), -&xr[0][1]],
        [-&xr[1][0], xr[0][0].clone()],
    ];
    let product = mat_mul(&g_minus, &g_plus);
    let mut consistency: f64 = 0.0;
    for z in circle_points(32) {
        for i in 0..2 {
            for j in 0..2 {
                consistency = consistency.max((product[i][j].eval(z) - g[i][j].eval(z)).norm());
            }
        }
    }
    MatrixFactorization {
        g_plus_inv: x,
        g_minus_inv,
        g_minus,
        n,
        phi: phi.clone(),
        degree_bound: bound,
        residuals: FactorizationResiduals {
            system,
            determinant,
            consistency,
        },
    }
}

/// `[[conj(z)^n, 0], [φ, z^n]]`
pub fn symbol_matrix(n: usize, phi: &RationalFn) -> [[RationalFn; 2]; 2] {
    [
        [RationalFn::z_pow(-(n as i32)), RationalFn::zero()],
        [phi.clone(), RationalFn::z_pow(n as i32)],
    ]
}

fn mat_mul(a: &[[RationalFn; 2]; 2], b: &[[RationalFn; 2]; 2]) -> [[RationalFn; 2]; 2] {
    let entry = |i: usize, j: usize| &(&a[i][0] * &b[0][j]) + &(&a[i][1] * &b[1][j]);
    [[entry(0, 0), entry(0, 1)], [entry(1, 0), entry(1, 1)]]
}

impl MatrixFactorization {
    /// `(A_φ^{z^n})^-1 f = P_{z^n}(g₁₁⁺ P₊(g₁₂⁻ f) + g₁₂⁺ P₊(g₂₂⁻ f))`.
    pub fn apply_inverse(&self, f: &RationalFn) -> Result<RationalFn> {
        let space = ModelSpace::z_pow(self.n);
        if !space.contains(f) {
            return Err(Error::InvalidElement(format!(
                "f must lie in the model space of z^{}",
                self.n
            )));
        }
        let g11p = RationalFn::polynomial(self.g_plus_inv[0][0].clone());
        let g12p = RationalFn::polynomial(self.g_plus_inv[0][1].clone());
        let first = &g11p * &(&self.g_minus_inv[0][1] * f).analytic_part();
        let second = &g12p * &(&self.g_minus_inv[1][1] * f).analytic_part();
        Ok(space.project(&(&first + &second)))
    }

    /// Inverse matrix in the monomial basis, built column by column.
    pub fn inverse_matrix(&self) -> Result<DMatrix<C64>> {
        let space = ModelSpace::z_pow(self.n);
        let mut m = DMatrix::<C64>::zeros(self.n, self.n);
        for (j, e) in space.basis().iter().enumerate() {
            let g = self.apply_inverse(e)?;
            for (i, c) in space.coordinates(&g).into_iter().enumerate() {
                m[(i, j)] = c;
            }
        }
        Ok(m)
    }
}

/// `(A_φ^{z^n})^-1 f` via the factorization.
pub fn tto_inverse_via_wh(n: usize, phi: &RationalFn, f: &RationalFn) -> Result<RationalFn> {
    wh_factorize(n, phi)?.apply_inverse(f)
}

/// LU inverse of `A_φ^{z^n}`, refused when the condition number exceeds `1e10`.
pub fn invert_direct(n: usize, phi: &RationalFn) -> Result<OperatorMatrix> {
    let space = Arc::new(ModelSpace::z_pow(n));
    let a = tto_matrix(&space, &space, phi);
    let k = cond(&a.entries);
    if !(k <= DIRECT_COND_MAX) {
        return Err(Error::Singular { cond: k });
    }
    let inv = inverse(&a.entries).ok_or(Error::Singular { cond: k })?;
    Ok(OperatorMatrix {
        entries: inv,
        domain: space.clone(),
        codomain: space,
    })
}

/// `(A_φ^α)^-1 = F^-1 (A_φ̃^{z^n})^-1 E^-1` for a degree-`n` Blaschke `α`, with
/// the middle inverse taken from the Wiener–Hopf formula applied to the
/// Laurent truncation of `φ̃`.
pub fn invert_via_equivalence(alpha: &BlaschkeProduct, phi: &RationalFn) -> Result<DMatrix<C64>> {
    let n = alpha.degree();
    let zn = BlaschkeProduct::z_pow(n);
    let eq = equivalence_transform(alpha, alpha, &zn, &zn, phi)?;
    let tilde = laurent_truncation(&eq.tilde_symbol, n);
    let middle_inv = wh_factorize(n, &tilde)?.inverse_matrix()?;
    let e_inv = inverse(&eq.e.entries).ok_or(Error::Singular { cond: eq.cond_e })?;
    let f_inv = inverse(&eq.f.entries).ok_or(Error::Singular { cond: eq.cond_f })?;
    Ok(f_inv * middle_inv * e_inv)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::frobenius;

    fn c(re: f64, im: f64) -> C64 {
        C64::new(re, im)
    }

    fn poly(cs: &[f64]) -> RationalFn {
        RationalFn::polynomial(ComplexPoly::from_real(cs))
    }

    #[test]
    fn laurent_reading() {
        let f = RationalFn::laurent(-2, &[c(1.0, 0.0), c(0.0, 0.0), c(3.0, 0.0)]);
        let l = Laurent::from_rational(&f).unwrap();
        assert_eq!((l.low, l.high(), l.width()), (-2, 0, 2));
        assert_eq!(l.coeff(0), c(3.0, 0.0));
        assert!(Laurent::from_rational(&RationalFn::szego(c(0.5, 0.0)).unwrap()).is_err());
    }

    #[test]
    fn constant_symbol_by_hand() {
        let cst = c(2.0, -1.0);
        let fac = wh_factorize(1, &RationalFn::constant(cst)).unwrap();
        let x = &fac.g_plus_inv;
        assert!((&x[0][0] - &ComplexPoly::monomial(c(1.0, 0.0), 1)).max_abs() < 1e-14);
        assert!((&x[0][1] - &ComplexPoly::constant(1.0 / cst)).max_abs() < 1e-14);
        assert!((&x[1][0] - &ComplexPoly::constant(-cst)).max_abs() < 1e-14);
        assert!(x[1][1].max_abs() < 1e-14);
        let want_12 = RationalFn::z_pow(-1).scale(1.0 / cst);
        assert!(fac.g_minus[0][1].distance_on_circle(&want_12, 16) < 1e-14);
        assert!(fac.g_minus[0][0].distance_on_circle(&RationalFn::one(), 16) < 1e-14);
        assert!(fac.residuals.consistency < 1e-13);

        let g = tto_inverse_via_wh(1, &RationalFn::constant(cst), &RationalFn::one()).unwrap();
        assert!(g.distance_on_circle(&RationalFn::constant(1.0 / cst), 16) < 1e-14);
    }

    #[test]
    fn zero_symbol_has_no_factorization() {
        assert!(matches!(
            wh_factorize(1, &RationalFn::zero()),
            Err(Error::NoCanonicalFactorization)
        ));
        assert!(matches!(
            wh_factorize(2, &RationalFn::z()),
            Err(Error::NoCanonicalFactorization)
        ));
    }

    #[test]
    fn invertible_two_by_two() {
        let phi = poly(&[1.0, 5.0 / 6.0]);
        let fac = wh_factorize(2, &phi).unwrap();
        assert!(fac.residuals.consistency < 1e-12);
        let g = fac.apply_inverse(&RationalFn::one()).unwrap();
        assert!(g.distance_on_circle(&poly(&[1.0, -5.0 / 6.0]), 16) < 1e-13);

        let direct = invert_direct(2, &phi).unwrap();
        let want = DMatrix::from_row_slice(
            2,
            2,
            &[c(1.0, 0.0), c(0.0, 0.0), c(-5.0 / 6.0, 0.0), c(1.0, 0.0)],
        );
        assert!(frobenius(&(direct.entries - want)) < 1e-14);

        let f = poly(&[0.3, -2.0]);
        let g = tto_inverse_via_wh(2, &RationalFn::one(), &f).unwrap();
        assert!(g.distance_on_circle(&f, 16) < 1e-14);
    }

    #[test]
    fn direct_inverse_examples() {
        let inv = invert_direct(1, &RationalFn::constant(c(4.0, 0.0))).unwrap();
        assert!((inv.entries[(0, 0)] - c(0.25, 0.0)).norm() < 1e-15);
        assert!(matches!(
            invert_direct(2, &RationalFn::z()),
            Err(Error::Singular { .. })
        ));
    }

    #[test]
    fn laurent_symbol_agrees_with_direct() {
        let phi = RationalFn::laurent(
            -2,
            &[
                c(0.3, 0.1),
                c(-0.5, 0.0),
                c(2.0, 0.0),
                c(0.7, -0.2),
                c(0.1, 0.0),
            ],
        );
        for n in 1..=4 {
            let fac = wh_factorize(n, &phi).unwrap();
            let via = fac.inverse_matrix().unwrap();
            let direct = invert_direct(n, &phi).unwrap();
            assert!(frobenius(&(via - direct.entries)) < 1e-10, "n = {n}");
        }
    }

    #[test]
    fn chained_inverse_example() {
        let alpha = BlaschkeProduct::from_zeros(vec![c(0.5, 0.0), c(1.0 / 3.0, 0.0)]).unwrap();
        let phi = &(&alpha.num_den().0.into() * &poly(&[1.0, 0.0, 1.0])) * &RationalFn::z_pow(-2);
        let via = invert_via_equivalence(&alpha, &phi).unwrap();
        let ka = Arc::new(ModelSpace::new(alpha));
        let a = tto_matrix(&ka, &ka, &phi);
        let direct = inverse(&a.entries).unwrap();
        assert!(frobenius(&(via - direct)) < 1e-10);
    }
}

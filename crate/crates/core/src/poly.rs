//! Dense complex polynomials in ascending-degree order.
//!
//! The zero polynomial has no coefficients, and a nonzero polynomial never
//! carries an exactly-zero leading coefficient. Roots are found from the
//! eigenvalues of the companion matrix, polished with Newton steps and
//! clustered into multiplicities.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use nalgebra::DMatrix;
use num_complex::Complex64;

use crate::C64;

/// Roots closer than this are reported as one root of higher multiplicity.
pub const ROOT_CLUSTER_TOL: f64 = 1e-8;

/// Companion eigenvalues of an `m`-fold root scatter by roughly `eps^(1/m)`,
/// so candidate clusters are gathered at this looser radius and only kept
/// when the centroid is verified to be a multiple root.
const CLUSTER_CANDIDATE_TOL: f64 = 1e-3;

#[derive(Clone, Debug, Default, PartialEq)]
pub struct ComplexPoly {
    coeffs: Vec<C64>,
}

/// A root together with its multiplicity.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Root {
    pub value: C64,
    pub multiplicity: usize,
}

impl ComplexPoly {
    /// Builds a polynomial from ascending coefficients, stripping exact trailing zeros.
    pub fn new(mut coeffs: Vec<C64>) -> Self {
        while coeffs.last().is_some_and(|c| *c == C64::new(0.0, 0.0)) {
            coeffs.pop();
        }
        Self { coeffs }
    }

    pub fn from_real(coeffs: &[f64]) -> Self {
        Self::new(coeffs.iter().map(|&c| C64::new(c, 0.0)).collect())
    }

    pub fn zero() -> Self {
        Self { coeffs: Vec::new() }
    }

    pub fn one() -> Self {
        Self::constant(C64::new(1.0, 0.0))
    }

    pub fn constant(c: C64) -> Self {
        Self::new(vec![c])
    }

    /// `c * z^k`
    pub fn monomial(c: C64, k: usize) -> Self {
        let mut coeffs = vec![C64::new(0.0, 0.0); k + 1];
        coeffs[k] = c;
        Self::new(coeffs)
    }

    /// `z - r`
    pub fn linear(r: C64) -> Self {
        Self::new(vec![-r, C64::new(1.0, 0.0)])
    }

    /// Monic polynomial `prod (z - r_j)`.
    pub fn from_roots(roots: &[C64]) -> Self {
        let mut coeffs = vec![C64::new(1.0, 0.0)];
        for &r in roots {
            let mut next = vec![C64::new(0.0, 0.0); coeffs.len() + 1];
            for (k, &c) in coeffs.iter().enumerate() {
                next[k + 1] += c;
                next[k] -= r * c;
            }
            coeffs = next;
        }
        Self::new(coeffs)
    }

    pub fn coeffs(&self) -> &[C64] {
        &self.coeffs
    }

    pub fn into_coeffs(self) -> Vec<C64> {
        self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Degree, or `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    /// Coefficient of `z^k` (zero beyond the degree).
    pub fn coeff(&self, k: usize) -> C64 {
        self.coeffs.get(k).copied().unwrap_or_default()
    }

    pub fn leading(&self) -> Option<C64> {
        self.coeffs.last().copied()
    }

    /// Largest coefficient modulus.
    pub fn max_abs(&self) -> f64 {
        self.coeffs.iter().map(|c| c.norm()).fold(0.0, f64::max)
    }

    pub fn eval(&self, z: C64) -> C64 {
        self.coeffs
            .iter()
            .rev()
            .fold(C64::new(0.0, 0.0), |acc, &c| acc * z + c)
    }

    /// `sum |c_k| |z|^k`, the natural scale for judging `|p(z)|` against rounding.
    pub fn eval_abs(&self, z: C64) -> f64 {
        let r = z.norm();
        self.coeffs
            .iter()
            .rev()
            .fold(0.0, |acc, c| acc * r + c.norm())
    }

    pub fn scale(&self, c: C64) -> Self {
        Self::new(self.coeffs.iter().map(|&x| x * c).collect())
    }

    pub fn derivative(&self) -> Self {
        Self::new(
            self.coeffs
                .iter()
                .enumerate()
                .skip(1)
                .map(|(k, &c)| c * k as f64)
                .collect(),
        )
    }

    /// Multiplies by `z^k`.
    pub fn shift_up(&self, k: usize) -> Self {
        if self.is_zero() {
            return Self::zero();
        }
        let mut coeffs = vec![C64::new(0.0, 0.0); k];
        coeffs.extend_from_slice(&self.coeffs);
        Self::new(coeffs)
    }

    /// `z^d * conj(p(1/conj(z)))` with `d = deg p`: conjugated coefficients in reverse order.
    pub fn reversed_conj(&self) -> Self {
        Self::new(self.coeffs.iter().rev().map(|c| c.conj()).collect())
    }

    /// Coefficients of `p(center + u)` in powers of `u`.
    pub fn taylor_shift(&self, center: C64) -> Vec<C64> {
        let mut c = self.coeffs.clone();
        let n = c.len();
        for i in 0..n {
            for j in (i..n.saturating_sub(1)).rev() {
                let hi = c[j + 1];
                c[j] += center * hi;
            }
        }
        c
    }

    /// Quotient and remainder of Euclidean division by a nonzero divisor.
    pub fn div_rem(&self, divisor: &ComplexPoly) -> (ComplexPoly, ComplexPoly) {
        let dd = divisor.degree().expect("division by the zero polynomial");
        let lead = divisor.coeffs[dd];
        let Some(nd) = self.degree() else {
            return (Self::zero(), Self::zero());
        };
        if nd < dd {
            return (Self::zero(), self.clone());
        }
        let mut rem = self.coeffs.clone();
        let mut quot = vec![C64::new(0.0, 0.0); nd - dd + 1];
        for k in (0..=nd - dd).rev() {
            let q = rem[k + dd] / lead;
            quot[k] = q;
            for (j, &d) in divisor.coeffs.iter().enumerate() {
                rem[k + j] -= q * d;
            }
            rem[k + dd] = C64::new(0.0, 0.0);
        }
        rem.truncate(dd);
        (Self::new(quot), Self::new(rem))
    }

    /// Divides by `z - r` assuming `r` is a root, returning the quotient and the
    /// relative residual `|p(r)| / sum |c_k||r|^k`.
    ///
    /// Uses forward deflation for `|r| <= 1` and backward deflation otherwise,
    /// which keeps the recurrence from amplifying rounding.
    pub fn deflate(&self, r: C64) -> (ComplexPoly, f64) {
        let Some(d) = self.degree() else {
            return (Self::zero(), 0.0);
        };
        if d == 0 {
            return (Self::zero(), 1.0);
        }
        let scale = self.eval_abs(r).max(f64::MIN_POSITIVE);
        let resid = self.eval(r).norm() / scale;
        let c = &self.coeffs;
        let mut q = vec![C64::new(0.0, 0.0); d];
        if r.norm() <= 1.0 {
            q[d - 1] = c[d];
            for k in (0..d - 1).rev() {
                q[k] = c[k + 1] + r * q[k + 1];
            }
        } else {
            // c_0 = -r q_0, c_k = q_{k-1} - r q_k
            q[0] = -c[0] / r;
            for k in 1..d {
                q[k] = (q[k - 1] - c[k]) / r;
            }
        }
        (Self::new(q), resid)
    }

    /// Drops leading coefficients whose modulus is below `tol * scale`.
    pub fn trim_relative(&self, tol: f64, scale: f64) -> Self {
        let mut coeffs = self.coeffs.clone();
        while coeffs.last().is_some_and(|c| c.norm() <= tol * scale) {
            coeffs.pop();
        }
        Self::new(coeffs)
    }

    /// Roots with multiplicities. The zero and constant polynomials have none.
    pub fn roots(&self) -> Vec<Root> {
        let Some(d) = self.degree() else {
            return Vec::new();
        };
        // Leading coefficients at rounding level would put roots near infinity.
        let trimmed = self.trim_relative(1e-14, self.max_abs());
        let d = trimmed.degree().unwrap_or(0).min(d);
        if d == 0 {
            return Vec::new();
        }
        // Exact roots at zero first: they make the companion matrix singular.
        let low = trimmed
            .coeffs
            .iter()
            .take_while(|c| **c == C64::new(0.0, 0.0))
            .count();
        let reduced = ComplexPoly::new(trimmed.coeffs[low..].to_vec());
        let raw = companion_eigenvalues(&reduced);
        let mut roots = cluster_roots(&reduced, raw);
        for r in roots.iter_mut() {
            r.value = newton_polish(&reduced, r.value, r.multiplicity);
        }
        if low > 0 {
            roots.push(Root {
                value: C64::new(0.0, 0.0),
                multiplicity: low,
            });
        }
        roots
    }

    /// Roots listed with repetition according to multiplicity.
    pub fn roots_flat(&self) -> Vec<C64> {
        self.roots()
            .into_iter()
            .flat_map(|r| std::iter::repeat_n(r.value, r.multiplicity))
            .collect()
    }
}

fn companion_eigenvalues(p: &ComplexPoly) -> Vec<C64> {
    let d = p.degree().unwrap_or(0);
    if d == 0 {
        return Vec::new();
    }
    let lead = p.coeffs[d];
    if d == 1 {
        return vec![-p.coeffs[0] / lead];
    }
    let mut m = DMatrix::<C64>::zeros(d, d);
    for i in 1..d {
        m[(i, i - 1)] = C64::new(1.0, 0.0);
    }
    for i in 0..d {
        m[(i, d - 1)] = -p.coeffs[i] / lead;
    }
    let schur = nalgebra::Schur::new(m);
    let (_, t) = schur.unpack();
    (0..d).map(|i| t[(i, i)]).collect()
}

/// Newton steps on `p^(m-1)`, for which an `m`-fold root of `p` is simple.
fn newton_polish(p: &ComplexPoly, mut z: C64, multiplicity: usize) -> C64 {
    let mut p = p.clone();
    for _ in 1..multiplicity {
        p = p.derivative();
    }
    let p = &p;
    let dp = p.derivative();
    for _ in 0..4 {
        let f = p.eval(z);
        let df = dp.eval(z);
        if df.norm() == 0.0 {
            break;
        }
        let cand = z - f / df;
        if !(cand.re.is_finite() && cand.im.is_finite()) || p.eval(cand).norm() >= f.norm() {
            break;
        }
        z = cand;
    }
    z
}

/// Groups nearby eigenvalues. Anything within [`ROOT_CLUSTER_TOL`] is merged
/// outright; wider groups are merged only if the centroid annihilates the
/// first `m - 1` derivatives to rounding accuracy.
fn cluster_roots(p: &ComplexPoly, mut raw: Vec<C64>) -> Vec<Root> {
    raw.sort_by(|a, b| a.re.total_cmp(&b.re).then(a.im.total_cmp(&b.im)));
    let mut used = vec![false; raw.len()];
    let mut out = Vec::new();
    for i in 0..raw.len() {
        if used[i] {
            continue;
        }
        let scale = 1.0 + raw[i].norm();
        let near: Vec<usize> = (i..raw.len())
            .filter(|&j| !used[j] && (raw[j] - raw[i]).norm() <= CLUSTER_CANDIDATE_TOL * scale)
            .collect();
        let tight: Vec<usize> = near
            .iter()
            .copied()
            .filter(|&j| (raw[j] - raw[i]).norm() <= ROOT_CLUSTER_TOL * scale)
            .collect();
        let group = if near.len() > tight.len() && is_multiple_root(p, &raw, &near) {
            near
        } else {
            tight
        };
        let centroid = group.iter().map(|&j| raw[j]).sum::<C64>() / group.len() as f64;
        for &j in &group {
            used[j] = true;
        }
        out.push(Root {
            value: centroid,
            multiplicity: group.len(),
        });
    }
    out
}

fn is_multiple_root(p: &ComplexPoly, raw: &[C64], group: &[usize]) -> bool {
    let centroid = group.iter().map(|&j| raw[j]).sum::<C64>() / group.len() as f64;
    let mut q = p.clone();
    for _ in 0..group.len() - 1 {
        let scale = q.eval_abs(centroid).max(f64::MIN_POSITIVE);
        if q.eval(centroid).norm() > 1e-12 * scale {
            return false;
        }
        q = q.derivative();
    }
    true
}

impl Add for &ComplexPoly {
    type Output = ComplexPoly;
    fn add(self, rhs: &ComplexPoly) -> ComplexPoly {
        let n = self.coeffs.len().max(rhs.coeffs.len());
        ComplexPoly::new((0..n).map(|k| self.coeff(k) + rhs.coeff(k)).collect())
    }
}

impl Sub for &ComplexPoly {
    type Output = ComplexPoly;
    fn sub(self, rhs: &ComplexPoly) -> ComplexPoly {
        let n = self.coeffs.len().max(rhs.coeffs.len());
        ComplexPoly::new((0..n).map(|k| self.coeff(k) - rhs.coeff(k)).collect())
    }
}

impl Mul for &ComplexPoly {
    type Output = ComplexPoly;
    fn mul(self, rhs: &ComplexPoly) -> ComplexPoly {
        if self.is_zero() || rhs.is_zero() {
            return ComplexPoly::zero();
        }
        let mut out = vec![C64::new(0.0, 0.0); self.coeffs.len() + rhs.coeffs.len() - 1];
        for (i, &a) in self.coeffs.iter().enumerate() {
            for (j, &b) in rhs.coeffs.iter().enumerate() {
                out[i + j] += a * b;
            }
        }
        ComplexPoly::new(out)
    }
}

impl Neg for &ComplexPoly {
    type Output = ComplexPoly;
    fn neg(self) -> ComplexPoly {
        ComplexPoly::new(self.coeffs.iter().map(|c| -c).collect())
    }
}

impl fmt::Display for ComplexPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (k, c) in self.coeffs.iter().enumerate() {
            if *c == Complex64::new(0.0, 0.0) {
                continue;
            }
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            write!(f, "({}{:+}i)", c.re, c.im)?;
            match k {
                0 => {}
                1 => write!(f, "z")?,
                _ => write!(f, "z^{k}")?,
            }
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> C64 {
        C64::new(re, im)
    }

    #[test]
    fn trailing_zeros_are_stripped() {
        let p = ComplexPoly::new(vec![c(1.0, 0.0), c(0.0, 0.0), c(0.0, 0.0)]);
        assert_eq!(p.degree(), Some(0));
        assert!(ComplexPoly::new(vec![c(0.0, 0.0)]).is_zero());
        assert_eq!(ComplexPoly::zero().degree(), None);
    }

    #[test]
    fn div_rem_reconstructs() {
        let p = ComplexPoly::from_real(&[1.0, -2.0, 0.5, 3.0, 1.0]);
        let d = ComplexPoly::new(vec![c(0.5, 1.0), c(0.0, 0.0), c(2.0, 0.0)]);
        let (q, r) = p.div_rem(&d);
        let back = &(&q * &d) + &r;
        for k in 0..5 {
            assert!((back.coeff(k) - p.coeff(k)).norm() < 1e-14);
        }
        assert!(r.degree().unwrap_or(0) < 2);
    }

    #[test]
    fn deflation_both_directions() {
        for r in [c(0.3, -0.2), c(2.5, 1.0)] {
            let p = &ComplexPoly::from_roots(&[r, c(0.1, 0.0), c(-3.0, 0.5)]).scale(c(2.0, 1.0));
            let (q, resid) = p.deflate(r);
            assert!(resid < 1e-14);
            let back = &q * &ComplexPoly::linear(r);
            for k in 0..4 {
                assert!((back.coeff(k) - p.coeff(k)).norm() < 1e-13);
            }
        }
    }

    #[test]
    fn simple_and_multiple_roots() {
        let want = [c(0.5, 0.0), c(-0.25, 0.75), c(3.0, -1.0)];
        let p = ComplexPoly::from_roots(&want);
        let got = p.roots();
        assert_eq!(got.len(), 3);
        for w in want {
            assert!(got
                .iter()
                .any(|r| (r.value - w).norm() < 1e-12 && r.multiplicity == 1));
        }

        let p = ComplexPoly::from_roots(&[c(0.5, 0.0), c(0.5, 0.0), c(0.5, 0.0), c(-2.0, 0.0)]);
        let got = p.roots();
        assert_eq!(got.len(), 2);
        let triple = got.iter().find(|r| r.multiplicity == 3).unwrap();
        assert!((triple.value - c(0.5, 0.0)).norm() < 1e-10);

        let p = ComplexPoly::monomial(c(1.0, 0.0), 3);
        assert_eq!(
            p.roots(),
            vec![Root {
                value: c(0.0, 0.0),
                multiplicity: 3
            }]
        );
    }

    #[test]
    fn taylor_shift_matches_evaluation() {
        let p = ComplexPoly::from_real(&[1.0, 2.0, -1.0, 0.5]);
        let a = c(0.3, 0.7);
        let t = ComplexPoly::new(p.taylor_shift(a));
        let u = c(0.1, -0.2);
        assert!((t.eval(u) - p.eval(a + u)).norm() < 1e-14);
    }

    #[test]
    fn reversed_conj_is_circle_conjugate() {
        let p = ComplexPoly::new(vec![c(1.0, 2.0), c(0.0, -1.0), c(3.0, 0.5)]);
        let z = C64::from_polar(1.0, 0.7);
        // z^2 conj(p(z)) on the circle
        let lhs = p.reversed_conj().eval(z);
        let rhs = z * z * p.eval(z).conj();
        assert!((lhs - rhs).norm() < 1e-14);
    }
}

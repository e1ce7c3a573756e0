//! Rational functions with no poles on the unit circle.
//!
//! A [`RationalFn`] stores its numerator together with the explicit multiset of
//! poles; the monic denominator is the product of `(z - p)` over that multiset.
//! Keeping the poles avoids re-solving for them after every operation, and lets
//! partial fractions, circle conjugation and reduction work on exact pole data.

use std::ops::{Add, Mul, Neg, Sub};

use crate::error::{Error, Result};
use crate::poly::{ComplexPoly, ROOT_CLUSTER_TOL};
use crate::C64;

/// Default distance from the unit circle below which a pole is rejected.
pub const POLE_TOL: f64 = 1e-8;

/// Relative residual `|N(p)| / sum |c_k||p|^k` below which a numerator root is
/// taken to cancel the pole `p`.
const CANCEL_TOL: f64 = 1e-9;

/// Poles this close to the origin are snapped to it.
const ZERO_SNAP: f64 = 1e-14;

#[derive(Clone, Debug, PartialEq)]
pub struct RationalFn {
    num: ComplexPoly,
    den: ComplexPoly,
    poles: Vec<C64>,
}

/// The split of a function into its `H^2` and `(H^2)^perp` components.
#[derive(Clone, Debug)]
pub struct FourierSplit {
    /// Poles strictly outside the closed disk; carries the polynomial part.
    pub analytic: RationalFn,
    /// Poles strictly inside the disk; vanishes at infinity.
    pub antianalytic: RationalFn,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ArithOp {
    Add,
    Sub,
    Mul,
    Div,
}

pub(crate) fn same_point(a: C64, b: C64) -> bool {
    (a - b).norm() <= ROOT_CLUSTER_TOL * (1.0 + a.norm().max(b.norm()))
}

fn snap(p: C64, existing: &[C64]) -> C64 {
    if p.norm() < ZERO_SNAP {
        return C64::new(0.0, 0.0);
    }
    existing
        .iter()
        .copied()
        .find(|&q| same_point(p, q))
        .unwrap_or(p)
}

/// Elements of `a` left after removing one matching element of `b` for each
/// element of `b` (matching by clustering tolerance).
pub(crate) fn multiset_diff(a: &[C64], b: &[C64]) -> Vec<C64> {
    let mut used = vec![false; b.len()];
    let mut out = Vec::new();
    for &x in a {
        match (0..b.len()).find(|&j| !used[j] && same_point(x, b[j])) {
            Some(j) => used[j] = true,
            None => out.push(x),
        }
    }
    out
}

/// Multiset intersection with the minimum multiplicity; values taken from `a`.
pub(crate) fn multiset_intersection(a: &[C64], b: &[C64]) -> Vec<C64> {
    let mut used = vec![false; b.len()];
    let mut out = Vec::new();
    for &x in a {
        if let Some(j) = (0..b.len()).find(|&j| !used[j] && same_point(x, b[j])) {
            used[j] = true;
            out.push(x);
        }
    }
    out
}

/// Distinct values of a multiset with their multiplicities.
pub(crate) fn group_points(points: &[C64]) -> Vec<(C64, usize)> {
    let mut out: Vec<(C64, usize)> = Vec::new();
    for &p in points {
        match out.iter_mut().find(|(q, _)| same_point(p, *q)) {
            Some(entry) => entry.1 += 1,
            None => out.push((p, 1)),
        }
    }
    out
}

/// `n` equally spaced points on the unit circle starting at 1.
pub fn circle_points(n: usize) -> Vec<C64> {
    (0..n)
        .map(|k| C64::from_polar(1.0, std::f64::consts::TAU * k as f64 / n as f64))
        .collect()
}

impl RationalFn {
    /// Builds `num / den`, rejecting poles within [`POLE_TOL`] of the circle.
    pub fn new(num: ComplexPoly, den: ComplexPoly) -> Result<Self> {
        Self::new_with_tolerance(num, den, POLE_TOL)
    }

    pub fn new_with_tolerance(num: ComplexPoly, den: ComplexPoly, pole_tol: f64) -> Result<Self> {
        let lead = den.leading().ok_or(Error::DivisionByZero)?;
        let (num, den) = if lead == C64::new(1.0, 0.0) {
            (num, den)
        } else {
            (num.scale(1.0 / lead), den.scale(1.0 / lead))
        };
        let raw = den.roots_flat();
        check_circle(&raw, pole_tol)?;
        let mut poles = Vec::with_capacity(raw.len());
        let mut snapped = false;
        for p in raw {
            let s = snap(p, &poles);
            snapped |= s != p;
            poles.push(s);
        }
        let mut f = Self {
            num,
            den: ComplexPoly::zero(),
            poles,
        };
        let before = f.poles.len();
        f.reduce();
        // Keep the caller's denominator when nothing changed, so values
        // round-trip through serialization unchanged.
        f.den = if f.poles.len() == before && !snapped {
            den
        } else {
            ComplexPoly::from_roots(&f.poles)
        };
        Ok(f)
    }

    /// Builds `num / prod (z - p)` from explicit poles.
    pub fn with_poles(num: ComplexPoly, poles: Vec<C64>) -> Result<Self> {
        check_circle(&poles, POLE_TOL)?;
        Ok(Self::from_parts(num, poles))
    }

    /// Like [`with_poles`](Self::with_poles) without the circle check; callers
    /// guarantee the poles come from valid functions.
    pub(crate) fn from_parts(num: ComplexPoly, poles: Vec<C64>) -> Self {
        let mut snapped = Vec::with_capacity(poles.len());
        for p in poles {
            let s = snap(p, &snapped);
            snapped.push(s);
        }
        let mut f = Self {
            num,
            den: ComplexPoly::zero(),
            poles: snapped,
        };
        f.reduce();
        f.den = ComplexPoly::from_roots(&f.poles);
        f
    }

    pub fn polynomial(p: ComplexPoly) -> Self {
        Self {
            num: p,
            den: ComplexPoly::one(),
            poles: Vec::new(),
        }
    }

    pub fn zero() -> Self {
        Self::polynomial(ComplexPoly::zero())
    }

    pub fn one() -> Self {
        Self::constant(C64::new(1.0, 0.0))
    }

    pub fn constant(c: C64) -> Self {
        Self::polynomial(ComplexPoly::constant(c))
    }

    /// `z^n` for any integer `n`; negative powers put a pole at the origin.
    pub fn z_pow(n: i32) -> Self {
        if n >= 0 {
            Self::polynomial(ComplexPoly::monomial(C64::new(1.0, 0.0), n as usize))
        } else {
            Self::from_parts(ComplexPoly::one(), vec![C64::new(0.0, 0.0); (-n) as usize])
        }
    }

    pub fn z() -> Self {
        Self::z_pow(1)
    }

    /// `1 / (1 - conj(a) z)`, the Szegő kernel at `a` (requires `|a| != 1`).
    pub fn szego(a: C64) -> Result<Self> {
        if a.norm() < ZERO_SNAP {
            return Ok(Self::one());
        }
        Self::with_poles(ComplexPoly::constant(-1.0 / a.conj()), vec![1.0 / a.conj()])
    }

    /// Finite Laurent polynomial `sum_{k} c_k z^{k + low}`.
    pub fn laurent(low: i32, coeffs: &[C64]) -> Self {
        let p = ComplexPoly::new(coeffs.to_vec());
        if low >= 0 {
            Self::polynomial(p.shift_up(low as usize))
        } else {
            Self::from_parts(p, vec![C64::new(0.0, 0.0); (-low) as usize])
        }
    }

    pub fn num(&self) -> &ComplexPoly {
        &self.num
    }

    pub fn den(&self) -> &ComplexPoly {
        &self.den
    }

    pub fn poles(&self) -> &[C64] {
        &self.poles
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    /// Zeros of the numerator (finite zeros of the function).
    pub fn zeros(&self) -> Vec<C64> {
        self.num.roots_flat()
    }

    pub fn is_polynomial(&self) -> bool {
        self.poles.is_empty()
    }

    /// Every pole lies strictly outside the closed unit disk.
    pub fn is_analytic_in_disk(&self) -> bool {
        self.poles.iter().all(|p| p.norm() > 1.0)
    }

    pub fn eval(&self, z: C64) -> C64 {
        let d = self
            .poles
            .iter()
            .fold(C64::new(1.0, 0.0), |acc, &p| acc * (z - p));
        self.num.eval(z) / d
    }

    /// Value at infinity: finite only when `deg num <= #poles`.
    pub fn value_at_infinity(&self) -> Option<C64> {
        match self.num.degree() {
            None => Some(C64::new(0.0, 0.0)),
            Some(d) if d < self.poles.len() => Some(C64::new(0.0, 0.0)),
            Some(d) if d == self.poles.len() => Some(self.num.coeff(d)),
            _ => None,
        }
    }

    pub fn scale(&self, c: C64) -> Self {
        if c == C64::new(0.0, 0.0) {
            return Self::zero();
        }
        Self {
            num: self.num.scale(c),
            den: self.den.clone(),
            poles: self.poles.clone(),
        }
    }

    /// Removes common numerator/denominator factors.
    fn reduce(&mut self) {
        if self.num.is_zero() {
            self.poles.clear();
            return;
        }
        let mut i = 0;
        while i < self.poles.len() {
            let p = self.poles[i];
            if self.num.degree() == Some(0) {
                break;
            }
            let (q, resid) = self.num.deflate(p);
            if resid <= CANCEL_TOL {
                self.num = q;
                self.poles.remove(i);
            } else {
                i += 1;
            }
        }
    }

    pub fn checked_div(&self, rhs: &RationalFn) -> Result<RationalFn> {
        if rhs.is_zero() {
            return Err(Error::DivisionByZero);
        }
        if self.is_zero() {
            return Ok(Self::zero());
        }
        let lead = rhs.num.leading().expect("nonzero numerator");
        let new_poles = rhs.num.roots_flat();
        check_circle(&new_poles, POLE_TOL)?;
        let mut poles = self.poles.clone();
        poles.extend(new_poles);
        let num = (&self.num * &ComplexPoly::from_roots(&rhs.poles)).scale(1.0 / lead);
        Ok(Self::from_parts(num, poles))
    }

    pub fn inverse(&self) -> Result<RationalFn> {
        Self::one().checked_div(self)
    }

    /// `g(z) = conj(f(1 / conj(z)))`, which equals `conj(f)` on the circle.
    pub fn circle_conjugate(&self) -> RationalFn {
        let Some(d) = self.num.degree() else {
            return Self::zero();
        };
        let m = self.poles.len();
        let mut num = self.num.reversed_conj();
        let mut poles = Vec::with_capacity(m.max(d));
        let mut scale = C64::new(1.0, 0.0);
        for &p in &self.poles {
            if p == C64::new(0.0, 0.0) {
                continue;
            }
            // 1 - conj(p) z = -conj(p) (z - 1/conj(p))
            scale *= -p.conj();
            poles.push(1.0 / p.conj());
        }
        if m >= d {
            num = num.shift_up(m - d);
        } else {
            poles.extend(std::iter::repeat_n(C64::new(0.0, 0.0), d - m));
        }
        Self::from_parts(num.scale(1.0 / scale), poles)
    }

    /// Taylor coefficients to order `m` of `(z - p)^m f(z)` at the pole `p` of group `gi`.
    fn local_series(&self, groups: &[(C64, usize)], gi: usize, m: usize) -> Vec<C64> {
        let p = groups[gi].0;
        // N(p + u) times prod over other poles of 1/(u + (p - q))
        let mut series: Vec<C64> = self.num.taylor_shift(p);
        series.resize(m.max(series.len()), C64::new(0.0, 0.0));
        series.truncate(m);
        for (gj, &(q, mq)) in groups.iter().enumerate() {
            if gi == gj {
                continue;
            }
            let delta = p - q;
            // 1/(u + delta) = sum_k (-1)^k u^k / delta^(k+1)
            let inv: Vec<C64> = (0..m)
                .map(|k| {
                    let sign = if k % 2 == 0 { 1.0 } else { -1.0 };
                    sign / delta.powu(k as u32 + 1)
                })
                .collect();
            for _ in 0..mq {
                series = series_mul(&series, &inv, m);
            }
        }
        series
    }

    /// Laurent part `sum_k c_k (z - p)^{-k}` at each distinct pole, plus the polynomial part.
    fn partial_fractions(&self) -> (ComplexPoly, Vec<(C64, Vec<C64>)>) {
        let groups = group_points(&self.poles);
        let (poly, _) = self.num.div_rem(&self.den);
        let mut parts = Vec::with_capacity(groups.len());
        for (gi, &(p, m)) in groups.iter().enumerate() {
            let series = self.local_series(&groups, gi, m);
            // coefficient of (z - p)^{-k} is series[m - k]
            let coeffs: Vec<C64> = (1..=m).map(|k| series[m - k]).collect();
            parts.push((p, coeffs));
        }
        (poly, parts)
    }

    /// Splits into analytic and antianalytic components. Errors only when an
    /// inside and an outside pole are numerically indistinguishable.
    pub fn riesz_project(&self) -> Result<FourierSplit> {
        for &p in &self.poles {
            for &q in &self.poles {
                if p.norm() < 1.0 && q.norm() > 1.0 && same_point(p, q) {
                    return Err(Error::AmbiguousPoles {
                        inside: p,
                        outside: q,
                    });
                }
            }
        }
        Ok(self.split())
    }

    pub(crate) fn split(&self) -> FourierSplit {
        if self.poles.is_empty() {
            return FourierSplit {
                analytic: self.clone(),
                antianalytic: Self::zero(),
            };
        }
        let (poly, parts) = self.partial_fractions();
        let (inside, outside): (Vec<_>, Vec<_>) =
            parts.into_iter().partition(|(p, _)| p.norm() < 1.0);
        FourierSplit {
            analytic: sum_parts(poly, &outside),
            antianalytic: sum_parts(ComplexPoly::zero(), &inside),
        }
    }

    /// `P_+ f`
    pub fn analytic_part(&self) -> RationalFn {
        self.split().analytic
    }

    /// `P_- f`
    pub fn antianalytic_part(&self) -> RationalFn {
        self.split().antianalytic
    }

    /// Zeroth Fourier coefficient (the mean over the circle).
    ///
    /// Two exact formulas are available: the residues of `f / z` inside the
    /// disk, or the polynomial part at 0 plus the outside principal parts at 0.
    /// Far outside poles make the second cancel badly and clustered inside
    /// poles do the same to the first, so the one whose terms are smaller wins.
    pub fn mean(&self) -> C64 {
        if self.poles.is_empty() {
            return self.num.coeff(0);
        }
        let (inside, inside_size) = self.mean_from_inside();
        let (outside, outside_size) = self.mean_from_outside();
        if inside_size <= outside_size {
            inside
        } else {
            outside
        }
    }

    fn mean_from_inside(&self) -> (C64, f64) {
        let mut poles = self.poles.clone();
        poles.push(C64::new(0.0, 0.0));
        let over_z = Self::from_parts(self.num.clone(), poles);
        let groups = group_points(&over_z.poles);
        let (mut acc, mut size) = (C64::new(0.0, 0.0), 0.0);
        for (gi, &(p, m)) in groups.iter().enumerate() {
            if p.norm() < 1.0 {
                let r = over_z.local_series(&groups, gi, m)[m - 1];
                acc += r;
                size += r.norm();
            }
        }
        (acc, size)
    }

    fn mean_from_outside(&self) -> (C64, f64) {
        let (poly, parts) = self.partial_fractions();
        let mut acc = poly.coeff(0);
        let mut size = acc.norm();
        for (p, coeffs) in parts {
            if p.norm() > 1.0 {
                for (k, c) in coeffs.iter().enumerate() {
                    let t = c / (-p).powu(k as u32 + 1);
                    acc += t;
                    size += t.norm();
                }
            }
        }
        (acc, size)
    }

    /// Fourier coefficient `f^(n)`.
    pub fn fourier_coefficient(&self, n: i32) -> C64 {
        inner_product(self, &Self::z_pow(n))
    }

    /// `L^2` norm on the circle.
    pub fn norm(&self) -> f64 {
        inner_product(self, self).re.max(0.0).sqrt()
    }

    /// Maximum modulus over `n` circle samples.
    pub fn sup_on_circle(&self, n: usize) -> f64 {
        circle_points(n)
            .into_iter()
            .map(|z| self.eval(z).norm())
            .fold(0.0, f64::max)
    }

    /// Maximum modulus of `self - other` over `n` circle samples.
    pub fn distance_on_circle(&self, other: &RationalFn, n: usize) -> f64 {
        circle_points(n)
            .into_iter()
            .map(|z| (self.eval(z) - other.eval(z)).norm())
            .fold(0.0, f64::max)
    }

    /// Cross-multiplied coefficient residual `|N1 D2 - N2 D1|_inf`, relative
    /// to the size of the products.
    pub fn coeff_residual(&self, other: &RationalFn) -> f64 {
        let a = &self.num * &other.den;
        let b = &other.num * &self.den;
        let scale = 1.0 + a.max_abs().max(b.max_abs());
        (&a - &b).max_abs() / scale
    }
}

fn check_circle(poles: &[C64], tol: f64) -> Result<()> {
    for &p in poles {
        let distance = (p.norm() - 1.0).abs();
        if distance < tol {
            return Err(Error::PoleOnCircle { pole: p, distance });
        }
    }
    Ok(())
}

fn series_mul(a: &[C64], b: &[C64], order: usize) -> Vec<C64> {
    let mut out = vec![C64::new(0.0, 0.0); order];
    for (i, &x) in a.iter().enumerate().take(order) {
        for (j, &y) in b.iter().enumerate().take(order - i) {
            out[i + j] += x * y;
        }
    }
    out
}

/// `poly + sum_p sum_k c_k (z - p)^{-k}` as a single rational function.
fn sum_parts(poly: ComplexPoly, parts: &[(C64, Vec<C64>)]) -> RationalFn {
    let mut poles = Vec::new();
    for (p, coeffs) in parts {
        poles.extend(std::iter::repeat_n(*p, coeffs.len()));
    }
    let mut num = &poly * &ComplexPoly::from_roots(&poles);
    for (i, (p, coeffs)) in parts.iter().enumerate() {
        let m = coeffs.len();
        // sum_k c_k (z - p)^(m - k)
        let mut local = ComplexPoly::zero();
        let lin = ComplexPoly::linear(*p);
        let mut power = ComplexPoly::one();
        for k in (1..=m).rev() {
            local = &local + &power.scale(coeffs[k - 1]);
            power = &power * &lin;
        }
        let others: Vec<C64> = parts
            .iter()
            .enumerate()
            .filter(|(j, _)| *j != i)
            .flat_map(|(_, (q, cq))| std::iter::repeat_n(*q, cq.len()))
            .collect();
        num = &num + &(&local * &ComplexPoly::from_roots(&others));
    }
    RationalFn::from_parts(num, poles)
}

/// `int f conj(g) dm` over the unit circle.
pub fn inner_product(f: &RationalFn, g: &RationalFn) -> C64 {
    if f.is_zero() || g.is_zero() {
        return C64::new(0.0, 0.0);
    }
    (f * &g.circle_conjugate()).mean()
}

/// Fourier coefficient `f^(n) = <f, z^n>`.
pub fn fourier_coefficient(f: &RationalFn, n: i32) -> C64 {
    f.fourier_coefficient(n)
}

pub fn circle_conjugate(f: &RationalFn) -> RationalFn {
    f.circle_conjugate()
}

pub fn riesz_project(f: &RationalFn) -> Result<FourierSplit> {
    f.riesz_project()
}

pub fn rat_arith(f: &RationalFn, g: &RationalFn, op: ArithOp) -> Result<RationalFn> {
    Ok(match op {
        ArithOp::Add => f + g,
        ArithOp::Sub => f - g,
        ArithOp::Mul => f * g,
        ArithOp::Div => f.checked_div(g)?,
    })
}

fn add_impl(f: &RationalFn, g: &RationalFn, sign: f64) -> RationalFn {
    if g.is_zero() {
        return f.clone();
    }
    if f.is_zero() {
        return g.scale(C64::new(sign, 0.0));
    }
    let extra_for_f = multiset_diff(&g.poles, &f.poles);
    let extra_for_g = multiset_diff(&f.poles, &g.poles);
    let a = &f.num * &ComplexPoly::from_roots(&extra_for_f);
    let b = (&g.num * &ComplexPoly::from_roots(&extra_for_g)).scale(C64::new(sign, 0.0));
    let scale = a.max_abs() + b.max_abs();
    let num = (&a + &b).trim_relative(1e-14, scale);
    let mut poles = f.poles.clone();
    poles.extend(extra_for_f);
    RationalFn::from_parts(num, poles)
}

impl Add for &RationalFn {
    type Output = RationalFn;
    fn add(self, rhs: &RationalFn) -> RationalFn {
        add_impl(self, rhs, 1.0)
    }
}

impl Sub for &RationalFn {
    type Output = RationalFn;
    fn sub(self, rhs: &RationalFn) -> RationalFn {
        add_impl(self, rhs, -1.0)
    }
}

impl Mul for &RationalFn {
    type Output = RationalFn;
    fn mul(self, rhs: &RationalFn) -> RationalFn {
        if self.is_zero() || rhs.is_zero() {
            return RationalFn::zero();
        }
        let mut poles = self.poles.clone();
        poles.extend_from_slice(&rhs.poles);
        RationalFn::from_parts(&self.num * &rhs.num, poles)
    }
}

impl Neg for &RationalFn {
    type Output = RationalFn;
    fn neg(self) -> RationalFn {
        self.scale(C64::new(-1.0, 0.0))
    }
}

impl From<ComplexPoly> for RationalFn {
    fn from(p: ComplexPoly) -> Self {
        Self::polynomial(p)
    }
}

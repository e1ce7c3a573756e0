//! Finite Blaschke products `c prod (z - a_j) / (1 - conj(a_j) z)`.

use crate::error::{Error, Result};
use crate::poly::ComplexPoly;
use crate::rational::{circle_points, multiset_diff, multiset_intersection, RationalFn};
use crate::C64;

/// Zeros must satisfy `|a| < 1 - ZERO_MARGIN`.
const ZERO_MARGIN: f64 = 1e-10;

/// Samples used for the `sup |h| < 1` guard.
const SUP_SAMPLES: usize = 256;

#[derive(Clone, Debug, PartialEq)]
pub struct BlaschkeProduct {
    zeros: Vec<C64>,
    constant: C64,
}

impl BlaschkeProduct {
    pub fn new(zeros: Vec<C64>, constant: C64) -> Result<Self> {
        for &a in &zeros {
            if !(a.norm() < 1.0 - ZERO_MARGIN) {
                return Err(Error::InvalidBlaschke(format!(
                    "zero {a} is not inside the open unit disk"
                )));
            }
        }
        if !((constant.norm() - 1.0).abs() <= 1e-12) {
            return Err(Error::InvalidBlaschke(format!(
                "constant {constant} is not unimodular"
            )));
        }
        Ok(Self { zeros, constant })
    }

    pub fn from_zeros(zeros: Vec<C64>) -> Result<Self> {
        Self::new(zeros, C64::new(1.0, 0.0))
    }

    /// `z^n`
    pub fn z_pow(n: usize) -> Self {
        Self {
            zeros: vec![C64::new(0.0, 0.0); n],
            constant: C64::new(1.0, 0.0),
        }
    }

    /// The constant function 1.
    pub fn one() -> Self {
        Self::z_pow(0)
    }

    pub fn zeros(&self) -> &[C64] {
        &self.zeros
    }

    pub fn constant(&self) -> C64 {
        self.constant
    }

    pub fn degree(&self) -> usize {
        self.zeros.len()
    }

    pub fn eval(&self, z: C64) -> C64 {
        self.zeros.iter().fold(self.constant, |acc, &a| {
            acc * (z - a) / (C64::new(1.0, 0.0) - a.conj() * z)
        })
    }

    pub fn to_rational(&self) -> RationalFn {
        self.over_den(self.num_den().0)
    }

    /// Polynomials `N = c prod (z - a_j)` and `D = prod (1 - conj(a_j) z)` with `B = N / D`.
    pub fn num_den(&self) -> (ComplexPoly, ComplexPoly) {
        let num = ComplexPoly::from_roots(&self.zeros).scale(self.constant);
        let den = self.zeros.iter().fold(ComplexPoly::one(), |acc, &b| {
            &acc * &ComplexPoly::new(vec![C64::new(1.0, 0.0), -b.conj()])
        });
        (num, den)
    }

    /// `q / prod (1 - conj(a_j) z)` as a rational function.
    pub fn over_den(&self, q: ComplexPoly) -> RationalFn {
        let mut scale = C64::new(1.0, 0.0);
        let mut poles = Vec::new();
        for &a in &self.zeros {
            if a != C64::new(0.0, 0.0) {
                scale /= -a.conj();
                poles.push(1.0 / a.conj());
            }
        }
        RationalFn::from_parts(q.scale(scale), poles)
    }

    /// `prod 1 / (1 - conj(a_j) z)`, invertible in `H^inf`.
    pub fn alpha_plus(&self) -> RationalFn {
        self.over_den(ComplexPoly::one())
    }

    /// `c z^-n prod (z - a_j)`, invertible in the conjugate-analytic algebra.
    pub fn alpha_minus(&self) -> RationalFn {
        let n = self.degree() as i32;
        &RationalFn::polynomial(ComplexPoly::from_roots(&self.zeros).scale(self.constant))
            * &RationalFn::z_pow(-n)
    }

    /// `B = alpha_minus * z^n * alpha_plus`.
    pub fn factorize(&self) -> (RationalFn, usize, RationalFn) {
        (self.alpha_minus(), self.degree(), self.alpha_plus())
    }

    /// The Frostman shift `(B - a) / (1 - conj(a) B)` as a Blaschke product.
    pub fn frostman_shift(&self, a: C64) -> Result<Self> {
        if !(a.norm() < 1.0) {
            return Err(Error::OutsideDisk(a));
        }
        if a == C64::new(0.0, 0.0) {
            return Ok(self.clone());
        }
        let (num, den) = self.num_den();
        let zeros = (&num - &den.scale(a)).roots_flat();
        let shifted = Self {
            zeros,
            constant: C64::new(1.0, 0.0),
        };
        // Fix the unimodular constant from a boundary value.
        let z0 = C64::new(1.0, 0.0);
        let b = self.eval(z0);
        let target = (b - a) / (C64::new(1.0, 0.0) - a.conj() * b);
        let c = target / shifted.eval(z0);
        Self::new(shifted.zeros, c / c.norm())
    }

    /// `theta_hbar = (B - conj(h)) / (1 - h B)` with `a_minus = 1 - conj(h) conj(B)`
    /// and `a_plus = 1 / (1 - h B)`, so that `theta_hbar = a_minus B a_plus`.
    pub fn generalized_frostman(
        &self,
        h: &RationalFn,
    ) -> Result<(RationalFn, RationalFn, RationalFn)> {
        if !h.is_analytic_in_disk() {
            return Err(Error::InvalidSymbol(
                "h must have all poles outside the closed disk".into(),
            ));
        }
        let sup = h.sup_on_circle(SUP_SAMPLES);
        if !(sup < 1.0) {
            return Err(Error::InvalidSymbol(format!(
                "sampled sup |h| = {sup} is not below 1"
            )));
        }
        let theta = self.to_rational();
        let h_bar = h.circle_conjugate();
        let one = RationalFn::one();
        let one_minus_h_theta = &one - &(h * &theta);
        let a_plus = one_minus_h_theta.inverse()?;
        let theta_hbar = &(&theta - &h_bar) * &a_plus;
        let a_minus = &one - &(&h_bar * &theta.circle_conjugate());
        Ok((theta_hbar, a_minus, a_plus))
    }

    /// Multiset intersection of the zeros; unimodular constant 1.
    pub fn gcd(&self, other: &Self) -> Self {
        Self {
            zeros: multiset_intersection(&self.zeros, &other.zeros),
            constant: C64::new(1.0, 0.0),
        }
    }

    /// `self / divisor` when the divisor's zeros are contained in ours.
    pub fn quotient(&self, divisor: &Self) -> Result<Self> {
        let rest = multiset_diff(&self.zeros, &divisor.zeros);
        if rest.len() + divisor.degree() != self.degree() {
            return Err(Error::InvalidBlaschke(
                "divisor zeros are not a sub-multiset".into(),
            ));
        }
        Self::new(rest, self.constant / divisor.constant)
    }

    /// Points of the circle where the zeros accumulate. Always empty for a
    /// finite product; kept so callers can treat inner functions uniformly.
    pub fn boundary_spectrum(&self) -> Vec<C64> {
        Vec::new()
    }

    /// `max | |B(z)| - 1 |` over `n` circle samples.
    pub fn unimodularity_defect(&self, n: usize) -> f64 {
        circle_points(n)
            .into_iter()
            .map(|z| (self.eval(z).norm() - 1.0).abs())
            .fold(0.0, f64::max)
    }
}

/// Free-function form of [`BlaschkeProduct::factorize`].
pub fn factorize_eq53(b: &BlaschkeProduct) -> (RationalFn, usize, RationalFn) {
    b.factorize()
}

pub fn blaschke_gcd(b1: &BlaschkeProduct, b2: &BlaschkeProduct) -> BlaschkeProduct {
    b1.gcd(b2)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> C64 {
        C64::new(re, im)
    }

    fn b(zeros: &[f64]) -> BlaschkeProduct {
        BlaschkeProduct::from_zeros(zeros.iter().map(|&x| c(x, 0.0)).collect()).unwrap()
    }

    #[test]
    fn validation() {
        assert!(BlaschkeProduct::from_zeros(vec![c(1.0, 0.0)]).is_err());
        assert!(BlaschkeProduct::new(vec![], c(2.0, 0.0)).is_err());
        assert!(BlaschkeProduct::new(vec![c(0.5, 0.5)], c(0.0, 1.0)).is_ok());
    }

    #[test]
    fn to_rational_examples() {
        let z2 = BlaschkeProduct::z_pow(2).to_rational();
        assert!(z2.is_polynomial());
        assert_eq!(z2.num(), &ComplexPoly::from_real(&[0.0, 0.0, 1.0]));

        let half = b(&[0.5]).to_rational();
        let want = RationalFn::new(
            ComplexPoly::from_real(&[-0.5, 1.0]),
            ComplexPoly::from_real(&[1.0, -0.5]),
        )
        .unwrap();
        assert!(half.coeff_residual(&want) < 1e-15);

        let one = BlaschkeProduct::one().to_rational();
        assert!(one.coeff_residual(&RationalFn::one()) < 1e-15);
    }

    #[test]
    fn factorization_reconstructs() {
        let theta = b(&[0.5, 1.0 / 3.0]);
        let (am, n, ap) = theta.factorize();
        assert_eq!(n, 2);
        let want_ap =
            RationalFn::new(ComplexPoly::one(), ComplexPoly::from_real(&[1.0, -0.5])).unwrap();
        let want_ap = &want_ap
            * &RationalFn::new(
                ComplexPoly::one(),
                ComplexPoly::from_real(&[1.0, -1.0 / 3.0]),
            )
            .unwrap();
        assert!(ap.coeff_residual(&want_ap) < 1e-15);
        let back = &(&am * &RationalFn::z_pow(n as i32)) * &ap;
        assert!(back.distance_on_circle(&theta.to_rational(), 32) < 1e-14);

        let (am, n, ap) = BlaschkeProduct::one().factorize();
        assert_eq!(n, 0);
        assert!(am.coeff_residual(&RationalFn::one()) < 1e-15);
        assert!(ap.coeff_residual(&RationalFn::one()) < 1e-15);
    }

    #[test]
    fn frostman_examples() {
        let s = BlaschkeProduct::z_pow(1)
            .frostman_shift(c(0.5, 0.0))
            .unwrap();
        assert!((s.zeros()[0] - c(0.5, 0.0)).norm() < 1e-14);
        assert!((s.constant() - c(1.0, 0.0)).norm() < 1e-14);

        let s = BlaschkeProduct::z_pow(2)
            .frostman_shift(c(0.25, 0.0))
            .unwrap();
        let mut zs: Vec<f64> = s.zeros().iter().map(|z| z.re).collect();
        zs.sort_by(f64::total_cmp);
        assert!((zs[0] + 0.5).abs() < 1e-14 && (zs[1] - 0.5).abs() < 1e-14);
        assert!(s.unimodularity_defect(32) < 1e-13);

        let theta = b(&[0.2, -0.7]);
        assert_eq!(theta.frostman_shift(c(0.0, 0.0)).unwrap(), theta);
        assert!(theta.frostman_shift(c(1.0, 0.0)).is_err());
    }

    #[test]
    fn generalized_frostman_examples() {
        let theta = BlaschkeProduct::z_pow(2);
        let (t, am, ap) = theta.generalized_frostman(&RationalFn::zero()).unwrap();
        assert!(t.coeff_residual(&theta.to_rational()) < 1e-15);
        assert!(am.coeff_residual(&RationalFn::one()) < 1e-15);
        assert!(ap.coeff_residual(&RationalFn::one()) < 1e-15);

        // h = z/2: (z^2 - conj(z)/2)/(1 - z^3/2) = (2z^3 - 1) / (z (2 - z^3))
        let h = RationalFn::polynomial(ComplexPoly::from_real(&[0.0, 0.5]));
        let (t, am, ap) = theta.generalized_frostman(&h).unwrap();
        let want = RationalFn::new(
            ComplexPoly::from_real(&[-1.0, 0.0, 0.0, 2.0]),
            ComplexPoly::from_real(&[0.0, 2.0, 0.0, 0.0, -1.0]),
        )
        .unwrap();
        assert!(t.coeff_residual(&want) < 1e-14);
        for z in circle_points(32) {
            assert!((t.eval(z).norm() - 1.0).abs() < 1e-12);
            assert!((am.eval(z) * z * z * ap.eval(z) - t.eval(z)).norm() < 1e-12);
        }

        let big = RationalFn::constant(c(1.5, 0.0));
        assert!(theta.generalized_frostman(&big).is_err());
        let inner_pole = RationalFn::z_pow(-1).scale(c(0.1, 0.0));
        assert!(theta.generalized_frostman(&inner_pole).is_err());
    }

    #[test]
    fn gcd_examples() {
        let g = BlaschkeProduct::z_pow(2).gcd(&BlaschkeProduct::z_pow(3));
        assert_eq!(g.degree(), 2);
        let g = b(&[0.5, 0.0]).gcd(&b(&[0.5, 0.5]));
        assert_eq!(g.zeros(), &[c(0.5, 0.0)]);
        assert_eq!(BlaschkeProduct::z_pow(2).gcd(&b(&[0.5])).degree(), 0);
    }

    #[test]
    fn boundary_spectrum_is_empty() {
        assert!(BlaschkeProduct::z_pow(3).boundary_spectrum().is_empty());
        assert!(b(&[0.5, 1.0 / 3.0]).boundary_spectrum().is_empty());
        assert!(BlaschkeProduct::one().boundary_spectrum().is_empty());
    }
}

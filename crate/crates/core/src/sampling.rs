//! Random instances for property checks.
//!
//! Poles are kept at distance at least 0.2 from the circle so that every
//! generated symbol is well inside the library's tolerances.

use rand::Rng;

use crate::blaschke::BlaschkeProduct;
use crate::poly::ComplexPoly;
use crate::rational::RationalFn;
use crate::C64;

/// Uniform complex number in the square `[-1, 1]^2`.
pub fn random_complex(rng: &mut impl Rng) -> C64 {
    C64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0))
}

/// Point with modulus in `[r0, r1)` and uniform argument.
pub fn random_in_annulus(rng: &mut impl Rng, r0: f64, r1: f64) -> C64 {
    let r = rng.gen_range(r0..r1);
    let t = rng.gen_range(0.0..std::f64::consts::TAU);
    C64::from_polar(r, t)
}

/// Random polynomial of exact degree `deg`.
pub fn random_poly(rng: &mut impl Rng, deg: usize) -> ComplexPoly {
    let mut coeffs: Vec<C64> = (0..=deg).map(|_| random_complex(rng)).collect();
    if coeffs[deg].norm() < 0.1 {
        coeffs[deg] += C64::new(0.5, 0.0);
    }
    ComplexPoly::new(coeffs)
}

/// Blaschke product of degree `1..=max_deg` with zeros of modulus below 0.8.
pub fn random_blaschke(rng: &mut impl Rng, max_deg: usize) -> BlaschkeProduct {
    let deg = rng.gen_range(1..=max_deg);
    random_blaschke_of_degree(rng, deg)
}

pub fn random_blaschke_of_degree(rng: &mut impl Rng, deg: usize) -> BlaschkeProduct {
    let zeros = (0..deg).map(|_| random_in_annulus(rng, 0.0, 0.8)).collect();
    let t = rng.gen_range(0.0..std::f64::consts::TAU);
    BlaschkeProduct::new(zeros, C64::from_polar(1.0, t)).expect("zeros are inside the disk")
}

/// Rational function with up to three poles, each either in `|z| < 0.8` or in
/// `1.25 <= |z| < 2.5`, and a numerator of degree at most three.
pub fn random_rational(rng: &mut impl Rng) -> RationalFn {
    let n_poles = rng.gen_range(0..=3);
    let poles: Vec<C64> = (0..n_poles)
        .map(|_| {
            if rng.gen_bool(0.5) {
                random_in_annulus(rng, 0.0, 0.8)
            } else {
                random_in_annulus(rng, 1.25, 2.5)
            }
        })
        .collect();
    let deg = rng.gen_range(0..=3);
    RationalFn::with_poles(random_poly(rng, deg), poles).expect("poles are off the circle")
}

/// Function analytic on the closed disk: all poles in `1.25 <= |z| < 2.5`.
pub fn random_analytic(rng: &mut impl Rng) -> RationalFn {
    let n_poles = rng.gen_range(0..=2);
    let poles: Vec<C64> = (0..n_poles)
        .map(|_| random_in_annulus(rng, 1.25, 2.5))
        .collect();
    let deg = rng.gen_range(0..=3);
    RationalFn::with_poles(random_poly(rng, deg), poles).expect("poles are off the circle")
}

/// Laurent polynomial with frequencies in `low..=high`.
pub fn random_laurent(rng: &mut impl Rng, low: i32, high: i32) -> RationalFn {
    let coeffs: Vec<C64> = (low..=high).map(|_| random_complex(rng)).collect();
    RationalFn::laurent(low, &coeffs)
}

//! Model spaces of finite Blaschke products and the truncated Toeplitz
//! operators acting between them.
//!
//! Symbols, multipliers and space elements are [`RationalFn`] values with
//! complex double coefficients, and operators are dense matrices in
//! Takenaka–Malmquist bases.

pub mod blaschke;
pub mod dual;
pub mod error;
pub mod json;
pub mod linalg;
pub mod model_space;
pub mod operators;
pub mod poly;
pub mod rational;
pub mod sampling;
pub mod shorthand;
pub mod suites;
pub mod wiener_hopf;

pub use blaschke::BlaschkeProduct;
pub use error::{Error, Result};
pub use model_space::{KernelPair, ModelSpace};
pub use operators::{ConjugationMatrix, OperatorMatrix};
pub use poly::ComplexPoly;
pub use rational::{FourierSplit, RationalFn};

/// Complex double, the scalar type throughout.
pub type C64 = num_complex::Complex64;

/// Shorthand constructor for [`C64`].
pub fn c64(re: f64, im: f64) -> C64 {
    C64::new(re, im)
}

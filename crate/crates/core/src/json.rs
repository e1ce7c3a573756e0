//! JSON forms of the library's values.
//!
//! Complex numbers are `[re, im]` pairs and polynomials are arrays of them in
//! ascending degree. Floats are written in shortest round-trip form, so a
//! value that is written and read back is bit-identical.

use std::sync::Arc;

use nalgebra::DMatrix;
use serde::{Deserialize, Serialize};

use crate::blaschke::BlaschkeProduct;
use crate::dual::ComplementElement;
use crate::error::{Error, Result};
use crate::model_space::ModelSpace;
use crate::operators::OperatorMatrix;
use crate::poly::ComplexPoly;
use crate::rational::RationalFn;
use crate::wiener_hopf::MatrixFactorization;
use crate::C64;

pub type ComplexJson = [f64; 2];
pub type PolyJson = Vec<ComplexJson>;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RationalJson {
    pub num: PolyJson,
    pub den: PolyJson,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct BlaschkeJson {
    pub zeros: Vec<ComplexJson>,
    #[serde(default = "unit_constant")]
    pub constant: ComplexJson,
}

fn unit_constant() -> ComplexJson {
    [1.0, 0.0]
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MatrixJson {
    pub rows: usize,
    pub cols: usize,
    pub entries: Vec<Vec<ComplexJson>>,
    pub domain: BlaschkeJson,
    pub codomain: BlaschkeJson,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ComplementJson {
    pub theta: BlaschkeJson,
    pub analytic: RationalJson,
    pub antianalytic: RationalJson,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FactorizationJson {
    pub n: usize,
    pub phi: RationalJson,
    pub degree_bound: usize,
    pub g_plus_inv: [[PolyJson; 2]; 2],
    pub g_minus_inv: [[RationalJson; 2]; 2],
    pub residuals: FactorizationResidualsJson,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FactorizationResidualsJson {
    pub system: f64,
    pub determinant: f64,
    pub consistency: f64,
}

pub fn complex_to_json(c: C64) -> ComplexJson {
    [c.re, c.im]
}

pub fn complex_from_json(c: ComplexJson) -> C64 {
    C64::new(c[0], c[1])
}

pub fn poly_to_json(p: &ComplexPoly) -> PolyJson {
    p.coeffs().iter().map(|&c| complex_to_json(c)).collect()
}

pub fn poly_from_json(p: &PolyJson) -> ComplexPoly {
    ComplexPoly::new(p.iter().map(|&c| complex_from_json(c)).collect())
}

pub fn rational_to_json(f: &RationalFn) -> RationalJson {
    RationalJson {
        num: poly_to_json(f.num()),
        den: poly_to_json(f.den()),
    }
}

pub fn rational_from_json(j: &RationalJson) -> Result<RationalFn> {
    RationalFn::new(poly_from_json(&j.num), poly_from_json(&j.den))
}

pub fn blaschke_to_json(b: &BlaschkeProduct) -> BlaschkeJson {
    BlaschkeJson {
        zeros: b.zeros().iter().map(|&z| complex_to_json(z)).collect(),
        constant: complex_to_json(b.constant()),
    }
}

pub fn blaschke_from_json(j: &BlaschkeJson) -> Result<BlaschkeProduct> {
    BlaschkeProduct::new(
        j.zeros.iter().map(|&z| complex_from_json(z)).collect(),
        complex_from_json(j.constant),
    )
}

pub fn dmatrix_to_json(m: &DMatrix<C64>) -> Vec<Vec<ComplexJson>> {
    (0..m.nrows())
        .map(|i| (0..m.ncols()).map(|j| complex_to_json(m[(i, j)])).collect())
        .collect()
}

pub fn dmatrix_from_json(
    rows: usize,
    cols: usize,
    entries: &[Vec<ComplexJson>],
) -> Result<DMatrix<C64>> {
    if entries.len() != rows || entries.iter().any(|r| r.len() != cols) {
        return Err(Error::InvalidElement(format!(
            "entries do not form a {rows}x{cols} matrix"
        )));
    }
    Ok(DMatrix::from_fn(rows, cols, |i, j| {
        complex_from_json(entries[i][j])
    }))
}

pub fn matrix_to_json(m: &OperatorMatrix) -> MatrixJson {
    MatrixJson {
        rows: m.rows(),
        cols: m.cols(),
        entries: dmatrix_to_json(&m.entries),
        domain: blaschke_to_json(m.domain.inner()),
        codomain: blaschke_to_json(m.codomain.inner()),
    }
}

pub fn matrix_from_json(j: &MatrixJson) -> Result<OperatorMatrix> {
    let domain = Arc::new(ModelSpace::new(blaschke_from_json(&j.domain)?));
    let codomain = Arc::new(ModelSpace::new(blaschke_from_json(&j.codomain)?));
    if domain.dim() != j.cols || codomain.dim() != j.rows {
        return Err(Error::SpaceMismatch(format!(
            "a {}x{} matrix cannot map a {}-dimensional space into a {}-dimensional one",
            j.rows,
            j.cols,
            domain.dim(),
            codomain.dim()
        )));
    }
    Ok(OperatorMatrix {
        entries: dmatrix_from_json(j.rows, j.cols, &j.entries)?,
        domain,
        codomain,
    })
}

pub fn complement_to_json(f: &ComplementElement) -> ComplementJson {
    ComplementJson {
        theta: blaschke_to_json(&f.theta),
        analytic: rational_to_json(&f.analytic),
        antianalytic: rational_to_json(&f.antianalytic),
    }
}

pub fn complement_from_json(j: &ComplementJson) -> Result<ComplementElement> {
    ComplementElement::new(
        blaschke_from_json(&j.theta)?,
        rational_from_json(&j.analytic)?,
        rational_from_json(&j.antianalytic)?,
    )
}

pub fn factorization_to_json(f: &MatrixFactorization) -> FactorizationJson {
    let p = |i: usize, j: usize| poly_to_json(&f.g_plus_inv[i][j]);
    let r = |i: usize, j: usize| rational_to_json(&f.g_minus_inv[i][j]);
    FactorizationJson {
        n: f.n,
        phi: rational_to_json(&f.phi),
        degree_bound: f.degree_bound,
        g_plus_inv: [[p(0, 0), p(0, 1)], [p(1, 0), p(1, 1)]],
        g_minus_inv: [[r(0, 0), r(0, 1)], [r(1, 0), r(1, 1)]],
        residuals: FactorizationResidualsJson {
            system: f.residuals.system,
            determinant: f.residuals.determinant,
            consistency: f.residuals.consistency,
        },
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> C64 {
        C64::new(re, im)
    }

    #[test]
    fn rational_round_trip_is_bit_exact() {
        let f = &RationalFn::szego(c(0.1234567890123, -0.3)).unwrap()
            * &RationalFn::laurent(-2, &[c(1.0 / 3.0, 0.0), c(0.0, std::f64::consts::PI)]);
        let text = serde_json::to_string(&rational_to_json(&f)).unwrap();
        let back: RationalJson = serde_json::from_str(&text).unwrap();
        let g = rational_from_json(&back).unwrap();
        assert_eq!(rational_to_json(&g), rational_to_json(&f));
    }

    #[test]
    fn blaschke_defaults_constant() {
        let j: BlaschkeJson = serde_json::from_str(r#"{"zeros":[[0,0],[0.5,0]]}"#).unwrap();
        let b = blaschke_from_json(&j).unwrap();
        assert_eq!(b.constant(), c(1.0, 0.0));
        assert_eq!(b.degree(), 2);
    }

    #[test]
    fn unknown_fields_rejected() {
        let r: std::result::Result<BlaschkeJson, _> =
            serde_json::from_str(r#"{"zeros":[],"extra":1}"#);
        assert!(r.is_err());
    }

    #[test]
    fn matrix_shape_checked() {
        let j = MatrixJson {
            rows: 2,
            cols: 2,
            entries: vec![vec![[1.0, 0.0], [0.0, 0.0]], vec![[0.0, 0.0]]],
            domain: blaschke_to_json(&BlaschkeProduct::z_pow(2)),
            codomain: blaschke_to_json(&BlaschkeProduct::z_pow(2)),
        };
        assert!(matrix_from_json(&j).is_err());
    }
}

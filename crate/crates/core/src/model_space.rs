//! Model spaces `K_B = H^2 ⊖ B H^2` for finite Blaschke products `B`.

use nalgebra::DMatrix;

use crate::blaschke::BlaschkeProduct;
use crate::error::{Error, Result};
use crate::operators::tto_entries;
use crate::poly::ComplexPoly;
use crate::rational::{inner_product, same_point, RationalFn};
use crate::C64;

/// Relative residual below which a function counts as a member of a space.
pub const MEMBERSHIP_TOL: f64 = 1e-9;

#[derive(Clone, Debug)]
pub struct ModelSpace {
    inner: BlaschkeProduct,
    basis: Vec<RationalFn>,
}

/// Reproducing kernel `k_λ` and conjugate kernel `k̃_λ` at a point.
#[derive(Clone, Debug)]
pub struct KernelPair {
    pub k: RationalFn,
    pub k_tilde: RationalFn,
    pub lambda: C64,
}

impl ModelSpace {
    /// Builds the space with its Takenaka–Malmquist basis, taking zeros in
    /// the order stored in `inner`.
    pub fn new(inner: BlaschkeProduct) -> Self {
        let zeros = inner.zeros().to_vec();
        let basis = (0..zeros.len())
            .map(|k| {
                let a = zeros[k];
                let norm = (1.0 - a.norm_sqr()).sqrt();
                let partial = BlaschkeProduct::from_zeros(zeros[..=k].to_vec())
                    .expect("zeros were validated by the inner function");
                // e_k = sqrt(1 - |a_k|^2) prod_{j<k} (z - a_j) / prod_{j<=k} (1 - conj(a_j) z)
                partial.over_den(ComplexPoly::from_roots(&zeros[..k]).scale(C64::new(norm, 0.0)))
            })
            .collect();
        Self { inner, basis }
    }

    /// `K_{z^n}` with basis `1, z, ..., z^{n-1}`.
    pub fn z_pow(n: usize) -> Self {
        Self::new(BlaschkeProduct::z_pow(n))
    }

    pub fn inner(&self) -> &BlaschkeProduct {
        &self.inner
    }

    pub fn basis(&self) -> &[RationalFn] {
        &self.basis
    }

    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    /// Two spaces are interchangeable as operator domains when they have the
    /// same zeros in the same order (hence the same basis).
    pub fn same_as(&self, other: &ModelSpace) -> bool {
        self.dim() == other.dim()
            && self
                .inner
                .zeros()
                .iter()
                .zip(other.inner.zeros())
                .all(|(&a, &b)| same_point(a, b))
    }

    /// Gram matrix `G[i][j] = <e_j, e_i>`.
    pub fn gram(&self) -> DMatrix<C64> {
        gram_of(&self.basis)
    }

    /// Coordinates `<f, e_k>` of the orthogonal projection.
    pub fn coordinates(&self, f: &RationalFn) -> Vec<C64> {
        self.basis.iter().map(|e| inner_product(f, e)).collect()
    }

    /// The function with the given basis coordinates.
    pub fn combine(&self, coords: &[C64]) -> RationalFn {
        self.basis
            .iter()
            .zip(coords)
            .fold(RationalFn::zero(), |acc, (e, &c)| &acc + &e.scale(c))
    }

    /// Orthogonal projection `P_B f`.
    pub fn project(&self, f: &RationalFn) -> RationalFn {
        self.combine(&self.coordinates(f))
    }

    /// `Q_B f = f - P_B f`.
    pub fn complement_project(&self, f: &RationalFn) -> RationalFn {
        f - &self.project(f)
    }

    /// `|f - P_B f| / (1 + |f|)`.
    pub fn membership_residual(&self, f: &RationalFn) -> f64 {
        self.complement_project(f).norm() / (1.0 + f.norm())
    }

    pub fn contains(&self, f: &RationalFn) -> bool {
        self.membership_residual(f) < MEMBERSHIP_TOL
    }

    /// `k_λ = (1 - conj(B(λ)) B) / (1 - conj(λ) z)` and
    /// `k̃_λ = (B - B(λ)) / (z - λ)`, valid for `|λ| <= 1`.
    pub fn reproducing_kernels(&self, lambda: C64) -> Result<KernelPair> {
        if lambda.norm() > 1.0 + 1e-12 {
            return Err(Error::OutsideDisk(lambda));
        }
        let (num, den) = self.inner.num_den();
        let theta_l = self.inner.eval(lambda);

        // D - conj(B(λ)) N vanishes at 1/conj(λ), so the division is exact.
        let p = &den - &num.scale(theta_l.conj());
        let k_num = if lambda.norm() < 1e-14 {
            p
        } else {
            let (q, _) = p.deflate(1.0 / lambda.conj());
            q.scale(-1.0 / lambda.conj())
        };
        let k = self.inner.over_den(k_num);

        // N - B(λ) D vanishes at λ.
        let (q, _) = (&num - &den.scale(theta_l)).deflate(lambda);
        let k_tilde = self.inner.over_den(q);
        Ok(KernelPair { k, k_tilde, lambda })
    }
}

pub(crate) fn gram_of(fs: &[RationalFn]) -> DMatrix<C64> {
    let n = fs.len();
    DMatrix::from_fn(n, n, |i, j| inner_product(&fs[j], &fs[i]))
}

pub fn build_space(b: BlaschkeProduct) -> ModelSpace {
    ModelSpace::new(b)
}

/// The canonical multiplier `a` with `a K_source = K_target`:
/// `a = alpha_plus(target) / alpha_plus(source)`, normalized by `a(0) = 1`.
pub fn multiplier_between(source: &ModelSpace, target: &ModelSpace) -> Result<RationalFn> {
    if source.dim() != target.dim() {
        return Err(Error::NoMultiplier {
            source_dim: source.dim(),
            target_dim: target.dim(),
        });
    }
    let (_, source_den) = source.inner.num_den();
    Ok(target.inner.over_den(source_den))
}

/// Crofoot transform `J = sqrt(1 - |w|^2) / (1 - conj(w) B)`, mapping `K_B`
/// isometrically onto `K_{B_w}` with `B_w` the Frostman shift by `w`.
pub fn crofoot_multiplier(space: &ModelSpace, w: C64) -> Result<(RationalFn, ModelSpace)> {
    if !(w.norm() < 1.0) {
        return Err(Error::OutsideDisk(w));
    }
    let theta = space.inner.to_rational();
    let denom = &RationalFn::one() - &theta.scale(w.conj());
    let j = denom
        .inverse()?
        .scale(C64::new((1.0 - w.norm_sqr()).sqrt(), 0.0));
    let target = ModelSpace::new(space.inner.frostman_shift(w)?);
    Ok((j, target))
}

/// Symbol `1 - |k|^2 / |1 - h B|^2` whose compression to `K_B` vanishes exactly
/// when multiplication by `k / (1 - h B)` is isometric on `K_B`.
pub fn isometry_defect_symbol(b: &BlaschkeProduct, h: &RationalFn, k: C64) -> Result<RationalFn> {
    if !h.is_analytic_in_disk() {
        return Err(Error::InvalidSymbol(
            "h must have all poles outside the closed disk".into(),
        ));
    }
    let sup = h.sup_on_circle(256);
    if !(sup < 1.0) {
        return Err(Error::InvalidSymbol(format!(
            "sampled sup |h| = {sup} is not below 1"
        )));
    }
    if k == C64::new(0.0, 0.0) {
        return Err(Error::InvalidSymbol("k must be nonzero".into()));
    }
    let theta = b.to_rational();
    let g = &RationalFn::one() - &(h * &theta);
    let modulus_sq = &g * &g.circle_conjugate();
    let ratio = modulus_sq.inverse()?.scale(C64::new(k.norm_sqr(), 0.0));
    Ok(&RationalFn::one() - &ratio)
}

/// Largest entry of the compression of [`isometry_defect_symbol`] to `K_B`.
pub fn condition_515n_residual(b: &BlaschkeProduct, h: &RationalFn, k: C64) -> Result<f64> {
    let s = isometry_defect_symbol(b, h, k)?;
    let space = ModelSpace::new(b.clone());
    let m = tto_entries(&space, &space, &s);
    Ok(m.iter().map(|x| x.norm()).fold(0.0, f64::max))
}

/// Whether the isometry condition holds for this `(h, k)` instance, decided by
/// the vanishing of the compressed symbol to within `1e-10`.
pub fn check_condition_515n(b: &BlaschkeProduct, h: &RationalFn, k: C64) -> Result<bool> {
    Ok(condition_515n_residual(b, h, k)? < 1e-10)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::frobenius;

    fn c(re: f64, im: f64) -> C64 {
        C64::new(re, im)
    }

    fn example_alpha() -> BlaschkeProduct {
        BlaschkeProduct::from_zeros(vec![c(0.5, 0.0), c(1.0 / 3.0, 0.0)]).unwrap()
    }

    fn poly(cs: &[f64]) -> RationalFn {
        RationalFn::polynomial(ComplexPoly::from_real(cs))
    }

    #[test]
    fn basis_examples() {
        let k = ModelSpace::z_pow(2);
        assert!(k.basis()[0].coeff_residual(&poly(&[1.0])) < 1e-15);
        assert!(k.basis()[1].coeff_residual(&poly(&[0.0, 1.0])) < 1e-15);

        let half = ModelSpace::new(BlaschkeProduct::from_zeros(vec![c(0.5, 0.0)]).unwrap());
        let want = RationalFn::new(ComplexPoly::one(), ComplexPoly::from_real(&[1.0, -0.5]))
            .unwrap()
            .scale(c(3f64.sqrt() / 2.0, 0.0));
        assert!(half.basis()[0].coeff_residual(&want) < 1e-15);
        assert!((half.basis()[0].norm() - 1.0).abs() < 1e-14);

        assert_eq!(ModelSpace::new(BlaschkeProduct::one()).dim(), 0);
    }

    #[test]
    fn gram_is_identity() {
        let b =
            BlaschkeProduct::from_zeros(vec![c(0.5, 0.2), c(-0.3, 0.6), c(0.0, 0.0), c(0.5, 0.2)])
                .unwrap();
        let k = ModelSpace::new(b);
        assert!(frobenius(&(k.gram() - DMatrix::identity(4, 4))) < 1e-12);
        for e in k.basis() {
            assert!(e.antianalytic_part().is_zero());
            assert!(k.membership_residual(e) < 1e-12);
        }
    }

    #[test]
    fn kernel_examples() {
        let k = ModelSpace::z_pow(2);
        let pair = k.reproducing_kernels(c(0.0, 0.0)).unwrap();
        assert!(pair.k.coeff_residual(&poly(&[1.0])) < 1e-15);
        assert!(pair.k_tilde.coeff_residual(&poly(&[0.0, 1.0])) < 1e-15);

        let pair = k.reproducing_kernels(c(0.5, 0.0)).unwrap();
        assert!(pair.k.coeff_residual(&poly(&[1.0, 0.5])) < 1e-15);

        let alpha = example_alpha();
        let ka = ModelSpace::new(alpha.clone());
        let pair = ka.reproducing_kernels(c(0.0, 0.0)).unwrap();
        let theta = alpha.to_rational();
        let want =
            &(&theta - &RationalFn::constant(alpha.eval(c(0.0, 0.0)))) * &RationalFn::z_pow(-1);
        assert!(pair.k_tilde.distance_on_circle(&want, 32) < 1e-14);
    }

    #[test]
    fn reproducing_property() {
        let ka = ModelSpace::new(
            BlaschkeProduct::from_zeros(vec![c(0.5, 0.1), c(-0.2, -0.4), c(0.1, 0.0)]).unwrap(),
        );
        for lambda in [c(0.3, -0.1), c(-0.6, 0.2), c(0.0, 0.0)] {
            let pair = ka.reproducing_kernels(lambda).unwrap();
            assert!(ka.membership_residual(&pair.k) < 1e-12);
            assert!(ka.membership_residual(&pair.k_tilde) < 1e-12);
            for e in ka.basis() {
                assert!((inner_product(e, &pair.k) - e.eval(lambda)).norm() < 1e-12);
            }
        }
        // boundary kernel
        let pair = ka.reproducing_kernels(c(0.0, 1.0)).unwrap();
        assert!(ka.membership_residual(&pair.k) < 1e-12);
    }

    #[test]
    fn projection_examples() {
        let k = ModelSpace::z_pow(2);
        let p = k.project(&poly(&[0.0, 1.0, 0.0, 1.0]));
        assert!(p.coeff_residual(&poly(&[0.0, 1.0])) < 1e-15);
        assert!(k.project(&RationalFn::z_pow(-1)).is_zero());
        assert!(
            k.project(&poly(&[2.0, 0.0, 5.0]))
                .coeff_residual(&poly(&[2.0]))
                < 1e-15
        );

        assert!(
            k.complement_project(&poly(&[0.0, 0.0, 1.0]))
                .coeff_residual(&poly(&[0.0, 0.0, 1.0]))
                < 1e-15
        );
        assert!(k.complement_project(&poly(&[1.0])).is_zero());
        let f = &RationalFn::z_pow(-1) + &RationalFn::z();
        assert!(
            k.complement_project(&f)
                .coeff_residual(&RationalFn::z_pow(-1))
                < 1e-15
        );
    }

    #[test]
    fn multiplier_examples() {
        let a =
            multiplier_between(&ModelSpace::z_pow(2), &ModelSpace::new(example_alpha())).unwrap();
        let want = RationalFn::new(
            ComplexPoly::one(),
            &ComplexPoly::from_real(&[1.0, -0.5]) * &ComplexPoly::from_real(&[1.0, -1.0 / 3.0]),
        )
        .unwrap();
        assert!(a.coeff_residual(&want) < 1e-15);

        let ka = ModelSpace::new(example_alpha());
        assert!(
            multiplier_between(&ka, &ka)
                .unwrap()
                .coeff_residual(&RationalFn::one())
                < 1e-15
        );

        let w = c(0.3, -0.4);
        let target = ModelSpace::new(BlaschkeProduct::from_zeros(vec![w]).unwrap());
        let a = multiplier_between(&ModelSpace::z_pow(1), &target).unwrap();
        assert!(a.coeff_residual(&RationalFn::szego(w).unwrap()) < 1e-15);

        assert!(matches!(
            multiplier_between(&ModelSpace::z_pow(1), &ModelSpace::z_pow(2)),
            Err(Error::NoMultiplier { .. })
        ));
    }

    #[test]
    fn multiplier_maps_onto_target() {
        let source =
            ModelSpace::new(BlaschkeProduct::from_zeros(vec![c(0.2, 0.3), c(-0.5, 0.0)]).unwrap());
        let target =
            ModelSpace::new(BlaschkeProduct::from_zeros(vec![c(0.0, 0.6), c(0.4, -0.1)]).unwrap());
        let a = multiplier_between(&source, &target).unwrap();
        for e in source.basis() {
            assert!(target.membership_residual(&(&a * e)) < 1e-12);
        }
    }

    #[test]
    fn crofoot_examples() {
        let k = ModelSpace::z_pow(2);
        let (j, target) = crofoot_multiplier(&k, c(0.0, 0.0)).unwrap();
        assert!(j.coeff_residual(&RationalFn::one()) < 1e-15);
        assert!(target.same_as(&k));

        let (j, target) = crofoot_multiplier(&ModelSpace::z_pow(1), c(0.5, 0.0)).unwrap();
        let want = RationalFn::szego(c(0.5, 0.0))
            .unwrap()
            .scale(c(3f64.sqrt() / 2.0, 0.0));
        assert!(j.coeff_residual(&want) < 1e-15);
        assert!((target.inner().zeros()[0] - c(0.5, 0.0)).norm() < 1e-14);

        let k3 = ModelSpace::z_pow(3);
        let (j, target) = crofoot_multiplier(&k3, c(0.4, 0.0)).unwrap();
        let images: Vec<RationalFn> = k3.basis().iter().map(|e| &j * e).collect();
        assert!(frobenius(&(gram_of(&images) - DMatrix::identity(3, 3))) < 1e-12);
        for f in &images {
            assert!(target.membership_residual(f) < 1e-12);
        }
        assert!(crofoot_multiplier(&k3, c(1.0, 0.0)).is_err());
    }

    #[test]
    fn condition_515n_examples() {
        let b = BlaschkeProduct::z_pow(2);
        let h = RationalFn::constant(c(0.5, 0.0));
        assert!(check_condition_515n(&b, &h, c(0.75f64.sqrt(), 0.0)).unwrap());
        assert!(!check_condition_515n(&b, &h, c(1.0, 0.0)).unwrap());
        assert!(check_condition_515n(&b, &RationalFn::zero(), c(1.0, 0.0)).unwrap());
        assert!(check_condition_515n(&example_alpha(), &h, c(0.75f64.sqrt(), 0.0)).unwrap());
    }
}

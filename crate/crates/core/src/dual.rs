//! Dual truncated Toeplitz operators `D_φ^{γ,α} f = Q_α(φ f)` on
//! `K_γ^⊥ = γ H^2 ⊕ (H^2)^⊥`, applied to explicit rational elements.

use nalgebra::DMatrix;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::blaschke::BlaschkeProduct;
use crate::error::{Error, Result};
use crate::linalg::rank;
use crate::model_space::{multiplier_between, ModelSpace, MEMBERSHIP_TOL};
use crate::poly::ComplexPoly;
use crate::rational::{circle_points, RationalFn};
use crate::C64;

/// Number of random probe elements used by [`dual_equivalence`].
pub const PROBES: usize = 10;

/// An element `f₋ + θ f₊` of `K_θ^⊥`.
#[derive(Clone, Debug)]
pub struct ComplementElement {
    /// The `θ H^2` component, stored as the full product `θ f₊`.
    pub analytic: RationalFn,
    /// The `(H^2)^⊥` component `f₋`.
    pub antianalytic: RationalFn,
    pub theta: BlaschkeProduct,
}

/// Kernel of `D_φ^θ` for `φ = α (z - 1)`.
#[derive(Clone, Debug)]
pub struct DualKernel {
    pub basis: Vec<ComplementElement>,
    pub dim: usize,
    /// `deg(θ / γ)`
    pub k: usize,
    /// `gcd(θ, z α)`
    pub gamma: BlaschkeProduct,
}

impl ComplementElement {
    /// Validates both components before accepting them.
    pub fn new(
        theta: BlaschkeProduct,
        analytic: RationalFn,
        antianalytic: RationalFn,
    ) -> Result<Self> {
        let leak = antianalytic.analytic_part().norm();
        if !(leak <= 1e-10 * (1.0 + antianalytic.norm())) {
            return Err(Error::InvalidElement(format!(
                "antianalytic part has an H^2 component of norm {leak:.3e}"
            )));
        }
        let space = ModelSpace::new(theta.clone());
        let inside = analytic.antianalytic_part().norm();
        let model = space.project(&analytic).norm();
        if !(inside <= 1e-10 * (1.0 + analytic.norm())
            && model <= MEMBERSHIP_TOL * (1.0 + analytic.norm()))
        {
            return Err(Error::InvalidElement(format!(
                "analytic part is not in theta H^2 (residuals {inside:.3e}, {model:.3e})"
            )));
        }
        Ok(Self {
            analytic,
            antianalytic,
            theta,
        })
    }

    /// `f₋ + θ f₊` from an antianalytic `f₋` and an analytic `f₊`.
    pub fn from_factors(
        theta: BlaschkeProduct,
        f_minus: RationalFn,
        f_plus: &RationalFn,
    ) -> Result<Self> {
        let analytic = &theta.to_rational() * f_plus;
        Self::new(theta, analytic, f_minus)
    }

    pub fn to_rational(&self) -> RationalFn {
        &self.analytic + &self.antianalytic
    }

    /// Splits a rational function, assumed orthogonal to `K_θ`, into its parts.
    fn from_rational(theta: BlaschkeProduct, g: &RationalFn) -> Self {
        let split = g.split();
        Self {
            analytic: split.analytic,
            antianalytic: split.antianalytic,
            theta,
        }
    }
}

/// `|P_θ f| / (1 + |f|)`: zero exactly when `f ∈ K_θ^⊥`.
pub fn complement_residual(space: &ModelSpace, f: &RationalFn) -> f64 {
    space.project(f).norm() / (1.0 + f.norm())
}

fn compress(target: &ModelSpace, g: &RationalFn) -> RationalFn {
    target.complement_project(g)
}

/// `D_φ^{θ,α} f = Q_α(φ f)`, returned split into its `α H^2` and `(H^2)^⊥` parts.
pub fn dual_apply(
    theta: &BlaschkeProduct,
    alpha: &BlaschkeProduct,
    symbol: &RationalFn,
    f: &ComplementElement,
) -> Result<ComplementElement> {
    if f.theta.degree() != theta.degree()
        || !ModelSpace::new(theta.clone()).same_as(&ModelSpace::new(f.theta.clone()))
    {
        return Err(Error::InvalidElement(
            "element belongs to a different complement".into(),
        ));
    }
    let space = ModelSpace::new(theta.clone());
    let g = f.to_rational();
    let r = complement_residual(&space, &g);
    if !(r < MEMBERSHIP_TOL) {
        return Err(Error::InvalidElement(format!(
            "element is not orthogonal to the model space (residual {r:.3e})"
        )));
    }
    let target = ModelSpace::new(alpha.clone());
    let image = compress(&target, &(symbol * &g));
    Ok(ComplementElement::from_rational(alpha.clone(), &image))
}

/// Kernel of `D_φ^θ` for `φ = α (z - 1)`.
///
/// With `γ = gcd(θ, zα)`, `k = deg(θ/γ)` and `n = deg θ`, the kernel has
/// dimension `max(0, n - 1 - k)`. Its elements are
/// `conj(B₊ d (zα/γ) z^{j+1})` for `j = 0..n-2-k`, where
/// `B₊ = prod 1/(1 - conj(a) z)` over the zeros of `θ` and
/// `d = prod (1 - conj(w) z)` over the zeros of `θ/γ`. Every element is
/// checked against both membership conditions before it is returned.
pub fn dual_kernel(theta: &BlaschkeProduct, alpha: &BlaschkeProduct) -> Result<DualKernel> {
    let n = theta.degree();
    if n == 0 {
        return Err(Error::InvalidBlaschke(
            "theta must have degree at least 1".into(),
        ));
    }
    let mut z_alpha_zeros = alpha.zeros().to_vec();
    z_alpha_zeros.push(C64::new(0.0, 0.0));
    let z_alpha = BlaschkeProduct::new(z_alpha_zeros, alpha.constant())?;
    let gamma = theta.gcd(&z_alpha);
    let theta_over_gamma = theta.quotient(&gamma)?;
    let k = theta_over_gamma.degree();
    if n <= k + 1 {
        return Ok(DualKernel {
            basis: Vec::new(),
            dim: 0,
            k,
            gamma,
        });
    }

    let b_plus = theta.alpha_plus();
    let d = RationalFn::polynomial(theta_over_gamma.num_den().1);
    let cofactor = z_alpha.quotient(&gamma)?.to_rational();
    let base = &(&b_plus * &d) * &cofactor;

    let space = ModelSpace::new(theta.clone());
    let phi = &alpha.to_rational() * &RationalFn::polynomial(ComplexPoly::from_real(&[-1.0, 1.0]));
    let mut basis = Vec::with_capacity(n - 1 - k);
    for j in 0..(n - 1 - k) {
        let f = (&base * &RationalFn::z_pow(j as i32 + 1)).circle_conjugate();
        let complement = complement_residual(&space, &f);
        let image = space.membership_residual(&(&phi * &f));
        if !(complement < MEMBERSHIP_TOL && image < MEMBERSHIP_TOL) {
            return Err(Error::FormulaMismatch { complement, image });
        }
        basis.push(ComplementElement::from_rational(theta.clone(), &f));
    }
    Ok(DualKernel {
        dim: basis.len(),
        basis,
        k,
        gamma,
    })
}

/// A random element `f₋ + θ f₊` of `K_θ^⊥` with low-degree rational parts.
pub fn random_complement_element(theta: &BlaschkeProduct, rng: &mut impl Rng) -> ComplementElement {
    let mut gauss = || C64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0));
    let f_minus = RationalFn::laurent(-3, &[gauss(), gauss(), gauss()]);
    let f_plus = RationalFn::polynomial(ComplexPoly::new(vec![gauss(), gauss()]));
    let analytic = &theta.to_rational() * &f_plus;
    ComplementElement {
        analytic,
        antianalytic: f_minus,
        theta: theta.clone(),
    }
}

/// The symbols realizing the dual equivalence: `(a₁^-1, conj(a₂)^-1, φ̃)`,
/// with `a₁ = conj(m₁)^-1`, `m₁ K_η = K_θ`, and likewise `a₂` from `m₂ K_γ = K_α`.
pub fn dual_equivalence_symbols(
    theta: &BlaschkeProduct,
    alpha: &BlaschkeProduct,
    eta: &BlaschkeProduct,
    gamma: &BlaschkeProduct,
    symbol: &RationalFn,
) -> Result<(RationalFn, RationalFn, RationalFn)> {
    let m1 = multiplier_between(
        &ModelSpace::new(eta.clone()),
        &ModelSpace::new(theta.clone()),
    )?;
    let m2 = multiplier_between(
        &ModelSpace::new(gamma.clone()),
        &ModelSpace::new(alpha.clone()),
    )?;
    let a1_inv = m1.circle_conjugate();
    let a1 = m1.inverse()?.circle_conjugate();
    let a2_bar = m2.inverse()?;
    let a2_bar_inv = m2;
    let tilde = &(&a2_bar * symbol) * &a1;
    Ok((a1_inv, a2_bar_inv, tilde))
}

/// Maximum sampled residual, relative to `1 + max |lhs|`, of
/// `D_φ^{θ,α} f - D_{conj(a₂)^-1}^{γ,α} D_φ̃^{η,γ} D_{a₁^-1}^{θ,η} f` over
/// [`PROBES`] random elements `f` of `K_θ^⊥`.
pub fn dual_equivalence(
    theta: &BlaschkeProduct,
    alpha: &BlaschkeProduct,
    eta: &BlaschkeProduct,
    gamma: &BlaschkeProduct,
    symbol: &RationalFn,
) -> Result<f64> {
    let (_, _, tilde) = dual_equivalence_symbols(theta, alpha, eta, gamma, symbol)?;
    dual_equivalence_with(theta, alpha, eta, gamma, symbol, &tilde)
}

/// Like [`dual_equivalence`] but with a caller-supplied middle symbol.
pub fn dual_equivalence_with(
    theta: &BlaschkeProduct,
    alpha: &BlaschkeProduct,
    eta: &BlaschkeProduct,
    gamma: &BlaschkeProduct,
    symbol: &RationalFn,
    tilde: &RationalFn,
) -> Result<f64> {
    if theta.degree() != eta.degree() || alpha.degree() != gamma.degree() {
        return Err(Error::NoMultiplier {
            source_dim: theta.degree(),
            target_dim: eta.degree(),
        });
    }
    let (a1_inv, a2_bar_inv, _) = dual_equivalence_symbols(theta, alpha, eta, gamma, symbol)?;
    let k_alpha = ModelSpace::new(alpha.clone());
    let k_eta = ModelSpace::new(eta.clone());
    let k_gamma = ModelSpace::new(gamma.clone());
    let samples = circle_points(64);
    let mut rng = ChaCha8Rng::seed_from_u64(0x5eed);
    let (mut worst, mut size): (f64, f64) = (0.0, 0.0);
    for _ in 0..PROBES {
        let f = random_complement_element(theta, &mut rng).to_rational();
        let lhs = compress(&k_alpha, &(symbol * &f));
        let step1 = compress(&k_eta, &(&a1_inv * &f));
        let step2 = compress(&k_gamma, &(tilde * &step1));
        let rhs = compress(&k_alpha, &(&a2_bar_inv * &step2));
        for &z in &samples {
            let v = lhs.eval(z);
            size = size.max(v.norm());
            worst = worst.max((v - rhs.eval(z)).norm());
        }
    }
    Ok(worst / (1.0 + size))
}

/// Rank of the Hankel matrix `[f^(-i-j-1)]` of size `max_n`.
pub fn hankel_rank(symbol: &RationalFn, max_n: usize) -> usize {
    let anti = symbol.antianalytic_part();
    let coeffs: Vec<C64> = (1..2 * max_n)
        .map(|m| anti.fourier_coefficient(-(m as i32)))
        .collect();
    let h = DMatrix::from_fn(max_n, max_n, |i, j| coeffs[i + j]);
    rank(&h)
}

//! Matrices of (asymmetric) truncated Toeplitz operators `A_φ^{γ,α} f = P_α(φ f)`
//! in Takenaka–Malmquist bases, and the equivalences between them.

use std::sync::Arc;

use nalgebra::{DMatrix, DVector};

use crate::blaschke::BlaschkeProduct;
use crate::error::{Error, Result};
use crate::linalg::{cond, conj, frobenius, full_svd, inverse, max_abs, null_space, rank_of};
use crate::model_space::{multiplier_between, ModelSpace, MEMBERSHIP_TOL};
use crate::rational::RationalFn;
use crate::C64;

/// Tolerance for a compressed symbol to count as the zero operator.
pub const ZERO_SYMBOL_TOL: f64 = 1e-10;

/// Tolerance for complex selfadjointness checks.
pub const SELFADJOINT_TOL: f64 = 1e-9;

/// A dense matrix with the model spaces it maps between.
#[derive(Clone, Debug)]
pub struct OperatorMatrix {
    pub entries: DMatrix<C64>,
    pub domain: Arc<ModelSpace>,
    pub codomain: Arc<ModelSpace>,
}

/// Matrix `J` of an antilinear map `v -> J conj(v)` on a model space.
#[derive(Clone, Debug)]
pub struct ConjugationMatrix {
    pub j: DMatrix<C64>,
    pub space: Arc<ModelSpace>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum PullbackMode {
    /// `F^-1 J conj(F)`
    ViaF,
    /// `F^H J conj(F)`
    ViaEF,
}

/// Output of [`equivalence_transform`]: `A_φ^{θ,α} = E A_φ̃^{η,γ} F`.
#[derive(Clone, Debug)]
pub struct Equivalence {
    pub lhs: OperatorMatrix,
    pub e: OperatorMatrix,
    pub middle: OperatorMatrix,
    pub f: OperatorMatrix,
    pub tilde_symbol: RationalFn,
    /// `|A - E Ã F|_F / (1 + |A|_F)`
    pub residual: f64,
    pub cond_e: f64,
    pub cond_f: f64,
}

/// Output of [`rank_equivalence`]: `A = E B F`.
#[derive(Clone, Debug)]
pub struct RankEquivalence {
    pub e: DMatrix<C64>,
    pub f: DMatrix<C64>,
    pub rank: usize,
    /// `|A - E B F|_F / (1 + |A|_F)`
    pub residual: f64,
    pub cond_e: f64,
    pub cond_f: f64,
}

impl OperatorMatrix {
    pub fn rows(&self) -> usize {
        self.entries.nrows()
    }

    pub fn cols(&self) -> usize {
        self.entries.ncols()
    }

    /// `self ∘ rhs`, defined when `rhs` lands in `self`'s domain.
    pub fn compose(&self, rhs: &OperatorMatrix) -> Result<OperatorMatrix> {
        if !self.domain.same_as(&rhs.codomain) {
            return Err(Error::SpaceMismatch(
                "composition requires matching inner spaces".into(),
            ));
        }
        Ok(OperatorMatrix {
            entries: &self.entries * &rhs.entries,
            domain: rhs.domain.clone(),
            codomain: self.codomain.clone(),
        })
    }

    /// Applies the operator to a function of the domain via its coordinates.
    pub fn apply(&self, f: &RationalFn) -> RationalFn {
        let x = DVector::from_vec(self.domain.coordinates(f));
        let y = &self.entries * x;
        self.codomain.combine(y.as_slice())
    }
}

/// `entries[i][j] = <φ e_j, f_i>` for bases `e` of the domain and `f` of the codomain.
pub fn tto_entries(
    domain: &ModelSpace,
    codomain: &ModelSpace,
    symbol: &RationalFn,
) -> DMatrix<C64> {
    let conj_basis: Vec<RationalFn> = codomain
        .basis()
        .iter()
        .map(|e| e.circle_conjugate())
        .collect();
    let mut m = DMatrix::<C64>::zeros(codomain.dim(), domain.dim());
    for (j, e) in domain.basis().iter().enumerate() {
        let image = symbol * e;
        if image.is_zero() {
            continue;
        }
        for (i, fc) in conj_basis.iter().enumerate() {
            m[(i, j)] = (&image * fc).mean();
        }
    }
    m
}

pub fn tto_matrix(
    domain: &Arc<ModelSpace>,
    codomain: &Arc<ModelSpace>,
    symbol: &RationalFn,
) -> OperatorMatrix {
    OperatorMatrix {
        entries: tto_entries(domain, codomain, symbol),
        domain: domain.clone(),
        codomain: codomain.clone(),
    }
}

/// Largest membership residual of `a e_j` in `codomain` over the domain basis.
pub fn multiplier_range_residual(
    domain: &ModelSpace,
    codomain: &ModelSpace,
    a: &RationalFn,
) -> f64 {
    domain
        .basis()
        .iter()
        .map(|e| codomain.membership_residual(&(a * e)))
        .fold(0.0, f64::max)
}

/// Matrix of `f -> a f` from `domain` into `codomain`, after checking the range.
pub fn multiplication_matrix(
    domain: &Arc<ModelSpace>,
    codomain: &Arc<ModelSpace>,
    a: &RationalFn,
) -> Result<OperatorMatrix> {
    let residual = multiplier_range_residual(domain, codomain, a);
    if !(residual < MEMBERSHIP_TOL) {
        return Err(Error::MultiplierRangeViolation { residual });
    }
    Ok(tto_matrix(domain, codomain, a))
}

/// Whether `A_φ^{domain,codomain}` vanishes, i.e. `φ ∈ conj(γ H^2) + α H^2`.
pub fn is_zero_symbol(domain: &ModelSpace, codomain: &ModelSpace, symbol: &RationalFn) -> bool {
    let m = tto_entries(domain, codomain, symbol);
    max_abs(&m) < ZERO_SYMBOL_TOL * (1.0 + symbol.sup_on_circle(256))
}

/// Realizes `A_φ^{θ,α} = A_{conj(a₂)^-1}^{γ,α} A_φ̃^{η,γ} A_{a₁^-1}^{θ,η}` with
/// `φ̃ = conj(a₂) φ a₁`.
///
/// Orientation: `a₁ K_η = K_θ` and `a₂ K_γ = K_α`, both the canonical
/// multipliers, so `F` multiplies by `a₁^-1` from `K_θ` onto `K_η`.
pub fn equivalence_transform(
    theta: &BlaschkeProduct,
    alpha: &BlaschkeProduct,
    eta: &BlaschkeProduct,
    gamma: &BlaschkeProduct,
    symbol: &RationalFn,
) -> Result<Equivalence> {
    let k_theta = Arc::new(ModelSpace::new(theta.clone()));
    let k_alpha = Arc::new(ModelSpace::new(alpha.clone()));
    let k_eta = Arc::new(ModelSpace::new(eta.clone()));
    let k_gamma = Arc::new(ModelSpace::new(gamma.clone()));

    let a1 = multiplier_between(&k_eta, &k_theta)?;
    let a1_inv = multiplier_between(&k_theta, &k_eta)?;
    let a2 = multiplier_between(&k_gamma, &k_alpha)?;
    let a2_inv = multiplier_between(&k_alpha, &k_gamma)?;

    let tilde_symbol = &(&a2.circle_conjugate() * symbol) * &a1;
    let lhs = tto_matrix(&k_theta, &k_alpha, symbol);
    let e = tto_matrix(&k_gamma, &k_alpha, &a2_inv.circle_conjugate());
    let middle = tto_matrix(&k_eta, &k_gamma, &tilde_symbol);
    let f = multiplication_matrix(&k_theta, &k_eta, &a1_inv)?;

    let rhs = &e.entries * &middle.entries * &f.entries;
    let residual = frobenius(&(&lhs.entries - rhs)) / (1.0 + frobenius(&lhs.entries));
    let cond_e = cond(&e.entries);
    let cond_f = cond(&f.entries);
    Ok(Equivalence {
        lhs,
        e,
        middle,
        f,
        tilde_symbol,
        residual,
        cond_e,
        cond_f,
    })
}

/// Residual `|A_{ψφ}^{K₁,K₂} - A_ψ^{H,K₂} A_φ^{K₁,H}|_F`, guaranteed small when
/// `φ K₁ ⊂ H`. If that hypothesis fails the residual is returned inside
/// [`Error::HypothesisViolated`].
pub fn brown_halmos_product(
    k1: &ModelSpace,
    mid: &ModelSpace,
    k2: &ModelSpace,
    psi: &RationalFn,
    phi: &RationalFn,
) -> Result<f64> {
    let whole = tto_entries(k1, k2, &(psi * phi));
    let product = tto_entries(mid, k2, psi) * tto_entries(k1, mid, phi);
    let residual = frobenius(&(whole - product));
    let membership = multiplier_range_residual(k1, mid, phi);
    if membership < MEMBERSHIP_TOL {
        Ok(residual)
    } else {
        Err(Error::HypothesisViolated {
            membership,
            residual,
        })
    }
}

/// The conjugation `C f = B conj(z f)` on `K_B` as `J[i][j] = <C e_j, e_i>`.
pub fn conjugation_matrix(space: &Arc<ModelSpace>) -> ConjugationMatrix {
    let theta_over_z = &space.inner().to_rational() * &RationalFn::z_pow(-1);
    let images: Vec<RationalFn> = space
        .basis()
        .iter()
        .map(|e| &theta_over_z * &e.circle_conjugate())
        .collect();
    let n = space.dim();
    let mut j = DMatrix::<C64>::zeros(n, n);
    for (col, img) in images.iter().enumerate() {
        for (row, c) in space.coordinates(img).into_iter().enumerate() {
            j[(row, col)] = c;
        }
    }
    ConjugationMatrix {
        j,
        space: space.clone(),
    }
}

impl ConjugationMatrix {
    /// `|J^H J - I|_F`
    pub fn isometry_defect(&self) -> f64 {
        let n = self.j.nrows();
        frobenius(&(self.j.adjoint() * &self.j - DMatrix::identity(n, n)))
    }

    /// `|J conj(J) - I|_F`, zero for an involution.
    pub fn involution_defect(&self) -> f64 {
        let n = self.j.nrows();
        frobenius(&(&self.j * conj(&self.j) - DMatrix::identity(n, n)))
    }
}

/// `|J conj(A) J^-1 - A^H|_F / (1 + |A|_F)`, the matrix form of `C A C^-1 = A*`.
pub fn selfadjoint_residual(a: &OperatorMatrix, c: &ConjugationMatrix) -> Result<f64> {
    if !a.domain.same_as(&c.space) || !a.codomain.same_as(&c.space) {
        return Err(Error::SpaceMismatch(
            "operator and conjugation act on different spaces".into(),
        ));
    }
    let j_inv = inverse(&c.j).ok_or(Error::Singular {
        cond: f64::INFINITY,
    })?;
    let lhs = &c.j * conj(&a.entries) * j_inv;
    Ok(frobenius(&(lhs - a.entries.adjoint())) / (1.0 + frobenius(&a.entries)))
}

pub fn is_complex_selfadjoint(a: &OperatorMatrix, c: &ConjugationMatrix) -> Result<bool> {
    Ok(selfadjoint_residual(a, c)? < SELFADJOINT_TOL)
}

/// Pulls a conjugation on `F`'s codomain back to `F`'s domain.
pub fn conjugation_pullback(
    c: &ConjugationMatrix,
    f: &OperatorMatrix,
    mode: PullbackMode,
) -> Result<ConjugationMatrix> {
    if !f.codomain.same_as(&c.space) {
        return Err(Error::SpaceMismatch(
            "F must map into the conjugation's space".into(),
        ));
    }
    let j = match mode {
        PullbackMode::ViaF => {
            let k = cond(&f.entries);
            if !(k < 1e12) {
                return Err(Error::Singular { cond: k });
            }
            let f_inv = inverse(&f.entries).ok_or(Error::Singular { cond: k })?;
            f_inv * &c.j * conj(&f.entries)
        }
        PullbackMode::ViaEF => f.entries.adjoint() * &c.j * conj(&f.entries),
    };
    Ok(ConjugationMatrix {
        j,
        space: f.domain.clone(),
    })
}

/// `|J conj(F F^H) - F F^H J|_F`; zero when the pullback is an antilinear unitary.
pub fn pullback_commutation_residual(c: &ConjugationMatrix, f: &OperatorMatrix) -> f64 {
    let ffh = &f.entries * f.entries.adjoint();
    frobenius(&(&c.j * conj(&ffh) - &ffh * &c.j))
}

/// Invertible `E`, `F` with `A = E B F`, which exist exactly when the ranks agree.
pub fn rank_equivalence(a: &DMatrix<C64>, b: &DMatrix<C64>) -> Result<RankEquivalence> {
    if a.shape() != b.shape() || a.nrows() != a.ncols() {
        return Err(Error::SpaceMismatch(format!(
            "rank equivalence needs square matrices of one size, got {:?} and {:?}",
            a.shape(),
            b.shape()
        )));
    }
    let n = a.nrows();
    let sa = full_svd(a);
    let sb = full_svd(b);
    let (ra, rb) = (rank_of(&sa.s), rank_of(&sb.s));
    if ra != rb {
        return Err(Error::NotEquivalent {
            rank_a: ra,
            rank_b: rb,
        });
    }
    // A = U_A S_A V_A^H, B = U_B S_B V_B^H, D S_B = S_A on the rank block.
    let d = DMatrix::<C64>::from_fn(n, n, |i, j| {
        if i != j {
            C64::new(0.0, 0.0)
        } else if i < ra {
            C64::new(sa.s[i] / sb.s[i], 0.0)
        } else {
            C64::new(1.0, 0.0)
        }
    });
    let e = &sa.u * d * sb.u.adjoint();
    let f = &sb.v * sa.v.adjoint();
    let residual = frobenius(&(a - &e * b * &f)) / (1.0 + frobenius(a));
    let cond_e = cond(&e);
    let cond_f = cond(&f);
    Ok(RankEquivalence {
        e,
        f,
        rank: ra,
        residual,
        cond_e,
        cond_f,
    })
}

/// Orthonormal kernel basis (coordinate vectors) and rank.
pub fn kernel_and_range(a: &OperatorMatrix) -> (Vec<DVector<C64>>, usize) {
    null_space(&a.entries)
}

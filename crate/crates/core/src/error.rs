use thiserror::Error;

use crate::C64;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("division by the zero function")]
    DivisionByZero,

    #[error("pole {pole} lies on the unit circle (| |p| - 1 | = {distance:.3e})")]
    PoleOnCircle { pole: C64, distance: f64 },

    #[error("poles {inside} and {outside} straddle the unit circle too closely to separate; adjust the input")]
    AmbiguousPoles { inside: C64, outside: C64 },

    #[error("invalid Blaschke product: {0}")]
    InvalidBlaschke(String),

    #[error("|{0}| must be < 1")]
    OutsideDisk(C64),

    #[error("invalid symbol: {0}")]
    InvalidSymbol(String),

    #[error("no multiplier between model spaces of dimensions {source_dim} and {target_dim}")]
    NoMultiplier {
        source_dim: usize,
        target_dim: usize,
    },

    #[error("multiplication by the given function leaves the codomain (residual {residual:.3e})")]
    MultiplierRangeViolation { residual: f64 },

    #[error("multiplier hypothesis fails (membership residual {membership:.3e}); product residual {residual:.3e} carries no guarantee")]
    HypothesisViolated { membership: f64, residual: f64 },

    #[error("space mismatch: {0}")]
    SpaceMismatch(String),

    #[error("matrices are not equivalent: rank {rank_a} vs rank {rank_b}")]
    NotEquivalent { rank_a: usize, rank_b: usize },

    #[error("matrix is singular or ill-conditioned (condition number {cond:.3e})")]
    Singular { cond: f64 },

    #[error("kernel candidate failed verification (complement residual {complement:.3e}, image residual {image:.3e})")]
    FormulaMismatch { complement: f64, image: f64 },

    #[error("no canonical Wiener-Hopf factorization: the operator is not invertible")]
    NoCanonicalFactorization,

    #[error(
        "no factorization found with polynomial degree up to {cap}, yet the operator is invertible"
    )]
    FactorizationUndetermined { cap: usize },

    #[error("invalid element: {0}")]
    InvalidElement(String),

    #[error("parse error at position {position}: {message}")]
    Parse { position: usize, message: String },

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

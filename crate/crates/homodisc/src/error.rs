//! Error type shared by all modules.

use thiserror::Error;

/// Errors reported by bundle, kernel and operator constructions.
#[derive(Debug, Error)]
pub enum Error {
    /// Dimensions of the supplied data do not match the block type.
    #[error("shape mismatch: {0}")]
    Shape(String),

    /// A matrix that must be Hermitian is not, beyond tolerance.
    #[error("matrix is not Hermitian: residual {residual:.3e} exceeds {tol:.3e}")]
    NotHermitian { residual: f64, tol: f64 },

    /// A matrix that must be positive definite is not.
    #[error("matrix is not positive definite (smallest eigenvalue {min_eigenvalue:.3e})")]
    NotPositiveDefinite { min_eigenvalue: f64 },

    /// A matrix that must be invertible is singular or too badly conditioned.
    #[error("matrix is singular or ill-conditioned (cond {cond:.3e})")]
    Singular { cond: f64 },

    /// A parameter is outside the admissible range.
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    /// Evaluation requested outside the open unit disc.
    #[error("point lies outside the unit disc (|z| = {modulus})")]
    OutsideDisc { modulus: f64 },

    /// The principal branch of the fractional power is not defined here.
    #[error("branch violation: Re(conj(b) z + conj(a)) = {real_part:.3e} <= 0")]
    BranchViolation { real_part: f64 },

    /// The truncation degree is too small for the requested computation.
    #[error("truncation inadequate: {0}")]
    Truncation(String),

    /// An operation that requires irreducible input received a reducible one.
    #[error("input is reducible; decompose it into irreducible summands first")]
    ReducibleInput,

    /// The doubling search for a membership threshold hit its cap.
    #[error("threshold search failed: no membership below eta = {cap}")]
    ThresholdSearchFailed { cap: f64 },
}

pub type Result<T> = std::result::Result<T, Error>;

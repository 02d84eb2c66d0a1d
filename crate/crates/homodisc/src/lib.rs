//! Homogeneous Hermitian holomorphic vector bundles on the unit disc,
//! their reproducing kernels, and the associated multiplication operators.
//!
//! A pair `(eta, Y)` — a real parameter together with a strictly
//! block-subdiagonal chain `Y` — determines a homogeneous holomorphic
//! vector bundle on the disc. This crate constructs these bundles
//! numerically at desk scale and exposes the computations that matter for
//! their classification:
//!
//! * [`bundle`] — validation of parameters, the representation pair
//!   `(rho(h), rho(y))`, irreducibility of the chain, equivalence and
//!   unitary equivalence of parameters, membership of `(eta, Y)` in the
//!   positivity set where a reproducing kernel exists, and the membership
//!   threshold in `eta`.
//! * [`mobius`] — disc automorphisms near the identity, their derivative
//!   cocycle data, and the block lower-triangular multiplier `J_g(z)`
//!   implementing the group action on sections.
//! * [`kernel`] — the weighted Bergman spaces, the intertwining operator
//!   `Gamma` onto bundle sections, truncated reproducing-kernel series,
//!   the Hermitian metric and a curvature invariant at the origin.
//! * [`operator`] — the multiplication operator in a transported
//!   orthonormal basis: isotypic grading, block-shift structure, and the
//!   `M_n ~ I + O(1/n)` asymptotics that witness the Hilbert-Schmidt
//!   decomposition.
//! * [`algebra`] — the shared numeric substrate.
//!
//! The `guide` module mirrors the chapters of the mdbook under `book/`;
//! every code listing in the book is compiled and run as a doc-test.
//!
//! # Example
//!
//! Scalar chain `d = (1, 1)`, `Y_1 = y`: membership in the positivity set
//! is `2 eta > |y|^2`, and the threshold is recovered numerically.
//!
//! ```
//! use homodisc::algebra::{cx, SubdiagonalY};
//! use homodisc::bundle::eta_threshold;
//!
//! let y = SubdiagonalY::scalar_chain(&[cx(2.0, 0.0)]);
//! let report = eta_threshold(&y, 1e-10).unwrap();
//! assert!((report.eta_hat - 2.0).abs() < 1e-9);
//! ```

pub mod algebra;
pub mod bundle;
pub mod error;
pub mod guide;
pub mod kernel;
pub mod mobius;
pub mod operator;

pub use error::{Error, Result};

/// Default comparison tolerance for residual checks.
pub const DEFAULT_TOL: f64 = 1e-9;
/// Tolerance below which a Hermitian-flagged matrix must equal its adjoint.
pub const HERMITIAN_TOL: f64 = 1e-12;
/// Smallest eigenvalue a matrix must exceed to count as positive definite.
pub const POSITIVITY_TOL: f64 = 1e-10;
/// Relative singular-value threshold for rank and null-space decisions.
pub const NULLSPACE_RTOL: f64 = 1e-8;
/// Condition-number bound above which a matrix is treated as singular.
pub const COND_LIMIT: f64 = 1e12;
/// Largest modulus at which truncated kernel series are evaluated.
pub const MAX_EVAL_RADIUS: f64 = 0.8;

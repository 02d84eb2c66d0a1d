//! Numeric substrate: complex dense matrices, block-structured matrices,
//! vector-coefficient polynomials, truncated two-variable series and the
//! factorial coefficients used by every other module.
//!
//! All values are immutable after construction and every operation is a pure
//! function of its inputs.

pub mod block;
pub mod matrix;
pub mod poly;
pub mod series;
pub mod special;

pub use block::{BlockDiagonal, BlockType, SubdiagonalY};
pub use matrix::{
    cx, hermitian_eigen, hermitian_eigenvalues, hermitian_part, is_positive_definite, max_abs,
    CMat, CVec,
};
pub use poly::VecPoly;
pub use series::TwoVariableSeries;
pub use special::{factorial, falling, pochhammer};

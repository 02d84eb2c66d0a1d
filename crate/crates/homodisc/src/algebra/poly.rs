//! Polynomials in one variable with complex vector coefficients.

use num_complex::Complex64;

use super::matrix::{CMat, CVec};
use super::special::falling;
use crate::error::{Error, Result};

/// Polynomial `sum_p c_p z^p` whose coefficients are vectors in `C^dim`.
///
/// Coefficients are stored densely from degree 0 up to the formal degree;
/// zero coefficients are kept, so iterating over `coeffs` visits every
/// degree slot that has been computed.
#[derive(Debug, Clone, PartialEq)]
pub struct VecPoly {
    dim: usize,
    coeffs: Vec<CVec>,
}

impl VecPoly {
    /// The zero polynomial (a single zero coefficient).
    pub fn zero(dim: usize) -> Self {
        VecPoly { dim, coeffs: vec![CVec::zeros(dim)] }
    }

    /// Monomial `v z^p`.
    pub fn monomial(p: usize, v: CVec) -> Self {
        let dim = v.len();
        let mut coeffs = vec![CVec::zeros(dim); p + 1];
        coeffs[p] = v;
        VecPoly { dim, coeffs }
    }

    pub fn from_coeffs(dim: usize, coeffs: Vec<CVec>) -> Result<Self> {
        if coeffs.is_empty() {
            return Ok(Self::zero(dim));
        }
        if coeffs.iter().any(|c| c.len() != dim) {
            return Err(Error::Shape("coefficient dimension mismatch".into()));
        }
        Ok(VecPoly { dim, coeffs })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    /// Formal degree (index of the last stored coefficient).
    pub fn formal_degree(&self) -> usize {
        self.coeffs.len() - 1
    }

    /// Coefficient of `z^p` (zero beyond the stored range).
    pub fn coeff(&self, p: usize) -> CVec {
        self.coeffs.get(p).cloned().unwrap_or_else(|| CVec::zeros(self.dim))
    }

    pub fn coeffs(&self) -> &[CVec] {
        &self.coeffs
    }

    /// Exact `k`-th formal derivative.
    pub fn derivative(&self, k: usize) -> VecPoly {
        if k > self.formal_degree() {
            return VecPoly::zero(self.dim);
        }
        let coeffs: Vec<CVec> = (k..self.coeffs.len())
            .map(|p| &self.coeffs[p] * Complex64::from(falling(p as u32, k as u32)))
            .collect();
        VecPoly { dim: self.dim, coeffs }
    }

    /// Multiplication by `z` (shifts every degree up by one).
    pub fn mul_z(&self) -> VecPoly {
        let mut coeffs = Vec::with_capacity(self.coeffs.len() + 1);
        coeffs.push(CVec::zeros(self.dim));
        coeffs.extend(self.coeffs.iter().cloned());
        VecPoly { dim: self.dim, coeffs }
    }

    pub fn scale(&self, factor: Complex64) -> VecPoly {
        VecPoly {
            dim: self.dim,
            coeffs: self.coeffs.iter().map(|c| c * factor).collect(),
        }
    }

    /// Applies a matrix to every coefficient, changing the value dimension.
    pub fn map_matrix(&self, a: &CMat) -> Result<VecPoly> {
        if a.ncols() != self.dim {
            return Err(Error::Shape("matrix does not act on coefficient space".into()));
        }
        Ok(VecPoly {
            dim: a.nrows(),
            coeffs: self.coeffs.iter().map(|c| a * c).collect(),
        })
    }

    pub fn add(&self, other: &VecPoly) -> Result<VecPoly> {
        if other.dim != self.dim {
            return Err(Error::Shape("polynomial dimensions differ".into()));
        }
        let len = self.coeffs.len().max(other.coeffs.len());
        let coeffs = (0..len).map(|p| self.coeff(p) + other.coeff(p)).collect();
        Ok(VecPoly { dim: self.dim, coeffs })
    }

    pub fn sub(&self, other: &VecPoly) -> Result<VecPoly> {
        self.add(&other.scale(Complex64::new(-1.0, 0.0)))
    }

    /// Horner evaluation at `z`.
    pub fn eval(&self, z: Complex64) -> CVec {
        let mut acc = CVec::zeros(self.dim);
        for c in self.coeffs.iter().rev() {
            acc = acc * z + c;
        }
        acc
    }

    /// Largest coefficient entry modulus.
    pub fn max_abs(&self) -> f64 {
        self.coeffs
            .iter()
            .fold(0.0, |acc, c| c.iter().fold(acc, |a, v| a.max(v.norm())))
    }
}

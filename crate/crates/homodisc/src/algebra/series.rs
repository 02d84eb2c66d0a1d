//! Truncated two-variable series with matrix coefficients.

use num_complex::Complex64;

use super::matrix::{max_abs, CMat};
use crate::error::{Error, Result};

/// Truncated expansion `K(z, w) = sum_{p,q <= deg} C_{p,q} z^p conj(w)^q`
/// with `dim x dim` matrix coefficients.
#[derive(Debug, Clone)]
pub struct TwoVariableSeries {
    dim: usize,
    deg: usize,
    coeffs: Vec<CMat>,
}

impl TwoVariableSeries {
    pub fn zeros(dim: usize, deg: usize) -> Self {
        TwoVariableSeries {
            dim,
            deg,
            coeffs: vec![CMat::zeros(dim, dim); (deg + 1) * (deg + 1)],
        }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn deg(&self) -> usize {
        self.deg
    }

    fn index(&self, p: usize, q: usize) -> usize {
        p * (self.deg + 1) + q
    }

    pub fn coeff(&self, p: usize, q: usize) -> &CMat {
        assert!(p <= self.deg && q <= self.deg);
        &self.coeffs[self.index(p, q)]
    }

    pub fn coeff_mut(&mut self, p: usize, q: usize) -> &mut CMat {
        assert!(p <= self.deg && q <= self.deg);
        let i = self.index(p, q);
        &mut self.coeffs[i]
    }

    /// Largest deviation from the Hermitian symmetry `C_{p,q} = C_{q,p}^*`.
    pub fn hermitian_symmetry_residual(&self) -> f64 {
        let mut worst = 0.0f64;
        for p in 0..=self.deg {
            for q in p..=self.deg {
                let diff = self.coeff(p, q) - self.coeff(q, p).adjoint();
                worst = worst.max(max_abs(&diff));
            }
        }
        worst
    }

    /// Evaluates the truncated series; the caller is responsible for keeping
    /// `|z|`, `|w|` inside the radius where the truncation is adequate.
    pub fn eval(&self, z: Complex64, w: Complex64) -> CMat {
        let mut zp = Vec::with_capacity(self.deg + 1);
        let mut wq = Vec::with_capacity(self.deg + 1);
        let wbar = w.conj();
        let mut az = Complex64::new(1.0, 0.0);
        let mut aw = Complex64::new(1.0, 0.0);
        for _ in 0..=self.deg {
            zp.push(az);
            wq.push(aw);
            az *= z;
            aw *= wbar;
        }
        let mut acc = CMat::zeros(self.dim, self.dim);
        for p in 0..=self.deg {
            for q in 0..=self.deg {
                let s = zp[p] * wq[q];
                if s.norm_sqr() > 0.0 {
                    acc += self.coeff(p, q).map(|v| v * s);
                }
            }
        }
        acc
    }

    /// Ratio of the outermost retained coefficient band to the partial sum,
    /// both weighted at radius `r`; a crude tail-adequacy indicator.
    pub fn tail_ratio(&self, r: f64) -> f64 {
        let mut band = 0.0f64;
        let mut bulk = 0.0f64;
        for p in 0..=self.deg {
            for q in 0..=self.deg {
                let weight = r.powi((p + q) as i32);
                let size = max_abs(self.coeff(p, q)) * weight;
                if p == self.deg || q == self.deg {
                    band += size;
                } else {
                    bulk += size;
                }
            }
        }
        if bulk > 0.0 {
            band / bulk
        } else if band > 0.0 {
            f64::INFINITY
        } else {
            0.0
        }
    }

    /// Checks the symmetry invariant and returns an error when it fails.
    pub fn ensure_hermitian_symmetric(&self, tol: f64) -> Result<()> {
        let residual = self.hermitian_symmetry_residual();
        if residual > tol {
            return Err(Error::NotHermitian { residual, tol });
        }
        Ok(())
    }
}

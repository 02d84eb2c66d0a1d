//! Dense complex matrices and the Hermitian primitives built on them.
//!
//! Everything here is a thin layer over `nalgebra`'s dense complex kernels
//! (Cholesky, Hermitian eigendecomposition, SVD). Matrices are small
//! (n at most a few hundred) and double precision throughout.

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;
use rand::Rng;

use crate::error::{Error, Result};
use crate::HERMITIAN_TOL;

/// Dense complex matrix used throughout the crate.
pub type CMat = DMatrix<Complex64>;
/// Dense complex column vector.
pub type CVec = DVector<Complex64>;

/// Shorthand for a complex scalar.
pub fn cx(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

/// Largest entry modulus; zero for empty matrices.
pub fn max_abs(a: &CMat) -> f64 {
    a.iter().fold(0.0, |acc, v| acc.max(v.norm()))
}

/// Largest entrywise deviation of `a` from its own adjoint.
pub fn hermitian_residual(a: &CMat) -> f64 {
    max_abs(&(a - a.adjoint()))
}

/// Hermitian symmetrization `(a + a*)/2`, applied before positivity tests
/// to damp roundoff.
pub fn hermitian_part(a: &CMat) -> CMat {
    (a + a.adjoint()).scale(0.5)
}

/// Checks that `a` is Hermitian within `tol` and returns the symmetrized copy.
pub fn ensure_hermitian(a: &CMat, tol: f64) -> Result<CMat> {
    let residual = hermitian_residual(a);
    if residual > tol {
        return Err(Error::NotHermitian { residual, tol });
    }
    Ok(hermitian_part(a))
}

/// Eigenvalues of a Hermitian matrix, sorted ascending, together with the
/// matching unitary of eigenvectors (columns).
pub fn hermitian_eigen(a: &CMat) -> Result<(Vec<f64>, CMat)> {
    let sym = ensure_hermitian(a, HERMITIAN_TOL)?;
    let eig = sym.symmetric_eigen();
    let mut order: Vec<usize> = (0..eig.eigenvalues.len()).collect();
    order.sort_by(|&i, &j| eig.eigenvalues[i].partial_cmp(&eig.eigenvalues[j]).unwrap());
    let values: Vec<f64> = order.iter().map(|&i| eig.eigenvalues[i]).collect();
    let n = a.nrows();
    let mut vectors = CMat::zeros(n, n);
    for (col, &i) in order.iter().enumerate() {
        vectors.set_column(col, &eig.eigenvectors.column(i));
    }
    Ok((values, vectors))
}

/// Eigenvalues only, ascending.
pub fn hermitian_eigenvalues(a: &CMat) -> Result<Vec<f64>> {
    let sym = ensure_hermitian(a, HERMITIAN_TOL)?;
    let mut values: Vec<f64> = sym.symmetric_eigen().eigenvalues.iter().copied().collect();
    values.sort_by(|x, y| x.partial_cmp(y).unwrap());
    Ok(values)
}

/// True iff the Hermitian matrix `a` has smallest eigenvalue above `tol`,
/// decided by a Cholesky factorization of the shifted matrix.
///
/// Non-Hermitian input (beyond the crate-wide Hermitian tolerance) is
/// rejected rather than silently symmetrized away.
pub fn is_positive_definite(a: &CMat, tol: f64) -> Result<bool> {
    let sym = ensure_hermitian(a, HERMITIAN_TOL)?;
    let n = sym.nrows();
    let shifted = &sym - CMat::identity(n, n).scale(tol);
    Ok(shifted.cholesky().is_some())
}

/// Hermitian square root of a positive semidefinite matrix. Eigenvalues
/// below `-tol` are rejected; tiny negatives inside the tolerance are
/// clamped to zero.
pub fn hermitian_sqrt(a: &CMat, tol: f64) -> Result<CMat> {
    let (values, vectors) = hermitian_eigen(a)?;
    if let Some(&min) = values.first() {
        if min < -tol {
            return Err(Error::NotPositiveDefinite { min_eigenvalue: min });
        }
    }
    let roots = CVec::from_iterator(
        values.len(),
        values.iter().map(|&v| cx(v.max(0.0).sqrt(), 0.0)),
    );
    let scaled = &vectors * CMat::from_diagonal(&roots);
    Ok(&scaled * vectors.adjoint())
}

/// Singular values, descending.
pub fn singular_values(a: &CMat) -> Vec<f64> {
    let mut sv: Vec<f64> = a.clone().svd(false, false).singular_values.iter().copied().collect();
    sv.sort_by(|x, y| y.partial_cmp(x).unwrap());
    sv
}

/// Spectral norm (largest singular value).
pub fn spectral_norm(a: &CMat) -> f64 {
    singular_values(a).first().copied().unwrap_or(0.0)
}

/// Two-norm condition number; infinite when the smallest singular value
/// vanishes.
pub fn cond_2(a: &CMat) -> f64 {
    let sv = singular_values(a);
    match (sv.first(), sv.last()) {
        (Some(&hi), Some(&lo)) if lo > 0.0 => hi / lo,
        _ => f64::INFINITY,
    }
}

/// Numerical rank: number of singular values above `rtol` times the largest.
pub fn numerical_rank(a: &CMat, rtol: f64) -> usize {
    let sv = singular_values(a);
    let cutoff = sv.first().copied().unwrap_or(0.0) * rtol;
    sv.iter().filter(|&&s| s > cutoff).count()
}

/// Orthonormal basis of the (right) null space of `a`, with singular values
/// at or below `rtol` times the largest treated as zero.
///
/// The matrix is padded with zero rows when it is wider than tall so that
/// the full set of right singular vectors is available.
pub fn null_space(a: &CMat, rtol: f64) -> Vec<CVec> {
    let (rows, cols) = a.shape();
    if cols == 0 {
        return Vec::new();
    }
    let work = if rows < cols {
        let mut padded = CMat::zeros(cols, cols);
        padded.view_mut((0, 0), (rows, cols)).copy_from(a);
        padded
    } else {
        a.clone()
    };
    let svd = work.svd(false, true);
    let v_t = svd.v_t.expect("requested v_t");
    let sv = &svd.singular_values;
    let cutoff = sv.iter().fold(0.0f64, |m, &s| m.max(s)) * rtol;
    let mut basis = Vec::new();
    for k in 0..v_t.nrows() {
        if sv[k] <= cutoff {
            basis.push(v_t.row(k).adjoint());
        }
    }
    basis
}

/// Random matrix with independent standard complex Gaussian entries
/// (Box-Muller from the supplied generator).
pub fn random_complex_matrix<R: Rng + ?Sized>(rng: &mut R, rows: usize, cols: usize) -> CMat {
    CMat::from_fn(rows, cols, |_, _| {
        let u: f64 = rng.gen_range(f64::EPSILON..1.0);
        let v: f64 = rng.gen_range(0.0..std::f64::consts::TAU);
        let r = (-2.0 * u.ln()).sqrt();
        cx(r * v.cos(), r * v.sin()) / Complex64::from(std::f64::consts::SQRT_2)
    })
}

/// Haar-distributed random unitary via QR of a complex Gaussian matrix.
pub fn random_unitary<R: Rng + ?Sized>(rng: &mut R, n: usize) -> CMat {
    let g = random_complex_matrix(rng, n, n);
    let qr = g.qr();
    let r_diag: Vec<Complex64> = (0..n).map(|i| qr.r()[(i, i)]).collect();
    let mut q = qr.q();
    // Fix the phase ambiguity so the distribution is Haar.
    for (i, d) in r_diag.iter().enumerate() {
        let phase = if d.norm() > 0.0 { d / d.norm() } else { cx(1.0, 0.0) };
        let col = q.column(i) * phase;
        q.set_column(i, &col);
    }
    q
}

/// Random Hermitian matrix with entries of modest size.
pub fn random_hermitian<R: Rng + ?Sized>(rng: &mut R, n: usize) -> CMat {
    let g = random_complex_matrix(rng, n, n);
    hermitian_part(&g)
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    /// Independent oracle: cyclic Jacobi eigenvalue iteration for Hermitian
    /// matrices, written without any nalgebra decompositions.
    fn jacobi_eigenvalues(a: &CMat) -> Vec<f64> {
        let n = a.nrows();
        let mut m = a.clone();
        for _ in 0..60 {
            let mut off = 0.0f64;
            for p in 0..n {
                for q in 0..n {
                    if p != q {
                        off = off.max(m[(p, q)].norm());
                    }
                }
            }
            if off < 1e-14 {
                break;
            }
            for p in 0..n {
                for q in (p + 1)..n {
                    let apq = m[(p, q)];
                    if apq.norm() < 1e-300 {
                        continue;
                    }
                    // Unitary 2x2 rotation annihilating the (p, q) entry.
                    let app = m[(p, p)].re;
                    let aqq = m[(q, q)].re;
                    let phase = apq / apq.norm();
                    let theta = 0.5 * (2.0 * apq.norm()).atan2(aqq - app);
                    let (c, s) = (theta.cos(), theta.sin());
                    let sp = phase * s;
                    // Apply G* M G with G = [[c, sp], [-conj(sp), c]] on rows/cols p, q.
                    for k in 0..n {
                        let mkp = m[(k, p)];
                        let mkq = m[(k, q)];
                        m[(k, p)] = mkp * c - mkq * sp.conj();
                        m[(k, q)] = mkp * sp + mkq * c;
                    }
                    for k in 0..n {
                        let mpk = m[(p, k)];
                        let mqk = m[(q, k)];
                        m[(p, k)] = mpk * c - mqk * sp;
                        m[(q, k)] = mpk * sp.conj() + mqk * c;
                    }
                }
            }
        }
        let mut vals: Vec<f64> = (0..n).map(|i| m[(i, i)].re).collect();
        vals.sort_by(|x, y| x.partial_cmp(y).unwrap());
        vals
    }

    #[test]
    fn positive_definite_identity() {
        let id = CMat::identity(3, 3);
        assert!(is_positive_definite(&id, 1e-10).unwrap());
    }

    #[test]
    fn positive_definite_rejects_indefinite() {
        // Eigenvalues 3 and -1.
        let a = CMat::from_row_slice(2, 2, &[cx(1.0, 0.0), cx(2.0, 0.0), cx(2.0, 0.0), cx(1.0, 0.0)]);
        assert!(!is_positive_definite(&a, 1e-10).unwrap());
    }

    #[test]
    fn positive_definite_rejects_zero() {
        let z = CMat::zeros(2, 2);
        assert!(!is_positive_definite(&z, 1e-10).unwrap());
    }

    #[test]
    fn positive_definite_rejects_non_hermitian() {
        let a = CMat::from_row_slice(2, 2, &[cx(1.0, 0.0), cx(1.0, 0.0), cx(0.0, 0.0), cx(1.0, 0.0)]);
        assert!(matches!(
            is_positive_definite(&a, 1e-10),
            Err(Error::NotHermitian { .. })
        ));
    }

    #[test]
    fn positivity_agrees_with_jacobi_oracle() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for trial in 0..60 {
            let n = 1 + trial % 8;
            let mut a = random_hermitian(&mut rng, n);
            // Mix in definite and indefinite cases.
            if trial % 3 == 0 {
                a += CMat::identity(n, n).scale(2.5);
            }
            let tol = 1e-10;
            let fast = is_positive_definite(&a, tol).unwrap();
            let oracle = jacobi_eigenvalues(&a)[0] > tol;
            assert_eq!(fast, oracle, "disagreement at trial {trial}");
        }
    }

    #[test]
    fn hermitian_eigen_matches_jacobi_oracle() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for _ in 0..20 {
            let a = random_hermitian(&mut rng, 6);
            let fast = hermitian_eigenvalues(&a).unwrap();
            let oracle = jacobi_eigenvalues(&a);
            for (x, y) in fast.iter().zip(oracle.iter()) {
                assert!((x - y).abs() < 1e-9, "eigenvalue mismatch {x} vs {y}");
            }
        }
    }

    #[test]
    fn sqrt_squares_back() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let g = random_complex_matrix(&mut rng, 4, 4);
        let a = &g * g.adjoint();
        let r = hermitian_sqrt(&a, 1e-10).unwrap();
        assert!(max_abs(&(&r * &r - &a)) < 1e-10);
    }

    #[test]
    fn null_space_of_wide_matrix() {
        // 1x3 matrix [1, 0, 0]: null space has dimension 2.
        let mut a = CMat::zeros(1, 3);
        a[(0, 0)] = cx(1.0, 0.0);
        let basis = null_space(&a, 1e-8);
        assert_eq!(basis.len(), 2);
        for v in &basis {
            assert!(v[0].norm() < 1e-12);
            assert!((v.norm() - 1.0).abs() < 1e-12);
        }
    }

    #[test]
    fn random_unitary_is_unitary() {
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        let u = random_unitary(&mut rng, 5);
        let err = max_abs(&(&u * u.adjoint() - CMat::identity(5, 5)));
        assert!(err < 1e-12);
    }
}

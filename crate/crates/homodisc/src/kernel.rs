//! Weighted disc spaces, the intertwining operator onto bundle sections,
//! and truncated reproducing kernels.
//!
//! For `lambda > 0` the space `A^(lambda)` of holomorphic functions has
//! reproducing kernel `(1 - z conj(w))^{-2 lambda}`; expanding it gives the
//! monomial norms `||z^p||^2 = p! / (2 lambda)_p`. The graded sum of the
//! spaces `A^(eta + j) (x) C^{d_j}` maps onto sections of the bundle
//! `(eta, Y)` through the operator
//!
//! ```text
//! (Gamma f)_l = sum_{j<=l} [ 1 / ((l-j)! (2 eta + 2j)_{l-j}) ]
//!               Y_l ... Y_{j+1} f_j^{(l-j)},
//! ```
//!
//! and the image of the reproducing kernel under `Gamma o N` is a
//! reproducing kernel for the bundle. The kernel is built here as the
//! orthonormal-basis sum `sum_k (Gamma_N e_k)(z) ((Gamma_N e_k)(w))*`,
//! truncated in bidegree; the closed form of its value at the origin is an
//! independent cross-check.

use num_complex::Complex64;

use crate::algebra::matrix::{cx, hermitian_part, max_abs, CMat, CVec};
use crate::algebra::special::falling;
use crate::algebra::{pochhammer, BlockDiagonal, TwoVariableSeries, VecPoly};
use crate::bundle::{gamma_coefficient, BundleParams};
use crate::error::{Error, Result};
use crate::mobius::{multiplier, MobiusElement};
use crate::{COND_LIMIT, HERMITIAN_TOL, MAX_EVAL_RADIUS};

/// The weighted space `A^(lambda)` with kernel `(1 - z conj(w))^{-2 lambda}`.
#[derive(Debug, Clone, Copy)]
pub struct WeightedSpace {
    lambda: f64,
}

impl WeightedSpace {
    pub fn new(lambda: f64) -> Result<Self> {
        if lambda <= 0.0 {
            return Err(Error::InvalidParameter(format!(
                "weighted space requires lambda > 0, got {lambda}"
            )));
        }
        Ok(WeightedSpace { lambda })
    }

    pub fn lambda(&self) -> f64 {
        self.lambda
    }

    /// Kernel coefficient `a_p = (2 lambda)_p / p!`, computed as a stable
    /// running product.
    pub fn coefficient(&self, p: usize) -> f64 {
        let mut acc = 1.0;
        for i in 0..p {
            acc *= (2.0 * self.lambda + i as f64) / (1.0 + i as f64);
        }
        acc
    }

    /// Monomial norm `||z^p|| = sqrt(p! / (2 lambda)_p) = a_p^{-1/2}`.
    pub fn monomial_norm(&self, p: usize) -> f64 {
        1.0 / self.coefficient(p).sqrt()
    }
}

/// Polynomial section of the graded space: one vector polynomial per
/// component `j`, with values in `C^{d_j}`.
#[derive(Debug, Clone)]
pub struct GradedSection {
    block_type: crate::algebra::BlockType,
    components: Vec<VecPoly>,
}

impl GradedSection {
    pub fn new(block_type: crate::algebra::BlockType, components: Vec<VecPoly>) -> Result<Self> {
        if components.len() != block_type.num_blocks() {
            return Err(Error::Shape(format!(
                "expected {} components, got {}",
                block_type.num_blocks(),
                components.len()
            )));
        }
        for (j, c) in components.iter().enumerate() {
            if c.dim() != block_type.size(j) {
                return Err(Error::Shape(format!(
                    "component {} has dimension {}, expected {}",
                    j,
                    c.dim(),
                    block_type.size(j)
                )));
            }
        }
        Ok(GradedSection { block_type, components })
    }

    pub fn zero(block_type: crate::algebra::BlockType) -> Self {
        let components = block_type.sizes().iter().map(|&d| VecPoly::zero(d)).collect();
        GradedSection { block_type, components }
    }

    pub fn block_type(&self) -> &crate::algebra::BlockType {
        &self.block_type
    }

    pub fn component(&self, j: usize) -> &VecPoly {
        &self.components[j]
    }

    pub fn components(&self) -> &[VecPoly] {
        &self.components
    }

    /// Stacks the component values into a single vector in `C^n`.
    pub fn eval(&self, z: Complex64) -> CVec {
        let n = self.block_type.dim();
        let mut out = CVec::zeros(n);
        for (j, c) in self.components.iter().enumerate() {
            let v = c.eval(z);
            let o = self.block_type.offset(j);
            for i in 0..v.len() {
                out[o + i] = v[i];
            }
        }
        out
    }

    pub fn max_abs(&self) -> f64 {
        self.components.iter().fold(0.0, |acc, c| acc.max(c.max_abs()))
    }
}

/// Applies the intertwining operator: `(Gamma f)_l` collects the
/// derivatives of the lower components pushed up along the chain.
pub fn gamma_apply(p: &BundleParams, f: &GradedSection) -> Result<GradedSection> {
    p.require_positive_eta()?;
    if f.block_type() != p.block_type() {
        return Err(Error::Shape("section has a different block type".into()));
    }
    let bt = p.block_type();
    let mut components = Vec::with_capacity(bt.num_blocks());
    for l in 0..bt.num_blocks() {
        let mut acc = VecPoly::zero(bt.size(l));
        for j in 0..=l {
            let coeff = gamma_coefficient(p.eta(), l, j);
            let term = f
                .component(j)
                .derivative(l - j)
                .map_matrix(&p.y().chain(l, j))?
                .scale(cx(coeff, 0.0));
            acc = acc.add(&term)?;
        }
        components.push(acc);
    }
    GradedSection::new(bt.clone(), components)
}

/// `Gamma_N = Gamma o N`: the block-diagonal `N` acts componentwise first.
pub fn gamma_n_apply(p: &BundleParams, n: &BlockDiagonal, f: &GradedSection) -> Result<GradedSection> {
    if n.block_type() != p.block_type() {
        return Err(Error::Shape("N has a different block type".into()));
    }
    if n.cond() > COND_LIMIT {
        return Err(Error::Singular { cond: n.cond() });
    }
    let scaled = GradedSection::new(
        p.block_type().clone(),
        f.components()
            .iter()
            .enumerate()
            .map(|(j, c)| c.map_matrix(n.block(j)))
            .collect::<Result<Vec<_>>>()?,
    )?;
    gamma_apply(p, &scaled)
}

/// Inverts `Gamma` on polynomial sections; `Gamma` is unipotent with
/// respect to the grading, so the solve is a forward substitution.
pub fn gamma_solve(p: &BundleParams, s: &GradedSection) -> Result<GradedSection> {
    p.require_positive_eta()?;
    if s.block_type() != p.block_type() {
        return Err(Error::Shape("section has a different block type".into()));
    }
    let bt = p.block_type();
    let mut components: Vec<VecPoly> = Vec::with_capacity(bt.num_blocks());
    for l in 0..bt.num_blocks() {
        let mut acc = s.component(l).clone();
        for j in 0..l {
            let coeff = gamma_coefficient(p.eta(), l, j);
            let term = components[j]
                .derivative(l - j)
                .map_matrix(&p.y().chain(l, j))?
                .scale(cx(coeff, 0.0));
            acc = acc.sub(&term)?;
        }
        components.push(acc);
    }
    GradedSection::new(bt.clone(), components)
}

/// Closed form of the kernel at the origin: block `l` equals
/// `sum_{j<=l} [1/((l-j)!(2 eta + 2j)_{l-j})] Y_l..Y_{j+1} N_j N_j* Y_{j+1}*..Y_l*`.
pub fn kernel_at_zero(p: &BundleParams, n: &BlockDiagonal) -> Result<BlockDiagonal> {
    p.require_positive_eta()?;
    if n.block_type() != p.block_type() {
        return Err(Error::Shape("N has a different block type".into()));
    }
    let bt = p.block_type();
    let mut blocks = Vec::with_capacity(bt.num_blocks());
    for l in 0..bt.num_blocks() {
        let d = bt.size(l);
        let mut acc = CMat::zeros(d, d);
        for j in 0..=l {
            let coeff = gamma_coefficient(p.eta(), l, j);
            let chain = p.y().chain(l, j);
            let nn = n.block(j) * n.block(j).adjoint();
            acc += (&chain * nn * chain.adjoint()).map(|v| v * coeff);
        }
        blocks.push(hermitian_part(&acc));
    }
    BlockDiagonal::new(bt.clone(), blocks)
}

/// Truncated reproducing kernel of the bundle `(eta, Y)` with
/// normalization `N`.
#[derive(Debug, Clone)]
pub struct KernelSeries {
    params: BundleParams,
    n: BlockDiagonal,
    series: TwoVariableSeries,
}

/// Builds the kernel as the orthonormal-basis sum
/// `sum_k (Gamma_N e_k)(z) ((Gamma_N e_k)(w))*` truncated to bidegree `deg`.
///
/// A basis vector of component `j` and monomial degree `p` contributes to
/// component `l >= j` at `z`-degree `p - (l - j)`, so basis degrees up to
/// `deg + m` are consumed.
pub fn kernel_series(p: &BundleParams, n: &BlockDiagonal, deg: usize) -> Result<KernelSeries> {
    p.require_positive_eta()?;
    if n.block_type() != p.block_type() {
        return Err(Error::Shape("N has a different block type".into()));
    }
    if n.cond() > COND_LIMIT {
        return Err(Error::Singular { cond: n.cond() });
    }
    let bt = p.block_type();
    let m = bt.top();
    if deg < m {
        return Err(Error::Truncation(format!(
            "truncation degree {deg} is below the top block index {m}"
        )));
    }
    let mut series = TwoVariableSeries::zeros(bt.dim(), deg);
    for j in 0..bt.num_blocks() {
        let space = WeightedSpace::new(p.eta() + j as f64)?;
        for pdeg in 0..=(deg + m) {
            let inv_norm = 1.0 / space.monomial_norm(pdeg);
            // Per component l, the (matrix) coefficient of the monomial
            // contributed by this basis slice.
            let mut parts: Vec<(usize, usize, CMat)> = Vec::new();
            for l in j..bt.num_blocks() {
                let k = l - j;
                if k > pdeg || pdeg - k > deg {
                    continue;
                }
                let alpha = pdeg - k;
                let scalar =
                    gamma_coefficient(p.eta(), l, j) * falling(pdeg as u32, k as u32) * inv_norm;
                let mat = (p.y().chain(l, j) * n.block(j)).map(|v| v * scalar);
                parts.push((l, alpha, mat));
            }
            for (l, alpha, u) in &parts {
                for (lp, beta, v) in &parts {
                    let prod = u * v.adjoint();
                    let target = series.coeff_mut(*alpha, *beta);
                    let (r0, c0) = (bt.offset(*l), bt.offset(*lp));
                    let mut view = target.view_mut((r0, c0), prod.shape());
                    view += &prod;
                }
            }
        }
    }
    Ok(KernelSeries { params: p.clone(), n: n.clone(), series })
}

impl KernelSeries {
    pub fn params(&self) -> &BundleParams {
        &self.params
    }

    pub fn normalization(&self) -> &BlockDiagonal {
        &self.n
    }

    pub fn series(&self) -> &TwoVariableSeries {
        &self.series
    }

    pub fn dim(&self) -> usize {
        self.series.dim()
    }

    pub fn deg(&self) -> usize {
        self.series.deg()
    }

    fn check_radius(&self, z: Complex64) -> Result<()> {
        let r = z.norm();
        if r > MAX_EVAL_RADIUS {
            return Err(Error::Truncation(format!(
                "|z| = {r:.3} exceeds the evaluation radius {MAX_EVAL_RADIUS}; tail ratio {:.3e}",
                self.series.tail_ratio(r.min(0.999))
            )));
        }
        Ok(())
    }

    /// Evaluates `K(z, w)` inside the validated radius.
    pub fn evaluate(&self, z: Complex64, w: Complex64) -> Result<CMat> {
        self.check_radius(z)?;
        self.check_radius(w)?;
        Ok(self.series.eval(z, w))
    }

    /// Hermitian metric `H(z) = K(z, z)^{-1}`.
    pub fn metric_at(&self, z: Complex64) -> Result<CMat> {
        let k = hermitian_part(&self.evaluate(z, z)?);
        let chol = k.cholesky().ok_or_else(|| {
            Error::Truncation("K(z, z) is numerically singular at this radius".into())
        })?;
        Ok(chol.inverse())
    }

    /// Curvature `-d_wbar (K^{-1} d_z K)` of the kernel metric at the
    /// origin, assembled exactly from the four lowest coefficients.
    pub fn curvature_at_zero(&self) -> Result<CMat> {
        if self.deg() < 2 {
            return Err(Error::Truncation("curvature needs truncation degree >= 2".into()));
        }
        let c00 = hermitian_part(self.series.coeff(0, 0));
        let chol = c00
            .cholesky()
            .ok_or_else(|| Error::Truncation("K(0,0) is numerically singular".into()))?;
        let inv = chol.inverse();
        let c11 = self.series.coeff(1, 1);
        let c10 = self.series.coeff(1, 0);
        let c01 = self.series.coeff(0, 1);
        Ok(-(&inv * c11 - &inv * c10 * &inv * c01))
    }

    /// Gram block matrix `[K(z_i, z_j)]` over a finite sample set.
    pub fn gram(&self, points: &[Complex64]) -> Result<CMat> {
        let n = self.dim();
        let s = points.len();
        let mut out = CMat::zeros(s * n, s * n);
        for (i, &zi) in points.iter().enumerate() {
            for (j, &zj) in points.iter().enumerate() {
                let k = self.evaluate(zi, zj)?;
                out.view_mut((i * n, j * n), (n, n)).copy_from(&k);
            }
        }
        Ok(hermitian_part(&out))
    }
}

/// Largest entrywise deviation from the transformation rule
/// `K(z, w) = J_g(z) K(g z, g w) J_g(w)*` over the samples.
pub fn transformation_residual(
    kernel: &KernelSeries,
    g: &MobiusElement,
    samples: &[(Complex64, Complex64)],
) -> Result<f64> {
    let mut worst = 0.0f64;
    for &(z, w) in samples {
        let gz = g.act(z)?;
        let gw = g.act(w)?;
        let jz = multiplier(g, z, kernel.params())?;
        let jw = multiplier(g, w, kernel.params())?;
        let lhs = kernel.evaluate(z, w)?;
        let rhs = jz * kernel.evaluate(gz, gw)? * jw.adjoint();
        worst = worst.max(max_abs(&(lhs - rhs)));
    }
    Ok(worst)
}

/// Convenience constructor: the kernel of `(eta, Y)` with the identity
/// normalization.
pub fn kernel_series_identity(p: &BundleParams, deg: usize) -> Result<KernelSeries> {
    kernel_series(p, &BlockDiagonal::identity(p.block_type().clone()), deg)
}

/// Checks the Hermitian symmetry invariant `C_{p,q} = C_{q,p}^*` of a
/// computed kernel.
pub fn hermitian_symmetry_residual(kernel: &KernelSeries) -> f64 {
    kernel.series().hermitian_symmetry_residual()
}

/// Verifies that the bidegree-(0,0) coefficient of the basis-sum kernel
/// matches the closed form at the origin; returns the deviation.
pub fn origin_consistency_residual(kernel: &KernelSeries) -> Result<f64> {
    let closed = kernel_at_zero(kernel.params(), kernel.normalization())?;
    Ok(max_abs(&(kernel.series().coeff(0, 0) - closed.assemble())))
}

/// The reproducing-property residual in the rank-one case: for monomials
/// `f = z^p`, the pairing `<f, K(., w)>` must return `f(w)`.
pub fn reproducing_residual_rank_one(kernel: &KernelSeries, w: Complex64) -> Result<f64> {
    if kernel.dim() != 1 {
        return Err(Error::Shape("reproducing check is for rank-one kernels".into()));
    }
    kernel.check_radius(w)?;
    let space = WeightedSpace::new(kernel.params().eta())?;
    let mut worst = 0.0f64;
    for p in 0..=kernel.deg().min(12) {
        // <z^p, K(., w)> = conj(C_pp conj(w)^p) ||z^p||^2.
        let cpp = kernel.series().coeff(p, p)[(0, 0)];
        let norm2 = space.monomial_norm(p).powi(2);
        let pairing = (cpp * w.conj().powu(p as u32)).conj() * norm2;
        worst = worst.max((pairing - w.powu(p as u32)).norm());
    }
    Ok(worst)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::{BlockType, SubdiagonalY};
    use crate::bundle::{membership_in_p, random_params};
    use crate::POSITIVITY_TOL;
    use rand::Rng;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn scalar_params(eta: f64, entries: &[f64]) -> BundleParams {
        let y = SubdiagonalY::scalar_chain(
            &entries.iter().map(|&v| cx(v, 0.0)).collect::<Vec<_>>(),
        );
        let bt = y.block_type().clone();
        BundleParams::validate(eta, bt, y).unwrap()
    }

    fn rank_one_params(eta: f64) -> BundleParams {
        let bt = BlockType::new(vec![1]).unwrap();
        BundleParams::validate(eta, bt.clone(), SubdiagonalY::zero(bt)).unwrap()
    }

    #[test]
    fn weighted_space_norm_identity() {
        let ws = WeightedSpace::new(0.75).unwrap();
        for p in 0..30 {
            let product = ws.coefficient(p) * ws.monomial_norm(p).powi(2);
            assert!((product - 1.0).abs() < 1e-12);
            assert!(ws.coefficient(p) > 0.0);
        }
    }

    #[test]
    fn gamma_with_zero_chain_is_identity() {
        let bt = BlockType::new(vec![1, 2]).unwrap();
        let p = BundleParams::validate(0.9, bt.clone(), SubdiagonalY::zero(bt.clone())).unwrap();
        let f = GradedSection::new(
            bt,
            vec![
                VecPoly::monomial(2, CVec::from_element(1, cx(1.0, 0.0))),
                VecPoly::monomial(1, CVec::from_vec(vec![cx(0.5, 0.0), cx(0.0, 1.0)])),
            ],
        )
        .unwrap();
        let g = gamma_apply(&p, &f).unwrap();
        for j in 0..2 {
            let diff = g.component(j).sub(f.component(j)).unwrap();
            assert!(diff.max_abs() < 1e-15);
        }
    }

    #[test]
    fn gamma_single_derivative_term() {
        // d = (1,1), Y_1 = y, f = (z, 0): (Gamma f)_1 = y/(2 eta).
        let eta = 0.8;
        let yval = 1.4;
        let p = scalar_params(eta, &[yval]);
        let f = GradedSection::new(
            p.block_type().clone(),
            vec![
                VecPoly::monomial(1, CVec::from_element(1, cx(1.0, 0.0))),
                VecPoly::zero(1),
            ],
        )
        .unwrap();
        let g = gamma_apply(&p, &f).unwrap();
        assert!((g.component(0).coeff(1)[0] - cx(1.0, 0.0)).norm() < 1e-15);
        assert!((g.component(1).coeff(0)[0] - cx(yval / (2.0 * eta), 0.0)).norm() < 1e-14);
    }

    #[test]
    fn gamma_second_degree_example() {
        // d = (1,1), Y_1 = 1, eta = 1/2, f = (z^2, 0): (Gamma f)_1 = 2 z.
        let p = scalar_params(0.5, &[1.0]);
        let f = GradedSection::new(
            p.block_type().clone(),
            vec![
                VecPoly::monomial(2, CVec::from_element(1, cx(1.0, 0.0))),
                VecPoly::zero(1),
            ],
        )
        .unwrap();
        let g = gamma_apply(&p, &f).unwrap();
        assert!((g.component(1).coeff(1)[0] - cx(2.0, 0.0)).norm() < 1e-14);
        assert!(g.component(1).coeff(0)[0].norm() < 1e-15);
    }

    #[test]
    fn gamma_n_matches_gamma_for_identity() {
        let p = scalar_params(0.7, &[0.9]);
        let f = GradedSection::new(
            p.block_type().clone(),
            vec![
                VecPoly::monomial(3, CVec::from_element(1, cx(1.0, -0.5))),
                VecPoly::monomial(1, CVec::from_element(1, cx(0.3, 0.2))),
            ],
        )
        .unwrap();
        let id = BlockDiagonal::identity(p.block_type().clone());
        let a = gamma_apply(&p, &f).unwrap();
        let b = gamma_n_apply(&p, &id, &f).unwrap();
        for j in 0..2 {
            assert!(a.component(j).sub(b.component(j)).unwrap().max_abs() < 1e-15);
        }
    }

    #[test]
    fn gamma_n_rescales_by_blocks() {
        // Scalar chain, N = diag(2, 1), f = (z, 0): output ((2z), (2y/(2eta))).
        let eta = 0.6;
        let yval = 1.1;
        let p = scalar_params(eta, &[yval]);
        let n = BlockDiagonal::new(
            p.block_type().clone(),
            vec![CMat::from_element(1, 1, cx(2.0, 0.0)), CMat::identity(1, 1)],
        )
        .unwrap();
        let f = GradedSection::new(
            p.block_type().clone(),
            vec![
                VecPoly::monomial(1, CVec::from_element(1, cx(1.0, 0.0))),
                VecPoly::zero(1),
            ],
        )
        .unwrap();
        let g = gamma_n_apply(&p, &n, &f).unwrap();
        assert!((g.component(0).coeff(1)[0] - cx(2.0, 0.0)).norm() < 1e-14);
        assert!((g.component(1).coeff(0)[0] - cx(2.0 * yval / (2.0 * eta), 0.0)).norm() < 1e-14);
    }

    #[test]
    fn gamma_n_rejects_singular_normalization() {
        let p = scalar_params(0.6, &[1.0]);
        let n = BlockDiagonal::new(
            p.block_type().clone(),
            vec![CMat::zeros(1, 1), CMat::identity(1, 1)],
        )
        .unwrap();
        let f = GradedSection::zero(p.block_type().clone());
        assert!(matches!(
            gamma_n_apply(&p, &n, &f),
            Err(Error::Singular { .. })
        ));
    }

    #[test]
    fn gamma_solve_round_trip() {
        let mut rng = ChaCha8Rng::seed_from_u64(31);
        for _ in 0..20 {
            let sizes: Vec<usize> = (0..rng.gen_range(1..=4)).map(|_| rng.gen_range(1..=3)).collect();
            let bt = BlockType::new(sizes).unwrap();
            let p = random_params(&mut rng, bt.clone(), 0.3, 2.0);
            let f = GradedSection::new(
                bt.clone(),
                bt.sizes()
                    .iter()
                    .map(|&d| {
                        let coeffs = (0..=rng.gen_range(0..6))
                            .map(|_| {
                                CVec::from_fn(d, |_, _| {
                                    cx(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0))
                                })
                            })
                            .collect();
                        VecPoly::from_coeffs(d, coeffs).unwrap()
                    })
                    .collect(),
            )
            .unwrap();
            let image = gamma_apply(&p, &f).unwrap();
            let back = gamma_solve(&p, &image).unwrap();
            for j in 0..bt.num_blocks() {
                assert!(back.component(j).sub(f.component(j)).unwrap().max_abs() < 1e-10);
            }
        }
    }

    #[test]
    fn kernel_at_zero_examples() {
        // Y = 0, N = I: identity.
        let bt = BlockType::new(vec![1, 2]).unwrap();
        let p = BundleParams::validate(0.7, bt.clone(), SubdiagonalY::zero(bt.clone())).unwrap();
        let id = BlockDiagonal::identity(bt);
        let k = kernel_at_zero(&p, &id).unwrap();
        assert!(max_abs(&(k.assemble() - CMat::identity(3, 3))) < 1e-14);

        // Scalar chain: diag(1, 1 + |y|^2/(2 eta)).
        let eta = 0.9;
        let yval = 1.3;
        let p = scalar_params(eta, &[yval]);
        let id = BlockDiagonal::identity(p.block_type().clone());
        let k = kernel_at_zero(&p, &id).unwrap();
        assert!((k.block(0)[(0, 0)].re - 1.0).abs() < 1e-14);
        assert!((k.block(1)[(0, 0)].re - (1.0 + yval * yval / (2.0 * eta))).abs() < 1e-14);
    }

    #[test]
    fn kernel_at_zero_with_certificate_normalization_is_identity() {
        let p = scalar_params(1.2, &[1.0, 0.7]);
        let cert = membership_in_p(&p, POSITIVITY_TOL);
        assert!(cert.in_p);
        let n = cert.normalizing_n(p.block_type()).unwrap();
        let k = kernel_at_zero(&p, &n).unwrap();
        let dim = p.dim();
        assert!(max_abs(&(k.assemble() - CMat::identity(dim, dim))) < 1e-10);
    }

    #[test]
    fn kernel_series_szego_and_bergman() {
        // eta = 1/2: C_pp = 1 (Szego); eta = 1: C_pp = p + 1 (Bergman).
        let szego = kernel_series_identity(&rank_one_params(0.5), 20).unwrap();
        let bergman = kernel_series_identity(&rank_one_params(1.0), 20).unwrap();
        for p in 0..=20usize {
            assert!((szego.series().coeff(p, p)[(0, 0)].re - 1.0).abs() < 1e-12);
            assert!(
                (bergman.series().coeff(p, p)[(0, 0)].re - (p as f64 + 1.0)).abs() < 1e-11
            );
            if p > 0 {
                assert!(szego.series().coeff(p, p - 1)[(0, 0)].norm() < 1e-14);
            }
        }
    }

    #[test]
    fn kernel_series_origin_matches_closed_form() {
        let mut rng = ChaCha8Rng::seed_from_u64(37);
        for _ in 0..25 {
            let sizes: Vec<usize> = (0..rng.gen_range(1..=3)).map(|_| rng.gen_range(1..=2)).collect();
            let bt = BlockType::new(sizes).unwrap();
            let p = random_params(&mut rng, bt.clone(), 0.3, 1.5);
            let k = kernel_series_identity(&p, bt.top().max(6)).unwrap();
            assert!(origin_consistency_residual(&k).unwrap() < 1e-10);
            assert!(hermitian_symmetry_residual(&k) < 1e-10);
        }
    }

    #[test]
    fn metric_examples() {
        // z = 0: inverse of the kernel at the origin.
        let p = scalar_params(0.8, &[1.0]);
        let id = BlockDiagonal::identity(p.block_type().clone());
        let k = kernel_series(&p, &id, 24).unwrap();
        let h0 = k.metric_at(cx(0.0, 0.0)).unwrap();
        let k0 = kernel_at_zero(&p, &id).unwrap().assemble();
        assert!(max_abs(&(h0 * k0 - CMat::identity(2, 2))) < 1e-12);

        // Rank one, eta = 1/2: H(z) = 1 - |z|^2.
        let szego = kernel_series_identity(&rank_one_params(0.5), 60).unwrap();
        for &r in &[0.0, 0.3, 0.6] {
            let z = cx(r, -r / 2.0);
            if z.norm() > 0.79 {
                continue;
            }
            let h = szego.metric_at(z).unwrap();
            assert!((h[(0, 0)].re - (1.0 - z.norm_sqr())).abs() < 1e-9);
        }
    }

    #[test]
    fn metric_homogeneity_identity() {
        // J_g(z) H(gz)^{-1} J_g(z)^* = H(z)^{-1} on sampled branch-valid g.
        let p = scalar_params(0.6, &[0.8]);
        let id = BlockDiagonal::identity(p.block_type().clone());
        let k = kernel_series(&p, &id, 40).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(41);
        for _ in 0..10 {
            let g = MobiusElement::random_small(&mut rng, 0.05);
            let z = cx(rng.gen_range(-0.3..0.3), rng.gen_range(-0.3..0.3));
            let gz = g.act(z).unwrap();
            let j = multiplier(&g, z, &p).unwrap();
            let hinv_gz = k.evaluate(gz, gz).unwrap();
            let hinv_z = k.evaluate(z, z).unwrap();
            let lhs = &j * hinv_gz * j.adjoint();
            assert!(max_abs(&(lhs - hinv_z)) < 1e-8);
        }
    }

    #[test]
    fn curvature_szego_is_minus_one() {
        let k = kernel_series_identity(&rank_one_params(0.5), 8).unwrap();
        let c = k.curvature_at_zero().unwrap();
        assert!((c[(0, 0)] - cx(-1.0, 0.0)).norm() < 1e-12);
    }

    #[test]
    fn curvature_scales_with_eta() {
        for &eta in &[0.25, 0.5, 1.0, 1.75] {
            let k = kernel_series_identity(&rank_one_params(eta), 8).unwrap();
            let c = k.curvature_at_zero().unwrap();
            assert!((c[(0, 0)] - cx(-2.0 * eta, 0.0)).norm() < 1e-12, "eta = {eta}");
        }
    }

    #[test]
    fn curvature_spectrum_invariant_under_unitary_conjugation() {
        let mut rng = ChaCha8Rng::seed_from_u64(43);
        let p = random_params(&mut rng, BlockType::new(vec![2, 1]).unwrap(), 0.5, 1.2);
        let bt = p.block_type().clone();
        let u = BlockDiagonal::new(
            bt.clone(),
            bt.sizes()
                .iter()
                .map(|&d| crate::algebra::matrix::random_unitary(&mut rng, d))
                .collect(),
        )
        .unwrap();
        let y2 = p.y().conjugated(&u).unwrap();
        let q = BundleParams::validate(p.eta(), bt.clone(), y2).unwrap();

        let k1 = kernel_series_identity(&p, 6).unwrap();
        let k2 = kernel_series_identity(&q, 6).unwrap();
        // Compare spectra through the Hermitian forms C00^{1/2} Theta C00^{-1/2}.
        let spectrum = |k: &KernelSeries| -> Vec<f64> {
            let theta = k.curvature_at_zero().unwrap();
            let c00 = hermitian_part(k.series().coeff(0, 0));
            let root = crate::algebra::matrix::hermitian_sqrt(&c00, 1e-12).unwrap();
            let inv = root.clone().try_inverse().unwrap();
            let sym = &root * theta * inv;
            crate::algebra::matrix::hermitian_eigenvalues(&hermitian_part(&sym)).unwrap()
        };
        let s1 = spectrum(&k1);
        let s2 = spectrum(&k2);
        for (a, b) in s1.iter().zip(s2.iter()) {
            assert!((a - b).abs() < 1e-8, "curvature spectra differ: {a} vs {b}");
        }
    }

    #[test]
    fn transformation_residual_identity_is_zero() {
        let p = scalar_params(0.7, &[1.0]);
        let k = kernel_series_identity(&p, 30).unwrap();
        let samples = vec![(cx(0.2, 0.1), cx(-0.1, 0.2))];
        let r = transformation_residual(&k, &MobiusElement::identity(), &samples).unwrap();
        assert!(r < 1e-13);
    }

    #[test]
    fn transformation_residual_rank_one_rotation() {
        let k = kernel_series_identity(&rank_one_params(0.5), 40).unwrap();
        let g = MobiusElement::rotation(0.6).unwrap();
        let samples: Vec<_> = (0..10)
            .map(|i| {
                let t = i as f64 / 10.0;
                (cx(0.3 * t, 0.1), cx(-0.2, 0.25 * t))
            })
            .collect();
        let r = transformation_residual(&k, &g, &samples).unwrap();
        assert!(r <= 1e-10, "residual {r}");
    }

    #[test]
    fn transformation_residual_scalar_chain_hyperbolic() {
        let p = scalar_params(0.5, &[1.0]);
        let k = kernel_series_identity(&p, 40).unwrap();
        let g = MobiusElement::hyperbolic(0.05);
        let mut rng = ChaCha8Rng::seed_from_u64(47);
        let samples: Vec<_> = (0..20)
            .map(|_| {
                (
                    cx(rng.gen_range(-0.4..0.4), rng.gen_range(-0.4..0.4)),
                    cx(rng.gen_range(-0.4..0.4), rng.gen_range(-0.4..0.4)),
                )
            })
            .collect();
        let r = transformation_residual(&k, &g, &samples).unwrap();
        assert!(r <= 1e-8, "residual {r}");
    }

    #[test]
    fn gram_blocks_positive_semidefinite() {
        let mut rng = ChaCha8Rng::seed_from_u64(53);
        let p = random_params(&mut rng, BlockType::new(vec![1, 2]).unwrap(), 0.4, 1.2);
        let k = kernel_series_identity(&p, 30).unwrap();
        let points: Vec<Complex64> = (0..12)
            .map(|_| cx(rng.gen_range(-0.5..0.5), rng.gen_range(-0.5..0.5)))
            .filter(|z| z.norm() <= 0.5)
            .collect();
        let gram = k.gram(&points).unwrap();
        let eigs = crate::algebra::matrix::hermitian_eigenvalues(&gram).unwrap();
        assert!(eigs[0] >= -1e-9, "Gram eigenvalue floor {}", eigs[0]);
    }

    #[test]
    fn reproducing_property_rank_one() {
        let k = kernel_series_identity(&rank_one_params(0.75), 40).unwrap();
        for &w in &[cx(0.3, 0.0), cx(-0.2, 0.35), cx(0.0, -0.45)] {
            let r = reproducing_residual_rank_one(&k, w).unwrap();
            assert!(r <= 1e-9, "residual {r} at w = {w}");
        }
    }

    #[test]
    fn evaluation_refuses_large_radius() {
        let k = kernel_series_identity(&rank_one_params(0.5), 10).unwrap();
        assert!(matches!(
            k.evaluate(cx(0.9, 0.0), cx(0.0, 0.0)),
            Err(Error::Truncation(_))
        ));
    }

    /// Derivatives of an analytic function via the discrete Cauchy integral
    /// on a small circle; the oracle used for the equivariance test.
    fn circle_derivative<F: Fn(Complex64) -> Complex64>(
        f: &F,
        z0: Complex64,
        order: usize,
    ) -> Complex64 {
        let m = 64;
        let rho = 0.05;
        let mut acc = cx(0.0, 0.0);
        for s in 0..m {
            let phi = std::f64::consts::TAU * s as f64 / m as f64;
            let w = Complex64::from_polar(rho, phi);
            acc += f(z0 + w) * Complex64::from_polar(1.0, -(order as f64) * phi);
        }
        acc * crate::algebra::factorial(order as u32) / (m as f64 * rho.powi(order as i32))
    }

    #[test]
    fn gamma_is_equivariant() {
        // J_{g^{-1}}(z) (Gamma f)(g^{-1} z) equals Gamma applied to the
        // componentwise weighted action of g, evaluated at z.
        let mut rng = ChaCha8Rng::seed_from_u64(59);
        for trial in 0..6 {
            let p = if trial % 2 == 0 {
                scalar_params(0.6 + 0.2 * trial as f64, &[1.0])
            } else {
                random_params(&mut rng, BlockType::new(vec![1, 2]).unwrap(), 0.4, 1.0)
            };
            let bt = p.block_type().clone();
            let f = GradedSection::new(
                bt.clone(),
                bt.sizes()
                    .iter()
                    .map(|&d| {
                        let coeffs = (0..=6)
                            .map(|_| {
                                CVec::from_fn(d, |_, _| {
                                    cx(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0))
                                })
                            })
                            .collect();
                        VecPoly::from_coeffs(d, coeffs).unwrap()
                    })
                    .collect(),
            )
            .unwrap();
            let gamma_f = gamma_apply(&p, &f).unwrap();
            let g = MobiusElement::random_small(&mut rng, 0.2);
            let ginv = g.inverse();

            for _ in 0..4 {
                let z = cx(rng.gen_range(-0.4..0.4), rng.gen_range(-0.4..0.4));
                // Left side: multiplier times the transported section value.
                let jz = multiplier(&ginv, z, &p).unwrap();
                let lhs = &jz * gamma_f.eval(ginv.act(z).unwrap());

                // Right side: Gamma of the componentwise action, with the
                // derivatives taken by the circle oracle.
                let mut rhs = CVec::zeros(bt.dim());
                for l in 0..bt.num_blocks() {
                    let mut acc = CVec::zeros(bt.size(l));
                    for j in 0..=l {
                        let coeff = gamma_coefficient(p.eta(), l, j);
                        let chain = p.y().chain(l, j);
                        let d = bt.size(j);
                        let mut der = CVec::zeros(d);
                        for slot in 0..d {
                            let component = f.component(j).clone();
                            let ginv_local = ginv;
                            let eta_j = p.eta() + j as f64;
                            let h = move |zeta: Complex64| -> Complex64 {
                                let power = ginv_local.fractional_power(zeta, eta_j).unwrap();
                                let val = component.eval(ginv_local.act(zeta).unwrap());
                                power * val[slot]
                            };
                            der[slot] = circle_derivative(&h, z, l - j);
                        }
                        acc += (&chain * der).map(|v| v * coeff);
                    }
                    let o = bt.offset(l);
                    for i in 0..bt.size(l) {
                        rhs[o + i] = acc[i];
                    }
                }
                let err = (lhs - rhs).iter().fold(0.0f64, |a, v| a.max(v.norm()));
                assert!(err <= 1e-8, "equivariance residual {err}");
            }
        }
    }
}

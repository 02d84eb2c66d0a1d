//! Elementary homogeneous bundle parameters `(eta, Y)` and their
//! classification invariants.
//!
//! A parameter pair consists of a real `eta` and a strictly
//! block-subdiagonal chain `Y`. This module validates parameters, builds
//! the commuting representation pair `(rho(h), rho(y))`, decides
//! irreducibility of `Y` through its Hermitian block-diagonal commutant,
//! decides equivalence and unitary equivalence of chains through
//! intertwiner spaces, and certifies membership in the positivity set
//! (the parameters whose bundle carries a reproducing kernel) via the
//! recursion
//!
//! ```text
//! Delta_0 = I,
//! Delta_l = I - sum_{j<l} [ 1 / ((l-j)! (2 eta + 2j)_{l-j}) ]
//!               Y_l ... Y_{j+1} Delta_j Y_{j+1}* ... Y_l*,
//! ```
//!
//! with membership exactly when every `Delta_l` is positive definite.
//! In `eta` the membership indicator is a single step, and the threshold
//! is located by bisection.

use nalgebra::DMatrix;
use num_complex::Complex64;
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::algebra::matrix::{cond_2, cx, hermitian_eigen, is_positive_definite, max_abs, null_space, CMat, CVec};
use crate::algebra::{pochhammer, factorial, BlockDiagonal, BlockType, SubdiagonalY};
use crate::error::{Error, Result};
use crate::{COND_LIMIT, HERMITIAN_TOL, NULLSPACE_RTOL, POSITIVITY_TOL};

/// Validated parameter pair `(eta, Y)` of an elementary bundle.
#[derive(Debug, Clone)]
pub struct BundleParams {
    eta: f64,
    block_type: BlockType,
    y: SubdiagonalY,
}

impl BundleParams {
    /// Checks that `y` is shaped by `block_type` and that `eta` is a finite
    /// real number.
    pub fn validate(eta: f64, block_type: BlockType, y: SubdiagonalY) -> Result<Self> {
        if !eta.is_finite() {
            return Err(Error::InvalidParameter(format!("eta must be finite, got {eta}")));
        }
        if y.block_type() != &block_type {
            return Err(Error::Shape(
                "chain Y is not shaped by the supplied block type".into(),
            ));
        }
        Ok(BundleParams { eta, block_type, y })
    }

    pub fn eta(&self) -> f64 {
        self.eta
    }

    pub fn block_type(&self) -> &BlockType {
        &self.block_type
    }

    pub fn y(&self) -> &SubdiagonalY {
        &self.y
    }

    /// Total fiber dimension `n`.
    pub fn dim(&self) -> usize {
        self.block_type.dim()
    }

    /// Requires `eta > 0`, the range where the weighted-space coefficients
    /// of the kernel construction are finite and positive.
    pub fn require_positive_eta(&self) -> Result<()> {
        if self.eta <= 0.0 {
            return Err(Error::InvalidParameter(format!(
                "construction requires eta > 0, got {}",
                self.eta
            )));
        }
        Ok(())
    }
}

/// The pair `(rho(h), rho(y))` with `[rho(h), rho(y)] = -rho(y)`.
#[derive(Debug, Clone)]
pub struct RepresentationPair {
    pub rho_h: CMat,
    pub rho_y: CMat,
}

/// Assembles `rho(h) = diag(-eta I_0, ..., -(eta+m) I_m)` and `rho(y) = Y`.
pub fn representation_pair(p: &BundleParams) -> RepresentationPair {
    let n = p.dim();
    let mut rho_h = CMat::zeros(n, n);
    for j in 0..p.block_type().num_blocks() {
        let o = p.block_type().offset(j);
        for i in 0..p.block_type().size(j) {
            rho_h[(o + i, o + i)] = cx(-(p.eta() + j as f64), 0.0);
        }
    }
    RepresentationPair { rho_h, rho_y: p.y().assemble() }
}

/// Outcome of the commutant-based irreducibility test.
#[derive(Debug, Clone)]
pub struct IrreducibilityReport {
    /// True when the Hermitian block-diagonal commutant of `Y` is scalar.
    pub irreducible: bool,
    /// Real dimension of that commutant (1 for irreducible chains).
    pub commutant_dim: usize,
    /// For reducible chains, a nontrivial block-diagonal orthogonal
    /// projection commuting with `Y`.
    pub witness: Option<BlockDiagonal>,
}

fn hermitian_param_count(bt: &BlockType) -> usize {
    bt.sizes().iter().map(|&d| d * d).sum()
}

/// Hermitian block-diagonal matrix from its real parameters: per block,
/// `d` diagonal entries followed by (re, im) pairs for the strict upper
/// triangle.
fn hermitian_from_params(bt: &BlockType, x: &[f64]) -> BlockDiagonal {
    let mut blocks = Vec::with_capacity(bt.num_blocks());
    let mut k = 0;
    for &d in bt.sizes() {
        let mut b = CMat::zeros(d, d);
        for i in 0..d {
            b[(i, i)] = cx(x[k], 0.0);
            k += 1;
        }
        for i in 0..d {
            for j in (i + 1)..d {
                let v = cx(x[k], x[k + 1]);
                k += 2;
                b[(i, j)] = v;
                b[(j, i)] = v.conj();
            }
        }
        blocks.push(b);
    }
    BlockDiagonal::new(bt.clone(), blocks).expect("shapes are correct by construction")
}

fn identity_params(bt: &BlockType) -> Vec<f64> {
    let mut x = vec![0.0; hermitian_param_count(bt)];
    let mut k = 0;
    for &d in bt.sizes() {
        for _ in 0..d {
            x[k] = 1.0;
            k += 1;
        }
        k += d * (d - 1);
    }
    x
}

/// Null space of a real matrix, orthonormal columns, relative threshold.
fn real_null_space(a: &DMatrix<f64>, rtol: f64) -> Vec<Vec<f64>> {
    let (rows, cols) = a.shape();
    if cols == 0 {
        return Vec::new();
    }
    if rows == 0 {
        return (0..cols)
            .map(|i| {
                let mut e = vec![0.0; cols];
                e[i] = 1.0;
                e
            })
            .collect();
    }
    let work = if rows < cols {
        let mut padded = DMatrix::zeros(cols, cols);
        padded.view_mut((0, 0), (rows, cols)).copy_from(a);
        padded
    } else {
        a.clone()
    };
    let svd = work.svd(false, true);
    let v_t = svd.v_t.expect("requested v_t");
    let cutoff = svd.singular_values.iter().fold(0.0f64, |m, &s| m.max(s)) * rtol;
    let mut basis = Vec::new();
    for k in 0..v_t.nrows() {
        if svd.singular_values[k] <= cutoff {
            basis.push(v_t.row(k).iter().copied().collect());
        }
    }
    basis
}

/// Decides irreducibility of the chain `Y`.
///
/// `Y` is reducible exactly when some non-scalar Hermitian block-diagonal
/// matrix commutes with it; a spectral projection of such a matrix then
/// yields the orthogonal decomposition. The commutant is computed as the
/// real-linear null space of `A -> A Y - Y A` restricted to Hermitian
/// block-diagonal `A`.
pub fn is_irreducible(y: &SubdiagonalY, tol: f64) -> IrreducibilityReport {
    let bt = y.block_type();
    let params = hermitian_param_count(bt);
    let eq_rows: usize = (1..bt.num_blocks())
        .map(|l| 2 * bt.size(l) * bt.size(l - 1))
        .sum();

    // Columns of the real-linear commutation map.
    let mut system = DMatrix::<f64>::zeros(eq_rows, params);
    let mut x = vec![0.0; params];
    for col in 0..params {
        x[col] = 1.0;
        let a = hermitian_from_params(bt, &x);
        x[col] = 0.0;
        let mut row = 0;
        for l in 1..bt.num_blocks() {
            let e = a.block(l) * y.block(l) - y.block(l) * a.block(l - 1);
            for r in 0..e.nrows() {
                for c in 0..e.ncols() {
                    system[(row, col)] = e[(r, c)].re;
                    system[(row + 1, col)] = e[(r, c)].im;
                    row += 2;
                }
            }
        }
    }

    let rtol = if tol > 0.0 { tol } else { NULLSPACE_RTOL };
    let basis = real_null_space(&system, rtol);
    let dim = basis.len();
    if dim <= 1 {
        return IrreducibilityReport { irreducible: true, commutant_dim: dim.max(1), witness: None };
    }

    // A non-scalar commuting Hermitian element: remove the identity
    // component (in parameter coordinates that projection is exactly the
    // traceless part), then take the null vector with the largest remainder.
    let v_id = identity_params(bt);
    let id_norm2: f64 = v_id.iter().map(|v| v * v).sum();
    let mut best: Option<(f64, Vec<f64>)> = None;
    for w in &basis {
        let dot: f64 = w.iter().zip(&v_id).map(|(a, b)| a * b).sum();
        let perp: Vec<f64> = w
            .iter()
            .zip(&v_id)
            .map(|(a, b)| a - dot / id_norm2 * b)
            .collect();
        let norm2: f64 = perp.iter().map(|v| v * v).sum();
        if best.as_ref().map_or(true, |(n, _)| norm2 > *n) {
            best = Some((norm2, perp));
        }
    }
    let (_, perp) = best.expect("commutant dimension at least two");
    let a = hermitian_from_params(bt, &perp);

    // Split the spectrum of the commuting element at its largest gap; the
    // corresponding spectral projection is block diagonal, idempotent and
    // commutes with Y.
    let mut eigen: Vec<(f64, usize, CVec)> = Vec::new();
    for (j, blk) in a.blocks().iter().enumerate() {
        let (vals, vecs) = hermitian_eigen(blk).expect("Hermitian by construction");
        for (i, &v) in vals.iter().enumerate() {
            eigen.push((v, j, vecs.column(i).into_owned()));
        }
    }
    let mut sorted: Vec<f64> = eigen.iter().map(|(v, _, _)| *v).collect();
    sorted.sort_by(|p, q| p.partial_cmp(q).unwrap());
    let mut split = sorted[0];
    let mut widest = -1.0;
    for win in sorted.windows(2) {
        if win[1] - win[0] > widest {
            widest = win[1] - win[0];
            split = 0.5 * (win[0] + win[1]);
        }
    }
    let mut blocks: Vec<CMat> = bt.sizes().iter().map(|&d| CMat::zeros(d, d)).collect();
    for (v, j, vec) in &eigen {
        if *v > split {
            blocks[*j] += vec * vec.adjoint();
        }
    }
    let witness = BlockDiagonal::new(bt.clone(), blocks).expect("shapes match");
    IrreducibilityReport { irreducible: false, commutant_dim: dim, witness: Some(witness) }
}

/// Basis of the complex intertwiner space
/// `{ block-diagonal A : A Y = Y' A }`.
fn intertwiner_space(y: &SubdiagonalY, y2: &SubdiagonalY, rtol: f64) -> Vec<BlockDiagonal> {
    let bt = y.block_type();
    let params: usize = bt.sizes().iter().map(|&d| d * d).sum();
    let eq_rows: usize = (1..bt.num_blocks()).map(|l| bt.size(l) * bt.size(l - 1)).sum();

    let block_from = |x: &CVec| -> BlockDiagonal {
        let mut blocks = Vec::with_capacity(bt.num_blocks());
        let mut k = 0;
        for &d in bt.sizes() {
            let mut b = CMat::zeros(d, d);
            for r in 0..d {
                for c in 0..d {
                    b[(r, c)] = x[k];
                    k += 1;
                }
            }
            blocks.push(b);
        }
        BlockDiagonal::new(bt.clone(), blocks).expect("shapes match")
    };

    if eq_rows == 0 {
        // Rank-one top block and no equations: every block matrix intertwines.
        let mut basis = Vec::new();
        for i in 0..params {
            let mut e = CVec::zeros(params);
            e[i] = cx(1.0, 0.0);
            basis.push(block_from(&e));
        }
        return basis;
    }

    let mut system = CMat::zeros(eq_rows, params);
    for col in 0..params {
        let mut e = CVec::zeros(params);
        e[col] = cx(1.0, 0.0);
        let a = block_from(&e);
        let mut row = 0;
        for l in 1..bt.num_blocks() {
            let m = a.block(l) * y.block(l) - y2.block(l) * a.block(l - 1);
            for r in 0..m.nrows() {
                for c in 0..m.ncols() {
                    system[(row, col)] = m[(r, c)];
                    row += 1;
                }
            }
        }
    }
    null_space(&system, rtol).iter().map(block_from).collect()
}

fn intertwining_residual(a: &BlockDiagonal, y: &SubdiagonalY, y2: &SubdiagonalY) -> f64 {
    let mut worst = 0.0f64;
    for l in 1..y.block_type().num_blocks() {
        let e = a.block(l) * y.block(l) - y2.block(l) * a.block(l - 1);
        worst = worst.max(max_abs(&e));
    }
    worst
}

/// Searches the intertwiner space for an invertible element; combination
/// coefficients are drawn from the seeded generator.
fn invertible_intertwiner(
    basis: &[BlockDiagonal],
    y: &SubdiagonalY,
    y2: &SubdiagonalY,
    seed: u64,
) -> Option<BlockDiagonal> {
    let scale = 1.0 + y.max_abs().max(y2.max_abs());
    let good = |a: &BlockDiagonal| -> bool {
        a.cond() <= COND_LIMIT && intertwining_residual(a, y, y2) <= 1e-8 * scale * a.max_abs().max(1.0)
    };
    for b in basis {
        if good(b) {
            return Some(b.clone());
        }
    }
    if basis.len() < 2 {
        return None;
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for _ in 0..32 {
        let mut acc = basis[0].scale(cx(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)));
        for b in &basis[1..] {
            let c = cx(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0));
            acc = BlockDiagonal::new(
                acc.block_type().clone(),
                acc.blocks()
                    .iter()
                    .zip(b.blocks())
                    .map(|(p, q)| p + q.map(|v| v * c))
                    .collect(),
            )
            .expect("shapes match");
        }
        if good(&acc) {
            return Some(acc);
        }
    }
    None
}

/// Finds an invertible block-diagonal `A` with `A Y_p = Y_q A` when the two
/// parameter pairs describe equivalent bundles (equal `eta`, conjugate
/// chains); `None` otherwise.
pub fn bundles_equivalent(
    p: &BundleParams,
    q: &BundleParams,
    tol: f64,
    seed: u64,
) -> Option<BlockDiagonal> {
    if p.block_type() != q.block_type() {
        return None;
    }
    if (p.eta() - q.eta()).abs() > tol.max(1e-12) {
        return None;
    }
    // Identity first, so that p == q recovers A = I.
    let id = BlockDiagonal::identity(p.block_type().clone());
    let scale = 1.0 + p.y().max_abs().max(q.y().max_abs());
    if intertwining_residual(&id, p.y(), q.y()) <= tol.max(1e-12) * scale {
        return Some(id);
    }
    let basis = intertwiner_space(p.y(), q.y(), NULLSPACE_RTOL);
    if basis.is_empty() {
        return None;
    }
    invertible_intertwiner(&basis, p.y(), q.y(), seed)
}

/// Decides unitary equivalence of two irreducible chains of the same block
/// type, returning a block-diagonal unitary `U` with `U y = y2 U` when one
/// exists.
///
/// If an invertible intertwiner `A` exists and the chains are unitarily
/// equivalent, `A* A` lies in the commutant of `y`, which is scalar by
/// irreducibility; `A / sqrt(c)` is then unitary. A non-scalar `A* A`
/// certifies that no unitary intertwiner exists.
pub fn unitary_equivalent(
    y: &SubdiagonalY,
    y2: &SubdiagonalY,
    tol: f64,
    seed: u64,
) -> Result<Option<BlockDiagonal>> {
    if y.block_type() != y2.block_type() {
        return Ok(None);
    }
    if !is_irreducible(y, NULLSPACE_RTOL).irreducible || !is_irreducible(y2, NULLSPACE_RTOL).irreducible
    {
        return Err(Error::ReducibleInput);
    }
    let basis = intertwiner_space(y, y2, NULLSPACE_RTOL);
    if basis.is_empty() {
        return Ok(None);
    }
    let scale = 1.0 + y.max_abs().max(y2.max_abs());
    let mut candidates: Vec<BlockDiagonal> = Vec::new();
    if let Some(a) = invertible_intertwiner(&basis, y, y2, seed) {
        candidates.push(a);
    }
    candidates.extend(basis.iter().cloned());
    for a in &candidates {
        if a.cond() > COND_LIMIT {
            continue;
        }
        let s = a.adjoint().compose(a).expect("same type");
        let n = y.block_type().dim() as f64;
        let trace: Complex64 = s.blocks().iter().map(|b| b.trace()).sum();
        let c = trace.re / n;
        if c <= 0.0 {
            continue;
        }
        let dev = s
            .blocks()
            .iter()
            .enumerate()
            .fold(0.0f64, |acc, (j, b)| {
                let d = b.ncols();
                let _ = j;
                acc.max(max_abs(&(b - CMat::identity(d, d).map(|v| v * cx(c, 0.0)))))
            });
        if dev > tol.max(1e-10) * c.max(1.0) {
            // A*A is not scalar: by irreducibility no unitary intertwiner
            // exists in this direction.
            continue;
        }
        let u = a.scale(cx(1.0 / c.sqrt(), 0.0));
        if u.unitarity_residual() <= tol.max(1e-9)
            && intertwining_residual(&u, y, y2) <= tol.max(1e-9) * scale
        {
            return Ok(Some(u));
        }
    }
    Ok(None)
}

/// Positivity certificate for membership of `(eta, Y)` in the set of
/// parameters whose bundle carries a reproducing kernel.
#[derive(Debug, Clone)]
pub struct PositivityCertificate {
    /// True when every `Delta_l` is positive definite (and `eta > 0`).
    pub in_p: bool,
    /// The Hermitian matrices `Delta_0 = I, Delta_1, ..., Delta_m`.
    pub deltas: Vec<CMat>,
    /// First level at which positivity fails, if any.
    pub failing_level: Option<usize>,
    /// False when `eta <= 0`, which is outside the constructive family.
    pub eta_positive: bool,
}

impl PositivityCertificate {
    /// Block-diagonal `N` with `N_l = Delta_l^{1/2}`, the normalization for
    /// which the kernel at the origin is the identity. Requires membership.
    pub fn normalizing_n(&self, block_type: &BlockType) -> Result<BlockDiagonal> {
        if !self.in_p {
            return Err(Error::InvalidParameter(
                "certificate does not witness membership; no normalizing N exists".into(),
            ));
        }
        let blocks = self
            .deltas
            .iter()
            .map(|d| crate::algebra::matrix::hermitian_sqrt(d, POSITIVITY_TOL))
            .collect::<Result<Vec<_>>>()?;
        BlockDiagonal::new(block_type.clone(), blocks)
    }
}

/// Coefficient `1 / ((l-j)! (2 eta + 2 j)_{l-j})` of the kernel recursion.
pub(crate) fn gamma_coefficient(eta: f64, l: usize, j: usize) -> f64 {
    let k = (l - j) as u32;
    1.0 / (factorial(k) * pochhammer(2.0 * eta + 2.0 * j as f64, k))
}

/// Evaluates the positivity recursion and tests each level.
pub fn membership_in_p(p: &BundleParams, tol: f64) -> PositivityCertificate {
    if p.eta() <= 0.0 {
        return PositivityCertificate {
            in_p: false,
            deltas: Vec::new(),
            failing_level: None,
            eta_positive: false,
        };
    }
    let bt = p.block_type();
    let mut deltas: Vec<CMat> = Vec::with_capacity(bt.num_blocks());
    let mut failing = None;
    for l in 0..bt.num_blocks() {
        let d = bt.size(l);
        let mut delta = CMat::identity(d, d);
        for j in 0..l {
            let coeff = gamma_coefficient(p.eta(), l, j);
            let chain = p.y().chain(l, j);
            delta -= (&chain * &deltas[j] * chain.adjoint()).map(|v| v * coeff);
        }
        let delta = crate::algebra::matrix::hermitian_part(&delta);
        let positive = is_positive_definite(&delta, tol).unwrap_or(false);
        if !positive && failing.is_none() {
            failing = Some(l);
        }
        deltas.push(delta);
    }
    PositivityCertificate {
        in_p: failing.is_none(),
        deltas,
        failing_level: failing,
        eta_positive: true,
    }
}

/// Bisection report for the membership threshold in `eta`.
#[derive(Debug, Clone)]
pub struct ThresholdReport {
    /// Midpoint of the final bracket.
    pub eta_hat: f64,
    /// Largest sampled `eta` without membership (0 when membership held at
    /// the smallest sample).
    pub lower: f64,
    /// Smallest sampled `eta` with membership.
    pub upper: f64,
    /// Whether the sampled indicator was a single false-to-true step.
    pub monotone_on_grid: bool,
    /// The sampled grid of `(eta, membership)` pairs.
    pub grid: Vec<(f64, bool)>,
}

const ETA_SEARCH_CAP: f64 = 1_048_576.0; // 2^20

/// Locates the membership threshold `eta_Y` by doubling and bisection, with
/// a grid diagnostic for the single-step (monotone) shape of the indicator.
pub fn eta_threshold(y: &SubdiagonalY, tol: f64) -> Result<ThresholdReport> {
    let bt = y.block_type().clone();
    let member = |eta: f64| -> bool {
        let params = BundleParams::validate(eta, bt.clone(), y.clone()).expect("shapes fixed");
        membership_in_p(&params, POSITIVITY_TOL).in_p
    };
    let tol = if tol > 0.0 { tol } else { 1e-10 };

    let floor = 1e-12;
    let (mut lower, mut upper);
    if member(floor) {
        lower = 0.0;
        upper = floor;
    } else {
        let mut hi = 1.0;
        while !member(hi) {
            hi *= 2.0;
            if hi > ETA_SEARCH_CAP {
                return Err(Error::ThresholdSearchFailed { cap: ETA_SEARCH_CAP });
            }
        }
        lower = if hi > 1.0 { hi / 2.0 } else { floor };
        upper = hi;
        while upper - lower > tol {
            let mid = 0.5 * (lower + upper);
            if member(mid) {
                upper = mid;
            } else {
                lower = mid;
            }
        }
    }
    let eta_hat = 0.5 * (lower + upper);

    // Diagnostic: the indicator should be a single false-to-true step.
    let radius = (0.5 * eta_hat).max(100.0 * tol).max(1e-6);
    let lo_grid = (eta_hat - radius).max(floor);
    let hi_grid = eta_hat + radius;
    let mut grid = Vec::with_capacity(50);
    for i in 0..50 {
        let eta = lo_grid + (hi_grid - lo_grid) * i as f64 / 49.0;
        grid.push((eta, member(eta)));
    }
    let mut monotone = true;
    let mut seen_true = false;
    for &(_, m) in &grid {
        if m {
            seen_true = true;
        } else if seen_true {
            monotone = false;
        }
    }
    Ok(ThresholdReport { eta_hat, lower, upper, monotone_on_grid: monotone, grid })
}

/// Transports `(E, H)` to the identity Hermitian structure: with
/// `A = H^{1/2}` the pair becomes `(eta, A Y A^{-1})`.
pub fn normalize_to_identity_metric(p: &BundleParams, h: &BlockDiagonal) -> Result<BundleParams> {
    if h.block_type() != p.block_type() {
        return Err(Error::Shape("Hermitian structure has a different block type".into()));
    }
    for b in h.blocks() {
        if !is_positive_definite(b, POSITIVITY_TOL)? {
            let min = crate::algebra::matrix::hermitian_eigenvalues(b)?
                .first()
                .copied()
                .unwrap_or(f64::NAN);
            return Err(Error::NotPositiveDefinite { min_eigenvalue: min });
        }
    }
    let a = h.hermitian_sqrt(POSITIVITY_TOL)?;
    let y2 = p.y().conjugated(&a)?;
    BundleParams::validate(p.eta(), p.block_type().clone(), y2)
}

/// Draws a random parameter set with the given block type: a chain with
/// independent Gaussian blocks scaled to unit size and a random `eta` in
/// `(lo, hi)`.
pub fn random_params<R: Rng + ?Sized>(
    rng: &mut R,
    block_type: BlockType,
    eta_lo: f64,
    eta_hi: f64,
) -> BundleParams {
    let blocks: Vec<CMat> = (1..block_type.num_blocks())
        .map(|j| {
            let g = crate::algebra::matrix::random_complex_matrix(
                rng,
                block_type.size(j),
                block_type.size(j - 1),
            );
            let s = crate::algebra::matrix::spectral_norm(&g).max(1e-6);
            g.map(|v| v / s)
        })
        .collect();
    let y = SubdiagonalY::new(block_type.clone(), blocks).expect("shapes match");
    let eta = rng.gen_range(eta_lo..eta_hi);
    BundleParams::validate(eta, block_type, y).expect("valid by construction")
}

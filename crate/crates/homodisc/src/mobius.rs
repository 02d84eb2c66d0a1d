//! Disc automorphisms near the identity and the bundle multiplier.
//!
//! An element is stored as the pair `(a, b)` with `|a|^2 - |b|^2 = 1`,
//! acting on the disc by `z -> (a z + b) / (conj(b) z + conj(a))`. The
//! fractional powers of the derivative cocycle use the principal branch of
//! `log(conj(b) z + conj(a))`, which is single-valued as long as
//! `Re(conj(b) z + conj(a)) > 0` on the closed disc, i.e. `Re(a) > |b|`.
//! All identities of interest are identities of real-analytic functions,
//! so verifying them on this neighborhood of the identity decides them.

use num_complex::Complex64;
use rand::Rng;

use crate::algebra::matrix::{cx, max_abs, CMat};
use crate::algebra::special::factorial;
use crate::bundle::BundleParams;
use crate::error::{Error, Result};

/// A disc automorphism `z -> (a z + b) / (conj(b) z + conj(a))` with
/// `|a|^2 - |b|^2 = 1`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MobiusElement {
    a: Complex64,
    b: Complex64,
}

impl MobiusElement {
    /// Validates the determinant normalization `|a|^2 - |b|^2 = 1`.
    pub fn new(a: Complex64, b: Complex64) -> Result<Self> {
        let det = a.norm_sqr() - b.norm_sqr();
        if (det - 1.0).abs() > 1e-12 {
            return Err(Error::InvalidParameter(format!(
                "|a|^2 - |b|^2 = {det}, expected 1"
            )));
        }
        Ok(MobiusElement { a, b })
    }

    pub fn identity() -> Self {
        MobiusElement { a: cx(1.0, 0.0), b: cx(0.0, 0.0) }
    }

    /// Rotation by `theta in (-pi, pi)`: `z -> e^{i theta} z`.
    pub fn rotation(theta: f64) -> Result<Self> {
        if theta.abs() >= std::f64::consts::PI {
            return Err(Error::InvalidParameter(format!(
                "rotation angle {theta} outside (-pi, pi)"
            )));
        }
        Ok(MobiusElement { a: Complex64::from_polar(1.0, theta / 2.0), b: cx(0.0, 0.0) })
    }

    /// Hyperbolic element along the real axis: `0 -> tanh t`.
    pub fn hyperbolic(t: f64) -> Self {
        MobiusElement { a: cx(t.cosh(), 0.0), b: cx(t.sinh(), 0.0) }
    }

    /// Random element near the identity: `|b| <= scale`, rotation part
    /// bounded by `scale`.
    pub fn random_small<R: Rng + ?Sized>(rng: &mut R, scale: f64) -> Self {
        let b = cx(rng.gen_range(-scale..scale), rng.gen_range(-scale..scale));
        let theta = rng.gen_range(-scale..scale);
        let a = Complex64::from_polar((1.0 + b.norm_sqr()).sqrt(), theta / 2.0);
        MobiusElement { a, b }
    }

    pub fn a(&self) -> Complex64 {
        self.a
    }

    pub fn b(&self) -> Complex64 {
        self.b
    }

    /// The cocycle entry `c_g`: the lower-left matrix entry `conj(b)`.
    pub fn c(&self) -> Complex64 {
        self.b.conj()
    }

    /// Denominator `j_g(z) = conj(b) z + conj(a)` of the action.
    fn denominator(&self, z: Complex64) -> Complex64 {
        self.b.conj() * z + self.a.conj()
    }

    /// Margin `Re(a) - |b|`; positive exactly when the principal branch is
    /// valid on the closed disc.
    pub fn branch_margin(&self) -> f64 {
        self.a.re - self.b.norm()
    }

    pub fn is_branch_valid(&self) -> bool {
        self.branch_margin() > 0.0
    }

    fn require_branch(&self) -> Result<()> {
        if !self.is_branch_valid() {
            return Err(Error::BranchViolation { real_part: self.branch_margin() });
        }
        Ok(())
    }

    /// Applies the automorphism; requires `|z| < 1`.
    pub fn act(&self, z: Complex64) -> Result<Complex64> {
        let r = z.norm();
        if r >= 1.0 {
            return Err(Error::OutsideDisc { modulus: r });
        }
        Ok((self.a * z + self.b) / self.denominator(z))
    }

    /// Derivative `g'(z) = (conj(b) z + conj(a))^{-2}`.
    pub fn derivative(&self, z: Complex64) -> Result<Complex64> {
        self.require_branch()?;
        if z.norm() > 1.0 {
            return Err(Error::OutsideDisc { modulus: z.norm() });
        }
        let j = self.denominator(z);
        Ok((j * j).inv())
    }

    /// Principal-branch power `(g'(z))^s = (conj(b) z + conj(a))^{-2 s}`,
    /// continuous on the branch-valid set; for a rotation by `theta` this
    /// equals `e^{i s theta}`.
    pub fn fractional_power(&self, z: Complex64, s: f64) -> Result<Complex64> {
        self.require_branch()?;
        if z.norm() > 1.0 {
            return Err(Error::OutsideDisc { modulus: z.norm() });
        }
        let j = self.denominator(z);
        if j.re <= 0.0 {
            return Err(Error::BranchViolation { real_part: j.re });
        }
        Ok(j.powf(-2.0 * s))
    }

    /// Composition `self . other` (apply `other` first): the matrix product
    /// of the two `(a, b)` matrices, renormalized. Fails when the result
    /// leaves the branch-valid neighborhood of the identity.
    pub fn compose(&self, other: &MobiusElement) -> Result<MobiusElement> {
        let a = self.a * other.a + self.b * other.b.conj();
        let b = self.a * other.b + self.b * other.a.conj();
        let det = (a.norm_sqr() - b.norm_sqr()).sqrt();
        let g = MobiusElement { a: a / det, b: b / det };
        if !g.is_branch_valid() {
            return Err(Error::BranchViolation { real_part: g.branch_margin() });
        }
        Ok(g)
    }

    pub fn inverse(&self) -> MobiusElement {
        MobiusElement { a: self.a.conj(), b: -self.b }
    }
}

/// Block lower-triangular multiplier `J_g(z)` of the bundle `(eta, Y)`:
///
/// ```text
/// (J_g(z))_{p,l} = (-c_g)^{p-l} / (p-l)!  (g'(z))^{eta + (p+l)/2}
///                  Y_p ... Y_{l+1}          for p >= l,
/// ```
///
/// and zero above the block diagonal.
pub fn multiplier(g: &MobiusElement, z: Complex64, params: &BundleParams) -> Result<CMat> {
    if z.norm() >= 1.0 {
        return Err(Error::OutsideDisc { modulus: z.norm() });
    }
    let bt = params.block_type();
    let n = bt.dim();
    let minus_c = -g.c();
    let mut out = CMat::zeros(n, n);
    for p in 0..bt.num_blocks() {
        for l in 0..=p {
            let s = params.eta() + (p + l) as f64 / 2.0;
            let power = g.fractional_power(z, s)?;
            let scalar = minus_c.powu((p - l) as u32) / factorial((p - l) as u32) * power;
            let chain = params.y().chain(p, l);
            let (r0, c0) = (bt.offset(p), bt.offset(l));
            out.view_mut((r0, c0), chain.shape())
                .copy_from(&chain.map(|v| v * scalar));
        }
    }
    Ok(out)
}

/// Deviation from the multiplier composition law at `z`:
/// `|| J_{g1 g2}(z) - J_{g2}(z) J_{g1}(g2 z) ||_max`.
///
/// The factor for the element applied first stands on the left; this is the
/// order in which the displayed multiplier composes exactly.
pub fn cocycle_residual(
    g1: &MobiusElement,
    g2: &MobiusElement,
    z: Complex64,
    params: &BundleParams,
) -> Result<f64> {
    let composed = g1.compose(g2)?;
    let j12 = multiplier(&composed, z, params)?;
    let j2 = multiplier(g2, z, params)?;
    let j1 = multiplier(g1, g2.act(z)?, params)?;
    Ok(max_abs(&(j12 - j2 * j1)))
}

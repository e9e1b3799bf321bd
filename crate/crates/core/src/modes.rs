//! Transverse-mode mathematics in one transverse dimension.
//!
//! Hermite-Gauss modes use the convention
//! `u_0(x) = (2 / (π w0²))^{1/4} exp(-x² / w0²)`, under which a beam displaced
//! by `d` carries `d / w0` of amplitude in `u_1` to first order and a beam
//! tilted by transverse wavenumber `p` carries `i w0 p / 2`.
//!
//! The flipped mode `v_1(x) = sign(x) u_0(x)` is the mode a split detector
//! interrogates when the mean field is `v_0 = u_0`. [`ModeBasis::flipped`]
//! completes `{v_0, v_1}` to an orthonormal basis by Gram-Schmidt over the
//! remaining Hermite-Gauss modes.

use crate::error::{Error, Result};
use crate::quadrature::{adaptive_integrate, GaussHermite};
use nalgebra::DMatrix;
use num_complex::Complex64 as C64;
use std::f64::consts::{FRAC_PI_2, PI};
use std::sync::Arc;

/// Default number of modes kept per beam.
pub const DEFAULT_TRUNCATION: usize = 8;

// Half-range integrals stop here, in waists. The integrands carry at least
// exp(-2x²/w0²) so the neglected tail is below 1e-150.
const HALF_RANGE_EXTENT: f64 = 14.0;
const HALF_RANGE_TOL: f64 = 1e-14;
const WAIST_MATCH_TOL: f64 = 1e-12;

/// Evaluates the normalized Hermite-Gauss mode `u_order(x)` for waist `waist`.
///
/// Uses the three-term recurrence of the orthonormal Hermite functions, so the
/// Gaussian envelope is carried along and nothing overflows at high order.
pub fn hg_eval(order: usize, x: f64, waist: f64) -> Result<f64> {
    check_waist(waist)?;
    Ok(hg_unchecked(order, x, waist))
}

pub(crate) fn hg_unchecked(order: usize, x: f64, waist: f64) -> f64 {
    let t = std::f64::consts::SQRT_2 * x / waist;
    let jacobian = (std::f64::consts::SQRT_2 / waist).sqrt();
    let mut prev = 0.0;
    let mut cur = PI.powf(-0.25) * (-0.5 * t * t).exp();
    for k in 0..order {
        let kf = k as f64;
        let next = (2.0 / (kf + 1.0)).sqrt() * t * cur - (kf / (kf + 1.0)).sqrt() * prev;
        prev = cur;
        cur = next;
    }
    cur * jacobian
}

fn check_waist(waist: f64) -> Result<()> {
    if waist.is_finite() && waist > 0.0 {
        Ok(())
    } else {
        Err(Error::InvalidArgument(format!("waist must be positive, got {waist}")))
    }
}

/// Uniformly sampled complex profile, linearly interpolated between samples and
/// zero outside the grid.
#[derive(Debug, Clone, PartialEq)]
pub struct SampledGrid {
    pub x_start: f64,
    pub dx: f64,
    pub values: Vec<C64>,
}

impl SampledGrid {
    pub fn new(x_start: f64, dx: f64, values: Vec<C64>) -> Result<Self> {
        if dx.is_nan() || dx <= 0.0 || values.len() < 2 {
            return Err(Error::InvalidArgument(
                "sampled grid needs dx > 0 and at least two samples".into(),
            ));
        }
        Ok(Self { x_start, dx, values })
    }

    /// Samples `f` on `n` points spanning `[x_start, x_end]`.
    pub fn from_fn<F: Fn(f64) -> C64>(x_start: f64, x_end: f64, n: usize, f: F) -> Result<Self> {
        if n < 2 || x_end.is_nan() || x_start.is_nan() || x_end <= x_start {
            return Err(Error::InvalidArgument("invalid sampling interval".into()));
        }
        let dx = (x_end - x_start) / (n - 1) as f64;
        let values = (0..n).map(|i| f(x_start + dx * i as f64)).collect();
        Self::new(x_start, dx, values)
    }

    fn x_end(&self) -> f64 {
        self.x_start + self.dx * (self.values.len() - 1) as f64
    }

    fn eval(&self, x: f64) -> C64 {
        if x < self.x_start || x > self.x_end() {
            return C64::new(0.0, 0.0);
        }
        let pos = (x - self.x_start) / self.dx;
        let i = (pos.floor() as usize).min(self.values.len() - 2);
        let frac = pos - i as f64;
        self.values[i] * (1.0 - frac) + self.values[i + 1] * frac
    }

    /// Trapezoid sum of `conj(f) g` over this grid, with `self` supplying `g`
    /// when `self_is_ket` and `f` otherwise.
    fn trapezoid(&self, other: &ModeProfile, self_is_ket: bool) -> C64 {
        let last = self.values.len() - 1;
        let sum: C64 = self
            .values
            .iter()
            .enumerate()
            .map(|(i, &v)| {
                let x = self.x_start + self.dx * i as f64;
                let o = other.eval(x);
                let term = if self_is_ket { o.conj() * v } else { v.conj() * o };
                if i == 0 || i == last {
                    term * 0.5
                } else {
                    term
                }
            })
            .sum();
        sum * self.dx
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum ProfileKind {
    HermiteGauss(usize),
    /// `sign(x) u_0(x)`.
    Flipped,
    Sampled(SampledGrid),
    /// Linear combination of other profiles with the same waist.
    Superposition(Vec<(C64, ModeProfile)>),
}

/// A transverse amplitude profile tied to a waist.
#[derive(Debug, Clone, PartialEq)]
pub struct ModeProfile {
    kind: ProfileKind,
    waist: f64,
}

impl ModeProfile {
    pub fn hermite_gauss(order: usize, waist: f64) -> Result<Self> {
        check_waist(waist)?;
        Ok(Self {
            kind: ProfileKind::HermiteGauss(order),
            waist,
        })
    }

    pub fn flipped(waist: f64) -> Result<Self> {
        check_waist(waist)?;
        Ok(Self {
            kind: ProfileKind::Flipped,
            waist,
        })
    }

    pub fn sampled(grid: SampledGrid, waist: f64) -> Result<Self> {
        check_waist(waist)?;
        Ok(Self {
            kind: ProfileKind::Sampled(grid),
            waist,
        })
    }

    pub fn superposition(terms: Vec<(C64, ModeProfile)>, waist: f64) -> Result<Self> {
        check_waist(waist)?;
        if terms.is_empty() {
            return Err(Error::InvalidArgument("empty superposition".into()));
        }
        for (_, p) in &terms {
            ensure_same_waist(waist, p.waist)?;
        }
        Ok(Self {
            kind: ProfileKind::Superposition(terms),
            waist,
        })
    }

    pub fn kind(&self) -> &ProfileKind {
        &self.kind
    }

    pub fn waist(&self) -> f64 {
        self.waist
    }

    pub fn eval(&self, x: f64) -> C64 {
        match &self.kind {
            ProfileKind::HermiteGauss(n) => C64::new(hg_unchecked(*n, x, self.waist), 0.0),
            ProfileKind::Flipped => {
                let u0 = hg_unchecked(0, x, self.waist);
                // sign(0) = 0 keeps the profile odd
                C64::new(
                    if x > 0.0 {
                        u0
                    } else if x < 0.0 {
                        -u0
                    } else {
                        0.0
                    },
                    0.0,
                )
            }
            ProfileKind::Sampled(grid) => grid.eval(x),
            ProfileKind::Superposition(terms) => terms.iter().map(|(c, p)| c * p.eval(x)).sum(),
        }
    }

    /// True when the profile has a jump at `x = 0` that defeats Gauss-Hermite.
    fn is_discontinuous(&self) -> bool {
        match &self.kind {
            ProfileKind::Flipped => true,
            ProfileKind::Superposition(terms) => terms.iter().any(|(_, p)| p.is_discontinuous()),
            _ => false,
        }
    }

    pub fn norm(&self) -> f64 {
        // ⟨f|f⟩ is real up to rounding
        overlap_unchecked(self, self).re.max(0.0).sqrt()
    }
}

fn ensure_same_waist(a: f64, b: f64) -> Result<()> {
    if (a - b).abs() <= WAIST_MATCH_TOL * a.abs().max(b.abs()) {
        Ok(())
    } else {
        Err(Error::InvalidArgument(format!("mismatched waists {a} and {b}")))
    }
}

/// `⟨f|g⟩ = ∫ conj(f(x)) g(x) dx`.
///
/// Smooth pairs use the default Gauss-Hermite rule. Anything involving the
/// flipped mode is split at `x = 0` and integrated adaptively on each half.
/// Sampled profiles are integrated with the trapezoid rule on their own grid.
pub fn overlap(f: &ModeProfile, g: &ModeProfile) -> Result<C64> {
    ensure_same_waist(f.waist, g.waist)?;
    Ok(overlap_unchecked(f, g))
}

fn overlap_unchecked(f: &ModeProfile, g: &ModeProfile) -> C64 {
    use ProfileKind::*;
    match (&f.kind, &g.kind) {
        (Superposition(terms), _) => terms.iter().map(|(c, p)| c.conj() * overlap_unchecked(p, g)).sum(),
        (_, Superposition(terms)) => terms.iter().map(|(c, p)| c * overlap_unchecked(f, p)).sum(),
        (Sampled(grid), _) => grid.trapezoid(g, false),
        (_, Sampled(grid)) => grid.trapezoid(f, true),
        _ if f.is_discontinuous() || g.is_discontinuous() => half_range_overlap(f, g),
        _ => gauss_hermite_overlap(f.waist, |x| f.eval(x).conj() * g.eval(x)),
    }
}

fn gauss_hermite_overlap<F: Fn(f64) -> C64>(waist: f64, integrand: F) -> C64 {
    GaussHermite::default_rule().integrate_enveloped(waist, integrand)
}

fn half_range_overlap(f: &ModeProfile, g: &ModeProfile) -> C64 {
    let extent = HALF_RANGE_EXTENT * f.waist;
    let integrand = |x: f64| f.eval(x).conj() * g.eval(x);
    let right = adaptive_integrate(integrand, 0.0, extent, HALF_RANGE_TOL);
    let left = adaptive_integrate(|x: f64| integrand(-x), 0.0, extent, HALF_RANGE_TOL);
    left + right
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BasisKind {
    /// `u_0 .. u_{M-1}`.
    HermiteGauss,
    /// `v_0 = u_0`, `v_1` = flipped mode, then Gram-Schmidt completions.
    Flipped,
}

/// Ordered, orthonormal, truncated set of transverse modes sharing one waist.
#[derive(Debug, Clone, PartialEq)]
pub struct ModeBasis {
    kind: BasisKind,
    waist: f64,
    profiles: Vec<ModeProfile>,
}

impl ModeBasis {
    pub fn hermite_gauss(waist: f64, truncation: usize) -> Result<Self> {
        check_waist(waist)?;
        check_truncation(truncation)?;
        let profiles = (0..truncation)
            .map(|n| ModeProfile::hermite_gauss(n, waist))
            .collect::<Result<_>>()?;
        Ok(Self {
            kind: BasisKind::HermiteGauss,
            waist,
            profiles,
        })
    }

    /// Basis adapted to split detection: mean-field mode, flipped mode, and
    /// `truncation - 2` further modes orthogonalized against both.
    pub fn flipped(waist: f64, truncation: usize) -> Result<Self> {
        check_waist(waist)?;
        check_truncation(truncation)?;
        let u = |n| ModeProfile::hermite_gauss(n, waist);
        let mut profiles = vec![u(0)?, ModeProfile::flipped(waist)?];
        let mut candidate = 1;
        while profiles.len() < truncation {
            let raw = u(candidate)?;
            candidate += 1;
            let mut terms = vec![(C64::new(1.0, 0.0), raw.clone())];
            for p in &profiles {
                let c = overlap_unchecked(p, &raw);
                if c.norm() > 1e-14 {
                    terms.push((-c, p.clone()));
                }
            }
            let residual = ModeProfile::superposition(flatten(terms), waist)?;
            let norm = residual.norm();
            if norm < 1e-6 {
                continue;
            }
            let scaled = match residual.kind {
                ProfileKind::Superposition(terms) => terms.into_iter().map(|(c, p)| (c / norm, p)).collect::<Vec<_>>(),
                _ => unreachable!(),
            };
            let profile = if scaled.len() == 1 {
                scaled[0].1.clone()
            } else {
                ModeProfile::superposition(scaled, waist)?
            };
            profiles.push(profile);
        }
        Ok(Self {
            kind: BasisKind::Flipped,
            waist,
            profiles,
        })
    }

    pub fn kind(&self) -> BasisKind {
        self.kind
    }

    pub fn waist(&self) -> f64 {
        self.waist
    }

    pub fn truncation(&self) -> usize {
        self.profiles.len()
    }

    pub fn profiles(&self) -> &[ModeProfile] {
        &self.profiles
    }

    pub fn profile(&self, index: usize) -> Result<&ModeProfile> {
        self.profiles.get(index).ok_or(Error::IndexOutOfRange {
            what: "mode",
            index,
            limit: self.profiles.len(),
        })
    }

    /// Matrix of pairwise overlaps `⟨p_m|p_n⟩`.
    pub fn gram_matrix(&self) -> DMatrix<C64> {
        let m = self.profiles.len();
        DMatrix::from_fn(m, m, |i, j| overlap_unchecked(&self.profiles[i], &self.profiles[j]))
    }

    /// `diag(i^n)`: the mode-order Gouy factors picked up between near and far
    /// field. Meaningful for a Hermite-Gauss basis.
    pub fn farfield_unitary(&self) -> DMatrix<C64> {
        DMatrix::from_diagonal(&nalgebra::DVector::from_iterator(
            self.truncation(),
            (0..self.truncation()).map(gouy_factor),
        ))
    }

    /// Coefficients of an arbitrary unit-norm profile in this basis.
    pub fn decompose(self: &Arc<Self>, profile: &ModeProfile) -> Result<ModalCoefficients> {
        ensure_same_waist(self.waist, profile.waist)?;
        let coeffs = self.profiles.iter().map(|p| overlap_unchecked(p, profile)).collect();
        Ok(ModalCoefficients::with_implied_residual(Arc::clone(self), coeffs))
    }

    fn require_hermite_gauss(&self, op: &str) -> Result<()> {
        match self.kind {
            BasisKind::HermiteGauss => Ok(()),
            BasisKind::Flipped => Err(Error::BasisMismatch(format!("{op} requires a Hermite-Gauss basis"))),
        }
    }
}

fn check_truncation(truncation: usize) -> Result<()> {
    if truncation >= 2 {
        Ok(())
    } else {
        Err(Error::InvalidArgument(format!(
            "truncation must be at least 2, got {truncation}"
        )))
    }
}

// Expands nested superpositions into primitive terms and merges duplicates.
fn flatten(terms: Vec<(C64, ModeProfile)>) -> Vec<(C64, ModeProfile)> {
    let mut out: Vec<(C64, ModeProfile)> = Vec::new();
    let mut push = |c: C64, p: ModeProfile| {
        if let Some(slot) = out.iter_mut().find(|(_, q)| *q == p) {
            slot.0 += c;
        } else {
            out.push((c, p));
        }
    };
    for (c, p) in terms {
        match p.kind {
            ProfileKind::Superposition(inner) => {
                for (ci, pi) in flatten(inner) {
                    push(c * ci, pi);
                }
            }
            _ => push(c, p),
        }
    }
    out
}

fn gouy_factor(n: usize) -> C64 {
    match n % 4 {
        0 => C64::new(1.0, 0.0),
        1 => C64::new(0.0, 1.0),
        2 => C64::new(-1.0, 0.0),
        _ => C64::new(0.0, -1.0),
    }
}

/// A profile expressed in a [`ModeBasis`], with the L2 weight the truncated
/// basis cannot represent kept in `residual_norm`.
#[derive(Debug, Clone, PartialEq)]
pub struct ModalCoefficients {
    basis: Arc<ModeBasis>,
    coeffs: Vec<C64>,
    residual_norm: f64,
}

impl ModalCoefficients {
    pub fn new(basis: Arc<ModeBasis>, coeffs: Vec<C64>, residual_norm: f64) -> Result<Self> {
        if coeffs.len() != basis.truncation() {
            return Err(Error::InvalidArgument(format!(
                "expected {} coefficients, got {}",
                basis.truncation(),
                coeffs.len()
            )));
        }
        if !(0.0..=1.0).contains(&residual_norm) {
            return Err(Error::InvalidArgument(format!(
                "residual norm {residual_norm} outside [0, 1]"
            )));
        }
        Ok(Self {
            basis,
            coeffs,
            residual_norm,
        })
    }

    /// The pure basis mode `index`.
    pub fn unit(basis: Arc<ModeBasis>, index: usize) -> Result<Self> {
        basis.profile(index)?;
        let mut coeffs = vec![C64::new(0.0, 0.0); basis.truncation()];
        coeffs[index] = C64::new(1.0, 0.0);
        Ok(Self {
            basis,
            coeffs,
            residual_norm: 0.0,
        })
    }

    fn with_implied_residual(basis: Arc<ModeBasis>, coeffs: Vec<C64>) -> Self {
        let captured: f64 = coeffs.iter().map(|c| c.norm_sqr()).sum();
        let residual_norm = (1.0 - captured).max(0.0).sqrt();
        Self {
            basis,
            coeffs,
            residual_norm,
        }
    }

    pub fn basis(&self) -> &Arc<ModeBasis> {
        &self.basis
    }

    pub fn coeffs(&self) -> &[C64] {
        &self.coeffs
    }

    pub fn residual_norm(&self) -> f64 {
        self.residual_norm
    }

    /// `Σ |c_n|²`, the weight captured by the basis.
    pub fn captured_weight(&self) -> f64 {
        self.coeffs.iter().map(|c| c.norm_sqr()).sum()
    }

    /// Captured weight plus residual weight.
    pub fn total_norm_sqr(&self) -> f64 {
        self.captured_weight() + self.residual_norm * self.residual_norm
    }
}

/// Coefficients of the displaced ground mode `u_0(x - d)`.
pub fn decompose_displaced_tem00(d: f64, basis: &Arc<ModeBasis>) -> Result<ModalCoefficients> {
    basis.require_hermite_gauss("displacement decomposition")?;
    if !d.is_finite() {
        return Err(Error::InvalidArgument("displacement must be finite".into()));
    }
    let w = basis.waist;
    let coeffs = (0..basis.truncation())
        .map(|n| gauss_hermite_overlap(w, |x| C64::new(hg_unchecked(n, x, w) * hg_unchecked(0, x - d, w), 0.0)))
        .collect();
    Ok(ModalCoefficients::with_implied_residual(Arc::clone(basis), coeffs))
}

/// Coefficients of the tilted ground mode `exp(i p x) u_0(x)` (small-angle
/// form, pivot at the waist).
pub fn decompose_tilted_tem00(p: f64, basis: &Arc<ModeBasis>) -> Result<ModalCoefficients> {
    basis.require_hermite_gauss("tilt decomposition")?;
    if !p.is_finite() {
        return Err(Error::InvalidArgument("transverse wavenumber must be finite".into()));
    }
    let w = basis.waist;
    let coeffs = (0..basis.truncation())
        .map(|n| {
            gauss_hermite_overlap(w, |x| {
                C64::from_polar(hg_unchecked(n, x, w) * hg_unchecked(0, x, w), p * x)
            })
        })
        .collect();
    Ok(ModalCoefficients::with_implied_residual(Arc::clone(basis), coeffs))
}

/// Hermite-Gauss coefficients of the flipped mode. Even orders vanish by
/// parity and are set to exactly zero.
pub fn flipped_mode_coeffs(basis: &Arc<ModeBasis>) -> Result<ModalCoefficients> {
    basis.require_hermite_gauss("flipped-mode decomposition")?;
    let w = basis.waist;
    let extent = HALF_RANGE_EXTENT * w;
    let coeffs = (0..basis.truncation())
        .map(|n| {
            if n % 2 == 0 {
                C64::new(0.0, 0.0)
            } else {
                let half = adaptive_integrate(
                    |x| C64::new(hg_unchecked(n, x, w) * hg_unchecked(0, x, w), 0.0),
                    0.0,
                    extent,
                    HALF_RANGE_TOL,
                );
                C64::new(2.0 * half.re, 0.0)
            }
        })
        .collect();
    Ok(ModalCoefficients::with_implied_residual(Arc::clone(basis), coeffs))
}

/// Propagates Hermite-Gauss coefficients to the far field: `c_n -> i^n c_n`.
pub fn farfield(coeffs: &ModalCoefficients) -> Result<ModalCoefficients> {
    coeffs.basis.require_hermite_gauss("far-field propagation")?;
    Ok(ModalCoefficients {
        basis: Arc::clone(&coeffs.basis),
        coeffs: coeffs
            .coeffs
            .iter()
            .enumerate()
            .map(|(n, c)| c * gouy_factor(n))
            .collect(),
        residual_norm: coeffs.residual_norm,
    })
}

/// Phase of the Gouy factor for mode `n`, in radians.
pub fn gouy_phase(n: usize) -> f64 {
    n as f64 * FRAC_PI_2
}

#[cfg(test)]
mod tests {
    use super::*;

    fn hg(m: usize) -> Arc<ModeBasis> {
        Arc::new(ModeBasis::hermite_gauss(1.0, m).unwrap())
    }

    // Composite Simpson on [-L, L], independent of the library quadrature.
    fn simpson<F: Fn(f64) -> f64>(f: F, a: f64, b: f64, n: usize) -> f64 {
        let h = (b - a) / n as f64;
        let mut s = f(a) + f(b);
        for i in 1..n {
            let x = a + h * i as f64;
            s += if i % 2 == 1 { 4.0 } else { 2.0 } * f(x);
        }
        s * h / 3.0
    }

    #[test]
    fn ground_mode_peak_matches_normalization_oracle() {
        // u0 ∝ exp(-x²); normalize numerically and compare the peak
        let norm = simpson(|x| (-2.0 * x * x).exp(), -10.0, 10.0, 20_000);
        let expected = 1.0 / norm.sqrt();
        assert!((expected - 0.893_244).abs() < 1e-6);
        assert!((hg_eval(0, 0.0, 1.0).unwrap() - expected).abs() < 1e-10);
        assert_eq!(hg_eval(1, 0.0, 1.0).unwrap(), 0.0);
    }

    #[test]
    fn modes_are_normalized_by_simpson() {
        for w in [0.5, 1.0, 2.5] {
            for n in 0..8 {
                let v = simpson(|x| hg_unchecked(n, x, w).powi(2), -12.0 * w, 12.0 * w, 40_000);
                assert!((v - 1.0).abs() < 1e-10, "n={n} w={w} norm={v}");
            }
        }
    }

    #[test]
    fn zero_crossings_equal_order() {
        for n in 0..12 {
            let mut crossings = 0;
            let mut prev = hg_unchecked(n, -8.0, 1.0);
            for i in 1..=160_001 {
                let x = -8.0 + 16.0 * i as f64 / 160_001.0;
                let v = hg_unchecked(n, x, 1.0);
                if v != 0.0 && prev != 0.0 && v.signum() != prev.signum() {
                    crossings += 1;
                }
                if v != 0.0 {
                    prev = v;
                }
            }
            assert_eq!(crossings, n, "order {n}");
        }
        assert!(hg_unchecked(0, 0.0, 1.0) > 0.0);
    }

    #[test]
    fn high_order_stays_normalized() {
        let rule = GaussHermite::default_rule();
        let v = rule.integrate_enveloped(1.0, |x| C64::new(hg_unchecked(32, x, 1.0).powi(2), 0.0));
        assert!((v.re - 1.0).abs() < 1e-10);
    }

    #[test]
    fn rejects_bad_waist() {
        assert!(hg_eval(0, 0.0, 0.0).is_err());
        assert!(hg_eval(0, 0.0, -1.0).is_err());
        assert!(ModeBasis::hermite_gauss(1.0, 1).is_err());
    }

    #[test]
    fn hermite_gauss_gram_is_identity() {
        let basis = ModeBasis::hermite_gauss(1.3, 12).unwrap();
        let g = basis.gram_matrix();
        for i in 0..12 {
            for j in 0..12 {
                let expected = if i == j { 1.0 } else { 0.0 };
                assert!((g[(i, j)] - C64::new(expected, 0.0)).norm() < 1e-8);
            }
        }
    }

    #[test]
    fn flipped_basis_gram_is_identity() {
        let basis = ModeBasis::flipped(1.0, 8).unwrap();
        assert_eq!(basis.truncation(), 8);
        let g = basis.gram_matrix();
        for i in 0..8 {
            for j in 0..8 {
                let expected = if i == j { 1.0 } else { 0.0 };
                assert!(
                    (g[(i, j)] - C64::new(expected, 0.0)).norm() < 1e-8,
                    "({i},{j}) {}",
                    g[(i, j)]
                );
            }
        }
    }

    #[test]
    fn overlap_is_hermitian_and_checks_waists() {
        let w = 1.0;
        let a = ModeProfile::superposition(
            vec![
                (C64::new(0.6, 0.0), ModeProfile::hermite_gauss(1, w).unwrap()),
                (C64::new(0.0, 0.8), ModeProfile::flipped(w).unwrap()),
            ],
            w,
        )
        .unwrap();
        let b = ModeProfile::hermite_gauss(3, w).unwrap();
        let ab = overlap(&a, &b).unwrap();
        let ba = overlap(&b, &a).unwrap();
        assert!((ab - ba.conj()).norm() < 1e-14);
        let other = ModeProfile::hermite_gauss(0, 2.0).unwrap();
        assert!(overlap(&b, &other).is_err());
    }

    #[test]
    fn flipped_overlap_with_first_mode() {
        // oracle: 2 ∫_0^∞ u1 u0 dx by Simpson
        let oracle = 2.0 * simpson(|x| hg_unchecked(1, x, 1.0) * hg_unchecked(0, x, 1.0), 0.0, 12.0, 40_000);
        assert!((oracle - (2.0 / PI).sqrt()).abs() < 1e-10);
        let v1 = ModeProfile::flipped(1.0).unwrap();
        let u1 = ModeProfile::hermite_gauss(1, 1.0).unwrap();
        let c = overlap(&v1, &u1).unwrap();
        assert!((c.re - oracle).abs() < 1e-8);
        assert!(c.im.abs() < 1e-15);
    }

    #[test]
    fn sampled_profile_overlap() {
        let grid = SampledGrid::from_fn(-10.0, 10.0, 4001, |x| C64::new(hg_unchecked(2, x, 1.0), 0.0)).unwrap();
        let s = ModeProfile::sampled(grid, 1.0).unwrap();
        let u2 = ModeProfile::hermite_gauss(2, 1.0).unwrap();
        let u0 = ModeProfile::hermite_gauss(0, 1.0).unwrap();
        assert!((overlap(&u2, &s).unwrap().re - 1.0).abs() < 1e-8);
        assert!(overlap(&s, &u0).unwrap().norm() < 1e-8);
    }

    fn displaced_oracle(a: f64, n: usize) -> f64 {
        let fact: f64 = (1..=n).map(|k| k as f64).product();
        (-a * a / 2.0).exp() * a.powi(n as i32) / fact.sqrt()
    }

    #[test]
    fn displaced_coefficients() {
        let basis = hg(8);
        let c = decompose_displaced_tem00(0.0, &basis).unwrap();
        assert!((c.coeffs()[0].re - 1.0).abs() < 1e-12);
        assert!(c.coeffs()[1..].iter().all(|z| z.norm() < 1e-12));
        assert!(c.residual_norm() < 1e-6);

        let small = decompose_displaced_tem00(0.01, &basis).unwrap();
        assert!((small.coeffs()[1].re - 0.01).abs() < 1e-4 * 0.01);

        let big = decompose_displaced_tem00(1.0, &basis).unwrap();
        assert!((big.coeffs()[1].re - (-0.5_f64).exp()).abs() < 1e-8);

        // independent check against a Simpson overlap
        let simp = simpson(
            |x| hg_unchecked(3, x, 1.0) * hg_unchecked(0, x - 0.7, 1.0),
            -12.0,
            12.0,
            40_000,
        );
        let lib = decompose_displaced_tem00(0.7, &basis).unwrap().coeffs()[3].re;
        assert!((simp - displaced_oracle(0.7, 3)).abs() < 1e-10);
        assert!((lib - simp).abs() < 1e-8);
    }

    #[test]
    fn displaced_coefficients_scale_with_waist() {
        let basis = Arc::new(ModeBasis::hermite_gauss(2.0, 8).unwrap());
        let c = decompose_displaced_tem00(1.0, &basis).unwrap();
        for n in 0..8 {
            assert!((c.coeffs()[n].re - displaced_oracle(0.5, n)).abs() < 1e-10);
        }
    }

    #[test]
    fn tilted_coefficients() {
        let basis = hg(8);
        let c = decompose_tilted_tem00(0.0, &basis).unwrap();
        assert!((c.coeffs()[0] - C64::new(1.0, 0.0)).norm() < 1e-12);

        let small = decompose_tilted_tem00(0.02, &basis).unwrap();
        let c1 = small.coeffs()[1];
        assert!(c1.re.abs() < 1e-14);
        assert!((c1.im - 0.01).abs() < 1e-4 * 0.01);

        let big = decompose_tilted_tem00(2.0, &basis).unwrap();
        let oracle = 1.0 * (-0.5_f64).exp();
        let simp = simpson(
            |x| hg_unchecked(1, x, 1.0) * (2.0 * x).sin() * hg_unchecked(0, x, 1.0),
            -12.0,
            12.0,
            40_000,
        );
        assert!((simp - oracle).abs() < 1e-10);
        assert!((big.coeffs()[1].norm() - oracle).abs() < 1e-10);
    }

    #[test]
    fn decompositions_require_hermite_gauss() {
        let flipped = Arc::new(ModeBasis::flipped(1.0, 4).unwrap());
        assert!(matches!(
            decompose_displaced_tem00(0.1, &flipped),
            Err(Error::BasisMismatch(_))
        ));
        assert!(decompose_tilted_tem00(0.1, &flipped).is_err());
        assert!(flipped_mode_coeffs(&flipped).is_err());
    }

    #[test]
    fn flipped_coefficients() {
        let basis = hg(8);
        let c = flipped_mode_coeffs(&basis).unwrap();
        for n in (0..8).step_by(2) {
            assert_eq!(c.coeffs()[n], C64::new(0.0, 0.0));
        }
        assert!((c.coeffs()[1].re - (2.0 / PI).sqrt()).abs() < 1e-10);
        // oracle: partial sum of odd-order squares from Simpson overlaps
        let oracle: f64 = [1, 3, 5, 7]
            .iter()
            .map(|&n| {
                let h = 2.0 * simpson(|x| hg_unchecked(n, x, 1.0) * hg_unchecked(0, x, 1.0), 0.0, 12.0, 40_000);
                h * h
            })
            .sum();
        // high-precision reference for the M = 8 partial sum; the sign jump
        // makes the odd-mode expansion converge slowly
        assert!(
            (oracle - 0.818_890_076_241_871).abs() < 1e-10,
            "oracle partial sum {oracle}"
        );
        assert!((c.captured_weight() - oracle).abs() < 1e-9);
        assert!((c.total_norm_sqr() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn farfield_behaviour() {
        let basis = hg(8);
        let ground = ModalCoefficients::unit(Arc::clone(&basis), 0).unwrap();
        assert_eq!(farfield(&ground).unwrap(), ground);

        let d = decompose_displaced_tem00(0.3, &basis).unwrap();
        let mut four = d.clone();
        for _ in 0..4 {
            four = farfield(&four).unwrap();
        }
        for (a, b) in four.coeffs().iter().zip(d.coeffs()) {
            assert!((a - b).norm() < 1e-12);
        }
        assert!((farfield(&d).unwrap().captured_weight() - d.captured_weight()).abs() < 1e-12);
    }

    #[test]
    fn farfield_of_displacement_is_tilt() {
        let basis = hg(8);
        let d = 1e-3;
        let far = farfield(&decompose_displaced_tem00(d, &basis).unwrap()).unwrap();
        let tilt = decompose_tilted_tem00(2.0 * d, &basis).unwrap();
        let rel = (far.coeffs()[1] - tilt.coeffs()[1]).norm() / tilt.coeffs()[1].norm();
        assert!(rel < 1e-3);
    }

    #[test]
    fn farfield_flipped_mode_is_no_longer_flipped() {
        let basis = hg(8);
        let near = flipped_mode_coeffs(&basis).unwrap();
        let far = farfield(&near).unwrap();
        let fidelity: C64 = near.coeffs().iter().zip(far.coeffs()).map(|(a, b)| a.conj() * b).sum();
        assert!(fidelity.norm() < 0.9 * near.captured_weight());
    }

    #[test]
    fn completeness_ramp() {
        let mut last = 0.0;
        for m in 2..=8 {
            let w = decompose_displaced_tem00(0.5, &hg(m)).unwrap().captured_weight();
            assert!(w >= last - 1e-15);
            last = w;
        }
        assert!(last >= 0.999);
    }
}

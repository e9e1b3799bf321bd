//! Uncertainty and entanglement diagnostics.
//!
//! The inseparability value for two output beams 3 and 4 and a conjugate pair
//! `(A, B)` is
//!
//! ```text
//! I = ⟨(A₃ ± A₄)²⟩ ⟨(B₃ ∓ B₄)²⟩ / |[A, B]|²
//! ```
//!
//! and `I < 1` certifies entanglement for Gaussian states. Both sign pairings
//! are evaluated and the smaller value is reported, since inputs squeezed in
//! the orthogonal quadrature swap which combination is correlated.

use crate::detection::{mean_field_phase, momentum_readout, momentum_scale, position_readout, position_scale};
use crate::error::{Error, Result};
use crate::gaussian::{GaussianState, QuadratureTerm};
use crate::modes::BasisKind;
use serde::{Deserialize, Serialize};
use std::f64::consts::FRAC_PI_2;

// Relative variance mismatch tolerated between the two output beams.
const SYMMETRY_TOL: f64 = 1e-6;

/// `|[x, p]| = 1/N` for beam position and momentum.
pub fn xp_commutator_norm(photons: f64) -> Result<f64> {
    check_photons(photons)?;
    Ok(1.0 / photons)
}

/// `|[n⁽⁺⁾, n⁽⁻⁾]| = 2N` for the two split-detection photocurrents.
pub fn split_commutator_norm(photons: f64) -> Result<f64> {
    check_photons(photons)?;
    Ok(2.0 * photons)
}

fn check_photons(photons: f64) -> Result<()> {
    if photons.is_finite() && photons > 0.0 {
        Ok(())
    } else {
        Err(Error::InvalidArgument(format!(
            "photon number must be positive, got {photons}"
        )))
    }
}

/// Which sign combination produced the reported inseparability value.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Pairing {
    /// `(A₃ + A₄, B₃ - B₄)`.
    SumDiff,
    /// `(A₃ - A₄, B₃ + B₄)`.
    DiffSum,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct InseparabilityResult {
    pub sum_variance: f64,
    pub diff_variance: f64,
    pub commutator_norm_sq: f64,
    pub value: f64,
    pub entangled: bool,
    pub pairing: Pairing,
}

/// A conjugate observable on each of the two output beams.
struct ObservablePair {
    on_beam_3: QuadratureTerm,
    on_beam_4: QuadratureTerm,
}

impl ObservablePair {
    fn combined(&self, sign: f64) -> [QuadratureTerm; 2] {
        let mut other = self.on_beam_4;
        other.weight *= sign;
        [self.on_beam_3, other]
    }
}

fn evaluate(
    state: &GaussianState,
    a: ObservablePair,
    b: ObservablePair,
    commutator_norm: f64,
) -> Result<InseparabilityResult> {
    for pair in [&a, &b] {
        let v3 = state.joint_variance(&[pair.on_beam_3])?;
        let v4 = state.joint_variance(&[pair.on_beam_4])?;
        if (v3 - v4).abs() > SYMMETRY_TOL * v3.max(v4) {
            return Err(Error::State(format!(
                "output beams are not symmetric (variances {v3:e} and {v4:e})"
            )));
        }
    }
    let commutator_norm_sq = commutator_norm * commutator_norm;
    let candidates = [(Pairing::SumDiff, 1.0, -1.0), (Pairing::DiffSum, -1.0, 1.0)];
    let mut best: Option<InseparabilityResult> = None;
    for (pairing, sa, sb) in candidates {
        let sum_variance = state.joint_variance(&a.combined(sa))?;
        let diff_variance = state.joint_variance(&b.combined(sb))?;
        let value = sum_variance * diff_variance / commutator_norm_sq;
        if best.is_none_or(|b| value < b.value) {
            best = Some(InseparabilityResult {
                sum_variance,
                diff_variance,
                commutator_norm_sq,
                value,
                entangled: value < 1.0,
                pairing,
            });
        }
    }
    Ok(best.expect("two pairings evaluated"))
}

fn require_two_beams(state: &GaussianState, kind: BasisKind, what: &str) -> Result<()> {
    if state.beams() != 2 {
        return Err(Error::State(format!("{what} needs a two-beam state")));
    }
    if state.basis().kind() != kind {
        return Err(Error::BasisMismatch(format!("{what} needs a {kind:?} basis")));
    }
    Ok(())
}

/// Position/momentum inseparability of the two beams of `state`, using
/// `x = (w0/2√N) X⁺_1` and `p = (1/w0√N) X⁻_1` on each beam.
pub fn inseparability_xp(state: &GaussianState) -> Result<InseparabilityResult> {
    require_two_beams(state, BasisKind::HermiteGauss, "x-p inseparability")?;
    let kx = position_scale(state);
    let kp = momentum_scale(state);
    let x = ObservablePair {
        on_beam_3: QuadratureTerm::new(0, 1, 0.0, kx),
        on_beam_4: QuadratureTerm::new(1, 1, 0.0, kx),
    };
    let p = ObservablePair {
        on_beam_3: QuadratureTerm::new(0, 1, FRAC_PI_2, kp),
        on_beam_4: QuadratureTerm::new(1, 1, FRAC_PI_2, kp),
    };
    evaluate(state, x, p, xp_commutator_norm(state.photon_scale())?)
}

/// Split-detection inseparability: `n⁽⁺⁾ = √N X_ψ` and `n⁽⁻⁾ = √N X_{ψ+π/2}`
/// of the flipped mode, with `ψ` each beam's own mean-field phase.
pub fn inseparability_split(state: &GaussianState) -> Result<InseparabilityResult> {
    require_two_beams(state, BasisKind::Flipped, "split-detection inseparability")?;
    let n = state.photon_scale();
    let gain = n.sqrt();
    let psi3 = mean_field_phase(state, 0)?;
    let psi4 = mean_field_phase(state, 1)?;
    let plus = ObservablePair {
        on_beam_3: QuadratureTerm::new(0, 1, psi3, gain),
        on_beam_4: QuadratureTerm::new(1, 1, psi4, gain),
    };
    let minus = ObservablePair {
        on_beam_3: QuadratureTerm::new(0, 1, psi3 + FRAC_PI_2, gain),
        on_beam_4: QuadratureTerm::new(1, 1, psi4 + FRAC_PI_2, gain),
    };
    evaluate(state, plus, minus, split_commutator_norm(n)?)
}

/// Normalized covariances `(corr(x₃, x₄), corr(p₃, p₄))` of the two beams.
pub fn correlation_signatures(state: &GaussianState) -> Result<(f64, f64)> {
    require_two_beams(state, BasisKind::HermiteGauss, "correlation signatures")?;
    let corr = |angle: f64| -> Result<f64> {
        let a = [QuadratureTerm::new(0, 1, angle, 1.0)];
        let b = [QuadratureTerm::new(1, 1, angle, 1.0)];
        let va = state.joint_variance(&a)?;
        let vb = state.joint_variance(&b)?;
        if va <= 0.0 || vb <= 0.0 {
            return Err(Error::State("zero variance in correlation denominator".into()));
        }
        Ok(state.joint_covariance(&a, &b)? / (va * vb).sqrt())
    };
    Ok((corr(0.0)?, corr(FRAC_PI_2)?))
}

/// Position and momentum variances of one beam against the Heisenberg floor
/// `(|[x, p]| / 2)² = 1 / (4N²)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct HeisenbergProduct {
    pub x_variance: f64,
    pub p_variance: f64,
    pub product: f64,
    pub floor: f64,
    /// `product / floor`; 1 for minimum-uncertainty states.
    pub ratio: f64,
}

pub fn heisenberg_product(state: &GaussianState, beam: usize) -> Result<HeisenbergProduct> {
    let (_, x_variance) = position_readout(state, beam)?;
    let (_, p_variance) = momentum_readout(state, beam)?;
    let half = xp_commutator_norm(state.photon_scale())? / 2.0;
    let floor = half * half;
    let product = x_variance * p_variance;
    Ok(HeisenbergProduct {
        x_variance,
        p_variance,
        product,
        floor,
        ratio: product / floor,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::modes::ModeBasis;
    use num_complex::Complex64 as C64;
    use std::sync::Arc;

    #[test]
    fn commutator_scales() {
        assert_eq!(xp_commutator_norm(1.0).unwrap(), 1.0);
        assert_eq!(xp_commutator_norm(1e6).unwrap(), 1e-6);
        assert_eq!(split_commutator_norm(3.0).unwrap(), 6.0);
        assert!(xp_commutator_norm(0.0).is_err());
        assert!(xp_commutator_norm(-2.0).is_err());
    }

    fn two_beam_vacuum() -> GaussianState {
        GaussianState::vacuum(2, Arc::new(ModeBasis::hermite_gauss(1.0, 4).unwrap()), 1e4).unwrap()
    }

    #[test]
    fn vacuum_sits_on_the_boundary() {
        let s = two_beam_vacuum().apply_beam_splitter_5050().unwrap();
        let r = inseparability_xp(&s).unwrap();
        assert!((r.value - 1.0).abs() < 1e-12);
        assert!(!r.entangled);
        let (cx, cp) = correlation_signatures(&s).unwrap();
        assert!(cx.abs() < 1e-15 && cp.abs() < 1e-15);
    }

    #[test]
    fn asymmetric_outputs_rejected() {
        let s = two_beam_vacuum().apply_squeezer(0, 1, 0.5, 0.0).unwrap();
        assert!(matches!(inseparability_xp(&s), Err(Error::State(_))));
    }

    #[test]
    fn wrong_shapes_rejected() {
        let one = GaussianState::vacuum(1, Arc::new(ModeBasis::hermite_gauss(1.0, 4).unwrap()), 1.0).unwrap();
        assert!(inseparability_xp(&one).is_err());
        assert!(matches!(
            inseparability_split(&two_beam_vacuum()),
            Err(Error::BasisMismatch(_))
        ));
    }

    #[test]
    fn heisenberg_ratio_for_coherent_beam() {
        let s = GaussianState::vacuum(1, Arc::new(ModeBasis::hermite_gauss(2.0, 4).unwrap()), 1e6)
            .unwrap()
            .set_coherent(0, 0, C64::new(1e3, 0.0))
            .unwrap();
        let h = heisenberg_product(&s, 0).unwrap();
        assert!((h.ratio - 1.0).abs() < 1e-12);
        assert!((h.floor - 1.0 / (4.0 * 1e12)).abs() < 1e-24);
    }
}

//! Detector models: transverse-mode homodyne, beam position/momentum readout,
//! split detection, and Monte Carlo photocurrent sampling.
//!
//! Photocurrents are in photon units per measurement window. In the bright
//! local-oscillator regime a homodyne detector with LO photon number `N_LO`
//! reports `√N_LO · X_φ` of the mode picked out by the LO profile, so its
//! shot-noise reference is `N_LO`. A split detector uses the beam's own mean
//! field as reference and reports `√N · X` of the flipped mode, with
//! shot-noise reference `N`.

use crate::error::{Error, Result};
use crate::gaussian::{GaussianState, QuadratureTerm};
use crate::modes::{BasisKind, ModalCoefficients};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Normal};
use serde::{Deserialize, Serialize};
use std::f64::consts::FRAC_PI_2;

/// Minimum ratio `N_LO / N` for the linearized homodyne model.
pub const LO_DOMINANCE: f64 = 100.0;

/// Transverse profile, phase, and photon number of a homodyne local oscillator.
#[derive(Debug, Clone, PartialEq)]
pub struct LocalOscillator {
    profile: ModalCoefficients,
    phase: f64,
    photons: f64,
}

impl LocalOscillator {
    /// The profile is rescaled to unit total norm (basis weight plus
    /// residual). Profiles with norm above 1 or zero norm are rejected.
    pub fn new(profile: ModalCoefficients, phase: f64, photons: f64) -> Result<Self> {
        if !(photons.is_finite() && photons > 0.0) {
            return Err(Error::InvalidArgument(format!(
                "LO photon number must be positive, got {photons}"
            )));
        }
        let norm_sqr = profile.total_norm_sqr();
        if norm_sqr <= 1e-24 {
            return Err(Error::InvalidArgument("local oscillator profile has zero norm".into()));
        }
        if norm_sqr > 1.0 + 1e-8 {
            return Err(Error::InvalidArgument(format!(
                "local oscillator profile norm² {norm_sqr} exceeds 1"
            )));
        }
        let scale = norm_sqr.sqrt();
        let coeffs = profile.coeffs().iter().map(|c| c / scale).collect();
        let residual = (profile.residual_norm() / scale).min(1.0);
        let profile = ModalCoefficients::new(profile.basis().clone(), coeffs, residual)?;
        Ok(Self {
            profile,
            phase,
            photons,
        })
    }

    pub fn profile(&self) -> &ModalCoefficients {
        &self.profile
    }

    pub fn phase(&self) -> f64 {
        self.phase
    }

    pub fn photons(&self) -> f64 {
        self.photons
    }
}

/// Mean photocurrent, its variance, and the shot-noise reference of one
/// detector configuration.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DetectionRecord {
    pub mean_signal: f64,
    pub variance: f64,
    pub snl: f64,
    pub normalized_variance: f64,
}

impl DetectionRecord {
    pub fn new(mean_signal: f64, variance: f64, snl: f64) -> Result<Self> {
        if snl.is_nan() || snl <= 0.0 {
            return Err(Error::InvalidArgument(format!(
                "shot-noise reference must be positive, got {snl}"
            )));
        }
        if variance < 0.0 {
            return Err(Error::InvalidArgument(format!("negative variance {variance}")));
        }
        Ok(Self {
            mean_signal,
            variance,
            snl,
            normalized_variance: variance / snl,
        })
    }
}

/// Balanced homodyne detection of `beam` against `lo`.
///
/// Modes orthogonal to the LO contribute nothing. Any LO weight outside the
/// truncated basis beats against vacuum.
pub fn homodyne(state: &GaussianState, beam: usize, lo: &LocalOscillator) -> Result<DetectionRecord> {
    state.quadrature_index(beam, 0)?;
    state.require_same_basis(lo.profile.basis())?;
    if lo.photons < LO_DOMINANCE * state.photon_scale() {
        log::warn!(
            "N_LO = {} is not ≫ N = {}; linearized homodyne model is inaccurate",
            lo.photons,
            state.photon_scale()
        );
    }
    // a_LO = Σ conj(c_n) a_n, X_φ(a_LO) = Σ |c_n| X_{φ + arg c_n}(a_n)
    let terms: Vec<QuadratureTerm> = lo
        .profile
        .coeffs()
        .iter()
        .enumerate()
        .filter(|(_, c)| c.norm() > 0.0)
        .map(|(mode, c)| QuadratureTerm::new(beam, mode, lo.phase + c.arg(), c.norm()))
        .collect();
    let residual_var = lo.profile.residual_norm().powi(2);
    let (mean, var) = if terms.is_empty() {
        (0.0, 0.0)
    } else {
        state.joint_moments(&terms)?
    };
    let gain = lo.photons.sqrt();
    DetectionRecord::new(gain * mean, lo.photons * (var + residual_var), lo.photons)
}

fn require_hermite_gauss(state: &GaussianState) -> Result<()> {
    match state.basis().kind() {
        BasisKind::HermiteGauss => Ok(()),
        BasisKind::Flipped => Err(Error::BasisMismatch(
            "position/momentum readout needs a Hermite-Gauss basis".into(),
        )),
    }
}

/// Scale factor taking `X⁺` of the first-order mode to beam position.
pub fn position_scale(state: &GaussianState) -> f64 {
    state.waist() / (2.0 * state.photon_scale().sqrt())
}

/// Scale factor taking `X⁻` of the first-order mode to beam momentum.
pub fn momentum_scale(state: &GaussianState) -> f64 {
    1.0 / (state.waist() * state.photon_scale().sqrt())
}

/// Beam position `x = (w0 / 2√N) X⁺_1`: returns `(mean, variance)`.
pub fn position_readout(state: &GaussianState, beam: usize) -> Result<(f64, f64)> {
    require_hermite_gauss(state)?;
    let k = position_scale(state);
    let (m, v) = state.quadrature_stats(beam, 1, 0.0)?;
    Ok((k * m, k * k * v))
}

/// Beam momentum `p = (1 / w0√N) X⁻_1`: returns `(mean, variance)`.
pub fn momentum_readout(state: &GaussianState, beam: usize) -> Result<(f64, f64)> {
    require_hermite_gauss(state)?;
    let k = momentum_scale(state);
    let (m, v) = state.quadrature_stats(beam, 1, FRAC_PI_2)?;
    Ok((k * m, k * k * v))
}

/// Which flipped-mode quadrature a split detector reads out.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum SplitQuadrature {
    /// In phase with the mean field: plain split detection.
    Plus,
    /// In quadrature: split detection after the π/2 cavity shift between the
    /// mean-field mode and the flipped mode.
    Minus,
}

/// Phase of the mean field in `v_0`, which is the split detector's reference.
pub fn mean_field_phase(state: &GaussianState, beam: usize) -> Result<f64> {
    let a0 = state.amplitude(beam, 0)?;
    if a0.norm() == 0.0 {
        return Err(Error::State(format!("beam {beam} has no mean field in the v0 mode")));
    }
    Ok(a0.arg())
}

/// Split detection of `beam`, read as the flipped-mode quadrature relative to
/// the beam's own mean field.
pub fn split_detect(state: &GaussianState, beam: usize, quadrature: SplitQuadrature) -> Result<DetectionRecord> {
    if state.basis().kind() != BasisKind::Flipped {
        return Err(Error::BasisMismatch(
            "split detection needs a state in the flipped basis".into(),
        ));
    }
    let reference = mean_field_phase(state, beam)?;
    let shifted;
    let view = match quadrature {
        SplitQuadrature::Plus => state,
        SplitQuadrature::Minus => {
            shifted = state.apply_phase_shift(beam, 1, -FRAC_PI_2)?;
            &shifted
        }
    };
    let (m, v) = view.quadrature_stats(beam, 1, reference)?;
    let n = state.photon_scale();
    DetectionRecord::new(n.sqrt() * m, n * v, n)
}

/// Sample statistics of simulated photocurrents.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SampleStats {
    pub shots: usize,
    pub mean: f64,
    /// Unbiased sample variance.
    pub variance: f64,
    pub se_mean: f64,
    pub se_variance: f64,
}

impl SampleStats {
    /// `|sample variance - analytic| / analytic`.
    pub fn relative_variance_error(&self, analytic: f64) -> f64 {
        (self.variance - analytic).abs() / analytic
    }
}

/// Draws `shots` Gaussian photocurrents with the record's mean and variance.
pub fn monte_carlo_sample(record: &DetectionRecord, shots: usize, seed: u64) -> Result<SampleStats> {
    monte_carlo_sample_stream(record, shots, seed, 0)
}

/// As [`monte_carlo_sample`], on an independent generator stream so several
/// detectors can share one seed.
pub fn monte_carlo_sample_stream(
    record: &DetectionRecord,
    shots: usize,
    seed: u64,
    stream: u64,
) -> Result<SampleStats> {
    if shots < 2 {
        return Err(Error::InvalidArgument(format!("need at least 2 shots, got {shots}")));
    }
    let normal =
        Normal::new(record.mean_signal, record.variance.sqrt()).map_err(|e| Error::InvalidArgument(e.to_string()))?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(stream);
    let samples: Vec<f64> = (0..shots).map(|_| normal.sample(&mut rng)).collect();
    let n = shots as f64;
    let mean = samples.iter().sum::<f64>() / n;
    let variance = samples.iter().map(|s| (s - mean).powi(2)).sum::<f64>() / (n - 1.0);
    Ok(SampleStats {
        shots,
        mean,
        variance,
        se_mean: (variance / n).sqrt(),
        se_variance: variance * (2.0 / (n - 1.0)).sqrt(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::modes::{decompose_displaced_tem00, decompose_tilted_tem00, ModeBasis};
    use num_complex::Complex64 as C64;
    use std::sync::Arc;

    const N: f64 = 1e6;
    const N_LO: f64 = 1e8;

    fn hg() -> Arc<ModeBasis> {
        Arc::new(ModeBasis::hermite_gauss(1.0, 8).unwrap())
    }

    fn tem10_lo(basis: &Arc<ModeBasis>, phase: f64) -> LocalOscillator {
        LocalOscillator::new(ModalCoefficients::unit(basis.clone(), 1).unwrap(), phase, N_LO).unwrap()
    }

    fn coherent(basis: &Arc<ModeBasis>, profile: &ModalCoefficients) -> GaussianState {
        GaussianState::vacuum(1, basis.clone(), N)
            .unwrap()
            .set_coherent_profile(0, profile, C64::new(N.sqrt(), 0.0))
            .unwrap()
    }

    #[test]
    fn homodyne_gain_for_displacement_and_tilt() {
        let b = hg();
        let d = 1e-3;
        let s = coherent(&b, &decompose_displaced_tem00(d, &b).unwrap());
        let rec = homodyne(&s, 0, &tem10_lo(&b, 0.0)).unwrap();
        let expected = 2.0 * (N * N_LO).sqrt() * d;
        assert!((rec.mean_signal - expected).abs() / expected < 1e-4);
        assert!((rec.normalized_variance - 1.0).abs() < 1e-12);
        assert_eq!(rec.snl, N_LO);

        let p = 1e-3;
        let t = coherent(&b, &decompose_tilted_tem00(p, &b).unwrap());
        let rec = homodyne(&t, 0, &tem10_lo(&b, FRAC_PI_2)).unwrap();
        let expected = (N * N_LO).sqrt() * p;
        assert!((rec.mean_signal - expected).abs() / expected < 1e-4);
    }

    #[test]
    fn homodyne_sees_only_lo_mode() {
        let b = hg();
        let s = GaussianState::vacuum(1, b.clone(), N)
            .unwrap()
            .apply_squeezer(0, 2, 1.0, 0.0)
            .unwrap()
            .set_coherent(0, 0, C64::new(N.sqrt(), 0.0))
            .unwrap();
        let rec = homodyne(&s, 0, &tem10_lo(&b, 0.0)).unwrap();
        assert!((rec.normalized_variance - 1.0).abs() < 1e-10);
        assert!(rec.mean_signal.abs() < 1e-12);
    }

    #[test]
    fn homodyne_residual_beats_vacuum() {
        let b = hg();
        let s = GaussianState::vacuum(1, b.clone(), N)
            .unwrap()
            .apply_squeezer(0, 1, 1.0, 0.0)
            .unwrap();
        let half = std::f64::consts::FRAC_1_SQRT_2;
        let mut coeffs = vec![C64::new(0.0, 0.0); 8];
        coeffs[1] = C64::new(half, 0.0);
        let lo = LocalOscillator::new(ModalCoefficients::new(b, coeffs, half).unwrap(), 0.0, N_LO).unwrap();
        let rec = homodyne(&s, 0, &lo).unwrap();
        let expected = 0.5 * (-2.0_f64).exp() + 0.5;
        assert!((rec.normalized_variance - expected).abs() < 1e-12);
    }

    #[test]
    fn local_oscillator_validation() {
        let b = hg();
        let zero = ModalCoefficients::new(b.clone(), vec![C64::new(0.0, 0.0); 8], 0.0).unwrap();
        assert!(LocalOscillator::new(zero, 0.0, N_LO).is_err());
        let mut big = vec![C64::new(0.0, 0.0); 8];
        big[1] = C64::new(1.5, 0.0);
        let big = ModalCoefficients::new(b.clone(), big, 0.0).unwrap();
        assert!(LocalOscillator::new(big, 0.0, N_LO).is_err());
        let lo = tem10_lo(&b, 0.0);
        let s = GaussianState::vacuum(1, b, N).unwrap();
        assert!(homodyne(&s, 1, &lo).is_err());
        let flipped = GaussianState::vacuum(1, Arc::new(ModeBasis::flipped(1.0, 8).unwrap()), N).unwrap();
        assert!(matches!(homodyne(&flipped, 0, &lo), Err(Error::BasisMismatch(_))));
    }

    #[test]
    fn position_and_momentum_readouts() {
        let b = hg();
        let ground = ModalCoefficients::unit(b.clone(), 0).unwrap();
        let s = coherent(&b, &ground);
        let (xm, xv) = position_readout(&s, 0).unwrap();
        let (pm, pv) = momentum_readout(&s, 0).unwrap();
        assert_eq!((xm, pm), (0.0, 0.0));
        assert!((xv - 1.0 / (4.0 * N)).abs() < 1e-20);
        assert!((pv - 1.0 / N).abs() < 1e-18);

        let r = 0.7;
        let sq = s.apply_squeezer(0, 1, r, 0.0).unwrap();
        let (_, xv) = position_readout(&sq, 0).unwrap();
        assert!((xv - (-2.0 * r).exp() / (4.0 * N)).abs() < 1e-20);
        let msq = s.apply_squeezer(0, 1, r, FRAC_PI_2).unwrap();
        let (_, pv) = momentum_readout(&msq, 0).unwrap();
        assert!((pv - (-2.0 * r).exp() / N).abs() < 1e-18);
    }

    #[test]
    fn position_mean_reads_displacement() {
        let b = hg();
        // linearized mean field u0 + (d/w0) u1
        let mut lin = vec![C64::new(0.0, 0.0); 8];
        lin[0] = C64::new(1.0, 0.0);
        lin[1] = C64::new(0.1, 0.0);
        let s = coherent(&b, &ModalCoefficients::new(b.clone(), lin, 0.0).unwrap());
        assert!((position_readout(&s, 0).unwrap().0 - 0.1).abs() < 1e-14);
        // exact displacement carries the e^{-a²/2} envelope
        let exact = coherent(&b, &decompose_displaced_tem00(0.1, &b).unwrap());
        let xm = position_readout(&exact, 0).unwrap().0;
        assert!((xm - 0.1 * (-0.005_f64).exp()).abs() < 1e-12);
    }

    fn flipped_beam(r: f64) -> GaussianState {
        let b = Arc::new(ModeBasis::flipped(1.0, 6).unwrap());
        GaussianState::vacuum(1, b, N)
            .unwrap()
            .apply_squeezer(0, 1, r, 0.0)
            .unwrap()
            .set_coherent(0, 0, C64::new(N.sqrt(), 0.0))
            .unwrap()
    }

    #[test]
    fn split_detection() {
        let coherent = flipped_beam(0.0);
        let rec = split_detect(&coherent, 0, SplitQuadrature::Plus).unwrap();
        assert!((rec.normalized_variance - 1.0).abs() < 1e-14);
        assert_eq!(rec.snl, N);

        let r: f64 = 0.5_f64.ln().abs() / 2.0; // V_flip = 0.5
        let sq = flipped_beam(r);
        let plus = split_detect(&sq, 0, SplitQuadrature::Plus).unwrap();
        assert!((plus.normalized_variance - 0.5).abs() < 1e-12);
        let minus = split_detect(&sq, 0, SplitQuadrature::Minus).unwrap();
        assert!((minus.normalized_variance - (2.0 * r).exp()).abs() < 1e-12);
    }

    #[test]
    fn split_detection_is_self_referenced() {
        let r = 0.4;
        let sq = flipped_beam(r);
        // rotating the whole beam leaves the readouts unchanged
        let rotated = sq.apply_beam_phase(0, 1.1).unwrap();
        for q in [SplitQuadrature::Plus, SplitQuadrature::Minus] {
            let a = split_detect(&sq, 0, q).unwrap();
            let b = split_detect(&rotated, 0, q).unwrap();
            assert!((a.variance - b.variance).abs() < 1e-6 * a.variance);
        }
        // an X⁻ rotation of the flipped mode swaps the two readouts
        let turned = sq.apply_phase_shift(0, 1, -FRAC_PI_2).unwrap();
        let a = split_detect(&turned, 0, SplitQuadrature::Plus).unwrap();
        let b = split_detect(&sq, 0, SplitQuadrature::Minus).unwrap();
        assert!((a.variance - b.variance).abs() < 1e-9 * b.variance);
    }

    #[test]
    fn split_detection_errors() {
        let hg_state = GaussianState::vacuum(1, hg(), N).unwrap();
        assert!(matches!(
            split_detect(&hg_state, 0, SplitQuadrature::Plus),
            Err(Error::BasisMismatch(_))
        ));
        let dark = GaussianState::vacuum(1, Arc::new(ModeBasis::flipped(1.0, 4).unwrap()), N).unwrap();
        assert!(matches!(
            split_detect(&dark, 0, SplitQuadrature::Plus),
            Err(Error::State(_))
        ));
    }

    #[test]
    fn monte_carlo_statistics() {
        let rec = DetectionRecord::new(0.0, 1.0, 1.0).unwrap();
        let stats = monte_carlo_sample(&rec, 100_000, 7).unwrap();
        assert!(stats.relative_variance_error(1.0) < 0.03);
        assert!((stats.variance - 1.0).abs() < 5.0 * stats.se_variance);
        let again = monte_carlo_sample(&rec, 100_000, 7).unwrap();
        assert_eq!(stats.variance.to_bits(), again.variance.to_bits());
        assert_eq!(stats.mean.to_bits(), again.mean.to_bits());
        let other = monte_carlo_sample_stream(&rec, 100_000, 7, 1).unwrap();
        assert_ne!(stats.mean.to_bits(), other.mean.to_bits());
    }

    #[test]
    fn monte_carlo_degenerate_and_errors() {
        let rec = DetectionRecord::new(5.0, 0.0, 1.0).unwrap();
        let stats = monte_carlo_sample(&rec, 1000, 1).unwrap();
        assert_eq!(stats.mean, 5.0);
        assert_eq!(stats.variance, 0.0);
        assert!(monte_carlo_sample(&rec, 1, 1).is_err());
        assert!(DetectionRecord::new(0.0, 1.0, 0.0).is_err());
    }
}

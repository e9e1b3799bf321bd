//! Optical layouts for the two entanglement experiments.
//!
//! Each input beam carries a bright coherent field of `N` photons in mode 0
//! and a squeezed vacuum in mode 1. The second input is delayed by a quarter
//! wave before a 50:50 beam splitter, so the two outputs share the same mean
//! photon number and carry correlated mode-1 fluctuations.

use crate::error::{Error, Result};
use crate::gaussian::GaussianState;
use crate::modes::ModeBasis;
use num_complex::Complex64 as C64;
use std::f64::consts::FRAC_PI_2;
use std::sync::Arc;

/// Phase delay applied to the second input before the beam splitter.
pub const INPUT_RELATIVE_PHASE: f64 = FRAC_PI_2;

/// Squeezing parameters of the two input beams.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct InputSqueezing {
    pub r: [f64; 2],
    pub angle: [f64; 2],
}

impl InputSqueezing {
    /// Both inputs squeezed by `r` along the same axis.
    pub fn symmetric(r: f64) -> Self {
        Self {
            r: [r, r],
            angle: [0.0, 0.0],
        }
    }
}

/// The two input beams, before the beam splitter.
pub fn squeezed_inputs(basis: Arc<ModeBasis>, photons: f64, squeezing: InputSqueezing) -> Result<GaussianState> {
    if basis.truncation() < 2 {
        return Err(Error::InvalidArgument("need at least two modes per beam".into()));
    }
    let amplitude = C64::new(photons.sqrt(), 0.0);
    let mut state = GaussianState::vacuum(2, basis, photons)?;
    for beam in 0..2 {
        state = state
            .apply_squeezer(beam, 1, squeezing.r[beam], squeezing.angle[beam])?
            .set_coherent(beam, 0, amplitude)?;
    }
    Ok(state)
}

/// Delays the second beam by [`INPUT_RELATIVE_PHASE`] and mixes the two on a
/// 50:50 beam splitter.
pub fn combine(inputs: &GaussianState) -> Result<GaussianState> {
    inputs
        .apply_beam_phase(1, INPUT_RELATIVE_PHASE)?
        .apply_beam_splitter_5050()
}

/// Output beams of the position/momentum experiment: position-squeezed
/// TEM10 vacua in a Hermite-Gauss basis.
pub fn xp_outputs(waist: f64, truncation: usize, photons: f64, squeezing: InputSqueezing) -> Result<GaussianState> {
    let basis = Arc::new(ModeBasis::hermite_gauss(waist, truncation)?);
    combine(&squeezed_inputs(basis, photons, squeezing)?)
}

/// Output beams of the split-detection experiment: squeezed flipped-mode vacua
/// in the flipped basis.
pub fn split_outputs(waist: f64, truncation: usize, photons: f64, squeezing: InputSqueezing) -> Result<GaussianState> {
    let basis = Arc::new(ModeBasis::flipped(waist, truncation)?);
    combine(&squeezed_inputs(basis, photons, squeezing)?)
}

/// A single beam with a position-squeezed TEM10 component.
pub fn position_squeezed_beam(
    waist: f64,
    truncation: usize,
    photons: f64,
    r: f64,
    angle: f64,
) -> Result<GaussianState> {
    let basis = Arc::new(ModeBasis::hermite_gauss(waist, truncation)?);
    GaussianState::vacuum(1, basis, photons)?
        .apply_squeezer(0, 1, r, angle)?
        .set_coherent(0, 0, C64::new(photons.sqrt(), 0.0))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::criteria::{correlation_signatures, inseparability_split, inseparability_xp};

    #[test]
    fn outputs_share_the_mean_field() {
        let s = xp_outputs(1.0, 4, 1e6, InputSqueezing::symmetric(0.5)).unwrap();
        let a3 = s.amplitude(0, 0).unwrap();
        let a4 = s.amplitude(1, 0).unwrap();
        assert!((a3.norm_sqr() - 1e6).abs() < 1e-6);
        assert!((a4.norm_sqr() - 1e6).abs() < 1e-6);
        assert!(s.is_physical());
    }

    #[test]
    fn xp_value_matches_product_form() {
        for r in [0.0, 0.3, 1.0] {
            let s = xp_outputs(1.0, 4, 1e6, InputSqueezing::symmetric(r)).unwrap();
            let i = inseparability_xp(&s).unwrap();
            assert!((i.value - (-4.0 * r).exp()).abs() < 1e-10 * (1.0 + i.value));
            let (cx, cp) = correlation_signatures(&s).unwrap();
            assert!((cx + (2.0 * r).tanh()).abs() < 1e-12);
            assert!((cp - (2.0 * r).tanh()).abs() < 1e-12);
        }
    }

    #[test]
    fn split_value_matches_sum_form() {
        let sq = InputSqueezing {
            r: [0.2, 0.7],
            angle: [0.0, 0.0],
        };
        let s = split_outputs(1.0, 4, 1e6, sq).unwrap();
        let i = inseparability_split(&s).unwrap();
        let (vc, vd) = ((-0.4f64).exp(), (-1.4f64).exp());
        let expected = (vc + vd).powi(2) / 4.0;
        assert!((i.value - expected).abs() < 1e-10, "{} vs {expected}", i.value);
    }
}

//! Homodyne readout of beam position and momentum with a TEM10 local
//! oscillator, for a coherent beam and a position-squeezed beam.

use num_complex::Complex64 as C64;
use spatial_entanglement::criteria::heisenberg_product;
use spatial_entanglement::detection::{homodyne, LocalOscillator};
use spatial_entanglement::experiment::schemes::position_squeezed_beam;
use spatial_entanglement::gaussian::GaussianState;
use spatial_entanglement::modes::{decompose_displaced_tem00, ModalCoefficients, ModeBasis};
use std::f64::consts::FRAC_PI_2;
use std::sync::Arc;

const N: f64 = 1e6;
const N_LO: f64 = 1e8;

fn main() -> spatial_entanglement::Result<()> {
    let basis = Arc::new(ModeBasis::hermite_gauss(1.0, 8)?);
    let tem10 = ModalCoefficients::unit(basis.clone(), 1)?;
    let lo_x = LocalOscillator::new(tem10.clone(), 0.0, N_LO)?;
    let lo_p = LocalOscillator::new(tem10, FRAC_PI_2, N_LO)?;

    // A beam displaced by a thousandth of a waist.
    let d = 1e-3;
    let beam = GaussianState::vacuum(1, basis.clone(), N)?.set_coherent_profile(
        0,
        &decompose_displaced_tem00(d, &basis)?,
        C64::new(N.sqrt(), 0.0),
    )?;
    let rec = homodyne(&beam, 0, &lo_x)?;
    println!(
        "displaced beam: signal {:.4e} (2√(N·N_LO)·d/w0 = {:.4e}), noise {:.4e}, SNR {:.2}",
        rec.mean_signal,
        2.0 * (N * N_LO).sqrt() * d,
        rec.variance.sqrt(),
        rec.mean_signal / rec.variance.sqrt()
    );

    for r in [0.0, 0.5, 1.0] {
        let s = position_squeezed_beam(1.0, 8, N, r, 0.0)?;
        let x = homodyne(&s, 0, &lo_x)?;
        let p = homodyne(&s, 0, &lo_p)?;
        let h = heisenberg_product(&s, 0)?;
        println!(
            "r = {r}: x noise {:.4} SNL, p noise {:.4} SNL, Δ²x·Δ²p / floor = {:.6}",
            x.normalized_variance, p.normalized_variance, h.ratio
        );
    }
    Ok(())
}

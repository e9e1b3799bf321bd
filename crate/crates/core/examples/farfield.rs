//! Far-field propagation: a displacement becomes a tilt, and position
//! squeezing becomes momentum squeezing.

use spatial_entanglement::detection::{momentum_readout, position_readout};
use spatial_entanglement::experiment::schemes::position_squeezed_beam;
use spatial_entanglement::modes::{decompose_displaced_tem00, decompose_tilted_tem00, farfield, ModeBasis};
use std::sync::Arc;

fn main() -> spatial_entanglement::Result<()> {
    let basis = Arc::new(ModeBasis::hermite_gauss(1.0, 8)?);
    let d = 0.2;
    let far = farfield(&decompose_displaced_tem00(d, &basis)?)?;
    // A tilt p = 2d/w0² has the same coefficient magnitudes.
    let tilt = decompose_tilted_tem00(2.0 * d, &basis)?;
    for n in 0..4 {
        println!(
            "n={n}: far-field displaced {:.6}, tilted {:.6}",
            far.coeffs()[n],
            tilt.coeffs()[n]
        );
    }

    let near = position_squeezed_beam(1.0, 8, 1e6, 1.0, 0.0)?;
    let far = near.change_mode_basis(&near.basis().farfield_unitary())?;
    for (label, s) in [("near field", &near), ("far field", &far)] {
        let (_, vx) = position_readout(s, 0)?;
        let (_, vp) = momentum_readout(s, 0)?;
        println!("{label:>10}: Var x = {vx:.4e}, Var p = {vp:.4e}");
    }
    Ok(())
}

//! Expands displaced, tilted and flipped beams in Hermite-Gauss modes.

use spatial_entanglement::modes::{
    decompose_displaced_tem00, decompose_tilted_tem00, flipped_mode_coeffs, ModeBasis, ModeProfile,
};
use std::sync::Arc;

fn main() -> spatial_entanglement::Result<()> {
    let basis = Arc::new(ModeBasis::hermite_gauss(1.0, 8)?);

    let displaced = decompose_displaced_tem00(0.5, &basis)?;
    let tilted = decompose_tilted_tem00(1.0, &basis)?;
    let flipped = flipped_mode_coeffs(&basis)?;

    println!(
        "{:>3} {:>22} {:>22} {:>12}",
        "n", "displaced d=0.5", "tilted p=1", "flipped"
    );
    for n in 0..basis.truncation() {
        let (d, t, f) = (displaced.coeffs()[n], tilted.coeffs()[n], flipped.coeffs()[n]);
        println!(
            "{n:>3} {:>10.6}{:+.6}i {:>10.6}{:+.6}i {:>12.6}",
            d.re, d.im, t.re, t.im, f.re
        );
    }
    println!(
        "captured weight: displaced {:.9}, tilted {:.9}, flipped {:.6}",
        displaced.captured_weight(),
        tilted.captured_weight(),
        flipped.captured_weight()
    );

    // The flipped mode has a sign jump at the beam centre, so its Hermite-Gauss
    // series converges slowly; the flipped basis carries it exactly.
    let fb = Arc::new(ModeBasis::flipped(1.0, 8)?);
    let exact = fb.decompose(&ModeProfile::flipped(1.0)?)?;
    println!(
        "in the flipped basis: coefficients {:?}",
        exact
            .coeffs()
            .iter()
            .map(|c| (c.norm() * 1e9).round() / 1e9)
            .collect::<Vec<_>>()
    );
    Ok(())
}

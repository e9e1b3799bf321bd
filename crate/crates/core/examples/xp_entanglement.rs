//! Position-momentum entanglement of two position-squeezed beams combined on
//! a 50:50 beam splitter.

use spatial_entanglement::criteria::{correlation_signatures, inseparability_xp};
use spatial_entanglement::experiment::schemes::xp_outputs;
use spatial_entanglement::experiment::InputSqueezing;

fn main() -> spatial_entanglement::Result<()> {
    println!(
        "{:>5} {:>12} {:>12} {:>9} {:>9} {:>9}",
        "r", "I", "exp(-4r)", "corr x", "corr p", "pairing"
    );
    for step in 0..=8 {
        let r = 0.25 * step as f64;
        let state = xp_outputs(1.0, 8, 1e6, InputSqueezing::symmetric(r))?;
        let i = inseparability_xp(&state)?;
        let (cx, cp) = correlation_signatures(&state)?;
        println!(
            "{r:>5.2} {:>12.6e} {:>12.6e} {cx:>9.5} {cp:>9.5} {:>9?}",
            i.value,
            (-4.0 * r).exp(),
            i.pairing
        );
    }

    let lopsided = InputSqueezing {
        r: [1.0, 0.0],
        angle: [0.0, 0.0],
    };
    let i = inseparability_xp(&xp_outputs(1.0, 8, 1e6, lopsided)?)?;
    println!(
        "one squeezed input (r = 1): I = {:.6} (entangled: {})",
        i.value, i.entangled
    );
    Ok(())
}

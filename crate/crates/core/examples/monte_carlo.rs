//! Checks analytic detector variances against sampled photocurrents.

use spatial_entanglement::detection::{homodyne, monte_carlo_sample_stream, LocalOscillator};
use spatial_entanglement::experiment::schemes::position_squeezed_beam;
use spatial_entanglement::modes::ModalCoefficients;

fn main() -> spatial_entanglement::Result<()> {
    let state = position_squeezed_beam(1.0, 8, 1e6, 0.7, 0.0)?;
    let lo = LocalOscillator::new(ModalCoefficients::unit(state.basis().clone(), 1)?, 0.0, 1e8)?;
    let record = homodyne(&state, 0, &lo)?;
    println!("analytic variance {:.6e}", record.variance);
    for (stream, shots) in [1_000usize, 10_000, 100_000].into_iter().enumerate() {
        let stats = monte_carlo_sample_stream(&record, shots, 42, stream as u64)?;
        println!(
            "{shots:>7} shots: variance {:.6e} ± {:.2e}, relative error {:.3}%",
            stats.variance,
            stats.se_variance,
            100.0 * stats.relative_variance_error(record.variance)
        );
    }
    Ok(())
}

//! Runs a configured sweep and prints the CSV report to stdout.
//!
//! Pass a configuration path to run it, or run without arguments to use the
//! bundled x-p sweep.

use spatial_entanglement::experiment::{parse_config, render_csv, run};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let text = match std::env::args().nth(1) {
        Some(path) => std::fs::read_to_string(path)?,
        None => include_str!("configs/xp_sweep.json").to_string(),
    };
    let config = parse_config(&text)?;
    let report = run(&config)?;
    print!("{}", render_csv(&report));
    Ok(())
}

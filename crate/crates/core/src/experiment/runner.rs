use super::config::{ExperimentConfig, Scenario};
use super::schemes::{position_squeezed_beam, split_outputs, xp_outputs, InputSqueezing};
use crate::criteria::{
    correlation_signatures, heisenberg_product, inseparability_split, inseparability_xp, HeisenbergProduct,
    InseparabilityResult,
};
use crate::detection::{
    homodyne, momentum_readout, monte_carlo_sample_stream, position_readout, split_detect, DetectionRecord,
    LocalOscillator, SampleStats, SplitQuadrature,
};
use crate::error::{Error, Result};
use crate::gaussian::GaussianState;
use crate::modes::ModalCoefficients;
use rayon::prelude::*;
use serde::Serialize;
use std::f64::consts::FRAC_PI_2;

/// Environment variable holding a fixed report timestamp (seconds since the
/// Unix epoch). Reports carry no timestamp when it is unset, which keeps
/// output byte-stable.
pub const TIMESTAMP_ENV: &str = "SOURCE_DATE_EPOCH";

// Generator streams reserved per sweep point.
const STREAMS_PER_POINT: u64 = 16;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct DetectorResult {
    pub name: String,
    pub record: DetectionRecord,
    pub monte_carlo: Option<SampleStats>,
    /// Relative deviation of the sampled variance from the analytic one.
    pub mc_relative_error: Option<f64>,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Correlations {
    pub x: f64,
    pub p: f64,
}

/// Everything computed at one sweep point.
///
/// For homodyne scenarios `x_var_*` and `p_var_*` are position and momentum
/// variances. For split detection they are the shot-noise normalized
/// variances of `n⁽⁺⁾` and `n⁽⁻⁾`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PointResult {
    pub index: usize,
    pub sweep_param: f64,
    pub inseparability: Option<InseparabilityResult>,
    pub x_var_3: f64,
    pub x_var_4: Option<f64>,
    pub p_var_3: f64,
    pub p_var_4: Option<f64>,
    pub correlations: Option<Correlations>,
    pub heisenberg: Vec<HeisenbergProduct>,
    pub detectors: Vec<DetectorResult>,
    /// Largest Monte Carlo relative variance error over all detectors.
    pub mc_delta: Option<f64>,
}

impl PointResult {
    pub fn entangled(&self) -> bool {
        self.inseparability.is_some_and(|i| i.entangled)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Provenance {
    pub library: String,
    pub version: String,
    pub timestamp: Option<u64>,
}

impl Provenance {
    pub fn current() -> Self {
        let timestamp = std::env::var(TIMESTAMP_ENV).ok().and_then(|s| s.trim().parse().ok());
        Self {
            library: env!("CARGO_PKG_NAME").to_string(),
            version: env!("CARGO_PKG_VERSION").to_string(),
            timestamp,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ExperimentReport {
    pub config: ExperimentConfig,
    pub results: Vec<PointResult>,
    pub provenance: Provenance,
}

/// Runs every point of the configured sweep, or the single configured point
/// if there is no sweep. Points are evaluated in parallel and reported in
/// sweep order.
pub fn run(config: &ExperimentConfig) -> Result<ExperimentReport> {
    config.validate()?;
    let points: Vec<(usize, f64, ExperimentConfig)> = match &config.sweep {
        Some(sweep) => sweep
            .schedule()
            .into_iter()
            .enumerate()
            .map(|(i, v)| (i, v, config.at(sweep.parameter, v)))
            .collect(),
        None => vec![(0, config.squeezing.r1, config.clone())],
    };
    let results = points
        .into_par_iter()
        .map(|(i, v, c)| {
            c.validate()?;
            run_point(&c, i, v)
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(ExperimentReport {
        config: config.clone(),
        results,
        provenance: Provenance::current(),
    })
}

/// Runs only the configured point, ignoring any sweep.
pub fn run_single(config: &ExperimentConfig) -> Result<ExperimentReport> {
    let mut single = config.clone();
    single.sweep = None;
    run(&single)
}

/// Evaluates one configuration. `sweep_param` is only recorded.
pub fn run_point(config: &ExperimentConfig, index: usize, sweep_param: f64) -> Result<PointResult> {
    let squeezing = InputSqueezing {
        r: [config.squeezing.r1, config.squeezing.r2],
        angle: [config.squeezing.angle1, config.squeezing.angle2],
    };
    let mut point = match config.scenario {
        Scenario::XpEntanglement => {
            let state = xp_outputs(config.waist, config.truncation, config.photons, squeezing)?;
            xp_point(&state, config.lo_photons)?
        }
        Scenario::SplitEntanglement => {
            let state = split_outputs(config.waist, config.truncation, config.photons, squeezing)?;
            split_point(&state)?
        }
        Scenario::PositionReadoutDemo => {
            let state = position_squeezed_beam(
                config.waist,
                config.truncation,
                config.photons,
                config.squeezing.r1,
                config.squeezing.angle1,
            )?;
            demo_point(&state, config.lo_photons)?
        }
    };
    point.index = index;
    point.sweep_param = sweep_param;
    if let Some(mc) = &config.monte_carlo {
        let base = index as u64 * STREAMS_PER_POINT;
        let mut worst: f64 = 0.0;
        for (k, det) in point.detectors.iter_mut().enumerate() {
            let stats = monte_carlo_sample_stream(&det.record, mc.shots, mc.seed, base + k as u64)?;
            let err = stats.relative_variance_error(det.record.variance);
            worst = worst.max(err);
            det.monte_carlo = Some(stats);
            det.mc_relative_error = Some(err);
        }
        point.mc_delta = Some(worst);
    }
    Ok(point)
}

fn detector(name: &str, record: DetectionRecord) -> DetectorResult {
    DetectorResult {
        name: name.to_string(),
        record,
        monte_carlo: None,
        mc_relative_error: None,
    }
}

fn tem10_homodyne(state: &GaussianState, beam: usize, phase: f64, lo_photons: f64) -> Result<DetectionRecord> {
    let profile = ModalCoefficients::unit(state.basis().clone(), 1)?;
    homodyne(state, beam, &LocalOscillator::new(profile, phase, lo_photons)?)
}

fn xp_point(state: &GaussianState, lo_photons: f64) -> Result<PointResult> {
    let mut detectors = Vec::with_capacity(4);
    for (beam, label) in [(0, "3"), (1, "4")] {
        detectors.push(detector(
            &format!("homodyne{label}_x"),
            tem10_homodyne(state, beam, 0.0, lo_photons)?,
        ));
        detectors.push(detector(
            &format!("homodyne{label}_p"),
            tem10_homodyne(state, beam, FRAC_PI_2, lo_photons)?,
        ));
    }
    let (cx, cp) = correlation_signatures(state)?;
    let h3 = heisenberg_product(state, 0)?;
    let h4 = heisenberg_product(state, 1)?;
    Ok(PointResult {
        index: 0,
        sweep_param: 0.0,
        inseparability: Some(inseparability_xp(state)?),
        x_var_3: h3.x_variance,
        x_var_4: Some(h4.x_variance),
        p_var_3: h3.p_variance,
        p_var_4: Some(h4.p_variance),
        correlations: Some(Correlations { x: cx, p: cp }),
        heisenberg: vec![h3, h4],
        detectors,
        mc_delta: None,
    })
}

fn split_point(state: &GaussianState) -> Result<PointResult> {
    let mut detectors = Vec::with_capacity(4);
    let mut norm = [[0.0; 2]; 2];
    for (beam, label) in [(0, "3"), (1, "4")] {
        for (q, (qname, slot)) in [
            (SplitQuadrature::Plus, ("plus", 0)),
            (SplitQuadrature::Minus, ("minus", 1)),
        ] {
            let record = split_detect(state, beam, q)?;
            norm[beam][slot] = record.normalized_variance;
            detectors.push(detector(&format!("split{label}_{qname}"), record));
        }
    }
    Ok(PointResult {
        index: 0,
        sweep_param: 0.0,
        inseparability: Some(inseparability_split(state)?),
        x_var_3: norm[0][0],
        x_var_4: Some(norm[1][0]),
        p_var_3: norm[0][1],
        p_var_4: Some(norm[1][1]),
        correlations: None,
        heisenberg: Vec::new(),
        detectors,
        mc_delta: None,
    })
}

fn demo_point(state: &GaussianState, lo_photons: f64) -> Result<PointResult> {
    if state.beams() != 1 {
        return Err(Error::State("readout demo expects a single beam".into()));
    }
    let detectors = vec![
        detector("homodyne_x", tem10_homodyne(state, 0, 0.0, lo_photons)?),
        detector("homodyne_p", tem10_homodyne(state, 0, FRAC_PI_2, lo_photons)?),
    ];
    let (_, x_var) = position_readout(state, 0)?;
    let (_, p_var) = momentum_readout(state, 0)?;
    Ok(PointResult {
        index: 0,
        sweep_param: 0.0,
        inseparability: None,
        x_var_3: x_var,
        x_var_4: None,
        p_var_3: p_var,
        p_var_4: None,
        correlations: None,
        heisenberg: vec![heisenberg_product(state, 0)?],
        detectors,
        mc_delta: None,
    })
}

//! Quadrature rules used by the mode-overlap code.
//!
//! Smooth overlaps go through a Gauss-Hermite rule whose nodes are rescaled to
//! the beam waist. Profiles with a sign discontinuity (the flipped mode) are
//! integrated piecewise with adaptive Gauss-Kronrod on each half-line.

use num_complex::Complex64 as C64;
use std::f64::consts::PI;
use std::sync::OnceLock;

/// Node count of the default Gauss-Hermite rule.
pub const DEFAULT_HERMITE_NODES: usize = 64;

/// Gauss-Hermite rule for the weight `exp(-t^2)` on the real line.
#[derive(Debug, Clone, PartialEq)]
pub struct GaussHermite {
    nodes: Vec<f64>,
    weights: Vec<f64>,
    // weights[i] * exp(nodes[i]^2), for integrands that already carry their
    // own Gaussian envelope
    envelope_weights: Vec<f64>,
}

impl GaussHermite {
    /// Builds an `n`-node rule by Newton iteration on the orthonormal Hermite
    /// recurrence.
    pub fn new(n: usize) -> Self {
        assert!(n >= 1, "Gauss-Hermite rule needs at least one node");
        let mut nodes = vec![0.0; n];
        let mut weights = vec![0.0; n];
        let pim4 = PI.powf(-0.25);
        let nf = n as f64;
        let mut z = 0.0_f64;
        for i in 0..n.div_ceil(2) {
            z = match i {
                0 => (2.0 * nf + 1.0).sqrt() - 1.85575 * (2.0 * nf + 1.0).powf(-1.0 / 6.0),
                1 => z - 1.14 * nf.powf(0.426) / z,
                2 => 1.86 * z - 0.86 * nodes[0],
                3 => 1.91 * z - 0.91 * nodes[1],
                _ => 2.0 * z - nodes[i - 2],
            };
            for _ in 0..100 {
                let (p1, p2) = orthonormal_hermite_pair(n, z, pim4);
                let step = p1 / ((2.0 * nf).sqrt() * p2);
                z -= step;
                if step.abs() <= 1e-15 * z.abs().max(1.0) {
                    break;
                }
            }
            let (_, p2) = orthonormal_hermite_pair(n, z, pim4);
            let pp = (2.0 * nf).sqrt() * p2;
            nodes[i] = z;
            nodes[n - 1 - i] = -z;
            let w = 2.0 / (pp * pp);
            weights[i] = w;
            weights[n - 1 - i] = w;
        }
        // Newton leaves nodes in descending order
        nodes.reverse();
        weights.reverse();
        let envelope_weights = nodes.iter().zip(&weights).map(|(t, w)| w * (t * t).exp()).collect();
        Self {
            nodes,
            weights,
            envelope_weights,
        }
    }

    /// Shared 64-node rule.
    pub fn default_rule() -> &'static GaussHermite {
        static RULE: OnceLock<GaussHermite> = OnceLock::new();
        RULE.get_or_init(|| GaussHermite::new(DEFAULT_HERMITE_NODES))
    }

    pub fn nodes(&self) -> &[f64] {
        &self.nodes
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    /// `∫ exp(-t^2) f(t) dt`.
    pub fn integrate<F: Fn(f64) -> f64>(&self, f: F) -> f64 {
        self.nodes.iter().zip(&self.weights).map(|(&t, &w)| w * f(t)).sum()
    }

    /// `∫ f(x) dx` for an integrand decaying like `exp(-2 x^2 / waist^2)`.
    ///
    /// The substitution `t = sqrt(2) x / waist` maps the envelope onto the
    /// rule's weight; the integrand is evaluated with its envelope intact.
    pub fn integrate_enveloped<F: Fn(f64) -> C64>(&self, waist: f64, f: F) -> C64 {
        let scale = waist / 2.0_f64.sqrt();
        let sum: C64 = self
            .nodes
            .iter()
            .zip(&self.envelope_weights)
            .map(|(&t, &w)| f(t * scale) * w)
            .sum();
        sum * scale
    }
}

/// Returns `(h_n(z), h_{n-1}(z))` for the orthonormal Hermite polynomials
/// without Gaussian factor.
fn orthonormal_hermite_pair(n: usize, z: f64, h0: f64) -> (f64, f64) {
    let mut p1 = h0;
    let mut p2 = 0.0;
    for j in 1..=n {
        let jf = j as f64;
        let p3 = p2;
        p2 = p1;
        p1 = z * (2.0 / jf).sqrt() * p2 - ((jf - 1.0) / jf).sqrt() * p3;
    }
    (p1, p2)
}

// Kronrod 15-point abscissae/weights and the embedded 7-point Gauss weights.
const XGK: [f64; 8] = [
    0.991_455_371_120_812_6,
    0.949_107_912_342_758_5,
    0.864_864_423_359_769_1,
    0.741_531_185_599_394_4,
    0.586_087_235_467_691_1,
    0.405_845_151_377_397_2,
    0.207_784_955_007_898_5,
    0.0,
];
const WGK: [f64; 8] = [
    0.022_935_322_010_529_22,
    0.063_092_092_629_978_55,
    0.104_790_010_322_250_2,
    0.140_653_259_715_525_9,
    0.169_004_726_639_267_9,
    0.190_350_578_064_785_4,
    0.204_432_940_075_298_9,
    0.209_482_141_084_727_8,
];
const WG: [f64; 4] = [
    0.129_484_966_168_869_7,
    0.279_705_391_489_276_7,
    0.381_830_050_505_118_9,
    0.417_959_183_673_469_4,
];

fn kronrod_15<F: Fn(f64) -> C64>(f: &F, a: f64, b: f64) -> (C64, f64) {
    let center = 0.5 * (a + b);
    let half = 0.5 * (b - a);
    let fc = f(center);
    let mut kronrod = fc * WGK[7];
    let mut gauss = fc * WG[3];
    for j in 0..7 {
        let dx = half * XGK[j];
        let pair = f(center - dx) + f(center + dx);
        kronrod += pair * WGK[j];
        if j % 2 == 1 {
            gauss += pair * WG[j / 2];
        }
    }
    let kronrod = kronrod * half;
    let gauss = gauss * half;
    (kronrod, (kronrod - gauss).norm())
}

/// Adaptive Gauss-Kronrod (7/15) integration of a complex integrand over
/// `[a, b]` to absolute tolerance `tol`.
pub fn adaptive_integrate<F: Fn(f64) -> C64>(f: F, a: f64, b: f64, tol: f64) -> C64 {
    const MAX_DEPTH: u32 = 40;
    // the tolerance is split evenly across the initial panels
    const PANELS: usize = 8;
    let width = (b - a) / PANELS as f64;
    (0..PANELS)
        .map(|k| {
            let lo = a + width * k as f64;
            let hi = if k + 1 == PANELS { b } else { lo + width };
            refine(&f, lo, hi, tol / PANELS as f64, MAX_DEPTH)
        })
        .sum()
}

fn refine<F: Fn(f64) -> C64>(f: &F, a: f64, b: f64, tol: f64, depth: u32) -> C64 {
    let (value, err) = kronrod_15(f, a, b);
    if err <= tol || depth == 0 {
        return value;
    }
    let mid = 0.5 * (a + b);
    refine(f, a, mid, 0.5 * tol, depth - 1) + refine(f, mid, b, 0.5 * tol, depth - 1)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn hermite_rule_integrates_moments() {
        let rule = GaussHermite::new(20);
        assert!((rule.integrate(|_| 1.0) - PI.sqrt()).abs() < 1e-13);
        assert!((rule.integrate(|t| t * t) - PI.sqrt() / 2.0).abs() < 1e-13);
        // ∫ e^{-t²} cos t = √π e^{-1/4}
        let c = rule.integrate(f64::cos);
        assert!((c - PI.sqrt() * (-0.25_f64).exp()).abs() < 1e-13);
    }

    #[test]
    fn default_rule_is_symmetric_and_sorted() {
        let rule = GaussHermite::default_rule();
        let n = rule.nodes().len();
        assert_eq!(n, DEFAULT_HERMITE_NODES);
        for i in 0..n {
            assert!((rule.nodes()[i] + rule.nodes()[n - 1 - i]).abs() < 1e-12);
        }
        assert!(rule.nodes().windows(2).all(|w| w[0] < w[1]));
        let total: f64 = rule.weights().iter().sum();
        assert!((total - PI.sqrt()).abs() < 1e-13);
    }

    #[test]
    fn enveloped_gaussian_integral() {
        // ∫ exp(-2x²/w²) dx = w √(π/2)
        let w = 1.7;
        let v = GaussHermite::default_rule().integrate_enveloped(w, |x| C64::new((-2.0 * x * x / (w * w)).exp(), 0.0));
        assert!((v.re - w * (PI / 2.0).sqrt()).abs() < 1e-12);
    }

    #[test]
    fn adaptive_handles_polynomial_times_gaussian() {
        // ∫_0^∞ x e^{-x²} dx = 1/2
        let v = adaptive_integrate(|x| C64::new(x * (-x * x).exp(), 0.0), 0.0, 12.0, 1e-14);
        assert!((v.re - 0.5).abs() < 1e-13);
        assert_eq!(v.im, 0.0);
    }
}

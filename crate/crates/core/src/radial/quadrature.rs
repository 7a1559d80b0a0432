//! Composite Gauss–Legendre quadrature tuned to semigroup integrands.
//!
//! The integrands are products of a compactly supported piecewise-linear
//! profile with `e^{-(rate) r² t}` envelopes and, for the fluid block,
//! oscillations of phase `≈ √P'(1) · r t`. Panels snap to the profile
//! breakpoints and are refined to resolve both the Gaussian concentration
//! scale `1/√(rate·t)` and the oscillation wavelength.

use super::RadialError;

/// 8-point Gauss–Legendre rule on [-1, 1].
const GL8_X: [f64; 4] = [
    0.1834346424956498,
    0.5255324099163290,
    0.7966664774136267,
    0.9602898564975363,
];
const GL8_W: [f64; 4] = [
    0.3626837833783620,
    0.3137066458778873,
    0.2223810344533745,
    0.1012285362903763,
];

/// Exponent drop at which the integrand tail is cut; `e^{-100}` is far below
/// every tolerance in play.
const TAIL_EXPONENT: f64 = 100.0;

/// Base panel count across the active range at t = 0.
const BASE_PANELS: f64 = 32.0;

/// Panels per unit of accumulated phase / Gaussian exponent.
const PHASE_PER_PANEL: f64 = std::f64::consts::FRAC_PI_2;
const CONC_REFINE: f64 = 16.0;

/// Resolution of the 1D radial quadrature.
#[derive(Clone, Copy, Debug)]
pub struct QuadratureSpec {
    /// Gauss-node budget for the base subdivision of the active range.
    pub node_count: usize,
    pub r_min: f64,
    pub r_max: f64,
}

impl QuadratureSpec {
    pub fn new(node_count: usize, r_min: f64, r_max: f64) -> Result<Self, RadialError> {
        if node_count < 64 {
            return Err(RadialError::BadSpec(format!("node_count must be >= 64, got {node_count}")));
        }
        if !(r_min >= 0.0) || !(r_max > r_min) {
            return Err(RadialError::BadSpec(format!(
                "need 0 <= r_min < r_max, got r_min = {r_min}, r_max = {r_max}"
            )));
        }
        Ok(Self { node_count, r_min, r_max })
    }

    /// Maximum panel count this budget allows before the concentration
    /// check fails.
    fn panel_budget(&self) -> usize {
        self.node_count * 1024
    }
}

impl Default for QuadratureSpec {
    fn default() -> Self {
        Self { node_count: 256, r_min: 0.0, r_max: f64::INFINITY }
    }
}

/// How fast the integrand dies and oscillates in `r` for one component set.
#[derive(Clone, Copy, Debug)]
pub struct DecayEnvelope {
    /// The squared solution decays at least like `e^{-gauss_rate · r² t}`
    /// while `const_rate · t` has not yet saturated the tail cut.
    pub gauss_rate: f64,
    /// Uniform-in-r floor of the decay exponent rate (∞ when the envelope is
    /// purely Gaussian, as for heat-type components).
    pub const_rate: f64,
    /// Phase advances at most `osc_rate · t` per unit `r` (0 when the
    /// component does not oscillate).
    pub osc_rate: f64,
}

/// Integrate `f` over `[spec.r_min, min(spec.r_max, support)]` with panels
/// adapted to `t` and the envelope, doubling `refine` times (0 = base rule).
pub fn integrate_radial(
    spec: &QuadratureSpec,
    breakpoints: &[f64],
    support: f64,
    t: f64,
    envelope: &DecayEnvelope,
    refine: u32,
    f: impl Fn(f64) -> f64,
) -> Result<f64, RadialError> {
    let r_lo = spec.r_min;
    let mut r_hi = spec.r_max.min(support);
    if !(r_hi > r_lo) {
        return Ok(0.0);
    }

    // tail cut: valid once the uniform floor alone exceeds the cut
    if t > 0.0 && envelope.const_rate * t >= TAIL_EXPONENT {
        let cut = (TAIL_EXPONENT / (envelope.gauss_rate * t)).sqrt();
        r_hi = r_hi.min(cut.max(r_lo + f64::MIN_POSITIVE));
    }

    let width = r_hi - r_lo;
    let mut h = width / BASE_PANELS;
    if t > 0.0 && envelope.osc_rate > 0.0 {
        h = h.min(PHASE_PER_PANEL / (envelope.osc_rate * t));
    }
    if t > 0.0 && envelope.gauss_rate > 0.0 {
        h = h.min(1.0 / (CONC_REFINE * (envelope.gauss_rate * t).sqrt()));
    }
    h /= f64::from(2u32.pow(refine));

    let required = (width / h).ceil() as usize;
    if required > spec.panel_budget() {
        return Err(RadialError::ResolutionTooLow {
            required_panels: required,
            allowed_panels: spec.panel_budget(),
            suggested_node_count: required.div_ceil(1024).next_power_of_two().max(64),
        });
    }

    // panel edges: profile breakpoints inside the range, subdivided to h
    let mut edges = vec![r_lo];
    for &b in breakpoints {
        if b > r_lo + 1e-300 && b < r_hi {
            edges.push(b);
        }
    }
    edges.push(r_hi);
    edges.sort_by(|a, b| a.partial_cmp(b).unwrap());
    edges.dedup_by(|a, b| (*a - *b).abs() < 1e-300);

    let mut total = 0.0;
    for seg in edges.windows(2) {
        let (a, b) = (seg[0], seg[1]);
        let sub = ((b - a) / h).ceil().max(1.0) as usize;
        let hh = (b - a) / sub as f64;
        for j in 0..sub {
            let lo = a + j as f64 * hh;
            let mid = lo + 0.5 * hh;
            let half = 0.5 * hh;
            let mut acc = 0.0;
            for (x, w) in GL8_X.iter().zip(&GL8_W) {
                acc += w * (f(mid - half * x) + f(mid + half * x));
            }
            total += acc * half;
        }
    }
    Ok(total)
}

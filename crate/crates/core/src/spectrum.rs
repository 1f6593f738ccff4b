//! Pulse-train spectral analysis: drive amplitude at the qubit transitions,
//! intra-pair tuning curves, and envelope comparisons for leakage.

use serde::{Deserialize, Serialize};

use crate::error::{Result, SfqError};
use crate::params::QubitParams;
use crate::pulsetrain::{
    dual_sequence, gaussian_envelope, shaped_sequence, single_sequence, PulseShape, PulseTrain,
};

/// A point query of the train's spectrum.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SpectralQuery {
    /// Angular frequency to evaluate at, rad/s.
    pub omega: f64,
    /// Pulse shape supplying the single-pulse form factor.
    pub shape: PulseShape,
}

fn form_factor(shape: PulseShape, omega: f64) -> f64 {
    match shape {
        PulseShape::Delta => 1.0,
        PulseShape::Gaussian { fwhm } => {
            let sigma = fwhm / (2.0 * (2.0 * std::f64::consts::LN_2).sqrt());
            (-0.5 * omega * omega * sigma * sigma).exp()
        }
    }
}

/// Complex comb sum `sum_k (area_k/phi0) * polarity_k * exp(-i omega t_k)`,
/// in units of flux quanta.
fn comb_sum(train: &PulseTrain, omega: f64) -> num_complex::Complex64 {
    let mut acc = num_complex::Complex64::new(0.0, 0.0);
    for ev in train.events() {
        let weight = ev.polarity as f64 * ev.area / crate::params::PHI0;
        let phase = -omega * ev.time;
        acc += num_complex::Complex64::new(
            weight * phase.cos(),
            weight * phase.sin(),
        );
    }
    acc
}

/// Per-pulse spectral amplitude of the train at `query.omega`:
/// `|F(omega) * sum_k p_k exp(-i omega t_k)| / n_pulses`, with the pulse
/// form factor `F` (1 for delta pulses). A resonant single-pulse-per-cycle
/// train gives exactly 1 at `omega = clock_omega`.
pub fn spectral_component(train: &PulseTrain, query: &SpectralQuery) -> Result<f64> {
    if train.is_empty() {
        return Err(SfqError::EmptyTrain);
    }
    let s = comb_sum(train, query.omega);
    Ok(form_factor(query.shape, query.omega) * s.norm() / train.len() as f64)
}

/// Tuning curve of the dual-pulse scheme: drive amplitude at `omega01`
/// relative to the single-pulse sequence, as a function of `2 phi`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TuningCurve {
    pub two_phi_rad: Vec<f64>,
    /// Signed per-cycle amplitude ratio; equals `2 cos(phi)` exactly for a
    /// resonant clock.
    pub ratio: Vec<f64>,
}

/// Evaluate the tuning curve on a grid of intra-pair phases.
///
/// The ratio is the complex quotient of the dual and single comb sums at
/// `omega01`, so it keeps its sign: phases beyond `pi/2` drive the qubit
/// with inverted amplitude. Per-cycle normalization is implicit in the
/// quotient (each dual cycle carries two pulses but contributes `2 cos(phi)`
/// relative to the single sequence's one pulse per cycle).
pub fn tuning_curve(phi_grid: &[f64], params: &QubitParams, n_cycles: usize) -> Result<TuningCurve> {
    if phi_grid.is_empty() || n_cycles == 0 {
        return Err(SfqError::EmptyTrain);
    }
    let single = single_sequence(n_cycles, params);
    let s_single = comb_sum(&single, params.omega01);
    if s_single.norm() == 0.0 {
        return Err(SfqError::Domain(
            "single-sequence comb sum vanished; clock far off resonance".into(),
        ));
    }
    let mut two_phi_rad = Vec::with_capacity(phi_grid.len());
    let mut ratio = Vec::with_capacity(phi_grid.len());
    for &phi in phi_grid {
        let (_, train) = dual_sequence(n_cycles, phi, 0.0, params, false)?;
        let s_dual = comb_sum(&train, params.omega01);
        let q = s_dual * s_single.conj() / s_single.norm_sqr();
        two_phi_rad.push(2.0 * phi);
        ratio.push(q.re);
    }
    Ok(TuningCurve { two_phi_rad, ratio })
}

/// Ratio of drive amplitude at the 1-2 transition to the 0-1 transition for
/// a given train. This is the figure of merit for leakage: smaller is
/// better. Errors when the 0-1 amplitude vanishes (e.g. `phi = pi/2`, where
/// the pair interferes destructively and the ratio is undefined).
pub fn leakage_ratio(train: &PulseTrain, params: &QubitParams, shape: PulseShape) -> Result<f64> {
    let a01 = spectral_component(train, &SpectralQuery { omega: params.omega01, shape })?;
    let a12 = spectral_component(train, &SpectralQuery { omega: params.omega12(), shape })?;
    if a01 < 1e-12 {
        return Err(SfqError::Domain(format!(
            "drive amplitude at omega01 is {a01:.3e}; leakage ratio undefined"
        )));
    }
    Ok(a12 / a01)
}

/// One point of the intra-pair leakage sweep.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LeakagePoint {
    pub two_phi_rad: f64,
    /// Cycle count of the pi train used at this phase, when feasible.
    pub n_cycles: Option<usize>,
    /// Leakage ratio; NaN when the point is infeasible.
    pub ratio: f64,
    pub warning: Option<String>,
}

/// Leakage ratio of calibrated dual-pulse pi trains across a `2 phi` grid.
///
/// Each grid point keeps its phase exactly and picks the cycle count that
/// comes closest to a total pi rotation, `n = round(pi / (2 |cos phi| delta_theta))`.
/// Points whose cycle count would exceed `max_cycles` (the scheme slows
/// down without bound toward `2 phi = pi`) are reported as NaN with a
/// warning instead of failing the whole sweep.
pub fn leakage_ratio_curve(
    two_phi_grid: &[f64],
    params: &QubitParams,
    max_cycles: usize,
) -> Vec<LeakagePoint> {
    let mut out = Vec::with_capacity(two_phi_grid.len());
    for &two_phi in two_phi_grid {
        let phi = 0.5 * two_phi;
        let point = leakage_point(phi, params, max_cycles);
        out.push(LeakagePoint {
            two_phi_rad: two_phi,
            n_cycles: point.as_ref().ok().map(|(n, _)| *n),
            ratio: point.as_ref().map(|(_, r)| *r).unwrap_or(f64::NAN),
            warning: point.err(),
        });
    }
    out
}

fn leakage_point(
    phi: f64,
    params: &QubitParams,
    max_cycles: usize,
) -> std::result::Result<(usize, f64), String> {
    if !(phi > 0.0 && phi < std::f64::consts::PI) {
        return Err(format!("phi = {phi} outside (0, pi)"));
    }
    let c = phi.cos().abs();
    let per_cycle = 2.0 * c * params.delta_theta;
    if per_cycle < std::f64::consts::PI / (max_cycles as f64) {
        return Err(format!(
            "pi rotation at phi = {phi:.6} needs more than max_cycles = {max_cycles} cycles"
        ));
    }
    let mut n = (std::f64::consts::PI / per_cycle).round() as usize;
    n = n.max(1);
    if n > max_cycles {
        return Err(format!(
            "pi rotation at phi = {phi:.6} needs {n} cycles > max_cycles = {max_cycles}"
        ));
    }
    let (_, train) = dual_sequence(n, phi, 0.0, params, false).map_err(|e| e.to_string())?;
    let ratio = leakage_ratio(&train, params, PulseShape::Delta).map_err(|e| e.to_string())?;
    Ok((n, ratio))
}

/// One gate length of the envelope comparison sweep.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EnvelopePoint {
    pub t_gate_s: f64,
    pub n_cycles: usize,
    /// Leakage ratio of the flat (rectangular-envelope) pi train.
    pub ratio_rect: f64,
    /// Leakage ratio of the Gaussian-envelope pi train; NaN when that
    /// envelope is unrealizable at this length.
    pub ratio_gauss: f64,
    pub warning: Option<String>,
}

/// Compare flat and Gaussian envelopes for pi rotations across gate lengths.
///
/// Each gate length is rounded to a whole number of clock cycles. The flat
/// train uses a constant phase `arccos(pi / (2 n delta_theta))`; the shaped
/// train distributes the same total angle under a Gaussian envelope with
/// width `n / sigma_factor` cycles.
pub fn envelope_comparison(
    gate_lengths: &[f64],
    params: &QubitParams,
    sigma_factor: f64,
) -> Result<Vec<EnvelopePoint>> {
    if gate_lengths.is_empty() {
        return Err(SfqError::EmptyTrain);
    }
    let period = params.clock_period();
    let total = std::f64::consts::PI;
    let mut out = Vec::with_capacity(gate_lengths.len());
    for &t_gate in gate_lengths {
        let n = (t_gate / period).round().max(1.0) as usize;
        let mut warnings: Vec<String> = Vec::new();

        let c_rect = total / (2.0 * n as f64 * params.delta_theta);
        let ratio_rect = if c_rect < 1.0 {
            let phi = c_rect.acos();
            let (_, train) = dual_sequence(n, phi, 0.0, params, false)?;
            leakage_ratio(&train, params, PulseShape::Delta)?
        } else {
            warnings.push(format!(
                "flat pi train infeasible at {n} cycles (needs cos(phi) = {c_rect:.4})"
            ));
            f64::NAN
        };

        let ratio_gauss = match gaussian_envelope(n, total, sigma_factor, params.delta_theta) {
            Ok(strengths) => {
                let (_, train) = shaped_sequence(&strengths, 0.0, params, false)?;
                leakage_ratio(&train, params, PulseShape::Delta)?
            }
            Err(e) => {
                warnings.push(format!("gaussian envelope unrealizable at {n} cycles: {e}"));
                f64::NAN
            }
        };

        let warning = if warnings.is_empty() { None } else { Some(warnings.join("; ")) };
        out.push(EnvelopePoint { t_gate_s: t_gate, n_cycles: n, ratio_rect, ratio_gauss, warning });
    }
    Ok(out)
}

/// Default gate-length grid for the envelope comparison: 38 to 48 clock
/// cycles in steps of two. Long enough that both envelopes are realizable
/// for the benchmark parameter sets, short enough that the Gaussian's
/// advantage is visible and growing across the grid.
pub fn default_gate_length_grid(params: &QubitParams) -> Vec<f64> {
    let period = params.clock_period();
    (38..=48).step_by(2).map(|n| n as f64 * period).collect()
}

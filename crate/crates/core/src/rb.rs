//! Randomized benchmarking of the compiled Clifford set.
//!
//! Random Clifford words of increasing length are compiled to pulse trains,
//! closed with the recovery element, and simulated through the three-level
//! kick engine. Ground-state survival decays as `A p^m + B`; the error per
//! Clifford is `(1 - p) / 2`.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha12Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Result, SfqError};
use crate::gates::{
    append_dual_events, append_single_events, clifford_table, default_n_cycles_per_primitive,
    CalibrationStore, CliffordTable,
};
use crate::params::QubitParams;
use crate::pulsetrain::PulseTrain;
use crate::transmon::{evolve_kicks_state, State3};

/// How Clifford decompositions are rendered to pulses.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum RBMode {
    /// One pulse per cycle, variable gate duration. No calibration needed.
    SinglePulse,
    /// Fixed-duration dual-pulse gates with analytic (coarse) phases.
    DualCoarse,
    /// Fixed-duration dual-pulse gates with simulator-refined phases.
    DualFine,
}

impl RBMode {
    pub fn is_dual(self) -> bool {
        !matches!(self, RBMode::SinglePulse)
    }
}

/// Benchmark configuration. `n_cycles_per_primitive` of `None` picks the
/// default budget for the parameter set.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct RBConfig {
    pub sequence_lengths: Vec<usize>,
    #[serde(default = "default_n_random")]
    pub n_random: usize,
    #[serde(default)]
    pub rng_seed: u64,
    pub params: QubitParams,
    pub mode: RBMode,
    #[serde(default)]
    pub n_cycles_per_primitive: Option<usize>,
    #[serde(default)]
    pub hardware_constrained: bool,
}

fn default_n_random() -> usize {
    100
}

impl RBConfig {
    pub fn new(params: QubitParams, mode: RBMode, sequence_lengths: Vec<usize>) -> Self {
        RBConfig {
            sequence_lengths,
            n_random: default_n_random(),
            rng_seed: 0,
            params,
            mode,
            n_cycles_per_primitive: None,
            hardware_constrained: false,
        }
    }

    pub fn resolved_n_cycles(&self) -> usize {
        self.n_cycles_per_primitive
            .unwrap_or_else(|| default_n_cycles_per_primitive(&self.params))
    }
}

/// Exponential decay fit `V(m) = a p^m + b`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DecayFit {
    pub a: f64,
    pub b: f64,
    pub p: f64,
    /// Root-mean-square residual of the fit at the sampled lengths.
    pub residual_norm: f64,
}

impl DecayFit {
    pub fn error_per_clifford(&self) -> f64 {
        (1.0 - self.p) / 2.0
    }
}

/// Full benchmark output: per-length statistics, the decay fit, and the raw
/// per-sequence visibilities (`raw[length_index][repetition]`).
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct RBResult {
    pub mode: RBMode,
    pub n_cycles_per_primitive: usize,
    pub lengths: Vec<usize>,
    pub mean_visibility: Vec<f64>,
    pub stderr: Vec<f64>,
    pub fit: DecayFit,
    pub epc: f64,
    pub raw: Vec<Vec<f64>>,
}

fn sequence_visibility(
    table: &CliffordTable,
    sequence: &[usize],
    mode: RBMode,
    store: Option<&CalibrationStore>,
    params: &QubitParams,
) -> Result<f64> {
    let recovery = table.recovery_index(sequence)?;
    let mut events = Vec::new();
    let mut cycle = 0i64;
    for &ci in sequence.iter().chain(std::iter::once(&recovery)) {
        for &prim in &table.get(ci).decomposition {
            cycle = match mode {
                RBMode::SinglePulse => append_single_events(&mut events, prim, params, cycle),
                _ => {
                    let gate = store
                        .expect("dual modes resolve a store before dispatch")
                        .get(prim)?;
                    append_dual_events(&mut events, gate, prim.axis_phase(), params, cycle)
                }
            };
        }
    }
    events.sort_by(|a, b| a.time.total_cmp(&b.time));
    let train = PulseTrain::new(events, params.clock_period())?;
    let final_state = evolve_kicks_state(&train, params, &State3::ground())?;
    let pops = final_state.populations();
    Ok(pops[0])
}

/// Run the benchmark. For the dual modes a calibration store may be passed
/// in (it must match the cycle budget and fine/coarse mode); otherwise one
/// is calibrated on the fly.
///
/// Deterministic for a fixed config: sequence `rep` at length index `li`
/// draws from a counter-mode stream keyed by `(li, rep)`, so results do not
/// depend on thread scheduling.
pub fn run_rb(config: &RBConfig, store: Option<&CalibrationStore>) -> Result<RBResult> {
    if config.sequence_lengths.is_empty() {
        return Err(SfqError::Config("sequence_lengths must not be empty".into()));
    }
    if config.sequence_lengths.iter().any(|&m| m == 0) {
        return Err(SfqError::Config("sequence lengths must be at least 1".into()));
    }
    if config.n_random == 0 {
        return Err(SfqError::Config("n_random must be at least 1".into()));
    }
    let params = &config.params;
    let n_cycles = config.resolved_n_cycles();

    let owned_store: Option<CalibrationStore> = if config.mode.is_dual() {
        match store {
            Some(s) => {
                if s.n_cycles != n_cycles {
                    return Err(SfqError::Config(format!(
                        "calibration store has n_cycles = {}, benchmark wants {}",
                        s.n_cycles, n_cycles
                    )));
                }
                let want_fine = config.mode == RBMode::DualFine;
                if s.fine_tuned != want_fine {
                    return Err(SfqError::Config(format!(
                        "calibration store fine_tuned = {}, benchmark mode wants {}",
                        s.fine_tuned, want_fine
                    )));
                }
                None
            }
            None => Some(CalibrationStore::calibrate(
                params,
                n_cycles,
                config.mode == RBMode::DualFine,
                config.hardware_constrained,
            )?),
        }
    } else {
        None
    };
    let active_store: Option<&CalibrationStore> = owned_store.as_ref().or(store).filter(|_| {
        config.mode.is_dual()
    });

    let table = clifford_table();
    let jobs: Vec<(usize, usize, usize)> = config
        .sequence_lengths
        .iter()
        .enumerate()
        .flat_map(|(li, &len)| (0..config.n_random).map(move |rep| (li, rep, len)))
        .collect();

    let outcomes: Vec<Result<f64>> = jobs
        .par_iter()
        .map(|&(li, rep, len)| {
            let mut rng = ChaCha12Rng::seed_from_u64(config.rng_seed);
            rng.set_stream(((li as u64) << 32) | rep as u64);
            let sequence: Vec<usize> =
                (0..len).map(|_| rng.gen_range(0..table.len())).collect();
            sequence_visibility(&table, &sequence, config.mode, active_store, params)
        })
        .collect();

    let mut raw = vec![Vec::with_capacity(config.n_random); config.sequence_lengths.len()];
    for (&(li, _, _), outcome) in jobs.iter().zip(outcomes) {
        raw[li].push(outcome?);
    }

    let mut mean_visibility = Vec::with_capacity(raw.len());
    let mut stderr = Vec::with_capacity(raw.len());
    for samples in &raw {
        let n = samples.len() as f64;
        let mean = samples.iter().sum::<f64>() / n;
        let var = if samples.len() > 1 {
            samples.iter().map(|v| (v - mean).powi(2)).sum::<f64>() / (n - 1.0)
        } else {
            0.0
        };
        mean_visibility.push(mean);
        stderr.push((var / n).sqrt());
    }

    let fit = fit_decay_weighted(&config.sequence_lengths, &mean_visibility, Some(&stderr))?;
    Ok(RBResult {
        mode: config.mode,
        n_cycles_per_primitive: n_cycles,
        lengths: config.sequence_lengths.clone(),
        mean_visibility,
        stderr,
        epc: fit.error_per_clifford(),
        fit,
        raw,
    })
}

/// Unweighted, unconstrained least-squares fit of `V(m) = a p^m + b`; see
/// [`fit_decay_weighted`].
pub fn fit_decay(lengths: &[usize], means: &[f64]) -> Result<DecayFit> {
    fit_decay_impl(lengths, means, None, false)
}

/// Least-squares fit of `V(m) = a p^m + b`, optionally weighted by
/// per-length standard errors.
///
/// For each trial decay rate the amplitude and floor are the exact linear
/// least-squares solution, leaving a one-dimensional profile in `p` that a
/// log-spaced scan plus golden-section search minimizes deterministically.
///
/// Weighting matters: sequence-to-sequence scatter grows strongly with
/// length, and an unweighted three-parameter fit on a curve that has not
/// decayed to its floor can drift along the `(p, b)` degeneracy toward
/// `p -> 1`. Inverse-variance weights anchor the fit where the data are
/// precise. Standard errors that are zero or missing fall back to uniform
/// weights (errors are floored at 1e-3 of the largest to keep the weight
/// ratio bounded).
///
/// Unlike [`fit_decay`], this variant also constrains the floor to the
/// physical range `0 <= b <= 1/2`: a sequence twirled to the maximally
/// mixed state returns to the ground state with probability 1/2 at most,
/// and leakage only lowers that. On shallow decays the unconstrained floor
/// can wander far outside this range and drag `p` with it.
pub fn fit_decay_weighted(
    lengths: &[usize],
    means: &[f64],
    stderr: Option<&[f64]>,
) -> Result<DecayFit> {
    fit_decay_impl(lengths, means, stderr, true)
}

fn fit_decay_impl(
    lengths: &[usize],
    means: &[f64],
    stderr: Option<&[f64]>,
    floor_box: bool,
) -> Result<DecayFit> {
    if lengths.len() != means.len() {
        return Err(SfqError::Fit(format!(
            "lengths ({}) and means ({}) differ in size",
            lengths.len(),
            means.len()
        )));
    }
    if lengths.len() < 3 {
        return Err(SfqError::Fit("need at least 3 sequence lengths to fit".into()));
    }
    let spread = means.iter().cloned().fold(f64::NEG_INFINITY, f64::max)
        - means.iter().cloned().fold(f64::INFINITY, f64::min);
    if !(spread > 1e-12) {
        return Err(SfqError::Fit(
            "visibilities are constant across lengths; the decay parameter is \
             indistinguishable from p = 1"
                .into(),
        ));
    }
    let ms: Vec<f64> = lengths.iter().map(|&m| m as f64).collect();
    let weights: Vec<f64> = match stderr {
        Some(errs) if errs.len() == ms.len() => {
            let max_err = errs.iter().cloned().fold(0.0, f64::max);
            if max_err > 0.0 {
                let floor = 1e-3 * max_err;
                errs.iter().map(|&e| 1.0 / e.max(floor).powi(2)).collect()
            } else {
                vec![1.0; ms.len()]
            }
        }
        Some(errs) => {
            return Err(SfqError::Fit(format!(
                "stderr ({}) and lengths ({}) differ in size",
                errs.len(),
                ms.len()
            )));
        }
        None => vec![1.0; ms.len()],
    };

    // Profiled weighted sum of squared residuals at fixed p.
    let sse = |p: f64| -> (f64, f64, f64) {
        let (mut sw, mut sx, mut sxx, mut sy, mut sxy) = (0.0, 0.0, 0.0, 0.0, 0.0);
        for ((m, v), w) in ms.iter().zip(means).zip(&weights) {
            let x = p.powf(*m);
            sw += w;
            sx += w * x;
            sxx += w * x * x;
            sy += w * v;
            sxy += w * x * v;
        }
        let det = sw * sxx - sx * sx;
        let (mut a, mut b) = if det.abs() > 1e-12 * sw * sxx.max(1e-300) {
            ((sw * sxy - sx * sy) / det, (sxx * sy - sx * sxy) / det)
        } else {
            (0.0, sy / sw)
        };
        if floor_box && !(0.0..=0.5).contains(&b) {
            // Project onto the floor constraint and re-optimize the
            // amplitude alone (optimal for a convex quadratic).
            b = b.clamp(0.0, 0.5);
            a = (sxy - b * sx) / sxx;
        }
        let mut err = 0.0;
        for ((m, v), w) in ms.iter().zip(means).zip(&weights) {
            let r = a * p.powf(*m) + b - v;
            err += w * r * r;
        }
        (err, a, b)
    };

    // Scan log10(1 - p) from 1e-10 up to 1 - p = 0.999, then polish.
    const SCAN: usize = 600;
    let (x_lo, x_hi) = (-10.0f64, -0.000_434_5); // log10(1 - 0.999)
    let mut best_x = x_lo;
    let mut best_err = f64::INFINITY;
    for i in 0..=SCAN {
        let x = x_lo + (x_hi - x_lo) * i as f64 / SCAN as f64;
        let (err, _, _) = sse(1.0 - 10f64.powf(x));
        if err < best_err {
            best_err = err;
            best_x = x;
        }
    }
    let step = (x_hi - x_lo) / SCAN as f64;
    let (mut a_br, mut b_br) = ((best_x - step).max(x_lo), (best_x + step).min(x_hi));
    const INVPHI: f64 = 0.618_033_988_749_894_8;
    let mut c = b_br - INVPHI * (b_br - a_br);
    let mut d = a_br + INVPHI * (b_br - a_br);
    let mut fc = sse(1.0 - 10f64.powf(c)).0;
    let mut fd = sse(1.0 - 10f64.powf(d)).0;
    while b_br - a_br > 1e-12 {
        if fc < fd {
            b_br = d;
            d = c;
            fd = fc;
            c = b_br - INVPHI * (b_br - a_br);
            fc = sse(1.0 - 10f64.powf(c)).0;
        } else {
            a_br = c;
            c = d;
            fc = fd;
            d = a_br + INVPHI * (b_br - a_br);
            fd = sse(1.0 - 10f64.powf(d)).0;
        }
    }
    let p = 1.0 - 10f64.powf(0.5 * (a_br + b_br));
    let (_, a, b) = sse(p);
    if !(a.is_finite() && b.is_finite() && p.is_finite()) {
        return Err(SfqError::Fit("decay fit did not converge to finite parameters".into()));
    }
    // Report the plain RMS residual regardless of weighting so the figure is
    // comparable across fits.
    let rms = (ms
        .iter()
        .zip(means)
        .map(|(m, v)| {
            let r = a * p.powf(*m) + b - v;
            r * r
        })
        .sum::<f64>()
        / ms.len() as f64)
        .sqrt();
    Ok(DecayFit { a, b, p, residual_norm: rms })
}

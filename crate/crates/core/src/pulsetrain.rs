//! Pulse trains, dual-pulse schedules, envelopes, and waveform rendering.
//!
//! Times are seconds, areas are webers (one SFQ pulse integrates to one flux
//! quantum), and every train keeps its events strictly ordered in time.
//! Event times may be negative: the first cycle of a pair-centered schedule
//! places its early pulse before t = 0.

use serde::{Deserialize, Serialize};
use std::io::{BufRead, Write};
use std::path::Path;

use crate::error::{Result, SfqError};
use crate::params::{QubitParams, PHI0};

/// Lower edge of the hardware-feasible intra-pair phase window (rad).
pub const PHI_MIN_HW: f64 = 0.0423 * std::f64::consts::PI;
/// Upper edge of the hardware-feasible intra-pair phase window (rad).
pub const PHI_MAX_HW: f64 = 0.958 * std::f64::consts::PI;

/// A single idealized SFQ pulse.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PulseEvent {
    /// Arrival time, s.
    pub time: f64,
    /// Unsigned flux area, Wb (normally one flux quantum).
    pub area: f64,
    /// +1 or -1; the effective signed area is `area * polarity`.
    pub polarity: i8,
}

/// An ordered sequence of pulses plus the clock period that generated it.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PulseTrain {
    events: Vec<PulseEvent>,
    clock_period: f64,
}

impl PulseTrain {
    /// Build a train, enforcing strictly increasing event times, positive
    /// areas, and unit polarities.
    pub fn new(events: Vec<PulseEvent>, clock_period: f64) -> Result<Self> {
        if !(clock_period > 0.0) {
            return Err(SfqError::Config(format!(
                "clock_period must be positive, got {clock_period}"
            )));
        }
        for (i, ev) in events.iter().enumerate() {
            if ev.polarity != 1 && ev.polarity != -1 {
                return Err(SfqError::Config(format!(
                    "polarity must be +1 or -1, got {} at index {i}",
                    ev.polarity
                )));
            }
            if !(ev.area > 0.0) {
                return Err(SfqError::Config(format!(
                    "pulse area must be positive, got {} at index {i}",
                    ev.area
                )));
            }
            if i > 0 && events[i - 1].time >= ev.time {
                return Err(SfqError::NonMonotone {
                    index: i,
                    prev: events[i - 1].time,
                    next: ev.time,
                });
            }
        }
        Ok(PulseTrain { events, clock_period })
    }

    pub fn events(&self) -> &[PulseEvent] {
        &self.events
    }

    pub fn clock_period(&self) -> f64 {
        self.clock_period
    }

    pub fn len(&self) -> usize {
        self.events.len()
    }

    pub fn is_empty(&self) -> bool {
        self.events.is_empty()
    }

    pub fn first_time(&self) -> Option<f64> {
        self.events.first().map(|e| e.time)
    }

    pub fn last_time(&self) -> Option<f64> {
        self.events.last().map(|e| e.time)
    }

    /// Write the train as CSV with header `time_s,area_wb,polarity`.
    pub fn write_csv<W: Write>(&self, mut w: W) -> Result<()> {
        writeln!(w, "time_s,area_wb,polarity")?;
        for ev in &self.events {
            writeln!(w, "{:.16e},{:.16e},{}", ev.time, ev.area, ev.polarity)?;
        }
        Ok(())
    }

    pub fn save_csv<P: AsRef<Path>>(&self, path: P) -> Result<()> {
        let f = std::fs::File::create(path)?;
        self.write_csv(std::io::BufWriter::new(f))
    }

    /// Read a train back from [`PulseTrain::write_csv`] output. The clock
    /// period is not stored in the CSV and must be supplied.
    pub fn read_csv<R: BufRead>(r: R, clock_period: f64) -> Result<Self> {
        let mut events = Vec::new();
        for (lineno, line) in r.lines().enumerate() {
            let line = line?;
            let line = line.trim();
            if line.is_empty() || (lineno == 0 && line.starts_with("time_s")) {
                continue;
            }
            let mut it = line.split(',');
            let parse = |s: Option<&str>, what: &str| -> Result<f64> {
                s.ok_or_else(|| SfqError::Config(format!("missing {what} on line {lineno}")))?
                    .trim()
                    .parse::<f64>()
                    .map_err(|e| SfqError::Config(format!("bad {what} on line {lineno}: {e}")))
            };
            let time = parse(it.next(), "time_s")?;
            let area = parse(it.next(), "area_wb")?;
            let polarity = parse(it.next(), "polarity")? as i8;
            events.push(PulseEvent { time, area, polarity });
        }
        PulseTrain::new(events, clock_period)
    }

    pub fn load_csv<P: AsRef<Path>>(path: P, clock_period: f64) -> Result<Self> {
        let f = std::fs::File::open(path)?;
        Self::read_csv(std::io::BufReader::new(f), clock_period)
    }
}

/// One clock cycle of a dual-pulse schedule: cycle `index` on the clock grid,
/// intra-pair phase `phi`, and axis phase `psi` (pair center shifted to
/// `(index + psi/2pi) * T`).
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CycleSpec {
    pub index: i64,
    pub phi: f64,
    pub psi: f64,
}

/// A dual-pulse control sequence at the per-cycle level of description.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DualPulseSchedule {
    pub cycles: Vec<CycleSpec>,
    pub params: QubitParams,
}

impl DualPulseSchedule {
    pub fn n_cycles(&self) -> usize {
        self.cycles.len()
    }

    /// Expand the schedule into its pulse train (two pulses per cycle at
    /// `(index + psi/2pi) T ± phi/omega01`, both polarity +1).
    pub fn to_train(&self) -> Result<PulseTrain> {
        let period = self.params.clock_period();
        let omega = self.params.omega01;
        let mut events = Vec::with_capacity(2 * self.cycles.len());
        for c in &self.cycles {
            let center = (c.index as f64 + c.psi / std::f64::consts::TAU) * period;
            let offset = c.phi / omega;
            events.push(PulseEvent { time: center - offset, area: PHI0, polarity: 1 });
            events.push(PulseEvent { time: center + offset, area: PHI0, polarity: 1 });
        }
        PulseTrain::new(events, period)
    }
}

fn check_phi(phi: f64, hardware_constrained: bool) -> Result<()> {
    let (lo, hi) = if hardware_constrained {
        (PHI_MIN_HW, PHI_MAX_HW)
    } else {
        (0.0, std::f64::consts::PI)
    };
    if phi > lo && phi < hi {
        Ok(())
    } else {
        Err(SfqError::PhiRange { phi, lo, hi })
    }
}

/// Shared builder: one cycle per entry of `phis`, consecutive clock indices
/// starting at 0. Both [`dual_sequence`] and [`shaped_sequence`] go through
/// here so that equal inputs produce bitwise-identical trains.
fn build_dual(
    phis: &[f64],
    psi: f64,
    params: &QubitParams,
    hardware_constrained: bool,
) -> Result<(DualPulseSchedule, PulseTrain)> {
    if phis.is_empty() {
        return Err(SfqError::EmptyTrain);
    }
    for &phi in phis {
        check_phi(phi, hardware_constrained)?;
    }
    let cycles: Vec<CycleSpec> = phis
        .iter()
        .enumerate()
        .map(|(k, &phi)| CycleSpec { index: k as i64, phi, psi })
        .collect();
    let schedule = DualPulseSchedule { cycles, params: *params };
    let train = schedule.to_train()?;
    Ok((schedule, train))
}

/// Single-pulse-per-cycle train: `n` unit pulses on the bare clock grid
/// `k * T`. The workhorse baseline scheme.
pub fn single_sequence(n: usize, params: &QubitParams) -> PulseTrain {
    let period = params.clock_period();
    let events = (0..n)
        .map(|k| PulseEvent { time: k as f64 * period, area: PHI0, polarity: 1 })
        .collect();
    PulseTrain::new(events, period).expect("clock-grid events are strictly increasing")
}

/// Uniform dual-pulse sequence: `n_cycles` cycles, constant intra-pair phase
/// `phi` and axis phase `psi`. `hardware_constrained` narrows the accepted
/// `phi` range from `(0, pi)` to the realizable window.
pub fn dual_sequence(
    n_cycles: usize,
    phi: f64,
    psi: f64,
    params: &QubitParams,
    hardware_constrained: bool,
) -> Result<(DualPulseSchedule, PulseTrain)> {
    build_dual(&vec![phi; n_cycles], psi, params, hardware_constrained)
}

/// Discrete Gaussian envelope of per-cycle rotation strengths.
///
/// Strength `s_k ∝ exp(-(k-(n-1)/2)^2 / (2 sigma^2))` with
/// `sigma = n / sigma_factor`, normalized so the strengths sum to
/// `total_angle`. Each strength must stay within the per-cycle maximum
/// `2 * delta_theta`, otherwise the envelope is unrealizable at this length.
pub fn gaussian_envelope(
    n: usize,
    total_angle: f64,
    sigma_factor: f64,
    delta_theta: f64,
) -> Result<Vec<f64>> {
    if n == 0 {
        return Err(SfqError::EmptyTrain);
    }
    if !(sigma_factor > 0.0) {
        return Err(SfqError::Domain(format!(
            "sigma_factor must be positive, got {sigma_factor}"
        )));
    }
    let sigma = n as f64 / sigma_factor;
    let mid = 0.5 * (n as f64 - 1.0);
    let raw: Vec<f64> = (0..n)
        .map(|k| (-((k as f64 - mid).powi(2)) / (2.0 * sigma * sigma)).exp())
        .collect();
    let sum: f64 = raw.iter().sum();
    let strengths: Vec<f64> = raw.iter().map(|r| r * total_angle / sum).collect();
    let max = 2.0 * delta_theta;
    for &s in &strengths {
        if s.abs() > max {
            return Err(SfqError::Unrealizable { requested: s.abs(), max });
        }
    }
    Ok(strengths)
}

/// Dual-pulse sequence with per-cycle strengths (signed effective rotation
/// angles). Cycle `k` gets `phi_k = arccos(strengths[k] / (2 delta_theta))`.
pub fn shaped_sequence(
    strengths: &[f64],
    psi: f64,
    params: &QubitParams,
    hardware_constrained: bool,
) -> Result<(DualPulseSchedule, PulseTrain)> {
    let max = 2.0 * params.delta_theta;
    let phis: Vec<f64> = strengths
        .iter()
        .map(|&s| {
            if s.abs() > max {
                Err(SfqError::Unrealizable { requested: s.abs(), max })
            } else {
                Ok((s / max).acos())
            }
        })
        .collect::<Result<_>>()?;
    build_dual(&phis, psi, params, hardware_constrained)
}

/// Finite-width pulse shapes for waveform rendering.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum PulseShape {
    /// Idealized zero-width pulse. Not renderable; used to tag trains meant
    /// for the kick-operator engine.
    Delta,
    /// Gaussian voltage pulse of the given full width at half maximum (s).
    Gaussian { fwhm: f64 },
}

impl PulseShape {
    /// Standard SFQ-like Gaussian: 2 ps FWHM.
    pub fn default_gaussian() -> Self {
        PulseShape::Gaussian { fwhm: 2.0e-12 }
    }
}

/// A sampled voltage waveform on a uniform time grid.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Waveform {
    pub samples: Vec<f64>,
    pub sample_interval: f64,
    pub start_time: f64,
}

impl Waveform {
    pub fn len(&self) -> usize {
        self.samples.len()
    }

    pub fn is_empty(&self) -> bool {
        self.samples.is_empty()
    }

    pub fn time(&self, i: usize) -> f64 {
        self.start_time + i as f64 * self.sample_interval
    }

    /// Trapezoidal integral of the waveform, V s = Wb.
    pub fn integral(&self) -> f64 {
        if self.samples.len() < 2 {
            return 0.0;
        }
        let mut acc = 0.0;
        for w in self.samples.windows(2) {
            acc += 0.5 * (w[0] + w[1]);
        }
        acc * self.sample_interval
    }

    /// Write the waveform as CSV with header `time_s,voltage_v`.
    pub fn write_csv<W: Write>(&self, mut w: W) -> Result<()> {
        writeln!(w, "time_s,voltage_v")?;
        for (i, v) in self.samples.iter().enumerate() {
            writeln!(w, "{:.16e},{:.16e}", self.time(i), v)?;
        }
        Ok(())
    }

    pub fn save_csv<P: AsRef<Path>>(&self, path: P) -> Result<()> {
        let f = std::fs::File::create(path)?;
        self.write_csv(std::io::BufWriter::new(f))
    }
}

/// Render a pulse train to a sampled voltage waveform.
///
/// Every event becomes a shape of integrated area `area * polarity`. The
/// grid runs from `padding` before the first pulse to `padding` after the
/// last. Rendering requires at least 10 samples per FWHM, and delta shapes
/// are refused outright: a comb of true delta functions has no faithful
/// sampled representation.
pub fn render_waveform(
    train: &PulseTrain,
    shape: PulseShape,
    sample_rate: f64,
    padding: f64,
) -> Result<Waveform> {
    let fwhm = match shape {
        PulseShape::Delta => {
            return Err(SfqError::Resolution(
                "delta pulses cannot be rendered; use PulseShape::Gaussian".into(),
            ))
        }
        PulseShape::Gaussian { fwhm } => fwhm,
    };
    if train.is_empty() {
        return Err(SfqError::EmptyTrain);
    }
    if !(fwhm > 0.0) {
        return Err(SfqError::Domain(format!("fwhm must be positive, got {fwhm}")));
    }
    if !(sample_rate > 0.0) || !(padding >= 0.0) {
        return Err(SfqError::Domain(
            "sample_rate must be positive and padding nonnegative".into(),
        ));
    }
    if sample_rate * fwhm < 10.0 {
        return Err(SfqError::Resolution(format!(
            "sample_rate * fwhm = {:.3} < 10; the pulse shape would be undersampled",
            sample_rate * fwhm
        )));
    }
    let dt = 1.0 / sample_rate;
    let t0 = train.first_time().unwrap() - padding;
    let t1 = train.last_time().unwrap() + padding;
    let n = ((t1 - t0) / dt).ceil() as usize + 1;
    let sigma = fwhm / (2.0 * (2.0 * std::f64::consts::LN_2).sqrt());
    let norm = 1.0 / (sigma * std::f64::consts::TAU.sqrt());
    let mut samples = vec![0.0f64; n];
    // Gaussians are numerically zero past ~9 sigma; only touch nearby samples.
    let reach = (9.0 * sigma / dt).ceil() as i64;
    for ev in train.events() {
        let amp = ev.area * ev.polarity as f64 * norm;
        let center_idx = ((ev.time - t0) / dt).round() as i64;
        let lo = (center_idx - reach).max(0) as usize;
        let hi = ((center_idx + reach) as usize).min(n - 1);
        for (i, s) in samples.iter_mut().enumerate().take(hi + 1).skip(lo) {
            let t = t0 + i as f64 * dt;
            let x = (t - ev.time) / sigma;
            *s += amp * (-0.5 * x * x).exp();
        }
    }
    Ok(Waveform { samples, sample_interval: dt, start_time: t0 })
}

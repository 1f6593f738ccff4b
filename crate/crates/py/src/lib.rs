//! Python bindings for the SFQ control simulator.
//!
//! The module mirrors the Rust crate's main entry points with plain Python
//! types: parameter sets, pulse-train builders (trains travel as parallel
//! `times/areas/polarities` lists), the three-level kick engine, spectral
//! diagnostics, gate calibration, and randomized benchmarking. Frequencies
//! cross the boundary in hertz and durations in seconds; angles stay in
//! radians.

use num_complex::Complex64;
use pyo3::exceptions::PyValueError;
use pyo3::prelude::*;
use pyo3::types::PyDict;
use std::f64::consts::TAU;

use sfq_control as core;

fn err(e: core::SfqError) -> PyErr {
    PyValueError::new_err(e.to_string())
}

/// Static qubit and drive-clock parameters.
#[pyclass(frozen, skip_from_py_object)]
#[derive(Clone)]
struct QubitParams {
    inner: core::QubitParams,
}

#[pymethods]
impl QubitParams {
    /// Build from the 0-1 transition frequency (Hz), anharmonicity
    /// magnitude (Hz), and per-pulse tip angle (rad).
    #[new]
    fn new(omega01_hz: f64, alpha_hz: f64, delta_theta_rad: f64) -> PyResult<Self> {
        let inner = core::QubitParams::new(TAU * omega01_hz, TAU * alpha_hz, delta_theta_rad)
            .map_err(err)?;
        Ok(QubitParams { inner })
    }

    /// Benchmark parameter set I: 5 GHz, 400 MHz, pi/30.
    #[staticmethod]
    fn parameter_set_i() -> Self {
        QubitParams { inner: core::QubitParams::parameter_set_i() }
    }

    /// Benchmark parameter set II: 5 GHz, 450 MHz, pi/60.
    #[staticmethod]
    fn parameter_set_ii() -> Self {
        QubitParams { inner: core::QubitParams::parameter_set_ii() }
    }

    /// Derive the tip angle from the coupling and qubit capacitances
    /// (farads) instead of passing it directly.
    #[staticmethod]
    fn from_circuit(
        omega01_hz: f64,
        alpha_hz: f64,
        c_coupling_f: f64,
        c_qubit_f: f64,
    ) -> PyResult<Self> {
        let coupling = core::CouplingSpec { c_coupling: c_coupling_f, c_qubit: c_qubit_f };
        let inner = core::QubitParams::from_circuit(
            TAU * omega01_hz,
            TAU * alpha_hz,
            coupling,
            &core::PhysicalConstants::default(),
        )
        .map_err(err)?;
        Ok(QubitParams { inner })
    }

    #[getter]
    fn omega01_hz(&self) -> f64 {
        self.inner.omega01 / TAU
    }

    #[getter]
    fn alpha_hz(&self) -> f64 {
        self.inner.alpha / TAU
    }

    #[getter]
    fn delta_theta_rad(&self) -> f64 {
        self.inner.delta_theta
    }

    #[getter]
    fn clock_period_s(&self) -> f64 {
        self.inner.clock_period()
    }

    fn __repr__(&self) -> String {
        format!(
            "QubitParams(omega01_hz={:.6e}, alpha_hz={:.6e}, delta_theta_rad={:.6e})",
            self.inner.omega01 / TAU,
            self.inner.alpha / TAU,
            self.inner.delta_theta
        )
    }
}

/// Per-pulse tip angle for a capacitively coupled SFQ driver:
/// `c_coupling * phi0 * sqrt(2 * omega01 / (hbar * c_qubit))`.
#[pyfunction]
fn delta_theta_from_circuit(c_coupling_f: f64, c_qubit_f: f64, omega01_hz: f64) -> PyResult<f64> {
    core::delta_theta_from_circuit(
        c_coupling_f,
        c_qubit_f,
        TAU * omega01_hz,
        &core::PhysicalConstants::default(),
    )
    .map_err(err)
}

type TrainTriple = (Vec<f64>, Vec<f64>, Vec<i8>);

fn train_to_triple(train: &core::PulseTrain) -> TrainTriple {
    let events = train.events();
    (
        events.iter().map(|e| e.time).collect(),
        events.iter().map(|e| e.area).collect(),
        events.iter().map(|e| e.polarity).collect(),
    )
}

fn triple_to_train(
    times: Vec<f64>,
    areas: Vec<f64>,
    polarities: Vec<i8>,
    params: &core::QubitParams,
) -> PyResult<core::PulseTrain> {
    if times.len() != areas.len() || times.len() != polarities.len() {
        return Err(PyValueError::new_err(format!(
            "times ({}), areas ({}), and polarities ({}) must have equal length",
            times.len(),
            areas.len(),
            polarities.len()
        )));
    }
    let events: Vec<core::PulseEvent> = times
        .into_iter()
        .zip(areas)
        .zip(polarities)
        .map(|((time, area), polarity)| core::PulseEvent { time, area, polarity })
        .collect();
    core::PulseTrain::new(events, params.clock_period()).map_err(err)
}

/// One unit pulse per clock cycle for `n` cycles. Returns
/// `(times_s, areas_wb, polarities)`.
#[pyfunction]
fn single_train(n: usize, params: &QubitParams) -> TrainTriple {
    train_to_triple(&core::single_sequence(n, &params.inner))
}

/// Dual-pulse train: `n` cycles of pulse pairs at intra-pair phase
/// `phi_rad`, pair centers offset by `psi_rad`. Returns
/// `(times_s, areas_wb, polarities)`.
#[pyfunction]
#[pyo3(signature = (n, phi_rad, psi_rad, params, hardware_constrained = false))]
fn dual_train(
    n: usize,
    phi_rad: f64,
    psi_rad: f64,
    params: &QubitParams,
    hardware_constrained: bool,
) -> PyResult<TrainTriple> {
    let (_, train) =
        core::dual_sequence(n, phi_rad, psi_rad, &params.inner, hardware_constrained)
            .map_err(err)?;
    Ok(train_to_triple(&train))
}

/// Exact two-level operator of one dual-pulse cycle, as a 2x2 nested list.
#[pyfunction]
fn cycle_unitary(delta_theta_rad: f64, phi_rad: f64) -> Vec<Vec<Complex64>> {
    let u = core::cycle_unitary_exact(delta_theta_rad, phi_rad);
    u.matrix().iter().map(|row| row.to_vec()).collect()
}

/// Evolve the three-level ground state through a pulse train with the
/// delta-kick engine. Returns a dict with `amplitudes`, `populations`, and
/// `leakage`.
#[pyfunction]
fn evolve_ground<'py>(
    py: Python<'py>,
    times_s: Vec<f64>,
    areas_wb: Vec<f64>,
    polarities: Vec<i8>,
    params: &QubitParams,
) -> PyResult<Bound<'py, PyDict>> {
    let train = triple_to_train(times_s, areas_wb, polarities, &params.inner)?;
    let state =
        core::evolve_kicks_state(&train, &params.inner, &core::State3::ground()).map_err(err)?;
    let out = PyDict::new(py);
    out.set_item("amplitudes", state.amp.to_vec())?;
    out.set_item("populations", state.populations().to_vec())?;
    out.set_item("leakage", state.leakage())?;
    Ok(out)
}

/// Per-pulse drive amplitude of the train at angular frequency
/// `omega_rad_s`. `fwhm_s = None` treats pulses as deltas; a value applies
/// the Gaussian form factor of that width.
#[pyfunction]
#[pyo3(signature = (times_s, areas_wb, polarities, params, omega_rad_s, fwhm_s = None))]
fn spectral_amplitude(
    times_s: Vec<f64>,
    areas_wb: Vec<f64>,
    polarities: Vec<i8>,
    params: &QubitParams,
    omega_rad_s: f64,
    fwhm_s: Option<f64>,
) -> PyResult<f64> {
    let train = triple_to_train(times_s, areas_wb, polarities, &params.inner)?;
    let shape = match fwhm_s {
        Some(fwhm) => core::PulseShape::Gaussian { fwhm },
        None => core::PulseShape::Delta,
    };
    core::spectral_component(&train, &core::SpectralQuery { omega: omega_rad_s, shape })
        .map_err(err)
}

/// Drive amplitude at the 1-2 transition relative to the 0-1 transition;
/// the leakage figure of merit (smaller is better).
#[pyfunction]
#[pyo3(signature = (times_s, areas_wb, polarities, params, fwhm_s = None))]
fn leakage_ratio(
    times_s: Vec<f64>,
    areas_wb: Vec<f64>,
    polarities: Vec<i8>,
    params: &QubitParams,
    fwhm_s: Option<f64>,
) -> PyResult<f64> {
    let train = triple_to_train(times_s, areas_wb, polarities, &params.inner)?;
    let shape = match fwhm_s {
        Some(fwhm) => core::PulseShape::Gaussian { fwhm },
        None => core::PulseShape::Delta,
    };
    core::leakage_ratio(&train, &params.inner, shape).map_err(err)
}

/// Dual/single drive-amplitude ratio over a grid of intra-pair phases.
/// Returns `(two_phi_rad, ratio)` lists; the ratio equals `2 cos(phi)` for
/// a resonant clock.
#[pyfunction]
#[pyo3(signature = (phi_grid_rad, params, n_cycles = 30))]
fn tuning_curve(
    phi_grid_rad: Vec<f64>,
    params: &QubitParams,
    n_cycles: usize,
) -> PyResult<(Vec<f64>, Vec<f64>)> {
    let curve = core::tuning_curve(&phi_grid_rad, &params.inner, n_cycles).map_err(err)?;
    Ok((curve.two_phi_rad, curve.ratio))
}

/// Discrete Gaussian envelope of per-cycle rotation strengths summing to
/// `total_angle_rad`, width `n_cycles / sigma_factor` cycles.
#[pyfunction]
fn gaussian_envelope(
    n_cycles: usize,
    total_angle_rad: f64,
    sigma_factor: f64,
    delta_theta_rad: f64,
) -> PyResult<Vec<f64>> {
    core::gaussian_envelope(n_cycles, total_angle_rad, sigma_factor, delta_theta_rad).map_err(err)
}

/// Calibrate the six primitive gates at a fixed cycle budget. Returns a
/// dict keyed by gate name (`X90`, `Y180`, ...), each value carrying the
/// calibrated phase, target, and achieved fidelity.
#[pyfunction]
#[pyo3(signature = (params, n_cycles = None, fine = true, hardware_constrained = false))]
fn calibrate<'py>(
    py: Python<'py>,
    params: &QubitParams,
    n_cycles: Option<usize>,
    fine: bool,
    hardware_constrained: bool,
) -> PyResult<Bound<'py, PyDict>> {
    let n = n_cycles.unwrap_or_else(|| core::default_n_cycles_per_primitive(&params.inner));
    let store = core::CalibrationStore::calibrate(&params.inner, n, fine, hardware_constrained)
        .map_err(err)?;
    let out = PyDict::new(py);
    for (prim, gate) in &store.gates {
        let g = PyDict::new(py);
        g.set_item("n_cycles", gate.n_cycles)?;
        g.set_item("phi_rad", gate.phi)?;
        g.set_item("psi_rad", gate.target.psi)?;
        g.set_item("theta_rad", gate.target.theta)?;
        g.set_item("fidelity", gate.achieved_fidelity)?;
        g.set_item("fine_tuned", gate.fine_tuned)?;
        g.set_item("boundary_warning", gate.boundary_warning)?;
        out.set_item(prim.name(), g)?;
    }
    Ok(out)
}

/// Run randomized benchmarking. `mode` is one of `"single-pulse"`,
/// `"dual-coarse"`, `"dual-fine"`. Returns a dict with the per-length
/// statistics, raw visibilities, and the decay fit.
#[pyfunction]
#[pyo3(signature = (
    params,
    mode = "dual-fine",
    lengths = vec![2, 4, 8, 16, 32, 64, 128],
    n_random = 100,
    seed = 0,
    n_cycles_per_primitive = None,
    hardware_constrained = false,
))]
#[allow(clippy::too_many_arguments)]
fn run_rb<'py>(
    py: Python<'py>,
    params: &QubitParams,
    mode: &str,
    lengths: Vec<usize>,
    n_random: usize,
    seed: u64,
    n_cycles_per_primitive: Option<usize>,
    hardware_constrained: bool,
) -> PyResult<Bound<'py, PyDict>> {
    let mode_enum = match mode {
        "single-pulse" => core::RBMode::SinglePulse,
        "dual-coarse" => core::RBMode::DualCoarse,
        "dual-fine" => core::RBMode::DualFine,
        other => {
            return Err(PyValueError::new_err(format!(
                "unknown mode {other:?}; expected \"single-pulse\", \"dual-coarse\", or \"dual-fine\""
            )))
        }
    };
    let mut config = core::RBConfig::new(params.inner, mode_enum, lengths);
    config.n_random = n_random;
    config.rng_seed = seed;
    config.n_cycles_per_primitive = n_cycles_per_primitive;
    config.hardware_constrained = hardware_constrained;
    let result = core::run_rb(&config, None).map_err(err)?;
    let out = PyDict::new(py);
    out.set_item("mode", mode)?;
    out.set_item("n_cycles_per_primitive", result.n_cycles_per_primitive)?;
    out.set_item("lengths", result.lengths)?;
    out.set_item("mean_visibility", result.mean_visibility)?;
    out.set_item("stderr", result.stderr)?;
    out.set_item("raw", result.raw)?;
    out.set_item("a", result.fit.a)?;
    out.set_item("b", result.fit.b)?;
    out.set_item("p", result.fit.p)?;
    out.set_item("residual_norm", result.fit.residual_norm)?;
    out.set_item("epc", result.epc)?;
    Ok(out)
}

#[pymodule(name = "sfq_control")]
fn bindings(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add("PHI0_WB", core::PHI0)?;
    m.add_class::<QubitParams>()?;
    m.add_function(wrap_pyfunction!(delta_theta_from_circuit, m)?)?;
    m.add_function(wrap_pyfunction!(single_train, m)?)?;
    m.add_function(wrap_pyfunction!(dual_train, m)?)?;
    m.add_function(wrap_pyfunction!(cycle_unitary, m)?)?;
    m.add_function(wrap_pyfunction!(evolve_ground, m)?)?;
    m.add_function(wrap_pyfunction!(spectral_amplitude, m)?)?;
    m.add_function(wrap_pyfunction!(leakage_ratio, m)?)?;
    m.add_function(wrap_pyfunction!(tuning_curve, m)?)?;
    m.add_function(wrap_pyfunction!(gaussian_envelope, m)?)?;
    m.add_function(wrap_pyfunction!(calibrate, m)?)?;
    m.add_function(wrap_pyfunction!(run_rb, m)?)?;
    Ok(())
}

//! Pulse-level simulation and calibration toolkit for single-flux-quantum
//! (SFQ) control of superconducting qubits.
//!
//! An SFQ driver tips a qubit by a small, fixed angle `delta_theta` once per
//! pulse. Arbitrary rotation angles come from *timing* rather than amplitude:
//! each clock cycle carries a pair of pulses placed symmetrically around a
//! cycle center, and the intra-pair phase `phi` scales the per-cycle rotation
//! by `2 cos(phi)` while suppressing drive weight at the leakage transition.
//!
//! The crate provides:
//!
//! - [`params`]: physical constants, qubit/drive parameter sets, and the
//!   circuit-level tip-angle formula.
//! - [`pulsetrain`]: pulse-train containers, dual-pulse schedules, envelope
//!   shaping, and analog waveform rendering.
//! - [`twolevel`]: exact per-cycle two-level operators, schedule products,
//!   and Bloch-sphere trajectories.
//! - [`transmon`]: three-level kick/free-evolution simulation, rotating-frame
//!   propagators, gate fidelity, and a Runge-Kutta waveform integrator.
//! - [`spectrum`]: pulse-train spectral weights, tuning curves, and leakage
//!   figures of merit.
//! - [`gates`]: calibrated gate primitives, the 24-element Clifford group,
//!   virtual-z frames, and compilation to pulse trains.
//! - [`rb`]: randomized benchmarking with deterministic, parallel sequence
//!   simulation and exponential decay fitting.
//!
//! Conventions used throughout: angular frequencies in rad/s, times in
//! seconds, pulse areas in webers, angles in radians. The qubit phase
//! advances as `exp(-i omega01 t)` (lowering-operator convention), and all
//! gate comparisons are insensitive to global phase.

pub mod error;
pub mod gates;
pub mod params;
pub mod pulsetrain;
pub mod rb;
pub mod spectrum;
pub mod transmon;
pub mod twolevel;

pub use error::{Result, SfqError};
pub use gates::{
    calibrate_coarse, calibrate_fine, clifford_table, compile_clifford, compile_ops,
    default_n_cycles_per_primitive, evaluate_gate, recovery_clifford, single_pulse_train,
    CalibratedGate, CalibrationStore, CliffordElement, CliffordTable, Frame, GateOp, GateTarget,
    PhysPrimitive,
};
pub use params::{
    delta_theta_from_circuit, CouplingSpec, PhysicalConstants, QubitParams, QubitParamsFile,
    ELEMENTARY_CHARGE, HBAR, PHI0, PLANCK_H,
};
pub use pulsetrain::{
    dual_sequence, gaussian_envelope, render_waveform, shaped_sequence, single_sequence,
    CycleSpec, DualPulseSchedule, PulseEvent, PulseShape, PulseTrain, Waveform, PHI_MAX_HW,
    PHI_MIN_HW,
};
pub use rb::{fit_decay, fit_decay_weighted, run_rb, DecayFit, RBConfig, RBMode, RBResult};
pub use spectrum::{
    default_gate_length_grid, envelope_comparison, leakage_ratio, leakage_ratio_curve,
    spectral_component, tuning_curve, EnvelopePoint, LeakagePoint, SpectralQuery, TuningCurve,
};
pub use transmon::{
    evolve_kicks, evolve_kicks_state, evolve_waveform, free_propagator, gate_fidelity,
    kick_propagator, rotating_frame_propagator, KickGenerator, State3, Unitary3,
    KICK_AREA_FACTOR,
};
pub use twolevel::{
    cycle_unitary_approx, cycle_unitary_exact, cycle_unitary_exact_with_axis,
    effective_delta_theta, evolve_bloch, evolve_bloch_timed, rotation_x, rotation_y, rotation_z,
    schedule_unitary, BlochPoint, TrajectoryPoint, Unitary2,
};

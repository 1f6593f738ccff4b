//! Physical constants and qubit parameter sets.
//!
//! Angular frequencies are stored in rad/s throughout the crate; the JSON
//! representation uses ordinary frequencies in Hz (`omega01_hz`, `alpha_hz`,
//! `clock_hz`) because that is what lab instruments report.

use serde::{Deserialize, Serialize};

use crate::error::{Result, SfqError};

/// Planck constant, J s (exact SI value).
pub const PLANCK_H: f64 = 6.626_070_15e-34;
/// Elementary charge, C (exact SI value).
pub const ELEMENTARY_CHARGE: f64 = 1.602_176_634e-19;
/// Reduced Planck constant, J s.
pub const HBAR: f64 = 1.054_571_817e-34;
/// Magnetic flux quantum h / 2e, Wb.
pub const PHI0: f64 = PLANCK_H / (2.0 * ELEMENTARY_CHARGE);

/// Fundamental constants used by the circuit-level formulas.
///
/// The fields are overridable so unit tests can work in scaled units, but the
/// default values are the SI ones and everything else in the crate assumes SI.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PhysicalConstants {
    /// Flux quantum, Wb.
    pub phi0: f64,
    /// Reduced Planck constant, J s.
    pub hbar: f64,
}

impl Default for PhysicalConstants {
    fn default() -> Self {
        PhysicalConstants { phi0: PHI0, hbar: HBAR }
    }
}

/// Capacitive coupling description: an SFQ driver coupled to the qubit island
/// through `c_coupling`, with total qubit capacitance `c_qubit` (both farads).
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CouplingSpec {
    #[serde(rename = "c_coupling_f")]
    pub c_coupling: f64,
    #[serde(rename = "c_qubit_f")]
    pub c_qubit: f64,
}

/// Tip angle imparted by a single resonant SFQ pulse on the 0-1 transition.
///
/// `delta_theta = c_coupling * phi0 * sqrt(2 * omega01 / (hbar * c_qubit))`.
pub fn delta_theta_from_circuit(
    c_coupling: f64,
    c_qubit: f64,
    omega01: f64,
    constants: &PhysicalConstants,
) -> Result<f64> {
    if !(c_coupling > 0.0) || !(c_qubit > 0.0) {
        return Err(SfqError::Domain(format!(
            "capacitances must be positive, got c_coupling={c_coupling}, c_qubit={c_qubit}"
        )));
    }
    if !(omega01 > 0.0) {
        return Err(SfqError::Domain(format!("omega01 must be positive, got {omega01}")));
    }
    Ok(c_coupling * constants.phi0 * (2.0 * omega01 / (constants.hbar * c_qubit)).sqrt())
}

/// Static qubit and drive-clock parameters.
///
/// `alpha` is the (positive) anharmonicity magnitude: the 1-2 transition sits
/// at `omega01 - alpha` and the 0-2 transition at `2*omega01 - alpha`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "QubitParamsFile", into = "QubitParamsFile")]
pub struct QubitParams {
    /// 0-1 transition angular frequency, rad/s.
    pub omega01: f64,
    /// Anharmonicity magnitude, rad/s.
    pub alpha: f64,
    /// Per-pulse tip angle on the 0-1 transition, rad.
    pub delta_theta: f64,
    /// Pulse-train clock angular frequency, rad/s. Defaults to `omega01`
    /// (resonant clocking); one clock period is `2*pi/clock_omega`.
    pub clock_omega: f64,
}

impl QubitParams {
    /// Create a resonantly clocked parameter set. A negative `alpha` is
    /// accepted and stored by magnitude.
    pub fn new(omega01: f64, alpha: f64, delta_theta: f64) -> Result<Self> {
        let params = QubitParams {
            omega01,
            alpha: alpha.abs(),
            delta_theta,
            clock_omega: omega01,
        };
        let violations = params.validate();
        if violations.is_empty() {
            Ok(params)
        } else {
            Err(SfqError::Config(violations.join("; ")))
        }
    }

    /// Override the clock frequency (rad/s).
    pub fn with_clock(mut self, clock_omega: f64) -> Result<Self> {
        self.clock_omega = clock_omega;
        if self.clock_omega > 0.0 {
            Ok(self)
        } else {
            Err(SfqError::Config(format!(
                "clock_omega must be positive, got {clock_omega}"
            )))
        }
    }

    /// Benchmark parameter set I: delta_theta = pi/30, omega01/2pi = 5 GHz,
    /// |alpha|/2pi = 400 MHz.
    pub fn parameter_set_i() -> Self {
        QubitParams::new(
            std::f64::consts::TAU * 5.0e9,
            std::f64::consts::TAU * 400.0e6,
            std::f64::consts::PI / 30.0,
        )
        .expect("builtin parameter set is valid")
    }

    /// Benchmark parameter set II: delta_theta = pi/60, omega01/2pi = 5 GHz,
    /// |alpha|/2pi = 450 MHz.
    pub fn parameter_set_ii() -> Self {
        QubitParams::new(
            std::f64::consts::TAU * 5.0e9,
            std::f64::consts::TAU * 450.0e6,
            std::f64::consts::PI / 60.0,
        )
        .expect("builtin parameter set is valid")
    }

    /// Derive `delta_theta` from circuit capacitances instead of giving it
    /// directly.
    pub fn from_circuit(
        omega01: f64,
        alpha: f64,
        coupling: CouplingSpec,
        constants: &PhysicalConstants,
    ) -> Result<Self> {
        let delta_theta =
            delta_theta_from_circuit(coupling.c_coupling, coupling.c_qubit, omega01, constants)?;
        QubitParams::new(omega01, alpha, delta_theta)
    }

    /// 1-2 transition angular frequency, rad/s.
    pub fn omega12(&self) -> f64 {
        self.omega01 - self.alpha
    }

    /// 0-2 transition angular frequency, rad/s.
    pub fn omega02(&self) -> f64 {
        2.0 * self.omega01 - self.alpha
    }

    /// Clock period in seconds.
    pub fn clock_period(&self) -> f64 {
        std::f64::consts::TAU / self.clock_omega
    }

    /// Check the parameter invariants, returning one message per violation.
    /// An empty vector means the parameters are usable. Messages are data,
    /// not errors: callers decide whether to warn or abort.
    pub fn validate(&self) -> Vec<String> {
        let mut violations = Vec::new();
        if !(self.omega01 > 0.0) {
            violations.push(format!("omega01 must be positive, got {}", self.omega01));
        }
        if !(self.alpha > 0.0) {
            violations.push(format!(
                "alpha must be nonzero (magnitude stored), got {}",
                self.alpha
            ));
        } else if self.alpha >= self.omega01 {
            violations.push(format!(
                "alpha must be below omega01, got alpha={} >= omega01={}",
                self.alpha, self.omega01
            ));
        }
        if !(self.delta_theta > 0.0 && self.delta_theta < std::f64::consts::FRAC_PI_2) {
            violations.push(format!(
                "delta_theta must lie in (0, pi/2), got {}",
                self.delta_theta
            ));
        }
        if !(self.clock_omega > 0.0) {
            violations.push(format!("clock_omega must be positive, got {}", self.clock_omega));
        }
        violations
    }

    /// Validation messages for a coupling description: currently a single
    /// warning when the coupling is strong enough (ratio > 0.1) that the
    /// perturbative single-pulse picture starts to degrade.
    pub fn validate_coupling(coupling: &CouplingSpec) -> Vec<String> {
        let mut violations = Vec::new();
        let ratio = coupling.c_coupling / coupling.c_qubit;
        if ratio > 0.1 {
            violations.push(format!(
                "coupling ratio c_coupling/c_qubit = {ratio:.4} exceeds 0.1; \
                 per-pulse rotation is no longer perturbative"
            ));
        }
        violations
    }
}

/// On-disk form of [`QubitParams`]. Frequencies in Hz; the tip angle is given
/// either directly (`delta_theta_rad`) or through circuit capacitances
/// (`coupling`), but not both.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct QubitParamsFile {
    pub omega01_hz: f64,
    pub alpha_hz: f64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub delta_theta_rad: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub coupling: Option<CouplingSpec>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub clock_hz: Option<f64>,
}

impl TryFrom<QubitParamsFile> for QubitParams {
    type Error = SfqError;

    fn try_from(file: QubitParamsFile) -> Result<Self> {
        let omega01 = std::f64::consts::TAU * file.omega01_hz;
        let alpha = std::f64::consts::TAU * file.alpha_hz;
        let delta_theta = match (file.delta_theta_rad, file.coupling) {
            (Some(dt), None) => dt,
            (None, Some(c)) => delta_theta_from_circuit(
                c.c_coupling,
                c.c_qubit,
                omega01,
                &PhysicalConstants::default(),
            )?,
            (Some(_), Some(_)) => {
                return Err(SfqError::Config(
                    "specify either delta_theta_rad or coupling, not both".into(),
                ))
            }
            (None, None) => {
                return Err(SfqError::Config(
                    "one of delta_theta_rad or coupling is required".into(),
                ))
            }
        };
        let params = QubitParams::new(omega01, alpha, delta_theta)?;
        match file.clock_hz {
            Some(f) => params.with_clock(std::f64::consts::TAU * f),
            None => Ok(params),
        }
    }
}

impl From<QubitParams> for QubitParamsFile {
    fn from(p: QubitParams) -> Self {
        QubitParamsFile {
            omega01_hz: p.omega01 / std::f64::consts::TAU,
            alpha_hz: p.alpha / std::f64::consts::TAU,
            delta_theta_rad: Some(p.delta_theta),
            coupling: None,
            clock_hz: Some(p.clock_omega / std::f64::consts::TAU),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn flux_quantum_matches_si_value() {
        assert!((PHI0 - 2.067_833_848_461_929_5e-15).abs() < 1e-30);
    }

    #[test]
    fn circuit_formula_reference_value() {
        // 0.1 fF coupling, 80 fF island, 5 GHz transition.
        let dt = delta_theta_from_circuit(
            0.1e-15,
            80.0e-15,
            std::f64::consts::TAU * 5.0e9,
            &PhysicalConstants::default(),
        )
        .unwrap();
        assert!((dt - 0.017_845_244_403_654_217).abs() < 1e-15, "dt = {dt}");
    }

    #[test]
    fn circuit_formula_scalings() {
        let consts = PhysicalConstants::default();
        let w = std::f64::consts::TAU * 5.0e9;
        let base = delta_theta_from_circuit(0.1e-15, 80.0e-15, w, &consts).unwrap();
        let double_cc = delta_theta_from_circuit(0.2e-15, 80.0e-15, w, &consts).unwrap();
        let quad_c = delta_theta_from_circuit(0.1e-15, 320.0e-15, w, &consts).unwrap();
        let quad_w = delta_theta_from_circuit(0.1e-15, 80.0e-15, 4.0 * w, &consts).unwrap();
        assert!((double_cc / base - 2.0).abs() < 1e-12);
        assert!((quad_c / base - 0.5).abs() < 1e-12);
        assert!((quad_w / base - 2.0).abs() < 1e-12);
    }

    #[test]
    fn parameter_sets_match_published_values() {
        let p1 = QubitParams::parameter_set_i();
        assert!((p1.omega01 / std::f64::consts::TAU - 5.0e9).abs() < 1e-3);
        assert!((p1.alpha / std::f64::consts::TAU - 400.0e6).abs() < 1e-3);
        assert!((p1.delta_theta - std::f64::consts::PI / 30.0).abs() < 1e-15);
        assert_eq!(p1.clock_omega, p1.omega01);
        let p2 = QubitParams::parameter_set_ii();
        assert!((p2.alpha / std::f64::consts::TAU - 450.0e6).abs() < 1e-3);
        assert!((p2.delta_theta - std::f64::consts::PI / 60.0).abs() < 1e-15);
        // Derived transition frequencies.
        assert!((p1.omega12() / std::f64::consts::TAU - 4.6e9).abs() < 1.0);
        assert!((p1.omega02() / std::f64::consts::TAU - 9.6e9).abs() < 1.0);
        assert!((p1.clock_period() - 2.0e-10).abs() < 1e-24);
    }

    #[test]
    fn validate_reports_violations_without_panicking() {
        let mut p = QubitParams::parameter_set_i();
        p.alpha = 0.0;
        p.delta_theta = 2.0;
        let v = p.validate();
        assert_eq!(v.len(), 2);
        assert!(v[0].contains("alpha"));
        assert!(v[1].contains("delta_theta"));
    }

    #[test]
    fn constructor_rejects_bad_values() {
        assert!(QubitParams::new(0.0, 1.0, 0.1).is_err());
        assert!(QubitParams::new(1.0, 2.0, 0.1).is_err());
        assert!(QubitParams::new(1.0, 0.5, 0.0).is_err());
        // Negative anharmonicity is stored by magnitude.
        let p = QubitParams::new(10.0, -1.0, 0.1).unwrap();
        assert_eq!(p.alpha, 1.0);
    }

    #[test]
    fn coupling_ratio_warning() {
        let ok = CouplingSpec { c_coupling: 0.1e-15, c_qubit: 80.0e-15 };
        assert!(QubitParams::validate_coupling(&ok).is_empty());
        let strong = CouplingSpec { c_coupling: 10.0e-15, c_qubit: 80.0e-15 };
        let v = QubitParams::validate_coupling(&strong);
        assert_eq!(v.len(), 1);
        assert!(v[0].contains("exceeds 0.1"));
    }

    #[test]
    fn json_roundtrip_and_circuit_input() {
        let p = QubitParams::parameter_set_ii();
        let text = serde_json::to_string(&p).unwrap();
        assert!(text.contains("omega01_hz"));
        let back: QubitParams = serde_json::from_str(&text).unwrap();
        assert!((back.omega01 - p.omega01).abs() < 1e-3);
        assert!((back.delta_theta - p.delta_theta).abs() < 1e-15);

        let circuit = r#"{
            "omega01_hz": 5e9,
            "alpha_hz": 4e8,
            "coupling": {"c_coupling_f": 0.1e-15, "c_qubit_f": 80e-15}
        }"#;
        let from_circuit: QubitParams = serde_json::from_str(circuit).unwrap();
        assert!((from_circuit.delta_theta - 0.017_845_244_403_654_217).abs() < 1e-15);

        let both = r#"{
            "omega01_hz": 5e9,
            "alpha_hz": 4e8,
            "delta_theta_rad": 0.1,
            "coupling": {"c_coupling_f": 1e-16, "c_qubit_f": 8e-14}
        }"#;
        assert!(serde_json::from_str::<QubitParams>(both).is_err());
    }
}

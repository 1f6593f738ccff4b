//! Run-configuration file schema.
//!
//! One JSON file drives every subcommand: the qubit parameters sit at the
//! top level (same schema as the library's parameter files) and each
//! subcommand reads its own optional section, so a single config can be
//! shared across a whole figure-reproduction run.

use serde::Deserialize;
use std::path::Path;

use sfq_control::{QubitParamsFile, RBMode, Result, SfqError};

#[derive(Debug, Clone, Deserialize)]
pub struct CliConfig {
    #[serde(flatten)]
    pub qubit: QubitParamsFile,
    #[serde(default)]
    pub tuning_curve: TuningCurveSection,
    #[serde(default)]
    pub leakage_ratio: LeakageSection,
    #[serde(default)]
    pub envelope_compare: EnvelopeSection,
    #[serde(default)]
    pub calibrate: CalibrateSection,
    #[serde(default)]
    pub rb: RbSection,
    #[serde(default)]
    pub trajectory: TrajectorySection,
}

impl CliConfig {
    pub fn load(path: &Path) -> Result<(Self, serde_json::Value)> {
        let text = std::fs::read_to_string(path).map_err(|e| {
            SfqError::Config(format!("cannot read config {}: {e}", path.display()))
        })?;
        let snapshot: serde_json::Value = serde_json::from_str(&text)?;
        let config: CliConfig = serde_json::from_str(&text)?;
        Ok((config, snapshot))
    }
}

#[derive(Debug, Clone, Deserialize)]
#[serde(default)]
pub struct TuningCurveSection {
    pub n_cycles: usize,
    pub grid_points: usize,
}

impl Default for TuningCurveSection {
    fn default() -> Self {
        TuningCurveSection { n_cycles: 30, grid_points: 200 }
    }
}

#[derive(Debug, Clone, Deserialize)]
#[serde(default)]
pub struct LeakageSection {
    pub grid_points: usize,
    /// Cap on the pi-train length as the per-cycle rotation vanishes near
    /// `2 phi = pi`.
    pub max_cycles: usize,
}

impl Default for LeakageSection {
    fn default() -> Self {
        LeakageSection { grid_points: 121, max_cycles: 5000 }
    }
}

#[derive(Debug, Clone, Deserialize)]
#[serde(default)]
pub struct EnvelopeSection {
    /// Gate lengths in seconds; `null` uses the default 38-48 cycle grid.
    pub gate_lengths_s: Option<Vec<f64>>,
    pub sigma_factor: f64,
}

impl Default for EnvelopeSection {
    fn default() -> Self {
        EnvelopeSection { gate_lengths_s: None, sigma_factor: 4.0 }
    }
}

#[derive(Debug, Clone, Deserialize)]
#[serde(default)]
pub struct CalibrateSection {
    /// Cycles per primitive; `null` picks the parameter-set default.
    pub n_cycles: Option<usize>,
    pub fine: bool,
    /// Output file name (relative to --out unless absolute).
    pub store_path: Option<String>,
}

impl Default for CalibrateSection {
    fn default() -> Self {
        CalibrateSection { n_cycles: None, fine: true, store_path: None }
    }
}

#[derive(Debug, Clone, Deserialize)]
#[serde(default)]
pub struct RbSection {
    pub sequence_lengths: Vec<usize>,
    pub n_random: usize,
    pub mode: RBMode,
    pub n_cycles_per_primitive: Option<usize>,
    /// Path to a previously saved calibration store; `null` calibrates on
    /// the fly for the dual modes.
    pub calibration_store: Option<String>,
    pub rng_seed: u64,
}

impl Default for RbSection {
    fn default() -> Self {
        RbSection {
            sequence_lengths: vec![2, 4, 8, 16, 32, 64, 128],
            n_random: 100,
            mode: RBMode::DualFine,
            n_cycles_per_primitive: None,
            calibration_store: None,
            rng_seed: 0,
        }
    }
}

#[derive(Debug, Clone, Deserialize)]
#[serde(default)]
pub struct TrajectorySection {
    pub n_cycles: usize,
    pub phi_rad: f64,
    pub psi_rad: f64,
    /// Trajectory samples per free-precession segment.
    pub substeps: usize,
}

impl Default for TrajectorySection {
    fn default() -> Self {
        TrajectorySection {
            n_cycles: 30,
            phi_rad: std::f64::consts::FRAC_PI_3,
            psi_rad: 0.0,
            substeps: 24,
        }
    }
}

//! Artifact writers: CSV tables, the per-run manifest, and the stderr error
//! format.

use serde::Serialize;
use std::path::{Path, PathBuf};
use std::time::{SystemTime, UNIX_EPOCH};

use sfq_control::{Result, SfqError};

/// All floats in output files use this format: full round-trip precision,
/// fixed width, locale-independent.
pub fn fmt_f(v: f64) -> String {
    format!("{v:.16e}")
}

/// Optional integer cell (empty when absent).
pub fn fmt_opt_usize(v: Option<usize>) -> String {
    v.map(|n| n.to_string()).unwrap_or_default()
}

/// Optional text cell, double-quoted so warnings may contain commas.
pub fn fmt_opt_text(v: &Option<String>) -> String {
    match v {
        Some(s) => format!("\"{}\"", s.replace('"', "'")),
        None => String::new(),
    }
}

pub fn write_csv(path: &Path, header: &str, rows: &[String]) -> Result<()> {
    let mut text = String::with_capacity(rows.len() * 64 + header.len() + 2);
    text.push_str(header);
    text.push('\n');
    for row in rows {
        text.push_str(row);
        text.push('\n');
    }
    std::fs::write(path, text)?;
    Ok(())
}

pub fn write_json_pretty<T: Serialize>(path: &Path, value: &T) -> Result<()> {
    let mut text = serde_json::to_string_pretty(value)?;
    text.push('\n');
    std::fs::write(path, text)?;
    Ok(())
}

/// Provenance record written next to every command's outputs.
#[derive(Debug, Serialize)]
pub struct RunManifest {
    pub command: String,
    pub tool_version: String,
    pub config_path: Option<String>,
    /// Verbatim parsed snapshot of the config file.
    pub config: serde_json::Value,
    pub seed: Option<u64>,
    pub hardware_constrained: bool,
    pub outputs: Vec<String>,
    pub notes: Vec<String>,
    pub duration_seconds: f64,
    pub unix_time_s: u64,
}

impl RunManifest {
    pub fn new(command: &str, config_path: Option<&Path>, config: serde_json::Value) -> Self {
        RunManifest {
            command: command.to_string(),
            tool_version: env!("CARGO_PKG_VERSION").to_string(),
            config_path: config_path.map(|p| p.display().to_string()),
            config,
            seed: None,
            hardware_constrained: false,
            outputs: Vec::new(),
            notes: Vec::new(),
            duration_seconds: 0.0,
            unix_time_s: 0,
        }
    }

    pub fn record_output(&mut self, path: &Path) {
        self.outputs.push(path.display().to_string());
    }

    pub fn finish(mut self, out_dir: &Path, started: std::time::Instant) -> Result<PathBuf> {
        self.duration_seconds = started.elapsed().as_secs_f64();
        self.unix_time_s = SystemTime::now()
            .duration_since(UNIX_EPOCH)
            .map(|d| d.as_secs())
            .unwrap_or(0);
        let name = format!("{}_manifest.json", self.command.replace('-', "_"));
        let path = out_dir.join(name);
        write_json_pretty(&path, &self)?;
        Ok(path)
    }
}

fn error_kind(err: &SfqError) -> &'static str {
    match err {
        SfqError::Domain(_) => "domain",
        SfqError::EmptyTrain => "empty-train",
        SfqError::NonMonotone { .. } => "non-monotone",
        SfqError::Unrealizable { .. } => "unrealizable",
        SfqError::PhiRange { .. } => "phi-range",
        SfqError::Resolution(_) => "resolution",
        SfqError::CalibrationInfeasible { .. } => "calibration-infeasible",
        SfqError::Fit(_) => "fit",
        SfqError::Config(_) => "config",
        SfqError::Io(_) => "io",
        SfqError::Json(_) => "json",
    }
}

/// Machine-readable error line for stderr.
pub fn error_json(err: &SfqError) -> String {
    serde_json::json!({
        "error": {
            "kind": error_kind(err),
            "message": err.to_string(),
        }
    })
    .to_string()
}

//! `sfqctl`: command-line front end for the SFQ pulse-train simulator.
//!
//! Every data-producing subcommand reads one JSON config (qubit parameters
//! plus per-command sections), writes CSV/JSON artifacts with full-precision
//! floats into `--out`, and drops a `<command>_manifest.json` provenance
//! record next to them. Errors go to stderr as a single JSON line with exit
//! code 1.

mod config;
mod output;

use clap::{Parser, Subcommand};
use std::path::{Path, PathBuf};
use std::time::Instant;

use config::CliConfig;
use output::{
    error_json, fmt_f, fmt_opt_text, fmt_opt_usize, write_csv, write_json_pretty, RunManifest,
};
use sfq_control::{
    default_gate_length_grid, default_n_cycles_per_primitive, dual_sequence, envelope_comparison,
    evolve_bloch_timed, leakage_ratio, leakage_ratio_curve, run_rb, single_sequence,
    tuning_curve, BlochPoint, CalibrationStore, PulseShape, QubitParams, RBConfig, Result,
    SfqError, PHI_MAX_HW, PHI_MIN_HW,
};

#[derive(Parser)]
#[command(
    name = "sfqctl",
    version,
    about = "Simulation and calibration toolkit for SFQ-driven qubits"
)]
struct Cli {
    /// JSON run configuration (qubit parameters + per-command sections).
    #[arg(long, global = true)]
    config: Option<PathBuf>,

    /// Directory for output artifacts.
    #[arg(long, global = true, default_value = ".")]
    out: PathBuf,

    /// Override the benchmark RNG seed from the config.
    #[arg(long, global = true)]
    seed: Option<u64>,

    /// Cap the worker-thread count (default: all cores).
    #[arg(long, global = true)]
    threads: Option<usize>,

    /// Restrict intra-pair phases to the hardware-achievable window.
    #[arg(long, global = true)]
    hardware_constrained: bool,

    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Spectral tuning curve vs intra-pair phase (fig3a.csv).
    TuningCurve,
    /// Leakage-to-drive spectral ratio across pair phases (fig3b.csv).
    LeakageRatio,
    /// Rectangular vs Gaussian envelope leakage by gate length (fig3c.csv).
    EnvelopeCompare,
    /// Calibrate the six physical primitives (calibration.json).
    Calibrate,
    /// Randomized benchmarking (fig4.csv, fig4_fit.json).
    Rb,
    /// Bloch trajectory of a dual-pulse train (bloch.csv).
    Trajectory,
    /// Run the independent numerical cross-checks.
    #[command(hide = true)]
    Verify,
}

fn command_name(command: &Command) -> &'static str {
    match command {
        Command::TuningCurve => "tuning-curve",
        Command::LeakageRatio => "leakage-ratio",
        Command::EnvelopeCompare => "envelope-compare",
        Command::Calibrate => "calibrate",
        Command::Rb => "rb",
        Command::Trajectory => "trajectory",
        Command::Verify => "verify",
    }
}

fn main() {
    let cli = Cli::parse();
    if let Some(n) = cli.threads {
        // Ignore the error from double initialization (e.g. under tests).
        rayon::ThreadPoolBuilder::new().num_threads(n).build_global().ok();
    }
    match dispatch(&cli) {
        Ok(code) => std::process::exit(code),
        Err(err) => {
            eprintln!("{}", error_json(&err));
            std::process::exit(1);
        }
    }
}

fn dispatch(cli: &Cli) -> Result<i32> {
    let started = Instant::now();
    if matches!(cli.command, Command::Verify) {
        return cmd_verify();
    }

    std::fs::create_dir_all(&cli.out)?;
    let config_path = cli
        .config
        .as_deref()
        .ok_or_else(|| SfqError::Config("--config is required for this command".into()))?;
    let (config, snapshot) = CliConfig::load(config_path)?;
    if let Some(coupling) = &config.qubit.coupling {
        for warning in QubitParams::validate_coupling(coupling) {
            eprintln!("warning: {warning}");
        }
    }
    let params = QubitParams::try_from(config.qubit.clone())?;

    let mut manifest = RunManifest::new(command_name(&cli.command), Some(config_path), snapshot);
    manifest.hardware_constrained = cli.hardware_constrained;
    manifest.seed = cli.seed;

    match cli.command {
        Command::TuningCurve => cmd_tuning_curve(cli, &config, &params, &mut manifest)?,
        Command::LeakageRatio => cmd_leakage_ratio(cli, &config, &params, &mut manifest)?,
        Command::EnvelopeCompare => cmd_envelope_compare(cli, &config, &params, &mut manifest)?,
        Command::Calibrate => cmd_calibrate(cli, &config, &params, &mut manifest)?,
        Command::Rb => cmd_rb(cli, &config, &params, &mut manifest)?,
        Command::Trajectory => cmd_trajectory(cli, &config, &params, &mut manifest)?,
        Command::Verify => unreachable!("handled above"),
    }

    let manifest_path = manifest.finish(&cli.out, started)?;
    println!("manifest: {}", manifest_path.display());
    Ok(0)
}

fn linspace(lo: f64, hi: f64, n: usize) -> Vec<f64> {
    if n <= 1 {
        return vec![0.5 * (lo + hi)];
    }
    (0..n)
        .map(|i| lo + (hi - lo) * i as f64 / (n - 1) as f64)
        .collect()
}

fn phi_bounds(hardware_constrained: bool) -> (f64, f64) {
    if hardware_constrained {
        (PHI_MIN_HW, PHI_MAX_HW)
    } else {
        (0.0, std::f64::consts::PI)
    }
}

/// Interpret a configured file name relative to the output directory unless
/// it is absolute.
fn resolve_out(out_dir: &Path, name: &str) -> PathBuf {
    let p = Path::new(name);
    if p.is_absolute() {
        p.to_path_buf()
    } else {
        out_dir.join(p)
    }
}

fn cmd_tuning_curve(
    cli: &Cli,
    config: &CliConfig,
    params: &QubitParams,
    manifest: &mut RunManifest,
) -> Result<()> {
    let section = &config.tuning_curve;
    let (lo, hi) = phi_bounds(cli.hardware_constrained);
    let inset = 1e-6 * (hi - lo);
    let grid = linspace(lo + inset, hi - inset, section.grid_points.max(2));
    let curve = tuning_curve(&grid, params, section.n_cycles)?;
    let rows: Vec<String> = curve
        .two_phi_rad
        .iter()
        .zip(&curve.ratio)
        .map(|(two_phi, ratio)| {
            let ideal = 2.0 * (0.5 * two_phi).cos();
            format!("{},{},{}", fmt_f(*two_phi), fmt_f(*ratio), fmt_f(ideal))
        })
        .collect();
    let path = cli.out.join("fig3a.csv");
    write_csv(&path, "two_phi_rad,ratio,ideal", &rows)?;
    manifest.record_output(&path);
    println!("tuning-curve: {} points -> {}", rows.len(), path.display());
    Ok(())
}

fn cmd_leakage_ratio(
    cli: &Cli,
    config: &CliConfig,
    params: &QubitParams,
    manifest: &mut RunManifest,
) -> Result<()> {
    let section = &config.leakage_ratio;
    let (lo_phi, hi_phi) = phi_bounds(cli.hardware_constrained);
    let lo = (2.0 * lo_phi).max(0.02 * std::f64::consts::PI);
    let hi = (2.0 * hi_phi).min(1.98 * std::f64::consts::PI);
    let grid = linspace(lo, hi, section.grid_points.max(2));
    let points = leakage_ratio_curve(&grid, params, section.max_cycles);
    let mut rows: Vec<String> = points
        .iter()
        .map(|p| {
            format!(
                "{},{},{},{}",
                fmt_f(p.two_phi_rad),
                fmt_opt_usize(p.n_cycles),
                fmt_f(p.ratio),
                fmt_opt_text(&p.warning)
            )
        })
        .collect();
    // Reference row: the plain one-pulse-per-cycle pi train.
    let m = (std::f64::consts::PI / params.delta_theta).round().max(1.0) as usize;
    let baseline = leakage_ratio(
        &single_sequence(m, params),
        params,
        PulseShape::default_gaussian(),
    )?;
    rows.push(format!(
        "{},{},{},\"single-pulse pi-train baseline\"",
        fmt_f(f64::NAN),
        m,
        fmt_f(baseline)
    ));
    let path = cli.out.join("fig3b.csv");
    write_csv(&path, "two_phi_rad,n_cycles,ratio,warning", &rows)?;
    manifest.record_output(&path);
    let flagged = points.iter().filter(|p| p.warning.is_some()).count();
    println!(
        "leakage-ratio: {} points ({} infeasible) -> {}",
        points.len(),
        flagged,
        path.display()
    );
    Ok(())
}

fn cmd_envelope_compare(
    cli: &Cli,
    config: &CliConfig,
    params: &QubitParams,
    manifest: &mut RunManifest,
) -> Result<()> {
    let section = &config.envelope_compare;
    let lengths = section
        .gate_lengths_s
        .clone()
        .unwrap_or_else(|| default_gate_length_grid(params));
    let points = envelope_comparison(&lengths, params, section.sigma_factor)?;
    let rows: Vec<String> = points
        .iter()
        .map(|p| {
            format!(
                "{},{},{},{},{}",
                fmt_f(p.t_gate_s),
                p.n_cycles,
                fmt_f(p.ratio_rect),
                fmt_f(p.ratio_gauss),
                fmt_opt_text(&p.warning)
            )
        })
        .collect();
    let path = cli.out.join("fig3c.csv");
    write_csv(&path, "t_gate_s,n_cycles,ratio_rect,ratio_gauss,warning", &rows)?;
    manifest.record_output(&path);
    println!("envelope-compare: {} gate lengths -> {}", rows.len(), path.display());
    Ok(())
}

fn cmd_calibrate(
    cli: &Cli,
    config: &CliConfig,
    params: &QubitParams,
    manifest: &mut RunManifest,
) -> Result<()> {
    let section = &config.calibrate;
    let n_cycles = section
        .n_cycles
        .unwrap_or_else(|| default_n_cycles_per_primitive(params));
    let store =
        CalibrationStore::calibrate(params, n_cycles, section.fine, cli.hardware_constrained)?;
    let name = section.store_path.as_deref().unwrap_or("calibration.json");
    let path = resolve_out(&cli.out, name);
    if let Some(parent) = path.parent() {
        std::fs::create_dir_all(parent)?;
    }
    store.save_json(&path)?;
    manifest.record_output(&path);
    for (prim, gate) in &store.gates {
        println!(
            "{:<5} n_cycles={} phi={} fidelity={}{}",
            prim.name(),
            gate.n_cycles,
            fmt_f(gate.phi),
            fmt_f(gate.achieved_fidelity),
            if gate.boundary_warning { " [window-boundary]" } else { "" }
        );
    }
    println!("calibration store -> {}", path.display());
    Ok(())
}

fn cmd_rb(
    cli: &Cli,
    config: &CliConfig,
    params: &QubitParams,
    manifest: &mut RunManifest,
) -> Result<()> {
    let section = &config.rb;
    let rb_config = RBConfig {
        sequence_lengths: section.sequence_lengths.clone(),
        n_random: section.n_random,
        rng_seed: cli.seed.unwrap_or(section.rng_seed),
        params: *params,
        mode: section.mode,
        n_cycles_per_primitive: section.n_cycles_per_primitive,
        hardware_constrained: cli.hardware_constrained,
    };
    let store = match (&section.calibration_store, section.mode.is_dual()) {
        (Some(path), true) => Some(CalibrationStore::load_json(path)?),
        _ => None,
    };
    if store.is_none() && section.mode.is_dual() {
        manifest.notes.push(format!(
            "calibration store generated implicitly (n_cycles_per_primitive = {})",
            rb_config.resolved_n_cycles()
        ));
    }
    let result = run_rb(&rb_config, store.as_ref())?;

    let rows: Vec<String> = result
        .lengths
        .iter()
        .zip(result.mean_visibility.iter().zip(&result.stderr))
        .map(|(len, (mean, se))| format!("{},{},{}", len, fmt_f(*mean), fmt_f(*se)))
        .collect();
    let csv_path = cli.out.join("fig4.csv");
    write_csv(&csv_path, "length,mean_visibility,stderr", &rows)?;
    manifest.record_output(&csv_path);

    let fit_path = cli.out.join("fig4_fit.json");
    write_json_pretty(&fit_path, &result)?;
    manifest.record_output(&fit_path);

    println!(
        "rb: p = {} epc = {} (residual {}) -> {}, {}",
        fmt_f(result.fit.p),
        fmt_f(result.epc),
        fmt_f(result.fit.residual_norm),
        csv_path.display(),
        fit_path.display()
    );
    Ok(())
}

fn cmd_trajectory(
    cli: &Cli,
    config: &CliConfig,
    params: &QubitParams,
    manifest: &mut RunManifest,
) -> Result<()> {
    let section = &config.trajectory;
    let (schedule, _train) = dual_sequence(
        section.n_cycles,
        section.phi_rad,
        section.psi_rad,
        params,
        cli.hardware_constrained,
    )?;
    let initial = BlochPoint { x: 0.0, y: 0.0, z: 1.0 };
    let trajectory = evolve_bloch_timed(&schedule, initial, section.substeps)?;
    let rows: Vec<String> = trajectory
        .iter()
        .map(|(t, lab, rot)| {
            format!(
                "{},{},{},{},{},{},{}",
                fmt_f(*t),
                fmt_f(lab.x),
                fmt_f(lab.y),
                fmt_f(lab.z),
                fmt_f(rot.x),
                fmt_f(rot.y),
                fmt_f(rot.z)
            )
        })
        .collect();
    let path = cli.out.join("bloch.csv");
    write_csv(&path, "time_s,lab_x,lab_y,lab_z,rot_x,rot_y,rot_z", &rows)?;
    manifest.record_output(&path);
    println!("trajectory: {} samples -> {}", rows.len(), path.display());
    Ok(())
}

fn cmd_verify() -> Result<i32> {
    let reports = sfq_oracles::run_all();
    let mut all_pass = true;
    for report in &reports {
        println!("{}", serde_json::to_string(report)?);
        all_pass &= report.pass;
    }
    Ok(if all_pass { 0 } else { 1 })
}

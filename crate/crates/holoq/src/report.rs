//! CSV and run-manifest emission.
//!
//! Floats are written with Rust's shortest round-trip formatting, so a given
//! config always produces bitwise-identical files. Plotting is outside this
//! crate: any tool can consume the CSVs.

use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use serde::Serialize;

use crate::config::RunConfig;
use crate::dynamics::TrajectoryRecord;
use crate::error::Result;
use crate::scenario::SweepResult;

/// Sweep CSV: axis value, final populations, scenario extras, and the
/// distance of each point from the fitted sinusoid (zero when no fit ran).
pub fn write_sweep_csv(dir: &Path, sweep: &SweepResult) -> Result<PathBuf> {
    fs::create_dir_all(dir)?;
    let path = dir.join(format!("{}.csv", sweep.scenario));
    let mut out = Vec::new();
    write!(out, "{},p0,p1,p2", sweep.axis_name)?;
    for name in &sweep.extra_names {
        write!(out, ",{name}")?;
    }
    writeln!(out, ",fit_residual")?;
    for p in &sweep.points {
        let fit_residual = match &sweep.fit {
            Some(fit) => (p.final_populations[fit.observable] - fit.model(p.axis)).abs(),
            None => 0.0,
        };
        write!(
            out,
            "{},{},{},{}",
            p.axis, p.final_populations[0], p.final_populations[1], p.final_populations[2]
        )?;
        for x in &p.extras {
            write!(out, ",{x}")?;
        }
        writeln!(out, ",{fit_residual}")?;
    }
    fs::write(&path, out)?;
    Ok(path)
}

/// Per-point trajectory CSV with the fixed column set
/// time_ns, p0, p1, p2, residual.
pub fn write_trajectory_csv(
    dir: &Path,
    scenario: &str,
    index: usize,
    traj: &TrajectoryRecord,
) -> Result<PathBuf> {
    fs::create_dir_all(dir)?;
    let path = dir.join(format!("{scenario}_traj_{index:03}.csv"));
    let mut out = Vec::new();
    writeln!(out, "time_ns,p0,p1,p2,residual")?;
    for (k, (t, p)) in traj.times.iter().zip(&traj.populations).enumerate() {
        let residual = traj.residuals.get(k).copied().unwrap_or(0.0);
        writeln!(out, "{},{},{},{},{residual}", t * 1e9, p[0], p[1], p[2])?;
    }
    fs::write(&path, out)?;
    Ok(path)
}

/// Everything needed to rerun a sweep: resolved config, grid, integrator
/// settings and the code version.
#[derive(Debug, Serialize)]
pub struct RunManifest<'a> {
    pub version: &'static str,
    pub scenario: &'a str,
    pub axis_name: &'a str,
    pub points: usize,
    pub two_photon_model: &'a str,
    pub decoherence: bool,
    pub seed: u64,
    pub fit: Option<FitSummary>,
    pub config: &'a RunConfig,
}

#[derive(Debug, Serialize)]
pub struct FitSummary {
    pub observable: usize,
    pub freq: f64,
    pub offset: f64,
    pub amplitude: f64,
    pub phase_rad: f64,
    pub rms_residual: f64,
}

pub fn write_manifest(dir: &Path, manifest: &RunManifest<'_>) -> Result<PathBuf> {
    fs::create_dir_all(dir)?;
    let path = dir.join(format!("{}_manifest.toml", manifest.scenario));
    let text = toml::to_string_pretty(manifest)
        .map_err(|e| crate::error::Error::Config(format!("manifest serialization: {e}")))?;
    fs::write(&path, text)?;
    Ok(path)
}

/// Write a sweep with its manifest and per-point trajectory files.
pub fn write_sweep_bundle(
    dir: &Path,
    sweep: &SweepResult,
    config: &RunConfig,
    model_name: &str,
    decoherence: bool,
    seed: u64,
) -> Result<Vec<PathBuf>> {
    let mut written = vec![write_sweep_csv(dir, sweep)?];
    for (k, p) in sweep.points.iter().enumerate() {
        written.push(write_trajectory_csv(dir, &sweep.scenario, k, &p.trajectory)?);
    }
    let manifest = RunManifest {
        version: env!("CARGO_PKG_VERSION"),
        scenario: &sweep.scenario,
        axis_name: sweep.axis_name,
        points: sweep.points.len(),
        two_photon_model: model_name,
        decoherence,
        seed,
        fit: sweep.fit.as_ref().map(|f| FitSummary {
            observable: f.observable,
            freq: f.freq,
            offset: f.fit.offset,
            amplitude: f.fit.amplitude,
            phase_rad: f.fit.phase,
            rms_residual: f.fit.rms_residual,
        }),
        config,
    };
    written.push(write_manifest(dir, &manifest)?);
    Ok(written)
}

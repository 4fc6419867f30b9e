//! Scenario runner: the experiment sequences, as configured sweeps with
//! closed-form expectations attached.
//!
//! Each scenario produces a [`SweepResult`]: one row per grid point with the
//! final populations, scenario-specific extra columns (marker populations,
//! analytic models, defects) and the per-point trajectory. Sweep points are
//! independent and run on a worker pool; aggregation is ordered by grid
//! index, so outputs are bitwise reproducible regardless of worker count.

use num_complex::Complex64 as C64;
use rayon::prelude::*;

use crate::device::DeviceParams;
use crate::dynamics::{
    propagate_lindblad, propagate_unitary_trajectory, DecoherenceParams, Snapshot,
    TimeGrid, TrajectoryRecord,
};
use crate::error::{Error, Result};
use crate::fit::{fit_fixed_freq, fit_scan_freq, SinusoidFit};
use crate::holonomy::{GateSpec, HolonomicDrive};
use crate::pulse::ScalingPair;
use crate::qutrit::{DensityMatrix, Operator2, StateVector};
use crate::twophoton::{
    calibrate_two_photon, ideal_pi2_gate, ideal_two_photon_rotation, ladder_hamiltonian,
    LadderDriveConfig, TwoPhotonCalibration, TwoPhotonTarget,
};

/// Which model realizes the 0-2 two-photon step of a sequence.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TwoPhotonModel {
    /// Instantaneous ideal rotation on the computational subspace.
    Ideal,
    /// Full three-level ladder pulse at the Stark-compensated carrier.
    Ladder,
}

impl std::str::FromStr for TwoPhotonModel {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "ideal" => Ok(Self::Ideal),
            "ladder" => Ok(Self::Ladder),
            other => Err(Error::Config(format!(
                "unknown two-photon model `{other}` (expected ideal|ladder)"
            ))),
        }
    }
}

/// The named sweep scenarios exposed by the CLI.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ScenarioId {
    Fig4,
    Fig5,
    Fig6,
    Fig7,
    RabiRamsey,
}

impl ScenarioId {
    pub fn name(&self) -> &'static str {
        match self {
            Self::Fig4 => "fig4",
            Self::Fig5 => "fig5",
            Self::Fig6 => "fig6",
            Self::Fig7 => "fig7",
            Self::RabiRamsey => "rabi-ramsey",
        }
    }
}

impl std::str::FromStr for ScenarioId {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "fig4" => Ok(Self::Fig4),
            "fig5" => Ok(Self::Fig5),
            "fig6" => Ok(Self::Fig6),
            "fig7" => Ok(Self::Fig7),
            "rabi-ramsey" => Ok(Self::RabiRamsey),
            other => Err(Error::UnknownScenario(other.to_string())),
        }
    }
}

/// Resolved knobs a scenario runs with.
#[derive(Debug, Clone, Copy)]
pub struct ScenarioSettings {
    pub device: DeviceParams,
    /// Width constant of the (identical) 0-1 and 1-2 gate pulses, s.
    pub td01: f64,
    /// Width constant of the two-photon pulse, s.
    pub td02: f64,
    /// Idle gap between consecutive pulses, s.
    pub gap: f64,
    /// Closed-system integrator step, s.
    pub dt: f64,
    /// Open-system integrator step, s.
    pub dt_open: f64,
    /// Grid points per sweep axis.
    pub points: usize,
    pub model: TwoPhotonModel,
    pub decoherence: bool,
    /// Record populations every this many integrator steps.
    pub trajectory_stride: usize,
}

impl Default for ScenarioSettings {
    fn default() -> Self {
        Self {
            device: DeviceParams::default(),
            td01: 6.5e-9,
            td02: 9.0e-9,
            gap: 0.0,
            dt: 1.0e-12,
            dt_open: 10.0e-12,
            points: 41,
            model: TwoPhotonModel::Ideal,
            decoherence: false,
            trajectory_stride: 50,
        }
    }
}

impl ScenarioSettings {
    fn decoherence_params(&self) -> DecoherenceParams {
        if self.decoherence {
            DecoherenceParams::from_t1_t2(self.device.t1, self.device.t2)
        } else {
            DecoherenceParams::off()
        }
    }

    /// Two-photon template at zero amplitude, centered so its support starts
    /// at `t_start`, at the bare (uncompensated) carrier.
    fn ladder_template(&self, t_start: f64, phi02: f64) -> Result<LadderDriveConfig> {
        LadderDriveConfig::new(
            crate::pulse::Envelope::new(0.0, t_start + 2.0 * self.td02, self.td02)?,
            phi02,
            self.device.two_photon_delta(),
            2.0_f64.sqrt(),
            0.0,
        )
    }
}

/// One row of a sweep.
#[derive(Debug, Clone)]
pub struct SweepPoint {
    pub axis: f64,
    pub final_populations: [f64; 3],
    pub extras: Vec<f64>,
    pub trajectory: TrajectoryRecord,
}

/// A fitted sinusoid attached to a sweep: which population it describes and
/// at what frequency in the swept axis.
#[derive(Debug, Clone, Copy)]
pub struct SweepFit {
    /// Index of the fitted population (0 or 2).
    pub observable: usize,
    /// Cycles of the sinusoid per unit of the axis, in rad.
    pub freq: f64,
    pub fit: SinusoidFit,
}

impl SweepFit {
    pub fn model(&self, axis: f64) -> f64 {
        self.fit.offset + self.fit.amplitude * (self.freq * axis + self.fit.phase).sin()
    }
}

/// A completed sweep with its fitted sinusoid where one applies.
#[derive(Debug, Clone)]
pub struct SweepResult {
    pub scenario: String,
    pub axis_name: &'static str,
    pub extra_names: Vec<&'static str>,
    pub points: Vec<SweepPoint>,
    pub fit: Option<SweepFit>,
}

impl SweepResult {
    pub fn axis_values(&self) -> Vec<f64> {
        self.points.iter().map(|p| p.axis).collect()
    }

    pub fn extra_column(&self, name: &str) -> Option<Vec<f64>> {
        let idx = self.extra_names.iter().position(|n| *n == name)?;
        Some(self.points.iter().map(|p| p.extras[idx]).collect())
    }

    /// Largest recorded deviation of the population sum from one, across all
    /// trajectories of the sweep.
    pub fn max_population_defect(&self) -> f64 {
        self.points
            .iter()
            .map(|p| p.trajectory.max_population_defect())
            .fold(0.0, f64::max)
    }
}

/// Either a pure state or a density matrix, whichever the run propagates.
#[derive(Debug, Clone, Copy)]
enum SimState {
    Pure(StateVector),
    Mixed(DensityMatrix),
}

impl SimState {
    fn initial(decoherence: bool) -> Self {
        if decoherence {
            Self::Mixed(DensityMatrix::pure(&StateVector::basis(0)))
        } else {
            Self::Pure(StateVector::basis(0))
        }
    }

    fn populations(&self) -> [f64; 3] {
        match self {
            Self::Pure(psi) => psi.populations(),
            Self::Mixed(rho) => rho.populations(),
        }
    }

    fn apply_gate2(&self, gate: &Operator2) -> Self {
        let embedded = gate.embed();
        match self {
            Self::Pure(psi) => Self::Pure(embedded.apply(psi)),
            Self::Mixed(rho) => Self::Mixed(embedded.conjugate(rho)),
        }
    }
}

/// Propagate one pulse segment, appending to the running trajectory.
fn run_segment<F>(
    state: SimState,
    h_of_t: F,
    grid: &TimeGrid,
    dec: &DecoherenceParams,
    stride: usize,
    traj: &mut TrajectoryRecord,
) -> Result<SimState>
where
    F: Fn(f64) -> crate::qutrit::Operator3 + Sync,
{
    let out = match state {
        SimState::Pure(psi) => {
            let (_, rec) = propagate_unitary_trajectory(&h_of_t, grid, &psi, stride, true)?;
            let last = match rec.snapshots.last() {
                Some(Snapshot::Pure(p)) => *p,
                _ => unreachable!(),
            };
            append_record(traj, &rec);
            SimState::Pure(last)
        }
        SimState::Mixed(rho) => {
            let rec = propagate_lindblad(&h_of_t, dec, &rho, grid, stride, true)?;
            let last = match rec.snapshots.last() {
                Some(Snapshot::Mixed(r)) => *r,
                _ => unreachable!(),
            };
            append_record(traj, &rec);
            SimState::Mixed(last)
        }
    };
    Ok(out)
}

fn append_record(traj: &mut TrajectoryRecord, seg: &TrajectoryRecord) {
    let skip = if traj
        .times
        .last()
        .is_some_and(|t| seg.times.first().is_some_and(|s| (s - t).abs() < 1e-18))
    {
        1
    } else {
        0
    };
    traj.times.extend(seg.times.iter().skip(skip));
    traj.populations.extend(seg.populations.iter().skip(skip));
}

fn record_instant(traj: &mut TrajectoryRecord, t: f64, state: &SimState) {
    traj.times.push(t);
    traj.populations.push(state.populations());
}

fn linspace(lo: f64, hi: f64, n: usize) -> Vec<f64> {
    if n == 1 {
        return vec![lo];
    }
    (0..n)
        .map(|k| lo + (hi - lo) * k as f64 / (n - 1) as f64)
        .collect()
}

/// Grid over [0, 2*pi) excluding the endpoint.
fn phase_grid(n: usize) -> Vec<f64> {
    (0..n)
        .map(|k| std::f64::consts::TAU * k as f64 / n as f64)
        .collect()
}

/// Scaling pair for a drive with amplitude scaling |a| and 0-1 phase phi01;
/// |b| follows from normalization and carries the canonical sign.
pub fn pair_from_scale(a_scale: f64, phi01: f64) -> Result<ScalingPair> {
    let clamped = a_scale.clamp(0.0, 1.0);
    ScalingPair::new(
        C64::from_polar(clamped, phi01),
        C64::new(-(1.0 - clamped * clamped).sqrt(), 0.0),
    )
}

/// Population-control sweep: scan the amplitude scaling |a| at phi01 = pi and
/// record the populations after the gate pulses, starting from |0>.
pub fn run_population_sweep(settings: &ScenarioSettings) -> Result<SweepResult> {
    let dec = settings.decoherence_params();
    let dt = if settings.decoherence {
        settings.dt_open
    } else {
        settings.dt
    };
    let axis = linspace(0.0, 1.0, settings.points);
    let points: Vec<SweepPoint> = axis
        .par_iter()
        .map(|&a_scale| -> Result<SweepPoint> {
            let sp = pair_from_scale(a_scale, std::f64::consts::PI)?;
            let drive = HolonomicDrive::new(sp, settings.td01, 2.0 * settings.td01, std::f64::consts::PI)?;
            let grid = TimeGrid::new(0.0, 4.0 * settings.td01, dt)?;
            let (traj, fin) = if settings.decoherence {
                let mut traj = TrajectoryRecord::default();
                let state = run_segment(
                    SimState::initial(true),
                    |t| drive.hamiltonian_at(t),
                    &grid,
                    &dec,
                    settings.trajectory_stride,
                    &mut traj,
                )?;
                let fin = state.populations();
                (traj, fin)
            } else {
                // the closed-system run doubles as the parallel-transport
                // monitor: the trajectory carries the per-sample residuals
                let (_, traj) = crate::dynamics::parallel_transport_trajectory(
                    |t| drive.hamiltonian_at(t),
                    &grid,
                    settings.trajectory_stride,
                )?;
                let fin = traj.final_populations();
                (traj, fin)
            };
            let model = 4.0 * a_scale * a_scale * (1.0 - a_scale * a_scale);
            Ok(SweepPoint {
                axis: a_scale,
                final_populations: fin,
                extras: vec![model, (fin[2] - model).abs()],
                trajectory: traj,
            })
        })
        .collect::<Result<_>>()?;
    Ok(SweepResult {
        scenario: "fig4".into(),
        axis_name: "a_scale",
        extra_names: vec!["p2_model", "p2_defect"],
        points,
        fit: None,
    })
}

/// Final populations must not depend on the relative drive phase phi01; the
/// 0-2 coherence does. Scans phi01 at fixed |a|.
pub fn run_phase_independence_check(
    settings: &ScenarioSettings,
    a_scale: f64,
) -> Result<SweepResult> {
    let axis = phase_grid(settings.points);
    let points: Vec<SweepPoint> = axis
        .par_iter()
        .map(|&phi01| -> Result<SweepPoint> {
            let sp = pair_from_scale(a_scale, phi01)?;
            let drive = HolonomicDrive::new(sp, settings.td01, 2.0 * settings.td01, phi01)?;
            let grid = TimeGrid::new(0.0, 4.0 * settings.td01, settings.dt)?;
            let (_, rec) = propagate_unitary_trajectory(
                |t| drive.hamiltonian_at(t),
                &grid,
                &StateVector::basis(0),
                settings.trajectory_stride,
                true,
            )?;
            let psi = match rec.snapshots.last() {
                Some(Snapshot::Pure(p)) => *p,
                _ => unreachable!(),
            };
            let coherence = psi.amplitude(0) * psi.amplitude(2).conj();
            let mut traj = TrajectoryRecord::default();
            append_record(&mut traj, &rec);
            Ok(SweepPoint {
                axis: phi01,
                final_populations: rec.final_populations(),
                extras: vec![coherence.re, coherence.im],
                trajectory: traj,
            })
        })
        .collect::<Result<_>>()?;
    Ok(SweepResult {
        scenario: "phase-independence".into(),
        axis_name: "phi01_rad",
        extra_names: vec!["re_rho02", "im_rho02"],
        points,
        fit: None,
    })
}

/// Holonomic Hadamard followed by a two-photon pi/2 pulse at phi02 = 0,
/// swept over the gate phase phi01. The populations read out the phase of
/// the prepared superposition: p0 = (1 + sin phi01)/2 for the ideal model.
pub fn run_hadamard_phase_sweep(settings: &ScenarioSettings) -> Result<SweepResult> {
    let dec = settings.decoherence_params();
    let dt = if settings.decoherence {
        settings.dt_open
    } else {
        settings.dt
    };
    let gate_end = 4.0 * settings.td01;
    let seq_end = gate_end + settings.gap + 4.0 * settings.td02;

    // one shared pi/2 calibration for the ladder model
    let cal = match settings.model {
        TwoPhotonModel::Ladder => Some(calibrate_two_photon(
            TwoPhotonTarget::PiOver2,
            &settings.ladder_template(gate_end + settings.gap, 0.0)?,
            settings.dt.max(2e-12),
        )?),
        TwoPhotonModel::Ideal => None,
    };

    let axis = phase_grid(settings.points);
    let points: Vec<SweepPoint> = axis
        .par_iter()
        .map(|&phi01| -> Result<SweepPoint> {
            let gate = GateSpec::hadamard(phi01);
            let drive = HolonomicDrive::for_gate(&gate, settings.td01, 2.0 * settings.td01)?;
            let grid = TimeGrid::new(0.0, gate_end, dt)?;
            let mut traj = TrajectoryRecord::default();
            let mut state = run_segment(
                SimState::initial(settings.decoherence),
                |t| drive.hamiltonian_at(t),
                &grid,
                &dec,
                settings.trajectory_stride,
                &mut traj,
            )?;
            let mid = state.populations();

            state = match (settings.model, &cal) {
                (TwoPhotonModel::Ideal, _) => {
                    if settings.decoherence {
                        // idle through the nominal two-photon window, then
                        // the instantaneous ideal gate
                        let idle = TimeGrid::new(gate_end, seq_end, settings.dt_open)?;
                        state = run_segment(
                            state,
                            |_| crate::qutrit::Operator3::zeros(),
                            &idle,
                            &dec,
                            settings.trajectory_stride,
                            &mut traj,
                        )?;
                    }
                    let out = state.apply_gate2(&ideal_pi2_gate(0.0));
                    record_instant(&mut traj, seq_end, &out);
                    out
                }
                (TwoPhotonModel::Ladder, Some(cal)) => {
                    let pulse = settings
                        .ladder_template(gate_end + settings.gap, 0.0)?
                        .with_omega0(cal.omega0)
                        .with_two_photon_detuning(cal.two_photon_detuning);
                    let grid2 = TimeGrid::new(gate_end + settings.gap, seq_end, dt)?;
                    run_segment(
                        state,
                        |t| ladder_hamiltonian(&pulse, t),
                        &grid2,
                        &dec,
                        settings.trajectory_stride,
                        &mut traj,
                    )?
                }
                (TwoPhotonModel::Ladder, None) => unreachable!(),
            };

            let fin = state.populations();
            let model = 0.5 * (1.0 + phi01.sin());
            Ok(SweepPoint {
                axis: phi01,
                final_populations: fin,
                extras: vec![mid[0], mid[2], model, (fin[0] - model).abs()],
                trajectory: traj,
            })
        })
        .collect::<Result<_>>()?;

    let xs: Vec<f64> = points.iter().map(|p| p.axis).collect();
    let ys: Vec<f64> = points.iter().map(|p| p.final_populations[0]).collect();
    let fit = fit_fixed_freq(&xs, &ys, 1.0);
    Ok(SweepResult {
        scenario: "fig5".into(),
        axis_name: "phi01_rad",
        extra_names: vec!["p0_mid", "p2_mid", "p0_model", "p0_defect"],
        points,
        fit: Some(SweepFit {
            observable: 0,
            freq: 1.0,
            fit,
        }),
    })
}

/// Two-photon preparation pulse of swept amplitude followed by the holonomic
/// NOT gate. Records the populations at the end of the preparation and at
/// the end of the gate; the gate must invert them.
pub fn run_not_on_prepared(settings: &ScenarioSettings) -> Result<SweepResult> {
    let dec = settings.decoherence_params();
    let dt = if settings.decoherence {
        settings.dt_open
    } else {
        settings.dt
    };
    let prep_end = 4.0 * settings.td02;
    let seq_end = prep_end + settings.gap + 4.0 * settings.td01;

    let cal = match settings.model {
        TwoPhotonModel::Ladder => Some(calibrate_two_photon(
            TwoPhotonTarget::Pi,
            &settings.ladder_template(0.0, 0.0)?,
            settings.dt.max(2e-12),
        )?),
        TwoPhotonModel::Ideal => None,
    };

    let axis = linspace(0.0, 1.0, settings.points);
    let points: Vec<SweepPoint> = axis
        .par_iter()
        .map(|&scale| -> Result<SweepPoint> {
            let mut traj = TrajectoryRecord::default();
            let mut state = SimState::initial(settings.decoherence);

            state = match (settings.model, &cal) {
                (TwoPhotonModel::Ideal, _) => {
                    // idealized preparation: rotation angle pi * scale^2,
                    // mirroring the quadratic amplitude dependence of the
                    // two-photon rate
                    record_instant(&mut traj, 0.0, &state);
                    let angle = std::f64::consts::PI * scale * scale;
                    let out = state.apply_gate2(&ideal_two_photon_rotation(angle, 0.0));
                    record_instant(&mut traj, prep_end, &out);
                    out
                }
                (TwoPhotonModel::Ladder, Some(cal)) => {
                    let pulse = settings
                        .ladder_template(0.0, 0.0)?
                        .with_omega0(scale * cal.omega0)
                        .with_two_photon_detuning(cal.two_photon_detuning);
                    let grid = TimeGrid::new(0.0, prep_end, dt)?;
                    run_segment(
                        state,
                        |t| ladder_hamiltonian(&pulse, t),
                        &grid,
                        &dec,
                        settings.trajectory_stride,
                        &mut traj,
                    )?
                }
                (TwoPhotonModel::Ladder, None) => unreachable!(),
            };
            let init = state.populations();

            let drive = HolonomicDrive::for_gate(
                &GateSpec::not(),
                settings.td01,
                prep_end + settings.gap + 2.0 * settings.td01,
            )?;
            let grid = TimeGrid::new(prep_end + settings.gap, seq_end, dt)?;
            state = run_segment(
                state,
                |t| drive.hamiltonian_at(t),
                &grid,
                &dec,
                settings.trajectory_stride,
                &mut traj,
            )?;
            let fin = state.populations();

            // the |1> residual is folded into p2 at both markers, the same
            // correction applied to the measured curves
            let p2i_corr = init[2] + init[1];
            let p2f_corr = fin[2] + fin[1];
            let inversion_defect = (fin[0] - p2i_corr).abs();
            Ok(SweepPoint {
                axis: scale,
                final_populations: fin,
                extras: vec![init[0], init[1], init[2], p2i_corr, p2f_corr, inversion_defect],
                trajectory: traj,
            })
        })
        .collect::<Result<_>>()?;
    Ok(SweepResult {
        scenario: "fig6".into(),
        axis_name: "amp_scale",
        extra_names: vec![
            "p0_init",
            "p1_init",
            "p2_init",
            "p2_init_corrected",
            "p2_final_corrected",
            "inversion_defect",
        ],
        points,
        fit: None,
    })
}

/// Two-photon pi/2 pulse of swept phase phi02 followed by the holonomic
/// Hadamard at phi01 = 0: p2 = (1 + sin 2 phi02)/2 for the ideal model, with
/// pi periodicity in phi02.
pub fn run_hadamard_on_superposition(settings: &ScenarioSettings) -> Result<SweepResult> {
    let dec = settings.decoherence_params();
    let dt = if settings.decoherence {
        settings.dt_open
    } else {
        settings.dt
    };
    let prep_end = 4.0 * settings.td02;
    let seq_end = prep_end + settings.gap + 4.0 * settings.td01;

    let cal = match settings.model {
        TwoPhotonModel::Ladder => Some(calibrate_two_photon(
            TwoPhotonTarget::PiOver2,
            &settings.ladder_template(0.0, 0.0)?,
            settings.dt.max(2e-12),
        )?),
        TwoPhotonModel::Ideal => None,
    };

    let axis = phase_grid(settings.points);
    let points: Vec<SweepPoint> = axis
        .par_iter()
        .map(|&phi02| -> Result<SweepPoint> {
            let mut traj = TrajectoryRecord::default();
            let mut state = SimState::initial(settings.decoherence);

            state = match (settings.model, &cal) {
                (TwoPhotonModel::Ideal, _) => {
                    record_instant(&mut traj, 0.0, &state);
                    let out = state.apply_gate2(&ideal_pi2_gate(phi02));
                    record_instant(&mut traj, prep_end, &out);
                    out
                }
                (TwoPhotonModel::Ladder, Some(cal)) => {
                    let pulse = settings
                        .ladder_template(0.0, phi02)?
                        .with_omega0(cal.omega0)
                        .with_two_photon_detuning(cal.two_photon_detuning);
                    let grid = TimeGrid::new(0.0, prep_end, dt)?;
                    run_segment(
                        state,
                        |t| ladder_hamiltonian(&pulse, t),
                        &grid,
                        &dec,
                        settings.trajectory_stride,
                        &mut traj,
                    )?
                }
                (TwoPhotonModel::Ladder, None) => unreachable!(),
            };

            let drive = HolonomicDrive::for_gate(
                &GateSpec::hadamard(0.0),
                settings.td01,
                prep_end + settings.gap + 2.0 * settings.td01,
            )?;
            let grid = TimeGrid::new(prep_end + settings.gap, seq_end, dt)?;
            state = run_segment(
                state,
                |t| drive.hamiltonian_at(t),
                &grid,
                &dec,
                settings.trajectory_stride,
                &mut traj,
            )?;

            let fin = state.populations();
            let model = 0.5 * (1.0 + (2.0 * phi02).sin());
            Ok(SweepPoint {
                axis: phi02,
                final_populations: fin,
                extras: vec![model, (fin[2] - model).abs()],
                trajectory: traj,
            })
        })
        .collect::<Result<_>>()?;

    let xs: Vec<f64> = points.iter().map(|p| p.axis).collect();
    let ys: Vec<f64> = points.iter().map(|p| p.final_populations[2]).collect();
    let fit = fit_fixed_freq(&xs, &ys, 2.0);
    Ok(SweepResult {
        scenario: "fig7".into(),
        axis_name: "phi02_rad",
        extra_names: vec!["p2_model", "p2_defect"],
        points,
        fit: Some(SweepFit {
            observable: 2,
            freq: 2.0,
            fit,
        }),
    })
}

/// Detunings (two-photon, rad/s) swept by the Ramsey part, relative to the
/// Stark-compensated carrier.
pub const RAMSEY_DETUNINGS_HZ: [f64; 5] = [-2.0e6, -1.0e6, 0.0, 1.0e6, 2.0e6];

/// Two-photon characterization: an amplitude-swept Rabi curve and Ramsey
/// fringes versus pulse delay at several applied detunings. Always uses the
/// ladder model.
pub fn run_two_photon_rabi_ramsey(
    settings: &ScenarioSettings,
) -> Result<(SweepResult, SweepResult)> {
    let dec = settings.decoherence_params();
    let dt = settings.dt.max(2e-12);
    let template = settings.ladder_template(0.0, 0.0)?;
    let cal_pi = calibrate_two_photon(TwoPhotonTarget::Pi, &template, dt)?;
    let cal_pi2 = calibrate_two_photon(TwoPhotonTarget::PiOver2, &template, dt)?;

    // Rabi: sweep the peak amplitude at the fixed calibrated carrier
    let axis = linspace(0.0, 1.3 * cal_pi.omega0, settings.points);
    let rabi_points: Vec<SweepPoint> = axis
        .par_iter()
        .map(|&omega0| -> Result<SweepPoint> {
            let pulse = template
                .with_omega0(omega0)
                .with_two_photon_detuning(cal_pi.two_photon_detuning);
            let grid = TimeGrid::new(0.0, 4.0 * settings.td02, dt)?;
            let mut traj = TrajectoryRecord::default();
            let state = run_segment(
                SimState::initial(false),
                |t| ladder_hamiltonian(&pulse, t),
                &grid,
                &dec,
                settings.trajectory_stride,
                &mut traj,
            )?;
            let fin = state.populations();
            Ok(SweepPoint {
                axis: omega0 * 1e-9, // rad/ns on the axis
                final_populations: fin,
                extras: vec![traj.populations.iter().map(|p| p[1]).fold(0.0, f64::max)],
                trajectory: traj,
            })
        })
        .collect::<Result<_>>()?;
    let rabi = SweepResult {
        scenario: "rabi".into(),
        axis_name: "omega0_rad_per_ns",
        extra_names: vec!["max_p1"],
        points: rabi_points,
        fit: None,
    };

    // Ramsey: two pi/2 pulses separated by a swept delay, at several applied
    // detunings around the compensated carrier
    let pulse_len = 4.0 * settings.td02;
    let delays = linspace(0.0, 1.5e-6, settings.points);
    let mut jobs = Vec::new();
    for &det_hz in RAMSEY_DETUNINGS_HZ.iter() {
        for &delay in &delays {
            jobs.push((det_hz, delay));
        }
    }
    let ramsey_points: Vec<SweepPoint> = jobs
        .par_iter()
        .map(|&(det_hz, delay)| -> Result<SweepPoint> {
            // the swept axis is the carrier detuning from the bare 0-2
            // resonance; the free evolution between the pulses accumulates
            // phase at exactly this rate, so the fringe frequency reads it
            // back directly
            let detuning = std::f64::consts::TAU * det_hz;
            let mut traj = TrajectoryRecord::default();
            let mut state = SimState::initial(false);

            let pulse1 = template
                .with_omega0(cal_pi2.omega0)
                .with_two_photon_detuning(detuning);
            let grid1 = TimeGrid::new(0.0, pulse_len, dt)?;
            state = run_segment(
                state,
                |t| ladder_hamiltonian(&pulse1, t),
                &grid1,
                &dec,
                settings.trajectory_stride,
                &mut traj,
            )?;

            if delay > 0.0 {
                // free evolution at the detuned carrier is a constant
                // Hamiltonian: one exact step suffices
                let idle = pulse1.with_omega0(0.0);
                let idle_end = pulse_len + delay;
                let grid_idle = TimeGrid::new(pulse_len, idle_end, idle_end - pulse_len)?;
                state = run_segment(
                    state,
                    |t| ladder_hamiltonian(&idle, t),
                    &grid_idle,
                    &dec,
                    1,
                    &mut traj,
                )?;
            }

            let t2 = pulse_len + delay;
            let pulse2 = LadderDriveConfig::new(
                crate::pulse::Envelope::new(cal_pi2.omega0, t2 + 2.0 * settings.td02, settings.td02)?,
                0.0,
                template.delta,
                template.coupling_ratio,
                detuning,
            )?;
            let grid2 = TimeGrid::new(t2, t2 + pulse_len, dt)?;
            state = run_segment(
                state,
                |t| ladder_hamiltonian(&pulse2, t),
                &grid2,
                &dec,
                settings.trajectory_stride,
                &mut traj,
            )?;

            let fin = state.populations();
            let max_p1 = traj.populations.iter().map(|p| p[1]).fold(0.0, f64::max);
            Ok(SweepPoint {
                axis: delay * 1e9, // ns on the axis
                final_populations: fin,
                extras: vec![det_hz / 1e6, max_p1],
                trajectory: traj,
            })
        })
        .collect::<Result<_>>()?;
    let ramsey = SweepResult {
        scenario: "ramsey".into(),
        axis_name: "delay_ns",
        extra_names: vec!["detuning_mhz", "max_p1"],
        points: ramsey_points,
        fit: None,
    };

    Ok((rabi, ramsey))
}

/// Measured Ramsey fringe frequencies (Hz) per applied detuning (Hz), from
/// frequency-scanned sinusoid fits of p2 versus delay.
pub fn ramsey_fringe_frequencies(ramsey: &SweepResult) -> Vec<(f64, f64)> {
    let mut out = Vec::new();
    for &det_hz in RAMSEY_DETUNINGS_HZ.iter() {
        if det_hz == 0.0 {
            continue;
        }
        let mut xs = Vec::new();
        let mut ys = Vec::new();
        for p in &ramsey.points {
            if (p.extras[0] - det_hz / 1e6).abs() < 1e-9 {
                xs.push(p.axis * 1e-9); // back to seconds
                ys.push(p.final_populations[2]);
            }
        }
        let f_true = det_hz.abs() * std::f64::consts::TAU;
        let (freq, _) = fit_scan_freq(&xs, &ys, 0.5 * f_true, 1.5 * f_true, 101);
        out.push((det_hz.abs(), freq / std::f64::consts::TAU));
    }
    out
}

pub fn calibration_for(
    settings: &ScenarioSettings,
    target: TwoPhotonTarget,
) -> Result<TwoPhotonCalibration> {
    calibrate_two_photon(
        target,
        &settings.ladder_template(0.0, 0.0)?,
        settings.dt.max(2e-12),
    )
}

/// Outcome of one named invariant check.
#[derive(Debug, Clone)]
pub struct InvariantCheck {
    pub name: &'static str,
    pub passed: bool,
    pub detail: String,
}

fn check(name: &'static str, passed: bool, detail: String) -> InvariantCheck {
    InvariantCheck {
        name,
        passed,
        detail,
    }
}

/// The full invariant suite behind `holoq check`: gate-algebra identities,
/// propagator consistency, open-system sanity and calibration round-trips,
/// each reported as one pass/fail line.
pub fn invariant_suite(settings: &ScenarioSettings) -> Result<Vec<InvariantCheck>> {
    use crate::holonomy::{
        ab_from_angles, axis_operator, commutator, cross, dark_bright, holonomic_unitary2,
        holonomic_unitary3,
    };
    let mut out = Vec::new();

    // pulse-area calibration round-trip
    let omega = crate::pulse::calibrate_2pi(settings.td01)?;
    let env = crate::pulse::Envelope::new(omega, 0.0, settings.td01)?;
    let area_dev = (crate::pulse::pulse_area(&env) - std::f64::consts::TAU).abs()
        / std::f64::consts::TAU;
    out.push(check(
        "calibration-round-trip",
        area_dev < 1e-10,
        format!("relative area deviation {area_dev:.2e}"),
    ));

    // gate algebra identities on an angle grid
    let mut worst_involution = 0.0f64;
    let mut worst_embed = 0.0f64;
    let mut worst_dark = 0.0f64;
    let mut worst_commutator = 0.0f64;
    let grid: Vec<(f64, f64)> = (0..5)
        .flat_map(|i| {
            (0..5).map(move |j| {
                (
                    std::f64::consts::PI * (i as f64 + 0.5) / 5.0,
                    std::f64::consts::TAU * j as f64 / 5.0,
                )
            })
        })
        .collect();
    for &(theta, phi) in &grid {
        let gate = GateSpec::new(theta, phi)?;
        let u2 = holonomic_unitary2(&gate);
        worst_involution = worst_involution
            .max((u2 * u2 - Operator2::identity()).frobenius_norm());
        let sp = ab_from_angles(&gate);
        let u3 = holonomic_unitary3(&sp);
        for (i3, j3, i2, j2) in [(0, 0, 0, 0), (0, 2, 0, 1), (2, 0, 1, 0), (2, 2, 1, 1)] {
            worst_embed = worst_embed.max((u3.element(i3, j3) - u2.element(i2, j2)).norm());
        }
        let db = dark_bright(&sp);
        let ud = u3.apply(&db.dark);
        let dev: f64 = (0..3)
            .map(|k| (ud.amplitude(k) - db.dark.amplitude(k)).norm_sqr())
            .sum();
        worst_dark = worst_dark.max(dev.sqrt());

        let n1 = gate.bloch_axis();
        let n2 = GateSpec::not().bloch_axis();
        let lhs = commutator(n1, n2);
        let rhs = axis_operator(cross(n1, n2));
        let mut diff = 0.0;
        for i in 0..2 {
            for j in 0..2 {
                diff +=
                    (lhs.element(i, j) - C64::new(0.0, 2.0) * rhs.element(i, j)).norm_sqr();
            }
        }
        worst_commutator = worst_commutator.max(diff.sqrt());
    }
    out.push(check(
        "gate-involution",
        worst_involution < 1e-14,
        format!("worst |U^2 - I| = {worst_involution:.2e}"),
    ));
    out.push(check(
        "gate-embedding",
        worst_embed < 1e-14,
        format!("worst block mismatch {worst_embed:.2e}"),
    ));
    out.push(check(
        "dark-state-fixed-point",
        worst_dark < 1e-14,
        format!("worst |U d - d| = {worst_dark:.2e}"),
    ));
    out.push(check(
        "noncommutativity-identity",
        worst_commutator < 1e-14,
        format!("worst deviation from 2i (n1 x n2).sigma = {worst_commutator:.2e}"),
    ));

    // propagated gate against the closed form, middle-level cyclicity and
    // parallel transport
    let gate = GateSpec::not();
    let drive = HolonomicDrive::for_gate(&gate, settings.td01, 2.0 * settings.td01)?;
    let grid_t = TimeGrid::new(0.0, 4.0 * settings.td01, settings.dt)?;
    let (u_total, rec) = propagate_unitary_trajectory(
        |t| drive.hamiltonian_at(t),
        &grid_t,
        &StateVector::basis(0),
        usize::MAX,
        false,
    )?;
    let gate_dev =
        (u_total - crate::holonomy::holonomic_unitary3(drive.pair())).frobenius_norm();
    out.push(check(
        "propagated-gate-matches-closed-form",
        gate_dev < 1e-6,
        format!("frobenius deviation {gate_dev:.2e}"),
    ));
    out.push(check(
        "cyclic-evolution-empties-middle-level",
        rec.final_populations()[1] < 1e-6,
        format!("final p1 = {:.2e}", rec.final_populations()[1]),
    ));
    let residual = crate::dynamics::parallel_transport_residual(
        |t| drive.hamiltonian_at(t),
        &grid_t,
    )?;
    out.push(check(
        "parallel-transport",
        residual < 1e-9 * drive.peak_rabi(),
        format!(
            "max |<psi0|H|psi2>| = {residual:.2e} rad/s ({:.2e} of the peak rate)",
            residual / drive.peak_rabi()
        ),
    ));

    // population-level phase independence at |a| = sin(pi/8)
    let mut small = *settings;
    small.points = 4;
    let sweep = run_phase_independence_check(&small, (std::f64::consts::PI / 8.0).sin())?;
    let reference = sweep.points[0].final_populations;
    let max_dev = sweep
        .points
        .iter()
        .flat_map(|p| {
            (0..3).map(move |k| (p.final_populations[k] - reference[k]).abs())
        })
        .fold(0.0, f64::max);
    out.push(check(
        "phase-independence-of-populations",
        max_dev < 1e-6,
        format!("max population change over phi01 = {max_dev:.2e}"),
    ));

    // open-system sanity on a short relaxation run
    let dec = DecoherenceParams::from_t1_t2(settings.device.t1, settings.device.t2);
    let rho0 = DensityMatrix::pure(&StateVector::basis(1));
    let open_grid = TimeGrid::new(0.0, 200.0e-9, settings.dt_open)?;
    let open = propagate_lindblad(
        |_| crate::qutrit::Operator3::zeros(),
        &dec,
        &rho0,
        &open_grid,
        100,
        true,
    )?;
    let trace_defect = open.max_population_defect();
    let min_ev = open
        .snapshots
        .iter()
        .map(|s| match s {
            Snapshot::Mixed(rho) => rho.min_eigenvalue(),
            Snapshot::Pure(_) => 0.0,
        })
        .fold(f64::INFINITY, f64::min);
    out.push(check(
        "lindblad-trace-preservation",
        trace_defect < 1e-8,
        format!("max trace defect {trace_defect:.2e}"),
    ));
    out.push(check(
        "lindblad-positivity",
        min_ev > -1e-8,
        format!("min eigenvalue {min_ev:.2e}"),
    ));

    // ideal two-photon gate properties
    let mut worst_unit = 0.0f64;
    let mut worst_period = 0.0f64;
    for k in 0..8 {
        let phi = k as f64 * 0.7;
        let u = ideal_pi2_gate(phi);
        worst_unit = worst_unit.max(u.unitarity_residual());
        worst_period =
            worst_period.max((u - ideal_pi2_gate(phi + std::f64::consts::PI)).frobenius_norm());
    }
    out.push(check(
        "ideal-pi2-unitary-and-pi-periodic",
        worst_unit < 1e-14 && worst_period < 1e-12,
        format!("unitarity {worst_unit:.2e}, periodicity {worst_period:.2e}"),
    ));

    Ok(out)
}

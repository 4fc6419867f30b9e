//! CLI for the holonomic-gate simulator.
//!
//! Exit codes: 0 success, 1 generic/IO error, 2 usage error (from clap),
//! 3 unknown scenario, 4 malformed config, 5 calibration failure,
//! 6 invariant breach.

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use holoq::config::RunConfig;
use holoq::error::Error;
use holoq::holonomy::{self, GateSpec};
use holoq::pulse;
use holoq::report;
use holoq::scenario::{self, ScenarioId, ScenarioSettings, TwoPhotonModel};
use holoq::twophoton::{self, TwoPhotonTarget};

#[derive(Parser)]
#[command(
    name = "holoq",
    version,
    about = "Pulse-level simulator of holonomic gates on a three-level transmon"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Clone)]
struct CommonOpts {
    /// Path to a TOML run configuration; defaults are built in.
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    /// Output directory for CSVs, manifests and the calibration cache.
    #[arg(long, default_value = "out", global = true)]
    out: PathBuf,
    /// Closed-system integrator step in picoseconds (overrides the config).
    #[arg(long, global = true)]
    dt_ps: Option<f64>,
    /// Grid points per sweep axis (overrides the config).
    #[arg(long, global = true)]
    points: Option<usize>,
    /// Reserved for future stochastic models; echoed into the manifest.
    #[arg(long, default_value_t = 0, global = true)]
    seed: u64,
}

#[derive(Subcommand)]
enum Command {
    /// Print the 2*pi pulse-area amplitude for a width, and optionally run a
    /// two-photon amplitude calibration against the ladder model.
    Calibrate {
        #[command(flatten)]
        common: CommonOpts,
        /// Envelope width constant in nanoseconds.
        #[arg(long, default_value_t = 6.5)]
        td_ns: f64,
        /// Also calibrate the two-photon pulse: `pi` or `pi2`.
        #[arg(long)]
        two_photon: Option<String>,
    },
    /// Print the holonomic gate unitaries for (theta, phi) and check the
    /// gate-algebra invariants.
    Gate {
        #[command(flatten)]
        common: CommonOpts,
        /// Gate angle theta in radians, in [0, pi].
        #[arg(long, conflicts_with = "name")]
        theta: Option<f64>,
        /// Gate angle phi in radians.
        #[arg(long, default_value_t = 0.0)]
        phi: f64,
        /// Named gate: `not` (theta = pi/2) or `hadamard` (theta = pi/4).
        #[arg(long)]
        name: Option<String>,
    },
    /// Run a sweep scenario: fig4 | fig5 | fig6 | fig7 | rabi-ramsey.
    Sweep {
        #[command(flatten)]
        common: CommonOpts,
        /// Scenario name.
        scenario: String,
        /// Decoherence: on | off.
        #[arg(long, default_value = "off")]
        decoherence: String,
        /// Two-photon model: ideal | ladder.
        #[arg(long, default_value = "ideal")]
        two_photon: String,
    },
    /// Run the full invariant suite and report one pass/fail line each.
    Check {
        #[command(flatten)]
        common: CommonOpts,
    },
}

fn exit_code_for(err: &Error) -> u8 {
    match err {
        Error::UnknownScenario(_) => 3,
        Error::Config(_) => 4,
        Error::CalibrationFailed { .. } => 5,
        Error::NumericalDrift { .. } => 6,
        _ => 1,
    }
}

fn load_config(common: &CommonOpts) -> Result<RunConfig, Error> {
    match &common.config {
        Some(path) => RunConfig::load(path),
        None => Ok(RunConfig::default()),
    }
}

fn resolve_settings(
    config: &RunConfig,
    common: &CommonOpts,
    model: TwoPhotonModel,
    decoherence: bool,
) -> Result<ScenarioSettings, Error> {
    let mut settings = config.settings(model, decoherence)?;
    if let Some(dt_ps) = common.dt_ps {
        if dt_ps <= 0.0 {
            return Err(Error::Config("--dt-ps must be positive".into()));
        }
        settings.dt = dt_ps * 1e-12;
    }
    if let Some(points) = common.points {
        if points < 2 {
            return Err(Error::Config("--points must be at least 2".into()));
        }
        settings.points = points;
    }
    Ok(settings)
}

fn parse_decoherence(s: &str) -> Result<bool, Error> {
    match s {
        "on" => Ok(true),
        "off" => Ok(false),
        other => Err(Error::Config(format!(
            "--decoherence expects on|off, got `{other}`"
        ))),
    }
}

fn fmt_c(z: num_complex::Complex64) -> String {
    // normalize signed zeros so output is stable to read
    let re = if z.re == 0.0 { 0.0 } else { z.re };
    let im = if z.im == 0.0 { 0.0 } else { z.im };
    format!("{re:+.6}{im:+.6}i")
}

fn run_calibrate(common: &CommonOpts, td_ns: f64, two_photon: &Option<String>) -> Result<(), Error> {
    let config = load_config(common)?;
    let td = td_ns * 1e-9;
    let omega = pulse::calibrate_2pi(td)?;
    println!(
        "2pi-area amplitude for td = {td_ns} ns: {:.6} rad/ns ({:.3} MHz Rabi)",
        omega * 1e-9,
        omega / std::f64::consts::TAU / 1e6
    );

    if let Some(target) = two_photon {
        let target = match target.as_str() {
            "pi" => TwoPhotonTarget::Pi,
            "pi2" | "pi/2" => TwoPhotonTarget::PiOver2,
            other => {
                return Err(Error::Config(format!(
                    "--two-photon expects pi|pi2, got `{other}`"
                )))
            }
        };
        let settings = resolve_settings(&config, common, TwoPhotonModel::Ladder, false)?;
        let template = holoq::twophoton::LadderDriveConfig::new(
            pulse::Envelope::new(0.0, 2.0 * settings.td02, settings.td02)?,
            0.0,
            settings.device.two_photon_delta(),
            2.0_f64.sqrt(),
            0.0,
        )?;
        let dt = settings.dt.max(2e-12);
        let cache_path = common.out.join("calibration_cache.toml");
        let cal = twophoton::cache::lookup_or_compute(&cache_path, target, &template, dt)?;
        println!(
            "two-photon calibration: omega0 = {:.6} rad/ns, carrier detuning = {:+.4} MHz",
            cal.omega0 * 1e-9,
            cal.two_photon_detuning / std::f64::consts::TAU / 1e6
        );
        println!(
            "achieved p2 = {:.5}, residual p1 = {:.2e}, max p1 = {:.4}",
            cal.achieved_p2, cal.residual_p1, cal.max_p1
        );
        let ratio = cal.omega0 / settings.device.two_photon_delta();
        if ratio > 0.5 {
            println!(
                "note: omega0/delta = {ratio:.2} exceeds 0.5; levels above |2> (not modeled) \
                 would matter at this strength"
            );
        }
        println!("cached in {}", cache_path.display());
    }
    Ok(())
}

fn run_gate(theta: Option<f64>, phi: f64, name: &Option<String>) -> Result<(), Error> {
    let gate = match (theta, name) {
        (Some(theta), None) => GateSpec::new(theta, phi)?,
        (None, Some(name)) => match name.to_ascii_lowercase().as_str() {
            "not" => GateSpec::new(std::f64::consts::FRAC_PI_2, phi)?,
            "hadamard" => GateSpec::hadamard(phi),
            other => {
                return Err(Error::Config(format!(
                    "unknown gate name `{other}` (expected not|hadamard)"
                )))
            }
        },
        _ => {
            return Err(Error::Config(
                "give exactly one of --theta or --name".into(),
            ))
        }
    };
    let (theta, phi) = (gate.theta(), gate.phi());
    let u2 = holonomy::holonomic_unitary2(&gate);
    let sp = holonomy::ab_from_angles(&gate);
    let u3 = holonomy::holonomic_unitary3(&sp);

    println!("gate angles: theta = {theta} rad, phi = {phi} rad");
    println!(
        "scalings: a = {}, b = {}",
        fmt_c(sp.a()),
        fmt_c(sp.b())
    );
    println!("U(theta, phi) on (|0>, |2>):");
    for i in 0..2 {
        println!(
            "  [{}  {}]",
            fmt_c(u2.element(i, 0)),
            fmt_c(u2.element(i, 1))
        );
    }
    println!("full three-level unitary:");
    for i in 0..3 {
        println!(
            "  [{}  {}  {}]",
            fmt_c(u3.element(i, 0)),
            fmt_c(u3.element(i, 1)),
            fmt_c(u3.element(i, 2))
        );
    }

    let involution = (u2 * u2 - holoq::Operator2::identity()).frobenius_norm();
    let unitarity = u3.unitarity_residual();
    if involution < 1e-14 && unitarity < 1e-12 {
        println!("involution OK (|U^2 - I| = {involution:.2e}, |U' U - I| = {unitarity:.2e})");
        Ok(())
    } else {
        println!("involution BREACH: |U^2 - I| = {involution:.2e}");
        Err(Error::NumericalDrift {
            reason: "gate involution failed",
            value: involution,
        })
    }
}

fn run_sweep(
    common: &CommonOpts,
    scenario: &str,
    decoherence: &str,
    two_photon: &str,
) -> Result<(), Error> {
    let id: ScenarioId = scenario.parse()?;
    let model: TwoPhotonModel = two_photon.parse()?;
    let decoherence = parse_decoherence(decoherence)?;
    let config = load_config(common)?;
    let settings = resolve_settings(&config, common, model, decoherence)?;
    let model_name = match model {
        TwoPhotonModel::Ideal => "ideal",
        TwoPhotonModel::Ladder => "ladder",
    };

    let sweeps = match id {
        ScenarioId::Fig4 => vec![scenario::run_population_sweep(&settings)?],
        ScenarioId::Fig5 => vec![scenario::run_hadamard_phase_sweep(&settings)?],
        ScenarioId::Fig6 => vec![scenario::run_not_on_prepared(&settings)?],
        ScenarioId::Fig7 => vec![scenario::run_hadamard_on_superposition(&settings)?],
        ScenarioId::RabiRamsey => {
            let (rabi, ramsey) = scenario::run_two_photon_rabi_ramsey(&settings)?;
            vec![rabi, ramsey]
        }
    };

    for sweep in &sweeps {
        let defect = sweep.max_population_defect();
        if !decoherence && defect > 1e-8 {
            return Err(Error::NumericalDrift {
                reason: "population sum drifted in a closed-system sweep",
                value: defect,
            });
        }
        let files = report::write_sweep_bundle(
            &common.out,
            sweep,
            &config,
            model_name,
            decoherence,
            common.seed,
        )?;
        println!(
            "{}: {} points -> {} (+ {} trajectory files)",
            sweep.scenario,
            sweep.points.len(),
            files[0].display(),
            sweep.points.len()
        );
        if let Some(fit) = &sweep.fit {
            println!(
                "  fit: p{} ~ {:.6} + {:.6} sin({:.0} x {:+.6}), rms residual {:.2e}",
                fit.observable,
                fit.fit.offset,
                fit.fit.amplitude,
                fit.freq,
                fit.fit.phase,
                fit.fit.rms_residual
            );
        }
    }

    if id == ScenarioId::RabiRamsey {
        let ramsey = &sweeps[1];
        for (applied, measured) in scenario::ramsey_fringe_frequencies(ramsey) {
            println!(
                "  fringe: applied {:.3} MHz -> measured {:.3} MHz",
                applied / 1e6,
                measured / 1e6
            );
        }
    }
    Ok(())
}

fn run_check(common: &CommonOpts) -> Result<(), Error> {
    let config = load_config(common)?;
    let settings = resolve_settings(&config, common, TwoPhotonModel::Ideal, false)?;
    let checks = scenario::invariant_suite(&settings)?;
    let mut failed = 0;
    for c in &checks {
        let tag = if c.passed { "PASS" } else { "FAIL" };
        println!("{tag} {} ({})", c.name, c.detail);
        if !c.passed {
            failed += 1;
        }
    }
    if failed == 0 {
        println!("all {} invariants hold", checks.len());
        Ok(())
    } else {
        Err(Error::NumericalDrift {
            reason: "invariant suite failed",
            value: failed as f64,
        })
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match &cli.command {
        Command::Calibrate {
            common,
            td_ns,
            two_photon,
        } => run_calibrate(common, *td_ns, two_photon),
        Command::Gate {
            theta, phi, name, ..
        } => run_gate(*theta, *phi, name),
        Command::Sweep {
            common,
            scenario,
            decoherence,
            two_photon,
        } => run_sweep(common, scenario, decoherence, two_photon),
        Command::Check { common } => run_check(common),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(err) => {
            eprintln!("error: {err}");
            ExitCode::from(exit_code_for(&err))
        }
    }
}

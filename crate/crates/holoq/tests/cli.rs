//! End-to-end checks of the `holoq` binary: exit codes, file outputs and
//! byte-level determinism.

use std::path::{Path, PathBuf};
use std::process::{Command, Output};

fn holoq() -> Command {
    Command::new(env!("CARGO_BIN_EXE_holoq"))
}

fn tmp_dir(tag: &str) -> PathBuf {
    let dir = std::env::temp_dir().join(format!("holoq_cli_{tag}_{}", std::process::id()));
    std::fs::remove_dir_all(&dir).ok();
    std::fs::create_dir_all(&dir).unwrap();
    dir
}

fn run(args: &[&str]) -> Output {
    holoq().args(args).output().expect("binary runs")
}

#[test]
fn calibrate_prints_the_2pi_amplitude() {
    let out = run(&["calibrate", "--td-ns", "6.5"]);
    assert!(out.status.success());
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.contains("0.448400 rad/ns"), "stdout: {text}");
}

#[test]
fn gate_prints_sigma_x_block_and_involution() {
    let out = run(&["gate", "--theta", "1.5707963267948966", "--phi", "0"]);
    assert!(out.status.success());
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.contains("involution OK"), "stdout: {text}");
    // the NOT gate block has zero diagonal and unit off-diagonal
    assert!(text.contains("[+0.000000+0.000000i  +1.000000+0.000000i]"), "stdout: {text}");
}

#[test]
fn gate_rejects_out_of_range_theta() {
    let out = run(&["gate", "--theta", "4.0"]);
    assert!(!out.status.success());
    assert_eq!(out.status.code(), Some(1));
}

#[test]
fn gate_accepts_named_gates() {
    let out = run(&["gate", "--name", "hadamard"]);
    assert!(out.status.success());
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.contains("theta = 0.7853981633974483"), "stdout: {text}");
    assert!(text.contains("involution OK"));

    let named = run(&["gate", "--name", "not"]);
    let explicit = run(&["gate", "--theta", "1.5707963267948966"]);
    assert_eq!(named.stdout, explicit.stdout);

    let bad = run(&["gate", "--name", "toffoli"]);
    assert_eq!(bad.status.code(), Some(4));
}

#[test]
fn sweep_fig4_writes_csv_trajectories_and_manifest() {
    let dir = tmp_dir("fig4");
    let out = run(&[
        "sweep",
        "fig4",
        "--points",
        "21",
        "--decoherence",
        "off",
        "--dt-ps",
        "8",
        "--out",
        dir.to_str().unwrap(),
    ]);
    assert!(out.status.success(), "stderr: {}", String::from_utf8_lossy(&out.stderr));

    let csv = std::fs::read_to_string(dir.join("fig4.csv")).unwrap();
    let mut lines = csv.lines();
    assert_eq!(
        lines.next().unwrap(),
        "a_scale,p0,p1,p2,p2_model,p2_defect,fit_residual"
    );
    assert_eq!(lines.count(), 21);
    for k in 0..21 {
        assert!(
            dir.join(format!("fig4_traj_{k:03}.csv")).exists(),
            "missing trajectory file {k}"
        );
    }
    let manifest = std::fs::read_to_string(dir.join("fig4_manifest.toml")).unwrap();
    assert!(manifest.contains("scenario = \"fig4\""));
    assert!(manifest.contains("points = 21"));
    assert!(manifest.contains("[config.device]"));
    std::fs::remove_dir_all(&dir).ok();
}

#[test]
fn sweep_outputs_are_bitwise_deterministic() {
    let dir_a = tmp_dir("det_a");
    let dir_b = tmp_dir("det_b");
    for dir in [&dir_a, &dir_b] {
        let out = run(&[
            "sweep",
            "fig7",
            "--points",
            "8",
            "--dt-ps",
            "16",
            "--out",
            dir.to_str().unwrap(),
        ]);
        assert!(out.status.success());
    }
    let a = std::fs::read(dir_a.join("fig7.csv")).unwrap();
    let b = std::fs::read(dir_b.join("fig7.csv")).unwrap();
    assert_eq!(a, b, "identical configs must produce identical bytes");
    std::fs::remove_dir_all(&dir_a).ok();
    std::fs::remove_dir_all(&dir_b).ok();
}

#[test]
fn unknown_scenario_has_its_own_exit_code() {
    let out = run(&["sweep", "fig9"]);
    assert_eq!(out.status.code(), Some(3));
    let err = String::from_utf8(out.stderr).unwrap();
    assert!(err.contains("unknown scenario"), "stderr: {err}");
}

#[test]
fn malformed_config_has_its_own_exit_code() {
    let dir = tmp_dir("badcfg");
    let path = dir.join("bad.toml");
    std::fs::write(&path, "[device]\nf01 = 7.5\n").unwrap();
    let out = run(&["sweep", "fig4", "--config", path.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(4));
    std::fs::remove_dir_all(&dir).ok();
}

#[test]
fn config_file_overrides_defaults() {
    let dir = tmp_dir("cfg");
    let path = dir.join("run.toml");
    std::fs::write(&path, "[sweep]\npoints = 5\n\n[integrator]\ndt_ps = 16.0\n").unwrap();
    let out = run(&[
        "sweep",
        "fig4",
        "--config",
        path.to_str().unwrap(),
        "--out",
        dir.to_str().unwrap(),
    ]);
    assert!(out.status.success());
    let csv = std::fs::read_to_string(dir.join("fig4.csv")).unwrap();
    assert_eq!(csv.lines().count(), 6); // header + 5 points
    std::fs::remove_dir_all(&dir).ok();
}

#[test]
fn check_command_reports_all_invariants() {
    let out = run(&["check", "--dt-ps", "4"]);
    assert!(out.status.success(), "stderr: {}", String::from_utf8_lossy(&out.stderr));
    let text = String::from_utf8(out.stdout).unwrap();
    let passes = text.lines().filter(|l| l.starts_with("PASS ")).count();
    assert!(passes >= 10, "expected at least 10 PASS lines, got {passes}:\n{text}");
    assert!(!text.contains("FAIL "), "unexpected failure:\n{text}");
}

#[test]
fn calibrate_two_photon_populates_the_cache() {
    let dir = tmp_dir("cal");
    let args = [
        "calibrate",
        "--td-ns",
        "9.0",
        "--two-photon",
        "pi2",
        "--dt-ps",
        "8",
        "--out",
        dir.to_str().unwrap(),
    ];
    let out = run(&args);
    assert!(out.status.success(), "stderr: {}", String::from_utf8_lossy(&out.stderr));
    let cache = std::fs::read_to_string(dir.join("calibration_cache.toml")).unwrap();
    assert!(cache.contains("target = \"pi2\""), "cache: {cache}");

    // second run hits the cache and reports identical numbers
    let again = run(&args);
    assert!(again.status.success());
    assert_eq!(out.stdout, again.stdout);
    std::fs::remove_dir_all(&dir).ok();
}

fn path_exists(p: &Path) -> bool {
    p.exists()
}

#[test]
fn rabi_ramsey_writes_both_sweeps() {
    let dir = tmp_dir("rr");
    let out = run(&[
        "sweep",
        "rabi-ramsey",
        "--points",
        "5",
        "--dt-ps",
        "16",
        "--out",
        dir.to_str().unwrap(),
    ]);
    assert!(out.status.success(), "stderr: {}", String::from_utf8_lossy(&out.stderr));
    assert!(path_exists(&dir.join("rabi.csv")));
    assert!(path_exists(&dir.join("ramsey.csv")));
    assert!(path_exists(&dir.join("rabi_manifest.toml")));
    assert!(path_exists(&dir.join("ramsey_manifest.toml")));
    let ramsey = std::fs::read_to_string(dir.join("ramsey.csv")).unwrap();
    assert!(ramsey.starts_with("delay_ns,p0,p1,p2,detuning_mhz,max_p1,fit_residual"));
    // 5 detunings x 5 delays
    assert_eq!(ramsey.lines().count(), 26);
    std::fs::remove_dir_all(&dir).ok();
}

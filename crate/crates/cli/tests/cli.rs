//! End-to-end tests of the `onf` binary: artifact layout, reproducibility,
//! unit-grammar rejection, and the exit-code contract.

use std::path::Path;
use std::process::{Command, Output};

fn onf(args: &[&str], dir: &Path) -> Output {
    Command::new(env!("CARGO_BIN_EXE_onf"))
        .args(args)
        .current_dir(dir)
        .output()
        .expect("binary runs")
}

fn write(dir: &Path, name: &str, content: &str) {
    std::fs::write(dir.join(name), content).unwrap();
}

#[test]
fn modes_run_is_reproducible() {
    let tmp = tempfile::tempdir().unwrap();
    write(
        tmp.path(),
        "cfg.json",
        r#"{"command": "modes", "radius": "180 nm", "n_core": 1.45367,
            "n_clad": 1.0, "wavelength": "780 nm", "l_max": 1}"#,
    );
    let out1 = onf(&["--config", "cfg.json", "--out", "a"], tmp.path());
    assert!(out1.status.success(), "{}", String::from_utf8_lossy(&out1.stderr));
    let out2 = onf(&["--config", "cfg.json", "--out", "b"], tmp.path());
    assert!(out2.status.success());

    let csv_a = std::fs::read_to_string(tmp.path().join("a/modes.csv")).unwrap();
    let csv_b = std::fs::read_to_string(tmp.path().join("b/modes.csv")).unwrap();
    assert_eq!(csv_a, csv_b, "re-running must byte-reproduce artifacts");
    // header row names every column with its unit
    let header = csv_a.lines().next().unwrap();
    assert!(header.contains("beta [rad/m]"), "{header}");
    // a V = 1.53 fiber guides exactly the two HE11 rotations
    assert_eq!(csv_a.lines().count(), 3);

    let man_a = std::fs::read_to_string(tmp.path().join("a/manifest.json")).unwrap();
    let man_b = std::fs::read_to_string(tmp.path().join("b/manifest.json")).unwrap();
    let digest = |m: &str| {
        let v: serde_json::Value = serde_json::from_str(m).unwrap();
        v["files"][0]["sha256"].as_str().unwrap().to_string()
    };
    assert_eq!(digest(&man_a), digest(&man_b));
}

#[test]
fn malformed_unit_is_config_error_and_writes_nothing() {
    let tmp = tempfile::tempdir().unwrap();
    write(
        tmp.path(),
        "cfg.json",
        r#"{"command": "modes", "radius": "180 parsec", "n_core": 1.45367,
            "n_clad": 1.0, "wavelength": "780 nm"}"#,
    );
    let out = onf(&["--config", "cfg.json", "--out", "out"], tmp.path());
    assert_eq!(out.status.code(), Some(2));
    assert!(!tmp.path().join("out").exists(), "no files on config error");
    let msg = String::from_utf8_lossy(&out.stderr);
    assert!(msg.contains("configuration error"), "{msg}");
}

#[test]
fn unknown_key_is_rejected_by_name() {
    let tmp = tempfile::tempdir().unwrap();
    write(
        tmp.path(),
        "cfg.json",
        r#"{"command": "modes", "radius": "180 nm", "n_core": 1.45367,
            "n_clad": 1.0, "wavelength": "780 nm", "wavelenght": "780 nm"}"#,
    );
    let out = onf(&["--config", "cfg.json", "--out", "out"], tmp.path());
    assert_eq!(out.status.code(), Some(2));
    let msg = String::from_utf8_lossy(&out.stderr);
    assert!(msg.contains("wavelenght"), "offending key must be named: {msg}");
    assert!(!tmp.path().join("out").exists());
}

#[test]
fn unbound_trap_is_domain_error() {
    let tmp = tempfile::tempdir().unwrap();
    // zero blue power: both remaining terms attract, no bound minimum
    write(
        tmp.path(),
        "cfg.json",
        r#"{"command": "trap", "radius": "250 nm", "n_core": 1.45367, "n_clad": 1.0,
            "wavelength": "780 nm", "transition_wavelength": "780 nm",
            "gamma0": 38116537.0, "atom_mass": 1.44316e-25, "c3": 5.6e-49,
            "red_wavelength": "1064 nm", "red_power": "3 mW",
            "blue_wavelength": "750 nm", "blue_power": "0 W",
            "grid_nr": 48, "grid_nphi": 12, "grid_nz": 8}"#,
    );
    let out = onf(&["--config", "cfg.json", "--out", "out"], tmp.path());
    assert_eq!(out.status.code(), Some(3), "{}", String::from_utf8_lossy(&out.stderr));
    let msg = String::from_utf8_lossy(&out.stderr);
    assert!(msg.contains("domain error"), "{msg}");
}

#[test]
fn radius_extract_round_trip_through_files() {
    let tmp = tempfile::tempdir().unwrap();
    // forward model: beat frequency of HE11:TM01 at a known 390-nm radius
    let template = onf_core::FiberSpec::new(390e-9, 1.45367, 1.0, 795e-9).unwrap();
    let he11 =
        onf_core::ModeId::new(onf_core::ModeFamily::HE, 1, 1, onf_core::Rotation::Plus).unwrap();
    let tm01 =
        onf_core::ModeId::new(onf_core::ModeFamily::TM, 0, 1, onf_core::Rotation::Plus).unwrap();
    let freq = onf_core::spectra::beat_frequency(&template, (&he11, &tm01)).unwrap();
    write(
        tmp.path(),
        "cfg.json",
        &format!(
            r#"{{"command": "radius-extract", "n_core": 1.45367, "n_clad": 1.0,
                "wavelength": "795 nm", "pair": ["HE11", "TM01"],
                "measured_frequency": {freq},
                "search_min": "340 nm", "search_max": "500 nm"}}"#
        ),
    );
    let out = onf(&["--config", "cfg.json", "--out", "out"], tmp.path());
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let radius_json = std::fs::read_to_string(tmp.path().join("out/radius.json")).unwrap();
    let v: serde_json::Value = serde_json::from_str(&radius_json).unwrap();
    let recovered = v["radius [m]"].as_f64().unwrap();
    assert!(
        (recovered - 390e-9).abs() < 1e-12,
        "recovered {recovered} vs 390 nm"
    );
}

#[test]
fn spectrogram_from_signal_file() {
    let tmp = tempfile::tempdir().unwrap();
    // synthesize a clean two-tone signal file
    let ds = 2e-6;
    let mut csv = String::from("elongation [m],value\n");
    for i in 0..24000 {
        let s = i as f64 * ds;
        let v = (2.0 * std::f64::consts::PI * 3.0e4 * s).sin()
            + 0.7 * (2.0 * std::f64::consts::PI * 4.5e4 * s).sin();
        csv.push_str(&format!("{s:e},{v:e}\n"));
    }
    write(tmp.path(), "signal.csv", &csv);
    write(
        tmp.path(),
        "cfg.json",
        r#"{"command": "spectrogram", "signal_file": "signal.csv",
            "window": "2 mm", "hop": "0.5 mm", "ridge_count": 2}"#,
    );
    let out = onf(&["--config", "cfg.json", "--out", "out"], tmp.path());
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let ridges = std::fs::read_to_string(tmp.path().join("out/ridges.csv")).unwrap();
    // two ridges tracked (ids 0 and 1)
    assert!(ridges.lines().any(|l| l.starts_with("0,")));
    assert!(ridges.lines().any(|l| l.starts_with("1,")));
    let spec_csv = std::fs::read_to_string(tmp.path().join("out/spectrogram.csv")).unwrap();
    assert!(spec_csv.starts_with("center [m],frequency [cycles/m],psd"));
}

#[test]
fn pull_plan_then_simulate_round_trip() {
    let tmp = tempfile::tempdir().unwrap();
    write(
        tmp.path(),
        "plan.json",
        r#"{"command": "pull-plan", "initial_radius": "20 um", "angle": "3 mrad",
            "handoff_radius": "6 um", "waist_radius": "400 nm", "waist_length": "3 mm",
            "hot_zone": "1 mm"}"#,
    );
    let out = onf(&["--config", "plan.json", "--out", "out"], tmp.path());
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    write(
        tmp.path(),
        "sim.json",
        r#"{"command": "simulate-pull", "plan_file": "out/pull_plan.json"}"#,
    );
    let out = onf(&["--config", "sim.json", "--out", "out2"], tmp.path());
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    // simulated waist radius comes back within 1% of the target
    let profile = std::fs::read_to_string(tmp.path().join("out2/simulated_profile.csv")).unwrap();
    let center_r: f64 = profile
        .lines()
        .skip(1)
        .map(|l| {
            let mut p = l.split(',');
            let z: f64 = p.next().unwrap().parse().unwrap();
            let r: f64 = p.next().unwrap().parse().unwrap();
            (z.abs(), r)
        })
        .min_by(|a, b| a.0.partial_cmp(&b.0).unwrap())
        .map(|(_, r)| r)
        .unwrap();
    assert!((center_r - 400e-9).abs() < 4e-9, "waist {center_r}");
}

#[test]
fn json_format_switch() {
    let tmp = tempfile::tempdir().unwrap();
    write(
        tmp.path(),
        "cfg.json",
        r#"{"command": "modes", "radius": "180 nm", "n_core": 1.45367,
            "n_clad": 1.0, "wavelength": "780 nm", "l_max": 1}"#,
    );
    let out = onf(
        &["--config", "cfg.json", "--out", "out", "--format", "json"],
        tmp.path(),
    );
    assert!(out.status.success());
    let text = std::fs::read_to_string(tmp.path().join("out/modes.json")).unwrap();
    let v: serde_json::Value = serde_json::from_str(&text).unwrap();
    assert_eq!(v.as_array().unwrap().len(), 2);
    assert!((v[0]["n_eff"].as_f64().unwrap() - 1.0646123643199878).abs() < 1e-9);
}

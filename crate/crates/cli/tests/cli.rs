use std::path::Path;
use std::process::{Command, Output};

use serde_json::Value;
use tempfile::TempDir;

fn vpl(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_vpl"))
        .args(args)
        .env("VPL_THREADS", "2")
        .output()
        .expect("binary runs")
}

fn code(o: &Output) -> i32 {
    o.status.code().expect("exited normally")
}

fn write(dir: &TempDir, name: &str, text: &str) -> String {
    let p = dir.path().join(name);
    std::fs::write(&p, text).unwrap();
    p.to_str().unwrap().to_owned()
}

fn read_json(p: &Path) -> Value {
    serde_json::from_str(&std::fs::read_to_string(p).unwrap()).unwrap()
}

/// Oracle small enough for a test: 40 modes inside the open window.
const FAST: &str = r#"{"grid_points": 401, "oracle": {"mode_count": 40, "horizon": 1.9}}"#;

#[test]
fn even_grid_is_a_validation_error() {
    let dir = TempDir::new().unwrap();
    let cfg = write(&dir, "c.json", r#"{"grid_points": 100}"#);
    let o = vpl(&["spectrum", "--config", &cfg]);
    assert_eq!(code(&o), 1);
    assert!(String::from_utf8_lossy(&o.stderr).contains("grid_points"));
}

#[test]
fn design_with_zero_area_is_a_validation_error() {
    let dir = TempDir::new().unwrap();
    let cfg = write(&dir, "c.json", r#"{"area": 0.0}"#);
    assert_eq!(code(&vpl(&["design", "--config", &cfg])), 1);
}

#[test]
fn bad_usage_and_missing_config_exit_one() {
    assert_eq!(code(&vpl(&["frobnicate"])), 1);
    assert_eq!(
        code(&vpl(&["spectrum", "--config", "/no/such/file.json"])),
        1
    );
    assert_eq!(code(&vpl(&["sweep"])), 1);
    assert_eq!(code(&vpl(&["spectrum", "--nu", "-1"])), 1);
}

#[test]
fn design_reports_optimal_energy() {
    let o = vpl(&["design", "--json"]);
    assert_eq!(code(&o), 0);
    let v: Value = serde_json::from_slice(&o.stdout).unwrap();
    let e = v["summary"]["design"]["energy_opt"].as_f64().unwrap();
    assert!((e / 2.381e-6 - 1.0).abs() < 1e-3, "{e}");
    let nu = v["summary"]["design"]["nu_at_opt"].as_f64().unwrap();
    assert!((nu / std::f64::consts::PI - 1.0).abs() < 1e-12);
}

#[test]
fn doubling_length_halves_optimal_intensity() {
    let dir = TempDir::new().unwrap();
    let cfg = write(&dir, "c.json", r#"{"length": 200.0}"#);
    let a: Value = serde_json::from_slice(&vpl(&["design", "--json"]).stdout).unwrap();
    let b: Value =
        serde_json::from_slice(&vpl(&["design", "--json", "--config", &cfg]).stdout).unwrap();
    let (da, db) = (&a["summary"]["design"], &b["summary"]["design"]);
    let ratio = db["intensity_opt"].as_f64().unwrap() / da["intensity_opt"].as_f64().unwrap();
    assert!((ratio - 0.5).abs() < 1e-12);
    assert_eq!(da["energy_opt"], db["energy_opt"]);
}

#[test]
fn default_spectrum_is_unenhanced() {
    let o = vpl(&["spectrum"]);
    assert_eq!(code(&o), 0);
    let text = String::from_utf8(o.stdout).unwrap();
    let mut lines = text.lines();
    assert_eq!(lines.next(), Some("x,rate_weak,rate_full,enhancement"));
    let mut n = 0;
    for line in lines {
        let e: f64 = line.rsplit(',').next().unwrap().parse().unwrap();
        assert!((e - 1.0).abs() < 1e-3, "{line}");
        n += 1;
    }
    assert_eq!(n, 2001);
    assert!(String::from_utf8_lossy(&o.stderr).contains("nu = 4.398"));
}

#[test]
fn resonant_drive_saturates_at_band_centre() {
    let o = vpl(&["resonance", "--json"]);
    let v: Value = serde_json::from_slice(&o.stdout).unwrap();
    let nu0 = v["summary"]["nu0"].as_f64().unwrap();
    let o = vpl(&["spectrum", "--json", "--nu", &format!("{nu0:e}")]);
    assert_eq!(code(&o), 0);
    let v: Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(v["summary"]["emission"]["saturated"], true);
    let rows = v["rows"].as_array().unwrap();
    let centre = &rows[rows.len() / 2];
    assert_eq!(centre["x"], 1.0);
    assert_eq!(centre["enhancement"].as_f64().unwrap(), 1e24);
    assert!(String::from_utf8_lossy(&o.stderr).contains("resonance saturation"));
}

#[test]
fn identical_runs_write_identical_files() {
    let dir = TempDir::new().unwrap();
    for (cmd, extra) in [
        ("spectrum", vec!["--nu", "1.5"]),
        (
            "sweep",
            vec!["--axis", "length=10:1000:5", "--axis", "nu=0.5:3:4"],
        ),
    ] {
        for fmt in ["csv", "json"] {
            let paths: Vec<String> = ["a", "b"]
                .iter()
                .map(|n| dir.path().join(format!("{cmd}-{n}.{fmt}")))
                .map(|p| p.to_str().unwrap().to_owned())
                .collect();
            for p in &paths {
                let mut args = vec![cmd, "--format", fmt, "--output", p];
                args.extend(&extra);
                assert_eq!(code(&vpl(&args)), 0);
            }
            let a = std::fs::read(&paths[0]).unwrap();
            assert!(!a.is_empty());
            assert_eq!(a, std::fs::read(&paths[1]).unwrap(), "{cmd} {fmt}");
        }
    }
}

#[test]
fn json_output_reproduces_the_run() {
    let dir = TempDir::new().unwrap();
    let first = dir.path().join("first.json");
    let second = dir.path().join("second.json");
    let o = vpl(&[
        "spectrum",
        "--json",
        "--kernel",
        "paper",
        "--nu",
        "2.1",
        "--output",
        first.to_str().unwrap(),
    ]);
    assert_eq!(code(&o), 0);
    let o = vpl(&[
        "spectrum",
        "--config",
        first.to_str().unwrap(),
        "--output",
        second.to_str().unwrap(),
    ]);
    assert_eq!(code(&o), 0);
    let (a, b) = (read_json(&first), read_json(&second));
    assert_eq!(a["config"]["kernel_variant"], "paper");
    assert_eq!(a["config"]["nu"], 2.1);
    assert_eq!(a, b);
}

#[test]
fn sweep_reports_argmax() {
    let o = vpl(&["sweep", "--axis", "nu=0.5:3.5:7"]);
    assert_eq!(code(&o), 0);
    let stdout = String::from_utf8(o.stdout).unwrap();
    assert!(stdout.starts_with("nu,n_photons,yield,peak,fwhm,saturated\n"));
    assert_eq!(stdout.lines().count(), 8);
    assert!(String::from_utf8_lossy(&o.stderr).contains("nu = 3.000000e0"));
}

#[test]
fn verify_passes_with_a_small_oracle() {
    let dir = TempDir::new().unwrap();
    let cfg = write(&dir, "fast.json", FAST);
    let o = vpl(&["verify", "--config", &cfg]);
    let stdout = String::from_utf8_lossy(&o.stdout);
    assert_eq!(code(&o), 0, "{stdout}");
    assert!(stdout.contains("published vs computed"));
    assert!(!stdout.contains("[FAIL]"));
}

#[test]
fn verify_with_paper_kernel_fails_resonance() {
    let dir = TempDir::new().unwrap();
    let cfg = write(&dir, "fast.json", FAST);
    let o = vpl(&["verify", "--config", &cfg, "--kernel", "paper"]);
    assert_eq!(code(&o), 3);
    let stdout = String::from_utf8_lossy(&o.stdout);
    let line = stdout.lines().find(|l| l.contains(" 1 ")).unwrap();
    assert!(
        line.starts_with("[FAIL]") && line.contains("3.469"),
        "{line}"
    );
}

#[test]
fn thread_count_must_be_numeric() {
    let o = Command::new(env!("CARGO_BIN_EXE_vpl"))
        .args(["design"])
        .env("VPL_THREADS", "many")
        .output()
        .unwrap();
    assert_eq!(code(&o), 1);
}

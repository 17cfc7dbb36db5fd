use std::path::Path;
use std::process::Command;

use num_complex::Complex64;
use proptest::prelude::*;
use singosc_cli::config::{parse_complex, RunConfig};
use singosc_cli::csv::{read_xy, trapezoid_from_origin};
use singosc_cli::figures::displacement_metric;
use singosc_cli::CliError;
use singosc_core::envelope::Convention;

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_singosc"))
}

fn small_run(dir: &Path, extra: &[&str]) -> std::process::Output {
    let mut cmd = bin();
    cmd.arg("density")
        .args(["--grid-n", "1200", "--out"])
        .arg(dir)
        .args(extra);
    cmd.output().expect("binary runs")
}

#[test]
fn config_sections_comments_and_overrides() {
    let mut cfg = RunConfig::default();
    cfg.apply_text(
        "# setup\n[physics]\ng = 0.75   # k = 1\nm = 2\nconvention = wronskian\n\n[states]\nlambda = 0.5, -0.25\n\n[run]\ntimes = 0, 1.5\n[grid]\nmax = 25\nn = 900\n",
    )
    .unwrap();
    assert_eq!(cfg.g, 0.75);
    assert_eq!(cfg.m, 2);
    assert_eq!(cfg.convention, Convention::WronskianHalfI);
    assert_eq!(cfg.lambda, Complex64::new(0.5, -0.25));
    assert_eq!(cfg.times, vec![0.0, 1.5]);
    assert_eq!((cfg.grid_max, cfg.grid_n), (25.0, 900));
    // default z = (2k+1)^{-1/2} with k = 1
    assert!((cfg.z().unwrap().re - 3f64.powf(-0.5)).abs() < 1e-15);
}

#[test]
fn config_errors_carry_line_numbers() {
    let mut cfg = RunConfig::default();
    match cfg.apply_text("[physics]\ng = 2\nspin = 3\n") {
        Err(CliError::Config { line, message, .. }) => {
            assert_eq!(line, 3);
            assert!(message.contains("physics.spin"), "{message}");
        }
        other => panic!("expected config error, got {other:?}"),
    }
    assert!(matches!(
        cfg.apply_text("[run]\ntimes = 0, x\n"),
        Err(CliError::Config { line: 2, .. })
    ));
    assert!(matches!(
        cfg.apply_text("[grid\n"),
        Err(CliError::Config { line: 1, .. })
    ));
}

#[test]
fn config_validation() {
    let mut cfg = RunConfig {
        z: Some(Complex64::new(0.8, 0.7)),
        ..RunConfig::default()
    };
    assert!(matches!(cfg.validate(), Err(CliError::Invalid(_))));
    cfg.z = None;
    cfg.times.clear();
    assert!(cfg.validate().is_err());
}

#[test]
fn density_writes_sixteen_figure_curves_that_integrate_to_one() {
    let dir = tempfile::tempdir().unwrap();
    let out = small_run(dir.path(), &[]);
    assert!(
        out.status.success(),
        "{}",
        String::from_utf8_lossy(&out.stderr)
    );
    let mut figure = 0;
    for entry in std::fs::read_dir(dir.path()).unwrap() {
        let path = entry.unwrap().path();
        let name = path.file_name().unwrap().to_string_lossy().to_string();
        let (meta, x, y) = read_xy(&path).unwrap();
        let get = |k: &str| meta.iter().find(|(a, _)| a == k).map(|(_, b)| b.clone());
        for key in ["g", "k", "m", "convention", "t"] {
            assert!(get(key).is_some(), "{name} lacks {key}");
        }
        assert_eq!(get("k").as_deref(), Some("1.25"));
        assert_eq!(get("convention").as_deref(), Some("paper"));
        let integral = trapezoid_from_origin(&x, &y);
        assert!((integral - 1.0).abs() < 1e-4, "{name}: {integral}");
        if !name.starts_with("ground") {
            figure += 1;
        }
    }
    assert_eq!(figure, 16);
}

#[test]
fn density_output_is_deterministic() {
    let (a, b) = (tempfile::tempdir().unwrap(), tempfile::tempdir().unwrap());
    assert!(small_run(a.path(), &["--times", "0.5"]).status.success());
    assert!(small_run(b.path(), &["--times", "0.5"]).status.success());
    for name in ["bg_transformed_t0.5.csv", "perelomov_original_t0.5.csv"] {
        let x = std::fs::read(a.path().join(name)).unwrap();
        let y = std::fs::read(b.path().join(name)).unwrap();
        assert_eq!(x, y, "{name}");
    }
}

#[test]
fn zero_lambda_reproduces_the_ground_state() {
    let dir = tempfile::tempdir().unwrap();
    assert!(small_run(dir.path(), &["--lambda", "0", "--times", "0,1"])
        .status
        .success());
    for t in ["0", "1"] {
        let (_, _, bg) = read_xy(&dir.path().join(format!("bg_original_t{t}.csv"))).unwrap();
        let (_, _, g0) = read_xy(&dir.path().join(format!("ground_t{t}.csv"))).unwrap();
        for (a, b) in bg.iter().zip(&g0) {
            assert!((a - b).abs() <= 1e-14, "t={t}: {a} vs {b}");
        }
    }
}

#[test]
fn config_file_and_flag_precedence() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("run.cfg");
    std::fs::write(&cfg, "[physics]\nm = 2\n[run]\ntimes = 1\n").unwrap();
    let out = bin()
        .arg("density")
        .arg("--config")
        .arg(&cfg)
        .args(["--m", "0", "--grid-n", "800", "--out"])
        .arg(dir.path())
        .output()
        .unwrap();
    assert!(
        out.status.success(),
        "{}",
        String::from_utf8_lossy(&out.stderr)
    );
    let (meta, _, _) = read_xy(&dir.path().join("bg_transformed_t1.csv")).unwrap();
    assert!(meta.contains(&("m".to_string(), "0".to_string())));
    assert!(!dir.path().join("bg_transformed_t0.csv").exists());
}

#[test]
fn invalid_input_exits_with_a_message() {
    let out = bin().args(["density", "--z", "0.9,0.9"]).output().unwrap();
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("|z|"));
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("bad.cfg");
    std::fs::write(&cfg, "[grid]\nmax = 10\ncolour = red\n").unwrap();
    let out = bin()
        .arg("moments")
        .arg("--config")
        .arg(&cfg)
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(2));
    let msg = String::from_utf8_lossy(&out.stderr);
    assert!(msg.contains("bad.cfg:3"), "{msg}");
}

#[test]
fn verify_algebra_passes_and_broken_tolerance_fails() {
    let out = bin().args(["verify", "algebra"]).output().unwrap();
    assert!(out.status.success());
    let text = String::from_utf8_lossy(&out.stdout);
    assert!(text.lines().any(|l| l.starts_with("PASS algebra.casimir")));
    assert!(!text.contains("FAIL"));

    let out = bin()
        .args(["verify", "measures", "--tolerance", "1e-15"])
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(1));
    let text = String::from_utf8_lossy(&out.stdout);
    assert!(text.lines().filter(|l| l.starts_with("FAIL")).count() > 0);
    for l in text.lines().filter(|l| !l.starts_with("summary")) {
        assert!(l.contains("value=") && l.contains("criterion="), "{l}");
    }
}

#[test]
fn moments_and_localization_tables() {
    let dir = tempfile::tempdir().unwrap();
    let out = bin()
        .arg("moments")
        .arg("--out")
        .arg(dir.path())
        .output()
        .unwrap();
    assert!(out.status.success());
    let text = std::fs::read_to_string(dir.path().join("moments.csv")).unwrap();
    assert_eq!(text.lines().filter(|l| !l.starts_with('#')).count(), 8);

    let out = bin()
        .args(["localization", "--grid-n", "1600", "--out"])
        .arg(dir.path())
        .output()
        .unwrap();
    assert!(out.status.success());
    let text = std::fs::read_to_string(dir.path().join("displacement.csv")).unwrap();
    let rows: Vec<&str> = text
        .lines()
        .filter(|l| !l.starts_with('#'))
        .skip(1)
        .collect();
    assert_eq!(rows.len(), 8);
    for r in rows {
        let ratio: f64 = r.split(',').nth(4).unwrap().parse().unwrap();
        assert!(ratio < 0.3, "{r}");
    }
}

fn bump(x: f64, centre: f64) -> f64 {
    (-(x - centre).powi(2)).exp()
}

#[test]
fn displacement_recovers_a_pure_shift() {
    let x: Vec<f64> = (1..=2000).map(|i| 0.01 * i as f64).collect();
    let a: Vec<f64> = x.iter().map(|&v| bump(v, 6.0)).collect();
    let b: Vec<f64> = x.iter().map(|&v| bump(v, 7.3)).collect();
    let m = displacement_metric(&x, &a, &b, 5.0);
    assert!((m.shift - 1.3).abs() < 1e-4, "{m:?}");
    assert!(m.post < 1e-4 * m.pre, "{m:?}");
    // a change of shape cannot be shifted away
    let c: Vec<f64> = x
        .iter()
        .map(|&v| bump(v, 6.0) * (1.0 + 0.3 * (v - 6.0)))
        .collect();
    let m = displacement_metric(&x, &a, &c, 5.0);
    assert!(m.post > 0.1 * m.pre, "{m:?}");
}

proptest! {
    #[test]
    fn complex_labels_round_trip(re in -1e3f64..1e3, im in -1e3f64..1e3) {
        let z = parse_complex(&format!("{re},{im}")).unwrap();
        prop_assert_eq!(z, Complex64::new(re, im));
        let r = parse_complex(&format!(" {re} ")).unwrap();
        prop_assert_eq!(r, Complex64::new(re, 0.0));
    }

    #[test]
    fn displacement_is_never_worse_than_no_shift(c1 in 3.0f64..8.0, c2 in 3.0f64..8.0, w in 0.5f64..2.0) {
        let x: Vec<f64> = (1..=600).map(|i| 0.025 * i as f64).collect();
        let a: Vec<f64> = x.iter().map(|&v| bump(v / w, c1 / w)).collect();
        let b: Vec<f64> = x.iter().map(|&v| bump(v, c2)).collect();
        let m = displacement_metric(&x, &a, &b, 4.0);
        prop_assert!(m.post <= m.pre + 1e-15);
    }
}

//! End-to-end tests against the compiled `iafc` binary: exit codes, file
//! outputs and manifest replay.

use std::path::Path;
use std::process::{Command, Output};

const TAU: f64 = std::f64::consts::TAU;

fn iafc(args: &[&str], dir: &Path) -> Output {
    Command::new(env!("CARGO_BIN_EXE_iafc"))
        .args(args)
        .current_dir(dir)
        .output()
        .expect("binary runs")
}

fn tiny_comb_args(out: &str) -> Vec<String> {
    vec![
        "--n-teeth".into(),
        "3".into(),
        "--delta".into(),
        (TAU * 40.0).to_string(),
        "--gamma".into(),
        (TAU * 5.0).to_string(),
        "--total-depth".into(),
        "10".into(),
        "--out-dir".into(),
        out.into(),
        "--trials".into(),
        "4".into(),
    ]
}

#[test]
fn simulate_succeeds_and_writes_files() {
    let dir = tempfile::tempdir().unwrap();
    let mut args: Vec<String> = vec!["simulate".into()];
    args.extend(tiny_comb_args("out"));
    let out = iafc(
        &args.iter().map(String::as_str).collect::<Vec<_>>(),
        dir.path(),
    );
    assert!(
        out.status.success(),
        "stderr: {}",
        String::from_utf8_lossy(&out.stderr)
    );
    assert!(dir.path().join("out/trace_in.csv").exists());
    assert!(dir.path().join("out/trace_out.csv").exists());
    assert!(dir.path().join("out/summary.csv").exists());
    let stdout = String::from_utf8_lossy(&out.stdout);
    assert!(stdout.contains("eta ="), "stdout: {stdout}");
}

#[test]
fn missing_comb_file_exits_2() {
    let dir = tempfile::tempdir().unwrap();
    let out = iafc(
        &[
            "simulate",
            "--comb-file",
            "does_not_exist.comb",
            "--out-dir",
            "out",
        ],
        dir.path(),
    );
    assert_eq!(
        out.status.code(),
        Some(2),
        "stderr: {}",
        String::from_utf8_lossy(&out.stderr)
    );
}

#[test]
fn invalid_config_key_exits_2() {
    let dir = tempfile::tempdir().unwrap();
    std::fs::write(dir.path().join("bad.cfg"), "no_such_key = 1\n").unwrap();
    let out = iafc(&["simulate", "--config", "bad.cfg"], dir.path());
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn finesse_violation_exits_2() {
    let dir = tempfile::tempdir().unwrap();
    let out = iafc(
        &[
            "simulate",
            "--n-teeth",
            "3",
            "--delta",
            "5",
            "--gamma",
            "10",
            "--out-dir",
            "out",
        ],
        dir.path(),
    );
    assert_eq!(out.status.code(), Some(2));
    let err = String::from_utf8_lossy(&out.stderr);
    assert!(err.contains("finesse"), "stderr: {err}");
}

#[test]
fn fit_backward_gate_failure_exits_3() {
    let dir = tempfile::tempdir().unwrap();
    let csv = "l,eta\n1,0.1\n2,0.7\n3,0.05\n4,0.6\n5,0.02\n6,0.55\n7,0.01\n8,0.5\n";
    std::fs::write(dir.path().join("noisy.csv"), csv).unwrap();
    let out = iafc(
        &["fit-backward", "--input", "noisy.csv", "--out-dir", "out"],
        dir.path(),
    );
    assert_eq!(
        out.status.code(),
        Some(3),
        "stderr: {}",
        String::from_utf8_lossy(&out.stderr)
    );
    assert!(dir.path().join("out/fit.csv").exists());
}

#[test]
fn fit_backward_clean_data_succeeds() {
    let dir = tempfile::tempdir().unwrap();
    let mut csv = String::from("l,eta\n");
    for k in 1..=10 {
        let l = k as f64 * 4.0;
        let x = 0.08 * l;
        csv.push_str(&format!("{},{}\n", l, 0.9 * x * x * (-x).exp()));
    }
    std::fs::write(dir.path().join("sweep.csv"), csv).unwrap();
    let out = iafc(
        &["fit-backward", "--input", "sweep.csv", "--out-dir", "out"],
        dir.path(),
    );
    assert!(
        out.status.success(),
        "stderr: {}",
        String::from_utf8_lossy(&out.stderr)
    );
    assert!(dir.path().join("out/backward.csv").exists());
    let text = std::fs::read_to_string(dir.path().join("out/fit.csv")).unwrap();
    assert!(text.contains("eta0,alpha_tilde"));
}

#[test]
fn sweep_manifest_replays_byte_identical() {
    let dir = tempfile::tempdir().unwrap();
    let mut args: Vec<String> = vec![
        "sweep-spacing".into(),
        "--strengths".into(),
        "0,5".into(),
        "--finesses".into(),
        "8".into(),
        "--seed".into(),
        "31415".into(),
    ];
    args.extend(tiny_comb_args("a"));
    let out = iafc(
        &args.iter().map(String::as_str).collect::<Vec<_>>(),
        dir.path(),
    );
    assert!(
        out.status.success(),
        "stderr: {}",
        String::from_utf8_lossy(&out.stderr)
    );

    // replay purely from the manifest
    let out2 = iafc(
        &[
            "sweep-spacing",
            "--config",
            "a/manifest.cfg",
            "--out-dir",
            "b",
        ],
        dir.path(),
    );
    assert!(
        out2.status.success(),
        "stderr: {}",
        String::from_utf8_lossy(&out2.stderr)
    );
    let a = std::fs::read(dir.path().join("a/sweep_spacing_f8.csv")).unwrap();
    let b = std::fs::read(dir.path().join("b/sweep_spacing_f8.csv")).unwrap();
    assert_eq!(a, b, "manifest replay must reproduce the CSV exactly");
}

#[test]
fn sweep_length_and_fit_pipeline_via_binary() {
    let dir = tempfile::tempdir().unwrap();
    let lengths: Vec<String> = (1..=8).map(|k| (k as f64 * 0.5).to_string()).collect();
    let mut args: Vec<String> = vec![
        "sweep-length".into(),
        "--lengths".into(),
        lengths.join(","),
        "--kind".into(),
        "none".into(),
    ];
    args.extend(tiny_comb_args("out"));
    let out = iafc(
        &args.iter().map(String::as_str).collect::<Vec<_>>(),
        dir.path(),
    );
    assert!(
        out.status.success(),
        "stderr: {}",
        String::from_utf8_lossy(&out.stderr)
    );
    let sweep = dir.path().join("out/sweep_length.csv");
    assert!(sweep.exists());

    let out2 = iafc(
        &[
            "fit-backward",
            "--input",
            "out/sweep_length.csv",
            "--out-dir",
            "fit",
            "--gate-threshold",
            "1.0",
        ],
        dir.path(),
    );
    assert!(
        out2.status.success(),
        "stderr: {}",
        String::from_utf8_lossy(&out2.stderr)
    );
}

#[test]
fn thermal_and_analytic_table_succeed() {
    let dir = tempfile::tempdir().unwrap();
    let mut args: Vec<String> = vec![
        "thermal".into(),
        "--temperatures".into(),
        "4,300".into(),
        "--ground-span".into(),
        (TAU * 3.0e5).to_string(),
    ];
    args.extend(tiny_comb_args("out"));
    let out = iafc(
        &args.iter().map(String::as_str).collect::<Vec<_>>(),
        dir.path(),
    );
    assert!(
        out.status.success(),
        "stderr: {}",
        String::from_utf8_lossy(&out.stderr)
    );
    assert!(dir.path().join("out/thermal.csv").exists());
    assert!(dir.path().join("out/comb_T4.txt").exists());

    let out2 = iafc(
        &["analytic-table", "--finesses", "20,100", "--out-dir", "tab"],
        dir.path(),
    );
    assert!(out2.status.success());
    assert!(dir.path().join("tab/analytic_table.csv").exists());
}

#[test]
fn plot_flag_writes_svg() {
    let dir = tempfile::tempdir().unwrap();
    let mut args: Vec<String> = vec!["simulate".into(), "--plot".into()];
    args.extend(tiny_comb_args("out"));
    let out = iafc(
        &args.iter().map(String::as_str).collect::<Vec<_>>(),
        dir.path(),
    );
    assert!(out.status.success());
    let svg = std::fs::read_to_string(dir.path().join("out/trace_out.svg")).unwrap();
    assert!(svg.starts_with("<svg"));
}

#[test]
fn help_lists_all_subcommands() {
    let dir = tempfile::tempdir().unwrap();
    let out = iafc(&["--help"], dir.path());
    assert!(out.status.success());
    let text = String::from_utf8_lossy(&out.stdout);
    for sub in [
        "simulate",
        "sweep-spacing",
        "sweep-depth",
        "sweep-length",
        "fit-backward",
        "thermal",
        "analytic-table",
    ] {
        assert!(text.contains(sub), "help missing {sub}: {text}");
    }
}

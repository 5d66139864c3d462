//! End-to-end tests of the expanderlab binary: file outputs, determinism,
//! and exit codes.

use std::path::{Path, PathBuf};
use std::process::{Command, Output};

fn bin() -> &'static str {
    env!("CARGO_BIN_EXE_expanderlab")
}

fn run(dir: &Path, args: &[&str]) -> Output {
    Command::new(bin())
        .current_dir(dir)
        .args(args)
        .output()
        .expect("binary runs")
}

fn tmp_dir(tag: &str) -> PathBuf {
    let dir = std::env::temp_dir().join(format!("expanderlab_cli_{tag}_{}", std::process::id()));
    let _ = std::fs::remove_dir_all(&dir);
    std::fs::create_dir_all(&dir).unwrap();
    dir
}

#[test]
fn generate_writes_geometry_and_sweep() {
    let dir = tmp_dir("generate");
    let out = run(
        &dir,
        &[
            "generate",
            "--kind",
            "hyperplane",
            "--n",
            "2",
            "--out",
            "runs/a",
        ],
    );
    assert!(
        out.status.success(),
        "{}",
        String::from_utf8_lossy(&out.stderr)
    );
    let text = std::fs::read_to_string(dir.join("runs/a/hyperplane_2.json")).unwrap();
    assert!(text.starts_with("{\"kind\":\"hyperplane\",\"n\":2,"));
    assert!(dir.join("runs/a/sweep.json").exists());
}

#[test]
fn generate_is_byte_deterministic() {
    let dir = tmp_dir("determinism");
    for sub in ["runs/a", "runs/b"] {
        let out = run(
            &dir,
            &[
                "generate", "--kind", "curve", "--d0", "0.5", "--smax", "2.0", "--out", sub,
            ],
        );
        assert!(
            out.status.success(),
            "{}",
            String::from_utf8_lossy(&out.stderr)
        );
    }
    let a = std::fs::read(dir.join("runs/a/curve_d0_0p5.json")).unwrap();
    let b = std::fs::read(dir.join("runs/b/curve_d0_0p5.json")).unwrap();
    assert_eq!(a, b);
}

#[test]
fn spectrum_reproduces_flat_line_eigenvalues() {
    let dir = tmp_dir("spectrum");
    assert!(run(
        &dir,
        &[
            "generate",
            "--kind",
            "hyperplane",
            "--n",
            "1",
            "--out",
            "runs"
        ]
    )
    .status
    .success());
    let out = run(
        &dir,
        &[
            "spectrum",
            "--input",
            "hyperplane_1.json",
            "--operator",
            "drift",
            "--m",
            "5",
            "--emit-svg",
            "--emit-csv",
            "--out",
            "runs",
        ],
    );
    assert!(
        out.status.success(),
        "{}",
        String::from_utf8_lossy(&out.stderr)
    );
    let text = std::fs::read_to_string(dir.join("runs/hyperplane_1_spectrum_drift.json")).unwrap();
    let doc: serde_json::Value = serde_json::from_str(&text).unwrap();
    assert_eq!(doc["convention"], "rayleigh");
    let evs = doc["eigenvalues"].as_array().unwrap();
    for (i, ev) in evs.iter().enumerate() {
        let exact = 0.5 + 0.5 * i as f64;
        assert!((ev.as_f64().unwrap() - exact).abs() < 1e-3, "mode {i}");
    }
    let svg = std::fs::read_to_string(dir.join("runs/hyperplane_1_spectrum_drift.svg")).unwrap();
    assert!(svg.starts_with("<svg"));
    let csv = std::fs::read_to_string(dir.join("runs/hyperplane_1_spectrum_drift.csv")).unwrap();
    assert!(csv.starts_with("s,value\n"));
}

#[test]
fn hermite_table_lists_multiplicities() {
    let dir = tmp_dir("hermite");
    let out = run(
        &dir,
        &[
            "hermite",
            "--n",
            "2",
            "--max-order",
            "2",
            "--emit-csv",
            "--out",
            "runs",
        ],
    );
    assert!(out.status.success());
    let stdout = String::from_utf8_lossy(&out.stdout);
    // 6 multi-indices with eigenvalues {1.0, 1.5, 1.5, 2.0, 2.0, 2.0}
    let rows: Vec<&str> = stdout.lines().filter(|l| l.starts_with('(')).collect();
    assert_eq!(rows.len(), 6);
    assert_eq!(rows.iter().filter(|r| r.contains("| 1.5 |")).count(), 2);
    assert_eq!(rows.iter().filter(|r| r.contains("| 2 |")).count(), 3);
    assert!(dir.join("runs/hermite_n2_order2.csv").exists());
}

#[test]
fn verify_on_flat_sweep_exits_zero() {
    let dir = tmp_dir("verify");
    assert!(run(
        &dir,
        &[
            "generate",
            "--kind",
            "hyperplane",
            "--n",
            "1",
            "--out",
            "runs"
        ]
    )
    .status
    .success());
    assert!(run(
        &dir,
        &[
            "generate",
            "--kind",
            "hyperplane",
            "--n",
            "2",
            "--out",
            "runs"
        ]
    )
    .status
    .success());
    // the second generate rewrote sweep.json; verify the one-member sweep
    let out = run(
        &dir,
        &[
            "verify",
            "--input",
            "sweep.json",
            "--grid",
            "801",
            "--radius",
            "10",
            "--out",
            "runs",
        ],
    );
    assert!(
        out.status.success(),
        "stdout: {} stderr: {}",
        String::from_utf8_lossy(&out.stdout),
        String::from_utf8_lossy(&out.stderr)
    );
    assert!(dir.join("runs/report.json").exists());
    assert!(dir.join("runs/report.md").exists());
    let report = std::fs::read_to_string(dir.join("runs/report.json")).unwrap();
    assert!(report.contains("\"pass\":true"));
    assert!(!report.contains("\"error\""));
}

#[test]
fn exit_codes_for_failures() {
    let dir = tmp_dir("exit_codes");
    // usage
    let out = run(&dir, &["generate", "--bogus"]);
    assert_eq!(out.status.code(), Some(2));
    // generation: unreachable residual tolerance
    let out = run(
        &dir,
        &[
            "generate", "--kind", "curve", "--d0", "1.0", "--tol", "1e-13", "--smax", "2.0",
            "--out", "runs",
        ],
    );
    assert_eq!(out.status.code(), Some(3));
    // spectral: radius beyond the resolved profile
    assert!(run(
        &dir,
        &["generate", "--kind", "curve", "--d0", "0.5", "--smax", "2.0", "--out", "runs"]
    )
    .status
    .success());
    let out = run(
        &dir,
        &[
            "spectrum",
            "--input",
            "curve_d0_0p5.json",
            "--radius",
            "10",
            "--out",
            "runs",
        ],
    );
    assert_eq!(out.status.code(), Some(4));
}

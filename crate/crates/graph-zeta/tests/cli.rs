//! End-to-end checks of the `graph-zeta` binary: exit codes, output schema,
//! determinism, and the file-based graph sources.

use std::process::Command;

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_graph-zeta"))
}

fn tempdir() -> std::path::PathBuf {
    let dir = std::env::temp_dir().join(format!("graph-zeta-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    dir
}

#[test]
fn series_json_schema_and_values() {
    let out = bin()
        .args(["series", "--fixture", "c4", "--u", "0", "--m-max", "8"])
        .output()
        .unwrap();
    assert!(out.status.success());
    let doc: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(doc["schema_version"], 1);
    assert_eq!(doc["provenance"]["u"], "0");
    // N_4 = 2 for C4 at u = 0
    assert_eq!(doc["coefficients"][3]["N"][0], 2.0);
}

#[test]
fn eval_clair_outside_disc() {
    let out = bin()
        .args(["eval", "--fixture", "clair", "--z", "2", "--u", "0"])
        .output()
        .unwrap();
    assert!(out.status.success());
    let doc: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(doc["zeta"][0], 0.25);
}

#[test]
fn verify_det_m_alias_and_small_residual() {
    let out = bin()
        .args([
            "verify-det", "--fixture", "K4", "--u", "0", "--M", "30", "--zgrid", "20",
        ])
        .output()
        .unwrap();
    assert!(out.status.success());
    let doc: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert!(doc["max_residual"].as_f64().unwrap() <= 1e-8);
}

#[test]
fn domain_error_exits_2() {
    // |z| beyond the convergence radius of the series
    let out = bin()
        .args(["eval", "--fixture", "c4", "--z", "0.9", "--u", "0"])
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(2));
    let err: serde_json::Value = serde_json::from_slice(&out.stderr).unwrap();
    assert!(err["error"].as_str().unwrap().contains("radius"));
}

#[test]
fn budget_error_exits_3() {
    let out = bin()
        .env("ZETA_BUDGET", "50")
        .args([
            "series",
            "--fixture",
            "petersen",
            "--m-max",
            "10",
            "--oracle-check",
        ])
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(3));
}

#[test]
fn spectrum_csv() {
    let out = bin()
        .args([
            "spectrum",
            "--fixture",
            "k4",
            "--grid",
            "64",
            "--format",
            "csv",
        ])
        .output()
        .unwrap();
    assert!(out.status.success());
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.starts_with("lambda,F\n"));
    assert!(text.lines().count() > 32);
}

#[test]
fn region_omega_w_disconnect_flag() {
    let out = bin()
        .args([
            "region", "--kind", "omega_w", "--w", "0.5+0i", "--d", "2", "--grid", "128",
        ])
        .output()
        .unwrap();
    assert!(out.status.success());
    let doc: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(doc["disconnects"], true);
}

#[test]
fn edge_list_and_periodic_files() {
    let dir = tempdir();
    let edges = dir.join("square.txt");
    std::fs::write(&edges, "# a square\n0 1\n1 2\n2 3\n3 0\n").unwrap();
    let out = bin()
        .args(["series", "--m-max", "4"])
        .arg("--edges")
        .arg(&edges)
        .output()
        .unwrap();
    assert!(out.status.success());

    let spec = dir.join("ladder.json");
    std::fs::write(
        &spec,
        r#"{"domain":["a","b"],"edges":[["a","a",[1]],["b","b",[1]],["a","b",[0]]],"rank":1}"#,
    )
    .unwrap();
    let out = bin()
        .args(["series", "--m-max", "4", "--window-radius", "6"])
        .arg("--periodic")
        .arg(&spec)
        .output()
        .unwrap();
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let doc: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    // N_2 on the ladder: sum over |F| = 2 of deg u^2 = 6 u^2, zero at u = 0
    assert_eq!(doc["coefficients"][1]["N"][0], 0.0);
}

#[test]
fn identical_invocations_are_byte_identical() {
    let run = || {
        bin()
            .args([
                "verify-funceq",
                "--fixture",
                "petersen",
                "--q",
                "2",
                "--samples",
                "10",
            ])
            .output()
            .unwrap()
    };
    let a = run();
    let b = run();
    assert!(a.status.success());
    assert_eq!(a.stdout, b.stdout);
}

#[test]
fn fixtures_listing() {
    let out = bin().args(["fixtures", "--format", "csv"]).output().unwrap();
    assert!(out.status.success());
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.contains("petersen"));
    assert!(text.contains("gasket"));
}

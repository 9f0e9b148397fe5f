//! End-to-end tests of the `qct` binary: flags, config files, report
//! schemas, and the exit-status contract.

use std::path::Path;
use std::process::{Command, Output};

use serde_json::Value;

fn qct(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_qct"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn read_json(path: &Path) -> Value {
    let text = std::fs::read_to_string(path).expect("report file exists");
    serde_json::from_str(&text).expect("valid JSON report")
}

#[test]
fn sweep_emits_schema_conformant_json() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("report.json");
    let output = qct(&[
        "sweep",
        "--dims",
        "2",
        "--seeds",
        "3",
        "--out",
        out.to_str().unwrap(),
    ]);
    assert!(output.status.success(), "{output:?}");

    let report = read_json(&out);
    let config = &report["config"];
    assert_eq!(config["d_list"], serde_json::json!([2]));
    assert_eq!(config["seeds_per_case"], serde_json::json!(3));
    let records = report["records"].as_array().unwrap();
    assert_eq!(records.len(), 3);
    for record in records {
        for field in [
            "case_id",
            "d",
            "seed",
            "system_noise",
            "ancilla_noise",
            "v_variant",
            "ab_order",
            "system_fidelity",
            "factorization_residual",
            "control",
            "pass",
            "wall_time_ms",
        ] {
            assert!(record.get(field).is_some(), "missing field {field}");
        }
        assert_eq!(record["pass"], serde_json::json!(true));
    }
    let summary = &report["summary"];
    assert_eq!(summary["pass_count"], serde_json::json!(3));
    assert_eq!(summary["fail_count"], serde_json::json!(0));
    assert_eq!(summary["control_count"], serde_json::json!(0));
}

#[test]
fn json_and_csv_contain_identical_numeric_fields() {
    let dir = tempfile::tempdir().unwrap();
    let json_path = dir.path().join("report.json");
    let csv_path = dir.path().join("report.csv");
    let common = [
        "sweep",
        "--dims",
        "2",
        "--seeds",
        "2",
        "--omit-timing",
    ];
    let mut json_args = common.to_vec();
    json_args.extend(["--format", "json", "--out", json_path.to_str().unwrap()]);
    assert!(qct(&json_args).status.success());
    let mut csv_args = common.to_vec();
    csv_args.extend(["--format", "csv", "--out", csv_path.to_str().unwrap()]);
    assert!(qct(&csv_args).status.success());

    let report = read_json(&json_path);
    let csv = std::fs::read_to_string(&csv_path).unwrap();
    let mut lines = csv.lines();
    let header: Vec<&str> = lines.next().unwrap().split(',').collect();
    let fid_col = header.iter().position(|h| *h == "system_fidelity").unwrap();
    let res_col = header
        .iter()
        .position(|h| *h == "factorization_residual")
        .unwrap();
    for (record, line) in report["records"].as_array().unwrap().iter().zip(lines) {
        let cells: Vec<&str> = line.split(',').collect();
        // the JSON numeric token must equal the CSV cell text
        let fid_json = format!("{:.11e}", record["system_fidelity"].as_f64().unwrap());
        assert_eq!(cells[fid_col], fid_json);
        let res_json = format!(
            "{:.11e}",
            record["factorization_residual"].as_f64().unwrap()
        );
        assert_eq!(cells[res_col], res_json);
    }
}

#[test]
fn config_file_is_read_and_flags_override_it() {
    let dir = tempfile::tempdir().unwrap();
    let config_path = dir.path().join("sweep.toml");
    std::fs::write(
        &config_path,
        r#"
d_list = [2]
seeds_per_case = 9
ancilla_noise_kinds = ["mixed_unitary"]
tolerance = 1e-9
"#,
    )
    .unwrap();
    let out = dir.path().join("report.json");
    let output = qct(&[
        "sweep",
        "--config",
        config_path.to_str().unwrap(),
        "--seeds",
        "2",
        "--out",
        out.to_str().unwrap(),
    ]);
    assert!(output.status.success());
    let report = read_json(&out);
    // flag wins over the file for seeds; the file value holds elsewhere
    assert_eq!(report["config"]["seeds_per_case"], serde_json::json!(2));
    assert_eq!(
        report["config"]["ancilla_noise_kinds"],
        serde_json::json!(["mixed_unitary"])
    );
}

#[test]
fn control_cells_are_excluded_from_exit_status() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("report.json");
    let output = qct(&[
        "sweep",
        "--dims",
        "2",
        "--seeds",
        "3",
        "--ancilla-noise",
        "out_of_class",
        "--out",
        out.to_str().unwrap(),
    ]);
    assert!(output.status.success(), "controls must not fail the run");
    let report = read_json(&out);
    assert_eq!(report["summary"]["control_count"], serde_json::json!(3));
    assert_eq!(report["summary"]["fail_count"], serde_json::json!(0));
    for record in report["records"].as_array().unwrap() {
        assert_eq!(record["control"], serde_json::json!(true));
        assert_eq!(record["pass"], serde_json::json!(false));
    }
}

#[test]
fn unreachable_tolerance_fails_with_nonzero_exit() {
    let output = qct(&["sweep", "--dims", "2", "--seeds", "2", "--tolerance", "1e-30"]);
    assert_eq!(output.status.code(), Some(1));
}

#[test]
fn empty_dimension_list_is_a_config_error() {
    let output = qct(&["sweep", "--dims", ""]);
    assert_eq!(output.status.code(), Some(2));
    let stderr = String::from_utf8_lossy(&output.stderr);
    assert!(stderr.contains("config error"), "stderr: {stderr}");
}

#[test]
fn demo_subcommand_reports_protection() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("demo.json");
    let output = qct(&[
        "demo-entanglement",
        "--p",
        "0.5,1.0",
        "--out",
        out.to_str().unwrap(),
    ]);
    assert!(output.status.success());
    let report = read_json(&out);
    let rows = report["rows"].as_array().unwrap();
    assert_eq!(rows.len(), 4);
    for row in rows.iter().filter(|r| r["protected"] == serde_json::json!(true)) {
        let neg = row["negativity_out"].as_f64().unwrap();
        assert!((neg - 0.5).abs() <= 1e-9);
    }
}

#[test]
fn certify_subcommand_passes_and_lists_checks() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("certs.json");
    let output = qct(&["certify-decompositions", "--out", out.to_str().unwrap()]);
    assert!(output.status.success());
    let report = read_json(&out);
    assert_eq!(report["summary"]["pass"], serde_json::json!(true));
    let checks = report["checks"].as_array().unwrap();
    let names: Vec<&str> = checks
        .iter()
        .map(|c| c["check"].as_str().unwrap())
        .collect();
    for expected in [
        "two_dove_sigma_z",
        "psdp_action",
        "optical_entangler",
        "correction_hadamard_conjugation",
        "atomic_entangler",
        "cavity_reflection",
        "atom_photon_reflection",
    ] {
        assert!(names.contains(&expected), "missing check {expected}");
    }
}

#[test]
fn qudit_sweep_marks_factorization_skipped() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("report.json");
    let output = qct(&[
        "sweep",
        "--dims",
        "4",
        "--seeds",
        "1",
        "--out",
        out.to_str().unwrap(),
    ]);
    assert!(output.status.success());
    let report = read_json(&out);
    let record = &report["records"][0];
    assert_eq!(
        record["factorization_residual"],
        serde_json::json!("skipped:dim")
    );
    assert_eq!(record["pass"], serde_json::json!(true));
}

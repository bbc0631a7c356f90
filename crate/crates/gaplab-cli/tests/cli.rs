//! End-to-end tests of the binary: file ingestion, exit codes, and the
//! deterministic-report contract.

use std::path::PathBuf;
use std::process::{Command, Output};

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_gaplab"))
}

fn scratch() -> PathBuf {
    let dir = std::env::temp_dir().join(format!(
        "gaplab-cli-test-{}-{:?}",
        std::process::id(),
        std::thread::current().id()
    ));
    std::fs::create_dir_all(&dir).unwrap();
    dir
}

fn stdout(out: &Output) -> String {
    String::from_utf8_lossy(&out.stdout).trim().to_string()
}

#[test]
fn gap_prints_the_integer() {
    let dir = scratch();
    let poly = dir.join("poly.json");
    std::fs::write(&poly, r#"{"n":3,"monomials":[[0,1,2]]}"#).unwrap();
    let out = bin().args(["gap", "--input"]).arg(&poly).output().unwrap();
    assert!(out.status.success());
    assert_eq!(stdout(&out), "6");
}

#[test]
fn tcount_three_clause_formula() {
    let dir = scratch();
    let cnf = dir.join("g.dimacs");
    std::fs::write(&cnf, "p cnf 4 3\n1 2 3 0\n-1 2 4 0\n2 -3 -4 0\n").unwrap();
    let out = bin().args(["tcount", "--input"]).arg(&cnf).output().unwrap();
    assert!(out.status.success());
    assert_eq!(stdout(&out), "112");
}

#[test]
fn compile_cnf_reports_counts() {
    let dir = scratch();
    let cnf = dir.join("one.dimacs");
    std::fs::write(&cnf, "p cnf 3 1\n1 -2 3 0\n").unwrap();
    let out = bin()
        .args(["compile-cnf", "--input"])
        .arg(&cnf)
        .output()
        .unwrap();
    assert!(out.status.success());
    let parsed: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
    assert_eq!(parsed["toffoli_count"], 2);
    assert_eq!(parsed["ancillas"], 2);
    assert_eq!(parsed["t_count"], 28);
}

#[test]
fn invalid_inputs_exit_two_with_diagnostics() {
    let dir = scratch();
    let bad_poly = dir.join("bad.json");
    std::fs::write(&bad_poly, r#"{"n":2,"monomials":[[0],[0]]}"#).unwrap();
    let out = bin().args(["gap", "--input"]).arg(&bad_poly).output().unwrap();
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("duplicate monomial"));

    let bad_cnf = dir.join("bad.dimacs");
    std::fs::write(&bad_cnf, "p cnf 3 1\n1 2 0\n").unwrap();
    let out = bin().args(["tcount", "--input"]).arg(&bad_cnf).output().unwrap();
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("exactly 3"));

    let missing = dir.join("missing.json");
    let out = bin().args(["gap", "--input"]).arg(&missing).output().unwrap();
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn infeasible_chain_parameters_exit_two() {
    let out = bin()
        .args([
            "chain",
            "--n",
            "3",
            "--eps",
            "0.05",
            "--delta",
            "0.2",
            "--sigma",
            "0.5",
            "--alpha",
            "8",
            "--f-trials",
            "1",
            "--t-bits",
            "6",
        ])
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("infeasible configuration"));
}

#[test]
fn reports_are_byte_identical_for_equal_seeds() {
    let dir = scratch();
    let a = dir.join("a.json");
    let b = dir.join("b.json");
    for path in [&a, &b] {
        let out = bin()
            .args([
                "anticoncentration",
                "--n",
                "5",
                "--trials",
                "800",
                "--seed",
                "42",
                "--out",
            ])
            .arg(path)
            .output()
            .unwrap();
        assert!(out.status.success());
    }
    let bytes_a = std::fs::read(&a).unwrap();
    let bytes_b = std::fs::read(&b).unwrap();
    assert_eq!(bytes_a, bytes_b, "same seed and flags must reproduce bytes");
    // a different seed changes the numbers
    let c = dir.join("c.json");
    let out = bin()
        .args([
            "anticoncentration",
            "--n",
            "5",
            "--trials",
            "800",
            "--seed",
            "43",
            "--out",
        ])
        .arg(&c)
        .output()
        .unwrap();
    assert!(out.status.success());
    assert_ne!(bytes_a, std::fs::read(&c).unwrap());
}

#[test]
fn report_embeds_version_config_and_seed() {
    let dir = scratch();
    let path = dir.join("report.json");
    let out = bin()
        .args([
            "anticoncentration",
            "--n",
            "4",
            "--trials",
            "300",
            "--seed",
            "9",
            "--out",
        ])
        .arg(&path)
        .output()
        .unwrap();
    assert!(out.status.success());
    let parsed: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(&path).unwrap()).unwrap();
    assert_eq!(parsed["master_seed"], 9);
    assert_eq!(parsed["config"]["n"], 4);
    assert!(parsed["tool_version"].as_str().unwrap().contains('.'));
}

#[test]
fn stockmeyer_identity_is_exact() {
    let out = bin()
        .args([
            "stockmeyer",
            "--alg",
            "identity",
            "--t-bits",
            "3",
            "--z",
            "5",
        ])
        .output()
        .unwrap();
    assert!(out.status.success());
    let parsed: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
    assert_eq!(parsed["data"]["estimate"]["eta"], 0);
    assert_eq!(parsed["data"]["estimate"]["q_raw"], 0.125);
}

#[test]
fn approx_count_decisions_and_query_log() {
    let dir = scratch();
    let log = dir.join("queries.jsonl");
    let out = bin()
        .args([
            "approx-count",
            "--width",
            "14",
            "--count",
            "8192",
            "--k",
            "10",
            "--seed",
            "4",
            "--query-log",
        ])
        .arg(&log)
        .output()
        .unwrap();
    assert!(out.status.success());
    assert_eq!(stdout(&out), "accept");
    let lines = std::fs::read_to_string(&log).unwrap();
    let first: serde_json::Value = serde_json::from_str(lines.lines().next().unwrap()).unwrap();
    assert_eq!(first["kind"], "hash-restricted");
    assert_eq!(first["threshold"], 48);
    assert!(first["hasher_seed"].is_u64());

    // deterministic reject below 2^k
    let out = bin()
        .args([
            "approx-count", "--width", "10", "--count", "5", "--k", "3", "--seed", "4",
        ])
        .output()
        .unwrap();
    assert!(out.status.success());
    assert_eq!(stdout(&out), "reject");
}

#[test]
fn hash_test_passes() {
    let out = bin()
        .args([
            "hash-test",
            "--n",
            "3",
            "--m",
            "2",
            "--set-size",
            "512",
            "--leftover-m",
            "4",
            "--eps",
            "0.5",
            "--trials",
            "1500",
            "--seed",
            "3",
        ])
        .output()
        .unwrap();
    assert!(out.status.success());
    let parsed: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
    assert_eq!(parsed["passed"], true);
}

#[test]
fn enum_limit_env_var_caps_gap_width() {
    let dir = scratch();
    let poly = dir.join("six.json");
    std::fs::write(&poly, r#"{"n":6,"monomials":[[0,1,2]]}"#).unwrap();
    let out = bin()
        .env("GAPLAB_MAX_ENUM_BITS", "4")
        .args(["gap", "--input"])
        .arg(&poly)
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("resource limit"));
    // without the override the same file is fine
    let out = bin().args(["gap", "--input"]).arg(&poly).output().unwrap();
    assert!(out.status.success());
}

#[test]
fn csv_format_rejected_outside_anticoncentration() {
    let dir = scratch();
    let poly = dir.join("p.json");
    std::fs::write(&poly, r#"{"n":2,"monomials":[[0,1]]}"#).unwrap();
    // the iqp-dist subcommand has no --format flag at all
    let out = bin()
        .args(["iqp-dist", "--format", "csv", "--input"])
        .arg(&poly)
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(2));
}

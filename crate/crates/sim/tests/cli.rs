//! End-to-end checks of the `relay-sim` binary.

use std::path::PathBuf;
use std::process::{Command, Output};

fn relay_sim(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_relay-sim"))
        .args(args)
        .output()
        .expect("spawning relay-sim")
}

fn temp_path(name: &str) -> PathBuf {
    std::env::temp_dir().join(format!("relay_sim_test_{}_{name}", std::process::id()))
}

#[test]
fn scenario_runs_are_byte_identical_for_the_same_seed() {
    let args = [
        "scenario",
        "--id",
        "1",
        "--runs",
        "2",
        "--seed",
        "7",
        "--ns-max",
        "20",
        "--ns-step",
        "10",
        "--jobs",
        "2",
    ];
    let first = relay_sim(&args);
    assert!(first.status.success(), "{first:?}");
    let second = relay_sim(&args);
    assert!(second.status.success());
    assert!(!first.stdout.is_empty());
    assert_eq!(first.stdout, second.stdout);

    // --out writes the same bytes to a file.
    let out = temp_path("s1.csv");
    let with_file = relay_sim(&[
        "scenario",
        "--id",
        "1",
        "--runs",
        "2",
        "--seed",
        "7",
        "--ns-max",
        "20",
        "--ns-step",
        "10",
        "--out",
        out.to_str().unwrap(),
    ]);
    assert!(with_file.status.success());
    assert_eq!(std::fs::read(&out).unwrap(), first.stdout);
    std::fs::remove_file(&out).ok();
}

#[test]
fn solve_kcard_reports_the_known_fixture_answer() {
    let matrix = temp_path("kcard.txt");
    std::fs::write(&matrix, "5 2\n3 4\n").unwrap();
    let output = relay_sim(&[
        "solve-kcard",
        "--matrix",
        matrix.to_str().unwrap(),
        "--k",
        "1",
    ]);
    assert!(output.status.success());
    let text = String::from_utf8(output.stdout).unwrap();
    assert_eq!(text, "edge 0 0\ntotal 5\n");
    std::fs::remove_file(&matrix).ok();
}

#[test]
fn solve_kcard_rejects_bad_matrices() {
    let matrix = temp_path("ragged.txt");
    std::fs::write(&matrix, "5 2\n3\n").unwrap();
    let output = relay_sim(&[
        "solve-kcard",
        "--matrix",
        matrix.to_str().unwrap(),
        "--k",
        "1",
    ]);
    assert!(!output.status.success());
    let err = String::from_utf8(output.stderr).unwrap();
    assert!(err.contains("differing lengths"), "{err}");
    std::fs::remove_file(&matrix).ok();

    let output = relay_sim(&["solve-kcard", "--matrix", "/nonexistent/file", "--k", "1"]);
    assert!(!output.status.success());
}

#[test]
fn unknown_scenario_fails_with_a_diagnostic() {
    let output = relay_sim(&["scenario", "--id", "9", "--runs", "1"]);
    assert!(!output.status.success());
    let err = String::from_utf8(output.stderr).unwrap();
    assert!(err.contains("unknown scenario"), "{err}");
}

#[test]
fn unknown_flags_are_rejected() {
    let output = relay_sim(&["scenario", "--id", "1", "--frobnicate"]);
    assert!(!output.status.success());
}

#[test]
fn config_file_overrides_preset_and_flags_override_config() {
    let config = temp_path("cfg.json");
    std::fs::write(
        &config,
        r#"{"runs": 1, "ns_max": 10, "ns_step": 5, "algos": ["wrsa"]}"#,
    )
    .unwrap();
    // Flag --ns-max 20 must beat the file's 10; the file's algos beat the
    // preset's four.
    let output = relay_sim(&[
        "scenario",
        "--id",
        "2",
        "--config",
        config.to_str().unwrap(),
        "--ns-max",
        "20",
    ]);
    assert!(output.status.success(), "{output:?}");
    let text = String::from_utf8(output.stdout).unwrap();
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(lines.len(), 1 + 5); // header + WRSA rows for n_s = 0,5,10,15,20
    assert!(lines[1..].iter().all(|l| l.contains("WRSA")));
    assert!(lines.last().unwrap().starts_with("2,WRSA,20,75,100,"));
    std::fs::remove_file(&config).ok();

    let bad = temp_path("bad.json");
    std::fs::write(&bad, r#"{"runz": 1}"#).unwrap();
    let output = relay_sim(&["scenario", "--id", "2", "--config", bad.to_str().unwrap()]);
    assert!(!output.status.success());
    std::fs::remove_file(&bad).ok();
}

#[test]
fn instance_dump_is_deterministic_valid_json() {
    let a = relay_sim(&["instance", "--seed", "5", "--ns", "2", "--nr", "1"]);
    assert!(a.status.success());
    let b = relay_sim(&["instance", "--seed", "5", "--ns", "2", "--nr", "1"]);
    assert_eq!(a.stdout, b.stdout);
    let parsed: serde_json::Value = serde_json::from_slice(&a.stdout).unwrap();
    assert_eq!(parsed["machines"].as_array().unwrap().len(), 3);
    assert_eq!(parsed["n_sources"], 2);
}

#[test]
fn relaxed_quota_mode_is_reachable_from_the_flag() {
    // Scenario 4 at 25 channels: strict ORSA leaves N_s − 25 unmatched,
    // relaxed matches everyone through the 100 relays.
    let strict = relay_sim(&[
        "scenario",
        "--id",
        "4",
        "--runs",
        "1",
        "--ns-max",
        "50",
        "--ns-step",
        "50",
        "--channels",
        "25",
        "--algos",
        "orsa",
        "--strict-quota",
    ]);
    assert!(strict.status.success());
    let strict_text = String::from_utf8(strict.stdout).unwrap();
    let relaxed = relay_sim(&[
        "scenario",
        "--id",
        "4",
        "--runs",
        "1",
        "--ns-max",
        "50",
        "--ns-step",
        "50",
        "--channels",
        "25",
        "--algos",
        "orsa",
        "--strict-quota",
        "false",
    ]);
    assert!(relaxed.status.success());
    let relaxed_text = String::from_utf8(relaxed.stdout).unwrap();

    let unmatched_at_50 = |text: &str| -> f64 {
        text.lines()
            .find(|l| l.starts_with("4,ORSA,50,"))
            .and_then(|l| l.rsplit(',').next())
            .unwrap()
            .parse()
            .unwrap()
    };
    assert_eq!(unmatched_at_50(&strict_text), 25.0);
    assert_eq!(unmatched_at_50(&relaxed_text), 0.0);
}

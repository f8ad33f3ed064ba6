use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use serde_json::Value;

fn spec(name: &str) -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR"))
        .join("../../specs")
        .join(name)
}

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_kgraph-ck"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn json(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).unwrap_or_else(|e| {
        panic!(
            "stdout is not JSON ({e}): {}",
            String::from_utf8_lossy(&out.stdout)
        )
    })
}

fn code(out: &Output) -> i32 {
    out.status.code().expect("exit code")
}

#[test]
fn validate_accepts_samples_and_rejects_the_uncovered_square() {
    let out = run(&["validate", "--graph", spec("g1-torus.json").to_str().unwrap()]);
    assert_eq!(code(&out), 0);
    let report = json(&out);
    assert_eq!(report["valid"], Value::Bool(true));
    assert_eq!(report["rank"], 2);

    let out = run(&["validate", "--graph", spec("broken.json").to_str().unwrap()]);
    assert_eq!(code(&out), 2);
    let report = json(&out);
    assert_eq!(report["valid"], Value::Bool(false));
    let witness = report["checks"]
        .as_array()
        .unwrap()
        .iter()
        .find(|c| c["name"] == "squares-bijective")
        .unwrap();
    assert_eq!(witness["passed"], Value::Bool(false));
    assert!(witness["details"].as_str().unwrap().contains("(a2, b)"));
}

#[test]
fn missing_and_malformed_files_exit_one_with_a_diagnostic() {
    let out = run(&["validate", "--graph", spec("no-such-file.json").to_str().unwrap()]);
    assert_eq!(code(&out), 1);
    assert!(String::from_utf8_lossy(&out.stderr).contains("no-such-file.json"));

    let mut file = tempfile::NamedTempFile::new().unwrap();
    write!(file, "{{\"rank\": 2,").unwrap();
    let out = run(&["validate", "--graph", file.path().to_str().unwrap()]);
    assert_eq!(code(&out), 1);
    let err = String::from_utf8_lossy(&out.stderr).to_string();
    assert!(err.contains("line"), "{err}");
}

#[test]
fn per_matches_the_documented_example() {
    let out = run(&["per", "--graph", spec("g3-cycle.json").to_str().unwrap(), "--depth", "4"]);
    assert_eq!(code(&out), 0);
    let report = json(&out);
    assert_eq!(report["per_basis"], serde_json::json!([[3]]));
    assert_eq!(report["aperiodic"], "no");
    assert_eq!(report["cofinal"], Value::Bool(true));
    assert_eq!(report["depth"], 4);
}

#[test]
fn shallow_scans_exit_three() {
    let out = run(&[
        "per",
        "--graph",
        spec("torus-double-cover.json").to_str().unwrap(),
        "--depth",
        "1",
    ]);
    assert_eq!(code(&out), 3);
    assert_eq!(json(&out)["aperiodic"], "unknown");
}

#[test]
fn simplicity_verdicts_and_exit_codes() {
    let g1 = spec("g1-torus.json");
    let out = run(&[
        "simple",
        "--graph",
        g1.to_str().unwrap(),
        "--cocycle",
        spec("theta-half.json").to_str().unwrap(),
    ]);
    assert_eq!(code(&out), 0);
    let report = json(&out);
    assert_eq!(report["verdict"], "not-simple");
    assert_eq!(report["grounds"], "nc-torus-special-case");

    let out = run(&[
        "simple",
        "--graph",
        g1.to_str().unwrap(),
        "--cocycle",
        spec("theta-golden.json").to_str().unwrap(),
    ]);
    assert_eq!(code(&out), 0);
    assert_eq!(json(&out)["verdict"], "simple");

    let out = run(&[
        "simple",
        "--graph",
        spec("torus-double-cover.json").to_str().unwrap(),
        "--cocycle",
        spec("theta-half.json").to_str().unwrap(),
    ]);
    assert_eq!(code(&out), 3);
    let report = json(&out);
    assert_eq!(report["verdict"], "unknown");
    assert_eq!(report["grounds"], "insufficient-criteria");

    let out = run(&["simple", "--graph", spec("g4-disjoint.json").to_str().unwrap()]);
    assert_eq!(code(&out), 0);
    let report = json(&out);
    assert_eq!(report["verdict"], "not-simple");
    assert_eq!(report["grounds"], "not-cofinal");
}

#[test]
fn reports_are_byte_identical_across_runs() {
    let graph = spec("g1-torus.json");
    let cocycle = spec("theta-golden.json");
    let args = [
        "simple",
        "--graph",
        graph.to_str().unwrap(),
        "--cocycle",
        cocycle.to_str().unwrap(),
        "--seed",
        "0",
    ];
    let first = run(&args);
    let second = run(&args);
    assert_eq!(code(&first), code(&second));
    assert_eq!(first.stdout, second.stdout);
    assert!(!first.stdout.is_empty());
}

#[test]
fn thread_cap_does_not_change_the_report() {
    let graph = spec("g1-torus.json");
    let free = run(&["per", "--graph", graph.to_str().unwrap()]);
    let capped = Command::new(env!("CARGO_BIN_EXE_kgraph-ck"))
        .args(["per", "--graph", graph.to_str().unwrap()])
        .env("KGRAPH_CK_THREADS", "1")
        .output()
        .expect("binary runs");
    assert_eq!(code(&free), 0);
    assert_eq!(code(&capped), 0);
    assert_eq!(free.stdout, capped.stdout);
}

#[test]
fn mce_lists_the_common_extension() {
    let out = run(&["mce", "a.b", "b", "--graph", spec("g1-torus.json").to_str().unwrap()]);
    assert_eq!(code(&out), 0);
    let report = json(&out);
    assert_eq!(report["mce"], serde_json::json!(["a.b"]));

    let out = run(&["mce", "@v", "e", "--graph", spec("g2-loops.json").to_str().unwrap()]);
    assert_eq!(code(&out), 0);
    assert_eq!(json(&out)["mce"], serde_json::json!(["e"]));
}

#[test]
fn satiate_closes_the_loop_family() {
    let out = run(&[
        "satiate",
        "--graph",
        spec("g2-loops.json").to_str().unwrap(),
        "--ee",
        spec("ee-g2-loops.json").to_str().unwrap(),
        "--depth",
        "2",
    ]);
    assert_eq!(code(&out), 0);
    let report = json(&out);
    assert_eq!(report["depth"], serde_json::json!([2]));
    let sets = report["families"][0]["sets"].as_array().unwrap();
    assert!(sets.contains(&serde_json::json!(["e", "f"])));
    assert!(sets.contains(&serde_json::json!(["f", "e.e", "e.f"])));
}

#[test]
fn ideals_distinguish_exact_and_bounded_listings() {
    let out = run(&["ideals", "--graph", spec("g4-disjoint.json").to_str().unwrap()]);
    assert_eq!(code(&out), 0);
    let report = json(&out);
    assert_eq!(report["ideals"].as_array().unwrap().len(), 4);
    assert_eq!(report["hasse"].as_array().unwrap().len(), 4);
    assert!(report["ideals"]
        .as_array()
        .unwrap()
        .iter()
        .all(|i| i["exactness"] == "exact"));

    let mut empty = tempfile::NamedTempFile::new().unwrap();
    write!(empty, "[]").unwrap();
    let out = run(&[
        "ideals",
        "--graph",
        spec("g2-loops.json").to_str().unwrap(),
        "--ee",
        empty.path().to_str().unwrap(),
        "--depth",
        "1",
    ]);
    assert_eq!(code(&out), 3);
    let report = json(&out);
    assert!(report["ideals"].as_array().unwrap().len() >= 3);
    assert!(report["ideals"]
        .as_array()
        .unwrap()
        .iter()
        .all(|i| i["exactness"] == "bounded"));
}

#[test]
fn delta_produces_certificates_and_flags_inconclusive() {
    let out = run(&["delta", "e", "--graph", spec("g2-loops.json").to_str().unwrap()]);
    assert_eq!(code(&out), 0);
    let report = json(&out);
    assert_eq!(report["verdict"], "nonzero");
    assert_eq!(report["certificate"], "v (f)^inf");

    let out = run(&[
        "delta",
        "e,f",
        "--graph",
        spec("g2-loops.json").to_str().unwrap(),
        "--ee",
        spec("ee-g2-loops.json").to_str().unwrap(),
    ]);
    assert_eq!(code(&out), 0);
    assert_eq!(json(&out)["verdict"], "zero-satiated");
}

#[test]
fn rep_check_reports_small_deviations() {
    let out = run(&[
        "rep-check",
        "--graph",
        spec("g2-loops.json").to_str().unwrap(),
        "--cutoff",
        "4",
        "--margin",
        "1",
    ]);
    assert_eq!(code(&out), 0);
    let report = json(&out);
    assert_eq!(report["cutoff"], serde_json::json!([4]));
    assert_eq!(report["margin"], serde_json::json!([1]));
    assert!(report["max_deviation"].as_f64().unwrap() <= 1e-12);
}

#[test]
fn vm_check_measures_the_commutation_phase() {
    let out = run(&[
        "vm-check",
        "--graph",
        spec("g1-torus.json").to_str().unwrap(),
        "--cocycle",
        spec("theta-third.json").to_str().unwrap(),
        "--m",
        "1,-1",
        "--mp",
        "-1,1",
    ]);
    assert_eq!(code(&out), 0);
    let report = json(&out);
    assert_eq!(report["passed"], Value::Bool(true));
    assert!(report["deviation"].as_f64().unwrap() <= 1e-9);
    let expected = report["expected_phase"].as_array().unwrap();
    let measured = report["measured_phase"].as_array().unwrap();
    for (e, m) in expected.iter().zip(measured) {
        assert!((e.as_f64().unwrap() - m.as_f64().unwrap()).abs() <= 1e-10);
    }
}

#[test]
fn unsupported_cocycle_types_exit_one() {
    let mut file = tempfile::NamedTempFile::new().unwrap();
    write!(file, "{{\"type\":\"table\",\"theta\":[[\"0\",\"0\"],[\"0\",\"0\"]]}}").unwrap();
    let out = run(&[
        "simple",
        "--graph",
        spec("g1-torus.json").to_str().unwrap(),
        "--cocycle",
        file.path().to_str().unwrap(),
    ]);
    assert_eq!(code(&out), 1);
    assert!(String::from_utf8_lossy(&out.stderr).contains("not supported"));
}

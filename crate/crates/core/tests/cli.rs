use std::path::Path;
use std::process::{Command, Output};

use serde_json::Value;

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_disentangle"))
        .args(args)
        .env_remove("REE_SEED")
        .output()
        .expect("binary runs")
}

fn json(out: &Output) -> Value {
    assert!(out.status.success(), "stderr: {}", String::from_utf8_lossy(&out.stderr));
    serde_json::from_slice(&out.stdout).unwrap()
}

fn path(p: &Path) -> &str {
    p.to_str().unwrap()
}

#[test]
fn count_reports_exact_integers() {
    let v = json(&run(&["count", "--n", "5", "--compare-2n"]));
    assert_eq!(v["term_count"], "51");
    assert_eq!(v["bell"], "52");
    assert_eq!(v["two_pow_n"], "32");
    assert_eq!(v["exceeds"], true);
    let v = json(&run(&["count", "--n", "64"]));
    assert!(v["term_count"].as_str().unwrap().ends_with("394"));
}

#[test]
fn validation_errors_exit_with_two() {
    for args in [
        &["count", "--n", "1"][..],
        &["count", "--n", "65"],
        &["enumerate", "--n", "13"],
        &["growth", "--max", "1"],
        &["metrics", "--input", "/nonexistent/file"],
        &["sample", "--term", "000", "--out", "/tmp/unused.json"],
        &["count"],
        &["frobnicate"],
    ] {
        let out = run(args);
        assert_eq!(out.status.code(), Some(2), "{args:?}");
        assert!(!out.stderr.is_empty());
    }
}

#[test]
fn enumerate_and_sentence_agree() {
    let v = json(&run(&["enumerate", "--n", "3"]));
    let terms = v.as_array().unwrap();
    assert_eq!(terms.len(), 4);
    assert_eq!(terms[0]["rgs"], serde_json::json!([0, 0, 1]));

    let out = run(&["sentence", "--n", "2"]);
    assert!(out.status.success());
    assert_eq!(out.stdout, b"p[1]*r(0)xr(1)\n");

    let dir = tempfile::tempdir().unwrap();
    let file = dir.path().join("s3.txt");
    let v = json(&run(&["sentence", "--n", "3", "--metrics", "--out", path(&file)]));
    assert_eq!(v["term_count"], 4);
    let m = json(&run(&["metrics", "--input", path(&file)]));
    assert_eq!(m, v);
    assert_eq!(m["raw_bytes"].as_u64().unwrap(), std::fs::metadata(&file).unwrap().len());
}

#[test]
fn malformed_sentence_is_rejected() {
    let dir = tempfile::tempdir().unwrap();
    let file = dir.path().join("bad.txt");
    std::fs::write(&file, "p[1]*r(1)xr(0)\n").unwrap();
    let out = run(&["metrics", "--input", path(&file)]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn growth_csv_shape() {
    let out = run(&["growth", "--max", "6"]);
    assert!(out.status.success());
    let text = String::from_utf8(out.stdout).unwrap();
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(lines.len(), 6);
    assert!(lines[3].starts_with("4,15,14,16,false"));
    assert!(lines[5].starts_with("6,203,202,64,true"));
}

#[test]
fn separability_commands() {
    let dir = tempfile::tempdir().unwrap();
    let bell = dir.path().join("bell.json");
    assert!(run(&["state", "--kind", "bell", "--out", path(&bell)]).status.success());

    let v = json(&run(&["ppt", "--state", path(&bell), "--cut", "1"]));
    assert_eq!(v["verdict"], "NPT");
    assert!((v["min_pt_eigenvalue"].as_f64().unwrap() + 0.5).abs() < 1e-9);

    let v = json(&run(&["concurrence", "--state", path(&bell)]));
    assert!((v["concurrence"].as_f64().unwrap() - 1.0).abs() < 1e-9);
    assert_eq!(v["entangled"], true);

    assert_eq!(run(&["ppt", "--state", path(&bell), "--cut", "0,1"]).status.code(), Some(2));
    assert_eq!(run(&["classify", "--state", path(&bell)]).status.code(), Some(2));

    let ghz = dir.path().join("ghz.json");
    assert!(run(&["state", "--kind", "ghz", "--n", "3", "--out", path(&ghz)]).status.success());
    let v = json(&run(&["classify", "--state", path(&ghz)]));
    assert!(v.as_array().unwrap().iter().all(|c| c["verdict"] == "NPT"));
}

#[test]
fn invalid_state_files_exit_with_two() {
    let dir = tempfile::tempdir().unwrap();
    let cases = [
        ("missing.json", r#"{"dims":[2],"re":[[1,0],[0,0]]}"#),
        ("trace.json", r#"{"dims":[2],"re":[[1,0],[0,1]],"im":[[0,0],[0,0]]}"#),
        ("herm.json", r#"{"dims":[2],"re":[[0.5,0.1],[0,0.5]],"im":[[0,0],[0,0]]}"#),
        ("psd.json", r#"{"dims":[2],"re":[[1.5,0],[0,-0.5]],"im":[[0,0],[0,0]]}"#),
        ("dims.json", r#"{"dims":[3],"re":[[0.5,0],[0,0.5]],"im":[[0,0],[0,0]]}"#),
        ("text.json", "not json"),
    ];
    for (name, body) in cases {
        let f = dir.path().join(name);
        std::fs::write(&f, body).unwrap();
        let out = run(&["ppt", "--state", path(&f), "--cut", "0"]);
        assert_eq!(out.status.code(), Some(2), "{name}");
    }
}

#[test]
fn seeded_commands_are_byte_identical() {
    let dir = tempfile::tempdir().unwrap();
    let mut outputs = Vec::new();
    for k in 0..2 {
        let state = dir.path().join(format!("s{k}.json"));
        let ens = dir.path().join(format!("e{k}.json"));
        let out = run(&[
            "sample", "--term", "0,1,1", "--components", "3", "--seed", "42",
            "--out", path(&state), "--ensemble-out", path(&ens),
        ]);
        assert!(out.status.success());
        outputs.push((std::fs::read(&state).unwrap(), std::fs::read(&ens).unwrap()));
    }
    assert_eq!(outputs[0], outputs[1]);

    let w = dir.path().join("w.json");
    assert!(run(&["state", "--kind", "werner", "--p", "0.9", "--out", path(&w)]).status.success());
    let args = ["ree", "--state", path(&w), "--max-iters", "30", "--seed", "5"];
    let (a, b) = (run(&args), run(&args));
    assert!(a.status.success());
    assert_eq!(a.stdout, b.stdout);

    let env_run = Command::new(env!("CARGO_BIN_EXE_disentangle"))
        .args(["ree", "--state", path(&w), "--max-iters", "30"])
        .env("REE_SEED", "5")
        .output()
        .unwrap();
    assert_eq!(env_run.stdout, a.stdout);
}

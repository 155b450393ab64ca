//! End-to-end tests of the `snet` binary.

use std::fs;
use std::path::{Path, PathBuf};
use std::process::{Command, Output};

fn snet(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_snet"))
        .args(args)
        .env("RUST_LOG", "warn")
        .output()
        .expect("binary runs")
}

fn fixture(name: &str) -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR"))
        .join("tests/fixtures")
        .join(name)
}

fn s(p: &Path) -> &str {
    p.to_str().unwrap()
}

fn ok(out: &Output) {
    assert!(
        out.status.success(),
        "exit {:?}\nstdout: {}\nstderr: {}",
        out.status.code(),
        String::from_utf8_lossy(&out.stdout),
        String::from_utf8_lossy(&out.stderr)
    );
}

#[test]
fn ingest_fixture_to_jsonl() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("train.jsonl");
    let run = snet(&[
        "ingest",
        "--input",
        s(&fixture("agnews10.csv")),
        "--output",
        s(&out),
    ]);
    ok(&run);
    let text = fs::read_to_string(&out).unwrap();
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(lines.len(), 10);
    assert!(
        lines[0].starts_with(r#"{"label":2,"text":"Wall St. Bears"#),
        "{}",
        lines[0]
    );

    let manifest: serde_json::Value = serde_json::from_str(
        &fs::read_to_string(dir.path().join("train.jsonl.manifest.json")).unwrap(),
    )
    .unwrap();
    assert_eq!(manifest["command"], "ingest");
    assert_eq!(
        manifest["artifacts"][0]["sha256"].as_str().unwrap().len(),
        64
    );
    assert_eq!(manifest["inputs"].as_array().unwrap().len(), 1);

    let again = dir.path().join("again.jsonl");
    ok(&snet(&[
        "ingest",
        "--input",
        s(&fixture("agnews10.csv")),
        "--output",
        s(&again),
    ]));
    assert_eq!(fs::read(&out).unwrap(), fs::read(&again).unwrap());
}

#[test]
fn malformed_row_reports_row_number() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("bad.jsonl");
    let run = snet(&[
        "ingest",
        "--input",
        s(&fixture("malformed.csv")),
        "--output",
        s(&out),
    ]);
    assert_eq!(run.status.code(), Some(2));
    let err = String::from_utf8_lossy(&run.stderr);
    assert!(err.contains("row 3"), "{err}");
}

#[test]
fn usage_errors_exit_with_one() {
    assert_eq!(snet(&["ingest", "--bogus"]).status.code(), Some(1));
    assert_eq!(snet(&["no-such-command"]).status.code(), Some(1));
    assert_eq!(
        snet(&["rollback", "--model", "x.snet", "--text", "a", "--k", "0"])
            .status
            .code(),
        Some(2)
    );
    let help = snet(&["reproduce", "--help"]);
    ok(&help);
    let text = String::from_utf8_lossy(&help.stdout);
    for flag in [
        "--config", "--out", "--scale", "--seed", "--jobs", "--mode", "--train", "--test",
        "--lambda",
    ] {
        assert!(text.contains(flag), "missing {flag} in help");
    }
}

#[test]
fn train_featurize_fit_evaluate_pipeline() {
    let dir = tempfile::tempdir().unwrap();
    let p = |name: &str| dir.path().join(name);
    let data = fixture("agnews10.csv");

    ok(&snet(&[
        "train",
        "--input",
        s(&data),
        "--output",
        s(&p("m.snet")),
        "--m",
        "8",
        "--n",
        "16",
        "--seed",
        "3",
        "--telemetry",
        s(&p("tel.csv")),
        "--telemetry-window",
        "50",
    ]));
    assert!(p("m.snet.meta.toml").exists());
    assert!(fs::read_to_string(p("tel.csv"))
        .unwrap()
        .starts_with("step,state_err,input_err,density\n"));

    ok(&snet(&[
        "featurize",
        "--input",
        s(&data),
        "--model",
        s(&p("m.snet")),
        "--output",
        s(&p("f.snfm")),
        "--csv",
        s(&p("f.csv")),
    ]));
    let csv = fs::read_to_string(p("f.csv")).unwrap();
    assert_eq!(csv.lines().count(), 11);
    assert!(csv.starts_with("label,f0,"));

    ok(&snet(&[
        "fit",
        "--features",
        s(&p("f.snfm")),
        "--lambda",
        "0.1",
        "--output",
        s(&p("c.snrc")),
    ]));
    ok(&snet(&[
        "evaluate",
        "--classifier",
        s(&p("c.snrc")),
        "--features",
        s(&p("f.snfm")),
        "--output",
        s(&p("eval.json")),
    ]));
    let eval: serde_json::Value =
        serde_json::from_str(&fs::read_to_string(p("eval.json")).unwrap()).unwrap();
    assert_eq!(eval["rows"], 10);
    for name in ["m.snet", "f.snfm", "c.snrc", "eval.json"] {
        assert!(
            p(&format!("{name}.manifest.json")).exists(),
            "{name} manifest"
        );
    }

    // Same flags, same bytes.
    ok(&snet(&[
        "train",
        "--input",
        s(&data),
        "--output",
        s(&p("m2.snet")),
        "--m",
        "8",
        "--n",
        "16",
        "--seed",
        "3",
    ]));
    assert_eq!(
        fs::read(p("m.snet")).unwrap(),
        fs::read(p("m2.snet")).unwrap()
    );

    ok(&snet(&[
        "featurize",
        "--input",
        s(&data),
        "--baseline",
        "--output",
        s(&p("b.snfm")),
    ]));
    ok(&snet(&[
        "rollback",
        "--model",
        s(&p("m.snet")),
        "--text",
        "Oil prices",
        "--k",
        "3",
        "--output",
        s(&p("trace.txt")),
    ]));
    let trace = fs::read_to_string(p("trace.txt")).unwrap();
    assert_eq!(trace.lines().count(), 5, "{trace}");
}

#[test]
fn rollback_on_zero_model() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("zero.snet");
    let params = snet_core::ModelParams::zeros(8, 16).unwrap();
    snet_core::model_file::save(&path, &params, None).unwrap();
    let run = snet(&[
        "rollback",
        "--model",
        s(&path),
        "--state",
        "1010101010101010",
        "--k",
        "3",
    ]);
    ok(&run);
    let text = String::from_utf8_lossy(&run.stdout);
    let rows: Vec<&str> = text.lines().skip(2).take(3).collect();
    assert_eq!(rows.len(), 3);
    for row in rows {
        assert!(row.ends_with("{}"), "{row}");
    }
}

#[test]
fn micro_reproduce_is_deterministic() {
    let dir = tempfile::tempdir().unwrap();
    let a = dir.path().join("a");
    let b = dir.path().join("b");
    for out in [&a, &b] {
        ok(&snet(&[
            "reproduce",
            "--scale",
            "micro",
            "--seed",
            "7",
            "--out",
            s(out),
        ]));
    }
    for name in [
        "results.csv",
        "results.json",
        "config.toml",
        "trial-1/model.snet",
        "trial-5/telemetry.csv",
    ] {
        assert_eq!(
            fs::read(a.join(name)).unwrap(),
            fs::read(b.join(name)).unwrap(),
            "{name}"
        );
    }
    let manifest: serde_json::Value =
        serde_json::from_str(&fs::read_to_string(a.join("manifest.json")).unwrap()).unwrap();
    // 5 x (model, sidecar, telemetry) + 3 reports.
    assert_eq!(manifest["artifacts"].as_array().unwrap().len(), 18);
    let csv = fs::read_to_string(a.join("results.csv")).unwrap();
    assert_eq!(csv.lines().count(), 7);
}

#[test]
fn config_file_and_flags_merge() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("run.toml");
    fs::write(&cfg, "m = 8\nn = 12\nunsup_samples = 4\nsup_samples = 8\ntrials = 2\nsynthetic_test = 12\nlambda = 0.5\nmode = \"model\"\n").unwrap();
    let out = dir.path().join("out");
    ok(&snet(&[
        "reproduce",
        "--config",
        s(&cfg),
        "--trials",
        "1",
        "--out",
        s(&out),
    ]));
    let snapshot = fs::read_to_string(out.join("config.toml")).unwrap();
    assert!(snapshot.contains("trials = 1"), "{snapshot}");
    assert!(snapshot.contains("n = 12"), "{snapshot}");
    let csv = fs::read_to_string(out.join("results.csv")).unwrap();
    assert!(csv.lines().nth(1).unwrap().ends_with(','), "{csv}");

    fs::write(&cfg, "bogus_key = 1\n").unwrap();
    let run = snet(&["reproduce", "--config", s(&cfg), "--out", s(&out)]);
    assert_eq!(run.status.code(), Some(1));
}

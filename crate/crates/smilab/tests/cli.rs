use std::path::Path;
use std::process::Command;

use smilab::report::{COUNTEREXAMPLE_HEADER, TAIL_HEADER};
use smilab::{parse_config, run, Parallel, Verdict};
use tempfile::TempDir;

fn smilab(args: &[&str], envs: &[(&str, &str)]) -> std::process::Output {
    let mut cmd = Command::new(env!("CARGO_BIN_EXE_smilab"));
    cmd.args(args).env_remove("SMILAB_WORKERS");
    for (k, v) in envs {
        cmd.env(k, v);
    }
    cmd.output().expect("binary runs")
}

fn write_config(dir: &Path, name: &str, body: &str) -> String {
    let path = dir.join(name);
    std::fs::write(&path, body).unwrap();
    path.to_str().unwrap().to_string()
}

fn theorem_config(out: &Path) -> String {
    format!(
        r#"{{"experiment":"theorem_tail","ensemble":{{"family":"bounded_uniform","K":1.0,"n":8,"shift":{{"kind":"zero"}}}},"trials":2000,"master_seed":7,"output_path":{:?}}}"#,
        out.to_str().unwrap()
    )
}

#[test]
fn run_writes_csv_and_json_and_passes() {
    let tmp = TempDir::new().unwrap();
    let out = tmp.path().join("out");
    let cfg = write_config(tmp.path(), "c.json", &theorem_config(&out));
    let o = smilab(&["run", &cfg], &[]);
    assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stderr));
    let csv = std::fs::read_to_string(out.join("theorem_tail.csv")).unwrap();
    let mut lines = csv.lines();
    assert_eq!(lines.next().unwrap(), TAIL_HEADER.join(","));
    assert_eq!(lines.count(), 7);

    let json: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(out.join("theorem_tail.json")).unwrap()).unwrap();
    assert_eq!(json["verdict"], "PASS");
    let keys: Vec<&str> = json.as_object().unwrap().keys().map(String::as_str).collect();
    let mut expected = vec!["config", "payload", "wall_time", "excluded_draws", "verdict"];
    expected.sort_unstable();
    assert_eq!(keys, expected);
    let echo = serde_json::to_string(&json["config"]).unwrap();
    let original = parse_config(&std::fs::read_to_string(&cfg).unwrap()).unwrap();
    assert_eq!(parse_config(&echo).unwrap(), original);
}

#[test]
fn csv_is_identical_across_worker_counts() {
    let tmp = TempDir::new().unwrap();
    let mut outputs = Vec::new();
    for (workers, env) in [("1", None), ("4", None), ("0", Some("3"))] {
        let out = tmp.path().join(format!("w{workers}"));
        let cfg = write_config(tmp.path(), &format!("c{workers}.json"), &theorem_config(&out));
        let envs: Vec<(&str, &str)> = env.map(|e| ("SMILAB_WORKERS", e)).into_iter().collect();
        let o = smilab(&["run", &cfg, "--workers", workers], &envs);
        assert_eq!(o.status.code(), Some(0));
        outputs.push(std::fs::read(out.join("theorem_tail.csv")).unwrap());
    }
    assert!(outputs.windows(2).all(|w| w[0] == w[1]));
}

#[test]
fn seed_override_changes_output() {
    let tmp = TempDir::new().unwrap();
    let a = tmp.path().join("a");
    let b = tmp.path().join("b");
    let ca = write_config(tmp.path(), "a.json", &theorem_config(&a));
    let cb = write_config(tmp.path(), "b.json", &theorem_config(&b));
    assert_eq!(smilab(&["run", &ca], &[]).status.code(), Some(0));
    assert_eq!(smilab(&["run", &cb, "--seed", "8"], &[]).status.code(), Some(0));
    let json: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(b.join("theorem_tail.json")).unwrap()).unwrap();
    assert_eq!(json["config"]["master_seed"], 8);
    assert_ne!(
        std::fs::read(a.join("theorem_tail.csv")).unwrap(),
        std::fs::read(b.join("theorem_tail.csv")).unwrap()
    );
}

#[test]
fn library_runs_are_worker_independent() {
    let configs = [
        r#"{"experiment":"sst_tail","ensemble":{"family":"ginibre","n":6,"shift":{"kind":"scalar_identity","c":2}},"trials":1000,"master_seed":1}"#,
        r#"{"experiment":"counterexample","ensemble":{"family":"lazy_rademacher","n":6},"d_list":[100,1000,10000],"trials":300,"master_seed":1}"#,
        r#"{"experiment":"entry_tail","ensemble":{"family":"cauchy","K":1,"n":5},"entry":[2,2],"trials":1000,"master_seed":1}"#,
    ];
    for text in configs {
        let config = parse_config(text).unwrap();
        let one = run(&config, &Parallel::new(1).unwrap()).unwrap();
        let many = run(&config, &Parallel::new(5).unwrap()).unwrap();
        assert!(one.csv().is_some());
        assert_eq!(one.csv(), many.csv(), "{text}");
        assert_eq!(one.payload, many.payload);
    }
}

#[test]
fn counterexample_csv_layout() {
    let text = r#"{"experiment":"counterexample","ensemble":{"family":"lazy_rademacher","n":6},"d_list":[100,1000,10000],"trials":200,"master_seed":2}"#;
    let report = run(&parse_config(text).unwrap(), &Parallel::new(2).unwrap()).unwrap();
    let csv = report.csv().unwrap();
    let lines: Vec<&str> = csv.lines().collect();
    assert_eq!(lines[0], COUNTEREXAMPLE_HEADER.join(","));
    assert_eq!(lines.len(), 4);
    assert!(lines[1].starts_with("1.0000000000000000e2,"));
}

#[test]
fn ginibre_below_calibrated_size_is_report_only() {
    let tmp = TempDir::new().unwrap();
    let body = format!(
        r#"{{"experiment":"ginibre_lower","ensemble":{{"family":"ginibre","n":5}},"trials":1000,"master_seed":4,"output_path":{:?}}}"#,
        tmp.path().join("o").to_str().unwrap()
    );
    let cfg = write_config(tmp.path(), "g.json", &body);
    let o = smilab(&["run", &cfg], &[]);
    assert_eq!(o.status.code(), Some(0));
    assert!(String::from_utf8_lossy(&o.stdout).contains("REPORT_ONLY"));
    assert!(!tmp.path().join("o").join("ginibre_lower.csv").exists());
}

#[test]
fn failing_check_exits_one() {
    // For n = 2 the large-norm cluster holds only a third of the draws, so the
    // median does not grow with d and the scaled medians spread by 100x.
    let tmp = TempDir::new().unwrap();
    let body = format!(
        r#"{{"experiment":"counterexample","ensemble":{{"family":"lazy_rademacher","n":2}},"d_list":[100,1000,10000],"trials":400,"master_seed":5,"output_path":{:?}}}"#,
        tmp.path().join("o").to_str().unwrap()
    );
    let cfg = write_config(tmp.path(), "ce.json", &body);
    let o = smilab(&["run", &cfg], &[]);
    assert_eq!(o.status.code(), Some(1), "{}", String::from_utf8_lossy(&o.stdout));
    let report = run(&parse_config(&body).unwrap(), &Parallel::new(1).unwrap()).unwrap();
    assert_eq!(report.verdict, Verdict::Fail);
}

#[test]
fn config_errors_exit_two() {
    let tmp = TempDir::new().unwrap();
    let cases = [
        ("bad.json", "{\"experiment\": \"theorem_tail\",", "line"),
        (
            "missing_n.json",
            r#"{"experiment":"theorem_tail","ensemble":{"family":"bounded_uniform","K":1.0,"shift":{"kind":"zero"}},"master_seed":7}"#,
            "ensemble.n",
        ),
        (
            "no_d.json",
            r#"{"experiment":"counterexample","ensemble":{"family":"lazy_rademacher","n":50},"trials":2000,"master_seed":1}"#,
            "d_list",
        ),
        ("unknown.json", r#"{"experiment":"hagelstein","master_seed":1,"colour":"red"}"#, "colour"),
    ];
    for (name, body, needle) in cases {
        let cfg = write_config(tmp.path(), name, body);
        for sub in ["run", "validate"] {
            let o = smilab(&[sub, &cfg], &[]);
            assert_eq!(o.status.code(), Some(2), "{name} {sub}");
            assert!(String::from_utf8_lossy(&o.stderr).contains(needle), "{name}");
        }
    }
    let good = write_config(tmp.path(), "good.json", &theorem_config(&tmp.path().join("x")));
    let o = smilab(&["run", &good], &[("SMILAB_WORKERS", "lots")]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn io_errors_exit_three() {
    let tmp = TempDir::new().unwrap();
    let missing = tmp.path().join("nope.json");
    assert_eq!(smilab(&["run", missing.to_str().unwrap()], &[]).status.code(), Some(3));

    let blocker = tmp.path().join("file");
    std::fs::write(&blocker, "not a directory").unwrap();
    let cfg = write_config(tmp.path(), "c.json", &theorem_config(&blocker.join("sub")));
    assert_eq!(smilab(&["run", &cfg], &[]).status.code(), Some(3));
}

#[test]
fn validate_prints_normalised_config() {
    let tmp = TempDir::new().unwrap();
    let cfg = write_config(
        tmp.path(),
        "h.json",
        r#"{"experiment":"hagelstein","components":4,"trials":100000,"master_seed":1}"#,
    );
    let o = smilab(&["validate", &cfg, "--workers", "3"], &[]);
    assert_eq!(o.status.code(), Some(0));
    let printed = String::from_utf8(o.stdout).unwrap();
    let config = parse_config(&printed).unwrap();
    assert_eq!(config.workers, Some(3));
    assert_eq!(config.output_path(), "smilab-out");
}

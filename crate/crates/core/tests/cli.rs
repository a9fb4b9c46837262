use std::path::Path;
use std::process::{Command, Output};

fn bcgauge(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_bcgauge"))
        .args(args)
        .env_remove("BCGAUGE_SEED")
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn first_line(o: &Output) -> String {
    stdout(o).lines().next().unwrap_or_default().to_string()
}

fn write(dir: &Path, name: &str, body: &str) -> String {
    let p = dir.join(name);
    std::fs::write(&p, body).unwrap();
    p.to_str().unwrap().to_string()
}

#[test]
fn eval_examples() {
    let o = bcgauge(&["eval", "e1*e2"]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(first_line(&o), "0");

    let o = bcgauge(&["eval", "knorm([3|4])"]);
    assert_eq!(first_line(&o), "3*e1 + 4*e2");

    let o = bcgauge(&["eval", "inv(e1)"]);
    assert_eq!(o.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&o.stderr).contains("null cone"));

    let o = bcgauge(&["eval", "-j^2"]);
    assert_eq!(first_line(&o), "1");

    let o = bcgauge(&["eval", "1 + * 2"]);
    assert_eq!(o.status.code(), Some(64));
    assert!(String::from_utf8_lossy(&o.stderr).contains("at 5"));
}

#[test]
fn eval_json_lists_moduli() {
    let o = bcgauge(&["eval", "1+j", "--format", "json"]);
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v["cartesian"], "1+0i+1j+0k");
    assert_eq!(v["idempotent"], "1-1i|1+1i");
    // Z·Z^dag2 = (1+j)(1-j) = 2 and Z·Z^dag1 = (1+j)^2 = 2j
    assert_eq!(v["moduli"]["i_sq"]["w1"][0], 2.0);
    assert_eq!(v["moduli"]["j_sq"]["w2"][0], 2.0);
    assert!(v["moduli"]["k_sq"].is_object());
}

#[test]
fn gauge_examples() {
    let dir = tempfile::tempdir().unwrap();
    let kball = write(dir.path(), "kball.json", r#"{"kind":"knorm_ball","radius":1}"#);
    let o = bcgauge(&["gauge", &kball, "[3|4]"]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(first_line(&o), "3*e1 + 4*e2");

    let o = bcgauge(&["gauge", &kball, "[3|4]", "--format", "json"]);
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v["closed_form"]["method"], "closed_form");
    assert_eq!(v["bisection"]["tol"], 1e-8);
    assert!(v["diff"]["e1"].as_f64().unwrap() <= 1e-8);
    assert!(v["diff"]["e2"].as_f64().unwrap() <= 1e-8);

    let o = bcgauge(&["gauge", &kball, "0"]);
    assert_eq!(first_line(&o), "0*e1 + 0*e2");

    let pair = write(
        dir.path(),
        "pair.json",
        r#"{"kind":"idempotent_pair","b1":{"kind":"ball","norm":"l2","radius":2},"b2":{"kind":"ball","norm":"l2","radius":0.5}}"#,
    );
    assert_eq!(first_line(&bcgauge(&["gauge", &pair, "1"])), "0.5*e1 + 2*e2");
}

#[test]
fn gauge_errors() {
    let dir = tempfile::tempdir().unwrap();
    let raw = write(dir.path(), "raw.json", r#"{"kind":"raw","name":"cross_sum_lt_2"}"#);
    assert_eq!(bcgauge(&["gauge", &raw, "1"]).status.code(), Some(3));

    let degenerate = write(
        dir.path(),
        "degenerate.json",
        r#"{"kind":"idempotent_pair","b1":{"kind":"ball","norm":"l2","radius":0},"b2":{"kind":"ball","norm":"l2","radius":1}}"#,
    );
    assert_eq!(bcgauge(&["gauge", &degenerate, "1"]).status.code(), Some(64));

    let bad = write(dir.path(), "bad.json", r#"{"kind":"knorm_ball""#);
    assert_eq!(bcgauge(&["gauge", &bad, "1"]).status.code(), Some(64));

    let slab = write(
        dir.path(),
        "slab.json",
        r#"{"kind":"idempotent_pair","b1":{"kind":"modslab","constraints":[{"f":[[1,0],[0,0]],"c":1}]},"b2":{"kind":"ball","norm":"l2","radius":1}}"#,
    );
    assert_eq!(bcgauge(&["gauge", &slab, "1"]).status.code(), Some(5));
}

#[test]
fn metric_examples() {
    let dir = tempfile::tempdir().unwrap();
    let fam = write(dir.path(), "fam.json", r#"{"seminorms":[{"kind":"knorm"}]}"#);
    let o = bcgauge(&["metric", &fam, "1", "0", "-n", "30", "--format", "json"]);
    assert_eq!(o.status.code(), Some(0));
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    let bound = v["tail_bound"].as_f64().unwrap();
    assert_eq!(bound, 2f64.powi(-30));
    for c in ["e1", "e2"] {
        assert!((v["value"][c].as_f64().unwrap() - 0.5).abs() <= bound);
    }

    assert_eq!(first_line(&bcgauge(&["metric", &fam, "2,j", "2,j"])), "0*e1 + 0*e2");
    // |[1|3]|_k = (1, 3), so the limit is 1/2 e1 + 3/4 e2
    assert_eq!(first_line(&bcgauge(&["metric", &fam, "[1|3]", "0"])), "0.5*e1 + 0.75*e2");

    assert_eq!(bcgauge(&["metric", &fam, "1,2", "0"]).status.code(), Some(5));
}

#[test]
fn decompose_vector_and_set() {
    let o = bcgauge(&["decompose", "[1|2],j"]);
    assert_eq!(stdout(&o), "1+0i|2+0i\n0-1i|0+1i\n");

    let dir = tempfile::tempdir().unwrap();
    let kball = write(dir.path(), "kball.json", r#"{"kind":"knorm_ball","radius":{"e1":1,"e2":2},"openness":"open"}"#);
    let o = bcgauge(&["decompose", &kball, "--format", "json"]);
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v["openness"], "open");
    assert_eq!(v["e1"]["radius"], 1.0);
    assert_eq!(v["e2"]["radius"], 2.0);
}

#[test]
fn check_scalar_suite() {
    let o = bcgauge(&["check", "--suite", "scalar", "--seed", "42", "--samples", "2000"]);
    assert_eq!(o.status.code(), Some(0));
    let out = stdout(&o);
    let lines: Vec<serde_json::Value> = out.lines().map(|l| serde_json::from_str(l).unwrap()).collect();
    let (summary, records) = lines.split_last().unwrap();
    assert!(records.len() >= 8);
    for r in records {
        assert_eq!(r["status"], "pass", "{r}");
        assert!(r.get("elapsed_ms").is_some());
    }
    assert_eq!(summary["summary"]["pass"], records.len());
    assert_eq!(summary["summary"]["body_sha256"].as_str().unwrap().len(), 64);
}

#[test]
fn check_sets_suite_reports_counterexamples() {
    let o = bcgauge(&["check", "--suite", "sets", "--samples", "500", "--format", "text"]);
    assert_eq!(o.status.code(), Some(0));
    let out = stdout(&o);
    assert!(out.contains("PASS        sets.cross_sum_lt_2.not_bc_convex"));
    assert!(out.contains(r#""lambda":{"e1":1.0,"e2":0.0}"#));
    assert!(out.contains("sets.kball_half_union_one.absorbing"));
    assert!(out.contains("sets.kball_half_union_one.e1_projection_escapes"));
}

#[test]
fn seed_from_environment() {
    let run = |env: Option<&str>, args: &[&str]| {
        let mut c = Command::new(env!("CARGO_BIN_EXE_bcgauge"));
        c.args(["check", "--only", "gauge.monotone_in_set", "--samples", "300"]).args(args);
        match env {
            Some(s) => c.env("BCGAUGE_SEED", s),
            None => c.env_remove("BCGAUGE_SEED"),
        };
        let out = stdout(&c.output().unwrap());
        let summary: serde_json::Value = serde_json::from_str(out.lines().last().unwrap()).unwrap();
        summary["summary"]["config"]["seed"].as_u64().unwrap()
    };
    assert_eq!(run(Some("99"), &[]), 99);
    assert_eq!(run(Some("99"), &["--seed", "5"]), 5);
    assert_eq!(run(None, &[]), 0);
}

#[test]
fn config_errors_exit_64() {
    assert_eq!(bcgauge(&["check", "--samples", "0"]).status.code(), Some(64));
    assert_eq!(bcgauge(&["check", "--tol", "-1"]).status.code(), Some(64));
    assert_eq!(bcgauge(&["check", "--only", "no.such.check"]).status.code(), Some(64));
    assert_eq!(bcgauge(&["nope"]).status.code(), Some(64));
    assert_eq!(bcgauge(&["--help"]).status.code(), Some(0));
}

#[test]
fn list_checks() {
    let o = bcgauge(&["check", "--list", "--suite", "metric"]);
    let out = stdout(&o);
    assert!(out.lines().all(|l| l.starts_with("metric.")));
    assert!(out.contains("metric.topology_compat"));
}

use std::path::Path;
use std::process::{Command, Output};

use hasse_core::abelian_group::FinAbGroup;
use hasse_core::dirichlet_cft::{enumerate, ExtensionRecord};
use serde_json::Value;

fn hnp(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_hnp"))
        .args(args)
        .env_remove("HNP_CACHE_DIR")
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn json_lines(o: &Output) -> Vec<Value> {
    stdout(o).lines().map(|l| serde_json::from_str(l).unwrap()).collect()
}

#[test]
fn bad_group_is_a_config_error() {
    let o = hnp(&["enumerate", "--group", "C0", "--bound", "1e4"]);
    assert_eq!(o.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&o.stderr).contains("C0"));
    assert_eq!(
        hnp(&["enumerate", "--group", "C2xC2", "--bound", "2.5"]).status.code(),
        Some(1)
    );
    assert_eq!(
        hnp(&["density", "--group", "C2xC2", "--bounds", "1e4", "--i", "1", "--j", "1"])
            .status
            .code(),
        Some(1)
    );
}

#[test]
fn cyclic_density_is_refused() {
    let o = hnp(&["density", "--group", "C4", "--bounds", "1e4"]);
    assert_eq!(o.status.code(), Some(1));
    assert!(o.stdout.is_empty());
}

#[test]
fn enumerate_matches_library() {
    let o = hnp(&["enumerate", "--group", "C2xC2", "--bound", "1e4"]);
    assert!(o.status.success());
    let got: Vec<ExtensionRecord> = stdout(&o).lines().map(|l| serde_json::from_str(l).unwrap()).collect();
    let want: Vec<ExtensionRecord> = enumerate(&FinAbGroup::parse("C2xC2").unwrap(), 10_000)
        .unwrap()
        .iter()
        .map(ExtensionRecord::from_extension)
        .collect();
    assert_eq!(got.len(), 282);
    assert_eq!(got, want);
}

#[test]
fn density_rows() {
    let o = hnp(&["density", "--group", "C2xC2", "--bounds", "1e4,1e5"]);
    assert!(o.status.success());
    let mut r = csv::Reader::from_reader(o.stdout.as_slice());
    assert_eq!(
        r.headers().unwrap(),
        vec![
            "B",
            "total",
            "hnp_fail",
            "wa_hold",
            "lambda_hold",
            "hnp_fail_ratio",
            "wa_hold_ratio",
            "lambda_ratio"
        ]
    );
    let rows: Vec<csv::StringRecord> = r.records().map(Result::unwrap).collect();
    assert_eq!(rows.len(), 2);
    assert_eq!(&rows[0][0], "10000");
    assert_eq!(&rows[0][1], "282");
    for row in &rows {
        for k in 5..8 {
            let v: f64 = row[k].parse().unwrap();
            assert!((0.0..=1.0).contains(&v));
        }
    }
}

#[test]
fn warm_cache_gives_identical_output() {
    let dir = tempfile::tempdir().unwrap();
    let cache = dir.path().join("cache");
    let run = |name: &str| {
        let out = dir.path().join(name);
        let o = hnp(&[
            "enumerate",
            "--group",
            "C2xC4",
            "--bound",
            "1e8",
            "--cache-dir",
            cache.to_str().unwrap(),
            "--out",
            out.to_str().unwrap(),
        ]);
        assert!(o.status.success());
        std::fs::read(out).unwrap()
    };
    let cold = run("cold.jsonl");
    assert_eq!(std::fs::read_dir(&cache).unwrap().count(), 1);
    let warm = run("warm.jsonl");
    assert_eq!(cold, warm);
    assert_eq!(String::from_utf8(cold).unwrap().lines().count(), 48);
}

#[test]
fn output_is_deterministic() {
    let dir = tempfile::tempdir().unwrap();
    let args = |out: &Path| {
        vec![
            "density".to_string(),
            "--group".into(),
            "C2xC2xC2".into(),
            "--bounds".into(),
            "1e6,1e7".into(),
            "--out".into(),
            out.to_str().unwrap().into(),
        ]
    };
    let mut outs = Vec::new();
    for (name, workers) in [("a.csv", "1"), ("b.csv", "4")] {
        let path = dir.path().join(name);
        let mut a = args(&path);
        a.extend(["--workers".into(), workers.into()]);
        let a: Vec<&str> = a.iter().map(String::as_str).collect();
        assert!(hnp(&a).status.success());
        outs.push(std::fs::read(path).unwrap());
    }
    assert_eq!(outs[0], outs[1]);
}

#[test]
fn failed_runs_leave_no_file() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("x.jsonl");
    let o = hnp(&[
        "enumerate",
        "--group",
        "C2xC2",
        "--bound",
        "1e8",
        "--budget",
        "10",
        "--out",
        out.to_str().unwrap(),
    ]);
    assert_eq!(o.status.code(), Some(2));
    assert!(!out.exists());
    assert_eq!(std::fs::read_dir(dir.path()).unwrap().count(), 0);
}

#[test]
fn find_reproduces_counterexample() {
    let o = hnp(&["find", "--group", "C4xC2", "--disc", "10070523904", "--ramified", "2,7"]);
    assert!(o.status.success());
    let hits = json_lines(&o);
    assert!(!hits.is_empty());
    assert!(hits.iter().all(|h| h["discriminant"] == "10070523904"));
    assert!(hits
        .iter()
        .any(|h| h["wa"] == true && h["hnp"] == false && h["noncyclic_places"] == serde_json::json!([7])));
}

#[test]
fn local_check_passes() {
    let o = hnp(&["local-ft-check", "--group", "C2xC4", "--primes", "3..97"]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    let r = &json_lines(&o)[0];
    assert_eq!(r["passed"], true);
    assert_eq!(r["failure_count"], 0);
}

#[test]
fn sampled_check_depends_only_on_seed() {
    let run = |seed: &str| {
        let o = hnp(&[
            "local-ft-check",
            "--group",
            "C3xC3",
            "--primes",
            "5..60",
            "--sample",
            "3",
            "--seed",
            seed,
        ]);
        assert!(o.status.success());
        json_lines(&o)[0]["primes"].clone()
    };
    assert_eq!(run("11"), run("11"));
    assert_eq!(run("11").as_array().unwrap().len(), 3);
}

#[test]
fn poisson_within_tolerance() {
    let o = hnp(&[
        "poisson", "--group", "C2xC4", "--L", "e1,e2^2", "--s", "0.8", "--X", "1e6", "--P", "1e4",
    ]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    let r = &json_lines(&o)[0];
    assert_eq!(r["passed"], true);
    assert!(r["relative"].as_f64().unwrap() < 0.02);
    let o = hnp(&[
        "poisson", "--group", "C2xC4", "--L", "e1,e2^2", "--eta", "5:e2", "--s", "3", "--X", "1e7", "--P", "1e3",
    ]);
    assert!(o.status.success());
    assert!(json_lines(&o)[0]["relative"].as_f64().unwrap() < 1e-6);
    let o = hnp(&[
        "poisson", "--group", "C2xC4", "--eta", "5:e7", "--s", "3", "--X", "1e3", "--P", "1e2",
    ]);
    assert_eq!(o.status.code(), Some(1));
}

#[test]
fn moebius_check_is_exact() {
    for (g, l) in [("C2xC2", "e1"), ("C2xC4", "e1,e2^2")] {
        let o = hnp(&["moebius-check", "--group", g, "--L", l, "--bound", "1e4"]);
        assert!(o.status.success());
        let r = &json_lines(&o)[0];
        assert_eq!(r["passed"], true);
        assert_eq!(r["lhs"].as_i64(), r["rhs"].as_i64());
    }
}

#[test]
fn tauber_stability_gate() {
    let o = hnp(&["tauber", "--group", "C2xC2", "--bounds", "1e5,1e6,1e7,1e8"]);
    assert!(o.status.success());
    let mut r = csv::Reader::from_reader(o.stdout.as_slice());
    let counts: Vec<String> = r.records().map(|x| x.unwrap()[1].to_string()).collect();
    assert_eq!(counts, ["2044", "7906", "31015", "118333"]);
    let o = hnp(&[
        "tauber",
        "--group",
        "C2xC2",
        "--bounds",
        "1e2,1e3,1e4",
        "--max-stability",
        "0.01",
    ]);
    assert_eq!(o.status.code(), Some(3));
    assert!(!o.stdout.is_empty());
}

#[test]
fn group_info_fields() {
    let o = hnp(&["group-info", "--group", "C4xC2"]);
    assert!(o.status.success());
    let r = &json_lines(&o)[0];
    assert_eq!(r["group"], "C2xC4");
    assert_eq!(r["wedge_square"], "C2");
    assert_eq!(r["subgroups"], 8);
    assert_eq!(r["w1"].as_array().unwrap().len(), 1);
    assert_eq!(r["w2"].as_array().unwrap().len(), 1);
    let o = hnp(&["group-info", "--group", "C4"]);
    assert!(o.status.success());
    assert_eq!(json_lines(&o)[0]["noncyclic_sylow"], false);
}

#[test]
fn help_lists_subcommands() {
    let o = hnp(&["--help"]);
    assert!(o.status.success());
    let text = stdout(&o);
    for cmd in [
        "enumerate",
        "density",
        "find",
        "local-ft-check",
        "poisson",
        "tauber",
        "moebius-check",
        "group-info",
    ] {
        assert!(text.contains(cmd), "{cmd}");
    }
}

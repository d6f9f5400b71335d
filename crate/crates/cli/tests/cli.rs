use std::fs;
use std::path::Path;

use hodgeset::run;
use serde_json::Value;

fn go(args: &[&str]) -> i32 {
    run(std::iter::once("hodgeset").chain(args.iter().copied()))
}

fn read(dir: &Path, name: &str) -> String {
    fs::read_to_string(dir.join(name)).unwrap()
}

#[test]
fn reduce_integer_translation() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().to_str().unwrap();
    assert_eq!(go(&["reduce", "--z", "5,1", "--out", out]), 0);
    let v: Value = serde_json::from_str(&read(dir.path(), "reduce.json")).unwrap();
    assert_eq!(v["z0"][0].as_f64(), Some(0.0));
    assert_eq!(v["z0"][1].as_f64(), Some(1.0));
    assert_eq!(v["gamma"], serde_json::json!([[1, -5], [0, 1]]));
}

#[test]
fn usage_errors_exit_two() {
    assert_eq!(go(&["frobnicate"]), 2);
    assert_eq!(go(&["reduce", "--z", "1"]), 2);
    assert_eq!(go(&["reduce", "--z", "0,-1"]), 2);
    assert_eq!(go(&["decay", "--family", "quartic"]), 2);
    assert_eq!(go(&["reduce", "--z", "0,2", "--tolerance", "2"]), 2);
    assert_eq!(go(&["verify", "--suite", "fast"]), 2);
}

#[test]
fn exact_suite_passes_and_reports_every_criterion() {
    let dir = tempfile::tempdir().unwrap();
    assert_eq!(go(&["verify", "--suite", "exact", "--out", dir.path().to_str().unwrap()]), 0);
    let v: Value = serde_json::from_str(&read(dir.path(), "report.json")).unwrap();
    let checks = v["checks"].as_array().unwrap();
    assert_eq!(checks.len(), 11);
    let mut ids: Vec<u64> = checks.iter().map(|c| c["id"].as_u64().unwrap()).collect();
    ids.dedup();
    assert_eq!(ids, (1..=11).collect::<Vec<_>>());
    assert_eq!(v["passed"], 6);
    assert_eq!(v["skipped"], 5);
}

#[test]
fn same_seed_gives_identical_files() {
    let (a, b) = (tempfile::tempdir().unwrap(), tempfile::tempdir().unwrap());
    for d in [&a, &b] {
        let out = d.path().to_str().unwrap();
        assert_eq!(go(&["decay", "--samples", "60", "--seed", "9", "--format", "csv", "--out", out]), 0);
        assert_eq!(go(&["hodge-locus", "--grid", "24", "--generic", "40", "--seed", "9", "--out", out]), 0);
    }
    for f in ["decay.csv", "hodge-locus.json"] {
        assert_eq!(read(a.path(), f), read(b.path(), f));
    }
    let csv = read(a.path(), "decay.csv");
    assert!(csv.starts_with("y,distance,fit\n"));
    assert_eq!(csv.lines().count(), 61);
}

#[test]
fn filtration_and_polarization_from_files() {
    let dir = tempfile::tempdir().unwrap();
    let p = dir.path();
    fs::write(p.join("n.json"), r#"{"rows":2,"cols":2,"entries":[["0","2"],["0","0"]]}"#).unwrap();
    fs::write(p.join("q.json"), r#"{"rows":2,"cols":2,"entries":[["0","-1"],["1","0"]]}"#).unwrap();
    fs::write(p.join("mq.json"), r#"{"rows":2,"cols":2,"entries":[["0","1"],["-1","0"]]}"#).unwrap();
    let mhs = r#"{"w":{"dim":2,"direction":"inc","steps":[{"weight":0,"basis":[["1","0"]]},{"weight":2,"basis":[["1","0"],["0","1"]]}]},
                  "f":{"dim":2,"direction":"dec","steps":[{"weight":0,"basis":[["1","0"],["0","1"]]},{"weight":1,"basis":[["0","1"]]}]}}"#;
    fs::write(p.join("m.json"), mhs).unwrap();
    let s = |name: &str| p.join(name).to_str().unwrap().to_string();
    let out = p.join("out");
    let out = out.to_str().unwrap();
    assert_eq!(go(&["wfilt", "--matrix", &s("n.json"), "--center", "1", "--format", "csv", "--out", out]), 0);
    assert_eq!(read(Path::new(out), "wfilt.csv"), "weight,dim,graded_dim\n0,1,1\n1,1,0\n2,2,1\n");
    assert_eq!(go(&["split", "--mhs", &s("m.json"), "--out", out]), 0);
    let v: Value = serde_json::from_str(&read(Path::new(out), "split.json")).unwrap();
    assert_eq!(v["r_split"], true);
    let pol = ["polarize-check", "--mhs", &s("m.json"), "--n", &s("n.json"), "--k", "1", "--out", out];
    assert_eq!(go(&[&pol[..], &["--q", &s("q.json")]].concat()), 0);
    assert_eq!(go(&[&pol[..], &["--q", &s("mq.json")]].concat()), 1);
    assert_eq!(go(&["wfilt", "--matrix", &s("missing.json")]), 2);
}

#[test]
fn reduction_commands() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().to_str().unwrap();
    assert_eq!(go(&["hecke", "--g", "1,0,0,5", "--format", "csv", "--out", out]), 0);
    assert_eq!(read(dir.path(), "hecke.csv").lines().count(), 7);
    assert_eq!(go(&["enumerate", "--t", "1.1", "--format", "csv", "--out", out]), 0);
    assert_eq!(read(dir.path(), "enumerate.csv").lines().count(), 7);
    assert_eq!(go(&["siegel", "--check", "--samples", "300", "--out", out]), 0);
    assert_eq!(go(&["siegel", "--t", "1.5", "--check", "--samples", "300", "--out", out]), 1);
    assert_eq!(go(&["siegel", "--z", "0.2,0.9", "--out", out]), 0);
    let v: Value = serde_json::from_str(&read(dir.path(), "siegel.json")).unwrap();
    assert_eq!(v["member"], true);
}

#[test]
fn period_commands() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().to_str().unwrap();
    assert_eq!(go(&["orbit", "--family", "product", "--z", "0.1,3;-0.2,4", "--out", out]), 0);
    assert_eq!(go(&["orbit", "--z", "0.1,3;0.2,4"]), 2);
    assert_eq!(go(&["contain", "--family", "legendre", "--grid", "12", "--format", "csv", "--out", out]), 0);
    assert_eq!(read(dir.path(), "contain.csv").lines().count(), 2);
    assert_eq!(go(&["contain", "--eta", "0.3", "--grid", "5"]), 1);
}

use std::fs;
use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use serde_json::{json, Value};
use tempfile::TempDir;

fn fcpc(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_fcpc")).args(args).output().unwrap()
}

fn code(o: &Output) -> i32 {
    o.status.code().unwrap()
}

fn stdout_json(o: &Output) -> Value {
    serde_json::from_slice(&o.stdout).unwrap_or_else(|e| panic!("{e}: {}", String::from_utf8_lossy(&o.stdout)))
}

fn write(dir: &Path, name: &str, v: &Value) -> PathBuf {
    let p = dir.join(name);
    fs::write(&p, serde_json::to_string(v).unwrap()).unwrap();
    p
}

fn s(p: &Path) -> &str {
    p.to_str().unwrap()
}

fn statuses(v: &Value) -> Vec<(String, String)> {
    v["cases"]
        .as_array()
        .unwrap()
        .iter()
        .map(|c| (c["id"].as_str().unwrap().to_string(), c["status"].as_str().unwrap().to_string()))
        .collect()
}

#[test]
fn every_case_passes_on_shipped_goldens() {
    let o = fcpc(&["example", "--all"]);
    assert_eq!(code(&o), 0, "{}", String::from_utf8_lossy(&o.stdout));
    let v = stdout_json(&o);
    let st = statuses(&v);
    assert_eq!(st.len(), 9);
    assert!(st.iter().all(|(_, s)| s == "PASS"), "{st:?}");
}

#[test]
fn single_case_reports_length_and_witness() {
    let o = fcpc(&["example", "ex10-weight"]);
    assert_eq!(code(&o), 0);
    let v = stdout_json(&o);
    let case = &v["cases"][0];
    assert_eq!(case["status"], "PASS");
    assert_eq!(case["values"]["r_min"], 4);
    assert_eq!(case["values"]["witness"].as_array().unwrap().len(), 4);
}

#[test]
fn corrupted_golden_fails_naming_the_case() {
    let dir = TempDir::new().unwrap();
    let src = Path::new(env!("CARGO_MANIFEST_DIR")).join("goldens");
    for e in fs::read_dir(&src).unwrap() {
        let e = e.unwrap();
        fs::copy(e.path(), dir.path().join(e.file_name())).unwrap();
    }
    let path = dir.path().join("ex10-support.json");
    let mut g: Value = serde_json::from_str(&fs::read_to_string(&path).unwrap()).unwrap();
    g["expected"]["r_min"]["value"] = json!(6);
    fs::write(&path, g.to_string()).unwrap();
    let o = fcpc(&["example", "--all", "--goldens", s(dir.path())]);
    assert_eq!(code(&o), 1);
    let v = stdout_json(&o);
    let failed: Vec<_> = statuses(&v).into_iter().filter(|(_, s)| s != "PASS").collect();
    assert_eq!(failed, vec![("ex10-support".to_string(), "FAIL".to_string())]);
    let case = v["cases"].as_array().unwrap().iter().find(|c| c["id"] == "ex10-support").unwrap();
    assert_eq!(case["mismatches"][0]["key"], "r_min");
}

#[test]
fn golden_without_source_is_rejected() {
    let dir = TempDir::new().unwrap();
    write(dir.path(), "ex4.json", &json!({"id": "ex4", "expected": {"gains": {"value": ["1/2", "1/6"]}}}));
    let o = fcpc(&["example", "ex4", "--goldens", s(dir.path())]);
    assert_eq!(code(&o), 1);
    assert_eq!(stdout_json(&o)["cases"][0]["status"], "FAIL");
}

#[test]
fn zero_budget_exceeds_everywhere() {
    let o = fcpc(&["--budget", "0", "example", "--all"]);
    assert_eq!(code(&o), 2);
    let st = statuses(&stdout_json(&o));
    assert!(st.iter().all(|(_, s)| s == "BUDGET-EXCEEDED"), "{st:?}");
}

#[test]
fn join_of_interval_partitions() {
    let dir = TempDir::new().unwrap();
    let a = write(dir.path(), "d6.json", &json!({"q": 2, "k": 35, "kind": "hwdf", "T": 6}));
    let b = write(dir.path(), "d9.json", &json!({"q": 2, "k": 35, "kind": "hwdf", "T": 9}));
    let o = fcpc(&["join", "--a", s(&a), "--b", s(&b)]);
    assert_eq!(code(&o), 0);
    let v = stdout_json(&o);
    assert_eq!(v["kind"], "grouped-weight");
    let firsts: Vec<u64> = v["groups"].as_array().unwrap().iter().map(|g| g[0].as_u64().unwrap()).collect();
    assert_eq!(firsts, vec![0, 6, 9, 12, 18, 24, 27, 30]);
    // the join of explicit forms agrees on a small instance
    let a = write(dir.path(), "a.json", &json!({"q": 2, "k": 6, "kind": "hwdf", "T": 2}));
    let b = write(dir.path(), "b.json", &json!({"q": 2, "k": 6, "kind": "hwdf", "T": 3}));
    let grouped = stdout_json(&fcpc(&["join", "--a", s(&a), "--b", s(&b)]));
    let ea = write(dir.path(), "ea.json", &stdout_json(&fcpc(&["partition", "--partition", s(&a), "--explicit"])));
    let explicit = stdout_json(&fcpc(&["join", "--a", s(&ea), "--b", s(&b)]));
    let g = write(dir.path(), "g.json", &grouped);
    assert_eq!(stdout_json(&fcpc(&["partition", "--partition", s(&g), "--explicit"])), explicit);
}

#[test]
fn zero_matrix_needs_no_redundancy() {
    let dir = TempDir::new().unwrap();
    let m = write(dir.path(), "zero4.json", &json!({"n": 4, "entries": vec![vec![0; 4]; 4]}));
    let o = fcpc(&["dcode", "--matrix", s(&m)]);
    assert_eq!(code(&o), 0);
    let v = stdout_json(&o);
    assert_eq!(v["r_min"], 0);
    assert_eq!(v["status"], "exact");
}

#[test]
fn exit_codes() {
    assert_eq!(code(&fcpc(&["--help"])), 0);
    assert_eq!(code(&fcpc(&["--version"])), 0);
    assert_eq!(code(&fcpc(&[])), 64);
    assert_eq!(code(&fcpc(&["frobnicate"])), 64);
    assert_eq!(code(&fcpc(&["pdm", "--t", "1"])), 64);
    assert_eq!(code(&fcpc(&["example", "nope"])), 64);
    assert_eq!(code(&fcpc(&["partition", "--kind", "support", "--q", "6", "--k", "2"])), 1);
    let dir = TempDir::new().unwrap();
    let m = write(dir.path(), "m.json", &json!({"n": 3, "entries": [[0, 5, 5], [5, 0, 5], [5, 5, 0]]}));
    let o = fcpc(&["--budget", "0", "dcode", "--matrix", s(&m)]);
    assert_eq!(code(&o), 2);
    assert_eq!(stdout_json(&o)["status"], "budget-exceeded");
    let o = fcpc(&["--budget", "0", "encode", "--kind", "support", "--q", "3", "--k", "3", "--t", "2"]);
    assert_eq!(code(&o), 2);
}

#[test]
fn explicit_cap_from_environment() {
    let run = |cap: &str| {
        Command::new(env!("CARGO_BIN_EXE_fcpc"))
            .args(["partition", "--kind", "support", "--q", "2", "--k", "8"])
            .env("FCPC_CAP", cap)
            .output()
            .unwrap()
    };
    assert_eq!(code(&run("100")), 1);
    assert_eq!(code(&run("256")), 0);
    assert_eq!(code(&run("zero")), 64);
}

#[test]
fn partition_json_round_trips() {
    let dir = TempDir::new().unwrap();
    for v in [
        json!({"q": 2, "k": 4, "kind": "linear", "matrices": [[[1, 1, 1, 0], [0, 1, 1, 0]]]}),
        json!({"q": 3, "k": 3, "kind": "coordinate", "J": [2, 3]}),
        json!({"q": 4, "k": 2, "kind": "support"}),
        json!({"q": 2, "k": 5, "kind": "coset", "basis": [[1, 1, 1, 0, 0], [0, 0, 0, 1, 0], [0, 0, 0, 0, 1]]}),
        json!({"q": 2, "k": 20, "kind": "grouped-weight", "groups": [[0, 2], [1], [3, 4, 5, 6, 7, 8, 9, 10, 11, 12, 13, 14, 15, 16, 17, 18, 19, 20]]}),
    ] {
        let first = stdout_json(&fcpc(&["partition", "--partition", s(&write(dir.path(), "p.json", &v))]));
        let again = stdout_json(&fcpc(&["partition", "--partition", s(&write(dir.path(), "q.json", &first))]));
        assert_eq!(first, again);
    }
    let o = stdout_json(&fcpc(&["partition", "--kind", "support", "--q", "2", "--k", "2", "--classes", "4"]));
    assert_eq!(o["function_class_size"], "24");
}

#[test]
fn encode_verify_decode_round_trip() {
    let dir = TempDir::new().unwrap();
    let p = write(dir.path(), "p.json", &json!({"q": 2, "k": 4, "kind": "linear", "matrices": [[[1, 1, 1, 0], [0, 1, 1, 0]]]}));
    let o = fcpc(&["encode", "--partition", s(&p), "--t", "2", "--message", "0110"]);
    assert_eq!(code(&o), 0);
    let out = stdout_json(&o);
    assert_eq!(out["certificate"]["r"], 6);
    assert_eq!(out["certificate"]["exact"], true);
    let e = write(dir.path(), "e.json", &out);
    let v = stdout_json(&fcpc(&["verify", "--partition", s(&p), "--encoding", s(&e)]));
    assert_eq!(v["valid"], true);
    // bare encoding documents load too, and survive a rewrite
    let bare = write(dir.path(), "bare.json", &out["encoding"]);
    assert_eq!(code(&fcpc(&["verify", "--partition", s(&p), "--encoding", s(&bare)])), 0);

    // two errors in a codeword still decode to the right block
    let cw = out["codeword"].as_str().unwrap();
    let mut y: Vec<char> = cw.chars().collect();
    for i in [1, 7] {
        y[i] = if y[i] == '0' { '1' } else { '0' };
    }
    let y: String = y.into_iter().collect();
    let d = stdout_json(&fcpc(&["decode", "--partition", s(&p), "--encoding", s(&e), "--word", &y]));
    let truth = stdout_json(&fcpc(&["decode", "--partition", s(&p), "--encoding", s(&e), "--word", cw]));
    assert_eq!(truth["message"], "0110");
    assert_eq!(d["block"], truth["block"]);

    // a tampered encoding is rejected with a witness
    let mut bad = out["encoding"].clone();
    let rule = &mut bad["rule"];
    if let Some(ws) = rule.get_mut("words") {
        ws[1] = ws[0].clone();
    } else {
        let a = rule["assignments"].as_object_mut().unwrap();
        let first = a.values().next().unwrap().clone();
        for v in a.values_mut() {
            *v = first.clone();
        }
    }
    let b = write(dir.path(), "bad.json", &bad);
    let o = fcpc(&["verify", "--partition", s(&p), "--encoding", s(&b)]);
    assert_eq!(code(&o), 1);
    assert!(stdout_json(&o)["violation"].is_object());
}

#[test]
fn matrices_cliques_and_codes_chain() {
    let dir = TempDir::new().unwrap();
    let args = ["--kind", "weight", "--q", "3", "--k", "3"];
    let m = stdout_json(&fcpc(&[&["pdm", "--t", "2"][..], &args].concat()));
    assert_eq!(m["entries"], json!([[0, 4, 3, 2], [4, 0, 4, 3], [3, 4, 0, 4], [2, 3, 4, 0]]));
    let mf = write(dir.path(), "m.json", &m);
    let rep = stdout_json(&fcpc(&["dcode", "--matrix", s(&mf), "--q", "3"]));
    assert_eq!(rep["r_min"], 4);

    let c = stdout_json(&fcpc(&[&["clique"][..], &args].concat()));
    assert_eq!(c["found"], true);
    assert_eq!(c["size"], 4);
    let cf = write(dir.path(), "c.json", &c);
    let via_clique = stdout_json(&fcpc(&[&["pdrm", "--t", "2", "--clique", s(&cf)][..], &args].concat()));
    assert_eq!(via_clique["entries"], m["entries"]);
    let vf = write(dir.path(), "v.json", &json!(["000", "100", "110", "111"]));
    let via_vectors = stdout_json(&fcpc(&[&["pdrm", "--t", "2", "--vectors", s(&vf)][..], &args].concat()));
    assert_eq!(via_vectors["entries"], m["entries"]);
    // the matrix file reads back to itself
    let again = write(dir.path(), "m2.json", &via_vectors);
    let csv = fcpc(&["--format", "csv", "pdm", "--t", "2", "--kind", "weight", "--q", "3", "--k", "3"]);
    assert_eq!(String::from_utf8(csv.stdout).unwrap().lines().next().unwrap(), "0,4,3,2");
    assert_eq!(stdout_json(&fcpc(&["dcode", "--matrix", s(&again), "--q", "3"]))["r_min"], 4);

    let none = stdout_json(&fcpc(&["clique", "--partition", s(&write(
        dir.path(),
        "p.json",
        &json!({"q": 2, "k": 5, "kind": "coset", "basis": [[1, 1, 1, 0, 0], [0, 0, 0, 1, 0], [0, 0, 0, 0, 1]]}),
    ))]));
    assert_eq!(none["found"], false);
    let dot = fcpc(&["--format", "dot", "clique", "--kind", "support", "--q", "2", "--k", "2"]);
    assert!(String::from_utf8(dot.stdout).unwrap().starts_with("graph"));
}

#[test]
fn contractions_check_and_reload() {
    let dir = TempDir::new().unwrap();
    let p = write(dir.path(), "p.json", &json!({"q": 2, "k": 5, "kind": "coset", "basis": [[1, 1, 1, 0, 0], [0, 0, 0, 1, 0], [0, 0, 0, 0, 1]]}));
    let o = fcpc(&["contraction", "--partition", s(&p), "--keep", "1,2,3"]);
    assert_eq!(code(&o), 0);
    let v = stdout_json(&o);
    assert_eq!(v["valid"], true);
    assert_eq!(v["image_size"], 8);
    let c = write(dir.path(), "c.json", &v["contraction"]);
    let again = stdout_json(&fcpc(&["contraction", "--partition", s(&p), "--contraction", s(&c)]));
    assert_eq!(again["contraction"], v["contraction"]);
    let e = stdout_json(&fcpc(&["encode", "--partition", s(&p), "--t", "1", "--strategy", "contraction", "--contraction", s(&c)]));
    assert_eq!(e["certificate"]["r"], 3);
    // the weight map does not preserve these cosets
    let o = fcpc(&["contraction", "--partition", s(&p), "--weight"]);
    assert_eq!(code(&o), 1);
    assert_eq!(stdout_json(&o)["valid"], false);
    assert_eq!(code(&fcpc(&["contraction", "--partition", s(&p)])), 64);
}

#[test]
fn bounds_and_gains() {
    let b = stdout_json(&fcpc(&["bounds", "--family", "support", "--q", "3", "--k", "3", "--t", "2"]));
    assert_eq!(b["lower"], 5);
    assert_eq!(b["lower_exact"], "92/21");
    let j = stdout_json(&fcpc(&["bounds", "--family", "join", "--rs", "4,4", "--k", "35", "--t", "2", "--n-full", "46"]));
    assert_eq!((j["lower"].clone(), j["upper"].clone()), (json!(4), json!(8)));
    let w = stdout_json(&fcpc(&["bounds", "--family", "weight", "--q", "2", "--k", "4", "--t", "1"]));
    assert!(w["lower"].as_u64().unwrap() <= w["upper"].as_u64().unwrap());
    let p = stdout_json(&fcpc(&["bounds", "--kind", "support", "--q", "3", "--k", "3", "--t", "2"]));
    assert_eq!(p["upper"], 5);
    let g = stdout_json(&fcpc(&["gains", "--rs", "2,2", "--r", "3", "--k", "3"]));
    assert_eq!(g, json!({"redundancy_gain": "1/2", "rate_gain": "1/6"}));
    let lb = stdout_json(&fcpc(&["locally-bounded", "--kind", "hwdf", "--q", "2", "--k", "9", "--width", "5", "--rho", "2"]));
    assert_eq!(lb["bounded"], true);
    let lb = stdout_json(&fcpc(&["locally-bounded", "--kind", "weight", "--q", "2", "--k", "4", "--rho", "2"]));
    assert_eq!(lb["bounded"], false);
    let enc = fcpc(&["encode", "--kind", "weight", "--q", "2", "--k", "4", "--t", "1", "--locally-bounded"]);
    assert_eq!(code(&enc), 1);
}

#[test]
fn threads_do_not_change_output() {
    let base = ["encode", "--kind", "support", "--q", "3", "--k", "3", "--t", "2"];
    let one = fcpc(&[&["--threads", "1"][..], &base].concat());
    let four = fcpc(&[&["--threads", "4"][..], &base].concat());
    assert_eq!(code(&one), 0);
    assert_eq!(one.stdout, four.stdout);
}

use std::fs;
use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use serde_json::Value;
use tempfile::TempDir;

const THREE_CYCLE: &str = r#"{"n":3,"edges":[[0,1],[1,2],[2,0]]}"#;
const AND: &str = r#"{"inputs":2,"gates":[{"id":0,"op":"AND","args":[{"input":0},{"input":1}]}],"outputs":[{"gate":0}]}"#;

fn majdiff(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_majdiff"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout_json(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).expect("stdout is JSON")
}

fn file(dir: &TempDir, name: &str, contents: &str) -> PathBuf {
    let path = dir.path().join(name);
    fs::write(&path, contents).unwrap();
    path
}

fn s(p: &Path) -> &str {
    p.to_str().unwrap()
}

#[test]
fn validate() {
    let dir = TempDir::new().unwrap();
    let good = file(&dir, "three_cycle.json", THREE_CYCLE);
    let out = majdiff(&["validate", s(&good)]);
    assert_eq!(out.status.code(), Some(0));

    let looped = file(&dir, "loop.json", r#"{"n":2,"edges":[[1,1]]}"#);
    let out = majdiff(&["validate", s(&looped)]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("irreflexive"));

    let truncated = file(&dir, "cut.json", r#"{"n":2,"edges":[[0,"#);
    let out = majdiff(&["validate", s(&truncated)]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("parse error"));

    let out = majdiff(&["validate", s(&dir.path().join("missing.json"))]);
    assert_eq!(out.status.code(), Some(4));
}

#[test]
fn simulate() {
    let dir = TempDir::new().unwrap();
    let net = file(&dir, "three_cycle.json", THREE_CYCLE);
    let out = majdiff(&["simulate", s(&net), "111"]);
    assert_eq!(out.status.code(), Some(0));
    let report = stdout_json(&out);
    assert_eq!(report["outcome"], "converged");
    assert_eq!(report["steps"], 0);

    let trace = dir.path().join("trace.txt");
    let out = majdiff(&["simulate", s(&net), "110", "--trace-out", s(&trace)]);
    assert_eq!(stdout_json(&out)["period"], 3);
    let text = fs::read_to_string(&trace).unwrap();
    assert_eq!(
        text,
        "110\n011\n101\n110\n{\"outcome\":\"cycle\",\"period\":3,\"preperiod\":0}\n"
    );

    let out = majdiff(&["simulate", s(&net), "110", "--steps", "1"]);
    assert_eq!(out.status.code(), Some(3));
    assert_eq!(stdout_json(&out)["outcome"], "undetermined");

    let out = majdiff(&["simulate", s(&net), "11"]);
    assert_eq!(out.status.code(), Some(2));

    let lab = file(&dir, "f.txt", "110\n");
    let out = majdiff(&["simulate", s(&net), &format!("@{}", s(&lab))]);
    assert_eq!(stdout_json(&out)["outcome"], "cycle");

    // Repeated runs print identical reports.
    let again = majdiff(&["simulate", s(&net), "110"]);
    assert_eq!(again.stdout, majdiff(&["simulate", s(&net), "110"]).stdout);
}

#[test]
fn guarantee() {
    let dir = TempDir::new().unwrap();
    let three_cycle = file(&dir, "three_cycle.json", THREE_CYCLE);
    let out = majdiff(&["guarantee", s(&three_cycle), "--deterministic", "--jobs", "2"]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(stdout_json(&out)["witness"], "010");

    let chain = file(&dir, "chain.json", r#"{"n":3,"edges":[[0,1],[1,2]]}"#);
    let out = majdiff(&["guarantee", s(&chain)]);
    assert_eq!(stdout_json(&out)["all_converge"], true);

    let out = majdiff(&["guarantee", s(&chain), "--max-n", "2"]);
    assert_eq!(out.status.code(), Some(3));
}

#[test]
fn analyze() {
    let dir = TempDir::new().unwrap();
    let edges: Vec<String> = (0..5)
        .flat_map(|u| (0..5).filter(move |&v| v != u).map(move |v| format!("[{u},{v}]")))
        .collect();
    let k5 = file(&dir, "k5.json", &format!(r#"{{"n":5,"edges":[{}]}}"#, edges.join(",")));
    let v = stdout_json(&majdiff(&["analyze", s(&k5)]));
    assert_eq!(v["structure"]["parity"], "odd");
    assert_eq!(v["prediction"]["prediction"], "always_converges");
    assert_eq!(v["prediction"]["within"], 1);

    let two_scc = file(
        &dir,
        "two_scc.json",
        r#"{"n":6,"edges":[[0,1],[0,2],[1,0],[1,2],[2,1],[3,4],[3,5],[4,3],[4,5],[5,4],[4,1]]}"#,
    );
    let v = stdout_json(&majdiff(&["analyze", s(&two_scc)]));
    assert_eq!(v["structure"]["scc_count"], 2);

    let chain = file(&dir, "chain.json", r#"{"n":4,"edges":[[0,1],[1,2],[2,3]]}"#);
    let v = stdout_json(&majdiff(&["analyze", s(&chain)]));
    assert_eq!(v["prediction"]["within"], 3);
}

#[test]
fn compile_and_simulate_round_trip() {
    let dir = TempDir::new().unwrap();
    let circuit = file(&dir, "and.json", AND);
    let net = dir.path().join("net.json");
    let map = dir.path().join("map.json");
    let out = majdiff(&["compile", s(&circuit), "-o", s(&net), "--map", s(&map)]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(stdout_json(&out)["n"], 8);
    let map: Value = serde_json::from_str(&fs::read_to_string(&map).unwrap()).unwrap();
    assert_eq!(map["h"], 1);
    assert_eq!(map["output_pairs"][0], serde_json::json!([6, 7]));

    // Base (1,0), x=1, y=1: the output pair reads true after one step.
    let out = majdiff(&["simulate", s(&net), "10101000", "--trace-out", s(&dir.path().join("t"))]);
    let v = stdout_json(&out);
    assert_eq!(v["outcome"], "converged");
    assert_eq!(v["limit"], "10101010");

    let bad = file(
        &dir,
        "bad.json",
        r#"{"inputs":1,"gates":[{"id":0,"op":"NOT","args":[{"input":4}]}],"outputs":[{"gate":0}]}"#,
    );
    let out = majdiff(&["compile", s(&bad)]);
    assert_eq!(out.status.code(), Some(2));
}

fn machine_file(dir: &TempDir, tm: &majority_diffusion::reduction::ToyTM) -> PathBuf {
    file(dir, "tm.json", &tm.to_json_string())
}

#[test]
fn reduce_demo() {
    use majority_diffusion::reduction::catalog;
    let dir = TempDir::new().unwrap();
    let looping = machine_file(&dir, &catalog::ping_pong(2));
    let net = dir.path().join("mn.json");
    let lab = dir.path().join("f.txt");
    let out = majdiff(&[
        "reduce",
        s(&looping),
        "--demo",
        "-o",
        s(&net),
        "--labelling",
        s(&lab),
        "--start",
        "left@1:01",
    ]);
    assert_eq!(out.status.code(), Some(0));
    let v = stdout_json(&out);
    assert_eq!(v["demo"]["verdict"], "NonConvergent");
    assert_eq!(v["manifest"]["k"], 2);
    assert!(v["manifest"]["h"].as_u64().unwrap() > 0);
    assert_eq!(v["manifest"]["n_config"], 6);

    // The written network and labelling replay to the same cycle.
    let f = fs::read_to_string(&lab).unwrap();
    let replay = stdout_json(&majdiff(&["simulate", s(&net), f.trim()]));
    assert_eq!(replay["outcome"], "cycle");
    assert_eq!(replay["period"], v["demo"]["period"]);

    let halting = machine_file(&dir, &catalog::binary_counter(2));
    let v = stdout_json(&majdiff(&["reduce", s(&halting), "--demo", "-k", "3"]));
    assert_eq!(v["demo"]["verdict"], "Convergent");
    assert!(v["demo"]["limit"].is_u64());
    assert_eq!(v["manifest"]["k"], 3);

    let out = majdiff(&["reduce", s(&halting), "--start", "nowhere@0:00"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn export_dot() {
    let dir = TempDir::new().unwrap();
    let net = file(&dir, "three_cycle.json", THREE_CYCLE);
    let out = majdiff(&["export-dot", s(&net), "--labelling", "110"]);
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.starts_with("digraph"));
    assert_eq!(text.matches("fillcolor=black").count(), 2);
    let out = majdiff(&["export-dot", s(&net)]);
    assert_eq!(String::from_utf8(out.stdout).unwrap().matches("fillcolor=gray").count(), 3);
}

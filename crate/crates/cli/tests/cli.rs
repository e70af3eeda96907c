use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use serde_json::Value;

fn tdforge(dir: &Path, args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_tdforge"))
        .args(args)
        .current_dir(dir)
        .env_remove("TDFORGE_CAP_VERTICES")
        .output()
        .expect("binary runs")
}

fn read_json(path: &Path) -> Value {
    serde_json::from_str(&std::fs::read_to_string(path).unwrap()).unwrap()
}

struct Work {
    dir: tempfile::TempDir,
}

impl Work {
    fn new() -> Self {
        Work { dir: tempfile::tempdir().unwrap() }
    }

    fn path(&self, name: &str) -> PathBuf {
        self.dir.path().join(name)
    }

    fn write(&self, name: &str, contents: &str) -> PathBuf {
        let p = self.path(name);
        std::fs::write(&p, contents).unwrap();
        p
    }

    fn run(&self, args: &[&str]) -> Output {
        tdforge(self.dir.path(), args)
    }
}

const K2: &str = r#"{"vertices": ["a", "b"], "edges": [["a", "b"]]}"#;
const C4: &str = r#"{"vertices": ["a", "b", "c", "d"], "edges": [["a","b"], ["b","c"], ["c","d"], ["d","a"]]}"#;
const P4: &str = r#"{"vertices": ["a", "b", "c", "d"], "edges": [["a","b"], ["b","c"], ["c","d"]]}"#;

#[test]
fn reflected_tree_writes_graph_sidecar_and_manifest() {
    let w = Work::new();
    let out = w.run(&["construct", "reflected-tree", "--r", "3", "-o", "g3.json"]);
    assert_eq!(out.status.code(), Some(0));
    let g = read_json(&w.path("g3.json"));
    assert_eq!(g["vertices"].as_array().unwrap().len(), 10);
    assert_eq!(g["edges"].as_array().unwrap().len(), 12);
    assert!(w.path("g3.json.meta.json").exists());
    let m = read_json(&w.path("g3.json.manifest.json"));
    assert_eq!(m["exit_code"], 0);
    assert_eq!(m["seed"], 0);
    assert_eq!(m["outputs"].as_array().unwrap().len(), 2);
}

#[test]
fn outputs_are_byte_identical_across_runs() {
    let w = Work::new();
    w.write("c4.json", C4);
    let a = w.run(&["search", "spanning", "--graph", "c4.json"]);
    let b = w.run(&["search", "spanning", "--graph", "c4.json"]);
    assert_eq!(a.stdout, b.stdout);
    let v: Value = serde_json::from_slice(&a.stdout).unwrap();
    assert_eq!(v["count"], "4");
    let dot1 = w.run(&["export", "dot", "--input", "c4.json"]).stdout;
    let dot2 = w.run(&["export", "dot", "--input", "c4.json"]).stdout;
    assert_eq!(dot1, dot2);
    assert!(String::from_utf8(dot1).unwrap().starts_with("graph "));
}

#[test]
fn manifest_digests_inputs() {
    let w = Work::new();
    let input = w.write("c4.json", C4);
    let out = w.run(&["search", "tw", "--graph", "c4.json", "--manifest", "run.json"]);
    assert_eq!(out.status.code(), Some(0));
    let m = read_json(&w.path("run.json"));
    let digest = m["inputs"]["c4.json"].as_str().unwrap();
    // sha256 of the exact bytes, computed independently
    let expected = Command::new("sha256sum").arg(&input).output();
    if let Ok(o) = expected {
        let text = String::from_utf8(o.stdout).unwrap();
        assert_eq!(text.split_whitespace().next().unwrap(), digest);
    }
    assert_eq!(digest.len(), 64);
    let tw: Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(tw["value"], 2);
}

#[test]
fn decider_matches_the_four_cycle_examples() {
    let w = Work::new();
    w.write("c4.json", C4);
    w.write("p4.json", P4);
    let run = |budget: &str| {
        let out = w.run(&["search", "decide", "--graph", "c4.json", "--host", "p4.json", "--budget", budget, "--anchored"]);
        assert_eq!(out.status.code(), Some(0));
        serde_json::from_slice::<Value>(&out.stdout).unwrap()
    };
    assert_eq!(run("1")["status"], "UNSAT");
    let sat = run("2");
    assert_eq!(sat["status"], "SAT");
    w.write("td.json", &sat["witness"].to_string());
    let v = w.run(&["verify", "td", "--graph", "c4.json", "--td", "td.json"]);
    assert_eq!(v.status.code(), Some(0));
    let report: Value = serde_json::from_slice(&v.stdout).unwrap();
    assert_eq!(report["anchored"], true);
}

#[test]
fn invalid_decompositions_fail_verification() {
    let w = Work::new();
    w.write("k2.json", K2);
    w.write("td.json", r#"{"host_vertices": ["a","b"], "host_edges": [["a","b"]], "bags": {"a": ["a"], "b": ["b"]}}"#);
    let out = w.run(&["verify", "td", "--graph", "k2.json", "--td", "td.json"]);
    assert_eq!(out.status.code(), Some(1));
    let report: Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(report["violations"][0]["kind"], "uncovered-edge");
}

#[test]
fn gadget_construction_and_reduction() {
    let w = Work::new();
    w.write("k2.json", K2);
    let out = w.run(&["construct", "gadget", "--k", "1", "--graph", "k2.json", "--toy-heights", "1", "--toy-widths", "1", "-o", "inst.json"]);
    assert_eq!(out.status.code(), Some(0));
    assert!(String::from_utf8_lossy(&out.stderr).contains("NOT met"));
    let inst = read_json(&w.path("inst.json"));
    assert_eq!(inst["graph"]["vertices"].as_array().unwrap().len(), 4);

    let dot = w.run(&["export", "dot", "--input", "inst.json"]);
    assert!(String::from_utf8(dot.stdout).unwrap().contains("cluster_S1"));

    // the adversarial input: a and b only meet inside the gadget of b
    w.write(
        "td.json",
        r##"{"host_vertices": ["a","a#0","b","b#0"], "host_edges": [["a","a#0"],["a","b"],["b","b#0"]],
             "bags": {"a": ["a","a#0"], "a#0": ["a#0"], "b": ["a","b"], "b#0": ["b","b#0"]}}"##,
    );
    let r = w.run(&["transform", "reduce", "--instance", "inst.json", "--td", "td.json"]);
    let report: Value = serde_json::from_slice(&r.stdout).unwrap();
    assert_eq!(r.status.code(), Some(0), "{report}");
    assert_eq!(report["anchored"], true);
}

#[test]
fn genuine_schedules_exceed_the_cap_with_the_exact_total() {
    let w = Work::new();
    w.write("k2.json", K2);
    let out = w.run(&["construct", "gadget", "--k", "1", "--graph", "k2.json"]);
    assert_eq!(out.status.code(), Some(1));
    let v: Value = serde_json::from_slice(&out.stdout).unwrap();
    let total = v["total_vertices"].as_str().unwrap();
    assert!(total.len() > 100 && total.bytes().all(|b| b.is_ascii_digit()));
}

#[test]
fn schedule_prints_decimal_integers() {
    let w = Work::new();
    let out = w.run(&["schedule", "--k", "1", "--n", "2"]);
    assert_eq!(out.status.code(), Some(0));
    let v: Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(v["schedule"]["entries"][1]["height"], "82");
    assert_eq!(v["schedule"]["entries"][1]["width"], "5");
}

#[test]
fn config_and_environment_caps() {
    let w = Work::new();
    w.write("k2.json", K2);
    w.write("caps.toml", "materialization_cap = 3\n");
    let args = ["--config", "caps.toml", "construct", "gadget", "--k", "1", "--graph", "k2.json", "--toy-heights", "1"];
    assert_eq!(w.run(&args).status.code(), Some(1));
    let mut with_flag = args.to_vec();
    with_flag.extend(["--cap", "10"]);
    assert_eq!(w.run(&with_flag).status.code(), Some(0));
    let env = Command::new(env!("CARGO_BIN_EXE_tdforge"))
        .args(args)
        .current_dir(w.dir.path())
        .env("TDFORGE_CAP_VERTICES", "100")
        .output()
        .unwrap();
    assert_eq!(env.status.code(), Some(0));
    w.write("bad.toml", "no_such_key = 1\n");
    assert_eq!(w.run(&["--config", "bad.toml", "schedule", "--k", "1", "--n", "1"]).status.code(), Some(2));
}

#[test]
fn certificates_and_audit() {
    let w = Work::new();
    w.run(&["construct", "reflected-tree", "--r", "3", "-o", "g3.json"]);
    let all = w.run(&["certify", "--r", "3", "--all"]);
    assert_eq!(all.status.code(), Some(0));
    let summary: Value = serde_json::from_slice(&all.stdout).unwrap();
    assert_eq!(summary["verified"], 96);
    assert_eq!(summary["label"], "exhaustive, N=96");

    let trees = w.run(&["search", "spanning", "--graph", "g3.json"]);
    let trees: Value = serde_json::from_slice(&trees.stdout).unwrap();
    w.write("t.json", &trees["trees"][0].to_string());
    let cert = w.run(&["certify", "--r", "3", "--spanning-tree", "t.json", "-o", "cert.json"]);
    assert_eq!(cert.status.code(), Some(0));
    assert_eq!(w.run(&["verify", "certificate", "--certificate", "cert.json"]).status.code(), Some(0));

    let all_bags = trees["trees"][0]["vertices"].clone();
    let bags: serde_json::Map<String, Value> =
        all_bags.as_array().unwrap().iter().map(|x| (x.as_str().unwrap().to_string(), all_bags.clone())).collect();
    let td = serde_json::json!({
        "host_vertices": trees["trees"][0]["vertices"],
        "host_edges": trees["trees"][0]["edges"],
        "bags": bags,
    });
    w.write("td.json", &td.to_string());
    let audit = w.run(&["audit", "--certificate", "cert.json", "--td", "td.json"]);
    assert_eq!(audit.status.code(), Some(0));
    let bound: Value = serde_json::from_slice(&audit.stdout).unwrap();
    assert_eq!(bound["forced"].as_array().unwrap().len(), 2);

    let sampled = w.run(&["--seed", "9", "certify", "--r", "4", "--sample", "20"]);
    let s: Value = serde_json::from_slice(&sampled.stdout).unwrap();
    assert_eq!(s["label"], "sampled, N=20, seed=9");
}

#[test]
fn pipeline_for_k_one() {
    let w = Work::new();
    let out = w.run(&["pipeline", "--k", "1", "-o", "report.json"]);
    assert_eq!(out.status.code(), Some(0));
    let r = read_json(&w.path("report.json"));
    assert_eq!(r["passed"], true);
    assert_eq!(r["level"], 4);
    assert!(r["disclaimer"].as_str().unwrap().contains("NOT met"));
    let checks = r["checks"].as_array().unwrap();
    assert!(checks.iter().any(|c| c["detail"] == "UNSAT at budget 0"));
}

#[test]
fn usage_errors_exit_two() {
    let w = Work::new();
    assert_eq!(w.run(&["pipeline", "--k", "1", "--toy-heights", "-1"]).status.code(), Some(2));
    assert_eq!(w.run(&["construct", "reflected-tree", "--r", "0"]).status.code(), Some(2));
    assert_eq!(w.run(&["search", "tw", "--graph", "missing.json"]).status.code(), Some(2));
    w.write("junk.json", "{\"nope\": 1}");
    assert_eq!(w.run(&["export", "dot", "--input", "junk.json"]).status.code(), Some(2));
    assert_eq!(w.run(&["no-such-command"]).status.code(), Some(2));
}

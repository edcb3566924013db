use std::fs;
use std::path::{Path, PathBuf};
use std::process::Command;

use serde_json::Value;
use tempfile::TempDir;

fn dendro(args: &[&str]) -> (i32, String, String) {
    let out = Command::new(env!("CARGO_BIN_EXE_dendro"))
        .args(args)
        .output()
        .expect("binary runs");
    (
        out.status.code().expect("exit code"),
        String::from_utf8(out.stdout).unwrap(),
        String::from_utf8(out.stderr).unwrap(),
    )
}

fn report(args: &[&str]) -> (i32, Value) {
    let (code, stdout, stderr) = dendro(args);
    let value = serde_json::from_str(&stdout).unwrap_or_else(|e| panic!("{e}: {stdout} {stderr}"));
    (code, value)
}

fn gen(dir: &Path, kind: &str, seed: u64) -> PathBuf {
    let path = dir.join(format!("{kind}-{seed}.json"));
    let (code, _, stderr) = dendro(&["gen", "--kind", kind, "--seed", &seed.to_string(), "--out", path.to_str().unwrap()]);
    assert_eq!(code, 0, "{stderr}");
    path
}

fn s(p: &Path) -> &str {
    p.to_str().unwrap()
}

fn assert_fail_has_witness(v: &Value) {
    if v["status"] == "fail" {
        assert!(!v["findings"]["witnesses"].as_array().unwrap().is_empty(), "{v}");
    }
}

#[test]
fn generated_instances_validate_and_are_reproducible() {
    let dir = TempDir::new().unwrap();
    for kind in ["star-z2", "path-z2", "random-cocycle", "random-boundary"] {
        for seed in [0, 9, 41] {
            let a = gen(dir.path(), kind, seed);
            let first = fs::read(&a).unwrap();
            let b = gen(dir.path(), kind, seed);
            assert_eq!(first, fs::read(&b).unwrap());
            let (code, v) = report(&["validate", s(&a)]);
            assert_eq!((code, v["status"].as_str()), (0, Some("pass")), "{kind} {seed}: {v}");
        }
    }
    for kind in ["tree-path", "tree-star", "tree-random", "tree-wazewski"] {
        let t = gen(dir.path(), kind, 2);
        assert_eq!(report(&["validate", s(&t)]).0, 0);
    }
}

#[test]
fn identity_violation_is_reported_with_witness() {
    let dir = TempDir::new().unwrap();
    let bad = gen(dir.path(), "bad-cocycle", 5);
    let (code, v) = report(&["validate", s(&bad)]);
    assert_eq!(code, 1);
    let w = &v["findings"]["witnesses"][0];
    assert_eq!(w["error"], "cocycle identity");
    for key in ["gamma1", "gamma2", "atom"] {
        assert!(w["witness"][key].is_string());
    }
    let (code, v) = report(&["elementarity", s(&bad)]);
    assert_eq!(code, 1);
    assert_fail_has_witness(&v);
}

#[test]
fn malformed_rational_is_an_input_error() {
    let dir = TempDir::new().unwrap();
    let star = gen(dir.path(), "star-z2", 0);
    let broken = dir.path().join("broken.json");
    fs::write(&broken, fs::read_to_string(&star).unwrap().replace("\"1/1\"", "\"1/0\"")).unwrap();
    let (code, v) = report(&["validate", s(&broken)]);
    assert_eq!(code, 2);
    assert_fail_has_witness(&v);
    let (code, stdout, stderr) = dendro(&["elementarity", s(&broken)]);
    assert_eq!(code, 2);
    assert!(stdout.is_empty());
    assert!(stderr.contains("1/0"));
}

#[test]
fn omega_on_star_and_path() {
    let dir = TempDir::new().unwrap();
    let star = gen(dir.path(), "star-z2", 0);
    let (code, v) = report(&["omega", s(&star), "--points", "l1", "l2", "l3", "--p-norm", "1"]);
    assert_eq!(code, 0);
    let f = &v["findings"];
    assert_eq!(f["entries"], 6);
    assert_eq!(f["norm"]["power_sum"], 6);
    assert_eq!(f["median"], "c");
    assert_eq!(f["support_bases"], serde_json::json!(["c"]));
    let (_, v) = report(&["omega", s(&star), "--points", "l1", "l2", "l3", "--p-norm", "2"]);
    assert_eq!(v["findings"]["norm"]["power_sum"], 6);
    let (_, v) = report(&["omega", s(&star), "--points", "l1", "l2", "l2"]);
    assert_eq!(v["findings"]["entries"], 0);

    let path = gen(dir.path(), "path-z2", 0);
    let (_, v) = report(&["omega", s(&path), "--points", "a", "b", "c"]);
    assert_eq!(v["findings"]["entries"], 0);
    assert_eq!(v["findings"]["norm"]["power_sum"], 0);
    let (code, _, stderr) = dendro(&["omega", s(&path), "--points", "a", "b", "z"]);
    assert_eq!(code, 2);
    assert!(stderr.contains('z'));
}

#[test]
fn elementarity_methods() {
    let dir = TempDir::new().unwrap();
    let path = gen(dir.path(), "path-z2", 0);
    for method in ["search", "lp", "both"] {
        let (code, v) = report(&["elementarity", s(&path), "--method", method]);
        assert_eq!((code, v["status"].as_str()), (0, Some("found")));
    }
    let (_, v) = report(&["elementarity", s(&path), "--method", "search"]);
    assert_eq!(v["findings"]["search"]["fibers"]["s"], serde_json::json!(["b"]));
    assert!(v["findings"]["lp"].is_null());
    for seed in 0..12 {
        let inst = gen(dir.path(), "random-cocycle", seed);
        let (code, v) = report(&["elementarity", s(&inst)]);
        assert_eq!((code, v["status"].as_str()), (0, Some("found")), "seed {seed}");
    }
}

#[test]
fn pipeline_certificates() {
    let dir = TempDir::new().unwrap();
    let star = gen(dir.path(), "star-z2", 0);
    let (code, v) = report(&["pipeline", s(&star)]);
    assert_eq!(code, 0);
    let f = &v["findings"];
    assert_eq!(f["agrees_with_search"], true);
    for c in f["certificates"].as_array().unwrap() {
        assert_eq!(c["family"]["fibers"]["s"], serde_json::json!(["c"]));
    }

    let all_ones: Vec<Value> = ["l1", "l2", "l3"]
        .iter()
        .flat_map(|a| ["l1", "l2", "l3"].map(|b| (a.to_string(), b)))
        .filter(|(a, b)| a != b)
        .map(|(a, b)| serde_json::json!(["s", "c", a, b, "1/1"]))
        .collect();
    let trivial = serde_json::json!({
        "tree": {"vertices": ["c", "l1", "l2", "l3"], "edges": [["c", "l1"], ["c", "l2"], ["c", "l3"]]},
        "group": {"elements": ["e"], "table": [["e"]]},
        "space": {"atoms": ["s"], "measure": {"s": "1/1"}, "action": {}},
        "sigma": {},
        "bochner": [all_ones],
    });
    let file = dir.path().join("trivial.json");
    fs::write(&file, trivial.to_string()).unwrap();
    let (code, v) = report(&["pipeline", s(&file)]);
    assert_eq!(code, 0, "{v}");
    assert_eq!(v["findings"]["source"], "instance");
    assert_eq!(v["findings"]["certificates"][0]["family"]["fibers"]["s"], serde_json::json!(["c"]));
}

#[test]
fn pullback_and_families() {
    let dir = TempDir::new().unwrap();
    for seed in 0..6 {
        let inst = gen(dir.path(), "random-boundary", seed);
        let (code, v) = report(&["pullback", s(&inst)]);
        assert_eq!(code, 0, "{v}");
        assert_eq!(v["findings"]["pullback"]["status"], "pass");
        let (code, v) = report(&["minimal-families", s(&inst)]);
        assert_eq!((code, v["status"].as_str()), (0, Some("found")));
        let (code, v) = report(&["invariant-vectors", s(&inst), "--q-norm", "inf", "--p-norm", "1"]);
        assert_eq!(code, 0, "{v}");
    }
    let star = gen(dir.path(), "star-z2", 0);
    assert_eq!(dendro(&["pullback", s(&star)]).0, 2);
}

#[test]
fn tree_commands_and_text_output() {
    let dir = TempDir::new().unwrap();
    let tree = gen(dir.path(), "tree-wazewski", 0);
    let (code, v) = report(&["analyze", s(&tree)]);
    assert_eq!(code, 0);
    assert_eq!(v["findings"]["degree_excess"], -2);
    let (code, v) = report(&["cocycle-check", s(&tree), "--seed", "3"]);
    assert_eq!(code, 0, "{v}");
    assert_eq!(v["findings"]["mode"]["sampled"], 10_000);
    let (code, text, _) = dendro(&["analyze", s(&tree), "--format", "text"]);
    assert_eq!(code, 0);
    assert!(text.starts_with("analyze: pass\n"));
}

#[test]
fn reports_are_byte_identical() {
    let dir = TempDir::new().unwrap();
    let inst = gen(dir.path(), "random-boundary", 7);
    for cmd in ["validate", "elementarity", "pipeline", "pullback", "minimal-families", "invariant-vectors"] {
        let a = dendro(&[cmd, s(&inst)]);
        let b = dendro(&[cmd, s(&inst)]);
        assert_eq!(a, b, "{cmd}");
        assert!(!a.1.contains("timings"));
    }
    let (_, v) = report(&["validate", s(&inst), "--timings"]);
    assert!(v["timings"]["total_ms"].is_number());
}

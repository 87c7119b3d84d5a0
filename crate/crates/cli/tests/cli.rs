use std::fs;
use std::process::{Command, Output};

use lscg::generate::complete;
use lscg::{query_edge, Config, EdgeRef};
use tempfile::TempDir;

fn lscg(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_lscg")).args(args).output().unwrap()
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

fn write(dir: &TempDir, name: &str, text: &str) -> String {
    let p = dir.path().join(name);
    fs::write(&p, text).unwrap();
    p.display().to_string()
}

const TREE: &str = "6 5\n0 1\n1 2\n1 3\n3 4\n3 5\n";

#[test]
fn query_tree_edge_accepts_and_repeats() {
    let dir = TempDir::new().unwrap();
    let g = write(&dir, "tree.txt", TREE);
    let a = lscg(&["--graph", &g, "--T", "1", "query", "1", "3"]);
    assert_eq!(a.status.code(), Some(0));
    assert!(stdout(&a).starts_with("1 3 accept"), "{}", stdout(&a));
    let b = lscg(&["--graph", &g, "--T", "1", "query", "1", "3"]);
    assert_eq!(stdout(&a), stdout(&b));
}

#[test]
fn input_errors_exit_one() {
    let dir = TempDir::new().unwrap();
    let g = write(&dir, "tree.txt", TREE);
    assert_eq!(lscg(&["--graph", &g, "query", "0", "5"]).status.code(), Some(1));
    let bad = write(&dir, "bad.txt", "3 1\n0 9\n");
    let o = lscg(&["--graph", &bad, "query", "0", "1"]);
    assert_eq!(o.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&o.stderr).contains("line 2"));
    assert_eq!(lscg(&["query", "0", "1"]).status.code(), Some(1));
    assert_eq!(lscg(&["--gen", "nope", "query", "0", "1"]).status.code(), Some(1));
    assert_eq!(lscg(&["--gen", "path:4", "--T", "0.5", "query", "0", "1"]).status.code(), Some(1));
    assert_eq!(lscg(&["verify", "nope"]).status.code(), Some(1));
    assert_eq!(lscg(&["--bogus-flag"]).status.code(), Some(1));
}

#[test]
fn query_matches_library_call() {
    let dir = TempDir::new().unwrap();
    let json = dir.path().join("q.json");
    let g = complete(32).unwrap();
    for seed in [1u64, 2, 3] {
        let o = lscg(&[
            "--gen", "complete", "--gen-args", "32", "--T", "4", "--scale", "0.1", "--seed", &seed.to_string(),
            "--json", json.to_str().unwrap(), "query", "5", "17",
        ]);
        assert_eq!(o.status.code(), Some(0));
        let report: serde_json::Value = serde_json::from_str(&fs::read_to_string(&json).unwrap()).unwrap();
        let lib = query_edge(&g.view(), EdgeRef::new(5, 17).unwrap(), &Config::new(4.0, seed).with_scale(0.1)).unwrap();
        let r = &report["result"];
        assert_eq!(r["command"], "query");
        assert_eq!(r["accepted"], lib.accepted);
        assert_eq!(r["s_hat"].as_f64().unwrap(), lib.s_hat);
        assert_eq!(r["g_star"].as_f64(), lib.g_star);
        assert_eq!(r["probes"]["neighbor_probes"].as_u64().unwrap(), lib.probes.neighbor_probes);
        assert_eq!(report["config"]["seed"].as_u64().unwrap(), seed);
        assert_eq!(report["config"]["c_scale"].as_f64().unwrap(), 0.1);
    }
}

#[test]
fn materialize_path_writes_input_back() {
    let dir = TempDir::new().unwrap();
    let input = write(&dir, "path.txt", "5 4\n0 1\n1 2\n2 3\n3 4\n");
    let out = dir.path().join("estar.txt");
    let json = dir.path().join("m.json");
    let o = lscg(&[
        "--graph", &input, "--T", "1", "--scale", "0.1", "--json", json.to_str().unwrap(),
        "materialize", "--out", out.to_str().unwrap(),
    ]);
    assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stderr));
    assert_eq!(fs::read_to_string(&out).unwrap(), "5 4\n0 1\n1 2\n2 3\n3 4\n");
    let report: serde_json::Value = serde_json::from_str(&fs::read_to_string(&json).unwrap()).unwrap();
    assert_eq!(report["schema"], 1);
    assert_eq!(report["result"]["e_star"], 4);
    assert_eq!(report["result"]["output_connected"], true);
    assert_eq!(report["graph"]["m"], 4);
    assert_eq!(report["config"]["graph"]["source"], "file");
}

#[test]
fn materialize_flags_disconnected_input() {
    let dir = TempDir::new().unwrap();
    let input = write(&dir, "two.txt", "4 2\n0 1\n2 3\n");
    let o = lscg(&["--graph", &input, "materialize"]);
    assert_eq!(o.status.code(), Some(0));
    assert!(String::from_utf8_lossy(&o.stderr).contains("disconnected"));
}

#[test]
fn oracle_prints_strong_connectivities() {
    let dir = TempDir::new().unwrap();
    let g = write(&dir, "tri.txt", "4 4\n0 1\n1 2\n0 2\n2 3\n");
    let o = lscg(&["--graph", &g, "oracle"]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(stdout(&o), "0 1 2\n0 2 2\n1 2 2\n2 3 1\n");
}

#[test]
fn scaling_table_and_generator_shorthand() {
    let o = lscg(&["--gen", "gnp:40,0.3", "--scale", "0.1", "scaling", "--t-list", "2,64", "--queries", "20"]);
    assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stderr));
    let text = stdout(&o);
    let rows: Vec<&str> = text.lines().collect();
    assert_eq!(rows.len(), 3);
    assert!(rows[2].starts_with("64\t3.0\t3\t20"), "{text}");
    let unsorted = lscg(&["--gen", "complete:6", "scaling", "--t-list", "8,2"]);
    assert_eq!(unsorted.status.code(), Some(1));
}

#[test]
fn verify_suite_passes_and_reports() {
    let dir = TempDir::new().unwrap();
    let json = dir.path().join("v.json");
    let o = lscg(&["--json", json.to_str().unwrap(), "verify", "oracle"]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).starts_with("[PASS] 1 oracle-equivalence"));
    let report: serde_json::Value = serde_json::from_str(&fs::read_to_string(&json).unwrap()).unwrap();
    assert_eq!(report["result"]["criteria"][0]["passed"], true);
}

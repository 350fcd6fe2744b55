//! End-to-end runs of the `khtail` binary against a temporary cache.

use std::fs;
use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use serde_json::Value;

struct Env {
    dir: tempfile::TempDir,
}

impl Env {
    fn new() -> Self {
        let dir = tempfile::tempdir().unwrap();
        fs::write(dir.path().join("hopf.txt"), "B2:1,1\n").unwrap();
        fs::write(dir.path().join("unknot.txt"), "cup 0\ncap 0\n").unwrap();
        Env { dir }
    }

    fn path(&self, name: &str) -> PathBuf {
        self.dir.path().join(name)
    }

    fn cache(&self) -> PathBuf {
        self.path("cache")
    }

    fn run(&self, args: &[&str]) -> Output {
        Command::new(env!("CARGO_BIN_EXE_khtail"))
            .env("KHTAIL_CACHE_DIR", self.cache())
            .current_dir(self.dir.path())
            .args(args)
            .output()
            .unwrap()
    }

    fn manifest(&self, args: &[&str]) -> (Output, Value) {
        let m = self.path("manifest.json");
        let mut all = vec!["--manifest", m.to_str().unwrap()];
        all.extend_from_slice(args);
        let out = self.run(&all);
        let v = serde_json::from_str(&fs::read_to_string(&m).unwrap()).unwrap();
        (out, v)
    }
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn bidegrees(table: &Value) -> Vec<(i64, i64, u64)> {
    table["groups"]
        .as_array()
        .unwrap()
        .iter()
        .map(|g| (g["i"].as_i64().unwrap(), g["j"].as_i64().unwrap(), g["rank"].as_u64().unwrap()))
        .collect()
}

#[test]
fn compute_hopf_over_z() {
    let e = Env::new();
    let o = e.run(&["compute", "hopf.txt", "--ring", "z"]);
    assert_eq!(o.status.code(), Some(0));
    let t: Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(bidegrees(&t), vec![(0, 0, 1), (0, 2, 1), (2, 4, 1), (2, 6, 1)]);
}

#[test]
fn compute_unknot_and_raw_agree() {
    let e = Env::new();
    let scan = stdout(&e.run(&["compute", "unknot.txt"]));
    let t: Value = serde_json::from_str(&scan).unwrap();
    assert_eq!(bidegrees(&t), vec![(0, -1, 1), (0, 1, 1)]);
    let raw = stdout(&e.run(&["compute", "unknot.txt", "--method", "raw"]));
    assert_eq!(scan, raw);
}

#[test]
fn q_filter_keeps_only_requested_degrees() {
    let e = Env::new();
    let o = e.run(&["compute", "B2:1,1", "--q", "2,4", "--format", "csv"]);
    assert_eq!(stdout(&o), "i,j,rank,torsion\n0,2,1,\n2,4,1,\n");
}

#[test]
fn repeated_runs_hit_the_cache_with_identical_bytes() {
    let e = Env::new();
    let (a, m1) = e.manifest(&["compute", "hopf.txt"]);
    let (b, m2) = e.manifest(&["compute", "hopf.txt"]);
    assert_eq!(a.stdout, b.stdout);
    assert_eq!(m1["cache"]["misses"], 1);
    assert_eq!(m2["cache"]["hits"], 1);
    assert_eq!(m1["entries"][0]["digest"], m2["entries"][0]["digest"]);
    // An equivalent diagram in another notation shares the key.
    let canonical = fs::read_dir(e.cache().join("objects")).unwrap().count();
    let (_, m3) = e.manifest(&["compute", "B2:1,1"]);
    assert_eq!(m3["cache"]["hits"], 1);
    assert_eq!(fs::read_dir(e.cache().join("objects")).unwrap().count(), canonical);
}

fn object_files(root: &Path) -> Vec<PathBuf> {
    let mut out = Vec::new();
    for d in fs::read_dir(root.join("objects")).unwrap() {
        for f in fs::read_dir(d.unwrap().path()).unwrap() {
            out.push(f.unwrap().path());
        }
    }
    out
}

#[test]
fn corrupted_entries_are_detected_and_recomputed() {
    let e = Env::new();
    let first = e.run(&["compute", "hopf.txt"]);
    let files = object_files(&e.cache());
    assert_eq!(files.len(), 1);
    let text = fs::read_to_string(&files[0]).unwrap();
    fs::write(&files[0], text.replacen("\\\"rank\\\": 1", "\\\"rank\\\": 7", 1)).unwrap();
    let (second, m) = e.manifest(&["compute", "hopf.txt"]);
    assert_eq!(m["cache"]["corrupt"], 1);
    assert_eq!(first.stdout, second.stdout);
    // The rewritten entry is good again.
    let (_, m) = e.manifest(&["compute", "hopf.txt"]);
    assert_eq!(m["cache"]["hits"], 1);
    fs::write(&files[0], "not json").unwrap();
    let (third, m) = e.manifest(&["compute", "hopf.txt"]);
    assert_eq!(m["cache"]["corrupt"], 1);
    assert_eq!(first.stdout, third.stdout);
}

#[test]
fn outputs_are_deterministic_without_the_cache() {
    let e = Env::new();
    let a = e.run(&["--no-cache", "tail-unknot", "--j", "2", "--n-max", "3"]);
    let b = e.run(&["--no-cache", "tail-unknot", "--j", "2", "--n-max", "3"]);
    assert_eq!(a.stdout, b.stdout);
    assert!(!e.cache().exists());
}

#[test]
fn jones_of_the_two_colored_unknot() {
    let e = Env::new();
    let o = e.run(&["jones", "--color", "2", "unknot.txt"]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(stdout(&o), "q^2+1+q^-2\n");
    let o = e.run(&["jones", "hopf.txt"]);
    assert_eq!(stdout(&o), "q^6+q^4+q^2+1\n");
}

#[test]
fn spin_networks_from_text() {
    let e = Env::new();
    assert_eq!(stdout(&e.run(&["spin", "circle 2"])), "q^2+1+q^-2\n");
    fs::write(e.path("theta.txt"), "theta 2 2 2\n").unwrap();
    let o = e.run(&["spin", "theta.txt", "--format", "json"]);
    let v: Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v["value"], "(q^5+q^3+2*q+q^-1+q^-3)/(q^2+1)");
}

#[test]
fn unknot_tail_column_report() {
    let e = Env::new();
    let o = e.run(&["tail-unknot", "--j", "0", "--n-max", "3"]);
    assert_eq!(o.status.code(), Some(0));
    let r: Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(r["verdict"]["outcome"], "pass");
    let cells = r["cells"].as_array().unwrap();
    assert_eq!(cells.len(), 9);
    for c in cells.iter().filter(|c| c["index"][0] != 1) {
        assert_eq!(c["certificate"], "induced_iso", "{c}");
    }
}

#[test]
fn experimental_unlink_flag() {
    let e = Env::new();
    let o = e.run(&["tail-unknot", "--j", "0", "--n-max", "2", "--unlink", "2"]);
    assert_eq!(o.status.code(), Some(0));
    let r: Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(r["experiment"], "unlink_tail_experimental");
    assert_eq!(r["cells"].as_array().unwrap().len(), 2);
}

#[test]
fn badequate_tail_of_the_hopf_link() {
    let e = Env::new();
    let o = e.run(&["tail-badequate", "hopf.txt", "--j", "0", "--format", "csv"]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(stdout(&o), "index,i,j,rank,torsion,certificate\n1 0,2,4,1,,base\n2 0,8,12,1,,complement_acyclic\n");
}

#[test]
fn colored_blocks_are_certified() {
    let e = Env::new();
    let o = e.run(&["colored", "unknot.txt", "--colors", "2", "--degree", "-2,0,2"]);
    assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stderr));
    let r: Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(r["cells"].as_array().unwrap().len(), 3);
}

#[test]
fn sequence_reports_bounds() {
    let e = Env::new();
    let o = e.run(&["sequence", "unknot.txt", "--colors", "2", "--j", "0", "--handedness", "left"]);
    assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stderr));
    let r: Value = serde_json::from_str(&stdout(&o)).unwrap();
    let s = &r["params"]["sequences"][0];
    assert!(s["observed"].as_i64().unwrap() <= s["predicted"].as_i64().unwrap());
}

#[test]
fn exit_codes() {
    let e = Env::new();
    assert_eq!(e.run(&["--help"]).status.code(), Some(0));
    assert_eq!(e.run(&["--version"]).status.code(), Some(0));
    assert_eq!(e.run(&["compute"]).status.code(), Some(3));
    assert_eq!(e.run(&["compute", "missing.txt"]).status.code(), Some(3));
    fs::write(e.path("bad.txt"), "x+ 7\n").unwrap();
    assert_eq!(e.run(&["compute", "bad.txt"]).status.code(), Some(3));
    assert_eq!(e.run(&["tail-unknot", "--j", "1"]).status.code(), Some(3));
    assert_eq!(e.run(&["verify", "nonsense"]).status.code(), Some(3));
    let o = e.run(&["--max-objects", "1", "compute", "B2:1,1,1"]);
    assert_eq!(o.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&o.stderr).contains("resource"));
    let o = e.run(&["--k-limit", "0", "sequence", "unknot.txt", "--j", "0", "--k-max", "3"]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn cached_verdicts_keep_their_exit_code() {
    let e = Env::new();
    let args = ["--max-objects", "10", "colored", "hopf.txt"];
    let (a, m1) = e.manifest(&args);
    let (b, m2) = e.manifest(&args);
    assert_eq!(a.status.code(), Some(2));
    assert_eq!(b.status.code(), Some(2));
    assert_eq!(m2["cache"]["hits"], 1);
    assert_eq!(m1["verdicts"][0], "unverified");
    assert_eq!(a.stdout, b.stdout);
}

#[test]
fn verify_runs_named_suites() {
    let e = Env::new();
    let o = e.run(&["verify", "appendix"]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).contains("appendix") && stdout(&o).contains("PASS"));
    let o = e.run(&["verify", "9", "--format", "json"]);
    let v: Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v[0]["outcome"], "pass");
}

use std::collections::BTreeSet;
use std::path::Path;
use std::process::{Command, Output};

use serde_json::Value;

fn holo(args: &[&str], cache: Option<&Path>) -> Output {
    let mut cmd = Command::new(env!("CARGO_BIN_EXE_holo"));
    cmd.args(args).env_remove("HOLO_CACHE_DIR");
    if let Some(dir) = cache {
        cmd.env("HOLO_CACHE_DIR", dir);
    }
    cmd.output().expect("holo runs")
}

fn json(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).unwrap_or_else(|e| panic!("{e}: {}", String::from_utf8_lossy(&out.stdout)))
}

// A five-element loop: identity row/column, every element self-inverse,
// (2*3)*3 != 2*(3*3).
const LOOP_5: &str = "5\n1 2 3 4 5\n2 1 4 5 3\n3 5 1 2 4\n4 3 5 1 2\n5 4 2 3 1\n";

#[test]
fn f_of_cyclic_12() {
    let out = holo(&["f", "builtin:cyclic:12"], None);
    assert_eq!(out.status.code(), Some(0));
    let v = json(&out);
    assert_eq!(v["f_value"], 12);
    assert_eq!(v["theorem_ok"], true);
}

#[test]
fn f_of_symmetric_3() {
    let v = json(&holo(&["f", "builtin:symmetric:3"], None));
    assert_eq!(v["f_value"], 6);
}

/// max over A in GL3(2) of the lcm over x of ord(v -> Av + x) on F2^3,
/// with vectors as 3-bit integers and matrices as column triples.
fn brute_force_e8() -> (u64, usize) {
    let apply = |cols: [u8; 3], v: u8| (0..3).filter(|i| v >> i & 1 == 1).fold(0, |acc, i| acc ^ cols[i]);
    let mut best = 0u64;
    let mut maps = 0;
    for c0 in 1..8u8 {
        for c1 in 1..8u8 {
            for c2 in 1..8u8 {
                let cols = [c0, c1, c2];
                let image: BTreeSet<u8> = (0..8).map(|v| apply(cols, v)).collect();
                if image.len() != 8 {
                    continue;
                }
                let mut l = 1u64;
                for x in 0..8u8 {
                    maps += 1;
                    let step = |w: u8| apply(cols, w) ^ x;
                    let k = (0..8u8)
                        .map(|start| {
                            let (mut w, mut len) = (step(start), 1u64);
                            while w != start {
                                w = step(w);
                                len += 1;
                            }
                            len
                        })
                        .fold(1, num_lcm);
                    l = num_lcm(l, k);
                }
                best = best.max(l);
            }
        }
    }
    (best, maps)
}

fn num_lcm(a: u64, b: u64) -> u64 {
    let (mut x, mut y) = (a, b);
    while y != 0 {
        (x, y) = (y, x % y);
    }
    a / x * b
}

#[test]
fn f_of_elementary_abelian_8() {
    let (expected, maps) = brute_force_e8();
    assert_eq!(maps, 1344);
    let v = json(&holo(&["f", "builtin:elementary_abelian:2:3"], None));
    assert_eq!(v["f_value"].as_u64(), Some(expected));
    assert!(expected <= 8);
    assert_eq!(v["theorem_ok"], true);
}

#[test]
fn trivial_group_corpus_passes() {
    let out = holo(&["verify", "--group", "builtin:cyclic:1"], None);
    assert_eq!(out.status.code(), Some(0));
    let v = json(&out);
    assert_eq!(v["summary"]["groups_checked"], 1);
    assert_eq!(v["records"][0]["f_value"], 1);
}

#[test]
fn non_associative_table_is_an_input_error() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("loop.ctab");
    std::fs::write(&path, LOOP_5).unwrap();
    let manifest = dir.path().join("corpus.toml");
    std::fs::write(&manifest, "[[group]]\nsource = \"ctab:loop.ctab\"\n\n[[group]]\nsource = \"builtin:cyclic:4\"\n").unwrap();
    let out = holo(&["verify", "--corpus", manifest.to_str().unwrap()], None);
    assert_eq!(out.status.code(), Some(2));
    let stderr = String::from_utf8_lossy(&out.stderr);
    assert!(stderr.to_lowercase().contains("associative"), "{stderr}");
}

#[test]
fn usage_errors_exit_2() {
    assert_eq!(holo(&["f", "cyclic:12"], None).status.code(), Some(2));
    assert_eq!(holo(&["f", "builtin:nonsense:3"], None).status.code(), Some(2));
    assert_eq!(holo(&["verify"], None).status.code(), Some(2));
    assert_eq!(holo(&["scan", "psl2", "--q-max", "100", "--expect", "((2"], None).status.code(), Some(2));
    assert_eq!(holo(&["simple", "--case", "psl2_6"], None).status.code(), Some(2));
}

#[test]
fn unexpected_scan_set_is_a_violation() {
    let out = holo(&["scan", "psl2", "--q-max", "1000", "--expect", "(2,3)"], None);
    assert_eq!(out.status.code(), Some(1));
    assert_eq!(json(&out)["matches_expected"], false);
}

#[test]
fn warm_cache_reproduces_the_cold_report() {
    let dir = tempfile::tempdir().unwrap();
    let cache = dir.path().join("cache");
    std::fs::create_dir(&cache).unwrap();
    let args = ["verify", "--group", "builtin:dihedral:6", "--group", "builtin:quaternion:8", "--group", "builtin:alternating:4"];
    let cold = holo(&args, Some(&cache));
    let files = std::fs::read_dir(&cache).unwrap().count();
    let warm = holo(&args, Some(&cache));
    let files_after = std::fs::read_dir(&cache).unwrap().count();
    let uncached = holo(&args, None);
    assert_eq!(cold.status.code(), Some(0));
    // one entry per group plus its characteristic quotients
    assert!(files >= 3);
    assert_eq!(files, files_after);
    assert_eq!(cold.stdout, warm.stdout);
    assert_eq!(cold.stdout, uncached.stdout);
}

#[test]
fn report_file_and_timings() {
    let dir = tempfile::tempdir().unwrap();
    let report = dir.path().join("r.json");
    let out = holo(&["verify", "--group", "builtin:cyclic:6", "--report", report.to_str().unwrap(), "--timings"], None);
    assert_eq!(out.status.code(), Some(0));
    let v: Value = serde_json::from_str(&std::fs::read_to_string(&report).unwrap()).unwrap();
    assert!(v["records"][0]["runtime_ms"].is_u64());
    let plain = json(&holo(&["verify", "--group", "builtin:cyclic:6"], None));
    assert!(plain["records"][0].get("runtime_ms").is_none());
}

//! End-to-end runs of the `ccs` binary.

use std::fs;
use std::path::PathBuf;
use std::process::{Command, Output};

use serde_json::Value;

fn ccs(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_ccs"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn scratch(name: &str) -> PathBuf {
    let dir = PathBuf::from(env!("CARGO_TARGET_TMPDIR")).join("cli");
    fs::create_dir_all(&dir).unwrap();
    dir.join(name)
}

fn write_gen(n: &str, format: &str, name: &str) -> String {
    let path = scratch(name);
    let o = ccs(&["gen", "-n", n, "--format", format, "-o", path.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stderr));
    path.to_str().unwrap().to_owned()
}

#[test]
fn gen_edgelist_of_unit_cube() {
    let o = ccs(&["gen", "-n", "1", "--format", "edgelist"]);
    assert_eq!(o.status.code(), Some(0));
    let text = stdout(&o);
    let lines: Vec<&str> = text
        .lines()
        .filter(|l| !l.starts_with('#') && !l.trim().is_empty())
        .collect();
    assert_eq!(lines.len(), 12);
}

#[test]
fn gen_json_carries_cube_metadata() {
    let o = ccs(&["gen", "-n", "2", "--format", "json"]);
    assert_eq!(o.status.code(), Some(0));
    let doc: Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(doc["vertex_count"], 72);
    assert_eq!(doc["edges"].as_array().unwrap().len(), 116);
    let outermost = doc["cubes"]
        .as_array()
        .unwrap()
        .iter()
        .filter(|c| c["role"] == "outermost")
        .count();
    assert_eq!(outermost, 8);
}

#[test]
fn gen_rejects_level_zero() {
    assert_eq!(ccs(&["gen", "-n", "0"]).status.code(), Some(2));
    assert_eq!(ccs(&["gen", "-n", "7"]).status.code(), Some(2));
}

#[test]
fn verify_reports_resolving_and_witness() {
    let g = write_gen("1", "json", "verify.json");
    let ok = ccs(&["verify", &g, "--landmarks", "0,1,3", "--variant", "edge"]);
    assert_eq!(ok.status.code(), Some(0));
    assert!(stdout(&ok).starts_with("resolving"));

    let bad = ccs(&["verify", &g, "--landmarks", "0,3"]);
    assert_eq!(bad.status.code(), Some(1));
    assert!(stdout(&bad).contains("share"));

    let json = ccs(&["verify", &g, "--landmarks", "0 3", "--json"]);
    let doc: Value = serde_json::from_slice(&json.stdout).unwrap();
    assert_eq!(doc["verdict"]["resolving"], false);
    assert!(doc["verdict"]["witness"].is_array());

    assert_eq!(ccs(&["verify", &g, "--landmarks", "0,x"]).status.code(), Some(2));
    assert_eq!(ccs(&["verify", &g, "--landmarks", "0,8"]).status.code(), Some(2));
    assert_eq!(ccs(&["verify", &g, "--landmarks", "1,1"]).status.code(), Some(2));
}

#[test]
fn verify_reads_landmark_file() {
    let g = write_gen("2", "edgelist", "verify2.txt");
    let lm = scratch("landmarks2.txt");
    let ids: Vec<String> = (1..9)
        .flat_map(|c| [c * 8 + 1, c * 8 + 2])
        .map(|v| v.to_string())
        .collect();
    fs::write(&lm, ids.join("\n")).unwrap();
    let o = ccs(&[
        "verify",
        &g,
        "--landmarks-file",
        lm.to_str().unwrap(),
        "--variant",
        "vertex",
    ]);
    assert_eq!(o.status.code(), Some(0), "{}", stdout(&o));
}

#[test]
fn solve_exact_and_greedy() {
    let g = write_gen("1", "json", "solve1.json");
    let o = ccs(&["solve", &g, "--variant", "edge", "--exact"]);
    let text = stdout(&o);
    assert_eq!(o.status.code(), Some(0));
    assert!(text.contains("size: 3") && text.contains("optimal: true"), "{text}");

    let path = scratch("p10.txt");
    let edges: String = (0..9).map(|i| format!("{i} {}\n", i + 1)).collect();
    fs::write(&path, edges).unwrap();
    for variant in ["edge", "vertex"] {
        let o = ccs(&["solve", path.to_str().unwrap(), "--variant", variant]);
        assert!(stdout(&o).contains("size: 1"));
    }

    let g2 = write_gen("2", "json", "solve2.json");
    let o = ccs(&["solve", &g2, "--greedy", "--json"]);
    assert_eq!(o.status.code(), Some(0));
    let doc: Value = serde_json::from_slice(&o.stdout).unwrap();
    assert!(doc["size"].as_u64().unwrap() >= 16);
    assert_eq!(doc["verified"], true);

    // 72 vertices exceed the default exact candidate limit
    assert_eq!(ccs(&["solve", &g2, "--exact"]).status.code(), Some(2));
}

#[test]
fn solve_exports_matrix() {
    let g = write_gen("1", "json", "matrix.json");
    let m = scratch("matrix.hs");
    let o = ccs(&["solve", &g, "--export-matrix", m.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0));
    let text = fs::read_to_string(m).unwrap();
    assert_eq!(text.lines().next(), Some("p hittingset 66 8"));
    assert_eq!(text.lines().count(), 67);
}

#[test]
fn certify_exit_codes() {
    let o = ccs(&["certify", "--n-max", "2"]);
    assert_eq!(o.status.code(), Some(0), "{}", stdout(&o));

    let json = ccs(&["certify", "--n-max", "2", "--json"]);
    let doc: Value = serde_json::from_slice(&json.stdout).unwrap();
    assert_eq!(doc["all_passed"], true);
    assert_eq!(json.stdout, ccs(&["certify", "--n-max", "2", "--json"]).stdout);

    assert_eq!(ccs(&["certify", "--n-max", "0"]).status.code(), Some(2));
    let dropped = ccs(&["certify", "--n-max", "2", "--drop-landmark", "0"]);
    assert_eq!(dropped.status.code(), Some(1));
}

#[test]
fn formats_round_trip_through_the_binary() {
    for (format, ext) in [
        ("json", "json"),
        ("edgelist", "txt"),
        ("graph6", "g6"),
        ("dimacs", "dimacs"),
    ] {
        let first = write_gen("2", format, &format!("rt.{ext}"));
        // read the file back and check the canonical landmarks
        let ids: Vec<String> = (1..9)
            .flat_map(|c| [c * 8 + 1, c * 8 + 2])
            .map(|v| v.to_string())
            .collect();
        let o = ccs(&["verify", &first, "--landmarks", &ids.join(",")]);
        assert_eq!(o.status.code(), Some(0), "{format}");
    }
    // emitting twice is byte-identical
    for format in ["json", "edgelist", "graph6", "dimacs"] {
        let a = ccs(&["gen", "-n", "2", "--format", format]).stdout;
        let b = ccs(&["gen", "-n", "2", "--format", format]).stdout;
        assert_eq!(a, b, "{format}");
    }
}

#[test]
fn random_graphs_are_seeded() {
    let a = ccs(&["random", "-n", "12", "--seed", "3"]).stdout;
    let b = ccs(&["random", "-n", "12", "--seed", "3"]).stdout;
    let c = ccs(&["random", "-n", "12", "--seed", "4"]).stdout;
    assert_eq!(a, b);
    assert_ne!(a, c);
}

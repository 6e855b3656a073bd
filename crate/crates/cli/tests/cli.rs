//! End-to-end tests of the `tga` binary: output shapes and exit codes.

use std::path::PathBuf;
use std::process::{Command, Output};

fn tree_file(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR"))
        .join("../../trees")
        .join(name)
}

fn tga(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_tga"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout_json(output: &Output) -> serde_json::Value {
    assert!(
        output.status.success(),
        "stderr: {}",
        String::from_utf8_lossy(&output.stderr)
    );
    serde_json::from_slice(&output.stdout).expect("stdout is JSON")
}

#[test]
fn indices_p3_level_one_agrees() {
    let tree = tree_file("p3.txt");
    let out = tga(&["indices", "--tree", tree.to_str().unwrap(), "-n", "1", "--mode", "both"]);
    let doc = stdout_json(&out);
    assert_eq!(doc["k"], 3);
    assert_eq!(doc["n"], 1);
    assert_eq!(doc["wiener"]["formula"], 4);
    assert_eq!(doc["wiener"]["oracle"], 4);
    assert_eq!(doc["wiener"]["agree"], true);
    assert_eq!(doc["szeged"]["formula"], 8);
    assert_eq!(doc["szeged"]["agree"], true);
    assert_eq!(doc["diameter"]["agree"], true);
    assert_eq!(doc["pm_count"]["formula"]["value"], 0);
    assert_eq!(doc["cycle_census"]["agree"], true);
    assert_eq!(doc["tutte_factored"]["agree"], true);
    assert_eq!(doc["asymptotic_ratio"]["formula"], "88/135");
}

#[test]
fn indices_reports_published_alongside() {
    let tree = tree_file("p3.txt");
    let out = tga(&["indices", "--tree", tree.to_str().unwrap(), "-n", "2"]);
    let doc = stdout_json(&out);
    // corrected drives agreement, published is reported side by side
    assert_eq!(doc["variant"], "corrected");
    assert_eq!(doc["spanning_trees"]["formula"]["value"], 64);
    assert_eq!(doc["spanning_trees"]["published"]["value"], 16);
    assert_eq!(doc["spanning_trees"]["oracle"], 64);
    assert_eq!(doc["spanning_trees"]["agree"], true);
    assert_eq!(doc["spanning_forests"]["formula"], 2025);
    assert_eq!(doc["spanning_forests"]["published"], 225);
    assert_eq!(doc["spanning_forests"]["agree"], true);
    assert_eq!(doc["wiener"]["formula"], 88);
}

#[test]
fn indices_formula_mode_skips_oracles() {
    let tree = tree_file("p2.txt");
    let out = tga(&[
        "indices", "--tree", tree.to_str().unwrap(), "-n", "30", "--mode", "formula",
    ]);
    let doc = stdout_json(&out);
    assert_eq!(doc["wiener"]["oracle"], serde_json::Value::Null);
    assert_eq!(doc["wiener"]["skipped"], "mode=formula");
    // 2^30-vertex values still come out exactly via the closed forms
    assert_eq!(doc["spanning_trees"]["formula"]["expr"], "2^30");
}

#[test]
fn graph_json_p2_level_three() {
    let tree = tree_file("p2.txt");
    let out = tga(&[
        "graph", "--tree", tree.to_str().unwrap(), "-n", "3", "--format", "json",
    ]);
    let doc = stdout_json(&out);
    assert_eq!(doc["k"], 2);
    assert_eq!(doc["vertices"].as_array().unwrap().len(), 8);
    assert_eq!(doc["edges"].as_array().unwrap().len(), 8);
}

#[test]
fn graph_dot_has_loops_and_parallels() {
    let tree = tree_file("p3.txt");
    let out = tga(&["graph", "--tree", tree.to_str().unwrap(), "-n", "1"]);
    assert!(out.status.success());
    let text = String::from_utf8_lossy(&out.stdout);
    assert_eq!(text.matches(" -- ").count(), 6);
}

#[test]
fn automaton_dot_shape() {
    let tree = tree_file("p3.txt");
    let out = tga(&["automaton", "--tree", tree.to_str().unwrap()]);
    assert!(out.status.success());
    let text = String::from_utf8_lossy(&out.stdout);
    assert_eq!(text.matches("->").count(), 9);
    assert!(text.contains("\"e1\" -> \"e1\" [label=\"1|2\"]"));
}

#[test]
fn tutte_eval_spot_value() {
    let tree = tree_file("p3.txt");
    let out = tga(&[
        "tutte", "--tree", tree.to_str().unwrap(), "-n", "2", "--eval", "1", "1",
    ]);
    let doc = stdout_json(&out);
    assert_eq!(doc["eval"]["value"], "64");
    assert_eq!(doc["display"], "y^6 (y + x)^2 (y + x + ... + x^3)^2");
    let out = tga(&[
        "tutte", "--tree", tree.to_str().unwrap(), "-n", "2", "--variant", "published",
        "--eval", "1", "1",
    ]);
    let doc = stdout_json(&out);
    assert_eq!(doc["eval"]["value"], "16");
}

#[test]
fn verify_default_corpus_passes() {
    // a reduced cap keeps the full suite quick here; the acceptance tests
    // run it at full size
    let out = tga(&["verify", "--max-vertices", "81"]);
    assert!(
        out.status.success(),
        "stderr: {}\nstdout: {}",
        String::from_utf8_lossy(&out.stderr),
        String::from_utf8_lossy(&out.stdout)
    );
    let text = String::from_utf8_lossy(&out.stdout);
    assert!(text.contains("0 failed"));
    assert!(text.contains("DISCREPANCY(expected)"));

    let out = tga(&["verify", "--max-vertices", "81", "--json"]);
    let doc = stdout_json(&out);
    assert_eq!(doc["summary"]["failed"], 0);
}

#[test]
fn verify_reads_a_corpus_directory() {
    let dir = tree_file("");
    let out = tga(&[
        "verify", "--corpus", dir.to_str().unwrap(), "--max-vertices", "27",
    ]);
    assert!(
        out.status.success(),
        "stderr: {}",
        String::from_utf8_lossy(&out.stderr)
    );
}

#[test]
fn exit_codes() {
    // 1: usage
    let out = tga(&["indices", "--no-such-flag"]);
    assert_eq!(out.status.code(), Some(1));
    // 2: invalid tree (a cycle)
    let dir = std::env::temp_dir().join("tga-cli-test");
    std::fs::create_dir_all(&dir).unwrap();
    let bad = dir.join("cycle.txt");
    std::fs::write(&bad, "1 2\n2 3\n3 1\n").unwrap();
    let out = tga(&["indices", "--tree", bad.to_str().unwrap(), "-n", "1"]);
    assert_eq!(out.status.code(), Some(2));
    // 2: missing file
    let out = tga(&["graph", "--tree", "/no/such/file.txt", "-n", "1"]);
    assert_eq!(out.status.code(), Some(2));
    // 3: size guard on the build cap
    let tree = tree_file("p3.txt");
    let out = Command::new(env!("CARGO_BIN_EXE_tga"))
        .args(["graph", "--tree", tree.to_str().unwrap(), "-n", "9"])
        .env("TGA_MAX_VERTICES", "100")
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(3));
    // 0 with the default cap
    let out = tga(&["graph", "--tree", tree.to_str().unwrap(), "-n", "9"]);
    assert_eq!(out.status.code(), Some(0));
}

#[test]
fn output_is_byte_deterministic() {
    let tree = tree_file("spider221.txt");
    let args = ["indices", "--tree", tree.to_str().unwrap(), "-n", "2"];
    assert_eq!(tga(&args).stdout, tga(&args).stdout);
    let args = ["graph", "--tree", tree.to_str().unwrap(), "-n", "2", "--format", "json"];
    assert_eq!(tga(&args).stdout, tga(&args).stdout);
}

use std::io::Write;
use std::process::{Command, Output, Stdio};

use textiles::format::SpecDocument;

fn fixture(name: &str) -> String {
    format!("{}/../core/fixtures/{name}", env!("CARGO_MANIFEST_DIR"))
}

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_textiles")).args(args).output().unwrap()
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn spec_part(text: &str) -> SpecDocument {
    let body: String = text.lines().filter(|l| !l.starts_with('#')).map(|l| format!("{l}\n")).collect();
    SpecDocument::parse(&body).unwrap_or_else(|e| panic!("{e:?}\n{body}"))
}

#[test]
fn validate_non_lr_system_succeeds() {
    let o = run(&["validate", "--input", &fixture("nonlr_bouquet.spec"), "--system", "bad"]);
    assert_eq!(o.status.code(), Some(0));
    let out = stdout(&o);
    assert!(out.contains("LR no"), "{out}");
    assert!(out.contains("lifts c2, l2"));
}

#[test]
fn every_fixture_validates() {
    for f in ["nonlr_bouquet.spec", "split_demo.spec", "split_pipeline.spec", "rigid_pairs.spec"] {
        let o = run(&["validate", "--input", &fixture(f)]);
        assert_eq!(o.status.code(), Some(0), "{f}: {}", stdout(&o));
    }
}

#[test]
fn pipeline_reports_equal_blocks() {
    let o = run(&["pipeline", "--input", &fixture("split_pipeline.spec"), "--twograph", "L", "--partition", "G", "--max-block", "3"]);
    assert_eq!(o.status.code(), Some(0));
    let out = stdout(&o);
    assert!(out.contains("block sets EQUAL up to 3x3"));
    assert!(out.contains("pruned: 5 tiles kept, 2 dropped"));
    let doc = spec_part(&out);
    assert_eq!(doc.textile("L.pruned").unwrap().squares(), doc.textile("L.target").unwrap().squares());
}

#[test]
fn blocks_are_deterministic_and_reparse() {
    let args = ["blocks", "--input", &fixture("split_pipeline.spec"), "--system", "T", "--size", "2x2"];
    let (a, b) = (run(&args), run(&args));
    assert_eq!(a.stdout, b.stdout);
    let doc = spec_part(&stdout(&a));
    let entry = &doc.blocks["T_2x2"];
    assert_eq!(entry.blocks.len(), 6);
    let t = doc.textile("T").unwrap();
    assert!(entry.blocks.iter().all(|x| x.is_admissible(t)));
}

#[test]
fn exit_codes() {
    let bad = fixture("nonlr_bouquet.spec");
    assert_eq!(run(&["to-2graph", "--input", &bad, "--system", "bad"]).status.code(), Some(1));
    assert_eq!(run(&["to-2graph", "--input", &bad, "--system", "nope"]).status.code(), Some(2));
    assert_eq!(run(&["to-2graph", "--input", "/no/such/file", "--system", "bad"]).status.code(), Some(2));
    assert_eq!(run(&["frobnicate"]).status.code(), Some(2));
    assert_eq!(run(&["blocks", "--input", &bad, "--system", "bad", "--size", "2by2"]).status.code(), Some(2));
}

#[test]
fn parse_errors_name_the_line() {
    let mut child = Command::new(env!("CARGO_BIN_EXE_textiles"))
        .args(["validate", "--input", "-"])
        .stdin(Stdio::piped())
        .stderr(Stdio::piped())
        .spawn()
        .unwrap();
    child
        .stdin
        .take()
        .unwrap()
        .write_all(b"format 1\n[twograph L]\nvertex x\nhorizontal a : x -> x\nvertical b : x -> x\nsquare s : left=b top=a right=b bottom=zz\n")
        .unwrap();
    let o = child.wait_with_output().unwrap();
    assert_eq!(o.status.code(), Some(1));
    let err = String::from_utf8(o.stderr).unwrap();
    assert!(err.contains("line 6") && err.contains("zz"), "{err}");
}

#[test]
fn base_split_hypothesis_failure_names_vertex() {
    let dir = std::env::temp_dir().join(format!("textiles-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join("straddle.spec");
    let mut text = std::fs::read_to_string(fixture("split_demo.spec")).unwrap();
    text.push_str("\n[partition EO : graph E]\nclass o 1 = {a}\nclass o 2 = {b}\n");
    std::fs::write(&path, text).unwrap();
    let o = run(&["split-base", "--input", path.to_str().unwrap(), "--system", "T", "--partition", "EO"]);
    assert_eq!(o.status.code(), Some(1));
    let err = String::from_utf8(o.stderr).unwrap();
    assert!(err.contains("hypothesis fails at u"), "{err}");
}

#[test]
fn split_commands_agree_and_reparse() {
    let f = fixture("split_pipeline.spec");
    let mut systems = Vec::new();
    for (cmd, part) in [("split-skeleton", "GT"), ("split-tiles", "FP"), ("split-base", "EP")] {
        let o = run(&[cmd, "--input", &f, "--system", "T", "--partition", part]);
        assert_eq!(o.status.code(), Some(0), "{cmd}");
        let doc = spec_part(&stdout(&o));
        systems.push(doc.textile("T_split").unwrap().clone());
        assert_eq!(doc.partition("T_split.tile_classes"), SpecDocument::parse(&std::fs::read_to_string(&f).unwrap()).unwrap().partition("FP"));
    }
    assert!(systems.windows(2).all(|w| w[0] == w[1]));
}

#[test]
fn equiv_check_from_each_start() {
    let f = fixture("split_pipeline.spec");
    for part in ["G", "FP", "EP"] {
        let o = run(&["equiv-check", "--input", &f, "--system", "T", "--partition", part]);
        assert_eq!(o.status.code(), Some(0), "{}", stdout(&o));
        assert!(stdout(&o).contains("all checks passed"));
    }
}

#[test]
fn machine_output_is_json() {
    let o = run(&["insplit-textile", "--input", &fixture("split_demo.spec"), "--system", "T", "--partition", "P", "--machine"]);
    assert_eq!(o.status.code(), Some(0));
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(v["command"], "insplit-textile");
    assert_eq!(v["result"]["lifting"]["lr"], false);
    assert_eq!(v["result"]["system"]["squares"].as_array().unwrap().len(), 6);
}

#[test]
fn enum_partitions_of_rigid_twograph() {
    let o = run(&["enum-partitions", "--input", &fixture("rigid_pairs.spec"), "--twograph", "L"]);
    let out = stdout(&o);
    assert!(out.contains("1 pairing partitions of L (0 nontrivial)"), "{out}");
    assert_eq!(spec_part(&out).partitions.len(), 1);
}

#[test]
fn conversions_and_inversion_round_trip() {
    let f = fixture("split_pipeline.spec");
    let o = run(&["to-2graph", "--input", &f, "--system", "T", "--name", "M"]);
    let doc = spec_part(&stdout(&o));
    let original = SpecDocument::parse(&std::fs::read_to_string(&f).unwrap()).unwrap();
    assert_eq!(doc.twographs["M"], original.twographs["L"]);
    let o = run(&["to-textile", "--input", &f, "--twograph", "L"]);
    assert_eq!(spec_part(&stdout(&o)).textile("L_textile"), original.textile("T"));
    let o = run(&["invert", "--input", &f, "--system", "T"]);
    assert_eq!(spec_part(&stdout(&o)).textile("T_inv").unwrap(), &original.textile("T").unwrap().inverted());
    let o = run(&["insplit-2g", "--input", &f, "--twograph", "L", "--partition", "G"]);
    assert_eq!(spec_part(&stdout(&o)).twographs["L_split"].num_squares(), 5);
}

#[test]
fn compare_blocks_and_output_file() {
    let f = fixture("split_pipeline.spec");
    let path = std::env::temp_dir().join(format!("textiles-cmp-{}.txt", std::process::id()));
    let o = run(&["compare-blocks", "--input", &f, "--left", "T", "--right", "T", "--max", "2x3", "-o", path.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0));
    assert!(o.stdout.is_empty());
    let text = std::fs::read_to_string(&path).unwrap();
    assert!(text.contains("block sets EQUAL up to 2x3"));
    let o = run(&["compare-blocks", "--input", &fixture("split_demo.spec"), "--left", "T", "--right", "T", "--max", "1x1"]);
    assert_eq!(o.status.code(), Some(0));
}

#[test]
fn blocks_match_golden_file() {
    let o = run(&["blocks", "--input", &fixture("split_pipeline.spec"), "--system", "T", "--size", "2x2"]);
    let golden = std::fs::read_to_string(fixture("split_pipeline_blocks_2x2.spec")).unwrap();
    assert_eq!(stdout(&o), golden);
}

use std::fs;
use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use hyreg::harness::formats::{load_threegraph, load_triad, parse_graph, parse_threegraph, save_threegraph};
use hyreg::hyperreg::{auxiliary_graph, octahedron_sum_naive};
use hyreg::rational::fmt_rational;
use hyreg::{ThreeGraph, VertexClass};
use serde_json::Value;

fn data(name: &str) -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("tests/data").join(name)
}

fn golden(name: &str) -> String {
    fs::read_to_string(Path::new(env!("CARGO_MANIFEST_DIR")).join("tests/golden").join(name)).unwrap()
}

fn hyreg(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_hyreg")).args(args).output().unwrap()
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn path(p: &Path) -> &str {
    p.to_str().unwrap()
}

#[test]
fn complete_pair_is_certified() {
    let g = data("complete.bg");
    let o = hyreg(&["check-pair", "--graph", path(&g), "--delta", "1/4", "--mode", "exhaustive", "--json"]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(stdout(&o), golden("check_pair_complete.json"));
    let plain = hyreg(&["check-pair", "--graph", path(&g), "--delta", "1/4", "--mode", "exhaustive"]);
    assert_eq!(stdout(&plain).trim(), "CertifiedRegular");
}

#[test]
fn irregular_pair_exits_one_with_witness() {
    let g = data("matching.bg");
    let o = hyreg(&["check-pair", "--graph", path(&g), "--eps", "1/4", "--mode", "exhaustive", "--json"]);
    assert_eq!(o.status.code(), Some(1));
    assert_eq!(stdout(&o), golden("check_pair_matching.json"));
    let v: Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v["report"]["status"], "IrregularWithWitness");
    assert!(v["report"]["witness"]["a_sub"].is_array());
}

#[test]
fn verify_suite_is_reproducible() {
    let o = hyreg(&["verify", "--suite", "claim-3.5", "--seed", "7", "--trials", "5", "--json"]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(stdout(&o), golden("verify_claim_3_5.json"));
    let full = hyreg(&["verify", "--suite", "claim-3.5", "--seed", "7", "--trials", "100"]);
    assert_eq!(full.status.code(), Some(0));
    assert!(stdout(&full).starts_with("claim-3.5: pass (100 trials, 0 failures"));
}

#[test]
fn timing_is_opt_in() {
    let args = ["verify", "--suite", "schedule", "--json"];
    let plain: Value = serde_json::from_str(&stdout(&hyreg(&args))).unwrap();
    assert!(plain.get("wall_time_ms").is_none());
    let mut timed = args.to_vec();
    timed.push("--timing");
    let timed: Value = serde_json::from_str(&stdout(&hyreg(&timed))).unwrap();
    assert!(timed["wall_time_ms"].is_u64());
}

#[test]
fn schedule_matches_golden() {
    let o = hyreg(&["schedule"]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(stdout(&o), golden("schedule.txt"));
    assert!(stdout(&o).contains("t = 2^250"));
}

#[test]
fn usage_and_format_errors_exit_two() {
    assert_eq!(hyreg(&["check-pair", "--graph", path(&data("complete.bg"))]).status.code(), Some(2));
    assert_eq!(hyreg(&["verify", "--suite", "no-such-suite"]).status.code(), Some(2));
    assert_eq!(hyreg(&["frobnicate"]).status.code(), Some(2));

    let dir = tempfile::tempdir().unwrap();
    let dup = dir.path().join("dup.h3");
    fs::write(&dup, "h3 2 2 2 2\n0 0 0\n# again\n0 0 0\n").unwrap();
    let o = hyreg(&["aux-graph", "--h", path(&dup), "--axis", "1"]);
    assert_eq!(o.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&o.stderr).contains("line 4"));

    let bad = dir.path().join("bad.bg");
    fs::write(&bad, "bg 2 2 1\n0 5\n").unwrap();
    assert_eq!(hyreg(&["check-pair", "--graph", path(&bad), "--eps", "1/2"]).status.code(), Some(2));
    assert_eq!(hyreg(&["check-pair", "--graph", path(&data("complete.bg")), "--eps", "3/2"]).status.code(), Some(2));
}

#[test]
fn quasirandom_sum_matches_naive() {
    let (h, t) = (data("small.h3"), data("small.tr"));
    let o = hyreg(&["quasirandom", "--h", path(&h), "--triad", path(&t), "--alpha", "1/100", "--json"]);
    assert_eq!(o.status.code(), Some(0));
    let v: Value = serde_json::from_str(&stdout(&o)).unwrap();
    let naive = octahedron_sum_naive(&load_threegraph(&h).unwrap(), &load_triad(&t).unwrap()).unwrap();
    assert_eq!(v["report"]["octahedron_sum"], fmt_rational(&naive));
    assert_eq!(v["report"]["bound"], "81/400");
}

#[test]
fn partition_checks() {
    let (g, p) = (data("matching.bg"), data("halves.vp"));
    let base = ["check-partition", "--graph", path(&g), "--left", path(&p), "--right", path(&p), "--delta", "1/4"];
    assert_eq!(hyreg(&base).status.code(), Some(1));
    let mut edits = base.to_vec();
    edits.push("--edits");
    let o = hyreg(&edits);
    assert_eq!(o.status.code(), Some(1));
    assert!(stdout(&o).starts_with("NotCertified"));

    let c = data("complete.bg");
    let dir = tempfile::tempdir().unwrap();
    let vp = dir.path().join("z.vp");
    fs::write(&vp, "vp 3 2\n0 1 1\n").unwrap();
    let o = hyreg(&["check-partition", "--graph", path(&c), "--left", path(&vp), "--right", path(&vp), "--delta", "1/2"]);
    assert_eq!(o.status.code(), Some(0));
}

#[test]
fn aux_graph_and_paste_write_files() {
    let dir = tempfile::tempdir().unwrap();
    let h = data("small.h3");
    let out = dir.path().join("aux.bg");
    let o = hyreg(&["aux-graph", "--h", path(&h), "--axis", "3", "--out", path(&out)]);
    assert_eq!(o.status.code(), Some(0));
    let written = parse_graph(&fs::read_to_string(&out).unwrap()).unwrap();
    let aux = auxiliary_graph(&load_threegraph(&h).unwrap(), 3).unwrap().graph;
    assert!(written.edges().eq(aux.edges()));
    assert_eq!((written.n_left(), written.n_right()), (aux.n_left(), aux.n_right()));

    let mut parts = Vec::new();
    for x in 0..6u32 {
        let cls = [0, 1, 2].map(|k| VertexClass::new((x + k) % 6, 2));
        let p = dir.path().join(format!("p{x}.h3"));
        save_threegraph(&p, &ThreeGraph::complete(cls).unwrap()).unwrap();
        parts.push(p);
    }
    let pasted = dir.path().join("pasted.h3");
    let mut args = vec!["paste", "--parts"];
    args.extend(parts.iter().map(|p| path(p)));
    args.extend(["--out", path(&pasted)]);
    assert_eq!(hyreg(&args).status.code(), Some(0));
    let h = parse_threegraph(&fs::read_to_string(&pasted).unwrap()).unwrap();
    assert_eq!(fmt_rational(&h.density()), "3/4");

    args.truncate(args.len() - 2);
    args.push("--json");
    let v: Value = serde_json::from_str(&stdout(&hyreg(&args))).unwrap();
    assert_eq!(v["density"], "3/4");
}

#[test]
fn fr_check_on_triad() {
    let o = hyreg(&[
        "check-fr",
        "--h",
        path(&data("small.h3")),
        "--triad",
        path(&data("small.tr")),
        "--eps",
        "1",
    ]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(stdout(&o).trim(), "CertifiedRegular");
}

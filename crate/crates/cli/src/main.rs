//! `hyreg`: command-line front end for the regularity checkers.
//!
//! Exit codes: 0 when the check passes, 1 when it does not, 2 on usage,
//! format or contract errors.

use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::Instant;

use anyhow::{bail, Context, Result};
use clap::{ArgGroup, Args, Parser, Subcommand, ValueEnum};
use hyreg::constructions::{func_e, func_t, func_w, func_wow, six_cycle_paste};
use hyreg::harness::formats::{
    format_graph, format_threegraph, load_graph, load_partition, load_threegraph, load_triad, load_twopartition,
};
use hyreg::harness::{canonical_json, run_suite_with};
use hyreg::hyperreg::{
    auxiliary_graph, check_delta_regular_3partition, check_fr_partition, check_fr_triad, check_quasirandom_partition,
    check_quasirandom_triad,
};
use hyreg::rational::{fmt_rational, parse_rational};
use hyreg::regcheck::{check_delta_partition_with_edits, check_level_regular, check_perfect_delta_partition};
use hyreg::{
    CheckParams, EditOutcome, Level, Mode, Rational, Status, SuiteSpec, ThreeGraph, TwoPartition, SUITE_IDS,
};
use serde_json::{json, Value};

#[derive(Parser)]
#[command(name = "hyreg", version, about = "Exact regularity checks for graphs, 3-graphs and 2-partitions")]
struct Cli {
    #[command(flatten)]
    global: Global,
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Args)]
struct Global {
    /// Master seed for randomized checks and suites
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
    #[arg(long, global = true, value_enum, default_value_t = ModeArg::Auto)]
    mode: ModeArg,
    /// Randomized restarts for checks; trial count for `verify`
    #[arg(long, global = true)]
    trials: Option<usize>,
    /// Largest smaller side searched exhaustively
    #[arg(long, global = true, default_value_t = 12)]
    max_exhaustive_side: usize,
    /// Print the report as JSON
    #[arg(long, global = true)]
    json: bool,
    /// Include wall time in the report
    #[arg(long, global = true)]
    timing: bool,
}

#[derive(Clone, Copy, ValueEnum)]
enum ModeArg {
    Exhaustive,
    Randomized,
    Auto,
}

#[derive(Subcommand)]
enum Cmd {
    /// ε- or ⟨δ⟩-regularity of a bipartite graph
    #[command(group(ArgGroup::new("level").required(true).args(["eps", "delta", "twice_sqrt"])))]
    CheckPair {
        #[arg(long)]
        graph: PathBuf,
        #[arg(long, value_parser = rational)]
        eps: Option<Rational>,
        #[arg(long, value_parser = rational)]
        delta: Option<Rational>,
        /// ⟨2√δ⟩-regularity for the given δ
        #[arg(long, value_parser = rational)]
        twice_sqrt: Option<Rational>,
    },
    /// Perfect ⟨δ⟩-regularity of a graph with respect to two vertex partitions
    CheckPartition {
        #[arg(long)]
        graph: PathBuf,
        #[arg(long)]
        left: PathBuf,
        #[arg(long)]
        right: PathBuf,
        #[arg(long, value_parser = rational)]
        delta: Rational,
        /// Use the level 2√δ instead of δ
        #[arg(long, conflicts_with = "edits")]
        twice_sqrt: bool,
        /// Allow deleting up to δ·e(G) edges
        #[arg(long)]
        edits: bool,
    },
    /// ⟨δ⟩-regularity of a 2-partition of a 3-graph
    #[command(name = "check-3partition")]
    Check3partition {
        #[arg(long)]
        h: PathBuf,
        #[arg(long)]
        tp: PathBuf,
        #[arg(long, value_parser = rational)]
        delta: Rational,
    },
    /// Frankl–Rödl ε-regularity of a triad or of an equipartition
    CheckFr {
        #[arg(long)]
        h: PathBuf,
        #[arg(long, value_parser = rational)]
        eps: Rational,
        #[command(flatten)]
        target: Target,
    },
    /// Octahedron-based α-quasirandomness of a triad or of an equipartition
    Quasirandom {
        #[arg(long)]
        h: PathBuf,
        #[arg(long, value_parser = rational)]
        alpha: Rational,
        #[command(flatten)]
        target: Target,
    },
    /// Auxiliary graph of a 3-graph along one axis, in `.bg` format
    AuxGraph {
        #[arg(long)]
        h: PathBuf,
        #[arg(long, value_parser = clap::value_parser!(u8).range(1..=3))]
        axis: u8,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Pastes six 3-graphs along the tight 6-cycle, in `.h3` format
    Paste {
        #[arg(long, num_args = 6, required = true)]
        parts: Vec<PathBuf>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Values of the schedule functions e, t, w and wow
    Schedule {
        #[arg(long, default_value_t = 4, value_parser = clap::value_parser!(u64).range(1..=8))]
        upto: u64,
    },
    /// Runs a registered property suite, or `all`
    Verify {
        #[arg(long)]
        suite: String,
        /// Size knob of the suite
        #[arg(long)]
        n: Option<usize>,
    },
}

#[derive(Args)]
struct Target {
    #[arg(long, conflicts_with = "tp")]
    triad: Option<PathBuf>,
    #[arg(long, requires_all = ["ell", "t", "eps2"])]
    tp: Option<PathBuf>,
    #[arg(long)]
    ell: Option<u64>,
    /// Expected number of clusters
    #[arg(long)]
    t: Option<usize>,
    #[arg(long, value_parser = rational)]
    eps2: Option<Rational>,
}

fn rational(s: &str) -> Result<Rational, String> {
    parse_rational(s).map_err(|e| e.to_string())
}

/// A finished command: whether it passed, its JSON report and a short text form.
struct Output {
    passed: bool,
    report: Value,
    text: String,
}

fn params(g: &Global) -> CheckParams {
    let mode = match g.mode {
        ModeArg::Exhaustive => Mode::Exhaustive,
        ModeArg::Randomized => Mode::Randomized,
        ModeArg::Auto => Mode::Auto,
    };
    let mut p = CheckParams { mode, max_exhaustive_side: g.max_exhaustive_side, seed: g.seed, ..CheckParams::default() };
    if let Some(t) = g.trials {
        p.random_trials = u32::try_from(t).unwrap_or(u32::MAX);
    }
    p
}

fn status_output(command: &str, status: Status, report: Value) -> Output {
    let passed = status == Status::CertifiedRegular;
    Output { passed, report: json!({ "command": command, "passed": passed, "report": report }), text: format!("{status:?}") }
}

fn to_value<T: serde::Serialize>(v: &T) -> Value {
    serde_json::to_value(v).expect("reports serialise")
}

fn write_or_print(text: &str, out: Option<&Path>) -> Result<()> {
    match out {
        Some(p) => std::fs::write(p, text).with_context(|| format!("writing {}", p.display())),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn load_target(target: &Target) -> Result<Either> {
    if let Some(t) = &target.triad {
        return Ok(Either::Triad(load_triad(t)?));
    }
    let Some(tp) = &target.tp else { bail!("one of --triad or --tp is required") };
    let (Some(ell), Some(t), Some(eps2)) = (target.ell, target.t, target.eps2.clone()) else {
        bail!("--tp requires --ell, --t and --eps2")
    };
    Ok(Either::Partition(load_twopartition(tp)?, ell, t, eps2))
}

enum Either {
    Triad(hyreg::Triad),
    Partition(TwoPartition, u64, usize, Rational),
}

fn run(cmd: &Cmd, g: &Global) -> Result<Output> {
    let p = params(g);
    Ok(match cmd {
        Cmd::CheckPair { graph, eps, delta, twice_sqrt } => {
            let gr = load_graph(graph)?;
            let (v, level) = if let Some(e) = eps {
                (hyreg::regcheck::check_eps_regular(&gr, e, &p)?, json!({ "eps": fmt_rational(e) }))
            } else if let Some(d) = delta {
                (check_level_regular(&gr, &Level::Exact(d.clone()), &p)?, json!({ "delta": fmt_rational(d) }))
            } else {
                let d = twice_sqrt.clone().expect("clap enforces one level");
                (check_level_regular(&gr, &Level::TwiceSqrt(d.clone()), &p)?, json!({ "twice_sqrt": fmt_rational(&d) }))
            };
            let mut out = status_output("check-pair", v.status, to_value(&v));
            out.report["level"] = level;
            if let Some(w) = &v.witness {
                out.text.push_str(&format!("\nwitness A' = {:?}\nwitness B' = {:?}", w.a_sub, w.b_sub));
            }
            out
        }
        Cmd::CheckPartition { graph, left, right, delta, twice_sqrt, edits } => {
            let gr = load_graph(graph)?;
            let (l, r) = (load_partition(left)?, load_partition(right)?);
            if *edits {
                let o = check_delta_partition_with_edits(&gr, &l, &r, delta, &p)?;
                let passed = !matches!(o, EditOutcome::NotCertified { .. });
                let text = match &o {
                    EditOutcome::PerfectlyRegular => "PerfectlyRegular".to_string(),
                    EditOutcome::RegularAfterEdits { count, .. } => format!("RegularAfterEdits ({count} edges removed)"),
                    EditOutcome::NotCertified { failing_pairs } => format!("NotCertified (failing pairs {failing_pairs:?})"),
                };
                Output { passed, report: json!({ "command": "check-partition", "passed": passed, "report": to_value(&o) }), text }
            } else {
                let level = if *twice_sqrt { Level::TwiceSqrt(delta.clone()) } else { Level::Exact(delta.clone()) };
                let v = check_perfect_delta_partition(&gr, &l, &r, &level, &p)?;
                let mut out = status_output("check-partition", v.status, to_value(&v));
                for pv in v.failing() {
                    out.text.push_str(&format!("\npair ({}, {}): {:?}", pv.left_block, pv.right_block, pv.verdict.status));
                }
                out
            }
        }
        Cmd::Check3partition { h, tp, delta } => {
            let (h, tp) = (load_threegraph(h)?, load_twopartition(tp)?);
            let rep = check_delta_regular_3partition(&h, &tp, delta, &p)?;
            let passed = rep.certified;
            let text = format!(
                "{}\ngoodness: {:?}",
                if passed { "Certified" } else { "NotCertified" },
                rep.goodness.status
            );
            Output { passed, report: json!({ "command": "check-3partition", "passed": passed, "report": to_value(&rep) }), text }
        }
        Cmd::CheckFr { h, eps, target } => {
            let h = load_threegraph(h)?;
            match load_target(target)? {
                Either::Triad(t) => {
                    let v = check_fr_triad(&h, &t, eps, &p)?;
                    status_output("check-fr", v.status, to_value(&v))
                }
                Either::Partition(tp, ell, t, eps2) => {
                    let rep = check_fr_partition(&h, &tp, ell, t, &eps2, eps, &p)?;
                    partition_output("check-fr", &rep)
                }
            }
        }
        Cmd::Quasirandom { h, alpha, target } => {
            let h = load_threegraph(h)?;
            match load_target(target)? {
                Either::Triad(t) => {
                    let rep = check_quasirandom_triad(&h, &t, alpha)?;
                    let text = format!(
                        "{}\nsum = {}\nbound = {}",
                        if rep.verdict { "Quasirandom" } else { "NotQuasirandom" },
                        fmt_rational(&rep.octahedron_sum),
                        fmt_rational(&rep.bound)
                    );
                    let passed = rep.verdict;
                    Output { passed, report: json!({ "command": "quasirandom", "passed": passed, "report": to_value(&rep) }), text }
                }
                Either::Partition(tp, ell, t, eps2) => {
                    let rep = check_quasirandom_partition(&h, &tp, ell, t, &eps2, alpha, &p)?;
                    partition_output("quasirandom", &rep)
                }
            }
        }
        Cmd::AuxGraph { h, axis, out } => {
            let aux = auxiliary_graph(&load_threegraph(h)?, usize::from(*axis))?;
            let text = format_graph(&aux.graph);
            if out.is_some() || !g.json {
                write_or_print(&text, out.as_deref())?;
            }
            let report = json!({
                "command": "aux-graph",
                "axis": axis,
                "left": aux.graph.n_left(),
                "right": aux.graph.n_right(),
                "edges": aux.graph.edge_count(),
                "passed": true,
            });
            Output { passed: true, report, text: String::new() }
        }
        Cmd::Paste { parts, out } => {
            let hs = parts.iter().map(|f| load_threegraph(f)).collect::<hyreg::Result<Vec<ThreeGraph>>>()?;
            let pasted = six_cycle_paste(&hs)?;
            if out.is_some() || !g.json {
                write_or_print(&format_threegraph(&pasted), out.as_deref())?;
            }
            let report = json!({
                "command": "paste",
                "edges": pasted.edge_count(),
                "density": fmt_rational(&pasted.density()),
                "passed": true,
            });
            Output { passed: true, report, text: String::new() }
        }
        Cmd::Schedule { upto } => schedule(*upto)?,
        Cmd::Verify { suite, n } => verify(suite, *n, g)?,
    })
}

fn partition_output(command: &str, rep: &hyreg::hyperreg::TriadPartitionReport) -> Output {
    let text = format!(
        "{}\nirregular mass = {}\nbound = {}\ncaveats = {}",
        if rep.passes { "Passes" } else { "Fails" },
        rep.irregular_mass,
        fmt_rational(&rep.bound),
        rep.caveats
    );
    Output { passed: rep.passes, report: json!({ "command": command, "passed": rep.passes, "report": to_value(rep) }), text }
}

fn schedule(upto: u64) -> Result<Output> {
    let mut rows = Vec::new();
    let mut text = String::new();
    for i in 1..=upto {
        let show = |r: hyreg::Result<hyreg::BigCount>| r.map_or_else(|e| format!("error: {e}"), |v| v.to_string());
        let (e, t, w, wow) = (func_e(i).to_string(), show(func_t(i)), show(func_w(i)), func_wow(i).to_string());
        text.push_str(&format!("i = {i}: e = {e}, t = {t}, w = {w}, wow = {wow}\n"));
        rows.push(json!({ "i": i, "e": e, "t": t, "w": w, "wow": wow }));
    }
    let mut checks = Vec::new();
    for i in 1..=upto.min(4) {
        let t = func_t(i)?;
        checks.push(json!({ "check": format!("t({i}) is a power of 2"), "holds": t.is_power_of_two() == Some(true) }));
        if i > 1 {
            let holds = t.ge(&func_t(i - 1)?.mul_pow2(2)?) == Some(true);
            checks.push(json!({ "check": format!("t({i}) >= 4 t({})", i - 1), "holds": holds }));
        }
    }
    let passed = checks.iter().all(|c| c["holds"] == json!(true));
    text.pop();
    Ok(Output { passed, report: json!({ "command": "schedule", "passed": passed, "values": rows, "checks": checks }), text })
}

fn verify(suite: &str, n: Option<usize>, g: &Global) -> Result<Output> {
    let ids: Vec<&str> = if suite == "all" { SUITE_IDS.to_vec() } else { vec![suite] };
    let mut reports = Vec::new();
    let mut text = Vec::new();
    for id in ids {
        let mut spec = SuiteSpec::new(id, g.seed);
        spec.trials = g.trials;
        spec.n = n;
        let r = run_suite_with(&spec, g.timing)?;
        text.push(format!(
            "{id}: {} ({} trials, {} failures, {} caveats)",
            if r.passed { "pass" } else { "FAIL" },
            r.trials,
            r.failures,
            r.caveats.len()
        ));
        reports.push(r);
    }
    let passed = reports.iter().all(|r| r.passed);
    let report = if reports.len() == 1 { to_value(&reports[0]) } else { to_value(&reports) };
    Ok(Output { passed, report, text: text.join("\n") })
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let start = Instant::now();
    match run(&cli.cmd, &cli.global) {
        Ok(mut out) => {
            if cli.global.json {
                if cli.global.timing && out.report.get("wall_time_ms").is_none() && out.report.is_object() {
                    out.report["wall_time_ms"] = json!(start.elapsed().as_millis() as u64);
                }
                println!("{}", canonical_json(&out.report));
            } else if !out.text.is_empty() {
                println!("{}", out.text);
                if cli.global.timing {
                    println!("wall time: {} ms", start.elapsed().as_millis());
                }
            }
            if out.passed {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(1)
            }
        }
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}

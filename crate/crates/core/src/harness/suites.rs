//! Generators and checkers for the registered property suites.

use num::{One, Signed, Zero};
use rand::seq::{IndexedRandom, SliceRandom};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde_json::{json, Value};

use super::formats::{format_graph, format_partition, format_threegraph, format_triad, format_twopartition};
use super::Outcome;
use crate::constructions::{
    func_e, func_fstar, func_t, func_twr, func_w, func_wow, random_refinement_chain, six_cycle_paste, BigCount,
};
use crate::error::{Error, Result};
use crate::graphs::{edge_disjoint_union, BipartiteGraph, ThreeGraph, Triad, VertexClass};
use crate::hyperreg::{
    auxiliary_graph, check_delta_regular_3partition, check_fr_triad, check_quasirandom_triad, f_total,
    octahedron_sum_fast, octahedron_sum_naive, reduction_check, reduction_identity, schacht_predicate,
    subtriad_hypothesis_check, triangle_count_bound,
};
use crate::partitions::{
    approx_refines, refinement_union_extract, restrict_to_classes, sub_partitions, Frame, TwoPartition,
    VertexPartition,
};
use crate::rational::{fmt_rational, int, ratio, Rational};
use crate::regcheck::{
    certified_eps_level, check_delta_partition_with_edits, check_delta_regular, check_eps_regular, degree_profile,
    CheckParams, EditOutcome, Status,
};

pub(super) struct Ctx {
    pub rng: ChaCha8Rng,
    pub seed: u64,
    pub n: usize,
}

impl Ctx {
    pub fn new(seed: u64, n: usize) -> Self {
        Ctx { rng: ChaCha8Rng::seed_from_u64(seed), seed, n }
    }

    fn size(&mut self, lo: usize) -> usize {
        self.rng.random_range(lo..=self.n.max(lo))
    }

    fn pick<T: Copy>(&mut self, xs: &[T]) -> T {
        *xs.choose(&mut self.rng).expect("non-empty choice")
    }

    fn graph(&mut self, left: VertexClass, right: VertexClass, p: f64) -> Result<BipartiteGraph> {
        let rng = &mut self.rng;
        BipartiteGraph::from_fn(left, right, |_, _| rng.random_bool(p))
    }

    fn threegraph(&mut self, classes: [VertexClass; 3], p: f64) -> Result<ThreeGraph> {
        let rng = &mut self.rng;
        ThreeGraph::from_fn(classes, |_, _, _| rng.random_bool(p))
    }

    /// Sorted random subset of `0..n` with at least `min` elements.
    fn subset(&mut self, n: usize, min: usize) -> Vec<usize> {
        let k = self.rng.random_range(min.clamp(1, n)..=n);
        let mut all: Vec<usize> = (0..n).collect();
        all.shuffle(&mut self.rng);
        let mut s = all[..k].to_vec();
        s.sort_unstable();
        s
    }

    /// Labels in `0..k`, each used at least once (requires `k ≤ n`).
    fn labels(&mut self, n: usize, k: usize) -> Vec<usize> {
        let mut labels: Vec<usize> = (0..n).map(|i| if i < k { i } else { self.rng.random_range(0..k) }).collect();
        labels.shuffle(&mut self.rng);
        labels
    }

    fn exact_edges(&mut self, left: VertexClass, right: VertexClass, m: usize) -> Result<BipartiteGraph> {
        let mut slots: Vec<usize> = (0..left.size * right.size).collect();
        slots.shuffle(&mut self.rng);
        BipartiteGraph::from_edges(left, right, slots[..m].iter().map(|&i| (i / right.size, i % right.size)))
    }
}

pub(super) struct TrialOutput {
    pub instance: String,
    pub outcome: Outcome,
    pub detail: Value,
}

fn verdict(ok: bool) -> Outcome {
    if ok {
        Outcome::Pass
    } else {
        Outcome::Fail
    }
}

fn caveat(instance: String, why: &str, mut detail: Value) -> TrialOutput {
    detail["caveat"] = json!(why);
    TrialOutput { instance, outcome: Outcome::Caveat, detail }
}

fn out(instance: String, ok: bool, detail: Value) -> TrialOutput {
    TrialOutput { instance, outcome: verdict(ok), detail }
}

fn q(r: &Rational) -> String {
    fmt_rational(r)
}

pub(super) struct Suite {
    pub id: &'static str,
    pub n: usize,
    pub trials: usize,
    pub body: fn(&mut Ctx) -> Result<TrialOutput>,
}

const SUITES: &[Suite] = &[
    Suite { id: "claim-3.1", n: 8, trials: 100, body: star_union },
    Suite { id: "claim-3.2", n: 12, trials: 100, body: refinement_union },
    Suite { id: "claim-3.3", n: 4, trials: 50, body: uniform_refinement },
    Suite { id: "claim-3.4", n: 3, trials: 30, body: restriction },
    Suite { id: "claim-3.5", n: 16, trials: 100, body: refinement_size },
    Suite { id: "lemma-a1", n: 10, trials: 50, body: slicing },
    Suite { id: "claim-a2", n: 10, trials: 50, body: degrees },
    Suite { id: "lemma-a3", n: 8, trials: 50, body: triangle_counting },
    Suite { id: "eq-red-d", n: 6, trials: 100, body: reduction_identities },
    Suite { id: "oct-equiv", n: 6, trials: 50, body: octahedron_equivalence },
    Suite { id: "def-4.3-nonneg", n: 6, trials: 50, body: octahedron_nonnegative },
    Suite { id: "claim-4.8", n: 4, trials: 25, body: reduction_pipeline },
    Suite { id: "schacht", n: 3, trials: 30, body: schacht_monotone },
    Suite { id: "paste-density", n: 4, trials: 20, body: paste_density },
    Suite { id: "schedule", n: 1, trials: 1, body: schedule },
];

pub const SUITE_IDS: [&str; 15] = [
    "claim-3.1",
    "claim-3.2",
    "claim-3.3",
    "claim-3.4",
    "claim-3.5",
    "lemma-a1",
    "claim-a2",
    "lemma-a3",
    "eq-red-d",
    "oct-equiv",
    "def-4.3-nonneg",
    "claim-4.8",
    "schacht",
    "paste-density",
    "schedule",
];

pub(super) fn lookup(id: &str) -> Option<&'static Suite> {
    SUITES.iter().find(|s| s.id == id)
}

fn classes3(sizes: [usize; 3]) -> [VertexClass; 3] {
    [0, 1, 2].map(|i| VertexClass::new(i as u32, sizes[i]))
}

/// Edge-disjoint families whose members are all ⟨1/4⟩-regular; the union
/// must be too.
fn star_union(ctx: &mut Ctx) -> Result<TrialOutput> {
    let delta = ratio(1, 4);
    let params = CheckParams::exhaustive();
    for attempt in 0..200 {
        let (nl, nr) = (ctx.size(1), ctx.size(1));
        let k = ctx.rng.random_range(2..=3);
        let support = ctx.pick(&[1.0, 0.95, 0.85]);
        let main = ctx.pick(&[1.0, 0.97, 0.9, 0.6]);
        let (l, r) = (VertexClass::new(0, nl), VertexClass::new(1, nr));
        let mut parts = vec![Vec::new(); k];
        for x in 0..nl {
            for y in 0..nr {
                if ctx.rng.random_bool(support) {
                    let i = if ctx.rng.random_bool(main) { 0 } else { ctx.rng.random_range(1..k) };
                    parts[i].push((x, y));
                }
            }
        }
        let members =
            parts.into_iter().map(|e| BipartiteGraph::from_edges(l, r, e)).collect::<Result<Vec<_>>>()?;
        let mut ok = true;
        for g in &members {
            if !check_delta_regular(g, &delta, &params)?.is_certified() {
                ok = false;
                break;
            }
        }
        if !ok {
            continue;
        }
        let union = edge_disjoint_union(&members)?;
        let v = check_delta_regular(&union, &delta, &params)?;
        let instance: String = members.iter().map(format_graph).collect();
        let detail = json!({
            "sides": [nl, nr],
            "members": members.iter().map(BipartiteGraph::edge_count).collect::<Vec<_>>(),
            "attempts": attempt + 1,
            "union": v.status,
        });
        return Ok(out(instance, v.is_certified(), detail));
    }
    Ok(caveat(String::new(), "no qualifying family generated", json!({})))
}

/// Perturbed refinement of a random partition.
fn perturbed_refinement(ctx: &mut Ctx, p: &VertexPartition, moves: usize) -> Result<VertexPartition> {
    let mut labels: Vec<usize> = Vec::with_capacity(p.n());
    let mut next = 0;
    let mut fine = vec![0; p.n()];
    for b in p.blocks() {
        let parts = ctx.rng.random_range(1..=b.len().min(3));
        let ls = ctx.labels(b.len(), parts);
        for (v, l) in b.iter().zip(ls) {
            fine[*v] = next + l;
        }
        next += parts;
    }
    labels.extend_from_slice(&fine);
    for _ in 0..moves {
        let v = ctx.rng.random_range(0..p.n());
        labels[v] = ctx.rng.random_range(0..=next);
    }
    VertexPartition::from_labels(&labels)
}

fn random_partition(ctx: &mut Ctx, n: usize, max_k: usize) -> Result<VertexPartition> {
    let k = ctx.rng.random_range(1..=max_k.min(n));
    let labels = ctx.labels(n, k);
    VertexPartition::from_labels(&labels)
}

fn refinement_union(ctx: &mut Ctx) -> Result<TrialOutput> {
    for _ in 0..100 {
        let n = ctx.size(2);
        let p = random_partition(ctx, n, 4)?;
        let delta = ctx.pick(&[(1, 16), (1, 8), (1, 4), (1, 2)]);
        let delta = ratio(delta.0, delta.1);
        let moves = ctx.rng.random_range(0..=2);
        let qp = perturbed_refinement(ctx, &p, moves)?;
        if !approx_refines(&qp, &p, &delta)? {
            continue;
        }
        let instance = format_partition(&p) + &format_partition(&qp);
        return Ok(match refinement_union_extract(&qp, &p, &delta) {
            Ok((pi, set)) => {
                let block = p.block(pi);
                let inter = set.iter().filter(|&&v| p.label(v) == pi).count();
                let sym = block.len() + set.len() - 2 * inter;
                let ok = int(sym as u64) <= int(3) * &delta * int(block.len() as u64);
                out(instance, ok, json!({"delta": q(&delta), "block": pi, "sym_diff": sym, "block_size": block.len()}))
            }
            Err(Error::PreconditionFailed(m)) => out(instance, false, json!({"delta": q(&delta), "error": m})),
            Err(e) => return Err(e),
        });
    }
    Ok(caveat(String::new(), "no approximate refinement generated", json!({})))
}

/// Frame with each class split into one or two clusters, complete graphs.
fn clustered_frame(ctx: &mut Ctx, sizes: [usize; 3]) -> Result<(Frame, TwoPartition)> {
    let frame = Frame::new(sizes);
    let mut labels = Vec::with_capacity(frame.total());
    let mut base = 0;
    for &s in &sizes {
        let k = ctx.rng.random_range(1..=s.min(2));
        labels.extend(ctx.labels(s, k).into_iter().map(|l| base + l));
        base += k;
    }
    Ok((frame, TwoPartition::complete(VertexPartition::from_labels(&labels)?)?))
}

fn uniform_refinement(ctx: &mut Ctx) -> Result<TrialOutput> {
    let params = CheckParams::exhaustive();
    for _ in 0..50 {
        let sizes = [ctx.size(2), ctx.size(2), ctx.size(1)];
        let (frame, tp) = clustered_frame(ctx, sizes)?;
        let delta = ctx.pick(&[(1, 16), (1, 8), (1, 4)]);
        let delta = ratio(delta.0, delta.1);
        let sp = sub_partitions(&tp, &frame)?;
        let e3 = sp.edge_partitions[2].to_vertex_partition()?;
        let groups = ctx.rng.random_range(1..=e3.order().min(2));
        let grouping = ctx.labels(e3.order(), groups);
        let mut labels: Vec<usize> = (0..e3.n()).map(|v| grouping[e3.label(v)]).collect();
        for _ in 0..ctx.rng.random_range(0..=2) {
            let v = ctx.rng.random_range(0..labels.len());
            labels[v] = ctx.rng.random_range(0..groups);
        }
        let gp = VertexPartition::from_labels(&labels)?;
        if !approx_refines(&e3, &gp, &delta)? {
            continue;
        }
        let (c1, c2) = (frame.class(0), frame.class(1));
        let three = int(3) * &delta;
        let mut outcomes = Vec::new();
        for b in gp.blocks() {
            let mut mask = vec![false; e3.n()];
            for &i in b {
                mask[i] = true;
            }
            let g = BipartiteGraph::from_fn(c1, c2, |x, y| mask[x * sizes[1] + y])?;
            let o = check_delta_partition_with_edits(&g, &sp.class_partitions[0], &sp.class_partitions[1], &three, &params)?;
            outcomes.push(!matches!(o, EditOutcome::NotCertified { .. }));
        }
        let instance = format_twopartition(&tp) + &format_partition(&gp);
        let detail = json!({"delta": q(&delta), "sizes": sizes, "certified_blocks": outcomes});
        return Ok(if outcomes.iter().any(|&c| c) {
            out(instance, true, detail)
        } else {
            caveat(instance, "edit heuristic certified no block", detail)
        });
    }
    Ok(caveat(String::new(), "no approximate refinement generated", json!({})))
}

fn restriction(ctx: &mut Ctx) -> Result<TrialOutput> {
    let params = CheckParams::exhaustive();
    for _ in 0..30 {
        let n = ctx.size(2);
        let sizes = [n; 3];
        let subs: Vec<Vec<usize>> = (0..3).map(|_| ctx.subset(n, 1)).collect();
        let frame = Frame::new(sizes);
        let mut labels = Vec::with_capacity(frame.total());
        for (c, s) in subs.iter().enumerate() {
            let inside: Vec<bool> = (0..n).map(|v| s.contains(&v)).collect();
            labels.extend((0..n).map(|v| 2 * c + usize::from(inside[v])));
        }
        let tp = TwoPartition::complete(VertexPartition::from_labels(&labels)?)?;
        let p = ctx.pick(&[0.5, 0.75, 0.9]);
        let h = ctx.threegraph(classes3(sizes), p)?;
        let delta = ctx.pick(&[(1, 4), (1, 2)]);
        let delta = ratio(delta.0, delta.1);
        if h.edge_count() == 0 || !check_delta_regular_3partition(&h, &tp, &delta, &params)?.certified {
            continue;
        }
        let sub_refs = [&subs[0][..], &subs[1][..], &subs[2][..]];
        let hp = h.induced(sub_refs)?;
        if hp.edge_count() == 0 {
            continue;
        }
        let alpha = ratio(hp.edge_count() as u64, h.edge_count() as u64);
        let scaled = &delta / &alpha;
        let instance = format_threegraph(&h) + &format_twopartition(&tp);
        let mut detail = json!({"delta": q(&delta), "alpha": q(&alpha), "scaled": q(&scaled)});
        if scaled >= Rational::one() {
            detail["trivial"] = json!(true);
            return Ok(out(instance, true, detail));
        }
        let tpp = restrict_to_classes(&tp, &frame, sub_refs)?;
        let rep = check_delta_regular_3partition(&hp, &tpp, &scaled, &params)?;
        detail["goodness"] = json!(rep.goodness.status);
        return Ok(if rep.certified {
            out(instance, true, detail)
        } else if rep.goodness.status == Status::IrregularWithWitness {
            out(instance, false, detail)
        } else {
            caveat(instance, "edit heuristic did not certify the restriction", detail)
        });
    }
    Ok(caveat(String::new(), "no certified instance generated", json!({})))
}

fn refinement_size(ctx: &mut Ctx) -> Result<TrialOutput> {
    let half = ratio(1, 2);
    for _ in 0..100 {
        let k = ctx.size(1);
        let b = ctx.rng.random_range(1..=3);
        let n = k * b;
        let mut labels: Vec<usize> = (0..n).map(|v| v / b).collect();
        labels.shuffle(&mut ctx.rng);
        let p = VertexPartition::from_labels(&labels)?;
        let moves = ctx.rng.random_range(0..=n / 4);
        let mut fine = perturbed_refinement(ctx, &p, moves)?.labels().to_vec();
        let merges = ctx.rng.random_range(0..=k);
        for _ in 0..merges {
            let (a, c) = (ctx.rng.random_range(0..n), ctx.rng.random_range(0..n));
            let (la, lc) = (fine[a], fine[c]);
            for l in fine.iter_mut() {
                if *l == lc {
                    *l = la;
                }
            }
        }
        let qp = VertexPartition::from_labels(&fine)?;
        if !approx_refines(&qp, &p, &half)? {
            continue;
        }
        let ok = 4 * qp.order() >= p.order();
        let instance = format_partition(&p) + &format_partition(&qp);
        return Ok(out(instance, ok, json!({"p": p.order(), "q": qp.order()})));
    }
    Ok(caveat(String::new(), "no approximate refinement generated", json!({})))
}

fn random_pair(ctx: &mut Ctx) -> Result<BipartiteGraph> {
    let (nl, nr) = (ctx.size(2), ctx.size(2));
    let p = ctx.pick(&[0.2, 0.4, 0.5, 0.6, 0.8, 0.95]);
    ctx.graph(VertexClass::new(0, nl), VertexClass::new(1, nr), p)
}

fn ceil_frac(r: &Rational, n: usize) -> usize {
    (r * int(n as u64)).ceil().to_integer().try_into().unwrap_or(n)
}

fn slicing(ctx: &mut Ctx) -> Result<TrialOutput> {
    let params = CheckParams::exhaustive();
    let g = random_pair(ctx)?;
    let eps = certified_eps_level(&g, 20, &params)?;
    let lo = (eps.clone() * int(20)).ceil().to_integer().try_into().unwrap_or(20u64).max(1);
    let alpha = ratio(ctx.rng.random_range(lo..=20), 20);
    let a = ctx.subset(g.n_left(), ceil_frac(&alpha, g.n_left()));
    let b = ctx.subset(g.n_right(), ceil_frac(&alpha, g.n_right()));
    let sub = g.induced_subgraph(&a, &b)?;
    let level = (int(2) * &eps / &alpha).min(Rational::one());
    let v = check_eps_regular(&sub, &level, &params)?;
    let drift = (sub.density() - g.density()).abs();
    let ok = v.is_certified() && drift <= eps;
    let detail = json!({"eps": q(&eps), "alpha": q(&alpha), "level": q(&level), "status": v.status, "drift": q(&drift)});
    Ok(out(format_graph(&g), ok, detail))
}

fn degrees(ctx: &mut Ctx) -> Result<TrialOutput> {
    let params = CheckParams::exhaustive();
    let g = random_pair(ctx)?;
    let eps = certified_eps_level(&g, 20, &params)?;
    let y = ctx.subset(g.n_right(), ceil_frac(&eps, g.n_right()));
    let prof = degree_profile(&g, &y, &eps)?;
    let ok = int(prof.exceptional_count as u64) <= int(2) * &eps * int(g.n_left() as u64);
    let detail = json!({"eps": q(&eps), "subset": y.len(), "exceptional": prof.exceptional_count});
    Ok(out(format_graph(&g), ok, detail))
}

fn random_triad(ctx: &mut Ctx, sizes: [usize; 3]) -> Result<Triad> {
    let [a, b, c] = classes3(sizes);
    let ps = [0.3, 0.5, 0.7, 0.9, 1.0];
    let (p0, p1, p2) = (ctx.pick(&ps), ctx.pick(&ps), ctx.pick(&ps));
    Triad::new(ctx.graph(a, b, p0)?, ctx.graph(a, c, p1)?, ctx.graph(b, c, p2)?)
}

fn triangle_counting(ctx: &mut Ctx) -> Result<TrialOutput> {
    let params = CheckParams::exhaustive();
    let sizes = [ctx.size(2), ctx.size(2), ctx.size(2)];
    let [a, b, c] = classes3(sizes);
    let p = ctx.pick(&[0.3, 0.5, 0.8]);
    let complete = Triad::new(ctx.graph(a, b, p)?, BipartiteGraph::complete(a, c)?, BipartiteGraph::complete(b, c)?)?;
    let exact = triangle_count_bound(&complete, &Rational::zero())?;
    let exact_ok = int(exact.triangle_count) == exact.predicted;

    let t = random_triad(ctx, sizes)?;
    let eps = certified_eps_level(t.ac(), 20, &params)?.max(certified_eps_level(t.bc(), 20, &params)?);
    let band = triangle_count_bound(&t, &eps)?;
    let instance = format_triad(&complete) + &format_triad(&t);
    let detail = json!({"exact": exact_ok, "eps": q(&eps), "count": band.triangle_count, "predicted": q(&band.predicted), "in_band": band.in_band});
    Ok(out(instance, exact_ok && band.in_band, detail))
}

fn reduction_identities(ctx: &mut Ctx) -> Result<TrialOutput> {
    let sizes = [ctx.size(1), ctx.size(1), ctx.size(1)];
    let p = ctx.pick(&[0.3, 0.5, 0.7]);
    let h = ctx.threegraph(classes3(sizes), p)?;
    let (a, b, c) = (ctx.subset(sizes[0], 1), ctx.subset(sizes[1], 1), ctx.subset(sizes[2], 1));
    let (ca, cb) = (VertexClass::new(0, a.len()), VertexClass::new(1, b.len()));
    let mut e = ctx.graph(ca, cb, 0.5)?;
    if e.edge_count() == 0 {
        e = BipartiteGraph::from_edges(ca, cb, [(0, 0)])?;
    }
    let aux = auxiliary_graph(&h, 3)?.graph;
    let (aux_density, stats) = reduction_identity(&h, &aux, &e, [&a, &b, &c])?;
    let expected = (e.edge_count() * c.len()) as u64;
    let ok = aux_density == stats.density && stats.triangle_count == expected;
    let instance = format_threegraph(&h) + &format_graph(&e);
    let detail = json!({"aux": q(&aux_density), "triad": q(&stats.density), "count": stats.triangle_count, "expected": expected});
    Ok(out(instance, ok, detail))
}

fn octahedron_equivalence(ctx: &mut Ctx) -> Result<TrialOutput> {
    let n = ctx.size(1);
    let t = random_triad(ctx, [n; 3])?;
    let p = ctx.pick(&[0.2, 0.5, 0.8]);
    let h = ctx.threegraph(classes3([n; 3]), p)?;
    let naive = octahedron_sum_naive(&h, &t)?;
    let fast = octahedron_sum_fast(&h, &t)?;
    let total = f_total(&h, &t)?;
    let ok = naive == fast && fast >= Rational::zero() && total.is_zero();
    let instance = format_threegraph(&h) + &format_triad(&t);
    Ok(out(instance, ok, json!({"n": n, "sum": q(&fast), "f_total": q(&total)})))
}

fn octahedron_nonnegative(ctx: &mut Ctx) -> Result<TrialOutput> {
    let n = ctx.size(1);
    let [a, b, c] = classes3([n; 3]);
    let m = ctx.rng.random_range(0..=n * n);
    let t = Triad::new(ctx.exact_edges(a, b, m)?, ctx.exact_edges(a, c, m)?, ctx.exact_edges(b, c, m)?)?;
    let p = ctx.pick(&[0.2, 0.5, 0.8]);
    let h = ctx.threegraph(classes3([n; 3]), p)?;
    let alpha = ratio(ctx.rng.random_range(1..=10), 10);
    let rep = check_quasirandom_triad(&h, &t, &alpha)?;
    let ok = rep.octahedron_sum >= Rational::zero()
        && rep.verdict == (rep.octahedron_sum <= rep.bound)
        && !rep.unequal_densities;
    let instance = format_threegraph(&h) + &format_triad(&t);
    Ok(out(instance, ok, json!({"sum": q(&rep.octahedron_sum), "bound": q(&rep.bound), "verdict": rep.verdict})))
}

/// Cluster-level 3-graph: each cluster triple is empty, complete, or noisy.
fn cluster_threegraph(ctx: &mut Ctx, n: usize, z: &VertexPartition) -> Result<ThreeGraph> {
    let k = z.order();
    let mut mode = vec![0u8; k * k * k];
    for m in mode.iter_mut() {
        *m = ctx.pick(&[0, 1, 1, 2]);
    }
    let frame = Frame::new([n; 3]);
    let cl = |class: usize, v: usize| z.label(frame.global(class, v));
    let rng = &mut ctx.rng;
    ThreeGraph::from_fn(classes3([n; 3]), |x, y, w| match mode[(cl(0, x) * k + cl(1, y)) * k + cl(2, w)] {
        0 => false,
        1 => true,
        _ => rng.random_bool(0.85),
    })
}

fn reduction_pipeline(ctx: &mut Ctx) -> Result<TrialOutput> {
    let params = CheckParams::exhaustive();
    let n = ctx.pick(&[2usize, 4]).min(ctx.n.max(2));
    let c = ctx.pick(&[1usize, 2]).min(n);
    let mut labels = Vec::with_capacity(3 * n);
    for class in 0..3 {
        let chain = random_refinement_chain(n, &[n / c], ctx.rng.random())?;
        labels.extend(chain[0].labels().iter().map(|&l| class * n + l));
    }
    let tp = TwoPartition::complete(VertexPartition::from_labels(&labels)?)?;
    let delta = ctx.pick(&[(1, 16), (1, 8), (1, 4)]);
    let delta = ratio(delta.0, delta.1);
    let eps2 = &delta * &delta / int(88);
    let t = tp.z().order();
    for attempt in 0..50 {
        let h = cluster_threegraph(ctx, n, tp.z())?;
        let hyp = subtriad_hypothesis_check(&h, &tp, &delta, &params)?;
        if hyp.status != Status::CertifiedRegular || !hyp.fully_exhaustive {
            continue;
        }
        let rep = reduction_check(&h, &tp, &delta, 1, t, &eps2, &params)?;
        let instance = format_threegraph(&h) + &format_twopartition(&tp);
        let detail = json!({
            "n": n, "cluster": c, "delta": q(&delta), "eps2": q(&eps2), "attempts": attempt + 1,
            "preconditions": rep.preconditions_met, "pairs": rep.pairs.status, "identities": rep.identities.len(),
        });
        return Ok(out(instance, rep.certified, detail));
    }
    Ok(caveat(format_twopartition(&tp), "no 3-graph passed the hypothesis filter", json!({"n": n})))
}

fn schacht_monotone(ctx: &mut Ctx) -> Result<TrialOutput> {
    let params = CheckParams::exhaustive();
    let n = ctx.size(2);
    let t = random_triad(ctx, [n; 3])?;
    let p = ctx.pick(&[0.5, 0.9, 1.0]);
    let h = ctx.threegraph(classes3([n; 3]), p)?;
    let eps = ratio(ctx.rng.random_range(1..=3), 4);
    let reps = (1..=3).map(|c| schacht_predicate(&t, &h, &eps, c, &params)).collect::<Result<Vec<_>>>()?;
    let monotone = reps.windows(2).all(|w| {
        (!w[1].hypothesis || w[0].hypothesis)
            && (!w[1].quasirandom || w[0].quasirandom)
            && (0..3).all(|i| w[1].sides[i] != Status::CertifiedRegular || w[0].sides[i] == Status::CertifiedRegular)
    });
    let fr = check_fr_triad(&h, &t, &eps, &CheckParams::default().with_seed(ctx.seed))?;
    let instance = format_threegraph(&h) + &format_triad(&t);
    let detail = json!({
        "eps": q(&eps),
        "hypothesis": reps.iter().map(|r| r.hypothesis).collect::<Vec<_>>(),
        "fr_status": fr.status,
    });
    Ok(out(instance, monotone, detail))
}

fn paste_parts(ctx: &mut Ctx, n: usize, edges: impl Fn(&mut Ctx) -> usize) -> Result<Vec<ThreeGraph>> {
    (0..6u32)
        .map(|x| {
            let classes = [0, 1, 2].map(|k| VertexClass::new((x + k) % 6, n));
            let m = edges(ctx);
            let mut slots: Vec<usize> = (0..n * n * n).collect();
            slots.shuffle(&mut ctx.rng);
            ThreeGraph::from_triples(classes, slots[..m].iter().map(|&s| (s / (n * n), (s / n) % n, s % n)))
        })
        .collect()
}

fn paste_density(ctx: &mut Ctx) -> Result<TrialOutput> {
    let n = 2 * ctx.rng.random_range(1..=(ctx.n / 2).max(1));
    let cube = n * n * n;
    let full = paste_parts(ctx, n, |_| cube)?;
    let half = paste_parts(ctx, n, |_| cube / 2)?;
    let mixed = paste_parts(ctx, n, |c| c.rng.random_range(0..=cube))?;
    let (hf, hh, hm) = (six_cycle_paste(&full)?, six_cycle_paste(&half)?, six_cycle_paste(&mixed)?);
    let total: usize = mixed.iter().map(ThreeGraph::edge_count).sum();
    let ok = hf.density() == ratio(6, 8)
        && hh.density() == ratio(3, 8)
        && hm.edge_count() == total
        && hm.density() == ratio(total as u64, 8 * cube as u64);
    let instance: String = mixed.iter().map(format_threegraph).collect();
    let detail = json!({"n": n, "full": q(&hf.density()), "half": q(&hh.density()), "mixed_edges": total});
    Ok(out(instance, ok, detail))
}

fn schedule(_: &mut Ctx) -> Result<TrialOutput> {
    let p2 = |k: u64| BigCount::pow2(BigCount::from(k));
    let mut checks: Vec<(String, bool)> = vec![
        ("e(3) = 8192".into(), func_e(3) == BigCount::from(8192)),
        ("t(1) = 2^250".into(), func_t(1)? == p2(250)?),
        ("w(1) = 1".into(), func_w(1)? == BigCount::from(1)),
        ("w(2) = 2^239".into(), func_w(2)? == p2(239)?),
        ("twr(3) = 16".into(), func_twr(3) == BigCount::from(16)),
    ];
    for i in 1..=4 {
        let t = func_t(i)?;
        checks.push((format!("t({i}) is a power of 2"), t.is_power_of_two() == Some(true)));
        if i > 1 {
            let prev = func_t(i - 1)?.mul_pow2(2)?;
            checks.push((format!("t({i}) >= 4 t({})", i - 1), t.ge(&prev) == Some(true)));
        }
        let fs = func_fstar(|x| Ok(BigCount::from(x)), i)?;
        checks.push((format!("f*({i}) is a power of 2"), fs.is_power_of_two() == Some(true)));
        checks.push((format!("f*({i}) >= f({i})"), fs.ge(&BigCount::from(i)) == Some(true)));
    }
    for i in 2..=3 {
        checks.push((format!("w({i}) >= wow({i})"), func_w(i)?.ge(&func_wow(i)) == Some(true)));
    }
    let ok = checks.iter().all(|c| c.1);
    let values = json!({
        "t": (1..=4).map(|i| func_t(i).map(|t| t.to_string())).collect::<Result<Vec<_>>>()?,
        "w": (1..=4).map(|i| func_w(i).map(|w| w.to_string())).collect::<Result<Vec<_>>>()?,
        "wow": (1..=4).map(|i| func_wow(i).to_string()).collect::<Vec<_>>(),
        "w1_ge_wow1": func_w(1)?.ge(&func_wow(1)),
    });
    let detail = json!({
        "checks": checks.iter().map(|(k, v)| json!({"check": k, "holds": v})).collect::<Vec<_>>(),
        "values": values,
    });
    Ok(out(String::from("schedule"), ok, detail))
}

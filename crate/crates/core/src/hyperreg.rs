//! 3-graph notions: auxiliary graphs, ⟨δ⟩-good and ⟨δ⟩-regular 2-partitions,
//! triads with their triangle sets, Frankl–Rödl regularity, Gowers
//! quasirandomness, and the reduction from triad hypotheses to graph
//! ⟨2√δ⟩-regularity.

use num::{BigInt, One, Signed, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::bitset::{and3_count, and_count, words_for};
use crate::error::{Error, Result};
use crate::graphs::{BipartiteGraph, ProductSide, ThreeGraph, Triad, VertexClass};
use crate::partitions::{is_equitable, other_classes, sub_partitions, Frame, TwoPartition};
use crate::rational::{check_unit_interval, int, ratio, ser_rational, Frac, Rational};
use crate::regcheck::{
    aggregate, check_delta_partition_with_edits, check_delta_regular, check_eps_regular,
    check_perfect_delta_partition, CheckParams, EditOutcome, Effort, Level, Method, Mode,
    PartitionVerdict, Status, Verdict,
};

/// Subtriads are enumerated exhaustively up to this many triad edges.
pub const SUBTRIAD_BUDGET: usize = 20;

/// `G_H^i`: pairs of the other two classes versus `V_i`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AuxGraph {
    /// 1, 2 or 3
    pub axis: usize,
    pub product: ProductSide,
    pub graph: BipartiteGraph,
}

/// `((v_j, v_k), v_i)` is an edge iff the corresponding triple is in `h`;
/// `j < k` are the classes other than `i`, linearised row-major.
pub fn auxiliary_graph(h: &ThreeGraph, axis: usize) -> Result<AuxGraph> {
    if !(1..=3).contains(&axis) {
        return Err(Error::ParameterOutOfContract(format!("axis {axis} not in 1..=3")));
    }
    let i = axis - 1;
    let (j, k) = other_classes(i);
    let cls = h.classes();
    let product = ProductSide::new(cls[j], cls[k]);
    let right = cls[i];
    let left = product.as_class(10 + axis as u32);
    let graph = BipartiteGraph::from_edges(
        left,
        right,
        h.triples().map(|t| {
            let v = [t.0, t.1, t.2];
            (product.index(v[j], v[k]), v[i])
        }),
    )?;
    Ok(AuxGraph { axis, product, graph })
}

/// `H` restricted to the triad's classes, as packed rows over local `C`.
struct LocalH {
    nb: usize,
    stride: usize,
    rows: Vec<u64>,
}

impl LocalH {
    fn new(h: &ThreeGraph, t: &Triad) -> Result<Self> {
        let sizes = h.sizes();
        for (k, m) in t.members().iter().enumerate() {
            if let Some(&v) = m.iter().find(|&&v| v >= sizes[k]) {
                return Err(Error::ClassMismatch(format!(
                    "triad vertex {v} outside class {k} of size {}",
                    sizes[k]
                )));
            }
        }
        let [na, nb, nc] = t.sizes();
        let stride = words_for(nc);
        let [ma, mb, mc] = t.members();
        let mut rows = vec![0u64; na * nb * stride];
        for (a, &ga) in ma.iter().enumerate() {
            for (b, &gb) in mb.iter().enumerate() {
                let r = (a * nb + b) * stride;
                for (c, &gc) in mc.iter().enumerate() {
                    if h.contains(ga, gb, gc) {
                        rows[r + c / 64] |= 1 << (c % 64);
                    }
                }
            }
        }
        Ok(LocalH { nb, stride, rows })
    }

    #[inline]
    fn row(&self, a: usize, b: usize) -> &[u64] {
        let r = (a * self.nb + b) * self.stride;
        &self.rows[r..r + self.stride]
    }

    #[inline]
    fn contains(&self, a: usize, b: usize, c: usize) -> bool {
        self.row(a, b)[c / 64] & (1 << (c % 64)) != 0
    }
}

/// `t(P)` together with the triangles of `T(P)` in lexicographic order.
pub fn triangle_support(t: &Triad) -> (u64, impl Iterator<Item = (usize, usize, usize)> + '_) {
    let count = t.ab().edges().map(|(a, b)| t.codegree(a, b) as u64).sum();
    let nc = t.sizes()[2];
    let iter = t.ab().edges().flat_map(move |(a, b)| {
        (0..nc).filter(move |&c| t.ac().has_edge(a, c) && t.bc().has_edge(b, c)).map(move |c| (a, b, c))
    });
    (count, iter)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct TriadStats {
    pub triangle_count: u64,
    pub h_edge_count: u64,
    /// `d_H(P)`, zero when `t(P) = 0`
    #[serde(serialize_with = "ser_rational")]
    pub density: Rational,
}

fn counts(t: &Triad, lh: &LocalH) -> (u64, u64) {
    let (mut tri, mut hit) = (0u64, 0u64);
    for (a, b) in t.ab().edges() {
        tri += and_count(t.ac().row(a), t.bc().row(b)) as u64;
        hit += and3_count(t.ac().row(a), t.bc().row(b), lh.row(a, b)) as u64;
    }
    (tri, hit)
}

fn density_of(hits: u64, tri: u64) -> Rational {
    if tri == 0 {
        Rational::zero()
    } else {
        ratio(hits, tri)
    }
}

pub fn triad_density(h: &ThreeGraph, t: &Triad) -> Result<TriadStats> {
    let lh = LocalH::new(h, t)?;
    let (tri, hit) = counts(t, &lh);
    Ok(TriadStats { triangle_count: tri, h_edge_count: hit, density: density_of(hit, tri) })
}

/// A triad of a 2-partition on classes `(Z_1, Z_2, Z_3)`.
#[derive(Clone, Debug)]
pub struct TriadRef {
    pub clusters: [usize; 3],
    /// indices into the 2-partition's graph list, in `(AB, AC, BC)` order
    pub graphs: [usize; 3],
    pub triad: Triad,
}

/// All triads with one cluster in each vertex class. Triads with two clusters
/// in one class span no triple of a 3-partite `h`, so they have density 0
/// and are regular and quasirandom under every notion checked here.
pub fn triads_of(h: &ThreeGraph, tp: &TwoPartition) -> Result<Vec<TriadRef>> {
    let frame = Frame::new(h.sizes());
    let sp = sub_partitions(tp, &frame)?;
    let z = tp.z();
    let local = |c: usize, k: usize| -> Vec<usize> { z.block(c).iter().map(|&v| v - frame.offset(k)).collect() };
    let graphs_between = |c1: usize, c2: usize| -> Vec<usize> {
        tp.graphs().iter().enumerate().filter(|(_, g)| g.pair == (c1, c2)).map(|(i, _)| i).collect()
    };
    let mut out = Vec::new();
    for &c1 in &sp.clusters[0] {
        for &c2 in &sp.clusters[1] {
            for &c3 in &sp.clusters[2] {
                let members = [local(c1, 0), local(c2, 1), local(c3, 2)];
                for &g12 in &graphs_between(c1, c2) {
                    for &g13 in &graphs_between(c1, c3) {
                        for &g23 in &graphs_between(c2, c3) {
                            let g = |i: usize| tp.graphs()[i].graph.clone();
                            let triad = Triad::embedded(g(g12), g(g13), g(g23), members.clone())?;
                            out.push(TriadRef { clusters: [c1, c2, c3], graphs: [g12, g13, g23], triad });
                        }
                    }
                }
            }
        }
    }
    Ok(out)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct GraphVerdict {
    pub graph: usize,
    pub pair: (usize, usize),
    pub verdict: Verdict,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct GoodnessReport {
    pub status: Status,
    pub graphs: Vec<GraphVerdict>,
}

/// ⟨δ⟩-goodness: every graph of the 2-partition is ⟨δ⟩-regular.
pub fn is_delta_good(tp: &TwoPartition, delta: &Rational, params: &CheckParams) -> Result<GoodnessReport> {
    let graphs = tp
        .graphs()
        .par_iter()
        .enumerate()
        .map(|(i, tg)| {
            let v = check_delta_regular(&tg.graph, delta, &params.with_seed(params.seed.wrapping_add(i as u64)))?;
            Ok(GraphVerdict { graph: i, pair: tg.pair, verdict: v })
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(GoodnessReport { status: aggregate(graphs.iter().map(|g| g.verdict.status)), graphs })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct AxisReport {
    pub axis: usize,
    pub outcome: EditOutcome,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ThreePartitionReport {
    pub goodness: GoodnessReport,
    pub axes: Vec<AxisReport>,
    /// good, and every axis certified with or without edits
    pub certified: bool,
}

/// ⟨δ⟩-regularity of a 2-partition of `h`: goodness, then `𝓔_i ∪ Z_i` as a
/// partition of `G_H^i` for each axis.
pub fn check_delta_regular_3partition(
    h: &ThreeGraph,
    tp: &TwoPartition,
    delta: &Rational,
    params: &CheckParams,
) -> Result<ThreePartitionReport> {
    let frame = Frame::new(h.sizes());
    let sp = sub_partitions(tp, &frame)?;
    let goodness = is_delta_good(tp, delta, params)?;
    let mut axes = Vec::with_capacity(3);
    for i in 0..3 {
        let aux = auxiliary_graph(h, i + 1)?;
        let left = sp.edge_partitions[i].to_vertex_partition()?;
        let outcome =
            check_delta_partition_with_edits(&aux.graph, &left, &sp.class_partitions[i], delta, params)?;
        axes.push(AxisReport { axis: i + 1, outcome });
    }
    let certified = goodness.status == Status::CertifiedRegular
        && axes.iter().all(|a| !matches!(a.outcome, EditOutcome::NotCertified { .. }));
    Ok(ThreePartitionReport { goodness, axes, certified })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct EquipartitionReport {
    pub order: usize,
    pub order_ok: bool,
    pub equitable: bool,
    /// graphs whose density leaves `[1/ℓ − ε₂, 1/ℓ + ε₂]`
    pub density_violations: Vec<usize>,
    pub irregular_graphs: Vec<usize>,
    /// graphs that could be neither certified nor refuted
    pub unknown_graphs: Vec<usize>,
    pub passes: bool,
}

/// `(ℓ, t, ε₂)`-equipartition check.
pub fn check_equipartition_params(
    tp: &TwoPartition,
    ell: u64,
    t: usize,
    eps2: &Rational,
    params: &CheckParams,
) -> Result<EquipartitionReport> {
    if ell == 0 {
        return Err(Error::ParameterOutOfContract("ℓ must be ≥ 1".into()));
    }
    check_unit_interval("ε₂", eps2)?;
    let target = ratio(1, ell);
    let verdicts = tp
        .graphs()
        .par_iter()
        .enumerate()
        .map(|(i, tg)| check_eps_regular(&tg.graph, eps2, &params.with_seed(params.seed.wrapping_add(i as u64))))
        .collect::<Result<Vec<_>>>()?;
    let mut density_violations = Vec::new();
    let (mut irregular_graphs, mut unknown_graphs) = (Vec::new(), Vec::new());
    for (i, (tg, v)) in tp.graphs().iter().zip(&verdicts).enumerate() {
        if (tg.graph.density() - &target).abs() > *eps2 {
            density_violations.push(i);
        }
        match v.status {
            Status::IrregularWithWitness => irregular_graphs.push(i),
            Status::UnknownNoWitnessFound => unknown_graphs.push(i),
            Status::CertifiedRegular => {}
        }
    }
    let order = tp.z().order();
    let equitable = is_equitable(tp.z());
    let passes = order == t && equitable && density_violations.is_empty() && irregular_graphs.is_empty();
    Ok(EquipartitionReport {
        order,
        order_ok: order == t,
        equitable,
        density_violations,
        irregular_graphs,
        unknown_graphs,
        passes,
    })
}

/// Edge lists of a subtriad in triad-local coordinates.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SubtriadWitness {
    pub ab: Vec<(usize, usize)>,
    pub ac: Vec<(usize, usize)>,
    pub bc: Vec<(usize, usize)>,
    pub triangles: u64,
    pub h_edges: u64,
}

/// The triangles of a triad indexed by the triad edges they use.
struct SubtriadSpace {
    /// `(side, u, v)` with side 0 = AB, 1 = AC, 2 = BC
    edges: Vec<(u8, usize, usize)>,
    tri_edges: Vec<[usize; 3]>,
    tri_in_h: Vec<bool>,
    by_edge: Vec<Vec<usize>>,
    total: (u64, u64),
}

impl SubtriadSpace {
    fn new(t: &Triad, lh: &LocalH) -> Self {
        let mut edges = Vec::with_capacity(t.total_edges());
        let mut id = std::collections::HashMap::new();
        for (side, g) in [t.ab(), t.ac(), t.bc()].into_iter().enumerate() {
            for (u, v) in g.edges() {
                id.insert((side as u8, u, v), edges.len());
                edges.push((side as u8, u, v));
            }
        }
        let (mut tri_edges, mut tri_in_h) = (Vec::new(), Vec::new());
        let (_, it) = triangle_support(t);
        for (a, b, c) in it {
            tri_edges.push([id[&(0, a, b)], id[&(1, a, c)], id[&(2, b, c)]]);
            tri_in_h.push(lh.contains(a, b, c));
        }
        let mut by_edge = vec![Vec::new(); edges.len()];
        for (ti, te) in tri_edges.iter().enumerate() {
            for &e in te {
                by_edge[e].push(ti);
            }
        }
        let total = (tri_edges.len() as u64, tri_in_h.iter().filter(|b| **b).count() as u64);
        SubtriadSpace { edges, tri_edges, tri_in_h, by_edge, total }
    }

    fn witness(&self, present: &[bool], tri: u64, hits: u64) -> SubtriadWitness {
        let mut w = SubtriadWitness { ab: vec![], ac: vec![], bc: vec![], triangles: tri, h_edges: hits };
        for (i, &(side, u, v)) in self.edges.iter().enumerate() {
            if present[i] {
                match side {
                    0 => w.ab.push((u, v)),
                    1 => w.ac.push((u, v)),
                    _ => w.bc.push((u, v)),
                }
            }
        }
        w
    }

    /// Gray-code walk over all `2^m` subtriads with incremental counts.
    fn exhaustive(&self, bad: &impl Fn(u64, u64) -> bool) -> (Option<SubtriadWitness>, u64) {
        let m = self.edges.len();
        let mut present = vec![false; m];
        let (mut tri, mut hits) = (0u64, 0u64);
        if bad(0, 0) {
            return (Some(self.witness(&present, 0, 0)), 1);
        }
        for i in 1u64..(1u64 << m) {
            let e = i.trailing_zeros() as usize;
            present[e] = !present[e];
            for &ti in &self.by_edge[e] {
                if self.tri_edges[ti].iter().filter(|&&x| x != e).all(|&x| present[x]) {
                    let h = self.tri_in_h[ti] as u64;
                    if present[e] {
                        tri += 1;
                        hits += h;
                    } else {
                        tri -= 1;
                        hits -= h;
                    }
                }
            }
            if bad(tri, hits) {
                return (Some(self.witness(&present, tri, hits)), i + 1);
            }
        }
        (None, 1u64 << m)
    }

    /// Random vertex-induced subtriads, thinned by random edge deletion.
    fn sampled(&self, t: &Triad, bad: &impl Fn(u64, u64) -> bool, samples: u64, seed: u64) -> Option<SubtriadWitness> {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let sizes = t.sizes();
        let mut present = vec![false; self.edges.len()];
        for _ in 0..samples {
            let keep: Vec<Vec<bool>> = sizes.iter().map(|&n| (0..n).map(|_| rng.random_bool(0.5)).collect()).collect();
            let thin = rng.random_bool(0.5);
            for (i, &(side, u, v)) in self.edges.iter().enumerate() {
                let (cu, cv) = match side {
                    0 => (0, 1),
                    1 => (0, 2),
                    _ => (1, 2),
                };
                present[i] = keep[cu][u] && keep[cv][v] && (!thin || rng.random_bool(0.5));
            }
            let (mut tri, mut hits) = (0u64, 0u64);
            for (ti, te) in self.tri_edges.iter().enumerate() {
                if te.iter().all(|&x| present[x]) {
                    tri += 1;
                    hits += self.tri_in_h[ti] as u64;
                }
            }
            if bad(tri, hits) {
                return Some(self.witness(&present, tri, hits));
            }
        }
        None
    }
}

fn search_subtriads(
    h: &ThreeGraph,
    t: &Triad,
    params: &CheckParams,
    make_bad: impl Fn((u64, u64)) -> Box<dyn Fn(u64, u64) -> bool>,
) -> Result<Verdict<SubtriadWitness>> {
    let lh = LocalH::new(h, t)?;
    let space = SubtriadSpace::new(t, &lh);
    let bad = make_bad(space.total);
    let m = space.edges.len();
    // with every triangle in H, or none, subtriads with t(P') > 0 all share d_H(P)
    let (tt, ee) = space.total;
    if (ee == 0 || ee == tt) && !bad(0, 0) {
        return Ok(Verdict::certified(Effort::default()));
    }
    let exhaustive = match params.mode {
        Mode::Exhaustive if m > SUBTRIAD_BUDGET => {
            return Err(Error::BudgetExceeded(format!("triad has {m} edges, budget is {SUBTRIAD_BUDGET}")))
        }
        Mode::Exhaustive => true,
        Mode::Randomized => false,
        Mode::Auto => m <= SUBTRIAD_BUDGET,
    };
    if exhaustive {
        let (w, examined) = space.exhaustive(&bad);
        let effort = Effort { examined, restarts: 0 };
        return Ok(match w {
            Some(w) => Verdict::irregular(w, Method::Exhaustive, effort),
            None => Verdict::certified(effort),
        });
    }
    let samples = params.random_trials as u64 * 64;
    let effort = Effort { examined: 0, restarts: params.random_trials };
    Ok(match space.sampled(t, &bad, samples, params.seed) {
        Some(w) => Verdict::irregular(w, Method::Randomized, effort),
        None => Verdict::unknown(effort),
    })
}

/// `t' ≥ β t`, exactly.
#[inline]
fn heavy(f: Frac, tri: u64, total: u64) -> bool {
    tri as u128 * f.den >= f.num * total as u128
}

/// Frankl–Rödl ε-regularity of a triad: every subtriad with
/// `t(P') ≥ ε t(P)` has `|d_H(P') − d_H(P)| ≤ ε`.
pub fn check_fr_triad(h: &ThreeGraph, t: &Triad, eps: &Rational, params: &CheckParams) -> Result<Verdict<SubtriadWitness>> {
    check_unit_interval("ε", eps)?;
    let f = Frac::from_rational(eps)?;
    search_subtriads(h, t, params, move |(tt, ee)| {
        Box::new(move |tri, hits| {
            if !heavy(f, tri, tt) {
                return false;
            }
            let (tri, hits, tt, ee) = (tri as u128, hits as u128, tt as u128, ee as u128);
            if tri == 0 {
                // d(P') = 0 by convention
                return tt > 0 && ee * f.den > f.num * tt;
            }
            (hits * tt).abs_diff(ee * tri) * f.den > f.num * tri * tt
        })
    })
}

/// Every subtriad with `t(P') ≥ δ t(P)` has `d_H(P') ≥ ⅔ d_H(P)`.
pub fn check_subtriad_hypothesis(
    h: &ThreeGraph,
    t: &Triad,
    delta: &Rational,
    params: &CheckParams,
) -> Result<Verdict<SubtriadWitness>> {
    check_unit_interval("δ", delta)?;
    let f = Frac::from_rational(delta)?;
    search_subtriads(h, t, params, move |(tt, ee)| {
        Box::new(move |tri, hits| {
            if !heavy(f, tri, tt) {
                return false;
            }
            if tri == 0 {
                return ee > 0;
            }
            3 * (hits as u128) * (tt as u128) < 2 * (ee as u128) * (tri as u128)
        })
    })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct TriadJudgement {
    pub clusters: [usize; 3],
    pub graphs: [usize; 3],
    pub triangle_count: u64,
    /// quasirandomness is decided exactly: certified or irregular, never unknown
    pub status: Status,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct TriadPartitionReport {
    pub equipartition: EquipartitionReport,
    pub triads: Vec<TriadJudgement>,
    /// `Σ t(P)` over triads judged irregular
    pub irregular_mass: u64,
    /// `ε |V|³` (or `α |V|³`)
    #[serde(serialize_with = "ser_rational")]
    pub bound: Rational,
    /// triads that were neither certified nor refuted; counted as regular
    pub caveats: usize,
    pub passes: bool,
}

fn partition_report(
    h: &ThreeGraph,
    tp: &TwoPartition,
    equipartition: EquipartitionReport,
    scale: &Rational,
    judge: impl Fn(&Triad) -> Result<Status> + Sync,
) -> Result<TriadPartitionReport> {
    let triads = triads_of(h, tp)?;
    let triads = triads
        .par_iter()
        .map(|tr| {
            let (count, _) = triangle_support(&tr.triad);
            Ok(TriadJudgement { clusters: tr.clusters, graphs: tr.graphs, triangle_count: count, status: judge(&tr.triad)? })
        })
        .collect::<Result<Vec<_>>>()?;
    let irregular_mass = triads.iter().filter(|t| t.status == Status::IrregularWithWitness).map(|t| t.triangle_count).sum();
    let caveats = triads.iter().filter(|t| t.status == Status::UnknownNoWitnessFound).count();
    let n = h.sizes().iter().sum::<usize>() as u64;
    let bound = scale * int(n * n * n);
    let passes = equipartition.passes && int(irregular_mass) <= bound;
    Ok(TriadPartitionReport { equipartition, triads, irregular_mass, bound, caveats, passes })
}

/// ε-regular `(ℓ, t, ε₂)`-equipartition in the Frankl–Rödl sense.
#[allow(clippy::too_many_arguments)]
pub fn check_fr_partition(
    h: &ThreeGraph,
    tp: &TwoPartition,
    ell: u64,
    t: usize,
    eps2: &Rational,
    eps: &Rational,
    params: &CheckParams,
) -> Result<TriadPartitionReport> {
    let eq = check_equipartition_params(tp, ell, t, eps2, params)?;
    partition_report(h, tp, eq, eps, |tr| Ok(check_fr_triad(h, tr, eps, params)?.status))
}

fn f_table(h: &ThreeGraph, t: &Triad) -> Result<(usize, Vec<i128>, i128)> {
    let sizes = t.sizes();
    if sizes[0] != sizes[1] || sizes[1] != sizes[2] {
        return Err(Error::ClassSizeMismatch(sizes));
    }
    let n = sizes[0];
    let lh = LocalH::new(h, t)?;
    let (tau, e) = counts(t, &lh);
    let (tau, e) = (tau as i128, e as i128);
    let mut f = vec![0i128; n * n * n];
    for (x, y) in t.ab().edges() {
        for z in 0..n {
            if t.ac().has_edge(x, z) && t.bc().has_edge(y, z) {
                f[(x * n + y) * n + z] = if lh.contains(x, y, z) { tau - e } else { -e };
            }
        }
    }
    Ok((n, f, tau))
}

fn scaled(sum: BigInt, tau: i128) -> Rational {
    if tau == 0 {
        return Rational::zero();
    }
    Rational::new(sum, BigInt::from(tau).pow(8))
}

const OVF: Error = Error::Overflow("octahedron sum");

/// The octahedron sum by its defining six-fold loop, `O(n⁶)`.
pub fn octahedron_sum_naive(h: &ThreeGraph, t: &Triad) -> Result<Rational> {
    let (n, f, tau) = f_table(h, t)?;
    let at = |x: usize, y: usize, z: usize| f[(x * n + y) * n + z];
    let mut sum = BigInt::zero();
    for x0 in 0..n {
        for x1 in 0..n {
            for y0 in 0..n {
                for y1 in 0..n {
                    let mut acc: i128 = 0;
                    for z0 in 0..n {
                        for z1 in 0..n {
                            let mut p: i128 = 1;
                            for (x, y, z) in [
                                (x0, y0, z0),
                                (x0, y0, z1),
                                (x0, y1, z0),
                                (x0, y1, z1),
                                (x1, y0, z0),
                                (x1, y0, z1),
                                (x1, y1, z0),
                                (x1, y1, z1),
                            ] {
                                p = p.checked_mul(at(x, y, z)).ok_or(OVF)?;
                            }
                            acc = acc.checked_add(p).ok_or(OVF)?;
                        }
                    }
                    sum += acc;
                }
            }
        }
    }
    Ok(scaled(sum, tau))
}

/// The same sum as `Σ_{x0,x1,y0,y1} (Σ_z Π f)²`, `O(n⁵)` time, `O(n²)` memory.
pub fn octahedron_sum_fast(h: &ThreeGraph, t: &Triad) -> Result<Rational> {
    let (n, f, tau) = f_table(h, t)?;
    let mut m = vec![0i128; n * n];
    let mut sum = BigInt::zero();
    for x0 in 0..n {
        for x1 in 0..n {
            for y in 0..n {
                for z in 0..n {
                    let (a, b) = (f[(x0 * n + y) * n + z], f[(x1 * n + y) * n + z]);
                    m[y * n + z] = a.checked_mul(b).ok_or(OVF)?;
                }
            }
            for y0 in 0..n {
                for y1 in 0..n {
                    let mut s: i128 = 0;
                    for z in 0..n {
                        let p = m[y0 * n + z].checked_mul(m[y1 * n + z]).ok_or(OVF)?;
                        s = s.checked_add(p).ok_or(OVF)?;
                    }
                    let s = BigInt::from(s);
                    sum += &s * &s;
                }
            }
        }
    }
    Ok(scaled(sum, tau))
}

/// `Σ_{x,y,z} f(x,y,z)`; zero for every triad.
pub fn f_total(h: &ThreeGraph, t: &Triad) -> Result<Rational> {
    let lh = LocalH::new(h, t)?;
    let (tau, e) = counts(t, &lh);
    if tau == 0 {
        return Ok(Rational::zero());
    }
    let (tau, e) = (BigInt::from(tau), BigInt::from(e));
    let pos = &e * (&tau - &e);
    let neg = (&tau - &e) * &e;
    Ok(Rational::new(pos - neg, tau))
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct QuasirandomReport {
    #[serde(serialize_with = "ser_rational")]
    pub octahedron_sum: Rational,
    /// `α (d₀ d₁ d₂)⁴ n⁶`, which is `α d¹² n⁶` when the side densities agree
    #[serde(serialize_with = "ser_rational")]
    pub bound: Rational,
    pub verdict: bool,
    #[serde(serialize_with = "ser_rational")]
    pub d0: Rational,
    #[serde(serialize_with = "ser_rational")]
    pub d1: Rational,
    #[serde(serialize_with = "ser_rational")]
    pub d2: Rational,
    /// set when the side densities differ and the product form was used
    pub unequal_densities: bool,
}

fn rpow(r: &Rational, k: u32) -> Rational {
    (0..k).fold(Rational::one(), |acc, _| acc * r)
}

/// α-quasirandomness of a triad with equal class sizes.
pub fn check_quasirandom_triad(h: &ThreeGraph, t: &Triad, alpha: &Rational) -> Result<QuasirandomReport> {
    if alpha.is_negative() {
        return Err(Error::ParameterOutOfContract("α must be ≥ 0".into()));
    }
    let sum = octahedron_sum_fast(h, t)?;
    let n = t.sizes()[0] as u64;
    let (d0, d1, d2) = (t.ab().density(), t.ac().density(), t.bc().density());
    let prod = &d0 * &d1 * &d2;
    let bound = alpha * rpow(&prod, 4) * int(n.pow(6));
    let unequal_densities = d0 != d1 || d1 != d2;
    Ok(QuasirandomReport { verdict: sum <= bound, octahedron_sum: sum, bound, d0, d1, d2, unequal_densities })
}

/// α-quasirandom `(ℓ, t, ε₂)`-equipartition.
#[allow(clippy::too_many_arguments)]
pub fn check_quasirandom_partition(
    h: &ThreeGraph,
    tp: &TwoPartition,
    ell: u64,
    t: usize,
    eps2: &Rational,
    alpha: &Rational,
    params: &CheckParams,
) -> Result<TriadPartitionReport> {
    let eq = check_equipartition_params(tp, ell, t, eps2, params)?;
    partition_report(h, tp, eq, alpha, |tr| {
        Ok(if check_quasirandom_triad(h, tr, alpha)?.verdict {
            Status::CertifiedRegular
        } else {
            Status::IrregularWithWitness
        })
    })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SchachtReport {
    /// `ε^C`-quasirandomness of the triad
    pub quasirandom: bool,
    /// `d(E_i)^C`-regularity of each side
    pub sides: [Status; 3],
    /// both parts hold, with every side certified
    pub hypothesis: bool,
}

/// Hypothesis side of the quasirandomness-to-regularity implication, for an
/// explicitly supplied exponent `C ≥ 1`.
pub fn schacht_predicate(
    t: &Triad,
    h: &ThreeGraph,
    eps: &Rational,
    c: u32,
    params: &CheckParams,
) -> Result<SchachtReport> {
    if c == 0 {
        return Err(Error::ParameterOutOfContract("C must be ≥ 1".into()));
    }
    check_unit_interval("ε", eps)?;
    let quasirandom = check_quasirandom_triad(h, t, &rpow(eps, c))?.verdict;
    let mut sides = [Status::CertifiedRegular; 3];
    for (i, g) in [t.ab(), t.ac(), t.bc()].into_iter().enumerate() {
        sides[i] = check_eps_regular(g, &rpow(&g.density(), c), params)?.status;
    }
    let hypothesis = quasirandom && sides.iter().all(|s| *s == Status::CertifiedRegular);
    Ok(SchachtReport { quasirandom, sides, hypothesis })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct TriangleBand {
    pub triangle_count: u64,
    /// `d(A,B) d(A,C) d(B,C) |A||B||C|`
    #[serde(serialize_with = "ser_rational")]
    pub predicted: Rational,
    /// `7ε |A||B||C|`
    #[serde(serialize_with = "ser_rational")]
    pub slack: Rational,
    pub in_band: bool,
}

/// `t(P) = (d(A,B) d(A,C) d(B,C) ± 7ε) |A||B||C|`, evaluated exactly.
pub fn triangle_count_bound(t: &Triad, eps: &Rational) -> Result<TriangleBand> {
    check_unit_interval("ε", eps)?;
    let (count, _) = triangle_support(t);
    let [a, b, c] = t.sizes();
    let vol = int((a * b * c) as u64);
    let predicted = t.ab().density() * t.ac().density() * t.bc().density() * &vol;
    let slack = int(7) * eps * &vol;
    let in_band = (int(count) - &predicted).abs() <= slack;
    Ok(TriangleBand { triangle_count: count, predicted, slack, in_band })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct HypothesisTriad {
    pub clusters: [usize; 3],
    pub graphs: [usize; 3],
    pub verdict: Verdict<SubtriadWitness>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct HypothesisReport {
    pub status: Status,
    pub fully_exhaustive: bool,
    pub triads: Vec<HypothesisTriad>,
}

/// The subtriad density hypothesis over every triad of the 2-partition.
pub fn subtriad_hypothesis_check(
    h: &ThreeGraph,
    tp: &TwoPartition,
    delta: &Rational,
    params: &CheckParams,
) -> Result<HypothesisReport> {
    let triads = triads_of(h, tp)?
        .par_iter()
        .map(|tr| {
            Ok(HypothesisTriad {
                clusters: tr.clusters,
                graphs: tr.graphs,
                verdict: check_subtriad_hypothesis(h, &tr.triad, delta, params)?,
            })
        })
        .collect::<Result<Vec<_>>>()?;
    let status = aggregate(triads.iter().map(|t| t.verdict.status));
    let fully_exhaustive = triads.iter().all(|t| t.verdict.method == Method::Exhaustive);
    Ok(HypothesisReport { status, fully_exhaustive, triads })
}

/// `d_{G_H^3}(E, C)` against `d_H(E, A×C, B×C)`, and `t(P)` against `|E||C|`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct IdentityRecord {
    pub graph: usize,
    pub cluster: usize,
    #[serde(serialize_with = "ser_rational")]
    pub aux_density: Rational,
    #[serde(serialize_with = "ser_rational")]
    pub triad_density: Rational,
    pub triangle_count: u64,
    pub expected_count: u64,
    pub holds: bool,
}

/// Checks both identities for one graph `E` of `𝓔_3` (between `A ∈ Z_1`
/// and `B ∈ Z_2`) and one cluster `C ∈ Z_3`, all in class-local coordinates.
pub fn reduction_identity(
    h: &ThreeGraph,
    aux3: &BipartiteGraph,
    e: &BipartiteGraph,
    members: [&[usize]; 3],
) -> Result<(Rational, TriadStats)> {
    let [a, b, c] = members;
    let n2 = h.sizes()[1];
    let slots: Vec<usize> = e.edges().map(|(x, y)| a[x] * n2 + b[y]).collect();
    let aux_density = aux3.induced_density(&slots, c)?;
    let (ca, cb, cc) = (VertexClass::new(0, a.len()), VertexClass::new(1, b.len()), VertexClass::new(2, c.len()));
    let e = e.with_classes(ca, cb)?;
    let triad = Triad::embedded(
        e,
        BipartiteGraph::complete(ca, cc)?,
        BipartiteGraph::complete(cb, cc)?,
        [a.to_vec(), b.to_vec(), c.to_vec()],
    )?;
    Ok((aux_density, triad_density(h, &triad)?))
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ReductionReport {
    pub equipartition: EquipartitionReport,
    pub hypothesis: Status,
    pub hypothesis_exhaustive: bool,
    /// `ε₂ ≤ (δ²/88) ℓ⁻³`
    pub eps2_bound: bool,
    /// `𝓔_3 ∪ Z_3` against `G_H^3` at level `2√δ`, no edits
    pub pairs: PartitionVerdict,
    pub identities: Vec<IdentityRecord>,
    pub preconditions_met: bool,
    pub certified: bool,
}

/// Runs the triad-hypothesis-to-⟨2√δ⟩ reduction end to end.
#[allow(clippy::too_many_arguments)]
pub fn reduction_check(
    h: &ThreeGraph,
    tp: &TwoPartition,
    delta: &Rational,
    ell: u64,
    t: usize,
    eps2: &Rational,
    params: &CheckParams,
) -> Result<ReductionReport> {
    let frame = Frame::new(h.sizes());
    let sp = sub_partitions(tp, &frame)?;
    let equipartition = check_equipartition_params(tp, ell, t, eps2, params)?;
    let hyp = subtriad_hypothesis_check(h, tp, delta, params)?;
    let eps2_bound = *eps2 <= delta * delta / int(88) / int(ell.pow(3));
    let aux3 = auxiliary_graph(h, 3)?.graph;
    let left = sp.edge_partitions[2].to_vertex_partition()?;
    let pairs = check_perfect_delta_partition(&aux3, &left, &sp.class_partitions[2], &Level::TwiceSqrt(delta.clone()), params)?;

    let z = tp.z();
    let local = |c: usize, k: usize| -> Vec<usize> { z.block(c).iter().map(|&v| v - frame.offset(k)).collect() };
    let mut identities = Vec::new();
    for &gi in &sp.graphs[2] {
        let tg = &tp.graphs()[gi];
        if tg.graph.edge_count() == 0 {
            continue;
        }
        let (a, b) = (local(tg.pair.0, 0), local(tg.pair.1, 1));
        for &cc in &sp.clusters[2] {
            let c = local(cc, 2);
            let (aux_density, stats) = reduction_identity(h, &aux3, &tg.graph, [&a, &b, &c])?;
            let expected_count = (tg.graph.edge_count() * c.len()) as u64;
            identities.push(IdentityRecord {
                graph: gi,
                cluster: cc,
                holds: aux_density == stats.density && stats.triangle_count == expected_count,
                aux_density,
                triad_density: stats.density,
                triangle_count: stats.triangle_count,
                expected_count,
            });
        }
    }
    let preconditions_met = equipartition.passes && hyp.status == Status::CertifiedRegular && eps2_bound;
    let certified = preconditions_met && pairs.status == Status::CertifiedRegular && identities.iter().all(|r| r.holds);
    Ok(ReductionReport {
        equipartition,
        hypothesis: hyp.status,
        hypothesis_exhaustive: hyp.fully_exhaustive,
        eps2_bound,
        pairs,
        identities,
        preconditions_met,
        certified,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::partitions::VertexPartition;
    use crate::rational::rat;

    fn classes(n: [usize; 3]) -> [VertexClass; 3] {
        [0, 1, 2].map(|i| VertexClass::new(i as u32, n[i]))
    }

    #[test]
    fn aux_graph_membership() {
        let h = ThreeGraph::from_triples(classes([2, 3, 4]), [(0, 1, 2), (1, 2, 3), (1, 0, 0)]).unwrap();
        for axis in 1..=3 {
            let g = auxiliary_graph(&h, axis).unwrap();
            assert_eq!(g.graph.edge_count(), 3);
        }
        let g3 = auxiliary_graph(&h, 3).unwrap();
        assert!(g3.graph.has_edge(3 + 2, 3));
        let g1 = auxiliary_graph(&h, 1).unwrap();
        assert!(g1.graph.has_edge(2 * 4 + 3, 1));
        let k = ThreeGraph::complete(classes([2, 2, 2])).unwrap();
        assert!(auxiliary_graph(&k, 2).unwrap().graph.is_complete());
        assert!(auxiliary_graph(&k, 4).is_err());
    }

    #[test]
    fn triangle_counts() {
        let t = Triad::complete(classes([2, 3, 4])).unwrap();
        assert_eq!(triangle_support(&t).0, 24);
        assert_eq!(triangle_support(&t).1.count(), 24);
        let [a, b, c] = classes([2, 3, 4]);
        let t = Triad::new(
            BipartiteGraph::empty(a, b).unwrap(),
            BipartiteGraph::complete(a, c).unwrap(),
            BipartiteGraph::complete(b, c).unwrap(),
        )
        .unwrap();
        assert_eq!(triangle_support(&t).0, 0);
    }

    #[test]
    fn triad_density_conventions() {
        let cl = classes([3, 3, 3]);
        let k = ThreeGraph::complete(cl).unwrap();
        let t = Triad::complete(cl).unwrap();
        assert_eq!(triad_density(&k, &t).unwrap().density, int(1));
        let [a, b, c] = cl;
        let t0 = Triad::new(
            BipartiteGraph::empty(a, b).unwrap(),
            BipartiteGraph::complete(a, c).unwrap(),
            BipartiteGraph::complete(b, c).unwrap(),
        )
        .unwrap();
        assert_eq!(triad_density(&k, &t0).unwrap().density, int(0));
    }

    #[test]
    fn fr_trivial_cases() {
        let cl = classes([2, 2, 2]);
        let t = Triad::complete(cl).unwrap();
        for h in [ThreeGraph::complete(cl).unwrap(), ThreeGraph::empty(cl).unwrap()] {
            let v = check_fr_triad(&h, &t, &rat(1, 10), &CheckParams::exhaustive()).unwrap();
            assert!(v.is_certified());
        }
        // ε = 0 admits the empty subtriad, whose density 0 differs from 1
        let k = ThreeGraph::complete(cl).unwrap();
        assert!(check_fr_triad(&k, &t, &rat(0, 1), &CheckParams::exhaustive()).unwrap().is_irregular());
        let h = ThreeGraph::from_triples(cl, [(0, 0, 0)]).unwrap();
        let v = check_fr_triad(&h, &t, &rat(1, 10), &CheckParams::exhaustive()).unwrap();
        assert!(v.is_irregular());
    }

    #[test]
    fn octahedron_basics() {
        let cl = classes([2, 2, 2]);
        let t = Triad::complete(cl).unwrap();
        for h in [ThreeGraph::complete(cl).unwrap(), ThreeGraph::empty(cl).unwrap()] {
            assert_eq!(octahedron_sum_naive(&h, &t).unwrap(), int(0));
            assert_eq!(octahedron_sum_fast(&h, &t).unwrap(), int(0));
        }
        let h = ThreeGraph::from_triples(cl, [(0, 0, 0)]).unwrap();
        let naive = octahedron_sum_naive(&h, &t).unwrap();
        assert_eq!(octahedron_sum_fast(&h, &t).unwrap(), naive);
        assert!(naive > int(0));
        assert_eq!(f_total(&h, &t).unwrap(), int(0));
        let t3 = Triad::complete(classes([2, 2, 3])).unwrap();
        assert_eq!(octahedron_sum_fast(&h, &t3), Err(Error::ClassSizeMismatch([2, 2, 3])));
    }

    #[test]
    fn quasirandom_boundary() {
        let cl = classes([3, 3, 3]);
        let [a, b, c] = cl;
        let t = Triad::new(
            BipartiteGraph::empty(a, b).unwrap(),
            BipartiteGraph::complete(a, c).unwrap(),
            BipartiteGraph::complete(b, c).unwrap(),
        )
        .unwrap();
        let r = check_quasirandom_triad(&ThreeGraph::complete(cl).unwrap(), &t, &rat(1, 100)).unwrap();
        assert_eq!(r.octahedron_sum, int(0));
        assert_eq!(r.bound, int(0));
        assert!(r.verdict);
        assert!(r.unequal_densities);
    }

    #[test]
    fn band_exact_when_sides_complete() {
        let [a, b, c] = classes([3, 4, 5]);
        let ab = BipartiteGraph::from_fn(a, b, |x, y| (x + y) % 2 == 0).unwrap();
        let t = Triad::new(ab, BipartiteGraph::complete(a, c).unwrap(), BipartiteGraph::complete(b, c).unwrap()).unwrap();
        let band = triangle_count_bound(&t, &int(0)).unwrap();
        assert!(band.in_band);
        assert_eq!(int(band.triangle_count), band.predicted);
    }

    fn frame_tp(sizes: [usize; 3], cluster: usize) -> TwoPartition {
        let n: usize = sizes.iter().sum();
        let frame = Frame::new(sizes);
        let labels: Vec<usize> = (0..n)
            .map(|v| {
                let (c, i) = frame.locate(v);
                c * 100 + i / cluster
            })
            .collect();
        TwoPartition::complete(VertexPartition::from_labels(&labels).unwrap()).unwrap()
    }

    #[test]
    fn three_partition_trivial_cases() {
        let cl = classes([4, 4, 4]);
        let tp = frame_tp([4, 4, 4], 2);
        let r = check_delta_regular_3partition(&ThreeGraph::empty(cl).unwrap(), &tp, &rat(1, 4), &CheckParams::exhaustive())
            .unwrap();
        assert!(r.certified);
        let h = ThreeGraph::from_fn(cl, |a, b, c| (a + b + c) % 2 == 0).unwrap();
        let singletons = frame_tp([4, 4, 4], 1);
        let r = check_delta_regular_3partition(&h, &singletons, &rat(1, 4), &CheckParams::exhaustive()).unwrap();
        assert!(r.certified);
    }

    #[test]
    fn equipartition_params() {
        let tp = frame_tp([4, 4, 4], 2);
        let r = check_equipartition_params(&tp, 1, 6, &rat(0, 1), &CheckParams::exhaustive()).unwrap();
        assert!(r.passes);
        let r = check_equipartition_params(&tp, 2, 6, &rat(1, 10), &CheckParams::exhaustive()).unwrap();
        assert_eq!(r.density_violations.len(), tp.graphs().len());
        assert!(!r.passes);
    }

    #[test]
    fn reduction_on_cluster_constant_h() {
        let cl = classes([4, 4, 4]);
        let tp = frame_tp([4, 4, 4], 2);
        let h = ThreeGraph::from_fn(cl, |a, b, c| (a / 2 + b / 2 + c / 2) % 2 == 0).unwrap();
        let delta = rat(1, 16);
        let eps2 = &delta * &delta / int(88);
        let r = reduction_check(&h, &tp, &delta, 1, 6, &eps2, &CheckParams::exhaustive()).unwrap();
        assert!(r.preconditions_met);
        assert!(r.certified, "{r:?}");
        assert_eq!(r.identities.len(), 8);
    }

    #[test]
    fn schacht_trivial() {
        let cl = classes([3, 3, 3]);
        let t = Triad::complete(cl).unwrap();
        for h in [ThreeGraph::complete(cl).unwrap(), ThreeGraph::empty(cl).unwrap()] {
            let r = schacht_predicate(&t, &h, &rat(1, 4), 2, &CheckParams::exhaustive()).unwrap();
            assert!(r.hypothesis);
            assert!(check_fr_triad(&h, &t, &rat(1, 4), &CheckParams::exhaustive()).unwrap().is_certified());
        }
        assert!(schacht_predicate(&t, &ThreeGraph::empty(cl).unwrap(), &rat(1, 4), 0, &CheckParams::default()).is_err());
    }
}

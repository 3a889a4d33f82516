//! Vertex partitions, edge partitions and 2-partitions, together with the
//! exact and approximate refinement relations.
//!
//! Strictness follows the definitions verbatim: `S ⊂_β T` is the strict
//! `|S \ T| < β|S|`, and `Q ≺_β P` is the non-strict
//! `Σ_{Q ∉_β P} |Q| ≤ β n`. Exact containment `S ⊆ T` always counts as
//! `S ⊂_β T`, which only matters at `β = 0` (see [`approx_subset`]).

use std::collections::BTreeMap;

use num::Signed;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::graphs::{subset_mask, BipartiteGraph, ProductSide, VertexClass};
use crate::rational::{fmt_rational, rat, Frac, Rational};

/// Partition of the ground set `0..n` into nonempty blocks.
///
/// Blocks are kept canonical: each block sorted ascending, blocks ordered by
/// their smallest element. Equality is therefore set-partition equality.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct VertexPartition {
    blocks: Vec<Vec<usize>>,
    labels: Vec<usize>,
}

impl VertexPartition {
    pub fn from_blocks(n: usize, blocks: Vec<Vec<usize>>) -> Result<Self> {
        let mut labels = vec![usize::MAX; n];
        for (bi, b) in blocks.iter().enumerate() {
            if b.is_empty() {
                return Err(Error::DegenerateInput(format!("block {bi} is empty")));
            }
            for &v in b {
                if v >= n {
                    return Err(Error::OutOfBounds(format!("vertex {v} not in 0..{n}")));
                }
                if labels[v] != usize::MAX {
                    return Err(Error::DegenerateInput(format!("vertex {v} in two blocks")));
                }
                labels[v] = bi;
            }
        }
        if let Some(v) = labels.iter().position(|&l| l == usize::MAX) {
            return Err(Error::DegenerateInput(format!("vertex {v} not covered")));
        }
        Ok(Self::canonical_from_labels(&labels))
    }

    /// Vertices with equal labels share a block. Labels are arbitrary.
    pub fn from_labels(labels: &[usize]) -> Result<Self> {
        if labels.is_empty() {
            return Err(Error::DegenerateInput("empty ground set".into()));
        }
        Ok(Self::canonical_from_labels(labels))
    }

    fn canonical_from_labels(labels: &[usize]) -> Self {
        let mut remap: BTreeMap<usize, usize> = BTreeMap::new();
        let mut blocks: Vec<Vec<usize>> = Vec::new();
        let mut canon = vec![0; labels.len()];
        for (v, &l) in labels.iter().enumerate() {
            let idx = *remap.entry(l).or_insert_with(|| {
                blocks.push(Vec::new());
                blocks.len() - 1
            });
            blocks[idx].push(v);
            canon[v] = idx;
        }
        VertexPartition { blocks, labels: canon }
    }

    pub fn trivial(n: usize) -> Result<Self> {
        Self::from_labels(&vec![0; n])
    }

    pub fn singletons(n: usize) -> Result<Self> {
        Self::from_labels(&(0..n).collect::<Vec<_>>())
    }

    /// Size of the ground set.
    pub fn n(&self) -> usize {
        self.labels.len()
    }

    /// Number of blocks.
    pub fn order(&self) -> usize {
        self.blocks.len()
    }

    pub fn blocks(&self) -> &[Vec<usize>] {
        &self.blocks
    }

    pub fn block(&self, i: usize) -> &[usize] {
        &self.blocks[i]
    }

    /// Index of the block containing `v`.
    pub fn label(&self, v: usize) -> usize {
        self.labels[v]
    }

    pub fn labels(&self) -> &[usize] {
        &self.labels
    }

    pub fn block_sizes(&self) -> Vec<usize> {
        self.blocks.iter().map(Vec::len).collect()
    }
}

fn same_ground(q: &VertexPartition, p: &VertexPartition) -> Result<()> {
    if q.n() != p.n() {
        return Err(Error::GroundMismatch(q.n(), p.n()));
    }
    Ok(())
}

fn beta_frac(beta: &Rational) -> Result<Frac> {
    if beta.is_negative() {
        return Err(Error::ParameterOutOfContract(format!("β = {} < 0", fmt_rational(beta))));
    }
    Frac::from_rational(beta)
}

fn half_bound(beta: &Rational) -> Result<()> {
    if *beta > rat(1, 2) {
        return Err(Error::ParameterOutOfContract(format!(
            "β = {} > 1/2 makes ∈_β ambiguous",
            fmt_rational(beta)
        )));
    }
    Ok(())
}

/// `missing < β·size`, or `missing == 0`.
#[inline]
fn within(missing: usize, size: usize, beta: Frac) -> bool {
    missing == 0 || (missing as u128) * beta.den < beta.num * size as u128
}

/// `Q ≺ P`: every block of `q` lies inside a block of `p`.
pub fn refines(q: &VertexPartition, p: &VertexPartition) -> Result<bool> {
    same_ground(q, p)?;
    Ok(q.blocks.iter().all(|b| {
        let l = p.label(b[0]);
        b.iter().all(|&v| p.label(v) == l)
    }))
}

/// `S ⊂_β T`, i.e. `|S \ T| < β|S|`.
///
/// `S ⊆ T` is accepted for every `β ≥ 0`; for `β > 0` this is implied by the
/// strict inequality, and at `β = 0` it makes `≺_0` coincide with `≺`.
pub fn approx_subset(s: &[usize], t: &[usize], beta: &Rational) -> Result<bool> {
    if s.is_empty() {
        return Err(Error::DegenerateInput("S must be nonempty".into()));
    }
    let b = beta_frac(beta)?;
    let mut tt = t.to_vec();
    tt.sort_unstable();
    let missing = s.iter().filter(|v| tt.binary_search(v).is_err()).count();
    Ok(within(missing, s.len(), b))
}

/// Per-block intersection sizes of `s` with the blocks of `p`.
fn hits(s: &[usize], p: &VertexPartition) -> Result<BTreeMap<usize, usize>> {
    let mut h = BTreeMap::new();
    for &v in s {
        if v >= p.n() {
            return Err(Error::OutOfBounds(format!("vertex {v} not in 0..{}", p.n())));
        }
        *h.entry(p.label(v)).or_insert(0) += 1;
    }
    Ok(h)
}

fn member_of(s_len: usize, hits: &BTreeMap<usize, usize>, b: Frac) -> Option<usize> {
    hits.iter().find(|(_, &c)| within(s_len - c, s_len, b)).map(|(&bi, _)| bi)
}

/// `S ∈_β P`: the unique block `P` with `S ⊂_β P`, if any. Requires `β ≤ 1/2`.
pub fn approx_member(s: &[usize], p: &VertexPartition, beta: &Rational) -> Result<Option<usize>> {
    if s.is_empty() {
        return Err(Error::DegenerateInput("S must be nonempty".into()));
    }
    half_bound(beta)?;
    let b = beta_frac(beta)?;
    subset_mask(p.n(), s, "S")?;
    Ok(member_of(s.len(), &hits(s, p)?, b))
}

/// `Q ≺_β P`. Requires `β ≤ 1/2`.
pub fn approx_refines(q: &VertexPartition, p: &VertexPartition, beta: &Rational) -> Result<bool> {
    same_ground(q, p)?;
    half_bound(beta)?;
    let b = beta_frac(beta)?;
    let mut stray = 0usize;
    for blk in &q.blocks {
        if member_of(blk.len(), &hits(blk, p)?, b).is_none() {
            stray += blk.len();
        }
    }
    Ok((stray as u128) * b.den <= b.num * q.n() as u128)
}

/// All nonempty pairwise intersections of blocks.
pub fn common_refinement(p: &VertexPartition, q: &VertexPartition) -> Result<VertexPartition> {
    same_ground(p, q)?;
    let labels: Vec<usize> = (0..p.n()).map(|v| p.label(v) * q.order() + q.label(v)).collect();
    VertexPartition::from_labels(&labels)
}

pub fn is_equitable(p: &VertexPartition) -> bool {
    let s = p.blocks[0].len();
    p.blocks.iter().all(|b| b.len() == s)
}

/// Constructive content of the refinement-union bound: given `Q ≺_δ P`,
/// returns a block index of `P` and the union `Q` of the `q`-blocks that are
/// `⊂_δ` that block, such that `|P △ Q| ≤ 3δ|P|`.
pub fn refinement_union_extract(
    q: &VertexPartition,
    p: &VertexPartition,
    delta: &Rational,
) -> Result<(usize, Vec<usize>)> {
    if !approx_refines(q, p, delta)? {
        return Err(Error::PreconditionFailed(format!(
            "q does not approximately refine p at δ = {}",
            fmt_rational(delta)
        )));
    }
    let b = beta_frac(delta)?;
    // owner[i] = the block of p that q-block i is ⊂_δ of
    let mut unions: Vec<Vec<usize>> = vec![Vec::new(); p.order()];
    for blk in &q.blocks {
        if let Some(pi) = member_of(blk.len(), &hits(blk, p)?, b) {
            unions[pi].extend_from_slice(blk);
        }
    }
    for (pi, u) in unions.iter_mut().enumerate() {
        u.sort_unstable();
        let pb = p.block(pi);
        let inter = u.iter().filter(|v| p.label(**v) == pi).count();
        let sym = (pb.len() - inter) + (u.len() - inter);
        if (sym as u128) * b.den <= 3 * b.num * pb.len() as u128 {
            return Ok((pi, std::mem::take(u)));
        }
    }
    Err(Error::PreconditionFailed("no block meets the 3δ bound".into()))
}

/// Traces of the blocks on `sub`, re-indexed so that the `k`-th smallest
/// element of `sub` becomes vertex `k`. Empty traces are dropped.
pub fn restrict_vertex_partition(p: &VertexPartition, sub: &[usize]) -> Result<VertexPartition> {
    if sub.is_empty() {
        return Err(Error::DegenerateInput("restriction to an empty set".into()));
    }
    let mask = subset_mask(p.n(), sub, "restriction")?;
    let labels: Vec<usize> = mask.iter().map(|v| p.label(v)).collect();
    VertexPartition::from_labels(&labels)
}

/// The three vertex classes of a 3-partite frame laid out consecutively:
/// `V_1 = 0..n1`, `V_2 = n1..n1+n2`, `V_3 = n1+n2..n`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct Frame {
    pub sizes: [usize; 3],
}

impl Frame {
    pub fn new(sizes: [usize; 3]) -> Self {
        Frame { sizes }
    }

    pub fn total(&self) -> usize {
        self.sizes.iter().sum()
    }

    pub fn offset(&self, class: usize) -> usize {
        self.sizes[..class].iter().sum()
    }

    pub fn global(&self, class: usize, local: usize) -> usize {
        self.offset(class) + local
    }

    /// `(class, local index)` of a global vertex.
    pub fn locate(&self, v: usize) -> (usize, usize) {
        let mut v = v;
        for c in 0..3 {
            if v < self.sizes[c] {
                return (c, v);
            }
            v -= self.sizes[c];
        }
        panic!("vertex outside frame");
    }

    pub fn class(&self, c: usize) -> VertexClass {
        VertexClass::new(c as u32, self.sizes[c])
    }

    pub fn as_partition(&self) -> Result<VertexPartition> {
        let labels: Vec<usize> = (0..self.total()).map(|v| self.locate(v).0).collect();
        VertexPartition::from_labels(&labels)
    }
}

/// Edge-disjoint bipartite graphs covering the complete product.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct EdgePartition {
    carrier: ProductSide,
    blocks: Vec<BipartiteGraph>,
}

impl EdgePartition {
    pub fn new(carrier: ProductSide, blocks: Vec<BipartiteGraph>) -> Result<Self> {
        if blocks.is_empty() {
            return Err(Error::DegenerateInput("edge partition without blocks".into()));
        }
        let mut seen = vec![false; carrier.size()];
        for g in &blocks {
            if g.left() != carrier.first || g.right() != carrier.second {
                return Err(Error::ClassMismatch("block not on the carrier classes".into()));
            }
            for (x, y) in g.edges() {
                let i = carrier.index(x, y);
                if seen[i] {
                    return Err(Error::NotDisjoint(format!("({x},{y})")));
                }
                seen[i] = true;
            }
        }
        if let Some(i) = seen.iter().position(|s| !s) {
            let (x, y) = carrier.split(i);
            return Err(Error::DegenerateInput(format!("edge ({x},{y}) not covered")));
        }
        Ok(EdgePartition { carrier, blocks })
    }

    pub fn carrier(&self) -> ProductSide {
        self.carrier
    }

    pub fn order(&self) -> usize {
        self.blocks.len()
    }

    pub fn blocks(&self) -> &[BipartiteGraph] {
        &self.blocks
    }

    pub fn is_equitable(&self) -> bool {
        let e = self.blocks[0].edge_count();
        self.blocks.iter().all(|g| g.edge_count() == e)
    }

    /// The blocks as vertex subsets of the linearised product. Edgeless
    /// blocks are dropped.
    pub fn to_vertex_partition(&self) -> Result<VertexPartition> {
        let blocks = self
            .blocks
            .iter()
            .filter(|g| g.edge_count() > 0)
            .map(|g| g.edges().map(|(x, y)| self.carrier.index(x, y)).collect())
            .collect();
        VertexPartition::from_blocks(self.carrier.size(), blocks)
    }

    /// Builds an edge partition from a vertex partition of the linearised product.
    pub fn from_vertex_partition(carrier: ProductSide, p: &VertexPartition) -> Result<Self> {
        if p.n() != carrier.size() {
            return Err(Error::GroundMismatch(p.n(), carrier.size()));
        }
        let blocks = p
            .blocks()
            .iter()
            .map(|b| {
                BipartiteGraph::from_edges(
                    carrier.first,
                    carrier.second,
                    b.iter().map(|&i| carrier.split(i)),
                )
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(EdgePartition { carrier, blocks })
    }
}

/// A bipartite graph between clusters `pair.0 < pair.1` of a 2-partition.
/// The left class is cluster `pair.0` in local coordinates: the `k`-th
/// smallest vertex of the cluster is left vertex `k`.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct TaggedGraph {
    pub pair: (usize, usize),
    pub graph: BipartiteGraph,
}

/// `(Z, 𝓔)`: a vertex partition plus bipartite graphs between distinct
/// clusters whose per-pair unions are the complete products.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct TwoPartition {
    z: VertexPartition,
    graphs: Vec<TaggedGraph>,
}

/// A way in which a candidate 2-partition fails the covering/disjointness law.
/// Edges are reported in global vertex ids.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Violation {
    Uncovered { pair: (usize, usize), missing: Vec<(usize, usize)> },
    NotDisjoint { pair: (usize, usize), duplicated: Vec<(usize, usize)> },
}

impl TwoPartition {
    /// Normalises tags (`pair.0 < pair.1`, transposing when needed), checks
    /// that every graph matches its clusters, and sorts graphs canonically.
    /// Covering and disjointness are *not* checked; see [`validate_two_partition`].
    pub fn assemble(z: VertexPartition, graphs: Vec<TaggedGraph>) -> Result<Self> {
        let mut out = Vec::with_capacity(graphs.len());
        for TaggedGraph { pair: (c1, c2), graph } in graphs {
            if c1 == c2 || c1 >= z.order() || c2 >= z.order() {
                return Err(Error::InvalidTwoPartition(format!(
                    "bad cluster pair ({c1},{c2}) for {} clusters",
                    z.order()
                )));
            }
            let (c1, c2, graph) = if c1 < c2 { (c1, c2, graph) } else { (c2, c1, graph.transpose()) };
            if graph.n_left() != z.block(c1).len() || graph.n_right() != z.block(c2).len() {
                return Err(Error::InvalidTwoPartition(format!(
                    "graph on pair ({c1},{c2}) is {}x{}, clusters are {}x{}",
                    graph.n_left(),
                    graph.n_right(),
                    z.block(c1).len(),
                    z.block(c2).len()
                )));
            }
            let graph = graph.with_classes(
                VertexClass::new(c1 as u32, graph.n_left()),
                VertexClass::new(c2 as u32, graph.n_right()),
            )?;
            out.push(TaggedGraph { pair: (c1, c2), graph });
        }
        out.sort_by(|a, b| {
            a.pair.cmp(&b.pair).then_with(|| a.graph.edges().cmp(b.graph.edges()))
        });
        Ok(TwoPartition { z, graphs: out })
    }

    pub fn new(z: VertexPartition, graphs: Vec<TaggedGraph>) -> Result<Self> {
        let tp = Self::assemble(z, graphs)?;
        let v = validate_two_partition(&tp);
        if let Some(first) = v.first() {
            let (pair, what) = match first {
                Violation::Uncovered { pair, missing } => (pair, format!("{} edges uncovered", missing.len())),
                Violation::NotDisjoint { pair, duplicated } => {
                    (pair, format!("{} edges duplicated", duplicated.len()))
                }
            };
            return Err(Error::InvalidTwoPartition(format!(
                "cluster pair ({},{}): {what} ({} violations)",
                pair.0,
                pair.1,
                v.len()
            )));
        }
        Ok(tp)
    }

    /// Every pair of distinct clusters joined by its complete product.
    pub fn complete(z: VertexPartition) -> Result<Self> {
        let mut graphs = Vec::new();
        for c1 in 0..z.order() {
            for c2 in c1 + 1..z.order() {
                let g = BipartiteGraph::complete(
                    VertexClass::new(c1 as u32, z.block(c1).len()),
                    VertexClass::new(c2 as u32, z.block(c2).len()),
                )?;
                graphs.push(TaggedGraph { pair: (c1, c2), graph: g });
            }
        }
        Self::assemble(z, graphs)
    }

    pub fn z(&self) -> &VertexPartition {
        &self.z
    }

    pub fn graphs(&self) -> &[TaggedGraph] {
        &self.graphs
    }

    /// Graphs tagged with the given (normalised) cluster pair.
    pub fn graphs_between(&self, c1: usize, c2: usize) -> impl Iterator<Item = &TaggedGraph> {
        let key = (c1.min(c2), c1.max(c2));
        self.graphs.iter().filter(move |g| g.pair == key)
    }
}

/// Empty iff for every pair of distinct clusters the tagged graphs are
/// pairwise edge-disjoint and their union is the complete product.
pub fn validate_two_partition(tp: &TwoPartition) -> Vec<Violation> {
    let z = &tp.z;
    let mut out = Vec::new();
    for c1 in 0..z.order() {
        for c2 in c1 + 1..z.order() {
            let (b1, b2) = (z.block(c1), z.block(c2));
            let mut mult = vec![0u32; b1.len() * b2.len()];
            for tg in tp.graphs_between(c1, c2) {
                for (x, y) in tg.graph.edges() {
                    mult[x * b2.len() + y] += 1;
                }
            }
            let global = |i: usize| (b1[i / b2.len()], b2[i % b2.len()]);
            let missing: Vec<_> = (0..mult.len()).filter(|&i| mult[i] == 0).map(global).collect();
            let duplicated: Vec<_> = (0..mult.len()).filter(|&i| mult[i] > 1).map(global).collect();
            if !missing.is_empty() {
                out.push(Violation::Uncovered { pair: (c1, c2), missing });
            }
            if !duplicated.is_empty() {
                out.push(Violation::NotDisjoint { pair: (c1, c2), duplicated });
            }
        }
    }
    out
}

/// Restriction of a 2-partition to `sub` (global vertex ids). The result is
/// re-indexed like [`restrict_vertex_partition`]; clusters with empty trace
/// disappear together with their graphs.
pub fn restrict_two_partition(tp: &TwoPartition, sub: &[usize]) -> Result<TwoPartition> {
    let z = restrict_vertex_partition(&tp.z, sub)?;
    let mask = subset_mask(tp.z.n(), sub, "restriction")?;
    // position of each kept vertex in the restricted ground
    let mut pos = vec![usize::MAX; tp.z.n()];
    for (k, v) in mask.iter().enumerate() {
        pos[v] = k;
    }
    // per old cluster: kept local indices, and the new cluster index
    let kept: Vec<Vec<usize>> = tp
        .z
        .blocks()
        .iter()
        .map(|b| (0..b.len()).filter(|&i| mask.contains(b[i])).collect())
        .collect();
    let new_idx: Vec<Option<usize>> = tp
        .z
        .blocks()
        .iter()
        .zip(&kept)
        .map(|(b, k)| k.first().map(|&i| z.label(pos[b[i]])))
        .collect();
    let mut graphs = Vec::new();
    for tg in &tp.graphs {
        let (c1, c2) = tg.pair;
        if let (Some(n1), Some(n2)) = (new_idx[c1], new_idx[c2]) {
            let g = tg.graph.induced_subgraph(&kept[c1], &kept[c2])?;
            graphs.push(TaggedGraph { pair: (n1, n2), graph: g });
        }
    }
    let out = TwoPartition::assemble(z, graphs)?;
    if !validate_two_partition(&out).is_empty() {
        return Err(Error::InvalidTwoPartition("restriction broke the covering law".into()));
    }
    Ok(out)
}

/// Convenience: restriction to per-class subsets of a frame.
pub fn restrict_to_classes(
    tp: &TwoPartition,
    frame: &Frame,
    subs: [&[usize]; 3],
) -> Result<TwoPartition> {
    let mut sub = Vec::new();
    for (c, s) in subs.iter().enumerate() {
        subset_mask(frame.sizes[c], s, "class subset")?;
        sub.extend(s.iter().map(|&v| frame.global(c, v)));
    }
    sub.sort_unstable();
    restrict_two_partition(tp, &sub)
}

/// `Z_i` and `𝓔_i` of a 2-partition on a 3-partite frame.
#[derive(Clone, Debug)]
pub struct SubPartitions {
    /// cluster indices contained in `V_i`
    pub clusters: [Vec<usize>; 3],
    /// indices into `tp.graphs()` of graphs inside `V_j × V_k`
    pub graphs: [Vec<usize>; 3],
    /// `𝓔_i` lifted to `V_j × V_k` (`j < k`), blocks in the order of `graphs[i]`
    pub edge_partitions: [EdgePartition; 3],
    /// `Z_i` as a partition of `V_i` in class-local coordinates
    pub class_partitions: [VertexPartition; 3],
}

/// The two classes other than `i`, in increasing order.
pub fn other_classes(i: usize) -> (usize, usize) {
    match i {
        0 => (1, 2),
        1 => (0, 2),
        _ => (0, 1),
    }
}

pub fn sub_partitions(tp: &TwoPartition, frame: &Frame) -> Result<SubPartitions> {
    let z = tp.z();
    if z.n() != frame.total() {
        return Err(Error::FrameMismatch(format!(
            "partition ground {} vs frame {}",
            z.n(),
            frame.total()
        )));
    }
    let mut cluster_class = Vec::with_capacity(z.order());
    for (ci, b) in z.blocks().iter().enumerate() {
        let c = frame.locate(b[0]).0;
        if b.iter().any(|&v| frame.locate(v).0 != c) {
            return Err(Error::FrameMismatch(format!("cluster {ci} straddles vertex classes")));
        }
        cluster_class.push(c);
    }
    let clusters: [Vec<usize>; 3] =
        [0, 1, 2].map(|c| (0..z.order()).filter(|&ci| cluster_class[ci] == c).collect());
    let mut graphs: [Vec<usize>; 3] = Default::default();
    for (gi, tg) in tp.graphs().iter().enumerate() {
        let (a, b) = (cluster_class[tg.pair.0], cluster_class[tg.pair.1]);
        if a != b {
            graphs[3 - a - b].push(gi);
        }
    }
    let mut edge_partitions = Vec::with_capacity(3);
    let mut class_partitions = Vec::with_capacity(3);
    for (i, members) in graphs.iter().enumerate() {
        let (j, k) = other_classes(i);
        let carrier = ProductSide::new(frame.class(j), frame.class(k));
        let mut blocks = Vec::new();
        for &gi in members {
            let tg = &tp.graphs()[gi];
            // canonical cluster order puts the V_j cluster first
            let (bj, bk) = (z.block(tg.pair.0), z.block(tg.pair.1));
            let (oj, ok) = (frame.offset(j), frame.offset(k));
            blocks.push(BipartiteGraph::from_edges(
                carrier.first,
                carrier.second,
                tg.graph.edges().map(|(x, y)| (bj[x] - oj, bk[y] - ok)),
            )?);
        }
        if blocks.is_empty() {
            return Err(Error::FrameMismatch(format!("no graphs cover V_{} × V_{}", j + 1, k + 1)));
        }
        edge_partitions.push(EdgePartition::new(carrier, blocks)?);
        let off = frame.offset(i);
        let labels: Vec<usize> = (0..frame.sizes[i]).map(|v| z.label(off + v)).collect();
        class_partitions.push(VertexPartition::from_labels(&labels)?);
    }
    let edge_partitions: [EdgePartition; 3] = edge_partitions.try_into().expect("three axes");
    let class_partitions: [VertexPartition; 3] = class_partitions.try_into().expect("three axes");
    Ok(SubPartitions { clusters, graphs, edge_partitions, class_partitions })
}

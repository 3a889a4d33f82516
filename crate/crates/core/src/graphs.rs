//! Immutable bipartite graphs, 3-partite 3-graphs and triads, with exact
//! density and counting primitives.

use serde::Serialize;

use crate::bitset::{and_count, words_for, BitSet};
use crate::error::{Error, Result};
use crate::rational::{ratio, Rational};

/// An index space `0..size` with a label. Two classes are the same class only
/// if both id and size agree.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
pub struct VertexClass {
    pub id: u32,
    pub size: usize,
}

impl VertexClass {
    pub fn new(id: u32, size: usize) -> Self {
        VertexClass { id, size }
    }

    fn nonempty(&self) -> Result<()> {
        if self.size == 0 {
            return Err(Error::DegenerateInput(format!("vertex class {} is empty", self.id)));
        }
        Ok(())
    }
}

/// Checks that `sub` is a duplicate-free subset of `0..n` and returns it as a mask.
pub(crate) fn subset_mask(n: usize, sub: &[usize], what: &str) -> Result<BitSet> {
    let mut mask = BitSet::new(n);
    for &v in sub {
        if v >= n {
            return Err(Error::OutOfBounds(format!("{what} vertex {v} not in 0..{n}")));
        }
        if mask.contains(v) {
            return Err(Error::DegenerateInput(format!("{what} lists vertex {v} twice")));
        }
        mask.insert(v);
    }
    Ok(mask)
}

/// Bipartite graph between `left` and `right`, stored as one packed row of
/// right-neighbours per left vertex.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct BipartiteGraph {
    left: VertexClass,
    right: VertexClass,
    stride: usize,
    rows: Vec<u64>,
    edge_count: usize,
}

impl BipartiteGraph {
    pub fn empty(left: VertexClass, right: VertexClass) -> Result<Self> {
        left.nonempty()?;
        right.nonempty()?;
        let stride = words_for(right.size);
        Ok(BipartiteGraph { left, right, stride, rows: vec![0; stride * left.size], edge_count: 0 })
    }

    pub fn complete(left: VertexClass, right: VertexClass) -> Result<Self> {
        let mut g = Self::empty(left, right)?;
        let full = BitSet::full(right.size);
        for x in 0..left.size {
            g.rows[x * g.stride..(x + 1) * g.stride].copy_from_slice(full.words());
        }
        g.edge_count = left.size * right.size;
        Ok(g)
    }

    /// Rejects out-of-range endpoints and repeated pairs.
    pub fn from_edges<I>(left: VertexClass, right: VertexClass, edges: I) -> Result<Self>
    where
        I: IntoIterator<Item = (usize, usize)>,
    {
        let mut g = Self::empty(left, right)?;
        for (x, y) in edges {
            if x >= left.size || y >= right.size {
                return Err(Error::OutOfBounds(format!(
                    "edge ({x},{y}) outside {}x{}",
                    left.size, right.size
                )));
            }
            if g.has_edge(x, y) {
                return Err(Error::DuplicateEdge(format!("({x},{y})")));
            }
            g.set(x, y);
        }
        Ok(g)
    }

    /// Builds from a per-left-vertex predicate.
    pub fn from_fn(
        left: VertexClass,
        right: VertexClass,
        mut f: impl FnMut(usize, usize) -> bool,
    ) -> Result<Self> {
        let mut g = Self::empty(left, right)?;
        for x in 0..left.size {
            for y in 0..right.size {
                if f(x, y) {
                    g.set(x, y);
                }
            }
        }
        Ok(g)
    }

    fn set(&mut self, x: usize, y: usize) {
        self.rows[x * self.stride + y / 64] |= 1 << (y % 64);
        self.edge_count += 1;
    }

    pub fn left(&self) -> VertexClass {
        self.left
    }

    pub fn right(&self) -> VertexClass {
        self.right
    }

    pub fn n_left(&self) -> usize {
        self.left.size
    }

    pub fn n_right(&self) -> usize {
        self.right.size
    }

    pub fn edge_count(&self) -> usize {
        self.edge_count
    }

    #[inline]
    pub fn row(&self, x: usize) -> &[u64] {
        &self.rows[x * self.stride..(x + 1) * self.stride]
    }

    #[inline]
    pub fn has_edge(&self, x: usize, y: usize) -> bool {
        x < self.left.size
            && y < self.right.size
            && self.rows[x * self.stride + y / 64] & (1 << (y % 64)) != 0
    }

    pub fn degree(&self, x: usize) -> usize {
        self.row(x).iter().map(|w| w.count_ones() as usize).sum()
    }

    /// Edges in lexicographic `(left, right)` order.
    pub fn edges(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        (0..self.left.size).flat_map(move |x| {
            let row = self.row(x);
            row.iter().enumerate().flat_map(move |(wi, &w)| {
                let mut w = w;
                std::iter::from_fn(move || {
                    if w == 0 {
                        return None;
                    }
                    let b = w.trailing_zeros() as usize;
                    w &= w - 1;
                    Some((x, wi * 64 + b))
                })
            })
        })
    }

    pub fn is_complete(&self) -> bool {
        self.edge_count == self.left.size * self.right.size
    }

    pub fn transpose(&self) -> BipartiteGraph {
        let mut t = BipartiteGraph::empty(self.right, self.left).expect("classes already nonempty");
        for (x, y) in self.edges() {
            t.set(y, x);
        }
        t
    }

    /// Same edges with relabelled (equally sized) classes.
    pub fn with_classes(&self, left: VertexClass, right: VertexClass) -> Result<BipartiteGraph> {
        if left.size != self.left.size || right.size != self.right.size {
            return Err(Error::ClassMismatch("relabelling must preserve class sizes".into()));
        }
        let mut g = self.clone();
        g.left = left;
        g.right = right;
        Ok(g)
    }

    /// `d(left, right) = e / (|left| |right|)`.
    pub fn density(&self) -> Rational {
        ratio(self.edge_count as u64, (self.left.size * self.right.size) as u64)
    }

    /// Number of edges between a left subset and a right mask.
    pub fn induced_edge_count(&self, a_sub: &[usize], b_mask: &BitSet) -> usize {
        a_sub.iter().map(|&x| and_count(self.row(x), b_mask.words())).sum()
    }

    pub fn induced_density(&self, a_sub: &[usize], b_sub: &[usize]) -> Result<Rational> {
        if a_sub.is_empty() || b_sub.is_empty() {
            return Err(Error::DegenerateInput("induced density of an empty subset".into()));
        }
        subset_mask(self.left.size, a_sub, "left subset")?;
        let mask = subset_mask(self.right.size, b_sub, "right subset")?;
        let e = self.induced_edge_count(a_sub, &mask);
        Ok(ratio(e as u64, (a_sub.len() * b_sub.len()) as u64))
    }

    /// `|{y in y_sub : (x,y) in E}|`.
    pub fn degree_into(&self, x: usize, y_sub: &[usize]) -> Result<usize> {
        if x >= self.left.size {
            return Err(Error::OutOfBounds(format!("left vertex {x}")));
        }
        let mask = subset_mask(self.right.size, y_sub, "right subset")?;
        Ok(and_count(self.row(x), mask.words()))
    }

    /// Induced graph on `(a_sub, b_sub)`, re-indexed so that the `k`-th listed
    /// vertex becomes vertex `k`. Class ids are kept.
    pub fn induced_subgraph(&self, a_sub: &[usize], b_sub: &[usize]) -> Result<BipartiteGraph> {
        subset_mask(self.left.size, a_sub, "left subset")?;
        subset_mask(self.right.size, b_sub, "right subset")?;
        BipartiteGraph::from_fn(
            VertexClass::new(self.left.id, a_sub.len()),
            VertexClass::new(self.right.id, b_sub.len()),
            |i, j| self.has_edge(a_sub[i], b_sub[j]),
        )
    }

    /// Graph with the edges of `self` not in `other` (same classes).
    pub fn difference(&self, other: &BipartiteGraph) -> Result<BipartiteGraph> {
        same_classes(self, other)?;
        let mut g = self.clone();
        g.edge_count = 0;
        for (w, o) in g.rows.iter_mut().zip(&other.rows) {
            *w &= !o;
            g.edge_count += w.count_ones() as usize;
        }
        Ok(g)
    }
}

fn same_classes(a: &BipartiteGraph, b: &BipartiteGraph) -> Result<()> {
    if a.left != b.left || a.right != b.right {
        return Err(Error::ClassMismatch(format!(
            "({:?},{:?}) vs ({:?},{:?})",
            a.left, a.right, b.left, b.right
        )));
    }
    Ok(())
}

/// Union of pairwise edge-disjoint graphs on identical classes.
pub fn edge_disjoint_union(gs: &[BipartiteGraph]) -> Result<BipartiteGraph> {
    let first = gs
        .first()
        .ok_or_else(|| Error::DegenerateInput("union of an empty family".into()))?;
    let mut u = BipartiteGraph::empty(first.left, first.right)?;
    for g in gs {
        same_classes(first, g)?;
        for (wi, (w, o)) in u.rows.iter_mut().zip(&g.rows).enumerate() {
            let shared = *w & o;
            if shared != 0 {
                let x = wi / u.stride;
                let y = (wi % u.stride) * 64 + shared.trailing_zeros() as usize;
                return Err(Error::NotDisjoint(format!("({x},{y})")));
            }
            *w |= o;
        }
        u.edge_count += g.edge_count;
    }
    Ok(u)
}

/// The complete product `first × second`, linearised row-major:
/// `index = v1 * |second| + v2`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
pub struct ProductSide {
    pub first: VertexClass,
    pub second: VertexClass,
}

impl ProductSide {
    pub fn new(first: VertexClass, second: VertexClass) -> Self {
        ProductSide { first, second }
    }

    pub fn size(&self) -> usize {
        self.first.size * self.second.size
    }

    #[inline]
    pub fn index(&self, v1: usize, v2: usize) -> usize {
        debug_assert!(v1 < self.first.size && v2 < self.second.size);
        v1 * self.second.size + v2
    }

    #[inline]
    pub fn split(&self, idx: usize) -> (usize, usize) {
        (idx / self.second.size, idx % self.second.size)
    }

    /// The product viewed as a single vertex class.
    pub fn as_class(&self, id: u32) -> VertexClass {
        VertexClass::new(id, self.size())
    }
}

/// 3-partite 3-uniform hypergraph. Triples `(i1,i2,i3)` are stored as packed
/// rows over the third class, one row per `(i1,i2)`.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct ThreeGraph {
    classes: [VertexClass; 3],
    stride: usize,
    rows: Vec<u64>,
    edge_count: usize,
}

impl ThreeGraph {
    pub fn empty(classes: [VertexClass; 3]) -> Result<Self> {
        for c in &classes {
            c.nonempty()?;
        }
        let stride = words_for(classes[2].size);
        Ok(ThreeGraph {
            classes,
            stride,
            rows: vec![0; stride * classes[0].size * classes[1].size],
            edge_count: 0,
        })
    }

    pub fn complete(classes: [VertexClass; 3]) -> Result<Self> {
        Self::from_fn(classes, |_, _, _| true)
    }

    pub fn from_triples<I>(classes: [VertexClass; 3], triples: I) -> Result<Self>
    where
        I: IntoIterator<Item = (usize, usize, usize)>,
    {
        let mut h = Self::empty(classes)?;
        for (a, b, c) in triples {
            if a >= classes[0].size || b >= classes[1].size || c >= classes[2].size {
                return Err(Error::OutOfBounds(format!("triple ({a},{b},{c})")));
            }
            if h.contains(a, b, c) {
                return Err(Error::DuplicateEdge(format!("({a},{b},{c})")));
            }
            h.set(a, b, c);
        }
        Ok(h)
    }

    pub fn from_fn(
        classes: [VertexClass; 3],
        mut f: impl FnMut(usize, usize, usize) -> bool,
    ) -> Result<Self> {
        let mut h = Self::empty(classes)?;
        for a in 0..classes[0].size {
            for b in 0..classes[1].size {
                for c in 0..classes[2].size {
                    if f(a, b, c) {
                        h.set(a, b, c);
                    }
                }
            }
        }
        Ok(h)
    }

    fn set(&mut self, a: usize, b: usize, c: usize) {
        let r = (a * self.classes[1].size + b) * self.stride;
        self.rows[r + c / 64] |= 1 << (c % 64);
        self.edge_count += 1;
    }

    pub fn classes(&self) -> [VertexClass; 3] {
        self.classes
    }

    pub fn sizes(&self) -> [usize; 3] {
        [self.classes[0].size, self.classes[1].size, self.classes[2].size]
    }

    pub fn edge_count(&self) -> usize {
        self.edge_count
    }

    /// Row of third-class neighbours of the pair `(a, b)`.
    #[inline]
    pub fn row(&self, a: usize, b: usize) -> &[u64] {
        let r = (a * self.classes[1].size + b) * self.stride;
        &self.rows[r..r + self.stride]
    }

    #[inline]
    pub fn contains(&self, a: usize, b: usize, c: usize) -> bool {
        a < self.classes[0].size
            && b < self.classes[1].size
            && c < self.classes[2].size
            && self.row(a, b)[c / 64] & (1 << (c % 64)) != 0
    }

    /// Triples in lexicographic order.
    pub fn triples(&self) -> impl Iterator<Item = (usize, usize, usize)> + '_ {
        let [n1, n2, _] = self.sizes();
        (0..n1).flat_map(move |a| {
            (0..n2).flat_map(move |b| {
                let row = self.row(a, b);
                row.iter().enumerate().flat_map(move |(wi, &w)| {
                    let mut w = w;
                    std::iter::from_fn(move || {
                        if w == 0 {
                            return None;
                        }
                        let bit = w.trailing_zeros() as usize;
                        w &= w - 1;
                        Some((a, b, wi * 64 + bit))
                    })
                })
            })
        })
    }

    /// `e(H) / (n1 n2 n3)`.
    pub fn density(&self) -> Rational {
        let [n1, n2, n3] = self.sizes();
        ratio(self.edge_count as u64, (n1 * n2 * n3) as u64)
    }

    /// Induced 3-graph on per-class subsets, re-indexed in listed order.
    pub fn induced(&self, subs: [&[usize]; 3]) -> Result<ThreeGraph> {
        for (i, s) in subs.iter().enumerate() {
            subset_mask(self.classes[i].size, s, "class subset")?;
        }
        let classes = [0, 1, 2].map(|i| VertexClass::new(self.classes[i].id, subs[i].len()));
        ThreeGraph::from_fn(classes, |a, b, c| self.contains(subs[0][a], subs[1][b], subs[2][c]))
    }
}

/// Three classes `(A, B, C)` with edge sets `E_AB`, `E_AC`, `E_BC`.
///
/// `members[k]` maps triad-local vertices of the k-th class to vertices of the
/// corresponding class of an ambient 3-graph; it is the identity for triads
/// built with [`Triad::new`].
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct Triad {
    ab: BipartiteGraph,
    ac: BipartiteGraph,
    bc: BipartiteGraph,
    members: [Vec<usize>; 3],
}

impl Triad {
    pub fn new(ab: BipartiteGraph, ac: BipartiteGraph, bc: BipartiteGraph) -> Result<Self> {
        let members = [
            (0..ab.n_left()).collect(),
            (0..ab.n_right()).collect(),
            (0..ac.n_right()).collect(),
        ];
        Self::embedded(ab, ac, bc, members)
    }

    pub fn embedded(
        ab: BipartiteGraph,
        ac: BipartiteGraph,
        bc: BipartiteGraph,
        members: [Vec<usize>; 3],
    ) -> Result<Self> {
        if ab.left() != ac.left() || ab.right() != bc.left() || ac.right() != bc.right() {
            return Err(Error::ClassMismatch(
                "triad edge sets must sit on (A,B), (A,C), (B,C)".into(),
            ));
        }
        let sizes = [ab.n_left(), ab.n_right(), ac.n_right()];
        for k in 0..3 {
            if members[k].len() != sizes[k] {
                return Err(Error::ClassMismatch(format!(
                    "class {k} embedding has {} vertices, expected {}",
                    members[k].len(),
                    sizes[k]
                )));
            }
        }
        Ok(Triad { ab, ac, bc, members })
    }

    /// Triad whose three sides are complete.
    pub fn complete(classes: [VertexClass; 3]) -> Result<Self> {
        let [a, b, c] = classes;
        Triad::new(
            BipartiteGraph::complete(a, b)?,
            BipartiteGraph::complete(a, c)?,
            BipartiteGraph::complete(b, c)?,
        )
    }

    pub fn ab(&self) -> &BipartiteGraph {
        &self.ab
    }

    pub fn ac(&self) -> &BipartiteGraph {
        &self.ac
    }

    pub fn bc(&self) -> &BipartiteGraph {
        &self.bc
    }

    pub fn classes(&self) -> [VertexClass; 3] {
        [self.ab.left(), self.ab.right(), self.ac.right()]
    }

    pub fn sizes(&self) -> [usize; 3] {
        [self.ab.n_left(), self.ab.n_right(), self.ac.n_right()]
    }

    pub fn members(&self) -> &[Vec<usize>; 3] {
        &self.members
    }

    pub fn total_edges(&self) -> usize {
        self.ab.edge_count() + self.ac.edge_count() + self.bc.edge_count()
    }

    /// `|{c : (a,c) in E_AC, (b,c) in E_BC}|`.
    #[inline]
    pub fn codegree(&self, a: usize, b: usize) -> usize {
        and_count(self.ac.row(a), self.bc.row(b))
    }
}

//! Brute-force reference implementations shared by the integration tests.
#![allow(dead_code)]

use hyreg::{BipartiteGraph, Rational, ThreeGraph, VertexClass, VertexPartition};
use num::BigInt;
use rand::seq::SliceRandom;
use rand::Rng;
use rand_chacha::ChaCha8Rng;

pub fn q(n: i64, d: i64) -> Rational {
    Rational::new(BigInt::from(n), BigInt::from(d))
}

pub fn qu(n: usize) -> Rational {
    Rational::from_integer(BigInt::from(n))
}

/// Smallest admissible subset size `max(1, ⌈r·n⌉)`.
pub fn floor_size(r: &Rational, n: usize) -> usize {
    let k = (r * qu(n)).ceil().to_integer();
    let k: usize = k.try_into().unwrap_or(usize::MAX);
    k.max(1)
}

/// Smallest `k ≥ 1` with `k² ≥ 4δn²`.
pub fn twice_sqrt_floor(delta: &Rational, n: usize) -> usize {
    let target = q(4, 1) * delta * qu(n * n);
    (1..).find(|&k| qu(k * k) >= target).unwrap()
}

/// Minimum and maximum of `e(A', B')` over every pair of subset sizes.
pub struct Extremes {
    pub nl: usize,
    pub nr: usize,
    pub edges: u64,
    min: Vec<u64>,
    max: Vec<u64>,
}

impl Extremes {
    pub fn of(g: &BipartiteGraph) -> Self {
        let (nl, nr) = (g.n_left(), g.n_right());
        assert!(nl <= 16 && nr <= 16, "oracle limited to 16 vertices per side");
        let rows: Vec<u32> =
            (0..nl).map(|x| (0..nr).filter(|&y| g.has_edge(x, y)).fold(0, |m, y| m | 1 << y)).collect();
        let w = nr + 1;
        let mut min = vec![u64::MAX; (nl + 1) * w];
        let mut max = vec![0u64; (nl + 1) * w];
        let mut e = vec![0u64; 1 << nl];
        let mut cnt = vec![0u64; nl];
        for b in 1u32..(1 << nr) {
            let bs = b.count_ones() as usize;
            for (c, r) in cnt.iter_mut().zip(&rows) {
                *c = (r & b).count_ones() as u64;
            }
            for a in 1usize..(1 << nl) {
                e[a] = e[a & (a - 1)] + cnt[a.trailing_zeros() as usize];
                let k = a.count_ones() as usize * w + bs;
                min[k] = min[k].min(e[a]);
                max[k] = max[k].max(e[a]);
            }
        }
        let edges = rows.iter().map(|r| r.count_ones() as u64).sum();
        Extremes { nl, nr, edges, min, max }
    }

    fn at(&self, i: usize, j: usize) -> (u64, u64) {
        let k = i * (self.nr + 1) + j;
        (self.min[k], self.max[k])
    }

    fn density(&self) -> Rational {
        Rational::new(BigInt::from(self.edges), BigInt::from(self.nl * self.nr))
    }

    /// `|d(A',B') − d| ≤ ε` for all `|A'| ≥ ε|A|`, `|B'| ≥ ε|B|`.
    pub fn eps_regular(&self, eps: &Rational) -> bool {
        let d = self.density();
        let (ka, kb) = (floor_size(eps, self.nl), floor_size(eps, self.nr));
        (ka..=self.nl).all(|i| {
            (kb..=self.nr).all(|j| {
                let (lo, hi) = self.at(i, j);
                [lo, hi].iter().all(|&e| {
                    let dd = Rational::new(BigInt::from(e), BigInt::from(i * j));
                    let diff = if dd > d { &dd - &d } else { &d - &dd };
                    diff <= *eps
                })
            })
        })
    }

    /// `d(A',B') ≥ d/2` for all `|A'| ≥ ka`, `|B'| ≥ kb`.
    pub fn half_regular(&self, ka: usize, kb: usize) -> bool {
        let slots = (self.nl * self.nr) as u64;
        (ka..=self.nl).all(|i| (kb..=self.nr).all(|j| 2 * self.at(i, j).0 * slots >= self.edges * (i * j) as u64))
    }

    pub fn delta_regular(&self, delta: &Rational) -> bool {
        self.half_regular(floor_size(delta, self.nl), floor_size(delta, self.nr))
    }
}

/// `e(A', B')` by direct lookup.
pub fn edges_between(g: &BipartiteGraph, a: &[usize], b: &[usize]) -> usize {
    a.iter().map(|&x| b.iter().filter(|&&y| g.has_edge(x, y)).count()).sum()
}

pub fn random_graph(rng: &mut ChaCha8Rng, nl: usize, nr: usize, p: f64) -> BipartiteGraph {
    BipartiteGraph::from_fn(VertexClass::new(0, nl), VertexClass::new(1, nr), |_, _| rng.random_bool(p)).unwrap()
}

pub fn random_threegraph(rng: &mut ChaCha8Rng, sizes: [usize; 3], p: f64) -> ThreeGraph {
    let classes = [0, 1, 2].map(|i| VertexClass::new(i as u32, sizes[i]));
    ThreeGraph::from_fn(classes, |_, _, _| rng.random_bool(p)).unwrap()
}

pub fn random_subset(rng: &mut ChaCha8Rng, n: usize, min: usize) -> Vec<usize> {
    let k = rng.random_range(min.clamp(1, n)..=n);
    let mut all: Vec<usize> = (0..n).collect();
    all.shuffle(rng);
    let mut s = all[..k].to_vec();
    s.sort_unstable();
    s
}

/// Random labelling of `0..n` using exactly `k` labels.
pub fn random_labels(rng: &mut ChaCha8Rng, n: usize, k: usize) -> Vec<usize> {
    let mut labels: Vec<usize> = (0..n).map(|i| if i < k { i } else { rng.random_range(0..k) }).collect();
    labels.shuffle(rng);
    labels
}

/// `S ⊂_β T` as `S ⊆ T` or `|S \ T| < β|S|`.
pub fn approx_subset(s: &[usize], t: &[usize], beta: &Rational) -> bool {
    let missing = s.iter().filter(|v| !t.contains(v)).count();
    missing == 0 || qu(missing) < beta * qu(s.len())
}

/// `Q ≺_β P`: the `q`-blocks that are `⊂_β` no block of `p` cover at most `β n` vertices.
pub fn approx_refines(q: &VertexPartition, p: &VertexPartition, beta: &Rational) -> bool {
    let stray: usize = q
        .blocks()
        .iter()
        .filter(|s| !p.blocks().iter().any(|t| approx_subset(s, t, beta)))
        .map(|s| s.len())
        .sum();
    qu(stray) <= beta * qu(q.n())
}

//! Seeded instance generators for the criterion benchmarks in `benches/`.

use hyreg::{BipartiteGraph, ThreeGraph, Triad, VertexClass};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub fn random_graph(nl: usize, nr: usize, p: f64, seed: u64) -> BipartiteGraph {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    BipartiteGraph::from_fn(VertexClass::new(0, nl), VertexClass::new(1, nr), |_, _| rng.random_bool(p))
        .expect("valid classes")
}

/// Equal classes of size `n`, every side and `H` drawn with probability `p`.
pub fn random_triad_instance(n: usize, p: f64, seed: u64) -> (ThreeGraph, Triad) {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let cls = [0, 1, 2].map(|i| VertexClass::new(i, n));
    let h = ThreeGraph::from_fn(cls, |_, _, _| rng.random_bool(p)).expect("valid classes");
    let mut side = |a: VertexClass, b: VertexClass| {
        BipartiteGraph::from_fn(a, b, |_, _| rng.random_bool(p)).expect("valid classes")
    };
    let (ab, ac, bc) = (side(cls[0], cls[1]), side(cls[0], cls[2]), side(cls[1], cls[2]));
    (h, Triad::new(ab, ac, bc).expect("matching classes"))
}

//! Certification of Szemerédi ε-regularity and ⟨δ⟩-regularity for bipartite
//! graphs, single pairs and partitioned graphs.
//!
//! Exhaustive mode enumerates every subset `A'` of the smaller side. For a
//! fixed `A'` and a fixed size `k`, the extreme values of `e(A', B')` over
//! `|B'| = k` are the sums of the `k` smallest and `k` largest column counts,
//! so checking those two choices decides every `B'` at once.

use rand::seq::index::sample;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::graphs::BipartiteGraph;
use crate::partitions::VertexPartition;
use crate::rational::{check_unit_interval, fmt_rational, ratio, ser_rational, Frac, Rational};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum Status {
    CertifiedRegular,
    IrregularWithWitness,
    UnknownNoWitnessFound,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum Method {
    Exhaustive,
    Randomized,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum Mode {
    Exhaustive,
    Randomized,
    Auto,
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize)]
pub struct Effort {
    /// subsets (or subtriads) examined exhaustively
    pub examined: u64,
    /// randomized restarts performed
    pub restarts: u32,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CheckParams {
    pub mode: Mode,
    pub max_exhaustive_side: usize,
    pub random_trials: u32,
    pub seed: u64,
}

impl Default for CheckParams {
    fn default() -> Self {
        CheckParams { mode: Mode::Auto, max_exhaustive_side: 12, random_trials: 32, seed: 0 }
    }
}

impl CheckParams {
    pub fn exhaustive() -> Self {
        CheckParams { mode: Mode::Exhaustive, ..Self::default() }
    }

    pub fn randomized(seed: u64) -> Self {
        CheckParams { mode: Mode::Randomized, seed, ..Self::default() }
    }

    pub fn with_seed(&self, seed: u64) -> Self {
        CheckParams { seed, ..self.clone() }
    }

    fn validate(&self) -> Result<()> {
        if self.random_trials == 0 {
            return Err(Error::ParameterOutOfContract("random_trials must be ≥ 1".into()));
        }
        Ok(())
    }

    /// Exhaustive iff the smaller side fits the budget (Auto), or as forced.
    fn use_exhaustive(&self, small_side: usize) -> Result<bool> {
        self.validate()?;
        match self.mode {
            Mode::Exhaustive if small_side > self.max_exhaustive_side.min(MAX_ENUM_SIDE) => {
                Err(Error::BudgetExceeded(format!(
                    "smaller side {small_side} exceeds exhaustive budget {}",
                    self.max_exhaustive_side.min(MAX_ENUM_SIDE)
                )))
            }
            Mode::Exhaustive => Ok(true),
            Mode::Randomized => Ok(false),
            Mode::Auto => Ok(small_side <= self.max_exhaustive_side.min(MAX_ENUM_SIDE)),
        }
    }
}

const MAX_ENUM_SIDE: usize = 30;

/// A pair of subsets, left then right, both sorted.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Witness {
    pub a_sub: Vec<usize>,
    pub b_sub: Vec<usize>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Verdict<W = Witness> {
    pub status: Status,
    pub witness: Option<W>,
    pub method: Method,
    pub effort: Effort,
}

impl<W> Verdict<W> {
    pub fn certified(effort: Effort) -> Self {
        Verdict { status: Status::CertifiedRegular, witness: None, method: Method::Exhaustive, effort }
    }

    pub fn irregular(w: W, method: Method, effort: Effort) -> Self {
        Verdict { status: Status::IrregularWithWitness, witness: Some(w), method, effort }
    }

    pub fn unknown(effort: Effort) -> Self {
        Verdict { status: Status::UnknownNoWitnessFound, witness: None, method: Method::Randomized, effort }
    }

    pub fn is_certified(&self) -> bool {
        self.status == Status::CertifiedRegular
    }

    pub fn is_irregular(&self) -> bool {
        self.status == Status::IrregularWithWitness
    }
}

/// Threshold `γ` of a ⟨γ⟩-check. `TwiceSqrt(δ)` stands for `γ = 2√δ` and is
/// handled by squaring the size floor.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Level {
    Exact(Rational),
    TwiceSqrt(Rational),
}

impl Level {
    fn validate(&self) -> Result<()> {
        match self {
            Level::Exact(r) => check_unit_interval("δ", r),
            Level::TwiceSqrt(r) => check_unit_interval("δ", r),
        }
    }

    /// Smallest `k ≥ 1` with `k ≥ γ n`; may exceed `n`.
    pub fn floor(&self, n: usize) -> Result<usize> {
        let k = match self {
            Level::Exact(r) => Frac::from_rational(r)?.ceil_mul(n),
            Level::TwiceSqrt(r) => {
                let f = Frac::from_rational(r)?;
                let rhs = 4 * f.num * (n as u128) * (n as u128);
                let mut k = 0u128;
                while f.den * k * k < rhs {
                    k += 1;
                }
                k as usize
            }
        };
        Ok(k.max(1))
    }

    pub fn describe(&self) -> String {
        match self {
            Level::Exact(r) => fmt_rational(r),
            Level::TwiceSqrt(r) => format!("2*sqrt({})", fmt_rational(r)),
        }
    }
}

/// The inequality a subset pair must satisfy.
#[derive(Clone, Copy, Debug)]
enum Test {
    /// `|d' − d| ≤ ε`
    Eps(Frac),
    /// `d' ≥ d/2`
    Half,
}

#[derive(Clone, Copy, Debug)]
struct Kernel {
    test: Test,
    /// `e(A, B)`
    e: u128,
    /// `|A| |B|`
    slots: u128,
}

impl Kernel {
    fn new(g: &BipartiteGraph, test: Test) -> Self {
        Kernel { test, e: g.edge_count() as u128, slots: (g.n_left() * g.n_right()) as u128 }
    }

    /// Whether `e'` edges over `s` slots break the inequality.
    #[inline]
    fn violates(&self, e_sub: u128, s: u128) -> bool {
        match self.test {
            Test::Half => 2 * e_sub * self.slots < self.e * s,
            Test::Eps(f) => {
                let (l, r) = (e_sub * self.slots, self.e * s);
                l.abs_diff(r) * f.den > f.num * s * self.slots
            }
        }
    }
}

fn witness_breaks(g: &BipartiteGraph, k: &Kernel, floors: (usize, usize), w: &Witness) -> bool {
    if w.a_sub.len() < floors.0 || w.b_sub.len() < floors.1 || w.a_sub.is_empty() || w.b_sub.is_empty() {
        return false;
    }
    match g.induced_density(&w.a_sub, &w.b_sub) {
        Ok(_) => {
            let mask = crate::bitset::BitSet::from_indices(g.n_right(), &w.b_sub);
            let e = g.induced_edge_count(&w.a_sub, &mask) as u128;
            k.violates(e, (w.a_sub.len() * w.b_sub.len()) as u128)
        }
        Err(_) => false,
    }
}

/// Re-verifies an ε-regularity witness from the definition.
pub fn verify_eps_witness(g: &BipartiteGraph, eps: &Rational, w: &Witness) -> Result<bool> {
    check_unit_interval("ε", eps)?;
    let f = Frac::from_rational(eps)?;
    let floors = (f.ceil_mul(g.n_left()).max(1), f.ceil_mul(g.n_right()).max(1));
    Ok(witness_breaks(g, &Kernel::new(g, Test::Eps(f)), floors, w))
}

/// Re-verifies a ⟨γ⟩-regularity witness from the definition.
pub fn verify_level_witness(g: &BipartiteGraph, level: &Level, w: &Witness) -> Result<bool> {
    level.validate()?;
    let floors = (level.floor(g.n_left())?, level.floor(g.n_right())?);
    Ok(witness_breaks(g, &Kernel::new(g, Test::Half), floors, w))
}

/// Exhaustive search over all `A'` of the left side (`n_left ≤ 63`).
fn exhaustive(g: &BipartiteGraph, kernel: &Kernel, ka: usize, kb: usize) -> (Option<Witness>, u64) {
    let (n, m) = (g.n_left(), g.n_right());
    let mut cols = vec![0u64; m];
    for (x, y) in g.edges() {
        cols[y] |= 1 << x;
    }
    let mut examined = 0u64;
    let mut asc: Vec<(u32, usize)> = Vec::with_capacity(m);
    for mask in 1u64..(1u64 << n) {
        let sa = mask.count_ones() as usize;
        if sa < ka {
            continue;
        }
        examined += 1;
        asc.clear();
        asc.extend(cols.iter().enumerate().map(|(y, c)| ((c & mask).count_ones(), y)));
        asc.sort_unstable();
        let mut desc = asc.clone();
        desc.sort_unstable_by(|a, b| b.0.cmp(&a.0).then(a.1.cmp(&b.1)));
        let (mut lo, mut hi) = (0u128, 0u128);
        for k in 1..=m {
            lo += asc[k - 1].0 as u128;
            hi += desc[k - 1].0 as u128;
            if k < kb {
                continue;
            }
            let s = (sa * k) as u128;
            let pick = if kernel.violates(lo, s) {
                Some(&asc)
            } else if matches!(kernel.test, Test::Eps(_)) && kernel.violates(hi, s) {
                Some(&desc)
            } else {
                None
            };
            if let Some(order) = pick {
                let a_sub = (0..n).filter(|&x| mask >> x & 1 == 1).collect();
                let mut b_sub: Vec<usize> = order[..k].iter().map(|p| p.1).collect();
                b_sub.sort_unstable();
                return (Some(Witness { a_sub, b_sub }), examined);
            }
        }
    }
    (None, examined)
}

#[derive(Clone, Copy, PartialEq, Eq)]
enum Dir {
    Down,
    Up,
}

/// Greedy peeling from a start pair: repeatedly drops the vertex whose removal
/// moves the induced density furthest in `dir`, checking the pair each step.
fn peel(
    g: &BipartiteGraph,
    gt: &BipartiteGraph,
    kernel: &Kernel,
    (ka, kb): (usize, usize),
    dir: Dir,
    mut in_a: Vec<bool>,
    mut in_b: Vec<bool>,
) -> Option<Witness> {
    let (n, m) = (g.n_left(), g.n_right());
    let mut deg_a: Vec<u128> = (0..n).map(|x| (0..m).filter(|&y| in_b[y] && g.has_edge(x, y)).count() as u128).collect();
    let mut deg_b: Vec<u128> = (0..m).map(|y| (0..n).filter(|&x| in_a[x] && g.has_edge(x, y)).count() as u128).collect();
    let mut sa = in_a.iter().filter(|b| **b).count();
    let mut sb = in_b.iter().filter(|b| **b).count();
    let mut e: u128 = (0..n).filter(|&x| in_a[x]).map(|x| deg_a[x]).sum();
    loop {
        if sa >= ka && sb >= kb && kernel.violates(e, (sa * sb) as u128) {
            return Some(Witness {
                a_sub: (0..n).filter(|&x| in_a[x]).collect(),
                b_sub: (0..m).filter(|&y| in_b[y]).collect(),
            });
        }
        // best candidate as (new edges, new slots, left?, index)
        let mut best: Option<(u128, u128, bool, usize)> = None;
        let better = |cand: (u128, u128), best: &Option<(u128, u128, bool, usize)>| match best {
            None => true,
            Some((be, bs, _, _)) => {
                let (l, r) = (cand.0 * bs, be * cand.1);
                match dir {
                    Dir::Down => l < r,
                    Dir::Up => l > r,
                }
            }
        };
        if sa > ka {
            for x in (0..n).filter(|&x| in_a[x]) {
                let c = (e - deg_a[x], ((sa - 1) * sb) as u128);
                if better(c, &best) {
                    best = Some((c.0, c.1, true, x));
                }
            }
        }
        if sb > kb {
            for y in (0..m).filter(|&y| in_b[y]) {
                let c = (e - deg_b[y], (sa * (sb - 1)) as u128);
                if better(c, &best) {
                    best = Some((c.0, c.1, false, y));
                }
            }
        }
        let (_, _, left, v) = best?;
        if left {
            in_a[v] = false;
            sa -= 1;
            e -= deg_a[v];
            for (y, d) in deg_b.iter_mut().enumerate() {
                if g.has_edge(v, y) {
                    *d -= 1;
                }
            }
        } else {
            in_b[v] = false;
            sb -= 1;
            e -= deg_b[v];
            for (x, d) in deg_a.iter_mut().enumerate() {
                if gt.has_edge(v, x) {
                    *d -= 1;
                }
            }
        }
    }
}

fn random_start(rng: &mut ChaCha8Rng, n: usize, floor: usize) -> Vec<bool> {
    let lo = floor.min(n).max(1);
    let size = rng.random_range(lo..=n);
    let mut v = vec![false; n];
    for i in sample(rng, n, size).iter() {
        v[i] = true;
    }
    v
}

fn greedy(
    g: &BipartiteGraph,
    kernel: &Kernel,
    floors: (usize, usize),
    restarts: u32,
    seed: u64,
) -> (Option<Witness>, u32) {
    let gt = g.transpose();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let dirs: &[Dir] = match kernel.test {
        Test::Half => &[Dir::Down],
        Test::Eps(_) => &[Dir::Down, Dir::Up],
    };
    for r in 0..restarts {
        let (a, b) = if r == 0 {
            (vec![true; g.n_left()], vec![true; g.n_right()])
        } else {
            (random_start(&mut rng, g.n_left(), floors.0), random_start(&mut rng, g.n_right(), floors.1))
        };
        for &d in dirs {
            if let Some(w) = peel(g, &gt, kernel, floors, d, a.clone(), b.clone()) {
                return (Some(w), r + 1);
            }
        }
    }
    (None, restarts)
}

fn run_check(g: &BipartiteGraph, kernel: Kernel, floors: (usize, usize), params: &CheckParams) -> Result<Verdict> {
    let (n, m) = (g.n_left(), g.n_right());
    let trivially_regular = floors.0 > n || floors.1 > m || g.is_complete() || g.edge_count() == 0;
    if trivially_regular {
        return Ok(Verdict::certified(Effort::default()));
    }
    if params.use_exhaustive(n.min(m))? {
        let swap = m < n;
        let (h, kernel, (ka, kb)) = if swap {
            let h = g.transpose();
            let k = Kernel::new(&h, kernel.test);
            (h, k, (floors.1, floors.0))
        } else {
            (g.clone(), kernel, floors)
        };
        let (w, examined) = exhaustive(&h, &kernel, ka, kb);
        let effort = Effort { examined, restarts: 0 };
        Ok(match w {
            None => Verdict::certified(effort),
            Some(w) => {
                let w = if swap { Witness { a_sub: w.b_sub, b_sub: w.a_sub } } else { w };
                Verdict::irregular(w, Method::Exhaustive, effort)
            }
        })
    } else {
        let (w, restarts) = greedy(g, &kernel, floors, params.random_trials, params.seed);
        let effort = Effort { examined: 0, restarts };
        Ok(match w {
            Some(w) => Verdict::irregular(w, Method::Randomized, effort),
            None => Verdict::unknown(effort),
        })
    }
}

/// Szemerédi ε-regularity: `|d(A',B') − d(A,B)| ≤ ε` whenever
/// `|A'| ≥ ε|A|` and `|B'| ≥ ε|B|`.
pub fn check_eps_regular(g: &BipartiteGraph, eps: &Rational, params: &CheckParams) -> Result<Verdict> {
    check_unit_interval("ε", eps)?;
    let f = Frac::from_rational(eps)?;
    let floors = (f.ceil_mul(g.n_left()).max(1), f.ceil_mul(g.n_right()).max(1));
    run_check(g, Kernel::new(g, Test::Eps(f)), floors, params)
}

/// ⟨δ⟩-regularity: `d(A',B') ≥ d(A,B)/2` whenever `|A'| ≥ δ|A|`, `|B'| ≥ δ|B|`.
pub fn check_delta_regular(g: &BipartiteGraph, delta: &Rational, params: &CheckParams) -> Result<Verdict> {
    check_level_regular(g, &Level::Exact(delta.clone()), params)
}

/// ⟨γ⟩-regularity for a possibly irrational `γ`.
pub fn check_level_regular(g: &BipartiteGraph, level: &Level, params: &CheckParams) -> Result<Verdict> {
    level.validate()?;
    let floors = (level.floor(g.n_left())?, level.floor(g.n_right())?);
    run_check(g, Kernel::new(g, Test::Half), floors, params)
}

/// Randomized greedy search for a ⟨δ⟩-witness.
pub fn find_delta_witness_greedy(g: &BipartiteGraph, delta: &Rational, seed: u64) -> Result<Option<Witness>> {
    let level = Level::Exact(delta.clone());
    level.validate()?;
    let floors = (level.floor(g.n_left())?, level.floor(g.n_right())?);
    if floors.0 > g.n_left() || floors.1 > g.n_right() {
        return Ok(None);
    }
    let restarts = CheckParams::default().random_trials;
    Ok(greedy(g, &Kernel::new(g, Test::Half), floors, restarts, seed).0)
}

/// Outcome for one pair of clusters.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct PairVerdict {
    pub left_block: usize,
    pub right_block: usize,
    #[serde(serialize_with = "ser_rational")]
    pub density: Rational,
    /// witness subsets are in the original graph's coordinates
    pub verdict: Verdict,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct PartitionVerdict {
    pub status: Status,
    pub pairs: Vec<PairVerdict>,
}

impl PartitionVerdict {
    fn from_pairs(pairs: Vec<PairVerdict>) -> Self {
        let status = aggregate(pairs.iter().map(|p| p.verdict.status));
        PartitionVerdict { status, pairs }
    }

    pub fn failing(&self) -> impl Iterator<Item = &PairVerdict> {
        self.pairs.iter().filter(|p| !p.verdict.is_certified())
    }
}

/// Certified iff all certified; irregular if any irregular; otherwise unknown.
pub fn aggregate(statuses: impl IntoIterator<Item = Status>) -> Status {
    let mut out = Status::CertifiedRegular;
    for s in statuses {
        match s {
            Status::IrregularWithWitness => return Status::IrregularWithWitness,
            Status::UnknownNoWitnessFound => out = Status::UnknownNoWitnessFound,
            Status::CertifiedRegular => {}
        }
    }
    out
}

fn check_sides(g: &BipartiteGraph, left: &VertexPartition, right: &VertexPartition) -> Result<()> {
    if left.n() != g.n_left() {
        return Err(Error::GroundMismatch(left.n(), g.n_left()));
    }
    if right.n() != g.n_right() {
        return Err(Error::GroundMismatch(right.n(), g.n_right()));
    }
    Ok(())
}

/// Runs the ⟨γ⟩-check on every pair (left block, right block) without edits.
/// Pairs inside one side carry no edges and are omitted.
pub fn check_perfect_delta_partition(
    g: &BipartiteGraph,
    left: &VertexPartition,
    right: &VertexPartition,
    level: &Level,
    params: &CheckParams,
) -> Result<PartitionVerdict> {
    check_sides(g, left, right)?;
    level.validate()?;
    let jobs: Vec<(usize, usize)> =
        (0..left.order()).flat_map(|i| (0..right.order()).map(move |j| (i, j))).collect();
    let pairs = jobs
        .par_iter()
        .map(|&(i, j)| {
            let (a, b) = (left.block(i), right.block(j));
            let sub = g.induced_subgraph(a, b)?;
            let p = params.with_seed(params.seed ^ ((i as u64) << 32 | j as u64));
            let mut verdict = check_level_regular(&sub, level, &p)?;
            if let Some(w) = verdict.witness.as_mut() {
                w.a_sub = w.a_sub.iter().map(|&x| a[x]).collect();
                w.b_sub = w.b_sub.iter().map(|&y| b[y]).collect();
            }
            Ok(PairVerdict { left_block: i, right_block: j, density: sub.density(), verdict })
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(PartitionVerdict::from_pairs(pairs))
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "outcome")]
pub enum EditOutcome {
    PerfectlyRegular,
    /// `edits` are the deleted edges in original coordinates, lexicographic
    RegularAfterEdits { count: usize, edits: Vec<(usize, usize)> },
    /// not a proof of irregularity
    NotCertified { failing_pairs: Vec<(usize, usize)> },
}

/// Partition form with edits. Failing pairs whose density is below `δ·d(g)`
/// are emptied; the result counts if the edits fit in `δ·e(g)` and the edited
/// graph passes the perfect check.
pub fn check_delta_partition_with_edits(
    g: &BipartiteGraph,
    left: &VertexPartition,
    right: &VertexPartition,
    delta: &Rational,
    params: &CheckParams,
) -> Result<EditOutcome> {
    let level = Level::Exact(delta.clone());
    let first = check_perfect_delta_partition(g, left, right, &level, params)?;
    if first.status == Status::CertifiedRegular {
        return Ok(EditOutcome::PerfectlyRegular);
    }
    let failing: Vec<(usize, usize)> = first.failing().map(|p| (p.left_block, p.right_block)).collect();
    let threshold = delta * g.density();
    if first.failing().any(|p| p.density >= threshold) {
        return Ok(EditOutcome::NotCertified { failing_pairs: failing });
    }
    let mut cut = vec![false; left.order() * right.order()];
    for &(i, j) in &failing {
        cut[i * right.order() + j] = true;
    }
    let is_cut = |x: usize, y: usize| cut[left.label(x) * right.order() + right.label(y)];
    let edits: Vec<(usize, usize)> = g.edges().filter(|&(x, y)| is_cut(x, y)).collect();
    let f = Frac::from_rational(delta)?;
    if (edits.len() as u128) * f.den > f.num * g.edge_count() as u128 {
        return Ok(EditOutcome::NotCertified { failing_pairs: failing });
    }
    let edited = BipartiteGraph::from_fn(g.left(), g.right(), |x, y| g.has_edge(x, y) && !is_cut(x, y))?;
    let second = check_perfect_delta_partition(&edited, left, right, &level, params)?;
    if second.status != Status::CertifiedRegular {
        let still = second.failing().map(|p| (p.left_block, p.right_block)).collect();
        return Ok(EditOutcome::NotCertified { failing_pairs: still });
    }
    Ok(EditOutcome::RegularAfterEdits { count: edits.len(), edits })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct DegreeProfile {
    pub exceptional_count: usize,
    pub exceptional: Vec<usize>,
}

/// Left vertices whose degree into `y_sub` lies outside `(d(X,Y) ± ε)|y_sub|`.
pub fn degree_profile(g: &BipartiteGraph, y_sub: &[usize], eps: &Rational) -> Result<DegreeProfile> {
    let f = Frac::from_rational(eps)?;
    let (e, slots, k) = (g.edge_count() as u128, (g.n_left() * g.n_right()) as u128, y_sub.len() as u128);
    let mut exceptional = Vec::new();
    for x in 0..g.n_left() {
        let deg = g.degree_into(x, y_sub)? as u128;
        // |deg − (e/slots)·k| ≤ ε k, scaled by slots·den
        if (deg * slots).abs_diff(e * k) * f.den > f.num * k * slots {
            exceptional.push(x);
        }
    }
    Ok(DegreeProfile { exceptional_count: exceptional.len(), exceptional })
}

/// Smallest `k/den` at which `g` is exhaustively certified ε-regular.
pub fn certified_eps_level(g: &BipartiteGraph, den: u64, params: &CheckParams) -> Result<Rational> {
    let p = CheckParams { mode: Mode::Exhaustive, ..params.clone() };
    for k in 0..=den {
        let eps = ratio(k, den);
        if check_eps_regular(g, &eps, &p)?.is_certified() {
            return Ok(eps);
        }
    }
    unreachable!("every graph is 1-regular")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graphs::VertexClass;
    use crate::rational::rat;

    fn cls(n: usize, m: usize) -> (VertexClass, VertexClass) {
        (VertexClass::new(0, n), VertexClass::new(1, m))
    }

    /// `A1×B1 ∪ A2×B2` on 8×8 with halves `0..4`, `4..8`.
    fn half_graph() -> BipartiteGraph {
        let (a, b) = cls(8, 8);
        BipartiteGraph::from_fn(a, b, |x, y| (x < 4) == (y < 4)).unwrap()
    }

    #[test]
    fn complete_and_empty_are_regular() {
        let (a, b) = cls(5, 7);
        let k = BipartiteGraph::complete(a, b).unwrap();
        let e = BipartiteGraph::empty(a, b).unwrap();
        for eps in [rat(1, 10), rat(1, 2), rat(1, 1)] {
            assert!(check_eps_regular(&k, &eps, &CheckParams::exhaustive()).unwrap().is_certified());
            assert!(check_delta_regular(&k, &eps, &CheckParams::exhaustive()).unwrap().is_certified());
            assert!(check_delta_regular(&e, &eps, &CheckParams::exhaustive()).unwrap().is_certified());
        }
    }

    #[test]
    fn half_graph_witnesses() {
        let g = half_graph();
        let v = check_eps_regular(&g, &rat(1, 4), &CheckParams::exhaustive()).unwrap();
        assert_eq!(v.status, Status::IrregularWithWitness);
        assert!(verify_eps_witness(&g, &rat(1, 4), v.witness.as_ref().unwrap()).unwrap());

        let v = check_delta_regular(&g, &rat(1, 2), &CheckParams::exhaustive()).unwrap();
        let w = v.witness.unwrap();
        assert_eq!(w, Witness { a_sub: vec![0, 1, 2, 3], b_sub: vec![4, 5, 6, 7] });
        assert!(verify_level_witness(&g, &Level::Exact(rat(1, 2)), &w).unwrap());
    }

    #[test]
    fn greedy_finds_half_graph_witness() {
        let g = half_graph();
        let w = find_delta_witness_greedy(&g, &rat(1, 2), 3).unwrap().unwrap();
        assert!(verify_level_witness(&g, &Level::Exact(rat(1, 2)), &w).unwrap());
        let k = BipartiteGraph::complete(cls(6, 6).0, cls(6, 6).1).unwrap();
        assert_eq!(find_delta_witness_greedy(&k, &rat(1, 3), 3).unwrap(), None);
        let v = check_delta_regular(&g, &rat(1, 2), &CheckParams::randomized(9)).unwrap();
        assert_eq!(v.method, Method::Randomized);
        assert!(v.is_irregular());
    }

    #[test]
    fn budget_and_auto() {
        let (a, b) = cls(13, 13);
        let g = BipartiteGraph::from_fn(a, b, |x, y| (x + y) % 3 == 0).unwrap();
        assert!(matches!(
            check_delta_regular(&g, &rat(1, 4), &CheckParams::exhaustive()),
            Err(Error::BudgetExceeded(_))
        ));
        let v = check_delta_regular(&g, &rat(1, 4), &CheckParams::default()).unwrap();
        assert_eq!(v.method, Method::Randomized);
        // a 4×40 graph is within budget on its smaller side
        let (a, b) = cls(4, 40);
        let g = BipartiteGraph::from_fn(a, b, |x, y| (x + y) % 2 == 0).unwrap();
        assert_eq!(check_delta_regular(&g, &rat(1, 4), &CheckParams::default()).unwrap().method, Method::Exhaustive);
    }

    #[test]
    fn twice_sqrt_floor() {
        // γ = 2·sqrt(1/16) = 1/2
        assert_eq!(Level::TwiceSqrt(rat(1, 16)).floor(8).unwrap(), 4);
        // γ = 2·sqrt(1/8) ≈ 0.707, 0.707·10 ≈ 7.07
        assert_eq!(Level::TwiceSqrt(rat(1, 8)).floor(10).unwrap(), 8);
        assert_eq!(Level::TwiceSqrt(rat(1, 2)).floor(3).unwrap(), 5);
        assert_eq!(Level::Exact(rat(0, 1)).floor(3).unwrap(), 1);
    }

    fn block_partitions() -> (VertexPartition, VertexPartition) {
        let p = VertexPartition::from_labels(&[0, 0, 0, 0, 1, 1, 1, 1]).unwrap();
        (p.clone(), p)
    }

    #[test]
    fn partition_checks() {
        let (a, b) = cls(8, 8);
        let (l, r) = block_partitions();
        let k = BipartiteGraph::complete(a, b).unwrap();
        let v = check_perfect_delta_partition(&k, &l, &r, &Level::Exact(rat(1, 2)), &CheckParams::exhaustive()).unwrap();
        assert_eq!(v.status, Status::CertifiedRegular);
        assert_eq!(v.pairs.len(), 4);

        // pair (0,0) is a half-graph on 4×4
        let g = BipartiteGraph::from_fn(a, b, |x, y| x >= 4 || y >= 4 || (x < 2) == (y < 2)).unwrap();
        let v = check_perfect_delta_partition(&g, &l, &r, &Level::Exact(rat(1, 2)), &CheckParams::exhaustive()).unwrap();
        assert_eq!(v.status, Status::IrregularWithWitness);
        assert_eq!(v.failing().map(|p| (p.left_block, p.right_block)).collect::<Vec<_>>(), vec![(0, 0)]);
        let w = v.pairs[0].verdict.witness.as_ref().unwrap();
        assert!(verify_level_witness(&g.induced_subgraph(&[0, 1, 2, 3], &[0, 1, 2, 3]).unwrap(), &Level::Exact(rat(1, 2)), w).unwrap());
    }

    #[test]
    fn edits() {
        let (a, b) = cls(8, 8);
        let (l, r) = block_partitions();
        let perfect = BipartiteGraph::from_fn(a, b, |x, y| (x < 4) == (y < 4)).unwrap();
        assert_eq!(
            check_delta_partition_with_edits(&perfect, &l, &r, &rat(1, 4), &CheckParams::exhaustive()).unwrap(),
            EditOutcome::PerfectlyRegular
        );
        let spurious = BipartiteGraph::from_fn(a, b, |x, y| (x < 4) == (y < 4) || (x, y) == (0, 5)).unwrap();
        assert_eq!(
            check_delta_partition_with_edits(&spurious, &l, &r, &rat(1, 4), &CheckParams::exhaustive()).unwrap(),
            EditOutcome::RegularAfterEdits { count: 1, edits: vec![(0, 5)] }
        );
        let halves = BipartiteGraph::from_fn(a, b, |x, y| (x % 4 < 2) == (y % 4 < 2)).unwrap();
        assert!(matches!(
            check_delta_partition_with_edits(&halves, &l, &r, &rat(1, 2), &CheckParams::exhaustive()).unwrap(),
            EditOutcome::NotCertified { .. }
        ));
    }

    #[test]
    fn degree_profiles() {
        let (a, b) = cls(5, 5);
        let all: Vec<usize> = (0..5).collect();
        let k = BipartiteGraph::complete(a, b).unwrap();
        assert_eq!(degree_profile(&k, &all, &rat(1, 10)).unwrap().exceptional_count, 0);
        let m = BipartiteGraph::from_fn(a, b, |x, y| x == y).unwrap();
        assert_eq!(degree_profile(&m, &all, &rat(1, 2)).unwrap().exceptional_count, 0);
        assert_eq!(degree_profile(&m, &[0, 1], &rat(1, 10)).unwrap().exceptional, vec![0, 1, 2, 3, 4]);
    }

    #[test]
    fn certified_level_is_minimal() {
        let g = half_graph();
        let lvl = certified_eps_level(&g, 20, &CheckParams::default()).unwrap();
        assert!(check_eps_regular(&g, &lvl, &CheckParams::exhaustive()).unwrap().is_certified());
        let below = &lvl - rat(1, 20);
        assert!(!check_eps_regular(&g, &below, &CheckParams::exhaustive()).unwrap().is_certified());
    }
}

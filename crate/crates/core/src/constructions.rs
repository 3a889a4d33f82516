//! Growth-schedule arithmetic, refinement-chain generators, the tight 6-cycle
//! pasting and toy-scale builders for the lower-bound scenarios.

use std::cmp::Ordering;
use std::fmt;

use num::bigint::{BigInt, BigUint, Sign};
use num::{One, Signed, ToPrimitive, Zero};
use rand::seq::SliceRandom;
use rand::{RngCore, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Serialize, Serializer};

use crate::error::{Error, Result};
use crate::graphs::{BipartiteGraph, ProductSide, ThreeGraph, VertexClass};
use crate::hyperreg::auxiliary_graph;
use crate::partitions::{is_equitable, refines, EdgePartition, Frame, TwoPartition, VertexPartition};

/// Values with at most this many bits are stored exactly.
pub const EXACT_BITS: u64 = 1 << 17;

/// Largest index for which `t(i)` is unrolled into nested powers of two.
const T_UNROLL: u64 = 40;

/// Largest height for which `twr(x)` is unrolled.
const TWR_UNROLL: u64 = 32;

/// Nonnegative integer that may be far beyond machine range.
///
/// Large values are kept as symbolic records over base-2 exponent stacks;
/// every record denotes a value above `2^EXACT_BITS`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum BigCount {
    Exact(BigUint),
    /// `2^exponent + offset`, with `|offset|` tiny relative to the power.
    Pow2 { exponent: Box<BigCount>, offset: BigInt },
    /// `t(index) / 2^shift`.
    ScheduleT { index: Box<BigCount>, shift: u64 },
    /// `twr(height)`.
    Twr { height: Box<BigCount> },
}

/// A value clamped to a cap.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Capped {
    #[serde(serialize_with = "ser_biguint")]
    pub value: BigUint,
    pub saturated: bool,
}

fn ser_biguint<S: Serializer>(v: &BigUint, s: S) -> std::result::Result<S::Ok, S::Error> {
    s.serialize_str(&v.to_string())
}

fn unsupported(what: &'static str) -> Error {
    Error::Overflow(what)
}

impl From<u64> for BigCount {
    fn from(v: u64) -> Self {
        BigCount::Exact(BigUint::from(v))
    }
}

impl From<BigUint> for BigCount {
    fn from(v: BigUint) -> Self {
        BigCount::Exact(v)
    }
}

impl BigCount {
    /// `2^exponent + offset`, stored exactly when small enough.
    pub fn pow2_plus(exponent: BigCount, offset: BigInt) -> Result<BigCount> {
        if let BigCount::Exact(e) = &exponent {
            if let Some(e) = e.to_u64().filter(|&e| e < EXACT_BITS) {
                let v = (BigInt::one() << e) + offset;
                return v
                    .to_biguint()
                    .map(BigCount::Exact)
                    .ok_or(Error::Overflow("negative power-of-two offset"));
            }
        }
        Ok(BigCount::Pow2 { exponent: Box::new(exponent), offset })
    }

    pub fn pow2(exponent: BigCount) -> Result<BigCount> {
        Self::pow2_plus(exponent, BigInt::zero())
    }

    pub fn exact(&self) -> Option<&BigUint> {
        match self {
            BigCount::Exact(v) => Some(v),
            _ => None,
        }
    }

    pub fn is_exact(&self) -> bool {
        matches!(self, BigCount::Exact(_))
    }

    /// `self + k`.
    pub fn add_int(&self, k: &BigInt) -> Result<BigCount> {
        match self {
            BigCount::Exact(v) => (BigInt::from(v.clone()) + k)
                .to_biguint()
                .map(BigCount::Exact)
                .ok_or(Error::Overflow("negative count")),
            BigCount::Pow2 { exponent, offset } => {
                Self::pow2_plus((**exponent).clone(), offset + k)
            }
            _ => Err(unsupported("addition on a symbolic schedule value")),
        }
    }

    /// `self · 2^k`.
    pub fn mul_pow2(&self, k: u64) -> Result<BigCount> {
        match self {
            BigCount::Exact(v) => {
                if v.bits() + k <= EXACT_BITS {
                    return Ok(BigCount::Exact(v << k));
                }
                if v.is_zero() {
                    return Ok(self.clone());
                }
                if is_pow2(v) {
                    let log = v.bits() - 1;
                    return Self::pow2(BigCount::Exact(BigUint::from(log) + k));
                }
                Err(unsupported("scaling a non-power of two beyond exact range"))
            }
            BigCount::Pow2 { exponent, offset } => {
                Self::pow2_plus(exponent.add_int(&BigInt::from(k))?, offset << k)
            }
            BigCount::ScheduleT { index, shift } if *shift >= k => {
                Ok(BigCount::ScheduleT { index: index.clone(), shift: shift - k })
            }
            _ => Err(unsupported("scaling a symbolic schedule value")),
        }
    }

    /// `self / 2^k`, only when the division is exact.
    pub fn div_pow2(&self, k: u64) -> Result<BigCount> {
        match self {
            BigCount::Exact(v) => {
                if v.is_zero() || v.trailing_zeros().unwrap_or(0) >= k {
                    Ok(BigCount::Exact(v >> k))
                } else {
                    Err(Error::Divisibility(format!("{v} is not divisible by 2^{k}")))
                }
            }
            BigCount::Pow2 { exponent, offset } => {
                if !offset.is_zero() && offset.trailing_zeros().unwrap_or(0) < k {
                    return Err(Error::Divisibility(format!("offset {offset} is not divisible by 2^{k}")));
                }
                Self::pow2_plus(exponent.add_int(&-BigInt::from(k))?, offset >> k)
            }
            BigCount::ScheduleT { index, shift } => Ok(BigCount::ScheduleT {
                index: index.clone(),
                shift: shift.checked_add(k).ok_or(Error::Overflow("schedule shift"))?,
            }),
            BigCount::Twr { .. } => Err(unsupported("dividing a tower record")),
        }
    }

    /// `None` when the record does not decide the question.
    pub fn is_power_of_two(&self) -> Option<bool> {
        match self {
            BigCount::Exact(v) => Some(is_pow2(v)),
            BigCount::Pow2 { offset, .. } => Some(offset.is_zero()),
            BigCount::ScheduleT { .. } => None,
            BigCount::Twr { .. } => Some(true),
        }
    }

    /// Comparison of the denoted values; `None` if the records cannot be
    /// ordered symbolically.
    pub fn compare(&self, other: &BigCount) -> Option<Ordering> {
        use BigCount::*;
        match (self, other) {
            (Exact(x), Exact(y)) => Some(x.cmp(y)),
            (Exact(_), _) => Some(Ordering::Less),
            (_, Exact(_)) => Some(Ordering::Greater),
            (Pow2 { exponent: e1, offset: o1 }, Pow2 { exponent: e2, offset: o2 }) => {
                if e1 == e2 {
                    Some(o1.cmp(o2))
                } else {
                    e1.compare(e2)
                }
            }
            (ScheduleT { index: i1, shift: s1 }, ScheduleT { index: i2, shift: s2 }) => {
                if i1 == i2 {
                    Some(s2.cmp(s1))
                } else {
                    i1.compare(i2)
                }
            }
            (Twr { height: h1 }, Twr { height: h2 }) => h1.compare(h2),
            _ => {
                let (al, au) = (self.height_lower()?, self.height_upper());
                let (bl, bu) = (other.height_lower()?, other.height_upper());
                if au.as_ref().is_some_and(|au| *au < bl) {
                    Some(Ordering::Less)
                } else if bu.as_ref().is_some_and(|bu| *bu < al) {
                    Some(Ordering::Greater)
                } else {
                    None
                }
            }
        }
    }

    /// `Some(true)` iff `self ≥ other` is decided.
    pub fn ge(&self, other: &BigCount) -> Option<bool> {
        self.compare(other).map(|o| o != Ordering::Less)
    }

    /// Largest `h` with `twr(h) ≤ self`, when known.
    fn height_lower(&self) -> Option<BigUint> {
        match self {
            BigCount::Exact(v) => {
                let mut h = 0u64;
                while h < 6 && twr_small(h + 1).is_some_and(|t| t <= *v) {
                    h += 1;
                }
                Some(BigUint::from(h))
            }
            BigCount::Pow2 { exponent, .. } => exponent.height_lower(),
            BigCount::ScheduleT { index, .. } => index.exact().cloned(),
            BigCount::Twr { height } => height.exact().cloned(),
        }
    }

    /// Smallest `h` with `twr(h) ≥ self`, when known.
    fn height_upper(&self) -> Option<BigUint> {
        match self {
            BigCount::Exact(v) => {
                let mut h = 0u64;
                while h < 6 && twr_small(h).is_some_and(|t| t < *v) {
                    h += 1;
                }
                Some(BigUint::from(h))
            }
            BigCount::Pow2 { exponent, .. } => exponent.height_upper().map(|h| h + 2u32),
            BigCount::ScheduleT { .. } => None,
            BigCount::Twr { height } => height.exact().cloned(),
        }
    }

    /// The value clamped to `cap`; symbolic records always saturate.
    pub fn capped(&self, cap: &BigUint) -> Capped {
        match self {
            BigCount::Exact(v) if v <= cap => Capped { value: v.clone(), saturated: false },
            _ => Capped { value: cap.clone(), saturated: true },
        }
    }
}

/// `twr(h)` for `h ≤ 5`.
fn twr_small(h: u64) -> Option<BigUint> {
    let mut v = BigUint::one();
    for _ in 0..h {
        let e = v.to_u64().filter(|&e| e <= 65536)?;
        v = BigUint::one() << e;
    }
    Some(v)
}

fn is_pow2(v: &BigUint) -> bool {
    !v.is_zero() && v.count_ones() == 1
}

impl fmt::Display for BigCount {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            BigCount::Exact(v) => {
                if v.bits() > 64 && is_pow2(v) {
                    write!(f, "2^{}", v.bits() - 1)
                } else {
                    write!(f, "{v}")
                }
            }
            BigCount::Pow2 { exponent, offset } => {
                write!(f, "2^({exponent})")?;
                match offset.sign() {
                    Sign::Plus => write!(f, " + {offset}"),
                    Sign::Minus => write!(f, " - {}", offset.abs()),
                    Sign::NoSign => Ok(()),
                }
            }
            BigCount::ScheduleT { index, shift } => {
                write!(f, "t({index})")?;
                if *shift > 0 {
                    write!(f, "/2^{shift}")?;
                }
                Ok(())
            }
            BigCount::Twr { height } => write!(f, "twr({height})"),
        }
    }
}

impl Serialize for BigCount {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}

/// `e(i) = 2^(i+10)`.
pub fn func_e(i: u64) -> BigCount {
    BigCount::pow2(BigCount::Exact(BigUint::from(i) + 10u32)).expect("positive exponent")
}

/// `t(1) = 2^250`, `t(i+1) = 2^(t(i)/e(i))`.
pub fn func_t(i: u64) -> Result<BigCount> {
    func_t_of(&BigCount::from(i))
}

/// `t` at a possibly symbolic index.
pub fn func_t_of(index: &BigCount) -> Result<BigCount> {
    match index.exact().and_then(|i| i.to_u64()) {
        Some(0) => Err(Error::ParameterOutOfContract("t(i) needs i >= 1".into())),
        Some(i) if i <= T_UNROLL => {
            let mut t = BigCount::Exact(BigUint::one() << 250u32);
            for k in 1..i {
                t = BigCount::pow2(t.div_pow2(k + 10)?)?;
            }
            Ok(t)
        }
        _ => Ok(BigCount::ScheduleT { index: Box::new(index.clone()), shift: 0 }),
    }
}

/// `f*(i) = t(f(i)) / e(i)`; requires `f(i) ≥ i`.
pub fn func_fstar(f: impl Fn(u64) -> Result<BigCount>, i: u64) -> Result<BigCount> {
    if i == 0 {
        return Err(Error::ParameterOutOfContract("f*(i) needs i >= 1".into()));
    }
    let fi = f(i)?;
    match fi.ge(&BigCount::from(i)) {
        Some(true) => {}
        Some(false) => return Err(Error::PreconditionFailed(format!("f({i}) = {fi} < {i}"))),
        None => return Err(Error::PreconditionFailed(format!("cannot decide f({i}) >= {i}"))),
    }
    func_t_of(&fi)?.div_pow2(i + 10)
}

/// `w(1) = 1`, `w(i+1) = w*(i)`.
pub fn func_w(i: u64) -> Result<BigCount> {
    if i == 0 {
        return Err(Error::ParameterOutOfContract("w(i) needs i >= 1".into()));
    }
    let mut w = BigCount::from(1);
    for k in 1..i {
        w = func_t_of(&w)?.div_pow2(k + 10)?;
    }
    Ok(w)
}

/// `twr(0) = 1`, `twr(x+1) = 2^twr(x)`; so `twr(1) = 2` and `twr(3) = 16`.
pub fn func_twr(x: u64) -> BigCount {
    func_twr_of(&BigCount::from(x))
}

pub fn func_twr_of(height: &BigCount) -> BigCount {
    match height.exact().and_then(|h| h.to_u64()) {
        Some(h) if h <= TWR_UNROLL => {
            let mut v = BigCount::from(1);
            for _ in 0..h {
                v = BigCount::pow2(v).expect("towers are positive");
            }
            v
        }
        _ => BigCount::Twr { height: Box::new(height.clone()) },
    }
}

/// `wow(x)`: `twr` applied `x` times to 1.
pub fn func_wow(x: u64) -> BigCount {
    let mut v = BigCount::from(1);
    for _ in 0..x {
        v = func_twr_of(&v);
    }
    v
}

/// Two refinement chains on the sides of a bipartite graph.
#[derive(Clone, Debug)]
pub struct ChainPair {
    pub l_side: VertexClass,
    pub r_side: VertexClass,
    pub l_chain: Vec<VertexPartition>,
    pub r_chain: Vec<VertexPartition>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum Side {
    Left,
    Right,
}

/// A failed assumption; levels are 1-based.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "kind")]
pub enum CoreViolation {
    ChainLength { left: usize, right: usize },
    GroundMismatch { side: Side, level: usize, ground: usize },
    NotRefining { side: Side, level: usize },
    NotEquitable { side: Side, level: usize },
    RightTooSmall { order: usize },
    NotPowerOfTwo { level: usize, order: usize },
    SlowGrowth { level: usize, order: usize, next: usize },
    /// `exponent` is `|R_i| / 2^(i+10)` when that is an integer.
    LeftOrder { level: usize, exponent: Option<usize>, actual: usize },
}

/// Checks the structural and numeric assumptions on a pair of chains; every
/// item is evaluated independently.
pub fn validate_core_assumptions(c: &ChainPair) -> Vec<CoreViolation> {
    let mut out = Vec::new();
    if c.l_chain.len() != c.r_chain.len() {
        out.push(CoreViolation::ChainLength { left: c.l_chain.len(), right: c.r_chain.len() });
    }
    for (side, class, chain) in [(Side::Left, c.l_side, &c.l_chain), (Side::Right, c.r_side, &c.r_chain)] {
        for (k, p) in chain.iter().enumerate() {
            let level = k + 1;
            if p.n() != class.size {
                out.push(CoreViolation::GroundMismatch { side, level, ground: p.n() });
                continue;
            }
            if !is_equitable(p) {
                out.push(CoreViolation::NotEquitable { side, level });
            }
            if k > 0 && !refines(p, &chain[k - 1]).unwrap_or(false) {
                out.push(CoreViolation::NotRefining { side, level });
            }
        }
    }
    let r: Vec<usize> = c.r_chain.iter().map(VertexPartition::order).collect();
    if let Some(&r1) = r.first() {
        if BigUint::from(r1) < BigUint::one() << 200u32 {
            out.push(CoreViolation::RightTooSmall { order: r1 });
        }
    }
    for (k, &ri) in r.iter().enumerate() {
        if !ri.is_power_of_two() {
            out.push(CoreViolation::NotPowerOfTwo { level: k + 1, order: ri });
        }
        if let Some(&next) = r.get(k + 1) {
            if (next as u128) < 4 * ri as u128 {
                out.push(CoreViolation::SlowGrowth { level: k + 1, order: ri, next });
            }
        }
    }
    for (k, l) in c.l_chain.iter().enumerate() {
        let Some(&ri) = r.get(k) else { break };
        let shift = k + 11;
        let exponent = (shift < usize::BITS as usize && ri % (1usize << shift) == 0).then(|| ri >> shift);
        let actual = l.order();
        let ok = exponent.is_some_and(|x| x < usize::BITS as usize && actual == 1usize << x);
        if !ok {
            out.push(CoreViolation::LeftOrder { level: k + 1, exponent, actual });
        }
    }
    out
}

/// Random chain of equitable partitions of `0..n` with the given orders,
/// each refining the previous.
pub fn random_refinement_chain(n: usize, orders: &[usize], seed: u64) -> Result<Vec<VertexPartition>> {
    let mut prev: Option<usize> = None;
    for &o in orders {
        if o == 0 || !n.is_multiple_of(o) {
            return Err(Error::Divisibility(format!("order {o} does not divide {n}")));
        }
        if let Some(p) = prev {
            if o <= p {
                return Err(Error::ParameterOutOfContract(format!("orders must strictly increase, got {orders:?}")));
            }
            if o % p != 0 {
                return Err(Error::Divisibility(format!("order {p} does not divide {o}")));
            }
        }
        prev = Some(o);
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut blocks: Vec<Vec<usize>> = vec![(0..n).collect()];
    let mut out = Vec::with_capacity(orders.len());
    for &o in orders {
        let r = o / blocks.len();
        let mut next = Vec::with_capacity(o);
        for mut b in blocks {
            b.shuffle(&mut rng);
            let size = b.len() / r;
            for chunk in b.chunks(size) {
                let mut c = chunk.to_vec();
                c.sort_unstable();
                next.push(c);
            }
        }
        blocks = next;
        out.push(VertexPartition::from_blocks(n, blocks.clone())?);
    }
    Ok(out)
}

/// Successively refined equitable edge partitions with `|chain[j-1]| = 2^j`.
#[derive(Clone, Debug)]
pub struct EdgeChain {
    pub carrier: ProductSide,
    pub chain: Vec<EdgePartition>,
}

impl EdgeChain {
    /// True iff every level is equitable and refines the previous one.
    pub fn is_valid(&self) -> Result<bool> {
        let mut prev: Option<VertexPartition> = None;
        for (k, ep) in self.chain.iter().enumerate() {
            if ep.order() != 1 << (k + 1) || !ep.is_equitable() {
                return Ok(false);
            }
            let vp = ep.to_vertex_partition()?;
            if let Some(p) = &prev {
                if !refines(&vp, p)? {
                    return Ok(false);
                }
            }
            prev = Some(vp);
        }
        Ok(true)
    }
}

/// Uniformly random surrogate chain of `s` levels on `carrier`.
pub fn random_edge_equipartition_chain(carrier: ProductSide, s: usize, seed: u64) -> Result<EdgeChain> {
    let size = carrier.size();
    if s >= usize::BITS as usize || !size.is_multiple_of(1usize << s) {
        return Err(Error::Divisibility(format!("2^{s} does not divide |carrier| = {size}")));
    }
    let orders: Vec<usize> = (1..=s).map(|j| 1 << j).collect();
    let chain = random_refinement_chain(size, &orders, seed)?
        .iter()
        .map(|p| EdgePartition::from_vertex_partition(carrier, p))
        .collect::<Result<Vec<_>>>()?;
    Ok(EdgeChain { carrier, chain })
}

/// Vertex classes `{0,3}`, `{1,4}`, `{2,5}` of the tight 6-cycle.
pub const SIX_CYCLE_CLASSES: [[usize; 2]; 3] = [[0, 3], [1, 4], [2, 5]];

/// Edges `{x, x+1, x+2}` (mod 6) of the tight 6-cycle, in order of `x`.
pub fn tight_six_cycle() -> Vec<[usize; 3]> {
    (0..6).map(|x| [x, (x + 1) % 6, (x + 2) % 6]).collect()
}

/// Pastes `parts[x]`, a 3-graph on `(V^x, V^{x+1}, V^{x+2})`, into one
/// 3-graph on `(V^0 ∪ V^3, V^1 ∪ V^4, V^2 ∪ V^5)`. Vertex `y` of `V^h` becomes
/// vertex `(h/3)·n + y` of class `h mod 3`.
pub fn six_cycle_paste(parts: &[ThreeGraph]) -> Result<ThreeGraph> {
    if parts.len() != 6 {
        return Err(Error::ParameterOutOfContract(format!("expected 6 parts, got {}", parts.len())));
    }
    let n = parts[0].sizes()[0];
    for p in parts {
        let s = p.sizes();
        if s != [n, n, n] {
            return Err(Error::ClassSizeMismatch(s));
        }
    }
    let classes = [0, 1, 2].map(|c| VertexClass::new(c, 2 * n));
    let mut triples = Vec::with_capacity(parts.iter().map(ThreeGraph::edge_count).sum());
    for (x, p) in parts.iter().enumerate() {
        for (a, b, c) in p.triples() {
            let mut slot = [0usize; 3];
            for (k, y) in [a, b, c].into_iter().enumerate() {
                let h = (x + k) % 6;
                slot[h % 3] = (h / 3) * n + y;
            }
            triples.push((slot[0], slot[1], slot[2]));
        }
    }
    ThreeGraph::from_triples(classes, triples)
}

/// Small stand-ins for `t`, `e` and `w`, indexed from 1.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ToySchedule {
    pub t: Vec<usize>,
    pub e: Vec<usize>,
    pub w: Vec<usize>,
}

/// A place where a toy schedule departs from the real recurrences.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ScheduleDeviation {
    pub function: &'static str,
    pub index: usize,
    pub expected: Option<u128>,
    pub actual: usize,
}

impl ToySchedule {
    /// `t(i) = 2^i` for `i ≤ s+2`, `e ≡ 1`, `w(j) = j` for `j ≤ s+1`.
    pub fn doubling(s: usize) -> Self {
        ToySchedule {
            t: (1..=s + 2).map(|i| 1 << i).collect(),
            e: vec![1; s + 2],
            w: (1..=s + 1).collect(),
        }
    }

    pub fn t(&self, i: usize) -> usize {
        self.t[i - 1]
    }

    pub fn w(&self, j: usize) -> usize {
        self.w[j - 1]
    }

    /// `w*(j) = w(j+1)`.
    pub fn w_star(&self, j: usize) -> usize {
        self.w[j]
    }

    /// Number of vertex levels needed for parameter `s`: `w*(s) + 1`.
    pub fn levels(&self, s: usize) -> usize {
        self.w_star(s) + 1
    }

    /// Structural consistency needed by the builders.
    pub fn check(&self, s: usize) -> Result<()> {
        let bad = |m: String| Err(Error::PreconditionFailed(m));
        if self.w.len() < s + 1 {
            return bad(format!("w needs {} values, has {}", s + 1, self.w.len()));
        }
        if self.w[0] < 1 || self.w.windows(2).any(|p| p[1] <= p[0]) {
            return bad("w must be positive and strictly increasing".into());
        }
        let m = self.levels(s);
        if self.t.len() < m {
            return bad(format!("t needs {m} values, has {}", self.t.len()));
        }
        if self.t[0] < 1 || self.t.windows(2).any(|p| p[1] <= p[0] || p[1] % p[0] != 0) {
            return bad("each t(i) must properly divide t(i+1)".into());
        }
        if self.e.len() + 1 < self.t.len() {
            return bad("e is shorter than t".into());
        }
        Ok(())
    }

    /// Every index where `t(i+1) = 2^(t(i)/e(i))` or `w(j+1) = t(w(j))/e(j)` fails.
    pub fn deviations(&self) -> Vec<ScheduleDeviation> {
        let mut out = Vec::new();
        for i in 1..self.t.len() {
            let (ti, ei) = (self.t(i), self.e.get(i - 1).copied().unwrap_or(0));
            let expected = (ei > 0 && ti % ei == 0 && ti / ei < 128).then(|| 1u128 << (ti / ei));
            if expected != Some(self.t(i + 1) as u128) {
                out.push(ScheduleDeviation { function: "t", index: i + 1, expected, actual: self.t(i + 1) });
            }
        }
        for j in 1..self.w.len() {
            let wj = self.w(j);
            let ej = self.e.get(j - 1).copied().unwrap_or(0);
            let expected = self
                .t
                .get(wj.wrapping_sub(1))
                .filter(|&&t| ej > 0 && t % ej == 0)
                .map(|&t| (t / ej) as u128);
            if expected != Some(self.w(j + 1) as u128) {
                out.push(ScheduleDeviation { function: "w", index: j + 1, expected, actual: self.w(j + 1) });
            }
        }
        out
    }
}

/// Output of [`build_key_argument_scenario`]. Chains and level lists are
/// 1-based in meaning: `vertex_chains[h][i-1]` is `V^i_h`.
#[derive(Clone, Debug)]
pub struct KeyScenario {
    pub h: ThreeGraph,
    pub g_prime: BipartiteGraph,
    pub vertex_chains: [Vec<VertexPartition>; 3],
    /// Surrogate for the first application on `V¹ × V²`, `w*(s)` levels.
    pub first_chain: EdgeChain,
    /// `w*(j)` for `j = 1..=s`.
    pub selected_edge_levels: Vec<usize>,
    /// `w(j)` for `j = 1..=s`.
    pub selected_vertex_levels: Vec<usize>,
    /// Surrogate for the second application on `(V¹ × V²) × V³`, `s` levels.
    pub second_chain: EdgeChain,
    /// Complete 2-partitions over `V^1` and `V^m`.
    pub probes: Vec<TwoPartition>,
    pub identity_holds: bool,
}

/// Pulls a bipartite graph on `(V¹ × V², V³)` back to the 3-graph whose
/// third auxiliary graph it is.
pub fn pullback(g: &BipartiteGraph, classes: [VertexClass; 3]) -> Result<ThreeGraph> {
    let product = ProductSide::new(classes[0], classes[1]);
    if g.n_left() != product.size() || g.n_right() != classes[2].size {
        return Err(Error::ClassMismatch("graph is not on (V1 x V2, V3)".into()));
    }
    ThreeGraph::from_triples(
        classes,
        g.edges().map(|(p, c)| {
            let (a, b) = product.split(p);
            (a, b, c)
        }),
    )
}

/// Density `2^-s` part: one block of the last level of a random chain on
/// `(V¹ × V²) × V³`, pulled back to a 3-graph.
fn pulled_part(classes: [VertexClass; 3], s: usize, seed: u64) -> Result<(EdgeChain, BipartiteGraph, ThreeGraph)> {
    let left = ProductSide::new(classes[0], classes[1]).as_class(13);
    let carrier = ProductSide::new(left, classes[2]);
    let chain = random_edge_equipartition_chain(carrier, s, seed)?;
    let g = match chain.chain.last() {
        Some(ep) => ep.blocks()[0].clone(),
        None => BipartiteGraph::complete(left, classes[2])?,
    };
    let h = pullback(&g, classes)?;
    Ok((chain, g, h))
}

fn level_orders(sched: &ToySchedule, m: usize) -> Vec<usize> {
    (1..=m).map(|i| sched.t(i)).collect()
}

/// Joins per-class partitions into one partition of the framed ground set.
fn framed_partition(frame: &Frame, parts: &[&VertexPartition]) -> Result<VertexPartition> {
    let mut labels = Vec::with_capacity(frame.total());
    let mut base = 0;
    for p in parts {
        labels.extend(p.labels().iter().map(|&l| base + l));
        base += p.order();
    }
    VertexPartition::from_labels(&labels)
}

/// Toy-scale wiring of the key-argument construction on three classes of
/// size `n`: vertex chains with orders `t(1..=m)`, two surrogate edge chains,
/// and `H` pulled back from `G'` so that `G' = G_H^3`.
pub fn build_key_argument_scenario(sched: &ToySchedule, s: usize, n: usize, seed: u64) -> Result<KeyScenario> {
    sched.check(s)?;
    let m = sched.levels(s);
    if n == 0 || !n.is_multiple_of(sched.t(m)) {
        return Err(Error::Divisibility(format!("t({m}) = {} does not divide n = {n}", sched.t(m))));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let classes = [0, 1, 2].map(|c| VertexClass::new(c, n));
    let orders = level_orders(sched, m);
    let vertex_chains = [
        random_refinement_chain(n, &orders, rng.next_u64())?,
        random_refinement_chain(n, &orders, rng.next_u64())?,
        random_refinement_chain(n, &orders, rng.next_u64())?,
    ];
    let first_chain =
        random_edge_equipartition_chain(ProductSide::new(classes[0], classes[1]), sched.w_star(s), rng.next_u64())?;
    let selected_edge_levels = (1..=s).map(|j| sched.w_star(j)).collect();
    let selected_vertex_levels = (1..=s).map(|j| sched.w(j)).collect();
    let (second_chain, g_prime, h) = pulled_part(classes, s, rng.next_u64())?;

    let aux = auxiliary_graph(&h, 3)?;
    let identity_holds = aux.graph.n_left() == g_prime.n_left()
        && aux.graph.n_right() == g_prime.n_right()
        && aux.graph.edges().eq(g_prime.edges());

    let frame = Frame::new([n, n, n]);
    let mut probes = Vec::new();
    for level in [1, m] {
        let [a, b, c] = &vertex_chains;
        let z = framed_partition(&frame, &[&a[level - 1], &b[level - 1], &c[level - 1]])?;
        probes.push(TwoPartition::complete(z)?);
    }
    Ok(KeyScenario {
        h,
        g_prime,
        vertex_chains,
        first_chain,
        selected_edge_levels,
        selected_vertex_levels,
        second_chain,
        probes,
        identity_holds,
    })
}

/// Output of [`build_theorem_main_scenario`].
#[derive(Clone, Debug)]
pub struct TheoremScenario {
    pub h: ThreeGraph,
    /// First chain level across all six sets `V^0, …, V^5`.
    pub v0: VertexPartition,
    /// `parts[x]` lives on `(V^x, V^{x+1}, V^{x+2})`.
    pub parts: Vec<ThreeGraph>,
    /// `vertex_chains[h][i-1]` is `V^i_h`.
    pub vertex_chains: Vec<Vec<VertexPartition>>,
    pub schedule: ToySchedule,
}

/// Six surrogate parts of density `2^-(s-1)` pasted along the tight 6-cycle,
/// each of the six sets having size `n`.
pub fn build_theorem_main_scenario(s: usize, n: usize, seed: u64) -> Result<TheoremScenario> {
    if s == 0 {
        return Err(Error::ParameterOutOfContract("s must be at least 1".into()));
    }
    let schedule = ToySchedule::doubling(s - 1);
    schedule.check(s - 1)?;
    let m = schedule.levels(s - 1);
    if n == 0 || !n.is_multiple_of(schedule.t(m)) {
        return Err(Error::Divisibility(format!("t({m}) = {} does not divide n = {n}", schedule.t(m))));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let orders = level_orders(&schedule, m);
    let vertex_chains = (0..6)
        .map(|_| random_refinement_chain(n, &orders, rng.next_u64()))
        .collect::<Result<Vec<_>>>()?;
    let parts = (0..6u32)
        .map(|x| {
            let classes = [0, 1, 2].map(|k| VertexClass::new((x + k) % 6, n));
            pulled_part(classes, s - 1, rng.next_u64()).map(|(_, _, h)| h)
        })
        .collect::<Result<Vec<_>>>()?;
    let h = six_cycle_paste(&parts)?;

    let frame = Frame::new([2 * n; 3]);
    let t1 = schedule.t(1);
    let labels: Vec<usize> = (0..frame.total())
        .map(|v| {
            let (c, k) = frame.locate(v);
            let set = c + 3 * (k / n);
            set * t1 + vertex_chains[set][0].label(k % n)
        })
        .collect();
    let v0 = VertexPartition::from_labels(&labels)?;
    Ok(TheoremScenario { h, v0, parts, vertex_chains, schedule })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::rat;

    fn p2(k: u64) -> BigCount {
        BigCount::Exact(BigUint::one() << k)
    }

    #[test]
    fn schedule_values() {
        assert_eq!(func_e(3), BigCount::from(8192));
        assert_eq!(func_e(0), BigCount::from(1024));
        assert_eq!(func_e(10), p2(20));
        assert_eq!(func_t(1).unwrap(), p2(250));
        assert_eq!(func_t(2).unwrap(), BigCount::pow2(p2(239)).unwrap());
        assert_eq!(func_w(1).unwrap(), BigCount::from(1));
        assert_eq!(func_w(2).unwrap(), p2(239));
        assert!(func_t(0).is_err());
        assert_eq!(func_t(2).unwrap().to_string(), "2^(2^239)");
        assert_eq!(func_w(3).unwrap().to_string(), "t(2^239)/2^12");
    }

    #[test]
    fn schedule_growth_and_powers() {
        let mut prev = func_t(1).unwrap();
        for i in 2..=4 {
            let t = func_t(i).unwrap();
            assert_eq!(t.is_power_of_two(), Some(true));
            assert_eq!(t.ge(&prev.mul_pow2(2).unwrap()), Some(true), "i = {i}");
            prev = t;
        }
        let id = |i: u64| Ok(BigCount::from(i));
        for i in 1..=4 {
            let f = func_fstar(id, i).unwrap();
            assert_eq!(f.is_power_of_two(), Some(true));
            assert_eq!(f.ge(&BigCount::from(i)), Some(true));
        }
        assert_eq!(func_fstar(id, 1).unwrap(), p2(239));
        assert!(matches!(func_fstar(|_| Ok(BigCount::from(0)), 2), Err(Error::PreconditionFailed(_))));
    }

    #[test]
    fn towers() {
        assert_eq!(func_twr(0), BigCount::from(1));
        assert_eq!(func_twr(1), BigCount::from(2));
        assert_eq!(func_twr(3), BigCount::from(16));
        assert_eq!(func_wow(1), func_twr(1));
        assert_eq!(func_wow(2), func_twr(2));
        assert_eq!(func_wow(3), BigCount::from(65536));
        assert!(matches!(func_wow(4), BigCount::Twr { .. }));
        assert_eq!(func_twr(7).is_power_of_two(), Some(true));
        assert_eq!(func_wow(4).compare(&func_twr(7)), Some(Ordering::Greater));
        assert_eq!(func_wow(5).compare(&func_wow(4)), Some(Ordering::Greater));
    }

    #[test]
    fn w_against_wow() {
        assert_eq!(func_w(1).unwrap().ge(&func_wow(1)), Some(false));
        for i in 2..=3 {
            assert_eq!(func_w(i).unwrap().ge(&func_wow(i)), Some(true), "i = {i}");
        }
    }

    #[test]
    fn big_count_arithmetic() {
        let t2 = func_t(2).unwrap();
        assert_eq!(t2.div_pow2(3).unwrap().mul_pow2(3).unwrap(), t2);
        assert!(BigCount::from(6).div_pow2(2).is_err());
        let off = t2.add_int(&BigInt::from(-5)).unwrap();
        assert_eq!(off.compare(&t2), Some(Ordering::Less));
        assert_eq!(off.is_power_of_two(), Some(false));
        let cap = BigUint::from(1000u32);
        assert_eq!(BigCount::from(7).capped(&cap), Capped { value: 7u32.into(), saturated: false });
        assert!(t2.capped(&cap).saturated);
        assert_eq!(BigCount::pow2(BigCount::from(10)).unwrap(), BigCount::from(1024));
    }

    #[test]
    fn refinement_chain_shapes() {
        let c = random_refinement_chain(8, &[2, 4], 1).unwrap();
        assert!(c.iter().all(is_equitable));
        assert!(refines(&c[1], &c[0]).unwrap());
        let c = random_refinement_chain(24, &[3, 6, 12], 5).unwrap();
        assert_eq!(c.iter().map(VertexPartition::order).collect::<Vec<_>>(), vec![3, 6, 12]);
        assert!(refines(&c[2], &c[1]).unwrap() && refines(&c[1], &c[0]).unwrap());
        assert!(matches!(random_refinement_chain(8, &[3], 0), Err(Error::Divisibility(_))));
        assert!(matches!(random_refinement_chain(12, &[2, 3], 0), Err(Error::Divisibility(_))));
        assert_eq!(random_refinement_chain(16, &[2, 8], 9).unwrap(), random_refinement_chain(16, &[2, 8], 9).unwrap());
    }

    #[test]
    fn edge_chain_shapes() {
        let carrier = ProductSide::new(VertexClass::new(0, 4), VertexClass::new(1, 4));
        let c = random_edge_equipartition_chain(carrier, 1, 3).unwrap();
        assert_eq!(c.chain[0].order(), 2);
        assert!(c.chain[0].blocks().iter().all(|g| g.edge_count() == 8 && g.density() == rat(1, 2)));
        let carrier = ProductSide::new(VertexClass::new(0, 8), VertexClass::new(1, 8));
        let c = random_edge_equipartition_chain(carrier, 3, 4).unwrap();
        assert_eq!(c.chain[2].order(), 8);
        assert!(c.chain[2].blocks().iter().all(|g| g.density() == rat(1, 8)));
        assert!(c.is_valid().unwrap());
        let small = ProductSide::new(VertexClass::new(0, 3), VertexClass::new(1, 1));
        assert!(random_edge_equipartition_chain(small, 1, 0).is_err());
    }

    #[test]
    fn core_assumptions() {
        let l = VertexClass::new(0, 4);
        let r = VertexClass::new(1, 8);
        let chain = |n, o: &[usize]| random_refinement_chain(n, o, 0).unwrap();
        let c = ChainPair { l_side: l, r_side: r, l_chain: chain(4, &[2]), r_chain: chain(8, &[8]) };
        let v = validate_core_assumptions(&c);
        assert!(v.contains(&CoreViolation::RightTooSmall { order: 8 }));
        assert!(v.iter().any(|x| matches!(x, CoreViolation::LeftOrder { level: 1, .. })));

        let c = ChainPair { l_side: l, r_side: r, l_chain: chain(4, &[1, 2]), r_chain: chain(8, &[2, 4]) };
        let v = validate_core_assumptions(&c);
        assert!(v.contains(&CoreViolation::SlowGrowth { level: 1, order: 2, next: 4 }));

        let r = VertexClass::new(1, 8192);
        let c = ChainPair { l_side: l, r_side: r, l_chain: chain(4, &[2, 4]), r_chain: chain(8192, &[2048, 8192]) };
        let v = validate_core_assumptions(&c);
        assert!(!v.iter().any(|x| matches!(x, CoreViolation::LeftOrder { .. })), "{v:?}");
        assert!(!v.iter().any(|x| matches!(x, CoreViolation::SlowGrowth { .. })));
        assert_eq!(v, vec![CoreViolation::RightTooSmall { order: 2048 }]);
    }

    #[test]
    fn six_cycle() {
        let b = tight_six_cycle();
        assert_eq!(b.len(), 6);
        for e in &b {
            let mut cls: Vec<usize> = e.iter().map(|&v| v % 3).collect();
            cls.sort_unstable();
            assert_eq!(cls, vec![0, 1, 2]);
            assert!(e.iter().all(|v| SIX_CYCLE_CLASSES[v % 3].contains(v)));
        }
        let classes = |x: u32| [0, 1, 2].map(|k| VertexClass::new((x + k) % 6, 3));
        let full: Vec<_> = (0..6).map(|x| ThreeGraph::complete(classes(x)).unwrap()).collect();
        let h = six_cycle_paste(&full).unwrap();
        assert_eq!(h.density(), rat(6, 8));
        let empty: Vec<_> = (0..6).map(|x| ThreeGraph::empty(classes(x)).unwrap()).collect();
        assert_eq!(six_cycle_paste(&empty).unwrap().edge_count(), 0);
        let mut bad = full.clone();
        bad[2] = ThreeGraph::complete([0, 1, 2].map(|k| VertexClass::new(k, 2))).unwrap();
        assert!(matches!(six_cycle_paste(&bad), Err(Error::ClassSizeMismatch(_))));
    }

    #[test]
    fn key_scenario() {
        let sched = ToySchedule::doubling(2);
        let sc = build_key_argument_scenario(&sched, 2, 16, 11).unwrap();
        assert!(sc.identity_holds);
        assert_eq!(sc.h.density(), sc.g_prime.density());
        assert_eq!(sc.h.density(), rat(1, 4));
        assert_eq!(sc.selected_edge_levels, vec![2, 3]);
        assert_eq!(sc.selected_vertex_levels, vec![1, 2]);
        assert_eq!(sc.vertex_chains[0].len(), 4);
        assert!(sc.first_chain.is_valid().unwrap() && sc.second_chain.is_valid().unwrap());
        assert_eq!(sc.probes[0].z().order(), 3 * sched.t(1));
        let one = build_key_argument_scenario(&ToySchedule::doubling(1), 1, 8, 2).unwrap();
        assert_eq!(one.h.density(), rat(1, 2));
        assert!(!sched.deviations().is_empty());
        assert!(build_key_argument_scenario(&sched, 2, 12, 0).is_err());
    }

    #[test]
    fn theorem_scenario() {
        let sc = build_theorem_main_scenario(2, 8, 5).unwrap();
        assert_eq!(sc.h.sizes(), [16, 16, 16]);
        assert_eq!(sc.h.density(), rat(6, 8) * rat(1, 2));
        assert!(sc.h.density() >= rat(1, 4));
        assert_eq!(sc.v0.order(), 6 * sc.schedule.t(1));
        assert_eq!(sc.h.edge_count(), sc.parts.iter().map(ThreeGraph::edge_count).sum::<usize>());
        let one = build_theorem_main_scenario(1, 4, 0).unwrap();
        assert_eq!(one.h.density(), rat(6, 8));
    }
}

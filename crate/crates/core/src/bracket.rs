//! Kauffman bracket and Jones polynomial.
//!
//! Smoothing convention: at a crossing `[a, b, c, d]` the A-smoothing joins
//! `a` with `d` and `b` with `c`; the B-smoothing joins `a` with `b` and `c`
//! with `d`. A positive kink then has bracket `-A^3`.
//!
//! Every free loop contributes a factor `d = -A^2 - A^-2`, a state with `k`
//! loops is weighted `d^(k-1)`, and the crossingless unknot has bracket 1.

use alloc::collections::BTreeMap;
use core::cmp::Reverse;
use alloc::vec;
use alloc::vec::Vec;

use hashbrown::HashMap;
use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{CheckedAdd, CheckedNeg, One, Zero};

use crate::diagram::{orient, Crossing, DiagramError, LinkDiagram, UnorientedCrossing};
use crate::laurent::{ExactRational, LaurentError, LaurentPolynomial};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum BracketError {
    #[error("resource limit: {what} {value} exceeds cap {cap}")]
    ResourceLimit { what: &'static str, value: usize, cap: usize },
    #[error(transparent)]
    Diagram(#[from] DiagramError),
    #[error(transparent)]
    Laurent(#[from] LaurentError),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct BracketLimits {
    /// Largest crossing count accepted by the state-sum oracle.
    pub max_naive_crossings: usize,
    /// Largest crossing count accepted by the fast path.
    pub max_crossings: usize,
    /// Largest number of simultaneous boundary states in the fast path.
    pub max_states: usize,
}

impl Default for BracketLimits {
    fn default() -> Self {
        Self { max_naive_crossings: 24, max_crossings: 4000, max_states: 4_000_000 }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Smoothing {
    A,
    B,
}

impl Smoothing {
    fn pairs(self, c: &Crossing) -> [(u32, u32); 2] {
        let [a, b, cc, d] = c.arcs;
        match self {
            Smoothing::A => [(a, d), (b, cc)],
            Smoothing::B => [(a, b), (cc, d)],
        }
    }
}

struct UnionFind(Vec<usize>);

impl UnionFind {
    fn new(n: usize) -> Self {
        Self((0..n).collect())
    }

    fn find(&mut self, mut x: usize) -> usize {
        while self.0[x] != x {
            self.0[x] = self.0[self.0[x]];
            x = self.0[x];
        }
        x
    }

    /// Returns true when two classes merged.
    fn union(&mut self, a: usize, b: usize) -> bool {
        let (ra, rb) = (self.find(a), self.find(b));
        if ra != rb {
            self.0[ra] = rb;
        }
        ra != rb
    }
}

fn loop_power(k: u32) -> LaurentPolynomial {
    LaurentPolynomial::loop_value().pow(k)
}

/// State sum over all `2^n` smoothings.
pub fn kauffman_bracket_naive(d: &LinkDiagram) -> Result<LaurentPolynomial, BracketError> {
    kauffman_bracket_naive_with(d, &BracketLimits::default())
}

pub fn kauffman_bracket_naive_with(d: &LinkDiagram, limits: &BracketLimits) -> Result<LaurentPolynomial, BracketError> {
    let n = d.crossing_count();
    if n > limits.max_naive_crossings {
        return Err(BracketError::ResourceLimit { what: "naive crossings", value: n, cap: limits.max_naive_crossings });
    }
    if n == 0 {
        return Ok(loop_power(d.free_loops() - 1));
    }
    let labels = d.arc_labels();
    let index: BTreeMap<u32, usize> = labels.iter().enumerate().map(|(i, &l)| (l, i)).collect();
    let pairs: Vec<[[(usize, usize); 2]; 2]> = d
        .crossings()
        .iter()
        .map(|c| {
            [Smoothing::A, Smoothing::B].map(|s| s.pairs(c).map(|(x, y)| (index[&x], index[&y])))
        })
        .collect();
    // tally[(#A, loops)]
    let mut tally: BTreeMap<(usize, usize), u64> = BTreeMap::new();
    for state in 0u64..(1u64 << n) {
        let mut uf = UnionFind::new(labels.len());
        let mut classes = labels.len();
        let mut a_count = 0;
        for (i, p) in pairs.iter().enumerate() {
            let which = ((state >> i) & 1) as usize;
            if which == 0 {
                a_count += 1;
            }
            for &(x, y) in &p[which] {
                if uf.union(x, y) {
                    classes -= 1;
                }
            }
        }
        *tally.entry((a_count, classes)).or_insert(0) += 1;
    }
    let mut out = LaurentPolynomial::zero();
    for ((a_count, loops), count) in tally {
        let exp = a_count as i64 - (n - a_count) as i64;
        let term = loop_power((loops + d.free_loops() as usize - 1) as u32).shift(exp).scale(&BigInt::from(count));
        out += &term;
    }
    Ok(out)
}

/// Coefficient ring for the dense polynomials of the fast path.
trait Coeff: Clone + Sized {
    fn zero() -> Self;
    fn is_zero(&self) -> bool;
    fn checked_add(&self, other: &Self) -> Option<Self>;
    fn checked_neg(&self) -> Option<Self>;
    fn one() -> Self;
    fn checked_mul(&self, other: &Self) -> Option<Self>;
    fn from_big(b: &BigInt) -> Option<Self>;
    fn into_big(self) -> BigInt;
}

impl Coeff for i128 {
    fn zero() -> Self {
        0
    }
    fn is_zero(&self) -> bool {
        *self == 0
    }
    fn checked_add(&self, other: &Self) -> Option<Self> {
        CheckedAdd::checked_add(self, other)
    }
    fn checked_neg(&self) -> Option<Self> {
        CheckedNeg::checked_neg(self)
    }
    fn one() -> Self {
        1
    }
    fn checked_mul(&self, other: &Self) -> Option<Self> {
        i128::checked_mul(*self, *other)
    }
    fn from_big(b: &BigInt) -> Option<Self> {
        num_traits::ToPrimitive::to_i128(b)
    }
    fn into_big(self) -> BigInt {
        BigInt::from(self)
    }
}

impl Coeff for BigInt {
    fn zero() -> Self {
        Zero::zero()
    }
    fn is_zero(&self) -> bool {
        Zero::is_zero(self)
    }
    fn checked_add(&self, other: &Self) -> Option<Self> {
        Some(self + other)
    }
    fn checked_neg(&self) -> Option<Self> {
        Some(-self)
    }
    fn one() -> Self {
        BigInt::from(1)
    }
    fn checked_mul(&self, other: &Self) -> Option<Self> {
        Some(self * other)
    }
    fn from_big(b: &BigInt) -> Option<Self> {
        Some(b.clone())
    }
    fn into_big(self) -> BigInt {
        self
    }
}

struct Overflow;

/// What the fast path carries per boundary state.
trait Weight: Clone {
    /// Whatever `step` needs precomputed once per run.
    type Ctx;
    fn ctx(&self) -> Result<Self::Ctx, Overflow>;
    /// Multiplies by `A^e (-A^2 - A^-2)^k`.
    fn step(self, e: i64, k: usize, ctx: &Self::Ctx) -> Result<Self, Overflow>;
    fn add_assign(&mut self, other: &Self) -> Result<(), Overflow>;
}

/// Dense Laurent polynomial in `A`: `c[i]` is the coefficient of `A^(lo + i)`.
#[derive(Clone)]
struct Dense<C> {
    lo: i64,
    c: Vec<C>,
}

impl<C: Coeff> Dense<C> {
    fn monomial(e: i64) -> Self {
        Self { lo: e, c: vec![C::one()] }
    }

    fn hi(&self) -> i64 {
        self.lo + self.c.len() as i64
    }

    fn into_laurent(self) -> LaurentPolynomial {
        let lo = self.lo;
        LaurentPolynomial::from_terms(
            self.c.into_iter().enumerate().filter(|(_, x)| !x.is_zero()).map(|(i, x)| (lo + i as i64, x.into_big())),
        )
    }
}

impl<C: Coeff> Weight for Dense<C> {
    fn add_assign(&mut self, other: &Self) -> Result<(), Overflow> {
        let lo = self.lo.min(other.lo);
        let hi = self.hi().max(other.hi());
        if lo < self.lo || hi > self.hi() {
            let mut c = vec![C::zero(); (hi - lo) as usize];
            let off = (self.lo - lo) as usize;
            for (i, x) in core::mem::take(&mut self.c).into_iter().enumerate() {
                c[off + i] = x;
            }
            self.c = c;
            self.lo = lo;
        }
        let off = (other.lo - self.lo) as usize;
        for (i, x) in other.c.iter().enumerate() {
            self.c[off + i] = self.c[off + i].checked_add(x).ok_or(Overflow)?;
        }
        Ok(())
    }

    type Ctx = ();

    fn ctx(&self) -> Result<(), Overflow> {
        Ok(())
    }

    fn step(mut self, e: i64, k: usize, _: &()) -> Result<Self, Overflow> {
        self.lo += e;
        for _ in 0..k {
            let n = self.c.len();
            let mut c = vec![C::zero(); n + 4];
            for (i, x) in self.c.iter().enumerate() {
                let neg = x.checked_neg().ok_or(Overflow)?;
                c[i] = c[i].checked_add(&neg).ok_or(Overflow)?;
                c[i + 4] = c[i + 4].checked_add(&neg).ok_or(Overflow)?;
            }
            self.c = c;
            self.lo -= 2;
        }
        Ok(self)
    }
}

/// Power series in `x = A - 1` truncated after `x^(len - 1)`.
#[derive(Clone)]
struct Series<C>(Vec<C>);

impl<C: Coeff> Series<C> {
    fn one(len: usize) -> Self {
        let mut c = vec![C::zero(); len];
        c[0] = C::one();
        Series(c)
    }

    fn times(&self, other: &[C]) -> Result<Self, Overflow> {
        let n = self.0.len();
        let mut c = vec![C::zero(); n];
        for (i, x) in self.0.iter().enumerate() {
            if x.is_zero() {
                continue;
            }
            for (j, y) in other.iter().take(n - i).enumerate() {
                let p = x.checked_mul(y).ok_or(Overflow)?;
                c[i + j] = c[i + j].checked_add(&p).ok_or(Overflow)?;
            }
        }
        Ok(Series(c))
    }
}

/// Coefficients of `(1 + x)^e` up to `x^(len - 1)`.
fn binomial_series(e: i64, len: usize) -> Vec<BigInt> {
    let mut out = Vec::with_capacity(len);
    let mut b = BigInt::from(1);
    for j in 0..len as i64 {
        out.push(b.clone());
        b = b * (e - j) / (j + 1);
    }
    out
}

fn loop_series(len: usize) -> Vec<BigInt> {
    binomial_series(2, len).iter().zip(binomial_series(-2, len)).map(|(a, b)| -(a + b)).collect()
}

impl Series<BigInt> {
    fn shifted(self, e: i64) -> Self {
        let f = binomial_series(e, self.0.len());
        self.times(&f).unwrap_or_else(|_| unreachable!("big integers do not overflow"))
    }

    fn times_loops(mut self, k: usize) -> Self {
        let delta = loop_series(self.0.len());
        for _ in 0..k {
            self = self.times(&delta).unwrap_or_else(|_| unreachable!("big integers do not overflow"));
        }
        self
    }
}

impl<C: Coeff> Weight for Series<C> {
    /// Series of `A`, `A^-1` and the loop value.
    type Ctx = [Vec<C>; 3];

    fn ctx(&self) -> Result<Self::Ctx, Overflow> {
        let n = self.0.len();
        let conv = |v: Vec<BigInt>| v.iter().map(C::from_big).collect::<Option<Vec<C>>>().ok_or(Overflow);
        Ok([conv(binomial_series(1, n))?, conv(binomial_series(-1, n))?, conv(loop_series(n))?])
    }

    fn step(mut self, e: i64, k: usize, ctx: &Self::Ctx) -> Result<Self, Overflow> {
        for _ in 0..e.unsigned_abs() {
            self = self.times(&ctx[if e > 0 { 0 } else { 1 }])?;
        }
        for _ in 0..k {
            self = self.times(&ctx[2])?;
        }
        Ok(self)
    }

    fn add_assign(&mut self, other: &Self) -> Result<(), Overflow> {
        for (x, y) in self.0.iter_mut().zip(&other.0) {
            *x = x.checked_add(y).ok_or(Overflow)?;
        }
        Ok(())
    }
}

/// Greedy absorption order from a given crossing. Next is the crossing that
/// best shrinks the boundary; ties go to the one touching the oldest
/// boundary arc, which keeps the frontier sweeping instead of spreading.
/// Returns the order and its widest boundary.
fn greedy_order(d: &LinkDiagram, start: usize) -> (Vec<usize>, usize) {
    let n = d.crossing_count();
    let mut done = vec![false; n];
    // open arc -> when it opened
    let mut open: BTreeMap<u32, usize> = BTreeMap::new();
    let mut order = Vec::with_capacity(n);
    let mut widest = 0;
    let mut next = Some(start);
    while let Some(i) = next {
        done[i] = true;
        order.push(i);
        for &a in &d.crossings()[i].arcs {
            if open.remove(&a).is_none() {
                open.insert(a, order.len());
            }
        }
        widest = widest.max(open.len());
        let mut best: Option<((i64, Reverse<usize>), usize)> = None;
        for (k, c) in d.crossings().iter().enumerate() {
            if done[k] {
                continue;
            }
            let age = c.arcs.iter().filter_map(|a| open.get(a)).min();
            let Some(&age) = age else { continue };
            let touching = c.arcs.iter().filter(|a| open.contains_key(a)).count() as i64;
            let mut fresh = c.arcs.to_vec();
            fresh.sort_unstable();
            fresh.dedup();
            let opened = fresh.iter().filter(|a| !open.contains_key(a)).count() as i64;
            let key = (2 * touching - opened, Reverse(age));
            if best.as_ref().is_none_or(|b| key > b.0) {
                best = Some((key, k));
            }
        }
        // a split component starts afresh
        next = best.map(|b| b.1).or_else(|| done.iter().position(|&x| !x));
    }
    (order, widest)
}

/// The narrowest greedy order over a spread of starting crossings.
fn contraction_order(d: &LinkDiagram) -> Vec<usize> {
    const STARTS: usize = 160;
    let n = d.crossing_count();
    let step = n.div_ceil(STARTS).max(1);
    (0..n).step_by(step).map(|s| greedy_order(d, s)).min_by_key(|o| o.1).expect("at least one crossing").0
}

/// Removes the given crossings, letting both strands run straight through.
/// Closed curves left without crossings become free loops.
fn excise(d: &LinkDiagram, gone: &[usize]) -> Result<LinkDiagram, DiagramError> {
    let mut uf = UnionFind::new(d.max_label() as usize + 1);
    for &i in gone {
        let [a, b, c, e] = d.crossings()[i].arcs;
        uf.union(a as usize, c as usize);
        uf.union(b as usize, e as usize);
    }
    let mut fresh: BTreeMap<usize, u32> = BTreeMap::new();
    let mut kept = Vec::new();
    for (i, c) in d.crossings().iter().enumerate() {
        if gone.contains(&i) {
            continue;
        }
        let arcs = c.arcs.map(|a| {
            let r = uf.find(a as usize);
            let next = fresh.len() as u32 + 1;
            *fresh.entry(r).or_insert(next)
        });
        kept.push(Crossing::new(arcs, c.sign));
    }
    let mut loops = BTreeMap::new();
    for &i in gone {
        for a in d.crossings()[i].arcs {
            let r = uf.find(a as usize);
            if !fresh.contains_key(&r) {
                loops.insert(r, ());
            }
        }
    }
    LinkDiagram::new(kept, d.free_loops() + loops.len() as u32)
}

/// A kink: crossing `i` whose arc runs between neighbouring slots. Returns
/// the exponent `e` of its bracket factor `-A^e`.
fn find_kink(d: &LinkDiagram) -> Option<(usize, i64)> {
    d.crossings().iter().enumerate().find_map(|(i, c)| {
        (0..4).find(|&s| c.arcs[s] == c.arcs[(s + 1) % 4]).map(|s| {
            // the A-smoothing joins slots 1-2 and 3-0, closing such a kink into a loop
            (i, if s % 2 == 1 { 3 } else { -3 })
        })
    })
}

/// Two crossings bounding a bigon face with one strand over at both.
fn find_bigons(d: &LinkDiagram) -> Vec<(usize, usize)> {
    let mut ends: BTreeMap<u32, Vec<(usize, usize)>> = BTreeMap::new();
    for (i, c) in d.crossings().iter().enumerate() {
        for (s, &a) in c.arcs.iter().enumerate() {
            ends.entry(a).or_default().push((i, s));
        }
    }
    let over = |s: usize| s % 2 == 1;
    let mut out = Vec::new();
    for v in ends.values() {
        let [(i, sx_i), (j, sx_j)] = [v[0], v[1]];
        if i == j {
            continue;
        }
        for dir in [1, 3] {
            let sy_i = (sx_i + dir) % 4;
            let sy_j = (sx_j + 4 - dir) % 4;
            let y = d.crossings()[i].arcs[sy_i];
            if d.crossings()[j].arcs[sy_j] != y || ends[&y].iter().any(|&(k, _)| k != i && k != j) {
                continue;
            }
            if over(sx_i) == over(sx_j) && i < j {
                out.push((i, j));
            }
        }
    }
    out
}

/// Cancels kinks and bigons. Returns the smaller diagram with the number of
/// kinks removed and the total exponent of their `-A^e` factors.
pub fn reduce(d: &LinkDiagram) -> (LinkDiagram, u32, i64) {
    let mut cur = d.clone();
    let (mut kinks, mut exp) = (0, 0);
    'outer: loop {
        if let Some((i, e)) = find_kink(&cur) {
            if let Ok(next) = excise(&cur, &[i]) {
                cur = next;
                kinks += 1;
                exp += e;
                continue;
            }
        }
        for (i, j) in find_bigons(&cur) {
            if let Ok(next) = excise(&cur, &[i, j]) {
                cur = next;
                continue 'outer;
            }
        }
        return (cur, kinks, exp);
    }
}

/// Boundary-pairing dynamic programme over the crossings.
///
/// After absorbing a set of crossings the arcs with exactly one absorbed end
/// form the boundary. A state records how smoothed strands pair those
/// boundary arcs; closed loops are folded into the polynomial as they appear.
fn bracket_dp<W: Weight>(
    d: &LinkDiagram,
    order: &[usize],
    limits: &BracketLimits,
    unit: W,
) -> Result<Result<W, Overflow>, BracketError> {
    let ctx = match unit.ctx() {
        Ok(c) => c,
        Err(o) => return Ok(Err(o)),
    };
    let mut open: Vec<u32> = Vec::new();
    let mut states: HashMap<Vec<u16>, W> = HashMap::new();
    states.insert(Vec::new(), unit);
    let n = order.len();
    for (step, &ci) in order.iter().enumerate() {
        let last = step + 1 == n;
        let c = d.crossings()[ci];
        // local node ids: 0..open.len() for boundary arcs, then new arcs of c
        let mut local: Vec<u32> = open.clone();
        let mut touches = [0usize; 4];
        for (k, &a) in c.arcs.iter().enumerate() {
            touches[k] = match local.iter().position(|&x| x == a) {
                Some(p) => p,
                None => {
                    local.push(a);
                    local.len() - 1
                }
            };
        }
        let mut ends = vec![0u8; local.len()];
        for e in ends.iter_mut().take(open.len()) {
            *e = 1;
        }
        for &t in &touches {
            ends[t] += 1;
        }
        let new_open: Vec<u32> = {
            let mut v: Vec<u32> = local.iter().zip(&ends).filter(|(_, &e)| e == 1).map(|(&a, _)| a).collect();
            v.sort_unstable();
            v
        };
        let new_pos: Vec<Option<usize>> =
            local.iter().map(|a| new_open.binary_search(a).ok()).collect();
        let pair_slots = |s: Smoothing| -> [(usize, usize); 2] {
            match s {
                Smoothing::A => [(touches[0], touches[3]), (touches[1], touches[2])],
                Smoothing::B => [(touches[0], touches[1]), (touches[2], touches[3])],
            }
        };
        let smoothings = [(Smoothing::A, 1i64), (Smoothing::B, -1i64)];
        let mut next: HashMap<Vec<u16>, W> = HashMap::with_capacity(states.len() * 2);
        let mut uf = UnionFind::new(local.len());
        let mut first_by_root = vec![usize::MAX; local.len()];
        for (pairing, poly) in states.drain() {
            for &(s, exp) in &smoothings {
                for (i, p) in uf.0.iter_mut().enumerate() {
                    *p = i;
                }
                let mut comps = local.len();
                for (i, &p) in pairing.iter().enumerate() {
                    if i < p as usize && uf.union(i, p as usize) {
                        comps -= 1;
                    }
                }
                for (x, y) in pair_slots(s) {
                    if uf.union(x, y) {
                        comps -= 1;
                    }
                }
                let paths = new_open.len() / 2;
                let loops = comps - paths;
                let mut key = vec![0u16; new_open.len()];
                for (li, np) in new_pos.iter().enumerate() {
                    if let Some(np) = *np {
                        let r = uf.find(li);
                        let other = core::mem::replace(&mut first_by_root[r], usize::MAX);
                        if other == usize::MAX {
                            first_by_root[r] = np;
                        } else {
                            key[np] = other as u16;
                            key[other] = np as u16;
                        }
                    }
                }
                let closing = if last { loops - 1 } else { loops };
                let term = match poly.clone().step(exp, closing, &ctx) {
                    Ok(t) => t,
                    Err(o) => return Ok(Err(o)),
                };
                match next.entry(key) {
                    hashbrown::hash_map::Entry::Occupied(mut o) => {
                        if let Err(e) = o.get_mut().add_assign(&term) {
                            return Ok(Err(e));
                        }
                    }
                    hashbrown::hash_map::Entry::Vacant(v) => {
                        v.insert(term);
                    }
                }
            }
        }
        if next.len() > limits.max_states {
            return Err(BracketError::ResourceLimit { what: "boundary states", value: next.len(), cap: limits.max_states });
        }
        states = next;
        open = new_open;
    }
    let total = states.remove(&Vec::new()).expect("all arcs closed");
    Ok(Ok(total))
}

/// Same value as [`kauffman_bracket_naive`], computed by contracting
/// crossings one at a time and merging equal boundary states.
pub fn kauffman_bracket_fast(d: &LinkDiagram) -> Result<LaurentPolynomial, BracketError> {
    kauffman_bracket_fast_with(d, &BracketLimits::default())
}

pub fn kauffman_bracket_fast_with(d: &LinkDiagram, limits: &BracketLimits) -> Result<LaurentPolynomial, BracketError> {
    let n = d.crossing_count();
    if n > limits.max_crossings {
        return Err(BracketError::ResourceLimit { what: "crossings", value: n, cap: limits.max_crossings });
    }
    if n == 0 {
        return Ok(loop_power(d.free_loops() - 1));
    }
    let (d, kinks, exp) = reduce(d);
    let mut factor = LaurentPolynomial::monomial(exp, BigInt::from(if kinks % 2 == 0 { 1 } else { -1 }));
    if d.crossing_count() == 0 {
        return Ok(&factor * &loop_power(d.free_loops() - 1));
    }
    let order = contraction_order(&d);
    let body = match bracket_dp(&d, &order, limits, Dense::<i128>::monomial(0))? {
        Ok(p) => p.into_laurent(),
        Err(Overflow) => match bracket_dp(&d, &order, limits, Dense::<BigInt>::monomial(0))? {
            Ok(p) => p.into_laurent(),
            Err(Overflow) => unreachable!("big integers do not overflow"),
        },
    };
    factor = &factor * &loop_power(d.free_loops());
    Ok(&body * &factor)
}

/// `J(1), J'(1), ..., J^(k)(1)` without building the whole polynomial.
///
/// The state sum runs on power series in `A - 1` cut off after degree `k`,
/// which keeps every state weight at `k + 1` numbers.
pub fn jones_derivatives_at_one(d: &LinkDiagram, k: u32) -> Result<Vec<ExactRational>, BracketError> {
    jones_derivatives_at_one_with(d, k, &BracketLimits::default())
}

pub fn jones_derivatives_at_one_with(
    d: &LinkDiagram,
    k: u32,
    limits: &BracketLimits,
) -> Result<Vec<ExactRational>, BracketError> {
    let n = d.crossing_count();
    if n > limits.max_crossings {
        return Err(BracketError::ResourceLimit { what: "crossings", value: n, cap: limits.max_crossings });
    }
    let len = k as usize + 1;
    let writhe = d.writhe();
    let (r, kinks, exp) = reduce(d);
    let (body, loops) = if r.crossing_count() == 0 {
        (Series::<BigInt>::one(len), r.free_loops() as usize - 1)
    } else {
        let order = contraction_order(&r);
        let body = match bracket_dp(&r, &order, limits, Series::<i128>::one(len))? {
            Ok(p) => Series(p.0.into_iter().map(Coeff::into_big).collect()),
            Err(Overflow) => bracket_dp(&r, &order, limits, Series::<BigInt>::one(len))?
                .unwrap_or_else(|_| unreachable!("big integers do not overflow")),
        };
        (body, r.free_loops() as usize)
    };
    let f = body.shifted(exp - 3 * writhe).times_loops(loops);
    let negate = (kinks as i64 + writhe) % 2 != 0;
    // A = (1 + s)^(-1/4) with t = 1 + s
    let mut x = vec![BigRational::zero(); len];
    let mut b = BigRational::one();
    for j in 0..len as i64 {
        if j > 0 {
            x[j as usize] = b.clone();
        }
        b *= BigRational::new(BigInt::from(-1 - 4 * j), BigInt::from(4 * (j + 1)));
    }
    let mut out = vec![BigRational::zero(); len];
    let mut power = vec![BigRational::zero(); len];
    power[0] = BigRational::one();
    for c in &f.0 {
        let c = BigRational::from_integer(if negate { -c } else { c.clone() });
        for (o, p) in out.iter_mut().zip(&power) {
            *o += &c * p;
        }
        let mut next = vec![BigRational::zero(); len];
        for (i, p) in power.iter().enumerate() {
            for (j, y) in x.iter().enumerate().take(len - i) {
                next[i + j] += p * y;
            }
        }
        power = next;
    }
    let mut fact = BigInt::from(1);
    Ok(out
        .into_iter()
        .enumerate()
        .map(|(i, c)| {
            if i > 0 {
                fact *= i;
            }
            ExactRational::from_rational(c * BigRational::from_integer(fact.clone()))
        })
        .collect())
}

/// `(-A)^(-3w) <d>` with `A^-2 = t^(1/2)`.
pub fn jones(d: &LinkDiagram) -> Result<LaurentPolynomial, BracketError> {
    jones_with(d, &BracketLimits::default())
}

pub fn jones_with(d: &LinkDiagram, limits: &BracketLimits) -> Result<LaurentPolynomial, BracketError> {
    let b = kauffman_bracket_fast_with(d, limits)?;
    Ok(jones_from_bracket(&b, d.writhe())?)
}

pub fn jones_from_bracket(bracket: &LaurentPolynomial, writhe: i64) -> Result<LaurentPolynomial, LaurentError> {
    (&LaurentPolynomial::neg_a_pow(-3 * writhe) * bracket).substitute_a_to_t()
}

/// The diagram with crossing `i` smoothed; crossingless loops become free loops.
pub fn smooth(d: &LinkDiagram, i: usize, s: Smoothing) -> Result<LinkDiagram, DiagramError> {
    let len = d.crossing_count();
    let c = *d.crossings().get(i).ok_or(DiagramError::IndexOutOfRange { index: i, len })?;
    let labels = d.arc_labels();
    let index: BTreeMap<u32, usize> = labels.iter().enumerate().map(|(k, &l)| (l, k)).collect();
    let mut uf = UnionFind::new(labels.len());
    for (x, y) in s.pairs(&c) {
        uf.union(index[&x], index[&y]);
    }
    let rest: Vec<UnorientedCrossing> = d
        .crossings()
        .iter()
        .enumerate()
        .filter(|&(k, _)| k != i)
        .map(|(_, x)| UnorientedCrossing { slots: x.arcs.map(|a| uf.find(index[&a]) as u32 + 1) })
        .collect();
    let mut used: BTreeMap<u32, ()> = BTreeMap::new();
    for x in &rest {
        for &a in &x.slots {
            used.insert(a, ());
        }
    }
    let mut roots: Vec<u32> = c.arcs.iter().map(|a| uf.find(index[a]) as u32 + 1).collect();
    roots.sort_unstable();
    roots.dedup();
    let new_loops = roots.iter().filter(|r| !used.contains_key(r)).count() as u32;
    orient(&rest, d.free_loops() + new_loops)
}

/// The three diagrams of the bracket skein relation at one crossing.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SkeinTriple {
    /// B-smoothing.
    pub h: LinkDiagram,
    /// A-smoothing.
    pub h_hat: LinkDiagram,
    /// The input diagram.
    pub l: LinkDiagram,
}

/// Resolves crossing `i` so that `A <h_hat> + A^-1 <h> = <l>`.
pub fn skein_resolve(d: &LinkDiagram, i: usize) -> Result<SkeinTriple, DiagramError> {
    Ok(SkeinTriple { h: smooth(d, i, Smoothing::B)?, h_hat: smooth(d, i, Smoothing::A)?, l: d.clone() })
}

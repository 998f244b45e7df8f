//! Crossing-change schemes and their alternating sums.

use alloc::collections::BTreeSet;
use alloc::string::String;
use alloc::vec::Vec;
use core::fmt;
use core::str::FromStr;

use crate::bracket::{jones_derivatives_at_one_with, jones_with, BracketError, BracketLimits};
use crate::diagram::{DiagramError, FormalSum, LinkDiagram, SingularDiagram};
use crate::laurent::{ExactRational, LaurentPolynomial};

/// Largest scheme accepted by default; `tot` visits `2^|S|` subsets.
pub const DEFAULT_MAX_SCHEME: usize = 20;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum SchemeError {
    #[error("move {0} is empty")]
    EmptyMove(usize),
    #[error("crossing {crossing} is used by moves {first} and {second}")]
    Overlap { crossing: usize, first: usize, second: usize },
    #[error("move {index} out of range for {len} moves")]
    NoSuchMove { index: usize, len: usize },
    #[error("resource limit: scheme size {size} exceeds cap {cap}")]
    ResourceLimit { size: usize, cap: usize },
    #[error("unknown invariant `{0}`")]
    UnknownInvariant(String),
    #[error(transparent)]
    Diagram(#[from] DiagramError),
    #[error(transparent)]
    Bracket(#[from] BracketError),
}

/// Crossings switched together.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Move {
    crossings: Vec<usize>,
}

impl Move {
    pub fn new(crossings: impl IntoIterator<Item = usize>) -> Self {
        let mut crossings: Vec<usize> = crossings.into_iter().collect();
        crossings.sort_unstable();
        crossings.dedup();
        Self { crossings }
    }

    pub fn single(i: usize) -> Self {
        Self { crossings: alloc::vec![i] }
    }

    pub fn crossings(&self) -> &[usize] {
        &self.crossings
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Scheme {
    host: LinkDiagram,
    moves: Vec<Move>,
}

impl Scheme {
    /// Checks that moves are nonempty, in range and pairwise disjoint.
    pub fn new(host: LinkDiagram, moves: Vec<Move>) -> Result<Self, SchemeError> {
        let mut owner = alloc::vec![usize::MAX; host.crossing_count()];
        for (m, mv) in moves.iter().enumerate() {
            if mv.crossings.is_empty() {
                return Err(SchemeError::EmptyMove(m));
            }
            for &c in &mv.crossings {
                let len = host.crossing_count();
                if c >= len {
                    return Err(DiagramError::IndexOutOfRange { index: c, len }.into());
                }
                if owner[c] != usize::MAX {
                    return Err(SchemeError::Overlap { crossing: c, first: owner[c], second: m });
                }
                owner[c] = m;
            }
        }
        Ok(Self { host, moves })
    }

    pub fn host(&self) -> &LinkDiagram {
        &self.host
    }

    pub fn moves(&self) -> &[Move] {
        &self.moves
    }

    pub fn len(&self) -> usize {
        self.moves.len()
    }

    pub fn is_empty(&self) -> bool {
        self.moves.is_empty()
    }

    /// The host with every crossing of the chosen moves switched.
    pub fn apply_subset(&self, sigma: &[usize]) -> Result<LinkDiagram, SchemeError> {
        let mut idx = Vec::new();
        for &m in sigma {
            let mv = self.moves.get(m).ok_or(SchemeError::NoSuchMove { index: m, len: self.moves.len() })?;
            idx.extend_from_slice(&mv.crossings);
        }
        idx.sort_unstable();
        idx.dedup();
        Ok(self.host.switch_crossings(idx)?)
    }

    fn apply_mask(&self, mask: u64) -> LinkDiagram {
        let sigma: Vec<usize> = (0..self.moves.len()).filter(|&i| mask >> i & 1 == 1).collect();
        self.apply_subset(&sigma).expect("indices checked at construction")
    }

    fn check_size(&self, cap: usize) -> Result<(), SchemeError> {
        if self.moves.len() > cap || self.moves.len() >= 64 {
            return Err(SchemeError::ResourceLimit { size: self.moves.len(), cap });
        }
        Ok(())
    }

    /// `(sign, K_sigma)` over all subsets; bit `i` of the mask selects move `i`.
    pub fn subsets(&self, cap: usize) -> Result<impl Iterator<Item = (i64, LinkDiagram)> + '_, SchemeError> {
        self.check_size(cap)?;
        Ok((0u64..1 << self.moves.len())
            .map(|mask| (if mask.count_ones() % 2 == 0 { 1 } else { -1 }, self.apply_mask(mask))))
    }
}

/// Registered invariants.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Invariant {
    /// `J^(k)(1)`.
    JonesDeriv(u32),
    Jones,
}

impl FromStr for Invariant {
    type Err = SchemeError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        if s == "jones" {
            return Ok(Invariant::Jones);
        }
        s.strip_prefix("jones-deriv:")
            .and_then(|k| k.parse().ok())
            .map(Invariant::JonesDeriv)
            .ok_or_else(|| SchemeError::UnknownInvariant(s.into()))
    }
}

impl fmt::Display for Invariant {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Invariant::JonesDeriv(k) => write!(f, "jones-deriv:{k}"),
            Invariant::Jones => write!(f, "jones"),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Value {
    Rational(ExactRational),
    Polynomial(LaurentPolynomial),
}

impl Value {
    pub fn zero_like(mu: Invariant) -> Value {
        match mu {
            Invariant::JonesDeriv(_) => Value::Rational(ExactRational::zero()),
            Invariant::Jones => Value::Polynomial(LaurentPolynomial::zero()),
        }
    }

    pub fn is_zero(&self) -> bool {
        match self {
            Value::Rational(r) => r.is_zero(),
            Value::Polynomial(p) => p.is_zero(),
        }
    }

    /// `self + k * other`; both sides must come from the same invariant.
    pub fn add_scaled(&mut self, k: i64, other: &Value) {
        match (self, other) {
            (Value::Rational(a), Value::Rational(b)) => *a = &*a + &(b * &ExactRational::integer(k)),
            (Value::Polynomial(a), Value::Polynomial(b)) => *a += &b.scale(&k.into()),
            _ => panic!("mixed invariant values"),
        }
    }
}

impl fmt::Display for Value {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Value::Rational(r) => write!(f, "{r}"),
            Value::Polynomial(p) => write!(f, "{p}"),
        }
    }
}

pub fn evaluate(mu: Invariant, d: &LinkDiagram) -> Result<Value, SchemeError> {
    evaluate_with(mu, d, &BracketLimits::default())
}

pub fn evaluate_with(mu: Invariant, d: &LinkDiagram, limits: &BracketLimits) -> Result<Value, SchemeError> {
    Ok(match mu {
        Invariant::Jones => Value::Polynomial(jones_with(d, limits)?),
        Invariant::JonesDeriv(k) => {
            let mut v = jones_derivatives_at_one_with(d, k, limits)?;
            Value::Rational(v.swap_remove(k as usize))
        }
    })
}

pub fn evaluate_formal(mu: Invariant, f: &FormalSum) -> Result<Value, SchemeError> {
    let mut acc = Value::zero_like(mu);
    for (c, d) in f.terms() {
        acc.add_scaled(c, &evaluate(mu, d)?);
    }
    Ok(acc)
}

/// `sum over subsets sigma of (-1)^|sigma| mu(K_sigma)`.
pub fn tot(s: &Scheme, mu: Invariant) -> Result<Value, SchemeError> {
    tot_with(s, mu, DEFAULT_MAX_SCHEME)
}

pub fn tot_with(s: &Scheme, mu: Invariant, cap: usize) -> Result<Value, SchemeError> {
    let mut acc = Value::zero_like(mu);
    for (sign, d) in s.subsets(cap)? {
        acc.add_scaled(sign, &evaluate(mu, &d)?);
    }
    Ok(acc)
}

/// The alternating sum as a formal combination of diagrams.
pub fn tot_formal(s: &Scheme) -> Result<FormalSum, SchemeError> {
    let mut f = FormalSum::new();
    for (sign, d) in s.subsets(DEFAULT_MAX_SCHEME)? {
        f.add(sign, &d);
    }
    Ok(f)
}

/// Extension to double points: each double point becomes
/// `mu(positive resolution) - mu(negative resolution)`.
pub fn eval_singular(sd: &SingularDiagram, mu: Invariant) -> Result<Value, SchemeError> {
    let dp = &sd.double_points;
    if dp.len() >= 64 || dp.len() > DEFAULT_MAX_SCHEME {
        return Err(SchemeError::ResourceLimit { size: dp.len(), cap: DEFAULT_MAX_SCHEME });
    }
    let base = &sd.diagram;
    let mut acc = Value::zero_like(mu);
    for mask in 0u64..1 << dp.len() {
        // bit set: resolve negatively
        let mut flips = Vec::new();
        for (k, &i) in dp.iter().enumerate() {
            let want_pos = mask >> k & 1 == 0;
            let is_pos = base.crossings()[i].sign.value() > 0;
            if want_pos != is_pos {
                flips.push(i);
            }
        }
        let d = base.switch_crossings(flips)?;
        let sign = if mask.count_ones() % 2 == 0 { 1 } else { -1 };
        acc.add_scaled(sign, &evaluate(mu, &d)?);
    }
    Ok(acc)
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Certificate {
    /// No moves: nothing is claimed.
    Vacuous,
    /// Every nonempty subset gives Jones polynomial 1.
    Holds,
    /// The first subset (as move indices) whose Jones polynomial is not 1.
    Fails(Vec<usize>),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TrivialityReport {
    pub certificate: Certificate,
    /// `|S| - 1`; the triviality degree the certificate would witness.
    pub n: i64,
    /// `(k, J^(k)(1))` of the host for `1 <= k <= n` when the certificate holds.
    pub host_derivatives: Vec<(u32, ExactRational)>,
    /// All listed derivatives are zero.
    pub derivatives_vanish: Option<bool>,
}

/// Uses `J = 1` as the unknot certificate. This is a proxy: a nontrivial knot
/// with trivial Jones polynomial would pass.
pub fn check_n_triviality(s: &Scheme) -> Result<TrivialityReport, SchemeError> {
    let n = s.len() as i64 - 1;
    if s.is_empty() {
        return Ok(TrivialityReport { certificate: Certificate::Vacuous, n, host_derivatives: Vec::new(), derivatives_vanish: None });
    }
    s.check_size(DEFAULT_MAX_SCHEME)?;
    let mut certificate = Certificate::Holds;
    for mask in 1u64..1 << s.len() {
        let j = jones_with(&s.apply_mask(mask), &BracketLimits::default())?;
        if !j.is_one() {
            certificate = Certificate::Fails((0..s.len()).filter(|&i| mask >> i & 1 == 1).collect());
            break;
        }
    }
    let mut host_derivatives = Vec::new();
    let mut derivatives_vanish = None;
    if certificate == Certificate::Holds {
        let j = jones_with(s.host(), &BracketLimits::default())?;
        let set: BTreeSet<u32> = (1..=n.max(0) as u32).collect();
        for k in set {
            host_derivatives.push((k, j.derivative_at_one(k)));
        }
        derivatives_vanish = Some(host_derivatives.iter().all(|(_, v)| v.is_zero()));
    }
    Ok(TrivialityReport { certificate, n, host_derivatives, derivatives_vanish })
}

//! Abstract gropes, core groupings and decorated graphs.

use alloc::collections::{BTreeMap, BTreeSet};
use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;
use core::fmt;
use core::str::FromStr;

use rand_core::RngCore;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum GropeError {
    #[error("a circle has class 1; core groupings need class at least 2")]
    ClassTooSmall,
    #[error("malformed tip path `{0}`")]
    BadPath(String),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Side {
    A,
    B,
}

impl Side {
    pub fn dual(self) -> Side {
        match self {
            Side::A => Side::B,
            Side::B => Side::A,
        }
    }
}

/// Address of a sub-grope: a sequence of (pair index, side) steps from the root.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct TipPath(pub Vec<(usize, Side)>);

impl TipPath {
    pub fn root() -> Self {
        Self::default()
    }

    pub fn child(&self, pair: usize, side: Side) -> Self {
        let mut v = self.0.clone();
        v.push((pair, side));
        Self(v)
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn starts_with(&self, prefix: &TipPath) -> bool {
        self.0.starts_with(&prefix.0)
    }

    /// Side of the bottom stage this path lives on.
    pub fn half(&self) -> Option<(usize, Side)> {
        self.0.first().copied()
    }
}

impl fmt::Display for TipPath {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, (p, s)) in self.0.iter().enumerate() {
            if i > 0 {
                f.write_str(".")?;
            }
            write!(f, "{p}.{}", if *s == Side::A { 'a' } else { 'b' })?;
        }
        Ok(())
    }
}

impl FromStr for TipPath {
    type Err = GropeError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let bad = || GropeError::BadPath(s.into());
        let parts: Vec<&str> = s.split('.').collect();
        if !parts.len().is_multiple_of(2) || s.is_empty() {
            return Err(bad());
        }
        let mut v = Vec::new();
        for step in parts.chunks(2) {
            let pair: usize = step[0].parse().map_err(|_| bad())?;
            let side = match step[1] {
                "a" => Side::A,
                "b" => Side::B,
                _ => return Err(bad()),
            };
            v.push((pair, side));
        }
        Ok(TipPath(v))
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum GropeSpec {
    /// A circle.
    Leaf,
    /// A punctured surface of genus `pairs.len()` with a grope on each
    /// symplectic basis curve.
    Stage(Vec<(GropeSpec, GropeSpec)>),
}

impl GropeSpec {
    /// Genus-1 surface.
    pub fn surface() -> Self {
        Self::surface_of_genus(1)
    }

    pub fn surface_of_genus(g: usize) -> Self {
        GropeSpec::Stage(vec![(GropeSpec::Leaf, GropeSpec::Leaf); g])
    }

    pub fn genus(&self) -> usize {
        match self {
            GropeSpec::Leaf => 0,
            GropeSpec::Stage(p) => p.len(),
        }
    }

    pub fn class(&self) -> usize {
        match self {
            GropeSpec::Leaf => 1,
            GropeSpec::Stage(pairs) => pairs.iter().map(|(a, b)| a.class() + b.class()).min().unwrap_or(1),
        }
    }

    pub fn depth(&self) -> usize {
        match self {
            GropeSpec::Leaf => 1,
            GropeSpec::Stage(pairs) => {
                1 + pairs.iter().map(|(a, b)| a.depth().max(b.depth())).max().unwrap_or(0)
            }
        }
    }

    pub fn total_genus(&self) -> usize {
        match self {
            GropeSpec::Leaf => 0,
            GropeSpec::Stage(pairs) => {
                pairs.len() + pairs.iter().map(|(a, b)| a.total_genus() + b.total_genus()).sum::<usize>()
            }
        }
    }

    /// The sub-grope at `path`, if any.
    pub fn get(&self, path: &TipPath) -> Option<&GropeSpec> {
        let mut g = self;
        for &(p, s) in &path.0 {
            match g {
                GropeSpec::Leaf => return None,
                GropeSpec::Stage(pairs) => {
                    let (a, b) = pairs.get(p)?;
                    g = if s == Side::A { a } else { b };
                }
            }
        }
        Some(g)
    }

    /// Paths of all circles (top-stage band cores), depth first in pair order.
    pub fn tips(&self) -> Vec<TipPath> {
        let mut out = Vec::new();
        self.collect_tips(&TipPath::root(), &mut out);
        out
    }

    fn collect_tips(&self, here: &TipPath, out: &mut Vec<TipPath>) {
        match self {
            GropeSpec::Leaf => {
                if !here.is_empty() {
                    out.push(here.clone());
                }
            }
            GropeSpec::Stage(pairs) => {
                for (i, (a, b)) in pairs.iter().enumerate() {
                    a.collect_tips(&here.child(i, Side::A), out);
                    b.collect_tips(&here.child(i, Side::B), out);
                }
            }
        }
    }

    /// The groups `V_1, ..., V_n` (`n` = class) of tips.
    ///
    /// A surface puts the a-side core of each dual pair in `V_1` and the
    /// b-side cores in `V_2`. Otherwise each pair concatenates the groupings
    /// of its two gropes, merges everything from index `n` on into `V_n`, and
    /// the pairs are merged index by index.
    pub fn group_cores(&self) -> Result<CoreGrouping, GropeError> {
        if *self == GropeSpec::Leaf {
            return Err(GropeError::ClassTooSmall);
        }
        Ok(CoreGrouping { groups: self.grouping_at(&TipPath::root()) })
    }

    fn grouping_at(&self, here: &TipPath) -> Vec<BTreeSet<TipPath>> {
        match self {
            GropeSpec::Leaf => vec![BTreeSet::from([here.clone()])],
            GropeSpec::Stage(pairs) => {
                let n = self.class();
                let mut groups = vec![BTreeSet::new(); n];
                for (i, (a, b)) in pairs.iter().enumerate() {
                    let mut tilde = a.grouping_at(&here.child(i, Side::A));
                    tilde.extend(b.grouping_at(&here.child(i, Side::B)));
                    for (j, g) in tilde.into_iter().enumerate() {
                        groups[j.min(n - 1)].extend(g);
                    }
                }
                groups
            }
        }
    }
}

impl fmt::Display for GropeSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            GropeSpec::Leaf => f.write_str("o"),
            GropeSpec::Stage(pairs) => {
                write!(f, "(stage {} (", pairs.len())?;
                for (i, (a, b)) in pairs.iter().enumerate() {
                    if i > 0 {
                        f.write_str(" ")?;
                    }
                    write!(f, "({a} {b})")?;
                }
                f.write_str("))")
            }
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CoreGrouping {
    pub groups: Vec<BTreeSet<TipPath>>,
}

impl CoreGrouping {
    /// Index of the group containing `tip`.
    pub fn group_of(&self, tip: &TipPath) -> Option<usize> {
        self.groups.iter().position(|g| g.contains(tip))
    }
}

/// Graph with l-marks on vertices.
#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct DecoratedGraph {
    marks: Vec<bool>,
    edges: BTreeSet<(usize, usize)>,
}

impl DecoratedGraph {
    pub fn new(vertices: usize) -> Self {
        Self { marks: vec![false; vertices], edges: BTreeSet::new() }
    }

    pub fn vertex_count(&self) -> usize {
        self.marks.len()
    }

    pub fn mark(&mut self, v: usize) {
        self.marks[v] = true;
    }

    pub fn unmark(&mut self, v: usize) {
        self.marks[v] = false;
    }

    pub fn is_marked(&self, v: usize) -> bool {
        self.marks[v]
    }

    /// Adds an edge; self-loops are ignored.
    pub fn add_edge(&mut self, u: usize, v: usize) {
        assert!(u < self.marks.len() && v < self.marks.len(), "edge {u}-{v} out of range");
        if u != v {
            self.edges.insert((u.min(v), u.max(v)));
        }
    }

    pub fn remove_edge(&mut self, u: usize, v: usize) -> bool {
        self.edges.remove(&(u.min(v), u.max(v)))
    }

    pub fn has_edge(&self, u: usize, v: usize) -> bool {
        self.edges.contains(&(u.min(v), u.max(v)))
    }

    pub fn edges(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        self.edges.iter().copied()
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    /// Number of l-marked vertices.
    pub fn xi(&self) -> usize {
        self.marks.iter().filter(|&&m| m).count()
    }

    /// `E + xi`.
    pub fn complexity(&self) -> usize {
        self.edge_count() + self.xi()
    }

    /// Component id of every vertex, ids in order of first vertex.
    pub fn components(&self) -> Vec<usize> {
        let n = self.marks.len();
        let mut adj = vec![Vec::new(); n];
        for &(u, v) in &self.edges {
            adj[u].push(v);
            adj[v].push(u);
        }
        let mut comp = vec![usize::MAX; n];
        let mut next = 0;
        for s in 0..n {
            if comp[s] != usize::MAX {
                continue;
            }
            comp[s] = next;
            let mut stack = vec![s];
            while let Some(u) = stack.pop() {
                for &v in &adj[u] {
                    if comp[v] == usize::MAX {
                        comp[v] = next;
                        stack.push(v);
                    }
                }
            }
            next += 1;
        }
        comp
    }

    pub fn b0(&self) -> usize {
        self.components().iter().copied().max().map_or(0, |m| m + 1)
    }

    pub fn b1(&self) -> usize {
        self.edge_count() + self.b0() - self.vertex_count()
    }

    /// Unmarked, pairwise non-adjacent vertices.
    pub fn is_free_set(&self, set: &[usize]) -> bool {
        set.iter().all(|&v| v < self.vertex_count() && !self.marks[v])
            && set.iter().enumerate().all(|(i, &u)| set[i + 1..].iter().all(|&v| u != v && !self.has_edge(u, v)))
    }
}

/// One vertex (the smallest) from each of the first `m` components without
/// l-marks, or `None` when there are fewer than `m` such components.
pub fn find_free_set(g: &DecoratedGraph, m: usize) -> Option<Vec<usize>> {
    let comp = g.components();
    let mut clean: BTreeMap<usize, usize> = BTreeMap::new();
    let mut dirty = BTreeSet::new();
    for (v, &c) in comp.iter().enumerate() {
        if g.marks[v] {
            dirty.insert(c);
        }
        clean.entry(c).or_insert(v);
    }
    let picks: Vec<usize> = clean.into_iter().filter(|(c, _)| !dirty.contains(c)).map(|(_, v)| v).take(m).collect();
    (picks.len() == m).then_some(picks)
}

/// `xi + m <= b0 - b1`.
pub fn counting_bound_holds(g: &DecoratedGraph, m: usize) -> bool {
    g.xi() + m + g.b1() <= g.b0()
}

/// Random graph on `2m + 1` vertices with `E + xi <= m + 1`.
pub fn random_hypothesis_graph<R: RngCore + ?Sized>(rng: &mut R, m: usize) -> DecoratedGraph {
    let n = 2 * m + 1;
    let mut g = DecoratedGraph::new(n);
    let budget = (rng.next_u64() % (m as u64 + 2)) as usize;
    for _ in 0..budget {
        if rng.next_u64().is_multiple_of(3) {
            g.mark((rng.next_u64() % n as u64) as usize);
        } else {
            let u = (rng.next_u64() % n as u64) as usize;
            let v = (rng.next_u64() % n as u64) as usize;
            g.add_edge(u, v);
        }
    }
    debug_assert!(g.complexity() <= m + 1);
    g
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::string::ToString;
    use rand_chacha::rand_core::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn s2() -> GropeSpec {
        GropeSpec::surface()
    }

    fn p(s: &str) -> TipPath {
        s.parse().unwrap()
    }

    #[test]
    fn class_depth_genus() {
        let leaf = GropeSpec::Leaf;
        assert_eq!((leaf.class(), leaf.depth(), leaf.total_genus()), (1, 1, 0));
        assert_eq!((s2().class(), s2().depth(), s2().total_genus()), (2, 2, 1));
        let c3 = GropeSpec::Stage(vec![(s2(), GropeSpec::Leaf)]);
        assert_eq!((c3.class(), c3.depth(), c3.total_genus()), (3, 3, 2));
        let mixed = GropeSpec::Stage(vec![(s2(), GropeSpec::Leaf), (s2(), s2())]);
        assert_eq!(mixed.class(), 3);
        assert_eq!(mixed.total_genus(), 5);
    }

    #[test]
    fn surface_grouping() {
        let g = GropeSpec::surface_of_genus(2).group_cores().unwrap();
        assert_eq!(g.groups.len(), 2);
        assert_eq!(g.groups[0], BTreeSet::from([p("0.a"), p("1.a")]));
        assert_eq!(g.groups[1], BTreeSet::from([p("0.b"), p("1.b")]));
        assert_eq!(GropeSpec::Leaf.group_cores(), Err(GropeError::ClassTooSmall));
    }

    #[test]
    fn class_three_grouping() {
        let c3 = GropeSpec::Stage(vec![(s2(), GropeSpec::Leaf)]);
        let g = c3.group_cores().unwrap();
        assert_eq!(
            g.groups,
            vec![BTreeSet::from([p("0.a.0.a")]), BTreeSet::from([p("0.a.0.b")]), BTreeSet::from([p("0.b")])]
        );
    }

    #[test]
    fn paths_round_trip() {
        for s in ["0.a", "0.a.1.b", "2.b.0.a.0.a"] {
            assert_eq!(p(s).to_string(), s);
        }
        assert!("0".parse::<TipPath>().is_err());
        assert!("0.c".parse::<TipPath>().is_err());
        assert!("".parse::<TipPath>().is_err());
    }

    #[test]
    fn complexity_counts() {
        assert_eq!(DecoratedGraph::new(5).complexity(), 0);
        let mut g = DecoratedGraph::new(3);
        g.add_edge(0, 1);
        g.mark(2);
        assert_eq!(g.complexity(), 2);
    }

    #[test]
    fn free_sets() {
        let g = DecoratedGraph::new(5);
        assert_eq!(find_free_set(&g, 5), Some(vec![0, 1, 2, 3, 4]));
        let mut path = DecoratedGraph::new(3);
        path.add_edge(0, 1);
        path.add_edge(1, 2);
        assert_eq!(find_free_set(&path, 2), None);
        assert!(counting_bound_holds(&DecoratedGraph::new(0), 0));
    }

    #[test]
    fn hypothesis_graphs_always_yield_free_sets() {
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        for _ in 0..500 {
            let m = 1 + (rng.next_u64() % 6) as usize;
            let g = random_hypothesis_graph(&mut rng, m);
            assert!(g.complexity() <= m + 1);
            assert!(counting_bound_holds(&g, m));
            let set = find_free_set(&g, m).unwrap();
            assert!(g.is_free_set(&set));
        }
    }

    #[test]
    fn violating_graph_can_fail() {
        let mut g = DecoratedGraph::new(5);
        for v in 0..5 {
            g.mark(v);
        }
        assert!(!counting_bound_holds(&g, 2));
        assert_eq!(find_free_set(&g, 2), None);
    }

    #[test]
    fn display() {
        let c3 = GropeSpec::Stage(vec![(s2(), GropeSpec::Leaf)]);
        assert_eq!(c3.to_string(), "(stage 1 (((stage 1 ((o o))) o)))");
    }
}

//! Planar link diagrams in PD form.
//!
//! A crossing lists its four arc labels starting at the incoming under-strand
//! and going around the crossing in the diagram's rotation sense. The under
//! strand runs from slot 0 to slot 2. The over strand enters at slot 1 when the
//! sign is positive and at slot 3 when it is negative.
//!
//! Read in the standard orientation of the plane the rotation sense is
//! clockwise, which makes the stored sign agree with the right-hand rule:
//! `X 1 4 2 5 +`, `X 3 6 4 1 +`, `X 5 2 6 3 +` is a right-handed trefoil of
//! writhe +3.

use alloc::collections::BTreeMap;
use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;
use core::fmt;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Sign {
    Pos,
    Neg,
}

impl Sign {
    pub fn value(self) -> i64 {
        match self {
            Sign::Pos => 1,
            Sign::Neg => -1,
        }
    }

    pub fn flip(self) -> Sign {
        match self {
            Sign::Pos => Sign::Neg,
            Sign::Neg => Sign::Pos,
        }
    }

    pub fn symbol(self) -> char {
        match self {
            Sign::Pos => '+',
            Sign::Neg => '-',
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Crossing {
    pub arcs: [u32; 4],
    pub sign: Sign,
}

impl Crossing {
    pub fn new(arcs: [u32; 4], sign: Sign) -> Self {
        Self { arcs, sign }
    }

    /// Slot where the over strand enters.
    pub fn over_in(&self) -> usize {
        match self.sign {
            Sign::Pos => 1,
            Sign::Neg => 3,
        }
    }

    /// True if the arc at `slot` enters this crossing.
    pub fn is_incoming(&self, slot: usize) -> bool {
        slot == 0 || slot == self.over_in()
    }

    /// Same crossing with over and under exchanged.
    pub fn switched(&self) -> Crossing {
        let [a, b, c, d] = self.arcs;
        match self.sign {
            Sign::Pos => Crossing::new([b, c, d, a], Sign::Neg),
            Sign::Neg => Crossing::new([d, a, b, c], Sign::Pos),
        }
    }

    /// Same crossing with both strands reversed.
    pub fn reversed(&self) -> Crossing {
        let [a, b, c, d] = self.arcs;
        Crossing::new([c, d, a, b], self.sign)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum DiagramError {
    #[error("diagram has no crossings and no loops")]
    Empty,
    #[error("arc label 0 is not allowed")]
    ZeroLabel,
    #[error("arc {label} occurs {count} times (expected 2)")]
    ArcCount { label: u32, count: usize },
    #[error("arc {label} is not entered exactly once and left exactly once")]
    Orientation { label: u32 },
    #[error("rotation system is not planar (Euler characteristic {euler} for a component, expected 2)")]
    NonPlanar { euler: i64 },
    #[error("crossing index {index} out of range for {len} crossings")]
    IndexOutOfRange { index: usize, len: usize },
    #[error("expected a knot, found {components} components")]
    NotAKnot { components: usize },
    #[error("arc {label} does not occur in the diagram")]
    NoSuchArc { label: u32 },
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ValidationReport {
    pub arc_count_ok: bool,
    pub orientation_ok: bool,
    pub components: usize,
    pub planar: bool,
    pub writhe: i64,
    pub issues: Vec<DiagramError>,
}

impl ValidationReport {
    pub fn is_valid(&self) -> bool {
        self.issues.is_empty()
    }
}

/// Both ends of an arc: `(crossing, slot)` where it leaves and where it enters.
#[derive(Clone, Copy, Debug)]
struct ArcEnds {
    tail: (usize, usize),
    head: (usize, usize),
}

#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct LinkDiagram {
    crossings: Vec<Crossing>,
    free_loops: u32,
}

impl LinkDiagram {
    /// Validated constructor.
    pub fn new(crossings: Vec<Crossing>, free_loops: u32) -> Result<Self, DiagramError> {
        let report = validate_parts(&crossings, free_loops);
        if let Some(e) = report.issues.into_iter().next() {
            return Err(e);
        }
        Ok(Self { crossings, free_loops })
    }

    pub fn unknot() -> Self {
        Self::unlink(1)
    }

    pub fn unlink(n: u32) -> Self {
        assert!(n > 0, "an unlink needs at least one component");
        Self { crossings: Vec::new(), free_loops: n }
    }

    pub fn crossings(&self) -> &[Crossing] {
        &self.crossings
    }

    pub fn crossing_count(&self) -> usize {
        self.crossings.len()
    }

    pub fn free_loops(&self) -> u32 {
        self.free_loops
    }

    pub fn writhe(&self) -> i64 {
        self.crossings.iter().map(|c| c.sign.value()).sum()
    }

    /// Sorted arc labels.
    pub fn arc_labels(&self) -> Vec<u32> {
        let mut v: Vec<u32> = self.crossings.iter().flat_map(|c| c.arcs).collect();
        v.sort_unstable();
        v.dedup();
        v
    }

    pub fn max_label(&self) -> u32 {
        self.crossings.iter().flat_map(|c| c.arcs).max().unwrap_or(0)
    }

    fn ends(&self) -> BTreeMap<u32, ArcEnds> {
        arc_ends(&self.crossings).expect("validated diagram")
    }

    /// Arc labels of each crossing-carrying component, in traversal order.
    pub fn component_arcs(&self) -> Vec<Vec<u32>> {
        let ends = self.ends();
        let mut seen = BTreeMap::new();
        let mut out = Vec::new();
        for &start in ends.keys() {
            if seen.contains_key(&start) {
                continue;
            }
            let mut comp = Vec::new();
            let mut arc = start;
            loop {
                seen.insert(arc, ());
                comp.push(arc);
                let (ci, slot) = ends[&arc].head;
                arc = self.crossings[ci].arcs[(slot + 2) % 4];
                if arc == start {
                    break;
                }
            }
            out.push(comp);
        }
        out
    }

    pub fn component_count(&self) -> usize {
        self.component_arcs().len() + self.free_loops as usize
    }

    pub fn is_knot(&self) -> bool {
        self.component_count() == 1
    }

    fn check_index(&self, i: usize) -> Result<(), DiagramError> {
        if i >= self.crossings.len() {
            return Err(DiagramError::IndexOutOfRange { index: i, len: self.crossings.len() });
        }
        Ok(())
    }

    pub fn switch_crossing(&self, i: usize) -> Result<LinkDiagram, DiagramError> {
        self.check_index(i)?;
        let mut out = self.clone();
        out.crossings[i] = out.crossings[i].switched();
        Ok(out)
    }

    /// Switches every listed crossing. Indices must be distinct.
    pub fn switch_crossings(&self, indices: impl IntoIterator<Item = usize>) -> Result<LinkDiagram, DiagramError> {
        let mut out = self.clone();
        for i in indices {
            self.check_index(i)?;
            out.crossings[i] = out.crossings[i].switched();
        }
        Ok(out)
    }

    pub fn mirror(&self) -> LinkDiagram {
        Self {
            crossings: self.crossings.iter().map(Crossing::switched).collect(),
            free_loops: self.free_loops,
        }
    }

    pub fn reverse(&self) -> LinkDiagram {
        Self {
            crossings: self.crossings.iter().map(Crossing::reversed).collect(),
            free_loops: self.free_loops,
        }
    }

    pub fn disjoint_union(&self, other: &LinkDiagram) -> LinkDiagram {
        let shift = self.max_label();
        let mut crossings = self.crossings.clone();
        crossings.extend(other.crossings.iter().map(|c| Crossing::new(c.arcs.map(|a| a + shift), c.sign)));
        Self { crossings, free_loops: self.free_loops + other.free_loops }
    }

    /// Connected sum of two knots, cutting arc `c1` of `self` and arc `c2` of `other`.
    ///
    /// A crossingless knot is the unit; its arc argument is ignored.
    pub fn connected_sum(&self, c1: u32, other: &LinkDiagram, c2: u32) -> Result<LinkDiagram, DiagramError> {
        for d in [self, other] {
            let n = d.component_count();
            if n != 1 {
                return Err(DiagramError::NotAKnot { components: n });
            }
        }
        if self.crossings.is_empty() {
            other.ends().get(&c2).ok_or(DiagramError::NoSuchArc { label: c2 })?;
            return Ok(other.clone());
        }
        if other.crossings.is_empty() {
            self.ends().get(&c1).ok_or(DiagramError::NoSuchArc { label: c1 })?;
            return Ok(self.clone());
        }
        let e1 = *self.ends().get(&c1).ok_or(DiagramError::NoSuchArc { label: c1 })?;
        let e2 = *other.ends().get(&c2).ok_or(DiagramError::NoSuchArc { label: c2 })?;
        let shift = self.max_label();
        let mut sum = self.disjoint_union(other);
        let n1 = self.crossings.len();
        // c1 now runs from its old tail into the head of c2, and vice versa
        sum.crossings[e1.head.0].arcs[e1.head.1] = c2 + shift;
        sum.crossings[n1 + e2.head.0].arcs[e2.head.1] = c1;
        sum.free_loops = 0;
        debug_assert!(validate(&sum).is_valid());
        Ok(sum)
    }

    /// Relabels arcs 1, 2, ... along components, starting each component at its
    /// smallest unvisited label. Crossing order is kept.
    pub fn canonical(&self) -> LinkDiagram {
        let mut map = BTreeMap::new();
        let mut next = 1u32;
        for comp in self.component_arcs() {
            for a in comp {
                map.insert(a, next);
                next += 1;
            }
        }
        Self {
            crossings: self.crossings.iter().map(|c| Crossing::new(c.arcs.map(|a| map[&a]), c.sign)).collect(),
            free_loops: self.free_loops,
        }
    }

    /// PD text: one `X a b c d s` line per crossing, then one `U` per free loop.
    pub fn to_pd_string(&self) -> String {
        let mut s = String::new();
        let c = self.canonical();
        for x in &c.crossings {
            let [a, b, cc, d] = x.arcs;
            s.push_str(&alloc::format!("X {a} {b} {cc} {d} {}\n", x.sign.symbol()));
        }
        for _ in 0..c.free_loops {
            s.push_str("U\n");
        }
        s
    }
}

impl fmt::Debug for LinkDiagram {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "LinkDiagram[")?;
        for (i, x) in self.crossings.iter().enumerate() {
            if i > 0 {
                write!(f, "; ")?;
            }
            let [a, b, c, d] = x.arcs;
            write!(f, "{a} {b} {c} {d} {}", x.sign.symbol())?;
        }
        if self.free_loops > 0 {
            write!(f, "; U x{}", self.free_loops)?;
        }
        write!(f, "]")
    }
}

fn arc_ends(crossings: &[Crossing]) -> Result<BTreeMap<u32, ArcEnds>, DiagramError> {
    let mut occ: BTreeMap<u32, Vec<(usize, usize)>> = BTreeMap::new();
    for (i, c) in crossings.iter().enumerate() {
        for (s, &a) in c.arcs.iter().enumerate() {
            if a == 0 {
                return Err(DiagramError::ZeroLabel);
            }
            occ.entry(a).or_default().push((i, s));
        }
    }
    let mut out = BTreeMap::new();
    for (label, v) in occ {
        if v.len() != 2 {
            return Err(DiagramError::ArcCount { label, count: v.len() });
        }
        let inc: Vec<bool> = v.iter().map(|&(i, s)| crossings[i].is_incoming(s)).collect();
        let ends = match (inc[0], inc[1]) {
            (false, true) => ArcEnds { tail: v[0], head: v[1] },
            (true, false) => ArcEnds { tail: v[1], head: v[0] },
            _ => return Err(DiagramError::Orientation { label }),
        };
        out.insert(label, ends);
    }
    Ok(out)
}

/// Face count check on the rotation system, one connected component at a time.
fn planarity(crossings: &[Crossing], ends: &BTreeMap<u32, ArcEnds>) -> Result<(), DiagramError> {
    let n = crossings.len();
    // dart (i, s) -> the slot at the other end of the same arc
    let other = |i: usize, s: usize| -> (usize, usize) {
        let e = ends[&crossings[i].arcs[s]];
        if e.tail == (i, s) {
            e.head
        } else {
            e.tail
        }
    };
    let mut comp = vec![usize::MAX; n];
    let mut ncomp = 0;
    for start in 0..n {
        if comp[start] != usize::MAX {
            continue;
        }
        let mut stack = vec![start];
        comp[start] = ncomp;
        while let Some(i) = stack.pop() {
            for s in 0..4 {
                let (j, _) = other(i, s);
                if comp[j] == usize::MAX {
                    comp[j] = ncomp;
                    stack.push(j);
                }
            }
        }
        ncomp += 1;
    }
    let mut faces = vec![0i64; ncomp];
    let mut seen = vec![[false; 4]; n];
    for i in 0..n {
        for s in 0..4 {
            if seen[i][s] {
                continue;
            }
            faces[comp[i]] += 1;
            let (mut ci, mut cs) = (i, s);
            while !seen[ci][cs] {
                seen[ci][cs] = true;
                let (j, t) = other(ci, cs);
                ci = j;
                cs = (t + 1) % 4;
            }
        }
    }
    let mut verts = vec![0i64; ncomp];
    for &c in &comp {
        verts[c] += 1;
    }
    for k in 0..ncomp {
        let euler = verts[k] - 2 * verts[k] + faces[k];
        if euler != 2 {
            return Err(DiagramError::NonPlanar { euler });
        }
    }
    Ok(())
}

/// Checks raw crossing data without building a diagram.
pub fn validate_parts(crossings: &[Crossing], free_loops: u32) -> ValidationReport {
    let mut report = ValidationReport {
        arc_count_ok: true,
        orientation_ok: true,
        components: free_loops as usize,
        planar: true,
        writhe: crossings.iter().map(|c| c.sign.value()).sum(),
        issues: Vec::new(),
    };
    if crossings.is_empty() && free_loops == 0 {
        report.issues.push(DiagramError::Empty);
        return report;
    }
    match arc_ends(crossings) {
        Err(e) => {
            match e {
                DiagramError::Orientation { .. } => report.orientation_ok = false,
                _ => report.arc_count_ok = false,
            }
            report.planar = false;
            report.issues.push(e);
        }
        Ok(ends) => {
            if let Err(e) = planarity(crossings, &ends) {
                report.planar = false;
                report.issues.push(e);
            }
            let d = LinkDiagram { crossings: crossings.to_vec(), free_loops };
            report.components = d.component_count();
        }
    }
    report
}

pub fn validate(d: &LinkDiagram) -> ValidationReport {
    validate_parts(&d.crossings, d.free_loops)
}

/// Crossing with slots in rotation order and no orientation yet.
/// The under strand joins slots 0 and 2.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct UnorientedCrossing {
    pub slots: [u32; 4],
}

/// Orients every component by traversal and produces PD tuples and signs.
///
/// Each label must occur exactly twice; labels never touching a crossing are
/// not representable here, so crossingless loops are passed as `free_loops`.
/// A component is traversed starting from its smallest label, leaving that
/// arc's first occurrence (lowest crossing index, then slot) and entering the
/// other end.
pub fn orient(crossings: &[UnorientedCrossing], free_loops: u32) -> Result<LinkDiagram, DiagramError> {
    let mut occ: BTreeMap<u32, Vec<(usize, usize)>> = BTreeMap::new();
    for (i, c) in crossings.iter().enumerate() {
        for (s, &a) in c.slots.iter().enumerate() {
            occ.entry(a).or_default().push((i, s));
        }
    }
    for (&label, v) in &occ {
        if v.len() != 2 {
            return Err(DiagramError::ArcCount { label, count: v.len() });
        }
    }
    // entered[i][s]: traversal enters crossing i through slot s
    let mut entered = vec![[false; 4]; crossings.len()];
    let mut visited: BTreeMap<u32, ()> = BTreeMap::new();
    for (&start, v) in &occ {
        if visited.contains_key(&start) {
            continue;
        }
        let mut arc = start;
        let mut head = v[1];
        loop {
            visited.insert(arc, ());
            let (i, s) = head;
            entered[i][s] = true;
            let out = (s + 2) % 4;
            let next = crossings[i].slots[out];
            let o = &occ[&next];
            head = if o[0] == (i, out) { o[1] } else { o[0] };
            arc = next;
            if arc == start {
                break;
            }
        }
    }
    let oriented = crossings
        .iter()
        .enumerate()
        .map(|(i, c)| {
            let rot = if entered[i][0] { 0 } else { 2 };
            let arcs = [0, 1, 2, 3].map(|k| c.slots[(rot + k) % 4]);
            let sign = if entered[i][(rot + 1) % 4] { Sign::Pos } else { Sign::Neg };
            Crossing::new(arcs, sign)
        })
        .collect();
    LinkDiagram::new(oriented, free_loops)
}

#[derive(Clone, PartialEq, Eq, Debug)]
pub struct SingularDiagram {
    pub diagram: LinkDiagram,
    /// Indices of crossings that stand for double points.
    pub double_points: Vec<usize>,
}

impl SingularDiagram {
    pub fn new(diagram: LinkDiagram, mut double_points: Vec<usize>) -> Result<Self, DiagramError> {
        double_points.sort_unstable();
        double_points.dedup();
        for &i in &double_points {
            diagram.check_index(i)?;
        }
        Ok(Self { diagram, double_points })
    }
}

/// Integer combination of diagrams, merged by canonical PD text.
#[derive(Clone, PartialEq, Eq, Debug, Default)]
pub struct FormalSum {
    terms: BTreeMap<LinkDiagram, i64>,
}

impl FormalSum {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn add(&mut self, coeff: i64, d: &LinkDiagram) {
        let key = d.canonical();
        let e = self.terms.entry(key).or_insert(0);
        *e += coeff;
        if *e == 0 {
            let key = d.canonical();
            self.terms.remove(&key);
        }
    }

    pub fn terms(&self) -> impl Iterator<Item = (i64, &LinkDiagram)> + '_ {
        self.terms.iter().map(|(d, &c)| (c, d))
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn x(a: u32, b: u32, c: u32, d: u32, s: Sign) -> Crossing {
        Crossing::new([a, b, c, d], s)
    }

    fn trefoil() -> LinkDiagram {
        LinkDiagram::new(
            vec![x(1, 4, 2, 5, Sign::Pos), x(3, 6, 4, 1, Sign::Pos), x(5, 2, 6, 3, Sign::Pos)],
            0,
        )
        .unwrap()
    }

    #[test]
    fn trefoil_report() {
        let r = validate(&trefoil());
        assert!(r.is_valid());
        assert_eq!(r.components, 1);
        assert_eq!(r.writhe, 3);
        assert_eq!(trefoil().component_arcs(), vec![vec![1, 2, 3, 4, 5, 6]]);
    }

    #[test]
    fn reversed_rotation_is_not_planar() {
        // the trefoil with the rotation at its first crossing reversed
        let r = validate_parts(
            &[x(1, 5, 2, 4, Sign::Neg), x(3, 6, 4, 1, Sign::Pos), x(5, 2, 6, 3, Sign::Pos)],
            0,
        );
        assert!(r.arc_count_ok && r.orientation_ok);
        assert!(!r.planar, "{r:?}");
    }

    #[test]
    fn one_crossing_encodings() {
        // all tuples over labels {1,2} with each label twice
        let mut legal = Vec::new();
        for code in 0..16u32 {
            let arcs = [0, 1, 2, 3].map(|k| 1 + ((code >> k) & 1));
            if arcs.iter().filter(|&&a| a == 1).count() != 2 {
                continue;
            }
            for s in [Sign::Pos, Sign::Neg] {
                if validate_parts(&[Crossing::new(arcs, s)], 0).is_valid() {
                    legal.push((arcs, s));
                }
            }
        }
        legal.sort();
        assert_eq!(
            legal,
            vec![
                ([1, 1, 2, 2], Sign::Neg),
                ([1, 2, 2, 1], Sign::Pos),
                ([2, 1, 1, 2], Sign::Pos),
                ([2, 2, 1, 1], Sign::Neg),
            ]
        );
    }

    #[test]
    fn switch_is_involution_and_flips_writhe() {
        let t = trefoil();
        for i in 0..3 {
            let s = t.switch_crossing(i).unwrap();
            assert_eq!(s.writhe(), 1);
            assert_eq!(s.switch_crossing(i).unwrap(), t);
            assert!(validate(&s).is_valid());
        }
        assert_eq!(t.switch_crossing(3), Err(DiagramError::IndexOutOfRange { index: 3, len: 3 }));
    }

    #[test]
    fn mirror_reverse() {
        let t = trefoil();
        assert_eq!(t.mirror().writhe(), -3);
        assert_eq!(t.mirror().mirror(), t);
        assert_eq!(t.reverse().reverse(), t);
        assert!(validate(&t.reverse()).is_valid());
        assert_eq!(t.reverse().writhe(), 3);
    }

    #[test]
    fn connected_sum_is_valid_knot() {
        let t = trefoil();
        for c1 in 1..=6 {
            let s = t.connected_sum(c1, &t.mirror(), 4).unwrap();
            assert_eq!(s.crossing_count(), 6);
            assert!(s.is_knot());
            assert_eq!(s.writhe(), 0);
        }
        let two = t.disjoint_union(&t);
        assert_eq!(two.component_count(), 2);
        assert!(matches!(two.connected_sum(1, &t, 1), Err(DiagramError::NotAKnot { components: 2 })));
        assert_eq!(LinkDiagram::unknot().connected_sum(1, &t, 2).unwrap(), t);
    }

    #[test]
    fn canonical_relabel() {
        let hopf = LinkDiagram::new(vec![x(1, 3, 2, 4, Sign::Pos), x(4, 2, 3, 1, Sign::Pos)], 0).unwrap();
        assert_eq!(hopf.component_count(), 2);
        assert_eq!(hopf.canonical(), hopf);
        let shifted = LinkDiagram::new(vec![x(9, 5, 7, 6, Sign::Pos), x(6, 7, 5, 9, Sign::Pos)], 0).unwrap();
        let c = shifted.canonical();
        assert_eq!(c.arc_labels(), vec![1, 2, 3, 4]);
        assert_eq!(c.canonical(), c);
        assert_eq!(trefoil().canonical(), trefoil());
    }

    #[test]
    fn orient_recovers_signs() {
        let t = trefoil();
        let un: Vec<UnorientedCrossing> = t
            .crossings()
            .iter()
            .map(|c| UnorientedCrossing { slots: c.arcs })
            .collect();
        let o = orient(&un, 0).unwrap();
        assert_eq!(o.writhe(), 3);
        let un_rev: Vec<UnorientedCrossing> = t
            .crossings()
            .iter()
            .map(|c| UnorientedCrossing { slots: c.reversed().arcs })
            .collect();
        assert_eq!(orient(&un_rev, 0).unwrap().writhe(), 3);
    }

    #[test]
    fn formal_sum_merges() {
        let t = trefoil();
        let mut f = FormalSum::new();
        f.add(1, &t);
        f.add(2, &t.switch_crossing(0).unwrap().switch_crossing(0).unwrap());
        f.add(-1, &t.mirror());
        assert_eq!(f.len(), 2);
        f.add(1, &t.mirror());
        assert_eq!(f.terms().next().unwrap().0, 3);
    }

    #[test]
    fn empty_rejected() {
        assert_eq!(LinkDiagram::new(vec![], 0), Err(DiagramError::Empty));
    }
}

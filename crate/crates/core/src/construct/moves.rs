//! Crossing-change schemes read off a drawn presentation.

use alloc::collections::BTreeSet;
use alloc::format;
use alloc::string::String;
use alloc::vec::Vec;

use super::{draw_boundary, BoundaryDrawing, ConstructError, EmbeddedGropePresentation, GraphKind, LayoutEvent, Target};
use crate::diagram::Sign;
use crate::grope::{GropeSpec, TipPath};
use crate::scheme::{Move, Scheme};

/// A scheme whose moves carry a label naming their role.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GeneratedScheme {
    pub scheme: Scheme,
    pub labels: Vec<String>,
}

impl GeneratedScheme {
    pub(super) fn build(drawing: &BoundaryDrawing, moves: Vec<(String, BTreeSet<usize>)>) -> Result<Self, ConstructError> {
        let mut labels = Vec::new();
        let mut ms = Vec::new();
        for (label, set) in moves {
            if set.is_empty() {
                return Err(ConstructError::EmptyMove(label));
            }
            labels.push(label);
            ms.push(Move::new(set));
        }
        Ok(Self { scheme: Scheme::new(drawing.diagram.clone(), ms)?, labels })
    }

    /// Both schemes' moves on a common host; fails if they overlap.
    pub fn merge(&self, other: &GeneratedScheme) -> Result<Self, ConstructError> {
        if self.scheme.host() != other.scheme.host() {
            return Err(ConstructError::InvalidPresentation("schemes live on different diagrams".into()));
        }
        let moves = self.scheme.moves().iter().chain(other.scheme.moves()).cloned().collect();
        let labels = self.labels.iter().chain(&other.labels).cloned().collect();
        Ok(Self { scheme: Scheme::new(self.scheme.host().clone(), moves)?, labels })
    }
}

/// Crossings of a clasp or crossing event where `tip` is the under strand.
fn passes_under(p: &EmbeddedGropePresentation, d: &BoundaryDrawing, e: usize, tip: usize) -> Vec<usize> {
    let grids = d.event_grids(e).expect("every event is drawn");
    let over = match &p.events()[e] {
        LayoutEvent::Cross { upper, .. } => {
            let u = p.tip_index(upper) == Some(tip);
            [u, u]
        }
        LayoutEvent::Clasp { a, sign, .. } => {
            let first = (*sign == Sign::Pos) == (p.tip_index(a) == Some(tip));
            [first, !first]
        }
        LayoutEvent::Twist { .. } => return Vec::new(),
    };
    (0..2).filter(|&k| !over[k]).flat_map(|k| grids[1 + k].iter().copied()).collect()
}

fn target_crossings(p: &EmbeddedGropePresentation, d: &BoundaryDrawing, kind: GraphKind, t: Target) -> BTreeSet<usize> {
    let twisted = p.net_twists();
    let mut out = BTreeSet::new();
    for (e, ev) in p.events().iter().enumerate() {
        let grids = d.event_grids(e).expect("every event is drawn");
        match ev {
            LayoutEvent::Twist { tip, .. } => {
                let i = p.tip_index(tip).expect("validated");
                if t == Target::Mark(p.vertex_of(kind, i)) && twisted.contains_key(&i) {
                    out.extend(&grids[1]);
                }
            }
            _ if p.event_target(kind, e) != Some(t) => {}
            LayoutEvent::Cross { .. } => out.extend(grids[1].iter().chain(&grids[2])),
            LayoutEvent::Clasp { a, b, .. } => {
                let (x, y) = (p.tip_index(a).expect("validated"), p.tip_index(b).expect("validated"));
                out.extend(passes_under(p, d, e, p.higher(x, y)));
            }
        }
    }
    out
}

/// One type-I move per target, each deleting its edge or l-mark.
pub fn generate_type_i(
    p: &EmbeddedGropePresentation,
    kind: GraphKind,
    targets: &[Target],
) -> Result<GeneratedScheme, ConstructError> {
    let g = p.decorated_graph(kind);
    let d = draw_boundary(p)?;
    let mut moves = Vec::new();
    for &t in targets {
        let present = match t {
            Target::Edge(u, v) => g.has_edge(u, v),
            Target::Mark(v) => v < g.vertex_count() && g.is_marked(v),
        };
        if !present {
            return Err(ConstructError::NoSuchTarget(format!("{t}")));
        }
        moves.push((format!("type-I {t}"), target_crossings(p, &d, kind, t)));
    }
    GeneratedScheme::build(&d, moves)
}

/// One move per vertex of a free set: every crossing where a band of that
/// vertex passes under a band of another vertex is switched, lifting the
/// vertex's bands over the rest.
pub fn generate_type_ii(
    p: &EmbeddedGropePresentation,
    kind: GraphKind,
    free: &[usize],
) -> Result<GeneratedScheme, ConstructError> {
    if !p.decorated_graph(kind).is_free_set(free) {
        return Err(ConstructError::NotFree(free.to_vec()));
    }
    let d = draw_boundary(p)?;
    let n = d.diagram.crossing_count();
    let vertex = |t: Option<usize>| t.map(|t| p.vertex_of(kind, t));
    let moves = free
        .iter()
        .map(|&v| {
            let set = (0..n)
                .filter(|&c| {
                    let [over, under] = d.owners(c);
                    vertex(under) == Some(v) && vertex(over) != Some(v)
                })
                .collect();
            (format!("type-II V{v}"), set)
        })
        .collect();
    GeneratedScheme::build(&d, moves)
}

/// The `in` and `out` moves for vertex `v` of Γ on a genus-1 bottom stage.
///
/// Every clasp between a tip of `v` and a tip outside `v` has one pass where
/// the left tip's bundle runs over the other. Switching that pass unclasps.
/// `in` takes the crossings of those passes where `v`'s strand lies on the
/// outer edge of its half's band, `out` the ones on the inner edge.
pub fn generate_inout(p: &EmbeddedGropePresentation, v: usize) -> Result<GeneratedScheme, ConstructError> {
    let GropeSpec::Stage(pairs) = p.spec() else { unreachable!("presentations have a bottom stage") };
    if pairs.len() != 1 {
        return Err(ConstructError::BottomStageNotGenusOne(pairs.len()));
    }
    let group = p.grouping().groups.get(v).ok_or_else(|| ConstructError::NoSuchTarget(format!("V{v}")))?;
    if p.decorated_graph(GraphKind::Gamma).is_marked(v) {
        return Err(ConstructError::VertexMarked(v));
    }
    let side = match group.iter().next().and_then(TipPath::half) {
        Some((_, side)) => side,
        None => return Err(ConstructError::NoSuchTarget(format!("V{v}"))),
    };
    let d = draw_boundary(p)?;
    let edge = |outer: bool| -> BTreeSet<(usize, bool)> {
        d.band_edge(side, outer).iter().map(|q| (q.crossing, q.over)).collect()
    };
    let (outer, inner) = (edge(true), edge(false));
    let tips: BTreeSet<usize> = group.iter().map(|tp| p.tip_index(tp).expect("grouped tips exist")).collect();
    let mine = |t: Option<usize>| t.is_some_and(|t| tips.contains(&t));
    let (mut ins, mut outs) = (BTreeSet::new(), BTreeSet::new());
    for (e, ev) in p.events().iter().enumerate() {
        let LayoutEvent::Clasp { a, b, sign } = ev else { continue };
        let (x, y) = (p.tip_index(a).expect("validated"), p.tip_index(b).expect("validated"));
        if mine(Some(x)) == mine(Some(y)) {
            continue;
        }
        // pass 1 has `a` over for a positive clasp
        let pass = if (*sign == Sign::Pos) == (x < y) { 1 } else { 2 };
        for &c in &d.event_grids(e).expect("every event is drawn")[pass] {
            let [over, _] = d.owners(c);
            let key = (c, mine(over));
            if outer.contains(&key) {
                ins.insert(c);
            } else if inner.contains(&key) {
                outs.insert(c);
            }
        }
    }
    GeneratedScheme::build(&d, alloc::vec![(format!("in V{v}"), ins), (format!("out V{v}"), outs)])
}

//! Embedded gropes in standard position, their boundary knots and move
//! schemes.
//!
//! A presentation is a grope shape plus an ordered list of layout events on
//! its tips (the circles at the top of the tree). With no events the drawing
//! is the standard unknotted model.

mod draw;
mod moves;
mod sharp;

use alloc::collections::BTreeMap;
use alloc::format;
use alloc::string::{String, ToString};
use alloc::vec::Vec;
use core::fmt;
use core::str::FromStr;

pub use draw::{draw_boundary, draw_resolutions, draw_sub_boundary, BoundaryDrawing, EventGrids};
pub use moves::{generate_inout, generate_type_i, generate_type_ii, GeneratedScheme};
pub use sharp::{build_sharp_example, generate_xyz, RelinkTorus, SharpExample};

use crate::diagram::{DiagramError, LinkDiagram, Sign};
use crate::grope::{CoreGrouping, DecoratedGraph, GropeSpec, TipPath};
use crate::scheme::SchemeError;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum ConstructError {
    #[error("invalid presentation: {0}")]
    InvalidPresentation(String),
    #[error("no such target: {0}")]
    NoSuchTarget(String),
    #[error("vertices {0:?} do not form a free set")]
    NotFree(Vec<usize>),
    #[error("bottom stage has genus {0}, expected 1")]
    BottomStageNotGenusOne(usize),
    #[error("vertex {0} is framed linked")]
    VertexMarked(usize),
    #[error("class {0} unsupported; expected 2, 4, 6 or 8")]
    UnsupportedClass(usize),
    #[error("no relink torus {index} (have {count})")]
    NoSuchTorus { index: usize, count: usize },
    #[error("move `{0}` would switch no crossings")]
    EmptyMove(String),
    #[error(transparent)]
    Diagram(#[from] DiagramError),
    #[error(transparent)]
    Scheme(#[from] SchemeError),
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum LayoutEvent {
    /// The bundle of `upper` passes over the bundle of `lower` and back.
    Cross { upper: TipPath, lower: TipPath },
    /// Full twist of one leg of the band.
    Twist { tip: TipPath, sign: Sign },
    /// Clasp between two bands; `Pos` puts `a` over on the first pass.
    Clasp { a: TipPath, b: TipPath, sign: Sign },
}

impl LayoutEvent {
    pub fn tips(&self) -> Vec<&TipPath> {
        match self {
            LayoutEvent::Cross { upper, lower } => alloc::vec![upper, lower],
            LayoutEvent::Twist { tip, .. } => alloc::vec![tip],
            LayoutEvent::Clasp { a, b, .. } => alloc::vec![a, b],
        }
    }
}

impl fmt::Display for LayoutEvent {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            LayoutEvent::Cross { upper, lower } => write!(f, "cross {upper} {lower}"),
            LayoutEvent::Twist { tip, sign } => write!(f, "twist {tip} {}", sign.symbol()),
            LayoutEvent::Clasp { a, b, sign } => write!(f, "clasp {a} {b} {}", sign.symbol()),
        }
    }
}

fn parse_sign(s: &str) -> Option<Sign> {
    match s {
        "+" | "+1" => Some(Sign::Pos),
        "-" | "-1" => Some(Sign::Neg),
        _ => None,
    }
}

impl FromStr for LayoutEvent {
    type Err = ConstructError;

    /// One line of the layout grammar, e.g. `clasp 0.a 0.b +`.
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let bad = || ConstructError::InvalidPresentation(format!("cannot parse event `{s}`"));
        let w: Vec<&str> = s.split_whitespace().collect();
        let tip = |x: &str| x.parse::<TipPath>().map_err(|e| ConstructError::InvalidPresentation(e.to_string()));
        match w.as_slice() {
            ["cross", u, l] => Ok(LayoutEvent::Cross { upper: tip(u)?, lower: tip(l)? }),
            ["twist", t, s] => Ok(LayoutEvent::Twist { tip: tip(t)?, sign: parse_sign(s).ok_or_else(bad)? }),
            ["clasp", a, b, s] => Ok(LayoutEvent::Clasp { a: tip(a)?, b: tip(b)?, sign: parse_sign(s).ok_or_else(bad)? }),
            _ => Err(bad()),
        }
    }
}

/// Which decorated graph: groups of cores, or one vertex per tip.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum GraphKind {
    Gamma,
    GammaTilde,
}

/// An edge or an l-mark of a decorated graph. Edges are stored smaller
/// vertex first.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Target {
    Edge(usize, usize),
    Mark(usize),
}

impl Target {
    pub fn edge(u: usize, v: usize) -> Self {
        Target::Edge(u.min(v), u.max(v))
    }
}

impl fmt::Display for Target {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Target::Edge(u, v) => write!(f, "edge {u}-{v}"),
            Target::Mark(v) => write!(f, "l on {v}"),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct EmbeddedGropePresentation {
    spec: GropeSpec,
    events: Vec<LayoutEvent>,
    height_order: Vec<usize>,
    tips: Vec<TipPath>,
    grouping: CoreGrouping,
}

fn check_stages(g: &GropeSpec) -> bool {
    match g {
        GropeSpec::Leaf => true,
        GropeSpec::Stage(p) => !p.is_empty() && p.iter().all(|(a, b)| check_stages(a) && check_stages(b)),
    }
}

impl EmbeddedGropePresentation {
    /// Validates tips and uses the default stacking, `V_1` on top.
    pub fn new(spec: GropeSpec, events: Vec<LayoutEvent>) -> Result<Self, ConstructError> {
        let invalid = |m: String| ConstructError::InvalidPresentation(m);
        if spec == GropeSpec::Leaf || !check_stages(&spec) {
            return Err(invalid(format!("`{spec}` has an empty stage or no surface")));
        }
        let tips = spec.tips();
        let grouping = spec.group_cores().map_err(|e| invalid(e.to_string()))?;
        for e in &events {
            for t in e.tips() {
                if !tips.contains(t) {
                    return Err(invalid(format!("`{t}` is not a tip of `{spec}`")));
                }
            }
            match e {
                LayoutEvent::Cross { upper, lower } if upper == lower => {
                    return Err(invalid(format!("`{e}` crosses a band with itself")))
                }
                LayoutEvent::Clasp { a, b, .. } if a == b => {
                    return Err(invalid(format!("`{e}` clasps a band with itself")))
                }
                _ => {}
            }
        }
        let height_order = (0..grouping.groups.len()).collect();
        Ok(Self { spec, events, height_order, tips, grouping })
    }

    /// `order[k]` is the group at height `k`, top first.
    pub fn with_height_order(mut self, order: Vec<usize>) -> Result<Self, ConstructError> {
        let mut seen = order.clone();
        seen.sort_unstable();
        if seen != (0..self.grouping.groups.len()).collect::<Vec<_>>() {
            return Err(ConstructError::InvalidPresentation(format!("{order:?} is not a permutation of the groups")));
        }
        self.height_order = order;
        Ok(self)
    }

    pub fn spec(&self) -> &GropeSpec {
        &self.spec
    }

    pub fn events(&self) -> &[LayoutEvent] {
        &self.events
    }

    pub fn height_order(&self) -> &[usize] {
        &self.height_order
    }

    pub fn tips(&self) -> &[TipPath] {
        &self.tips
    }

    pub fn grouping(&self) -> &CoreGrouping {
        &self.grouping
    }

    pub fn class(&self) -> usize {
        self.spec.class()
    }

    pub fn tip_index(&self, t: &TipPath) -> Option<usize> {
        self.tips.iter().position(|x| x == t)
    }

    /// Same shape and stacking, other events.
    pub fn with_events(&self, events: Vec<LayoutEvent>) -> Result<Self, ConstructError> {
        Self::new(self.spec.clone(), events)?.with_height_order(self.height_order.clone())
    }

    fn group(&self, tip: usize) -> usize {
        self.grouping.group_of(&self.tips[tip]).expect("every tip is grouped")
    }

    pub fn vertex_of(&self, kind: GraphKind, tip: usize) -> usize {
        match kind {
            GraphKind::Gamma => self.group(tip),
            GraphKind::GammaTilde => tip,
        }
    }

    pub fn vertex_count(&self, kind: GraphKind) -> usize {
        match kind {
            GraphKind::Gamma => self.grouping.groups.len(),
            GraphKind::GammaTilde => self.tips.len(),
        }
    }

    /// Stacking rank of a tip: its group's height, then its index.
    fn rank(&self, tip: usize) -> (usize, usize) {
        let g = self.group(tip);
        (self.height_order.iter().position(|&x| x == g).expect("permutation"), tip)
    }

    fn idx(&self, t: &TipPath) -> usize {
        self.tip_index(t).expect("validated")
    }

    /// Of two tips, the one that belongs higher in the stack.
    fn higher(&self, x: usize, y: usize) -> usize {
        if self.rank(x) < self.rank(y) {
            x
        } else {
            y
        }
    }

    /// The edge or mark that a crossing or clasp event puts in the graph.
    pub fn event_target(&self, kind: GraphKind, e: usize) -> Option<Target> {
        let (x, y) = match &self.events[e] {
            LayoutEvent::Cross { upper, lower } => {
                let (u, l) = (self.idx(upper), self.idx(lower));
                if self.rank(u) < self.rank(l) {
                    return None;
                }
                (u, l)
            }
            LayoutEvent::Clasp { a, b, .. } => (self.idx(a), self.idx(b)),
            LayoutEvent::Twist { .. } => return None,
        };
        let (vx, vy) = (self.vertex_of(kind, x), self.vertex_of(kind, y));
        Some(if vx == vy { Target::Mark(vx) } else { Target::edge(vx, vy) })
    }

    /// Net full twists per tip.
    pub fn net_twists(&self) -> BTreeMap<usize, i64> {
        let mut net = BTreeMap::new();
        for e in &self.events {
            if let LayoutEvent::Twist { tip, sign } = e {
                *net.entry(self.idx(tip)).or_insert(0) += sign.value();
            }
        }
        net.retain(|_, v| *v != 0);
        net
    }

    pub fn decorated_graph(&self, kind: GraphKind) -> DecoratedGraph {
        let mut g = DecoratedGraph::new(self.vertex_count(kind));
        for e in 0..self.events.len() {
            match self.event_target(kind, e) {
                Some(Target::Edge(u, v)) => g.add_edge(u, v),
                Some(Target::Mark(v)) => g.mark(v),
                None => {}
            }
        }
        for &t in self.net_twists().keys() {
            g.mark(self.vertex_of(kind, t));
        }
        g
    }

    /// The presentation after the type-I move on `target`: offending
    /// crossings put in stacking order, clasps opened to crossings, twists
    /// on marked tips dropped.
    pub fn corrected(&self, kind: GraphKind, target: Target) -> Result<Self, ConstructError> {
        let twisted = self.net_twists();
        let mut events = Vec::new();
        for (e, ev) in self.events.iter().enumerate() {
            let hit = self.event_target(kind, e) == Some(target);
            match ev {
                LayoutEvent::Cross { upper, lower } if hit => {
                    events.push(LayoutEvent::Cross { upper: lower.clone(), lower: upper.clone() })
                }
                LayoutEvent::Clasp { a, b, .. } if hit => {
                    let (x, y) = (self.idx(a), self.idx(b));
                    let top = self.higher(x, y);
                    let bottom = if top == x { y } else { x };
                    events.push(LayoutEvent::Cross { upper: self.tips[top].clone(), lower: self.tips[bottom].clone() });
                }
                LayoutEvent::Twist { tip, .. }
                    if target == Target::Mark(self.vertex_of(kind, self.idx(tip)))
                        && twisted.contains_key(&self.idx(tip)) => {}
                _ => events.push(ev.clone()),
            }
        }
        self.with_events(events)
    }
}

/// Boundary knot of the presentation.
pub fn boundary_knot(p: &EmbeddedGropePresentation) -> Result<LinkDiagram, ConstructError> {
    let d = draw_boundary(p)?.diagram;
    if !d.is_knot() {
        return Err(ConstructError::InvalidPresentation(format!(
            "boundary drew {} components",
            d.component_count()
        )));
    }
    Ok(d)
}

/// `(Γ, Γ̃)`.
pub fn decorated_graphs(p: &EmbeddedGropePresentation) -> (DecoratedGraph, DecoratedGraph) {
    (p.decorated_graph(GraphKind::Gamma), p.decorated_graph(GraphKind::GammaTilde))
}

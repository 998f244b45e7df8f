//! Drawing presentations with the Morse builder.
//!
//! Every band is a bundle of parallel strands. A stage drawn at multiplicity
//! `m` arrives as a left and a right bundle of `m` strands joined by a cap,
//! opens `4g - 1` caps between them to form `4g` legs, crosses the second leg
//! of each dual pair over the third and recurses into each band at
//! multiplicity `2m`. Bands ending in a circle are closed by nested cups,
//! unless an event mentions them: then both legs stay open until the tip's
//! last event has run. Events run in order as soon as all their tips are
//! drawn.

use alloc::vec;
use alloc::vec::Vec;

use super::{ConstructError, EmbeddedGropePresentation, LayoutEvent};
use crate::diagram::{LinkDiagram, Sign};
use crate::grope::{GropeSpec, Side, TipPath};
use crate::morse::{Morse, Passage};

/// Crossings drawn for one event: excursion out, first pass, second pass,
/// excursion back for crossings and clasps; the two half twists for twists.
pub type EventGrids = Vec<Vec<usize>>;

#[derive(Default)]
struct Builder {
    m: Morse,
    tags: Vec<Option<usize>>,
    owners: Vec<[Option<usize>; 2]>,
}

impl Builder {
    fn birth(&mut self, i: usize, tag: Option<usize>) {
        self.m.birth(i);
        self.tags.splice(i..i, [tag, tag]);
    }

    fn death(&mut self, i: usize) {
        self.m.death(i);
        self.tags.drain(i..i + 2);
    }

    fn cross(&mut self, i: usize, left_over: bool) -> usize {
        let (l, r) = (self.tags[i], self.tags[i + 1]);
        self.owners.push(if left_over { [l, r] } else { [r, l] });
        self.tags.swap(i, i + 1);
        self.m.cross(i, left_over)
    }

    /// Moves the `k` strands at `pos` to the right of the `l` strands after them.
    fn bundle_cross(&mut self, pos: usize, k: usize, l: usize, left_over: bool) -> Vec<usize> {
        let mut out = Vec::with_capacity(k * l);
        for r in (0..k).rev() {
            for s in 0..l {
                out.push(self.cross(pos + r + s, left_over));
            }
        }
        out
    }

    /// `m` nested caps opening at `q`.
    fn caps(&mut self, q: usize, m: usize, tag: Option<usize>) {
        for j in 0..m {
            self.birth(q + j, tag);
        }
    }

    /// Closes `[q, q + 2m)` with `m` nested cups.
    fn cups(&mut self, q: usize, m: usize) {
        for j in (0..m).rev() {
            self.death(q + j);
        }
    }

    /// Half twist on `n` strands at `q`.
    fn half_twist(&mut self, q: usize, n: usize, left_over: bool) -> Vec<usize> {
        let mut out = Vec::new();
        for i in 1..n {
            for j in (1..=i).rev() {
                out.push(self.cross(q + j - 1, left_over));
            }
        }
        out
    }

    /// Start and length of the run of positions tagged `tip`.
    fn locate(&self, tip: usize) -> (usize, usize) {
        let start = self.tags.iter().position(|&t| t == Some(tip)).expect("tip is drawn and open");
        let len = self.tags[start..].iter().take_while(|&&t| t == Some(tip)).count();
        (start, len)
    }
}

struct Emitter<'a> {
    pres: &'a EmbeddedGropePresentation,
    /// Selected events, run in this order.
    events: Vec<usize>,
    next: usize,
    pending: Vec<usize>,
    present: Vec<bool>,
    grids: Vec<(usize, EventGrids)>,
    b: Builder,
    plumbing: Vec<(TipPath, Vec<usize>)>,
    root_segments: Vec<usize>,
}

impl<'a> Emitter<'a> {
    fn new(pres: &'a EmbeddedGropePresentation, events: &[usize]) -> Self {
        let mut pending = vec![0; pres.tips().len()];
        for &e in events {
            for t in pres.events()[e].tips() {
                pending[pres.tip_index(t).expect("validated")] += 1;
            }
        }
        Self {
            pres,
            events: events.to_vec(),
            next: 0,
            present: vec![false; pending.len()],
            pending,
            grids: Vec::new(),
            b: Builder::default(),
            plumbing: Vec::new(),
            root_segments: Vec::new(),
        }
    }

    /// Absolute position of a bundle of `len` strands with `r` strands to
    /// its right. Everything right of the drawing cursor is untouched by
    /// events, so right offsets stay valid while tips close on the left.
    fn at(&self, r: usize, len: usize) -> usize {
        self.b.tags.len() - r - len
    }

    /// Draws `g` on the two `m`-bundles whose right end has `r` strands to
    /// its right.
    fn emit(&mut self, g: &GropeSpec, m: usize, r: usize, path: &TipPath) {
        match g {
            GropeSpec::Leaf => {
                let tip = self.pres.tip_index(path).expect("leaf paths are tips");
                if self.pending[tip] == 0 {
                    let p = self.at(r, 2 * m);
                    self.b.cups(p, m);
                } else {
                    self.present[tip] = true;
                    self.run_ready();
                }
            }
            GropeSpec::Stage(pairs) => {
                let legs = 4 * pairs.len();
                let p = self.at(r, 2 * m);
                for k in 0..legs - 1 {
                    self.b.caps(p + m + 2 * m * k, m, None);
                }
                if path.is_empty() {
                    self.root_segments = (0..2 * m * legs).map(|i| self.b.m.segment_at(p + i)).collect();
                }
                for (i, (a, bb)) in pairs.iter().enumerate() {
                    self.pair(a, bb, 2 * m, r + 2 * m * (legs - 4 - 4 * i), path, i);
                }
            }
        }
    }

    /// Legs `a_p, b_p, a_q, b_q` of width `w` with `r` strands to their right.
    fn pair(&mut self, a: &GropeSpec, b: &GropeSpec, w: usize, r: usize, path: &TipPath, i: usize) {
        let pa = path.child(i, Side::A);
        let pb = path.child(i, Side::B);
        let cur = self.at(r, 4 * w);
        for (g, tp, legs) in [(a, &pa, [0, 2]), (b, &pb, [1, 3])] {
            if *g == GropeSpec::Leaf {
                let tip = self.pres.tip_index(tp);
                for leg in legs {
                    for x in 0..w {
                        self.b.tags[cur + leg * w + x] = tip;
                    }
                }
            }
        }
        let grid = self.b.bundle_cross(cur + w, w, w, true);
        self.plumbing.push((pa.clone(), grid));
        self.emit(a, w, r + 2 * w, &pa);
        self.emit(b, w, r, &pb);
    }

    /// Runs events in order while their tips are drawn, then closes tips
    /// with nothing left to do.
    fn run_ready(&mut self) {
        while let Some(&e) = self.events.get(self.next) {
            let ev = &self.pres.events()[e];
            if !ev.tips().iter().all(|t| self.present[self.pres.tip_index(t).expect("validated")]) {
                break;
            }
            let grids = match ev {
                LayoutEvent::Twist { tip, sign } => {
                    let (q, len) = self.b.locate(self.pres.tip_index(tip).expect("validated"));
                    let pos = *sign == Sign::Pos;
                    let first = self.b.half_twist(q, len / 2, pos);
                    let second = self.b.half_twist(q, len / 2, pos);
                    vec![first, second]
                }
                LayoutEvent::Cross { upper, lower } => self.excursion(upper, lower, [true, true]),
                LayoutEvent::Clasp { a, b, sign } => {
                    let first = *sign == Sign::Pos;
                    self.excursion(a, b, [first, !first])
                }
            };
            for t in ev.tips() {
                let i = self.pres.tip_index(t).expect("validated");
                self.pending[i] -= 1;
                if self.pending[i] == 0 {
                    let (q, len) = self.b.locate(i);
                    self.b.cups(q, len / 2);
                    self.present[i] = false;
                }
            }
            self.grids.push((e, grids));
            self.next += 1;
        }
    }

    /// The right leg of the leftmost tip visits the left leg of the other
    /// over everything in between; `x_over[k]` says whether `x` is over on
    /// pass `k`.
    fn excursion(&mut self, x: &TipPath, y: &TipPath, x_over: [bool; 2]) -> EventGrids {
        let (px, lx) = self.b.locate(self.pres.tip_index(x).expect("validated"));
        let (py, ly) = self.b.locate(self.pres.tip_index(y).expect("validated"));
        let (mover_at, mover, target_at, target, mover_over) = if px < py {
            (px + lx / 2, lx / 2, py, ly / 2, x_over)
        } else {
            (py + ly / 2, ly / 2, px, lx / 2, x_over.map(|o| !o))
        };
        let between = target_at - mover_at - mover;
        let out = self.b.bundle_cross(mover_at, mover, between, true);
        let at = target_at - mover;
        let pass1 = self.b.bundle_cross(at, mover, target, mover_over[0]);
        let pass2 = self.b.bundle_cross(at, target, mover, !mover_over[1]);
        let back = self.b.bundle_cross(mover_at, between, mover, false);
        vec![out, pass1, pass2, back]
    }
}

/// A drawn boundary together with the bookkeeping the move generators need.
#[derive(Clone, Debug)]
pub struct BoundaryDrawing {
    pub diagram: LinkDiagram,
    morse: Morse,
    /// Tip index of the over and under strand of every crossing, where the
    /// strand belongs to a band ending in a circle at that point.
    owners: Vec<[Option<usize>; 2]>,
    events: Vec<Option<EventGrids>>,
    plumbing: Vec<(TipPath, Vec<usize>)>,
    root_segments: Vec<usize>,
}

impl BoundaryDrawing {
    pub fn owners(&self, crossing: usize) -> [Option<usize>; 2] {
        self.owners[crossing]
    }

    /// Crossings drawn for event `e`, if it was drawn.
    pub fn event_grids(&self, e: usize) -> Option<&EventGrids> {
        self.events.get(e).and_then(Option::as_ref)
    }

    /// Crossings where the two legs of dual pair `path` cross, keyed by the
    /// a-side path of the pair.
    pub fn plumbing(&self) -> &[(TipPath, Vec<usize>)] {
        &self.plumbing
    }

    /// Passages along one edge of a bottom-stage band of a genus-1 drawing:
    /// the outer edge starts and ends farther from the band's middle.
    pub fn band_edge(&self, side: Side, outer: bool) -> Vec<Passage> {
        let s = &self.root_segments;
        assert_eq!(s.len(), 8, "bottom stage must have genus 1");
        let (from, to) = match (side, outer) {
            (Side::A, true) => (s[0], s[5]),
            (Side::A, false) => (s[1], s[4]),
            (Side::B, true) => (s[2], s[7]),
            (Side::B, false) => (s[3], s[6]),
        };
        self.morse.walk(from, true, to).expect("band edges are open arcs of the knot")
    }
}

fn finish(e: Emitter<'_>) -> Result<BoundaryDrawing, ConstructError> {
    assert_eq!(e.next, e.events.len(), "every event runs once its tips are drawn");
    let diagram = e.b.m.diagram()?;
    let mut events = vec![None; e.pres.events().len()];
    for (i, g) in e.grids {
        events[i] = Some(g);
    }
    Ok(BoundaryDrawing {
        diagram,
        morse: e.b.m,
        owners: e.b.owners,
        events,
        plumbing: e.plumbing,
        root_segments: e.root_segments,
    })
}

/// Boundary of the whole presentation.
pub fn draw_boundary(p: &EmbeddedGropePresentation) -> Result<BoundaryDrawing, ConstructError> {
    let all: Vec<usize> = (0..p.events().len()).collect();
    let mut e = Emitter::new(p, &all);
    e.b.birth(0, None);
    e.emit(p.spec(), 1, 0, &TipPath::root());
    finish(e)
}

/// Events whose tips all lie below `prefix`.
fn events_below(p: &EmbeddedGropePresentation, prefix: &TipPath) -> Vec<usize> {
    (0..p.events().len()).filter(|&i| p.events()[i].tips().iter().all(|t| t.starts_with(prefix))).collect()
}

/// Boundary of the sub-grope at `path`, drawn as its own knot with the
/// events that stay inside it.
pub fn draw_sub_boundary(p: &EmbeddedGropePresentation, path: &TipPath) -> Result<BoundaryDrawing, ConstructError> {
    let g = p
        .spec()
        .get(path)
        .ok_or_else(|| ConstructError::InvalidPresentation(alloc::format!("no sub-grope at {path}")))?;
    let ev = events_below(p, path);
    let mut e = Emitter::new(p, &ev);
    e.b.birth(0, None);
    e.emit(g, 1, 0, path);
    finish(e)
}

/// The two knots obtained from the cores of the genus-1 bottom stage by
/// smoothing their intersection point: feet joined `a_p b_q, b_p a_q` and
/// `a_p b_p, a_q b_q`.
pub fn draw_resolutions(p: &EmbeddedGropePresentation) -> Result<[BoundaryDrawing; 2], ConstructError> {
    let GropeSpec::Stage(pairs) = p.spec() else { unreachable!("presentations have a bottom stage") };
    if pairs.len() != 1 {
        return Err(ConstructError::BottomStageNotGenusOne(pairs.len()));
    }
    let (a, b) = &pairs[0];
    let all: Vec<usize> = (0..p.events().len()).collect();
    let draw = |nested: bool| {
        let mut e = Emitter::new(p, &all);
        e.b.birth(0, None);
        e.b.birth(if nested { 1 } else { 2 }, None);
        e.pair(a, b, 1, 0, &TipPath::root(), 0);
        finish(e)
    };
    Ok([draw(true)?, draw(false)?])
}

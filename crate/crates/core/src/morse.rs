//! Top-to-bottom diagram builder.
//!
//! Strands hang down at positions `0..width`. Caps open two new strands,
//! cups close two neighbours, and a crossing swaps two neighbours. Any
//! sequence that ends at width 0 draws a planar diagram.

use alloc::vec::Vec;

use crate::diagram::{orient, DiagramError, LinkDiagram, UnorientedCrossing};

/// What a segment runs into at one of its two ends.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
enum End {
    Open,
    /// Joined to another segment by a cap (top end) or a cup (bottom end).
    Turn(usize),
    /// Slot of a crossing, in the order TL, TR, BR, BL.
    Crossing(usize, usize),
}

#[derive(Clone, Copy, Debug)]
struct RawCrossing {
    /// Segments at TL, TR, BR, BL.
    segs: [usize; 4],
    left_over: bool,
}

/// One passage of a walk through a crossing.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Passage {
    pub crossing: usize,
    pub over: bool,
}

#[derive(Clone, Debug, Default)]
pub struct Morse {
    positions: Vec<usize>,
    parent: Vec<usize>,
    // [top, bottom] per segment
    ends: Vec<[End; 2]>,
    crossings: Vec<RawCrossing>,
    free_loops: u32,
}

impl Morse {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn width(&self) -> usize {
        self.positions.len()
    }

    pub fn crossing_count(&self) -> usize {
        self.crossings.len()
    }

    fn fresh(&mut self, top: End) -> usize {
        self.parent.push(self.parent.len());
        self.ends.push([top, End::Open]);
        self.parent.len() - 1
    }

    fn find(&mut self, mut x: usize) -> usize {
        while self.parent[x] != x {
            self.parent[x] = self.parent[self.parent[x]];
            x = self.parent[x];
        }
        x
    }

    fn union(&mut self, a: usize, b: usize) -> bool {
        let (a, b) = (self.find(a), self.find(b));
        self.parent[a] = b;
        a != b
    }

    /// Segment currently hanging at `pos`.
    pub fn segment_at(&self, pos: usize) -> usize {
        self.positions[pos]
    }

    /// Opens a cap whose two legs sit at `i` and `i + 1`.
    pub fn birth(&mut self, i: usize) {
        assert!(i <= self.width(), "birth at {i} beyond width {}", self.width());
        let s = self.fresh(End::Open);
        let t = self.fresh(End::Turn(s));
        self.ends[s][0] = End::Turn(t);
        self.union(s, t);
        self.positions.splice(i..i, [s, t]);
    }

    /// Closes strands `i` and `i + 1` with a cup.
    pub fn death(&mut self, i: usize) {
        assert!(i + 1 < self.width(), "death at {i} needs width > {}", i + 1);
        let (a, b) = (self.positions[i], self.positions[i + 1]);
        self.ends[a][1] = End::Turn(b);
        self.ends[b][1] = End::Turn(a);
        if !self.union(a, b) {
            self.free_loops += 1;
        }
        self.positions.drain(i..i + 2);
    }

    /// Crosses strands `i` and `i + 1`; the strand coming from the left passes
    /// over when `left_over`. Returns the crossing index.
    pub fn cross(&mut self, i: usize, left_over: bool) -> usize {
        assert!(i + 1 < self.width(), "crossing at {i} needs width > {}", i + 1);
        let k = self.crossings.len();
        let tl = self.positions[i];
        let tr = self.positions[i + 1];
        let br = self.fresh(End::Crossing(k, 2));
        let bl = self.fresh(End::Crossing(k, 3));
        self.ends[tl][1] = End::Crossing(k, 0);
        self.ends[tr][1] = End::Crossing(k, 1);
        self.positions[i] = bl;
        self.positions[i + 1] = br;
        self.crossings.push(RawCrossing { segs: [tl, tr, br, bl], left_over });
        k
    }

    /// Crossings met walking from segment `from` (downward or upward) until
    /// segment `to` is entered, or `None` if the walk closes up first.
    pub fn walk(&self, from: usize, downward: bool, to: usize) -> Option<Vec<Passage>> {
        let mut out = Vec::new();
        let (mut seg, mut down) = (from, downward);
        for _ in 0..=self.ends.len() {
            match self.ends[seg][usize::from(down)] {
                End::Open => return None,
                End::Turn(o) => {
                    seg = o;
                    down = !down;
                }
                End::Crossing(k, slot) => {
                    let c = &self.crossings[k];
                    // TL <-> BR is the strand that started on the left
                    let left = slot == 0 || slot == 2;
                    out.push(Passage { crossing: k, over: left == c.left_over });
                    seg = c.segs[(slot + 2) % 4];
                }
            }
            if seg == to {
                return Some(out);
            }
            if seg == from {
                return None;
            }
        }
        None
    }

    pub fn finish(self) -> Result<LinkDiagram, DiagramError> {
        self.diagram()
    }

    /// Closes the drawing and also returns the arc label of every segment.
    pub fn finish_labelled(self) -> Result<(LinkDiagram, Vec<u32>), DiagramError> {
        let labels = self.labels();
        Ok((self.diagram()?, labels))
    }

    fn labels(&self) -> Vec<u32> {
        let mut uf = self.parent.clone();
        let mut find = |mut x: usize| {
            while uf[x] != x {
                uf[x] = uf[uf[x]];
                x = uf[x];
            }
            x
        };
        (0..self.parent.len()).map(|s| find(s) as u32 + 1).collect()
    }

    /// The diagram drawn so far, which must be closed. Crossing `i` of the
    /// result is the `i`-th call to [`Morse::cross`].
    pub fn diagram(&self) -> Result<LinkDiagram, DiagramError> {
        assert!(self.positions.is_empty(), "{} strands left open", self.width());
        if self.crossings.is_empty() && self.free_loops == 0 {
            return Err(DiagramError::Empty);
        }
        let labels = self.labels();
        let un: Vec<UnorientedCrossing> = self
            .crossings
            .iter()
            .map(|c| {
                let [tl, tr, br, bl] = c.segs.map(|s| labels[s]);
                // under strand at slots 0 and 2
                let slots = if c.left_over { [tr, br, bl, tl] } else { [tl, tr, br, bl] };
                UnorientedCrossing { slots }
            })
            .collect();
        orient(&un, self.free_loops)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn closed_braid_trefoil() {
        let mut m = Morse::new();
        m.birth(0);
        m.birth(1);
        for _ in 0..3 {
            m.cross(2, true);
        }
        m.death(1);
        m.death(0);
        let d = m.finish().unwrap();
        assert_eq!(d.crossing_count(), 3);
        assert!(d.is_knot());
        assert_eq!(d.writhe().abs(), 3);
    }

    #[test]
    fn walk_round_a_trefoil() {
        let mut m = Morse::new();
        m.birth(0);
        let (s, t) = (m.segment_at(0), m.segment_at(1));
        m.birth(1);
        for _ in 0..3 {
            m.cross(2, true);
        }
        m.death(1);
        m.death(0);
        let walk = m.walk(s, true, t).unwrap();
        assert_eq!(walk.len(), 6);
        assert_eq!(walk.iter().filter(|p| p.over).count(), 3);
        // alternating
        assert!(walk.windows(2).all(|w| w[0].over != w[1].over));
    }

    #[test]
    fn free_loop_from_cap_and_cup() {
        let mut m = Morse::new();
        m.birth(0);
        m.death(0);
        let d = m.finish().unwrap();
        assert_eq!(d, LinkDiagram::unknot());
    }

    #[test]
    fn kink() {
        let mut m = Morse::new();
        m.birth(0);
        m.birth(1);
        m.cross(0, true);
        m.death(1);
        m.death(0);
        let d = m.finish().unwrap();
        assert!(d.is_knot());
        assert_eq!(d.crossing_count(), 1);
    }
}

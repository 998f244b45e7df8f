//! Candidate sharpness witnesses.
//!
//! The family starts from a genus-1 surface whose two bands are clasped. Each
//! step pushes the current grope onto the a-side of a new genus-1 bottom
//! stage, deletes one clasp between two bands and relinks those bands through
//! a new torus on the b-side: each band clasps one of the torus's bands.

use alloc::format;
use alloc::vec;
use alloc::vec::Vec;

use super::{draw_boundary, ConstructError, EmbeddedGropePresentation, GeneratedScheme, LayoutEvent};
use crate::diagram::Sign;
use crate::grope::{GropeSpec, Side, TipPath};

/// A torus added to relink two bands.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RelinkTorus {
    /// Where the torus sits; its bands are `stage.0.a` and `stage.0.b`.
    pub stage: TipPath,
    /// Events clasping the torus's a-band and b-band to the relinked bands.
    pub clasps: [usize; 2],
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SharpExample {
    pub presentation: EmbeddedGropePresentation,
    pub tori: Vec<RelinkTorus>,
}

fn under(prefix: &TipPath, t: &TipPath) -> TipPath {
    TipPath(prefix.0.iter().chain(&t.0).copied().collect())
}

fn shift(prefix: &TipPath, e: &LayoutEvent) -> LayoutEvent {
    match e {
        LayoutEvent::Cross { upper, lower } => LayoutEvent::Cross { upper: under(prefix, upper), lower: under(prefix, lower) },
        LayoutEvent::Twist { tip, sign } => LayoutEvent::Twist { tip: under(prefix, tip), sign: *sign },
        LayoutEvent::Clasp { a, b, sign } => LayoutEvent::Clasp { a: under(prefix, a), b: under(prefix, b), sign: *sign },
    }
}

/// A class-`n` member of the family. `seed` picks which clasp is relinked
/// when there is a choice.
pub fn build_sharp_example(n: usize, seed: u64) -> Result<SharpExample, ConstructError> {
    if !matches!(n, 2 | 4 | 6 | 8) {
        return Err(ConstructError::UnsupportedClass(n));
    }
    let a = |s: &str| s.parse::<TipPath>().expect("literal path");
    let mut spec = GropeSpec::surface();
    let mut events = vec![LayoutEvent::Clasp { a: a("0.a"), b: a("0.b"), sign: Sign::Pos }];
    let mut tori: Vec<RelinkTorus> = Vec::new();
    let left = TipPath::root().child(0, Side::A);
    let right = TipPath::root().child(0, Side::B);
    for step in 1..n / 2 {
        spec = GropeSpec::Stage(vec![(spec, GropeSpec::surface())]);
        let mut shifted: Vec<LayoutEvent> = events.iter().map(|e| shift(&left, e)).collect();
        for t in &mut tori {
            t.stage = under(&left, &t.stage);
        }
        let clasps: Vec<usize> = (0..shifted.len()).filter(|&i| matches!(shifted[i], LayoutEvent::Clasp { .. })).collect();
        let pick = clasps[(seed.wrapping_add(step as u64) % clasps.len() as u64) as usize];
        let LayoutEvent::Clasp { a: u, b: v, .. } = shifted.remove(pick) else { unreachable!("picked a clasp") };
        for t in &mut tori {
            for c in &mut t.clasps {
                if *c > pick {
                    *c -= 1;
                }
            }
        }
        let k = shifted.len();
        shifted.push(LayoutEvent::Clasp { a: u, b: right.child(0, Side::A), sign: Sign::Pos });
        shifted.push(LayoutEvent::Clasp { a: v, b: right.child(0, Side::B), sign: Sign::Pos });
        tori.push(RelinkTorus { stage: right.clone(), clasps: [k, k + 1] });
        events = shifted;
    }
    let presentation = EmbeddedGropePresentation::new(spec, events)?;
    debug_assert_eq!(presentation.class(), n);
    Ok(SharpExample { presentation, tori })
}

/// The `x`, `y` and `z` moves of one relink torus: `x` and `y` switch the
/// first pass of the clasps on the torus's a-band and b-band, `z` switches
/// the second pass of both. Any subset except all three frees a torus band.
/// All three together flip both clasps instead.
pub fn generate_xyz(ex: &SharpExample, torus: usize) -> Result<GeneratedScheme, ConstructError> {
    let t = ex.tori.get(torus).ok_or(ConstructError::NoSuchTorus { index: torus, count: ex.tori.len() })?;
    let d = draw_boundary(&ex.presentation)?;
    let pass = |e: usize, k: usize| -> Vec<usize> { d.event_grids(e).expect("every event is drawn")[k].clone() };
    let z: Vec<usize> = t.clasps.iter().flat_map(|&e| pass(e, 2)).collect();
    GeneratedScheme::build(
        &d,
        vec![
            (format!("x {}", t.stage), pass(t.clasps[0], 1).into_iter().collect()),
            (format!("y {}", t.stage), pass(t.clasps[1], 1).into_iter().collect()),
            (format!("z {}", t.stage), z.into_iter().collect()),
        ],
    )
}

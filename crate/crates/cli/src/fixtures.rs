//! Fixtures compiled into the binary.

use grope_core::construct::EmbeddedGropePresentation;
use grope_core::diagram::LinkDiagram;
use grope_core::morse::Morse;

use crate::formats::{parse_grope_spec, parse_layout, parse_pd};

macro_rules! grope {
    ($name:literal) => {
        (
            $name,
            include_str!(concat!("../fixtures/gropes/", $name, ".grope")),
            include_str!(concat!("../fixtures/gropes/", $name, ".layout")),
        )
    };
}

/// (name, spec text, layout text); the name starts with `c<class>`.
pub const GROPES: &[(&str, &str, &str)] = &[
    grope!("c2-twist"),
    grope!("c2-clasp"),
    grope!("c2-genus2"),
    grope!("c3-clasp"),
    grope!("c3-knotted-half"),
    grope!("c3-twist"),
    grope!("c4-apart"),
    grope!("c4-knotted"),
    grope!("c4-relink"),
    grope!("c5-mixed"),
    grope!("c5-clasps"),
    grope!("c5-twists"),
];

/// Genus-1 bottom stage whose two halves carry non-adjacent groups.
pub const COMPOSITE: &str = "c4-apart";

pub fn presentation(name: &str) -> EmbeddedGropePresentation {
    let &(_, spec, layout) = GROPES.iter().find(|g| g.0 == name).unwrap_or_else(|| panic!("no fixture {name}"));
    let spec = parse_grope_spec(spec).expect("bundled spec parses");
    EmbeddedGropePresentation::new(spec, parse_layout(layout).expect("bundled layout parses")).expect("bundled layout is valid")
}

pub fn presentations() -> Vec<(&'static str, EmbeddedGropePresentation)> {
    GROPES.iter().map(|g| (g.0, presentation(g.0))).collect()
}

pub const DIAGRAMS: &[(&str, &str)] = &[
    ("unknot", include_str!("../fixtures/diagrams/unknot.pd")),
    ("kink", include_str!("../fixtures/diagrams/kink.pd")),
    ("trefoil", include_str!("../fixtures/diagrams/trefoil.pd")),
    ("figure-eight", include_str!("../fixtures/diagrams/figure-eight.pd")),
    ("torus-3-14", include_str!("../fixtures/diagrams/torus-3-14.pd")),
    ("skein-1", include_str!("../fixtures/diagrams/skein-1.pd")),
    ("skein-2", include_str!("../fixtures/diagrams/skein-2.pd")),
    ("skein-3", include_str!("../fixtures/diagrams/skein-3.pd")),
];

pub fn diagram(name: &str) -> LinkDiagram {
    let text = DIAGRAMS.iter().find(|d| d.0 == name).unwrap_or_else(|| panic!("no fixture {name}")).1;
    parse_pd(text).expect("bundled diagram parses")
}

/// Closure of the 3-braid `(s1 s2)^k`, the torus-pattern family whose
/// 28-crossing member is bundled.
pub fn torus_braid(k: usize) -> LinkDiagram {
    let mut m = Morse::new();
    m.birth(0);
    m.birth(1);
    m.birth(2);
    // strands 0..3 go down through the braid, 3..6 come back up
    for _ in 0..k {
        m.cross(0, true);
        m.cross(1, true);
    }
    m.death(2);
    m.death(1);
    m.death(0);
    m.diagram().expect("closed braid")
}

/// A diagram `L` with writhe 0 and a crossing whose smoothings `H`, `Ĥ`
/// have writhe 1 and -1.
pub const SKEIN_PINNED: &[(&str, usize)] = &[("skein-1", 1), ("skein-2", 3), ("skein-3", 1)];

#[cfg(test)]
mod tests {
    use super::*;
    use grope_core::bracket::skein_resolve;

    #[test]
    fn everything_loads() {
        for (name, p) in presentations() {
            let class: usize = name[1..2].parse().unwrap();
            assert_eq!(p.class(), class, "{name}");
        }
        for (name, _) in DIAGRAMS {
            diagram(name);
        }
    }

    #[test]
    fn torus_family_matches_the_bundled_member() {
        assert_eq!(diagram("torus-3-14"), torus_braid(14).canonical());
        // (s1 s2)^2 closes to a trefoil
        let j = grope_core::bracket::jones(&torus_braid(2)).unwrap();
        assert_eq!(j, grope_core::bracket::jones(&diagram("trefoil").mirror()).unwrap());
    }

    #[test]
    fn skein_fixtures_are_pinned() {
        for &(name, i) in SKEIN_PINNED {
            let d = diagram(name);
            let s = skein_resolve(&d, i).unwrap();
            assert_eq!((d.writhe(), s.h.writhe(), s.h_hat.writhe()), (0, 1, -1), "{name}");
        }
    }
}

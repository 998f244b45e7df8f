use std::collections::BTreeSet;

use grope_core::bracket::{jones, jones_derivatives_at_one};
use grope_core::construct::*;
use grope_core::diagram::{LinkDiagram, Sign};
use grope_core::grope::{GropeSpec, TipPath};
use grope_core::laurent::ExactRational;

fn t(s: &str) -> TipPath {
    s.parse().unwrap()
}

fn clasp(a: &str, b: &str, sign: Sign) -> LayoutEvent {
    LayoutEvent::Clasp { a: t(a), b: t(b), sign }
}

fn s2() -> GropeSpec {
    GropeSpec::surface()
}

fn c3() -> GropeSpec {
    GropeSpec::Stage(vec![(s2(), GropeSpec::Leaf)])
}

fn c4() -> GropeSpec {
    GropeSpec::Stage(vec![(s2(), s2())])
}

fn derivs(d: &LinkDiagram, k: u32) -> Vec<ExactRational> {
    jones_derivatives_at_one(d, k).unwrap()
}

fn ints(v: &[i64]) -> Vec<ExactRational> {
    v.iter().map(|&n| ExactRational::integer(n)).collect()
}

fn all_subsets(s: &grope_core::scheme::Scheme) -> impl Iterator<Item = Vec<usize>> + '_ {
    (1..1usize << s.len()).map(|m| (0..s.len()).filter(|i| m >> i & 1 == 1).collect())
}

#[test]
fn empty_layouts_bound_unknots() {
    for spec in [s2(), GropeSpec::surface_of_genus(2), c3(), c4(), GropeSpec::Stage(vec![(c3(), s2())])] {
        let p = EmbeddedGropePresentation::new(spec.clone(), vec![]).unwrap();
        let d = boundary_knot(&p).unwrap();
        assert!(jones(&d).unwrap().is_one(), "{spec:?}");
        let (g, gt) = decorated_graphs(&p);
        assert_eq!(g.edge_count() + gt.edge_count(), 0);
    }
}

#[test]
fn twisted_and_clasped_surfaces() {
    let twist = |tip: &str| LayoutEvent::Twist { tip: t(tip), sign: Sign::Pos };
    let p = EmbeddedGropePresentation::new(s2(), vec![twist("0.a"), twist("0.b")]).unwrap();
    assert_eq!(derivs(&boundary_knot(&p).unwrap(), 2), ints(&[1, 0, -6]));

    let p = EmbeddedGropePresentation::new(s2(), vec![clasp("0.a", "0.b", Sign::Pos)]).unwrap();
    assert_eq!(derivs(&boundary_knot(&p).unwrap(), 2)[2], ExactRational::integer(12));

    // class 3: invisible to the first two derivatives
    let p = EmbeddedGropePresentation::new(c3(), vec![clasp("0.a.0.a", "0.b", Sign::Pos), clasp("0.a.0.b", "0.b", Sign::Neg)])
        .unwrap();
    assert_eq!(derivs(&boundary_knot(&p).unwrap(), 3), ints(&[1, 0, 0, -72]));
}

#[test]
fn unknown_tips_are_rejected() {
    let r = EmbeddedGropePresentation::new(s2(), vec![clasp("0.a", "0.a.0.b", Sign::Pos)]);
    assert!(r.is_err());
}

#[test]
fn type_one_matches_corrected_presentation() {
    // a Cross drawn against the stacking order
    let p = EmbeddedGropePresentation::new(
        c4(),
        vec![
            LayoutEvent::Cross { upper: t("0.b.0.a"), lower: t("0.a.0.a") },
            clasp("0.a.0.b", "0.b.0.b", Sign::Pos),
        ],
    )
    .unwrap();
    for kind in [GraphKind::Gamma, GraphKind::GammaTilde] {
        let g = p.decorated_graph(kind);
        let targets: Vec<Target> = g.edges().map(|(u, v)| Target::edge(u, v)).collect();
        assert!(!targets.is_empty());
        let s = generate_type_i(&p, kind, &targets).unwrap();
        for (i, &target) in targets.iter().enumerate() {
            let fixed = p.corrected(kind, target).unwrap();
            assert_eq!(fixed.decorated_graph(kind).complexity() + 1, g.complexity());
            let applied = s.scheme.apply_subset(&[i]).unwrap();
            assert_eq!(jones(&applied).unwrap(), jones(&boundary_knot(&fixed).unwrap()).unwrap(), "{target}");
        }
    }
}

#[test]
fn type_one_rejects_absent_targets() {
    let p = EmbeddedGropePresentation::new(s2(), vec![]).unwrap();
    assert!(matches!(generate_type_i(&p, GraphKind::Gamma, &[Target::edge(0, 1)]), Err(ConstructError::NoSuchTarget(_))));
}

#[test]
fn type_two_subsets_unknot() {
    let p = EmbeddedGropePresentation::new(
        c4(),
        vec![clasp("0.a.0.a", "0.b.0.a", Sign::Pos), clasp("0.a.0.b", "0.b.0.b", Sign::Neg)],
    )
    .unwrap();
    let g = p.decorated_graph(GraphKind::Gamma);
    let free: Vec<usize> = (0..g.vertex_count()).filter(|&v| g.is_free_set(&[v])).take(2).collect();
    assert_eq!(free.len(), 2);
    assert!(g.is_free_set(&free));
    let s = generate_type_ii(&p, GraphKind::Gamma, &free).unwrap();
    for sigma in all_subsets(&s.scheme) {
        assert!(jones(&s.scheme.apply_subset(&sigma).unwrap()).unwrap().is_one(), "{sigma:?}");
    }

    let none = generate_type_ii(&p, GraphKind::Gamma, &[]).unwrap();
    assert!(none.scheme.is_empty());
}

#[test]
fn type_two_rejects_adjacent_vertices() {
    let p = EmbeddedGropePresentation::new(c4(), vec![clasp("0.a.0.a", "0.b.0.a", Sign::Pos)]).unwrap();
    let g = p.decorated_graph(GraphKind::Gamma);
    let (u, v) = g.edges().next().unwrap();
    assert!(matches!(generate_type_ii(&p, GraphKind::Gamma, &[u, v]), Err(ConstructError::NotFree(_))));
}

#[test]
fn in_out_on_a_knotted_half() {
    // the a-half is knotted on its own and clasps the b-half once
    let p = EmbeddedGropePresentation::new(
        c3(),
        vec![clasp("0.a.0.a", "0.a.0.b", Sign::Pos), clasp("0.a.0.a", "0.b", Sign::Pos)],
    )
    .unwrap();
    let gamma = p.decorated_graph(GraphKind::Gamma);
    let v = (0..gamma.vertex_count())
        .find(|&v| !gamma.is_marked(v) && p.grouping().groups[v].iter().all(|tip| tip.starts_with(&t("0.a"))))
        .unwrap();
    let s = generate_inout(&p, v).unwrap();
    assert_eq!(s.labels, [format!("in V{v}"), format!("out V{v}")]);
    let half = jones(&draw_sub_boundary(&p, &t("0.a")).unwrap().diagram).unwrap();
    assert!(!half.is_one());
    assert_eq!(jones(&s.scheme.apply_subset(&[0]).unwrap()).unwrap(), half);
    assert!(jones(&s.scheme.apply_subset(&[0, 1]).unwrap()).unwrap().is_one());
}

#[test]
fn in_out_moves_are_disjoint_across_halves() {
    let p = EmbeddedGropePresentation::new(
        c4(),
        vec![
            clasp("0.a.0.a", "0.a.0.b", Sign::Pos),
            clasp("0.a.0.a", "0.b.0.a", Sign::Pos),
            clasp("0.b.0.a", "0.b.0.b", Sign::Neg),
        ],
    )
    .unwrap();
    let gamma = p.decorated_graph(GraphKind::Gamma);
    let in_half = |h: &str| -> Vec<usize> {
        (0..gamma.vertex_count())
            .filter(|&v| !gamma.is_marked(v) && p.grouping().groups[v].iter().all(|tip| tip.starts_with(&t(h))))
            .collect()
    };
    let (x, y) = in_half("0.a")
        .into_iter()
        .flat_map(|x| in_half("0.b").into_iter().map(move |y| (x, y)))
        .find(|&(x, y)| !gamma.edges().any(|e| e == (x.min(y), x.max(y))))
        .unwrap();
    let sx = generate_inout(&p, x).unwrap();
    let sy = generate_inout(&p, y).unwrap();
    let both = sx.merge(&sy).unwrap();
    assert_eq!(both.scheme.len(), 4);
    let crossings: Vec<BTreeSet<usize>> =
        both.scheme.moves().iter().map(|m| m.crossings().iter().copied().collect()).collect();
    for i in 0..4 {
        for j in i + 1..4 {
            assert!(crossings[i].is_disjoint(&crossings[j]));
        }
    }
    // one half pulled fully off leaves an unknot
    for pair in [[0, 1], [2, 3]] {
        assert!(jones(&both.scheme.apply_subset(&pair).unwrap()).unwrap().is_one());
    }
}

#[test]
fn in_out_needs_genus_one_bottom() {
    let p = EmbeddedGropePresentation::new(GropeSpec::surface_of_genus(2), vec![]).unwrap();
    assert!(matches!(generate_inout(&p, 0), Err(ConstructError::BottomStageNotGenusOne(2))));
}

#[test]
fn sharp_family() {
    assert!(matches!(build_sharp_example(3, 0), Err(ConstructError::UnsupportedClass(3))));
    let ex = build_sharp_example(2, 0).unwrap();
    assert_eq!(ex.presentation.class(), 2);
    assert!(ex.tori.is_empty());

    let ex = build_sharp_example(4, 0).unwrap();
    assert_eq!(ex.presentation.class(), 4);
    assert_eq!(ex.tori.len(), 1);
    let s = generate_xyz(&ex, 0).unwrap();
    // x or y alone frees a torus band
    for sigma in [[0], [1]] {
        assert!(jones(&s.scheme.apply_subset(&sigma).unwrap()).unwrap().is_one());
    }
    assert!(matches!(generate_xyz(&ex, 1), Err(ConstructError::NoSuchTorus { .. })));
}

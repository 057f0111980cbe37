use std::collections::BTreeMap;

use num_traits::Zero;
use proptest::prelude::*;

use super::*;
use crate::constructions::{annulus_chain, lekili_lisca_movie, theorem3_disc};
use crate::mcg::{OpenBook, TwistWord};
use crate::movie::{build_movie, compile_foliation, EllipticPoint, Leaf, Page};
use crate::surface::{EmbeddedArc, PlanarSurface};

fn product(holes: usize) -> FoliationComplex {
    let s = PlanarSurface::new(holes);
    let book = OpenBook::planar(s, BTreeMap::new(), TwistWord::identity()).unwrap();
    let mut elliptic = Vec::new();
    let mut leaves = Vec::new();
    for j in 1..=holes {
        let p = BoundaryPoint::new(0, s.foot(j) - Rational64::new(1, 8 * (holes as i64 + 1)));
        let n = BoundaryPoint::at(j, 1, 2);
        elliptic.push(EllipticPoint { id: elliptic.len(), sign: Sign::Positive, point: p });
        elliptic.push(EllipticPoint { id: elliptic.len(), sign: Sign::Negative, point: n });
        leaves.push(Leaf::b(leaves.len(), &EmbeddedArc::new(&s, p, n, vec![]).unwrap()));
    }
    let m = build_movie(book, Page { t: Rational64::zero(), elliptic, leaves }, vec![]).unwrap();
    compile_foliation(&m).unwrap()
}

fn a_product() -> FoliationComplex {
    let s = PlanarSurface::new(1);
    let book = OpenBook::planar(s, BTreeMap::new(), TwistWord::identity()).unwrap();
    let p = BoundaryPoint::at(0, 1, 4);
    let page = Page {
        t: Rational64::zero(),
        elliptic: vec![EllipticPoint { id: 0, sign: Sign::Positive, point: p }],
        leaves: vec![Leaf::a(0, p)],
    };
    compile_foliation(&build_movie(book, page, vec![]).unwrap()).unwrap()
}

#[test]
fn swept_b_leaf_is_a_sphere() {
    let f = product(1);
    assert_eq!(f.counts(), Counts { e_plus: 1, e_minus: 1, h_plus: 0, h_minus: 0 });
    assert_eq!(f.euler_characteristic, 2);
    assert!(!f.is_disc());
}

#[test]
fn product_disc_has_no_positive_circle() {
    let f = a_product();
    assert_eq!(f.euler_characteristic, 1);
    assert!(f.is_disc());
    let r = check_transverse_ot_disc(&f);
    assert!(!r.cond1.passed);
    assert!(!r.cond2.passed);
    assert_eq!(r.cond2.detail, "G_{++} has no edges");
    assert!(r.cond3.passed);
    assert_eq!(r.verdict(), "conditions-failed: (1),(2)");
}

#[test]
fn isolated_negative_points_are_fake() {
    let f = product(2);
    let gm = region_graph(&f, Sign::Negative);
    assert_eq!((gm.vertices.len(), gm.edges.len()), (2, 0));
    let r = check_transverse_ot_disc(&f);
    assert!(!r.cond1.passed);
    assert!(!f.is_disc(), "{}", r.topology);
}

#[test]
fn family_graphs() {
    let f = compile_foliation(&lekili_lisca_movie(1, 1, 1).unwrap()).unwrap();
    let gm = region_graph(&f, Sign::Negative);
    assert_eq!((gm.vertices.len(), gm.edges.len()), (2, 1));
    let gp = region_graph(&f, Sign::Positive);
    assert_eq!((gp.vertices.len(), gp.edges.len()), (5, 5));
    assert!(gp.is_connected());
    let r = check_transverse_ot_disc(&f);
    assert!(r.cond2.detail.starts_with("cycle p"), "{}", r.cond2.detail);
}

#[test]
fn dot_lists_every_edge() {
    let f = compile_foliation(&lekili_lisca_movie(1, 1, 1).unwrap()).unwrap();
    let dot = to_dot(&f, Sign::Positive);
    assert!(dot.starts_with("graph G_pp {"));
    assert_eq!(dot.matches(" -- ").count(), 5);
    let dot = to_dot(&f, Sign::Negative);
    assert!(dot.starts_with("graph G_mm {"));
    assert!(dot.contains("node [shape=box]"));
    assert!(dot.trim_end().ends_with('}'));
}

#[test]
fn compilation_is_deterministic() {
    let m = lekili_lisca_movie(2, 2, 1).unwrap();
    let a = compile_foliation(&m).unwrap();
    let b = compile_foliation(&m.clone()).unwrap();
    assert_eq!(serde_json::to_string(&a).unwrap(), serde_json::to_string(&b).unwrap());
    assert_eq!(to_svg(&a), to_svg(&b));
    assert_eq!(to_dot(&a, Sign::Positive), to_dot(&b, Sign::Positive));
}

#[test]
fn svg_draws_every_singular_point() {
    let f = compile_foliation(&lekili_lisca_movie(1, 2, 1).unwrap()).unwrap();
    let svg = to_svg(&f);
    assert!(svg.starts_with("<?xml"));
    assert_eq!(svg.matches("<rect").count(), f.hyperbolic.len());
    assert_eq!(svg.matches("<circle").count(), f.elliptic.len() + 1);
}

#[test]
fn bb_pair_needs_a_b_family() {
    let (ob, chain) = annulus_chain(2).unwrap();
    let f = compile_foliation(&theorem3_disc(&chain, &ob).unwrap()).unwrap();
    let a_family = f.families.iter().position(|fam| fam.a_leaf).unwrap();
    assert!(insert_bb_pair(&f, a_family).is_err());
    assert!(insert_bb_pair(&f, f.families.len()).is_err());
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(16))]

    #[test]
    fn cell_count_matches_singularity_count(h in 1i32..4, i in 1i32..4, k in 1i32..4) {
        let f = compile_foliation(&lekili_lisca_movie(h, i, k).unwrap()).unwrap();
        prop_assert_eq!(f.euler_characteristic, euler_count(&f));
        prop_assert!(f.is_disc());
    }

    #[test]
    fn chain_discs_are_wheels(k in 1usize..9) {
        let (ob, chain) = annulus_chain(k).unwrap();
        let f = compile_foliation(&theorem3_disc(&chain, &ob).unwrap()).unwrap();
        prop_assert_eq!(f.counts().euler(), 1);
        prop_assert_eq!(region_graph(&f, Sign::Positive).edges.len(), k);
    }
}

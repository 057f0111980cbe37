use std::collections::BTreeMap;
use std::time::Instant;

use super::*;
use crate::mcg::{four_holed_sphere_curves, TwistWord};
use crate::surface::{Letter, SimpleClosedCurve};

fn q(b: usize, n: i64, d: i64) -> BoundaryPoint {
    BoundaryPoint::at(b, n, d)
}

fn annulus(power: i32) -> OpenBook {
    let s = PlanarSurface::new(1);
    let mut curves = BTreeMap::new();
    curves.insert("core".to_string(), SimpleClosedCurve::boundary_curve(&s, 1).unwrap());
    OpenBook::planar(s, curves, TwistWord::twist("core", power)).unwrap()
}

fn sphere(word: TwistWord) -> OpenBook {
    let (s, mut curves) = four_holed_sphere_curves();
    curves.insert("x12".into(), SimpleClosedCurve::new(&s, vec![Letter::plus(1), Letter::plus(2)]).unwrap());
    OpenBook::planar(s, curves, word).unwrap()
}

#[test]
fn negative_twist_has_spanning_witness() {
    let ob = annulus(-1);
    let w = find_nrv_witness(&ob, 4).unwrap().expect("witness");
    assert_eq!(w, EmbeddedArc::raw(q(0, 0, 1), q(1, 1, 2), vec![]));
    assert!(!is_right_veering_on(&ob, &w).unwrap());
}

#[test]
fn positive_twists_have_no_witness() {
    for p in 0..=3 {
        assert_eq!(find_nrv_witness(&annulus(p), 8).unwrap(), None, "power {p}");
    }
}

#[test]
fn identity_on_sphere_is_fast() {
    let t = Instant::now();
    assert_eq!(find_nrv_witness(&sphere(TwistWord::identity()), 8).unwrap(), None);
    assert!(t.elapsed().as_secs_f64() < 5.0);
}

#[test]
fn side_compare_is_antisymmetric() {
    let s = PlanarSurface::new(1);
    let a = EmbeddedArc::raw(q(0, 0, 1), q(1, 1, 2), vec![]);
    let b = EmbeddedArc::raw(q(0, 0, 1), q(1, 1, 2), vec![Letter::plus(1)]);
    assert_eq!(side_compare(&s, &a, &b).unwrap(), SideComparison::StrictlyRight);
    assert_eq!(side_compare(&s, &b, &a).unwrap(), SideComparison::StrictlyLeft);
    assert_eq!(side_compare(&s, &a, &a).unwrap(), SideComparison::Isotopic);
}

#[test]
fn disjoint_image_gives_short_chain() {
    let ob = annulus(-1);
    let w = find_nrv_witness(&ob, 4).unwrap().unwrap();
    let chain = build_chain(&ob, &w).unwrap();
    assert_eq!(chain.k(), 1);
    let r = validate_chain(&chain, &ob).unwrap();
    assert!(r.all_passed(), "{r:?}");
}

#[test]
fn crossing_image_gives_longer_chain() {
    let ob = sphere(TwistWord::twist("x12", -2));
    let w = find_nrv_witness(&ob, 6).unwrap().expect("witness");
    let img = ob.apply(&w).unwrap();
    let chain = build_chain(&ob, &w).unwrap();
    let r = validate_chain(&chain, &ob).unwrap();
    assert!(r.all_passed(), "{r:?}");
    if geometric_intersection(ob.surface().unwrap(), &img, &w) > 0 {
        assert!(chain.k() >= 2);
    }
}

#[test]
fn right_veering_arc_has_no_chain() {
    let ob = annulus(1);
    let a = EmbeddedArc::raw(q(0, 0, 1), q(1, 1, 2), vec![]);
    assert!(matches!(build_chain(&ob, &a), Err(EngineError::Precondition(_))));
}

#[test]
fn repeated_terminal_point_is_reported() {
    let ob = annulus(-1);
    let n = q(0, 0, 1);
    let arc = |p: BoundaryPoint, w: Vec<Letter>| EmbeddedArc::raw(n, p, w);
    let chain = WitnessChain {
        basepoint: n,
        arcs: vec![arc(q(1, 1, 2), vec![Letter::minus(1)]), arc(q(1, 1, 4), vec![]), arc(q(1, 1, 4), vec![]), arc(q(1, 1, 2), vec![])],
    };
    let r = validate_chain(&chain, &ob).unwrap();
    assert!(!r.all_passed());
    let iv = r.get("(iv)").unwrap();
    assert!(!iv.passed);
    assert_eq!(iv.failed_at, Some(2));
}

#[test]
fn wrong_basepoint_is_reported() {
    let ob = annulus(-1);
    let chain = WitnessChain {
        basepoint: q(0, 0, 1),
        arcs: vec![EmbeddedArc::raw(q(0, 0, 1), q(1, 1, 2), vec![Letter::minus(1)]), EmbeddedArc::raw(q(0, 1, 4), q(1, 1, 2), vec![])],
    };
    let r = validate_chain(&chain, &ob).unwrap();
    assert_eq!(r.get("(i)").unwrap().failed_at, Some(1));
    assert!(!r.get("(ii)").unwrap().passed);
}

#[test]
fn built_chains_validate() {
    let words = [
        TwistWord::twist("x12", -1),
        TwistWord::twist("x12", -3),
        TwistWord::from_pairs(&[("a", 1), ("x12", -3)]),
        TwistWord::from_pairs(&[("x12", -1), ("d1", 1)]),
        TwistWord::from_pairs(&[("b", -1), ("c", 2)]),
    ];
    for w in words {
        let ob = sphere(w.clone());
        let a = find_nrv_witness(&ob, 6).unwrap().expect("witness");
        let chain = build_chain(&ob, &a).unwrap();
        let r = validate_chain(&chain, &ob).unwrap();
        assert!(r.all_passed(), "{w}: {r:?}");
    }
}

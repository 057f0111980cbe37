use num_rational::Rational64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::*;
use crate::surface::{BoundaryPoint, Letter};

fn q(b: usize, n: i64, d: i64) -> BoundaryPoint {
    BoundaryPoint::at(b, n, d)
}

fn sphere_book(word: TwistWord) -> OpenBook {
    let (s, mut curves) = four_holed_sphere_curves();
    curves.insert("x12".into(), SimpleClosedCurve::new(&s, vec![Letter::plus(1), Letter::plus(2)]).unwrap());
    curves.insert("x23".into(), SimpleClosedCurve::new(&s, vec![Letter::plus(2), Letter::plus(3)]).unwrap());
    curves.insert("x13".into(), SimpleClosedCurve::new(&s, vec![Letter::plus(1), Letter::plus(3)]).unwrap());
    OpenBook::planar(s, curves, word).unwrap()
}

/// Push-offs of every cut on both banks, and boundary-parallel arcs on every
/// boundary component.
fn oracle_arcs(s: &PlanarSurface) -> Vec<EmbeddedArc> {
    let mut out = Vec::new();
    let n = s.inner_holes as i64;
    let eps = Rational64::new(1, 64);
    for j in s.cut_ids() {
        let f = s.foot(j);
        out.push(
            EmbeddedArc::new(s, BoundaryPoint::new(0, f + eps), BoundaryPoint::new(j, Rational64::from_integer(1) - eps), vec![]).unwrap(),
        );
        out.push(EmbeddedArc::new(s, BoundaryPoint::new(0, f - eps), BoundaryPoint::new(j, eps), vec![]).unwrap());
    }
    for c in 0..=s.inner_holes {
        let slots: Vec<Rational64> = (0..2 * (n + 1)).map(|i| Rational64::new(2 * i + 1, 4 * (n + 1))).collect();
        for &a in &slots {
            for &b in &slots {
                if a != b {
                    out.push(boundary_parallel_arc(s, c, a, b).unwrap());
                }
            }
        }
    }
    out
}

fn random_word(rng: &mut ChaCha8Rng, names: &[&str], len: usize) -> TwistWord {
    TwistWord::new(
        (0..len)
            .map(|_| TwistFactor {
                curve: names[rng.gen_range(0..names.len())].to_string(),
                exponent: if rng.gen_bool(0.5) { 1 } else { -1 } * rng.gen_range(1..=2),
            })
            .collect(),
    )
}

#[test]
fn twist_word_normalizes() {
    let w = TwistWord::from_pairs(&[("a", 1), ("a", 2), ("b", 0), ("c", 1), ("c", -1), ("a", 1)]);
    assert_eq!(w, TwistWord::twist("a", 4));
    assert!(w.compose(&w.inverse()).is_identity());
    assert_eq!(TwistWord::from_pairs(&[("a", 2), ("e", -1)]).to_string(), "T_a^2 T_e^-1");
}

#[test]
fn lantern_relation() {
    let bd = TwistWord::from_pairs(&[("d1", 1), ("d2", 1), ("d3", 1), ("d4", 1)]);
    let interior = TwistWord::from_pairs(&[("x12", 1), ("x23", 1), ("x13", 1)]);
    let ob = sphere_book(TwistWord::identity());
    let s = *ob.surface().unwrap();
    let arcs = oracle_arcs(&s);
    assert!(arcs.len() > 100);
    for a in &arcs {
        assert_eq!(ob.apply_word(&bd, a).unwrap(), ob.apply_word(&interior, a).unwrap(), "{a}");
    }
    // The relation is sensitive to the order of the interior factors.
    let wrong = TwistWord::from_pairs(&[("x12", 1), ("x13", 1), ("x23", 1)]);
    assert!(arcs.iter().any(|a| ob.apply_word(&bd, a).unwrap() != ob.apply_word(&wrong, a).unwrap()));
}

#[test]
fn group_action_laws() {
    let ob = sphere_book(TwistWord::identity());
    let s = *ob.surface().unwrap();
    let names = ["a", "b", "c", "d", "e", "x13", "x23"];
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let ends = [q(0, 0, 1), q(1, 1, 2), q(2, 1, 2), q(3, 1, 2)];
    for _ in 0..100 {
        let u = random_word(&mut rng, &names, 3);
        let v = random_word(&mut rng, &names, 3);
        let i = rng.gen_range(0..4);
        let j = (i + rng.gen_range(1..4)) % 4;
        let x = EmbeddedArc::new(&s, ends[i], ends[j], vec![]).unwrap();
        let uv = ob.apply_word(&u.compose(&v), &x).unwrap();
        assert_eq!(uv, ob.apply_word(&u, &ob.apply_word(&v, &x).unwrap()).unwrap());
        assert_eq!(ob.apply_word(&u.inverse(), &ob.apply_word(&u, &x).unwrap()).unwrap(), x);
        assert_eq!(uv.start, x.start);
        assert_eq!(uv.end, x.end);
    }
}

#[test]
fn identity_and_cancellation() {
    let ob = sphere_book(TwistWord::identity());
    let s = *ob.surface().unwrap();
    let x = EmbeddedArc::new(&s, q(0, 0, 1), q(2, 1, 2), vec![]).unwrap();
    assert_eq!(ob.apply(&x).unwrap(), x);
    let w = TwistWord::new(vec![TwistFactor { curve: "c".into(), exponent: 1 }, TwistFactor { curve: "c".into(), exponent: -1 }]);
    assert_eq!(ob.apply_word(&w, &x).unwrap(), x);
}

#[test]
fn intersection_is_invariant() {
    let ob = sphere_book(TwistWord::identity());
    let s = *ob.surface().unwrap();
    let names = ["a", "b", "c", "d", "e", "x13", "x23"];
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    for _ in 0..100 {
        let w = random_word(&mut rng, &names, 4);
        let x = ob.apply_word(&random_word(&mut rng, &names, 2), &EmbeddedArc::new(&s, q(0, 0, 1), q(2, 1, 2), vec![]).unwrap()).unwrap();
        let y = ob.apply_word(&random_word(&mut rng, &names, 2), &EmbeddedArc::new(&s, q(1, 1, 2), q(3, 1, 2), vec![]).unwrap()).unwrap();
        let before = geometric_intersection(&s, &x, &y);
        let after = geometric_intersection(&s, &ob.apply_word(&w, &x).unwrap(), &ob.apply_word(&w, &y).unwrap());
        assert_eq!(before, after, "{w}");
    }
}

#[test]
fn commuting_twists() {
    let ob = sphere_book(TwistWord::identity());
    let s = *ob.surface().unwrap();
    let arcs = oracle_arcs(&s);
    let names: Vec<&String> = ob.curves.keys().collect();
    for c in &names {
        for d in &names {
            let (cc, dd) = (&ob.curves[*c], &ob.curves[*d]);
            if geometric_intersection(&s, cc, dd) != 0 {
                continue;
            }
            let cd = TwistWord::from_pairs(&[(c.as_str(), 1), (d.as_str(), 1)]);
            let dc = TwistWord::from_pairs(&[(d.as_str(), 1), (c.as_str(), 1)]);
            for a in arcs.iter().take(40) {
                assert_eq!(ob.apply_word(&cd, a).unwrap(), ob.apply_word(&dc, a).unwrap());
            }
        }
    }
}

#[test]
fn intersection_grows_affinely_under_powers() {
    let ob = sphere_book(TwistWord::identity());
    let s = *ob.surface().unwrap();
    let c = &ob.curves["x13"];
    let x = EmbeddedArc::new(&s, q(0, 0, 1), q(3, 1, 2), vec![]).unwrap();
    let y = EmbeddedArc::new(&s, q(1, 1, 2), q(2, 1, 2), vec![]).unwrap();
    let slope = geometric_intersection(&s, &x, c) * geometric_intersection(&s, c, &y);
    assert!(slope > 0);
    let values: Vec<usize> =
        (1..=8).map(|n| geometric_intersection(&s, &ob.apply_word(&TwistWord::twist("x13", n), &x).unwrap(), &y)).collect();
    for w in values.windows(2) {
        assert_eq!(w[1] - w[0], slope, "{values:?}");
    }
    let neg: Vec<usize> =
        (1..=8).map(|n| geometric_intersection(&s, &ob.apply_word(&TwistWord::twist("x13", -n), &x).unwrap(), &y)).collect();
    for w in neg.windows(2) {
        assert_eq!(w[1] - w[0], slope, "{neg:?}");
    }
}

#[test]
fn twist_off_support_is_trivial() {
    let ob = sphere_book(TwistWord::identity());
    let s = *ob.surface().unwrap();
    let x = EmbeddedArc::new(&s, q(1, 1, 2), q(2, 1, 2), vec![Letter::minus(1)]).unwrap();
    for (name, c) in &ob.curves {
        if geometric_intersection(&s, &x, c) == 0 {
            assert_eq!(ob.apply_word(&TwistWord::twist(name, 5), &x).unwrap(), x, "{name}");
        }
    }
}

#[test]
fn phi_family_words() {
    let ob = phi_family(2, 1, 1).unwrap();
    assert_eq!(ob.monodromy.to_string(), "T_a^2 T_b T_c T_d T_e^-2");
    assert_eq!(phi_family(2, 3, 1).unwrap().monodromy.exponent_of("b"), 3);
    assert_eq!(phi_family(1, 1, 1).unwrap().monodromy.exponent_of("e"), -2);
    assert!(phi_family(0, 1, 1).is_err());
    assert!(phi_family(1, 1, -2).is_err());
}

#[test]
fn open_book_round_trips() {
    let ob = phi_family(1, 2, 1).unwrap();
    let text = serde_json::to_string(&ob).unwrap();
    let back: OpenBook = serde_json::from_str(&text).unwrap();
    assert_eq!(back, ob);
    assert_eq!(serde_json::to_string(&back).unwrap(), text);
    let bad = r#"{"surface":{"inner_holes":1},"curves":{},"monodromy":[{"curve":"z","exponent":1}]}"#;
    assert!(serde_json::from_str::<OpenBook>(bad).is_err());
}

#[test]
fn stabilizing_the_annulus() {
    let s = PlanarSurface::new(1);
    let mut curves = std::collections::BTreeMap::new();
    curves.insert("core".to_string(), SimpleClosedCurve::boundary_curve(&s, 1).unwrap());
    let ob = OpenBook::planar(s, curves, TwistWord::identity()).unwrap();
    let st = hkm_stabilize(&ob, 1, Some(Rational64::new(1, 2))).unwrap();
    assert!(!st.book.is_engine_backed());
    assert_eq!(st.book.monodromy.len(), 2);
    assert_eq!(st.book.page.euler_characteristic(), ob.page.euler_characteristic() - 2);
    assert_eq!(st.book.page.genus(), 1);
    let (a, b) = st.arcs.unwrap();
    assert_eq!(geometric_intersection(&s, &a, &b), 2);
    assert!(matches!(st.book.apply(&a), Err(EngineError::Symbolic)));
    assert!(hkm_stabilize(&ob, 5, None).is_err());
}

#[test]
fn stabilization_prepends_twists() {
    let ob = phi_family(1, 1, 1).unwrap().with_monodromy(TwistWord::twist("e", -1)).unwrap();
    let st = hkm_stabilize(&ob, 0, Some(Rational64::new(1, 8))).unwrap();
    assert_eq!(st.book.monodromy.to_string(), "T_beta T_alpha T_e^-1");
    let s = *ob.surface().unwrap();
    let (a, b) = st.arcs.unwrap();
    assert_eq!(geometric_intersection(&s, &a, &b), 2);
}

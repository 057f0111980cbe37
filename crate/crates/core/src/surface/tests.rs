use std::collections::BTreeSet;

use proptest::prelude::*;

use super::*;

fn w(s: &[(usize, i32)]) -> Word {
    s.iter().map(|&(c, d)| if d > 0 { Letter::plus(c) } else { Letter::minus(c) }).collect()
}

fn q(b: usize, n: i64, d: i64) -> BoundaryPoint {
    BoundaryPoint::at(b, n, d)
}

fn curve_pool(s: &PlanarSurface) -> Vec<SimpleClosedCurve> {
    let mut out: Vec<SimpleClosedCurve> = (0..=s.inner_holes).map(|c| SimpleClosedCurve::boundary_curve(s, c).unwrap()).collect();
    for word in [w(&[(1, 1), (2, 1)]), w(&[(2, 1), (3, 1)]), w(&[(1, 1), (3, 1)]), w(&[(1, 1), (2, 1), (3, 1), (2, -1)])] {
        out.push(SimpleClosedCurve::new(s, word).unwrap());
    }
    out
}

fn random_arc(s: &PlanarSurface, seed: u64, pts: (BoundaryPoint, BoundaryPoint), twists: usize) -> EmbeddedArc {
    use rand::{Rng, SeedableRng};
    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
    let pool = curve_pool(s);
    let mut a = EmbeddedArc::new(s, pts.0, pts.1, vec![]).unwrap();
    for _ in 0..twists {
        let c = &pool[rng.gen_range(0..pool.len())];
        let e = if rng.gen_bool(0.5) { 1 } else { -1 };
        a = twist_arc(s, &a, c, e);
    }
    a
}

#[test]
fn disc_adjacent_slots_give_empty_word() {
    let s = make_planar_surface(0);
    let a = boundary_parallel_arc(&s, 0, Rational64::new(1, 4), Rational64::new(1, 2)).unwrap();
    assert!(a.word.is_empty());
}

#[test]
fn backtracking_cancels() {
    let s = make_planar_surface(1);
    let a = EmbeddedArc::new(&s, q(0, 0, 1), q(1, 1, 2), w(&[(1, 1), (1, -1)])).unwrap();
    assert!(a.word.is_empty());
    let again = reduce_arc(&s, &a).unwrap();
    assert_eq!(again, a);
}

#[test]
fn degenerate_and_inessential_rejected() {
    let s = make_planar_surface(1);
    assert!(EmbeddedArc::new(&s, q(0, 0, 1), q(0, 0, 1), vec![]).is_err());
    assert!(SimpleClosedCurve::new(&s, w(&[(1, 1), (1, -1)])).is_err());
    assert!(SimpleClosedCurve::new(&s, w(&[(1, 1), (1, 1)])).is_err());
    assert!(EmbeddedArc::new(&s, q(0, 1, 2), q(1, 1, 2), vec![]).is_err());
}

#[test]
fn figure_eight_word_is_not_embedded() {
    let s = make_planar_surface(2);
    assert!(SimpleClosedCurve::new(&s, w(&[(1, 1), (2, -1)])).is_err());
    assert!(SimpleClosedCurve::new(&s, w(&[(1, 1), (2, 1)])).is_ok());
}

#[test]
fn annulus_spanning_arc_meets_core_once() {
    let s = make_planar_surface(1);
    let a = EmbeddedArc::new(&s, q(0, 0, 1), q(1, 1, 2), vec![]).unwrap();
    let b = EmbeddedArc::new(&s, q(0, 1, 4), q(1, 1, 4), vec![]).unwrap();
    let crossing = EmbeddedArc::new(&s, q(0, 1, 4), q(1, 3, 4), vec![]).unwrap();
    let core = SimpleClosedCurve::boundary_curve(&s, 1).unwrap();
    assert_eq!(geometric_intersection(&s, &a, &core), 1);
    assert_eq!(geometric_intersection(&s, &a, &b), 0);
    assert_eq!(geometric_intersection(&s, &a, &crossing), 1);
    assert_eq!(geometric_intersection(&s, &core, &core), 0);
}

#[test]
fn positive_core_twist_moves_spanning_arc_right() {
    let s = make_planar_surface(1);
    let a = EmbeddedArc::new(&s, q(0, 0, 1), q(1, 1, 2), vec![]).unwrap();
    let core = SimpleClosedCurve::boundary_curve(&s, 1).unwrap();
    let t = twist_arc(&s, &a, &core, 1);
    assert_eq!(t.word, w(&[(1, 1)]));
    assert_eq!(compare_from_start(&s, &a, &t).unwrap(), std::cmp::Ordering::Greater);
    let u = twist_arc(&s, &a, &core, -1);
    assert_eq!(compare_from_start(&s, &a, &u).unwrap(), std::cmp::Ordering::Less);
    assert_eq!(twist_arc(&s, &t, &core, -1), a);
}

#[test]
fn arc_around_one_hole_meets_its_cut_once() {
    let s = make_planar_surface(3);
    // Push-off of the cut of hole 1 on its right bank, and an arc from C_0
    // to C_0 that separates hole 1 from the other holes.
    let cut = EmbeddedArc::new(&s, q(0, 5, 16), q(1, 15, 16), vec![]).unwrap();
    let around = EmbeddedArc::new(&s, q(0, 1, 16), q(0, 1, 8), w(&[(1, -1)])).unwrap();
    assert!(EmbeddedArc::new(&s, q(0, 1, 16), q(0, 1, 8), w(&[(1, 1)])).is_err());
    assert_eq!(geometric_intersection(&s, &around, &cut), 1);
    let parallel = boundary_parallel_arc(&s, 0, Rational64::new(1, 8), Rational64::new(9, 32)).unwrap();
    assert_eq!(parallel.word, w(&[(1, 1)]));
    assert_eq!(geometric_intersection(&s, &parallel, &cut), 0);
}

#[test]
fn hole_boundary_parallel_arc_passes_cut_end() {
    let s = make_planar_surface(2);
    let a = boundary_parallel_arc(&s, 1, Rational64::new(3, 4), Rational64::new(1, 4)).unwrap();
    assert_eq!(a.word, w(&[(1, -1)]));
    let b = boundary_parallel_arc(&s, 1, Rational64::new(1, 4), Rational64::new(3, 4)).unwrap();
    assert!(b.word.is_empty());
    assert!(boundary_parallel_arc(&s, 1, Rational64::new(1, 4), Rational64::new(1, 4)).is_err());
}

#[test]
fn twist_off_an_arc_fixes_it() {
    let s = make_planar_surface(3);
    let a = EmbeddedArc::new(&s, q(1, 1, 2), q(2, 1, 2), w(&[(1, -1)])).unwrap();
    for c in curve_pool(&s) {
        if geometric_intersection(&s, &a, &c) == 0 {
            assert_eq!(twist_arc(&s, &a, &c, 3), a, "{c}");
        }
    }
}

#[test]
fn twist_preserves_embedding() {
    let s = make_planar_surface(3);
    for seed in 0..20 {
        let a = random_arc(&s, seed, (q(0, 0, 1), q(3, 1, 2)), 6);
        assert!(is_embedded(&s, &a), "{a}");
        assert!(reduce_arc(&s, &a).is_ok());
    }
}

/// Every order of removing cancelling pairs.
fn all_reductions(w: &[Letter], seen: &mut BTreeSet<Word>, out: &mut BTreeSet<Word>) {
    if !seen.insert(w.to_vec()) {
        return;
    }
    let mut any = false;
    for i in 0..w.len().saturating_sub(1) {
        if w[i + 1] == w[i].inverse() {
            any = true;
            let mut v = w.to_vec();
            v.drain(i..i + 2);
            all_reductions(&v, seen, out);
        }
    }
    if !any {
        out.insert(w.to_vec());
    }
}

fn letter() -> impl Strategy<Value = Letter> {
    (1usize..=3, any::<bool>()).prop_map(|(c, p)| if p { Letter::plus(c) } else { Letter::minus(c) })
}

proptest! {
    #[test]
    fn reduction_is_confluent(word in prop::collection::vec(letter(), 12)) {
        let mut seen = BTreeSet::new();
        let mut out = BTreeSet::new();
        all_reductions(&word, &mut seen, &mut out);
        prop_assert_eq!(out.len(), 1);
        let r = free_reduce(&word);
        prop_assert!(out.contains(&r));
        prop_assert_eq!(free_reduce(&r), r);
    }

    #[test]
    fn intersection_is_symmetric(s1 in 0u64..1000, s2 in 0u64..1000) {
        let s = make_planar_surface(3);
        let a = random_arc(&s, s1, (q(0, 0, 1), q(2, 1, 2)), 4);
        let b = random_arc(&s, s2, (q(1, 1, 2), q(3, 1, 2)), 4);
        prop_assert_eq!(geometric_intersection(&s, &a, &b), geometric_intersection(&s, &b, &a));
        let c = &curve_pool(&s)[(s1 % 8) as usize];
        prop_assert_eq!(geometric_intersection(&s, &a, c), geometric_intersection(&s, c, &a));
    }

    #[test]
    fn hole_slot_rotation_preserves_intersections(s1 in 0u64..1000, s2 in 0u64..1000) {
        let s = make_planar_surface(3);
        let a = random_arc(&s, s1, (q(0, 0, 1), q(2, 1, 4)), 4);
        let b = random_arc(&s, s2, (q(2, 3, 4), q(3, 1, 2)), 4);
        let before = geometric_intersection(&s, &a, &b);
        // Rotate C_2 by 1/2: the point at 3/4 wraps past the cut end.
        let a2 = EmbeddedArc::new(&s, a.start, q(2, 3, 4), a.word.clone()).unwrap();
        let mut bw = vec![Letter::plus(2)];
        bw.extend(b.word.iter().copied());
        let b2 = EmbeddedArc::new(&s, q(2, 1, 4), b.end, bw).unwrap();
        prop_assert_eq!(geometric_intersection(&s, &a2, &b2), before);
    }

    #[test]
    fn side_compare_is_antisymmetric(s1 in 0u64..1000, s2 in 0u64..1000) {
        let s = make_planar_surface(3);
        let a = random_arc(&s, s1, (q(0, 0, 1), q(2, 1, 2)), 3);
        let b = random_arc(&s, s2, (q(0, 0, 1), q(3, 1, 2)), 3);
        let ab = compare_from_start(&s, &a, &b).unwrap();
        let ba = compare_from_start(&s, &b, &a).unwrap();
        prop_assert_eq!(ab, ba.reverse());
    }
}

#[test]
fn enumeration_counts_and_order() {
    let s = make_planar_surface(1);
    let mut seen = Vec::new();
    for_each_arc(&s, q(0, 0, 1), &[q(1, 1, 2)], &[], 3, |a| {
        seen.push(a.word.clone());
        true
    });
    // Spanning arcs of the annulus differ by twisting: one per winding.
    assert_eq!(
        seen,
        vec![
            vec![],
            w(&[(1, 1)]),
            w(&[(1, -1)]),
            w(&[(1, 1), (1, 1)]),
            w(&[(1, -1), (1, -1)]),
            w(&[(1, 1), (1, 1), (1, 1)]),
            w(&[(1, -1), (1, -1), (1, -1)])
        ]
    );
}

#[test]
fn enumeration_matches_brute_force() {
    let s = make_planar_surface(3);
    let start = q(0, 0, 1);
    let ends = [q(1, 1, 2), q(0, 7, 8)];
    let avoid = EmbeddedArc::new(&s, q(2, 1, 2), q(3, 1, 2), vec![]).unwrap();
    let mut fast = BTreeSet::new();
    for_each_arc(&s, start, &ends, &[PathRef::Arc(&avoid)], 4, |a| {
        fast.insert((a.end, a.word.clone()));
        true
    });
    let letters: Vec<Letter> = s.cut_ids().flat_map(|j| [Letter::plus(j), Letter::minus(j)]).collect();
    let mut words: Vec<Word> = vec![vec![]];
    let mut frontier = words.clone();
    for _ in 0..4 {
        let mut next = Vec::new();
        for f in &frontier {
            for &l in &letters {
                if f.last() != Some(&l.inverse()) {
                    let mut g = f.clone();
                    g.push(l);
                    next.push(g);
                }
            }
        }
        words.extend(next.iter().cloned());
        frontier = next;
    }
    let mut slow = BTreeSet::new();
    for end in ends {
        for wd in &words {
            if let Ok(a) = EmbeddedArc::new(&s, start, end, wd.clone()) {
                if geometric_intersection(&s, &a, &avoid) == 0 {
                    slow.insert((end, wd.clone()));
                }
            }
        }
    }
    assert_eq!(fast, slow);
}

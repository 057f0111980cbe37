//! End-to-end builders: the disc from a witness chain, the disc after a
//! positive stabilization, and the disc for the four-holed sphere family.

use std::collections::BTreeMap;

use num_rational::Rational64;
use num_traits::Zero;

use crate::error::{EngineError, Result};
use crate::foliation::{insert_bb_pair, FoliationComplex};
use crate::mcg::{OpenBook, TwistWord};
use crate::movie::{build_movie, resolve_event, EllipticPoint, Leaf, Movie, MovieEvent, Page, Sign};
use crate::surface::{geometric_intersection, BoundaryPoint, EmbeddedArc, Letter, PlanarSurface, SimpleClosedCurve};
use crate::veering::{side_compare, validate_chain, SideComparison, WitnessChain};

mod lekili_lisca;

pub use lekili_lisca::{lekili_lisca_movie, lekili_lisca_movie_in, paper_counts, LL_TEMPLATE};

/// The disc of a witness chain. The page at `t = 0` holds the b-leaf
/// `α_0` (read from `p_0` to `n`) and a-leaves at `p_1..p_k`. The positive
/// hyperbolic point `h_i` at `t = (i + 1/2)/k` joins the b-leaf `α_i` to the
/// a-leaf at `p_{i+1}` along `α_{i+1}`, leaving the b-leaf `α_{i+1}` and an
/// a-leaf at `p_i`.
pub fn theorem3_disc(chain: &WitnessChain, ob: &OpenBook) -> Result<Movie> {
    let report = validate_chain(chain, ob)?;
    if let Some(c) = report.conditions.iter().find(|c| !c.passed) {
        return Err(EngineError::Precondition(format!("chain condition {} fails: {}", c.condition, c.detail)));
    }
    let s = *ob.surface()?;
    let k = chain.k();
    let n = chain.basepoint;
    let ends = chain.terminal_points();

    let mut elliptic = vec![EllipticPoint { id: 0, sign: Sign::Negative, point: n }];
    for (i, p) in ends[..k].iter().enumerate() {
        elliptic.push(EllipticPoint { id: i + 1, sign: Sign::Positive, point: *p });
    }
    let mut leaves = vec![Leaf::b(0, &chain.arcs[0].reversed())];
    for (i, p) in ends[1..=k].iter().enumerate() {
        leaves.push(Leaf::a(i + 1, *p));
    }
    let initial = Page { t: Rational64::zero(), elliptic, leaves };

    let mut events = Vec::with_capacity(k);
    let mut page = initial.clone();
    let mut b_id = 0;
    for i in 0..k {
        let ev = MovieEvent {
            t: Rational64::new(2 * i as i64 + 1, 2 * k as i64),
            sign: Sign::Positive,
            describing_arc: chain.arcs[i + 1].clone(),
            leaves: [b_id, i + 1],
        };
        let r = resolve_event(&s, &page, &ev)?;
        b_id = r.produced[1];
        page = r.page;
        events.push(ev);
    }
    build_movie(ob.clone(), initial, events)
}

/// An annulus with monodromy `T^{-1}` around its core and a chain of
/// length `k` from the image of the spanning arc back to the arc. The
/// intermediate arcs end at slots that run once backwards around the inner
/// boundary, crossing the end of the cut halfway.
pub fn annulus_chain(k: usize) -> Result<(OpenBook, WitnessChain)> {
    if k == 0 {
        return Err(EngineError::InvalidParameter("k must be positive".into()));
    }
    let s = PlanarSurface::new(1);
    let mut curves = BTreeMap::new();
    curves.insert("core".to_string(), SimpleClosedCurve::boundary_curve(&s, 1)?);
    let ob = OpenBook::planar(s, curves, TwistWord::twist("core", -1))?;
    let n = BoundaryPoint::at(0, 0, 1);
    let alpha = EmbeddedArc::new(&s, n, BoundaryPoint::at(1, 1, 2), vec![])?;
    let mut arcs = vec![ob.apply(&alpha)?];
    let k4 = 4 * k as i64;
    for i in 1..k as i64 {
        let x = Rational64::new(2 * k as i64 - 4 * i + 1, k4);
        let slot = x - Rational64::from_integer(x.floor().to_integer());
        let end = BoundaryPoint::new(1, slot);
        let prev = arcs.last().expect("nonempty").clone();
        let pick = [vec![], vec![Letter::minus(1)], vec![Letter::plus(1)]].into_iter().find_map(|w| {
            let c = EmbeddedArc::new(&s, n, end, w).ok()?;
            let ok = geometric_intersection(&s, &prev, &c) == 0
                && side_compare(&s, &prev, &c).ok()? == SideComparison::StrictlyRight
                && side_compare(&s, &c, &alpha).ok()? == SideComparison::StrictlyRight;
            ok.then_some(c)
        });
        arcs.push(pick.ok_or_else(|| EngineError::SearchExhausted(format!("no arc to {end}")))?);
    }
    arcs.push(alpha);
    Ok((ob, WitnessChain { basepoint: n, arcs }))
}

/// Inserts the bb pair of the stabilized disc into the b-leaf family that
/// runs through `t = 1`, the region between `b_{1/2}` and `b_1`.
pub fn hkm_disc(f: &FoliationComplex) -> Result<FoliationComplex> {
    let negatives: Vec<usize> = f.elliptic.iter().filter(|e| e.sign == Sign::Negative).map(|e| e.id).collect();
    let [n] = negatives[..] else {
        return Err(EngineError::Precondition(format!("expected one negative elliptic point, found {}", negatives.len())));
    };
    let time = |h: Option<usize>| h.map(|h| f.hyperbolic[h].t);
    let family = f
        .families
        .iter()
        .position(|fam| fam.end == Some(n) && matches!((time(fam.from), time(fam.to)), (Some(a), Some(b)) if a >= b))
        .or_else(|| f.families.iter().position(|fam| fam.end == Some(n)))
        .ok_or_else(|| EngineError::Precondition("no b-leaf ends at the negative elliptic point".into()))?;
    let mut g = insert_bb_pair(f, family)?;
    g.notes.push("condition (3) fails on the closed leaf of the stabilized disc; removing it is not attempted".into());
    Ok(g)
}

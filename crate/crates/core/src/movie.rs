//! Movie presentations of surfaces in an open book.
//!
//! A page records the leaves cut out on `S_t`. Leaves are oriented from a
//! positive elliptic point to either a negative elliptic point (a b-leaf) or
//! the braid (an a-leaf). The braid punctures are not part of the curve
//! model, so an a-leaf is kept as a stub at its elliptic point.
//!
//! An event joins two leaves by a describing arc running from an endpoint of
//! the first to an endpoint of the second, and replaces them by the oriented
//! smoothing of the band along it:
//!
//! ```text
//! (s1 w1 e1), (s2 w2 e2)  ->  (s1 w1[..i1] d w2[i2..] e2), (s2 w2[..i2] d⁻¹ w1[i1..] e1)
//! ```
//!
//! where `i1`, `i2` are 0 or the word length depending on which end the
//! describing arc meets. Surgery types: a+b gives a+b, b+b gives b+b, a+a is
//! rejected.

use std::collections::BTreeMap;

use num_rational::Rational64;
use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{EngineError, Result};
use crate::foliation::{Attachment, FoliationComplex};
use crate::mcg::OpenBook;
use crate::surface::{free_reduce, geometric_intersection, inverse_word, reduce_arc, BoundaryPoint, EmbeddedArc, PlanarSurface, Word};

pub(crate) mod ratio_str {
    use num_rational::Rational64;
    use serde::de::Error as _;
    use serde::{Deserialize, Deserializer, Serializer};

    pub fn serialize<S: Serializer>(r: &Rational64, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&r.to_string())
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Rational64, D::Error> {
        let s = String::deserialize(d)?;
        s.parse().map_err(|_| D::Error::custom(format!("bad rational {s:?}")))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Sign {
    #[serde(rename = "+")]
    Positive,
    #[serde(rename = "-")]
    Negative,
}

impl Sign {
    pub fn symbol(self) -> &'static str {
        match self {
            Sign::Positive => "+",
            Sign::Negative => "-",
        }
    }

    pub fn flip(self) -> Sign {
        match self {
            Sign::Positive => Sign::Negative,
            Sign::Negative => Sign::Positive,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct EllipticPoint {
    pub id: usize,
    pub sign: Sign,
    pub point: BoundaryPoint,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum LeafKind {
    A,
    B,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Leaf {
    pub id: usize,
    pub start: BoundaryPoint,
    /// `None` for an a-leaf, which ends on the braid.
    pub end: Option<BoundaryPoint>,
    #[serde(default)]
    pub word: Word,
}

impl Leaf {
    pub fn a(id: usize, start: BoundaryPoint) -> Self {
        Leaf { id, start, end: None, word: Vec::new() }
    }

    pub fn b(id: usize, arc: &EmbeddedArc) -> Self {
        Leaf { id, start: arc.start, end: Some(arc.end), word: arc.word.clone() }
    }

    pub fn kind(&self) -> LeafKind {
        if self.end.is_some() {
            LeafKind::B
        } else {
            LeafKind::A
        }
    }

    pub fn arc(&self) -> Option<EmbeddedArc> {
        self.end.map(|e| EmbeddedArc::raw(self.start, e, self.word.clone()))
    }

    fn attach_index(&self, p: BoundaryPoint) -> Option<usize> {
        if p == self.start {
            Some(0)
        } else if self.end == Some(p) {
            Some(self.word.len())
        } else {
            None
        }
    }
}

impl std::fmt::Display for Leaf {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self.arc() {
            Some(a) => write!(f, "leaf {} ({a})", self.id),
            None => write!(f, "leaf {} (a-leaf at {})", self.id, self.start),
        }
    }
}

/// The leaves on one page.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Page {
    #[serde(with = "ratio_str")]
    pub t: Rational64,
    pub elliptic: Vec<EllipticPoint>,
    pub leaves: Vec<Leaf>,
}

impl Page {
    pub fn leaf(&self, id: usize) -> Option<&Leaf> {
        self.leaves.iter().find(|l| l.id == id)
    }

    pub fn b_leaves(&self) -> impl Iterator<Item = &Leaf> {
        self.leaves.iter().filter(|l| l.kind() == LeafKind::B)
    }

    pub fn a_leaves(&self) -> impl Iterator<Item = &Leaf> {
        self.leaves.iter().filter(|l| l.kind() == LeafKind::A)
    }

    pub fn elliptic_at(&self, p: BoundaryPoint) -> Option<&EllipticPoint> {
        self.elliptic.iter().find(|e| e.point == p)
    }

    fn next_id(&self) -> usize {
        self.leaves.iter().map(|l| l.id + 1).max().unwrap_or(0)
    }

    /// Registry consistency, orientation of every leaf, and embedded,
    /// pairwise disjoint b-leaves.
    pub fn validate(&self, s: &PlanarSurface) -> Result<()> {
        let bad = |m: String| Err(EngineError::InvalidMovie(m));
        for (i, e) in self.elliptic.iter().enumerate() {
            s.check_point(e.point)?;
            if self.elliptic[..i].iter().any(|f| f.point == e.point || f.id == e.id) {
                return bad(format!("elliptic point {} registered twice", e.point));
            }
        }
        for (i, l) in self.leaves.iter().enumerate() {
            if self.leaves[..i].iter().any(|m| m.id == l.id) {
                return bad(format!("leaf id {} used twice", l.id));
            }
            if self.elliptic_at(l.start).map(|e| e.sign) != Some(Sign::Positive) {
                return bad(format!("{l} does not start at a positive elliptic point"));
            }
            if let Some(e) = l.end {
                if self.elliptic_at(e).map(|e| e.sign) != Some(Sign::Negative) {
                    return bad(format!("{l} does not end at a negative elliptic point"));
                }
            } else if !l.word.is_empty() {
                return bad(format!("a-leaf {} carries a word", l.id));
            }
        }
        let arcs: Vec<(usize, EmbeddedArc)> = self.b_leaves().map(|l| (l.id, l.arc().expect("b-leaf"))).collect();
        for (id, a) in &arcs {
            if reduce_arc(s, a)? != *a {
                return bad(format!("leaf {id} ({a}) is not reduced"));
            }
        }
        for (i, (x, a)) in arcs.iter().enumerate() {
            for (y, b) in &arcs[..i] {
                let n = geometric_intersection(s, a, b);
                if n != 0 {
                    return bad(format!("leaves {y} and {x} cross {n} times"));
                }
            }
        }
        Ok(())
    }
}

/// A hyperbolic point: the band surgery joining `leaves[0]` to `leaves[1]`
/// along the describing arc.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct MovieEvent {
    #[serde(with = "ratio_str")]
    pub t: Rational64,
    pub sign: Sign,
    pub describing_arc: EmbeddedArc,
    pub leaves: [usize; 2],
}

/// What an event did to a page.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Resolution {
    pub page: Page,
    pub consumed: [Leaf; 2],
    pub produced: [usize; 2],
}

fn attach(l: &Leaf, p: BoundaryPoint, which: &str) -> Result<usize> {
    l.attach_index(p).ok_or_else(|| EngineError::InvalidMovie(format!("describing arc {which} {p} is not an endpoint of {l}")))
}

/// Applies one event to a page.
pub fn resolve_event(s: &PlanarSurface, page: &Page, ev: &MovieEvent) -> Result<Resolution> {
    let bad = |m: String| EngineError::InvalidMovie(m);
    let [id1, id2] = ev.leaves;
    if id1 == id2 {
        return Err(bad(format!("event at t={} joins leaf {id1} to itself", ev.t)));
    }
    let l1 = page.leaf(id1).ok_or_else(|| bad(format!("leaf {id1} missing at t={}", ev.t)))?.clone();
    let l2 = page.leaf(id2).ok_or_else(|| bad(format!("leaf {id2} missing at t={}", ev.t)))?.clone();
    if l1.kind() == LeafKind::A && l2.kind() == LeafKind::A {
        return Err(bad(format!("a+a surgery at t={} is not supported", ev.t)));
    }
    let d = &ev.describing_arc;
    if reduce_arc(s, d)? != *d {
        return Err(bad(format!("describing arc {d} is not reduced")));
    }
    let i1 = attach(&l1, d.start, "start")?;
    let i2 = attach(&l2, d.end, "end")?;
    for l in page.b_leaves() {
        let n = geometric_intersection(s, d, &l.arc().expect("b-leaf"));
        if n != 0 {
            return Err(bad(format!("describing arc at t={} crosses {l} {n} times", ev.t)));
        }
    }

    let mut w1: Word = l1.word[..i1].to_vec();
    w1.extend_from_slice(&d.word);
    w1.extend_from_slice(&l2.word[i2..]);
    let mut w2: Word = l2.word[..i2].to_vec();
    w2.extend(inverse_word(&d.word));
    w2.extend_from_slice(&l1.word[i1..]);

    let base = page.next_id();
    let make = |id: usize, start: BoundaryPoint, end: Option<BoundaryPoint>, w: Word| -> Result<Leaf> {
        match end {
            None => Ok(Leaf::a(id, start)),
            Some(e) => {
                let raw = EmbeddedArc::raw(start, e, w);
                let arc = reduce_arc(s, &raw).map_err(|err| bad(format!("surgery at t={} gives {raw}: {err}", ev.t)))?;
                Ok(Leaf::b(id, &arc))
            }
        }
    };
    let n1 = make(base, l1.start, l2.end, w1)?;
    let n2 = make(base + 1, l2.start, l1.end, w2)?;

    let mut leaves: Vec<Leaf> = page.leaves.iter().filter(|l| l.id != id1 && l.id != id2).cloned().collect();
    leaves.push(n1);
    leaves.push(n2);
    let out = Page { t: ev.t, elliptic: page.elliptic.clone(), leaves };
    let arcs: Vec<(usize, EmbeddedArc)> = out.b_leaves().map(|l| (l.id, l.arc().expect("b-leaf"))).collect();
    for (x, a) in arcs.iter().filter(|(x, _)| *x >= base) {
        for (y, b) in arcs.iter().filter(|(y, _)| y != x && (*y < base || y < x)) {
            let n = geometric_intersection(s, a, b);
            if n != 0 {
                return Err(bad(format!("after t={} leaves {x} and {y} cross {n} times", ev.t)));
            }
        }
    }
    Ok(Resolution { page: out, consumed: [l1, l2], produced: [base, base + 1] })
}

/// An event on the page after `ev` that undoes it. The describing arc runs
/// along one new leaf to the band and back out along the other.
pub fn inverse_event(s: &PlanarSurface, before: &Page, ev: &MovieEvent) -> Result<MovieEvent> {
    let r = resolve_event(s, before, ev)?;
    let [l1, l2] = &r.consumed;
    let d = &ev.describing_arc.word;
    let i1 = attach(l1, ev.describing_arc.start, "start")?;
    let i2 = attach(l2, ev.describing_arc.end, "end")?;
    let a = &l1.word[..i1];
    let b = &l2.word[i2..];
    let c = &l2.word[..i2];
    let dd = &l1.word[i1..];
    let cat = |parts: &[&[crate::surface::Letter]]| -> Word { free_reduce(&parts.concat()) };
    let (d_inv, b_inv, c_inv) = (inverse_word(d), inverse_word(b), inverse_word(c));
    // Endpoints of the new leaves: N1 runs s1 -> e2, N2 runs s2 -> e1.
    let mut options = vec![(l1.start, l1.end, cat(&[a, dd]), 0usize, true)];
    options.push((l1.start, Some(l2.start), cat(&[a, d, &c_inv]), 0, false));
    if let Some(e2) = l2.end {
        options.push((e2, l1.end, cat(&[&b_inv, &d_inv, dd]), 1, true));
        options.push((e2, Some(l2.start), cat(&[&b_inv, &c_inv]), 1, false));
    }
    for (from, to, word, _, _) in options {
        let Some(to) = to else { continue };
        if from == to {
            continue;
        }
        let arc = EmbeddedArc::raw(from, to, word);
        let Ok(arc) = reduce_arc(s, &arc) else { continue };
        let cand = MovieEvent { t: ev.t, sign: ev.sign.flip(), describing_arc: arc, leaves: r.produced };
        if let Ok(back) = resolve_event(s, &r.page, &cand) {
            let same = |x: &Leaf, y: &Leaf| x.start == y.start && x.end == y.end && x.word == y.word;
            let [m1, m2] = back.produced.map(|id| back.page.leaf(id).expect("produced").clone());
            if (same(&m1, l1) && same(&m2, l2)) || (same(&m1, l2) && same(&m2, l1)) {
                return Ok(cand);
            }
        }
    }
    Err(EngineError::InvalidMovie(format!("no inverse for the event at t={}", ev.t)))
}

/// A validated movie. `pages[i]` is the page just after event `i`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Movie {
    #[serde(flatten)]
    pub book: OpenBook,
    pub initial: Page,
    pub events: Vec<MovieEvent>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub pages: Vec<Page>,
}

impl Movie {
    pub fn final_page(&self) -> &Page {
        self.pages.last().unwrap_or(&self.initial)
    }

    /// Re-runs validation, e.g. after reading a document.
    pub fn revalidate(self) -> Result<Movie> {
        build_movie(self.book, self.initial, self.events)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ClosureReport {
    pub passed: bool,
    /// `(final leaf, initial leaf)` pairs.
    pub matching: Vec<(usize, usize)>,
    pub unmatched: Vec<String>,
}

fn closure(book: &OpenBook, initial: &Page, last: &Page) -> Result<ClosureReport> {
    if !book.is_engine_backed() {
        return Err(EngineError::Precondition("closure unverifiable symbolically".into()));
    }
    let mut taken = vec![false; initial.leaves.len()];
    let mut matching = Vec::new();
    let mut unmatched = Vec::new();
    let mut finals: Vec<&Leaf> = last.leaves.iter().collect();
    finals.sort_by_key(|l| l.id);
    for l in finals {
        let image = match l.arc() {
            Some(a) => Some(book.apply(&a)?),
            None => None,
        };
        let hit = initial.leaves.iter().enumerate().position(|(i, m)| {
            !taken[i]
                && match (&image, m.arc()) {
                    (Some(x), Some(y)) => *x == y,
                    (None, None) => l.start == m.start,
                    _ => false,
                }
        });
        match hit {
            Some(i) => {
                taken[i] = true;
                matching.push((l.id, initial.leaves[i].id));
            }
            None => unmatched.push(match image {
                Some(x) => format!("{l}: image {x} is not an initial leaf"),
                None => format!("{l}: no initial a-leaf at {}", l.start),
            }),
        }
    }
    for (i, m) in initial.leaves.iter().enumerate() {
        if !taken[i] {
            unmatched.push(format!("initial {m} is not an image"));
        }
    }
    Ok(ClosureReport { passed: unmatched.is_empty(), matching, unmatched })
}

/// Closure under the monodromy: the image of the final page is the initial
/// page, leaf by leaf.
pub fn validate_closure(m: &Movie) -> Result<ClosureReport> {
    closure(&m.book, &m.initial, m.final_page())
}

/// Validates the initial page, every event in time order, and closure.
pub fn build_movie(book: OpenBook, initial: Page, events: Vec<MovieEvent>) -> Result<Movie> {
    let s = *book.surface()?;
    if !initial.t.is_zero() {
        return Err(EngineError::InvalidMovie("initial page must sit at t = 0".into()));
    }
    initial.validate(&s)?;
    let mut pages = Vec::with_capacity(events.len());
    let mut last_t = Rational64::zero();
    for ev in &events {
        if ev.t <= last_t || ev.t >= Rational64::one() {
            return Err(EngineError::InvalidMovie(format!("event time {} out of order or outside (0,1)", ev.t)));
        }
        last_t = ev.t;
        let cur = pages.last().unwrap_or(&initial);
        let next = resolve_event(&s, cur, ev)?.page;
        pages.push(next);
    }
    let rep = closure(&book, &initial, pages.last().unwrap_or(&initial))?;
    if let Some(first) = rep.unmatched.first() {
        return Err(EngineError::InvalidMovie(format!("closure fails: {first}")));
    }
    Ok(Movie { book, initial, events, pages })
}

/// Elliptic points, one hyperbolic point per event, and the cell structure
/// cut out by separatrices and leaf families.
pub fn compile_foliation(m: &Movie) -> Result<FoliationComplex> {
    let s = *m.book.surface()?;
    let rep = validate_closure(m)?;
    if !rep.passed {
        return Err(EngineError::InvalidFoliation("movie does not close up".into()));
    }
    let mut f = FoliationComplex::new();
    let mut ell: BTreeMap<BoundaryPoint, usize> = BTreeMap::new();
    for e in &m.initial.elliptic {
        ell.insert(e.point, f.add_elliptic(e.sign, Some(e.point)));
    }

    // Leaf lifetimes: creating and consuming event of every leaf id.
    let mut born: BTreeMap<usize, usize> = BTreeMap::new();
    let mut died: BTreeMap<usize, usize> = BTreeMap::new();
    let mut kind: BTreeMap<usize, (LeafKind, BoundaryPoint, Option<BoundaryPoint>)> = BTreeMap::new();
    for l in &m.initial.leaves {
        kind.insert(l.id, (l.kind(), l.start, l.end));
    }
    let mut page = m.initial.clone();
    for (h, ev) in m.events.iter().enumerate() {
        let r = resolve_event(&s, &page, ev)?;
        let [l1, l2] = &r.consumed;
        let at = |p: Option<BoundaryPoint>| p.map_or(Attachment::Braid, |p| Attachment::Elliptic(ell[&p]));
        let hid = f.add_hyperbolic(
            ev.sign,
            ev.t,
            [at(Some(l1.start)), at(Some(l2.start)), at(l1.end), at(l2.end)],
            l1.kind() == LeafKind::A || l2.kind() == LeafKind::A,
        );
        debug_assert_eq!(hid, h);
        died.insert(l1.id, h);
        died.insert(l2.id, h);
        for id in r.produced {
            born.insert(id, h);
            let l = r.page.leaf(id).expect("produced");
            kind.insert(id, (l.kind(), l.start, l.end));
        }
        page = r.page;
    }

    // Families: lifetimes glued across t = 1 -> 0 by the closure matching.
    let ids: Vec<usize> = kind.keys().copied().collect();
    let index: BTreeMap<usize, usize> = ids.iter().enumerate().map(|(i, &id)| (id, i)).collect();
    let mut uf = UnionFind::new(ids.len());
    for &(fin, ini) in &rep.matching {
        uf.union(index[&fin], index[&ini]);
    }
    let mut families: BTreeMap<usize, Vec<usize>> = BTreeMap::new();
    for &id in &ids {
        families.entry(uf.find(index[&id])).or_default().push(id);
    }
    for members in families.values() {
        let first = members[0];
        let (k, start, end) = kind[&first];
        let from = members.iter().find_map(|id| born.get(id)).copied();
        let to = members.iter().find_map(|id| died.get(id)).copied();
        f.add_family(k == LeafKind::A, ell[&start], end.map(|e| ell[&e]), from, to);
    }
    f.finish()?;
    Ok(f)
}

pub(crate) struct UnionFind(Vec<usize>);

impl UnionFind {
    pub(crate) fn new(n: usize) -> Self {
        UnionFind((0..n).collect())
    }

    pub(crate) fn find(&mut self, x: usize) -> usize {
        let p = self.0[x];
        if p == x {
            return x;
        }
        let r = self.find(p);
        self.0[x] = r;
        r
    }

    pub(crate) fn union(&mut self, a: usize, b: usize) {
        let (ra, rb) = (self.find(a), self.find(b));
        if ra != rb {
            self.0[ra.max(rb)] = ra.min(rb);
        }
    }
}

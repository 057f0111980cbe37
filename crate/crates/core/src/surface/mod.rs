//! Planar surfaces with boundary, and arcs and simple closed curves on them.
//!
//! A planar surface with `n` inner holes is a disc (outer boundary `C_0`)
//! with holes `C_1..C_n` removed. Each hole `C_j` is joined to `C_0` by a
//! reference cut `κ_j`; cutting along all of them leaves a single polygon.
//! Arcs and curves are stored as the sequence of cuts they cross, which in
//! minimal position is exactly the freely reduced crossing word.
//!
//! Conventions:
//!
//! * boundary slots are rationals following the boundary orientation
//!   induced from the surface (counter-clockwise on `C_0`, clockwise on the
//!   holes when drawn in the plane);
//! * on `C_0` the foot of `κ_j` sits at slot `j/(n+1)`; on `C_j` the cut
//!   ends at slot `0`;
//! * the letter `(j, +)` crosses `κ_j` from its left bank to its right bank,
//!   where left and right are taken looking along the cut from `C_0` to `C_j`.
//!   A single letter `(j, +)` is the counter-clockwise loop around hole `j`.

mod engine;

use std::fmt;

use num_rational::Rational64;
use num_traits::{One, Zero};
use serde::de::Error as _;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{EngineError, Result};

pub(crate) use engine::{Pt, Strand};

pub type Slot = Rational64;

/// Crossing direction of a cut.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Dir {
    Plus,
    Minus,
}

impl Dir {
    pub fn flip(self) -> Dir {
        match self {
            Dir::Plus => Dir::Minus,
            Dir::Minus => Dir::Plus,
        }
    }

    pub fn symbol(self) -> &'static str {
        match self {
            Dir::Plus => "+",
            Dir::Minus => "-",
        }
    }
}

/// One crossing of a reference cut.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Letter {
    pub cut: usize,
    pub dir: Dir,
}

impl Letter {
    pub fn new(cut: usize, dir: Dir) -> Self {
        Letter { cut, dir }
    }

    pub fn plus(cut: usize) -> Self {
        Letter::new(cut, Dir::Plus)
    }

    pub fn minus(cut: usize) -> Self {
        Letter::new(cut, Dir::Minus)
    }

    pub fn inverse(self) -> Self {
        Letter::new(self.cut, self.dir.flip())
    }
}

impl fmt::Display for Letter {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}{}", self.cut, self.dir.symbol())
    }
}

impl Serialize for Letter {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        (self.cut, self.dir.symbol()).serialize(s)
    }
}

impl<'de> Deserialize<'de> for Letter {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let (cut, sym): (usize, String) = Deserialize::deserialize(d)?;
        let dir = match sym.as_str() {
            "+" => Dir::Plus,
            "-" => Dir::Minus,
            other => return Err(D::Error::custom(format!("bad crossing sign {other:?}"))),
        };
        Ok(Letter { cut, dir })
    }
}

pub type Word = Vec<Letter>;

pub fn inverse_word(w: &[Letter]) -> Word {
    w.iter().rev().map(|l| l.inverse()).collect()
}

pub fn format_word(w: &[Letter]) -> String {
    if w.is_empty() {
        return "ε".to_string();
    }
    w.iter().map(|l| l.to_string()).collect::<Vec<_>>().join(" ")
}

/// Free reduction. Cancellation is confluent, so the result does not depend
/// on the order in which backtracking pairs are removed.
pub fn free_reduce(w: &[Letter]) -> Word {
    let mut out: Word = Vec::with_capacity(w.len());
    for &l in w {
        if out.last() == Some(&l.inverse()) {
            out.pop();
        } else {
            out.push(l);
        }
    }
    out
}

/// Free reduction that also tracks gap positions (`0..=len`) through the
/// cancellations. A mark squeezed by a cancelling pair lands in the gap the
/// pair leaves behind.
pub fn free_reduce_tracking(w: &[Letter], marks: &mut [usize]) -> Word {
    let mut out: Word = Vec::with_capacity(w.len());
    let mut recorded: Vec<Option<usize>> = vec![None; marks.len()];
    let mut low: Vec<usize> = vec![usize::MAX; marks.len()];
    for (i, &l) in w.iter().enumerate() {
        for (m, &p) in marks.iter().enumerate() {
            if p == i {
                recorded[m] = Some(out.len());
            }
        }
        if out.last() == Some(&l.inverse()) {
            out.pop();
        } else {
            out.push(l);
        }
        for m in 0..marks.len() {
            if recorded[m].is_some() {
                low[m] = low[m].min(out.len());
            }
        }
    }
    for (m, p) in marks.iter_mut().enumerate() {
        *p = match recorded[m] {
            Some(h) => h.min(low[m]),
            None => out.len(),
        };
    }
    out
}

/// Cyclic reduction: free reduction followed by trimming inverse pairs at
/// the two ends.
pub fn cyclic_reduce(w: &[Letter]) -> Word {
    let mut r = free_reduce(w);
    while r.len() >= 2 && r[0] == r[r.len() - 1].inverse() {
        r.pop();
        r.remove(0);
    }
    r
}

/// Lexicographically least rotation, used as the canonical form of a
/// cyclic word.
pub fn least_rotation(w: &[Letter]) -> Word {
    if w.is_empty() {
        return Vec::new();
    }
    (0..w.len()).map(|r| w[r..].iter().chain(&w[..r]).copied().collect::<Word>()).min().expect("nonempty")
}

fn is_proper_power(w: &[Letter]) -> bool {
    let n = w.len();
    (1..n).any(|p| n.is_multiple_of(p) && (p..n).all(|i| w[i] == w[i - p]))
}

/// A marked point on a boundary component.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct BoundaryPoint {
    pub boundary: usize,
    pub slot: Slot,
}

impl BoundaryPoint {
    pub fn new(boundary: usize, slot: Slot) -> Self {
        BoundaryPoint { boundary, slot }
    }

    pub fn at(boundary: usize, num: i64, den: i64) -> Self {
        BoundaryPoint { boundary, slot: Rational64::new(num, den) }
    }
}

impl fmt::Display for BoundaryPoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "C{}@{}", self.boundary, self.slot)
    }
}

#[derive(Serialize, Deserialize)]
struct BoundaryPointRepr {
    boundary: usize,
    slot: String,
}

impl Serialize for BoundaryPoint {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        BoundaryPointRepr { boundary: self.boundary, slot: self.slot.to_string() }.serialize(s)
    }
}

impl<'de> Deserialize<'de> for BoundaryPoint {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let r = BoundaryPointRepr::deserialize(d)?;
        let slot: Rational64 = r.slot.parse().map_err(|_| D::Error::custom(format!("bad slot {:?}", r.slot)))?;
        Ok(BoundaryPoint { boundary: r.boundary, slot })
    }
}

/// A sphere with `inner_holes + 1` boundary components.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct PlanarSurface {
    pub inner_holes: usize,
}

pub fn make_planar_surface(inner_holes: usize) -> PlanarSurface {
    PlanarSurface { inner_holes }
}

impl PlanarSurface {
    pub fn new(inner_holes: usize) -> Self {
        PlanarSurface { inner_holes }
    }

    pub fn boundary_count(&self) -> usize {
        self.inner_holes + 1
    }

    pub fn euler_characteristic(&self) -> i64 {
        1 - self.inner_holes as i64
    }

    pub fn cut_ids(&self) -> std::ops::RangeInclusive<usize> {
        1..=self.inner_holes
    }

    /// Slot of the foot of cut `j` on the outer boundary.
    pub fn foot(&self, j: usize) -> Slot {
        Rational64::new(j as i64, self.inner_holes as i64 + 1)
    }

    pub fn check_letter(&self, l: Letter) -> Result<()> {
        if l.cut == 0 || l.cut > self.inner_holes {
            return Err(EngineError::UnknownCut { cut: l.cut, holes: self.inner_holes });
        }
        Ok(())
    }

    pub fn check_point(&self, p: BoundaryPoint) -> Result<()> {
        if p.boundary > self.inner_holes {
            return Err(EngineError::UnknownBoundary(p.boundary));
        }
        let bad = if p.boundary == 0 {
            p.slot < Rational64::zero() || p.slot >= Rational64::one() || self.cut_ids().any(|j| self.foot(j) == p.slot)
        } else {
            p.slot <= Rational64::zero() || p.slot >= Rational64::one()
        };
        if bad {
            return Err(EngineError::BadSlot(p));
        }
        Ok(())
    }

    /// Number of polygon sides after cutting along every reference cut.
    pub(crate) fn polygon_sides(&self) -> usize {
        if self.inner_holes == 0 {
            1
        } else {
            4 * self.inner_holes
        }
    }

    /// Polygon side holding a boundary point, with its position along the
    /// side (counter-clockwise around the polygon).
    pub(crate) fn locate(&self, p: BoundaryPoint) -> Pt {
        let n = self.inner_holes;
        if n == 0 {
            return Pt::Bd(0, p.slot);
        }
        if p.boundary > 0 {
            return Pt::Bd(4 * (p.boundary - 1) + 2, p.slot);
        }
        let u = p.slot;
        if u < self.foot(1) {
            return Pt::Bd(0, u + Rational64::one());
        }
        if u > self.foot(n) {
            return Pt::Bd(0, u);
        }
        let j = (1..n).find(|&j| self.foot(j) < u && u < self.foot(j + 1)).expect("slot strictly between two feet");
        Pt::Bd(4 * j, u)
    }

    /// Polygon side left through when writing letter `l`.
    pub(crate) fn exit_side(&self, l: Letter) -> Pt {
        let base = 4 * (l.cut - 1);
        match l.dir {
            Dir::Plus => Pt::Cut(base + 1),
            Dir::Minus => Pt::Cut(base + 3),
        }
    }

    /// Polygon side entered right after letter `l`.
    pub(crate) fn entry_side(&self, l: Letter) -> Pt {
        self.exit_side(l.inverse())
    }

    /// Slots on `boundary` strictly between `a` and `b` following the
    /// boundary orientation; used to place fresh slots.
    pub fn midpoint_after(&self, boundary: usize, a: Slot, taken: &[Slot]) -> Slot {
        let mut next = Rational64::one();
        for &s in taken {
            if s > a && s < next {
                next = s;
            }
        }
        if boundary == 0 {
            for j in self.cut_ids() {
                let f = self.foot(j);
                if f > a && f < next {
                    next = f;
                }
            }
        }
        (a + next) / Rational64::from_integer(2)
    }
}

/// A properly embedded arc, oriented from `start` to `end`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct EmbeddedArc {
    pub start: BoundaryPoint,
    pub end: BoundaryPoint,
    pub word: Word,
}

impl EmbeddedArc {
    /// Builds and normalizes an arc, rejecting anything that is not
    /// embedded.
    pub fn new(surface: &PlanarSurface, start: BoundaryPoint, end: BoundaryPoint, word: Word) -> Result<Self> {
        let raw = EmbeddedArc { start, end, word };
        reduce_arc(surface, &raw)
    }

    /// Arc without validation; callers must reduce before relying on it.
    pub fn raw(start: BoundaryPoint, end: BoundaryPoint, word: Word) -> Self {
        EmbeddedArc { start, end, word }
    }

    pub fn reversed(&self) -> Self {
        EmbeddedArc { start: self.end, end: self.start, word: inverse_word(&self.word) }
    }

    pub fn len(&self) -> usize {
        self.word.len()
    }

    pub fn is_empty(&self) -> bool {
        self.word.is_empty()
    }
}

impl fmt::Display for EmbeddedArc {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} -[{}]-> {}", self.start, format_word(&self.word), self.end)
    }
}

/// A simple closed curve given by its cyclic crossing word.
#[derive(Debug, Clone)]
pub struct SimpleClosedCurve {
    pub word: Word,
    /// Set when the curve is parallel to a boundary component.
    pub boundary_parallel: bool,
}

impl PartialEq for SimpleClosedCurve {
    fn eq(&self, other: &Self) -> bool {
        least_rotation(&self.word) == least_rotation(&other.word)
    }
}

impl Eq for SimpleClosedCurve {}

impl SimpleClosedCurve {
    pub fn new(surface: &PlanarSurface, word: Word) -> Result<Self> {
        reduce_curve(surface, &SimpleClosedCurve { word, boundary_parallel: false })
    }

    /// The curve parallel to boundary component `c`, traversed
    /// counter-clockwise in the plane picture.
    pub fn boundary_curve(surface: &PlanarSurface, c: usize) -> Result<Self> {
        let word = if c == 0 { surface.cut_ids().map(Letter::plus).collect() } else { vec![Letter::plus(c)] };
        if c > surface.inner_holes {
            return Err(EngineError::UnknownBoundary(c));
        }
        let mut curve = SimpleClosedCurve::new(surface, word)?;
        curve.boundary_parallel = true;
        Ok(curve)
    }

    pub fn reversed(&self) -> Self {
        SimpleClosedCurve { word: inverse_word(&self.word), boundary_parallel: self.boundary_parallel }
    }
}

impl fmt::Display for SimpleClosedCurve {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({})", format_word(&self.word))
    }
}

fn check_word(surface: &PlanarSurface, w: &[Letter]) -> Result<()> {
    w.iter().try_for_each(|&l| surface.check_letter(l))
}

/// Normal form of an arc: freely reduced and checked to be embedded.
pub fn reduce_arc(surface: &PlanarSurface, x: &EmbeddedArc) -> Result<EmbeddedArc> {
    surface.check_point(x.start)?;
    surface.check_point(x.end)?;
    check_word(surface, &x.word)?;
    if x.start == x.end {
        return Err(EngineError::DegenerateArc(x.start));
    }
    let r = EmbeddedArc { start: x.start, end: x.end, word: free_reduce(&x.word) };
    let selfs = self_intersections(surface, &Strand::of_arc(surface, &r));
    if selfs > 0 {
        return Err(EngineError::NotEmbedded { what: r.to_string(), crossings: selfs });
    }
    Ok(r)
}

/// Normal form of a closed curve: cyclically reduced, essential unless
/// flagged boundary-parallel, primitive and embedded.
pub fn reduce_curve(surface: &PlanarSurface, x: &SimpleClosedCurve) -> Result<SimpleClosedCurve> {
    check_word(surface, &x.word)?;
    let w = cyclic_reduce(&x.word);
    if w.is_empty() {
        return Err(EngineError::Inessential);
    }
    if is_proper_power(&w) {
        return Err(EngineError::NotEmbedded { what: format_word(&w), crossings: usize::MAX });
    }
    let boundary_parallel = x.boundary_parallel || w.len() == 1 || {
        let outer: Word = surface.cut_ids().map(Letter::plus).collect();
        let lr = least_rotation(&w);
        lr == least_rotation(&outer) || lr == least_rotation(&inverse_word(&outer))
    };
    let r = SimpleClosedCurve { word: w, boundary_parallel };
    let selfs = self_intersections(surface, &Strand::of_curve(surface, &r));
    if selfs > 0 {
        return Err(EngineError::NotEmbedded { what: r.to_string(), crossings: selfs });
    }
    Ok(r)
}

/// Either kind of one-dimensional object the engine handles.
#[derive(Debug, Clone, Copy)]
pub enum PathRef<'a> {
    Arc(&'a EmbeddedArc),
    Curve(&'a SimpleClosedCurve),
}

impl<'a> From<&'a EmbeddedArc> for PathRef<'a> {
    fn from(a: &'a EmbeddedArc) -> Self {
        PathRef::Arc(a)
    }
}

impl<'a> From<&'a SimpleClosedCurve> for PathRef<'a> {
    fn from(c: &'a SimpleClosedCurve) -> Self {
        PathRef::Curve(c)
    }
}

impl PathRef<'_> {
    pub(crate) fn strand(&self, surface: &PlanarSurface) -> Strand {
        match self {
            PathRef::Arc(a) => Strand::of_arc(surface, a),
            PathRef::Curve(c) => Strand::of_curve(surface, c),
        }
    }
}

/// Minimal number of transverse interior intersections between two reduced
/// arcs or curves. Shared endpoints do not count.
pub fn geometric_intersection<'a, 'b>(surface: &PlanarSurface, x: impl Into<PathRef<'a>>, y: impl Into<PathRef<'b>>) -> usize {
    let sx = x.into().strand(surface);
    let sy = y.into().strand(surface);
    engine::crossings(surface, &sx, &sy).len()
}

/// Number of self-crossings of a reduced word; zero for embedded objects.
pub(crate) fn self_intersections(surface: &PlanarSurface, s: &Strand) -> usize {
    engine::self_crossings(surface, s)
}

/// Arc parallel to the boundary segment of `c` running from `from` to `to`
/// along the boundary orientation. The arc cuts off a disc containing that
/// segment.
pub fn boundary_parallel_arc(surface: &PlanarSurface, c: usize, from: Slot, to: Slot) -> Result<EmbeddedArc> {
    if from == to {
        return Err(EngineError::DegenerateArc(BoundaryPoint::new(c, from)));
    }
    let start = BoundaryPoint::new(c, from);
    let end = BoundaryPoint::new(c, to);
    surface.check_point(start)?;
    surface.check_point(end)?;
    let mut word = Vec::new();
    if c == 0 {
        // Walk counter-clockwise from `from` to `to`, passing cut feet.
        let mut feet: Vec<(Slot, usize)> = surface.cut_ids().map(|j| (surface.foot(j), j)).collect();
        feet.sort();
        let passes = |f: Slot| {
            if from < to {
                from < f && f < to
            } else {
                f > from || f < to
            }
        };
        let ordered: Vec<usize> = if from < to {
            feet.iter().filter(|(f, _)| passes(*f)).map(|&(_, j)| j).collect()
        } else {
            feet.iter().filter(|(f, _)| *f > from).chain(feet.iter().filter(|(f, _)| *f < to)).map(|&(_, j)| j).collect()
        };
        word.extend(ordered.into_iter().map(Letter::plus));
    } else if from > to {
        // Passing the end of the cut on the hole.
        word.push(Letter::minus(c));
    }
    EmbeddedArc::new(surface, start, end, word)
}

/// Image of an arc under the Dehn twist along `c` raised to `power`.
/// Positive powers are right-handed twists.
pub fn twist_arc(surface: &PlanarSurface, x: &EmbeddedArc, c: &SimpleClosedCurve, power: i32) -> EmbeddedArc {
    let cs = Strand::of_curve(surface, c);
    let mut cur = x.clone();
    for _ in 0..power.unsigned_abs() {
        let xs = Strand::of_arc(surface, &cur);
        let w = engine::twist_splice(surface, &xs, &cur.word, &cs, &c.word, power.signum());
        cur = EmbeddedArc { start: cur.start, end: cur.end, word: free_reduce(&w) };
    }
    cur
}

/// Image of a closed curve under the Dehn twist along `c` raised to `power`.
pub fn twist_curve(surface: &PlanarSurface, x: &SimpleClosedCurve, c: &SimpleClosedCurve, power: i32) -> SimpleClosedCurve {
    let cs = Strand::of_curve(surface, c);
    let mut cur = x.clone();
    for _ in 0..power.unsigned_abs() {
        let xs = Strand::of_curve(surface, &cur);
        let w = engine::twist_splice(surface, &xs, &cur.word, &cs, &c.word, power.signum());
        cur = SimpleClosedCurve { word: cyclic_reduce(&w), boundary_parallel: cur.boundary_parallel };
    }
    cur
}

/// Position of `y` relative to `x` for two arcs leaving the same point:
/// `Greater` when `y` lies strictly to the right of `x`, `Equal` when the two
/// are isotopic rel endpoints.
pub fn compare_from_start(surface: &PlanarSurface, x: &EmbeddedArc, y: &EmbeddedArc) -> Result<std::cmp::Ordering> {
    if x.start != y.start {
        return Err(EngineError::DifferentStart);
    }
    Ok(engine::compare_from_start(surface, &Strand::of_arc(surface, x), &Strand::of_arc(surface, y)))
}

/// Whether an arc or curve has no self-crossings.
pub fn is_embedded<'a>(surface: &PlanarSurface, x: impl Into<PathRef<'a>>) -> bool {
    self_intersections(surface, &x.into().strand(surface)) == 0
}

/// Visits embedded arcs from `start` to any of `ends`, disjoint from every
/// object in `avoid`, in order of word length and then lexicographic word
/// order (cut label first, `+` before `-`). Stops early when `f` returns
/// `false`.
pub fn for_each_arc<'a>(
    surface: &PlanarSurface,
    start: BoundaryPoint,
    ends: &[BoundaryPoint],
    avoid: &[PathRef<'a>],
    max_len: usize,
    mut f: impl FnMut(&EmbeddedArc) -> bool,
) {
    let avoid: Vec<Strand> = avoid.iter().map(|p| p.strand(surface)).collect();
    let letters: Vec<Letter> = surface.cut_ids().flat_map(|j| [Letter::plus(j), Letter::minus(j)]).collect();
    let mut level: Vec<Word> = vec![Vec::new()];
    for len in 0..=max_len {
        for w in &level {
            for &end in ends {
                if end == start {
                    continue;
                }
                let arc = EmbeddedArc { start, end, word: w.clone() };
                let strand = Strand::of_arc(surface, &arc);
                if self_intersections(surface, &strand) > 0 {
                    continue;
                }
                if avoid.iter().any(|o| !engine::crossings(surface, &strand, o).is_empty()) {
                    continue;
                }
                if !f(&arc) {
                    return;
                }
            }
        }
        if len == max_len {
            break;
        }
        let mut next = Vec::new();
        for w in &level {
            for &l in &letters {
                if w.last() == Some(&l.inverse()) {
                    continue;
                }
                let mut v = w.clone();
                v.push(l);
                if !engine::prefix_conflicts(surface, &Strand::of_prefix(surface, start, &v), &avoid) {
                    next.push(v);
                }
            }
        }
        level = next;
    }
}

#[cfg(test)]
mod tests;

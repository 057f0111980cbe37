//! Mapping classes as Dehn twist words, and open books built from them.

use std::collections::BTreeMap;
use std::fmt;

use num_rational::Rational64;
use serde::{Deserialize, Serialize};

use crate::error::{EngineError, Result};
use crate::surface::{
    boundary_parallel_arc, geometric_intersection, twist_arc, twist_curve, EmbeddedArc, Letter, PlanarSurface, SimpleClosedCurve, Slot,
    Word,
};

/// One factor `T_curve^exponent`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TwistFactor {
    pub curve: String,
    pub exponent: i32,
}

/// A product of Dehn twists written as a composition: the rightmost factor
/// acts first, so `[T_a, T_b]` is `T_a ∘ T_b`.
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(from = "Vec<TwistFactor>", into = "Vec<TwistFactor>")]
pub struct TwistWord {
    factors: Vec<TwistFactor>,
}

impl From<Vec<TwistFactor>> for TwistWord {
    fn from(factors: Vec<TwistFactor>) -> Self {
        TwistWord::new(factors)
    }
}

impl From<TwistWord> for Vec<TwistFactor> {
    fn from(w: TwistWord) -> Self {
        w.factors
    }
}

impl TwistWord {
    /// Merges adjacent factors on the same curve and drops zero exponents.
    pub fn new(factors: Vec<TwistFactor>) -> Self {
        let mut out: Vec<TwistFactor> = Vec::with_capacity(factors.len());
        for f in factors {
            if f.exponent == 0 {
                continue;
            }
            match out.last_mut() {
                Some(last) if last.curve == f.curve => {
                    last.exponent += f.exponent;
                    if last.exponent == 0 {
                        out.pop();
                    }
                }
                _ => out.push(f),
            }
        }
        TwistWord { factors: out }
    }

    pub fn identity() -> Self {
        TwistWord::default()
    }

    pub fn twist(curve: &str, exponent: i32) -> Self {
        TwistWord::new(vec![TwistFactor { curve: curve.to_string(), exponent }])
    }

    pub fn from_pairs(pairs: &[(&str, i32)]) -> Self {
        TwistWord::new(pairs.iter().map(|&(c, e)| TwistFactor { curve: c.to_string(), exponent: e }).collect())
    }

    pub fn factors(&self) -> &[TwistFactor] {
        &self.factors
    }

    pub fn is_identity(&self) -> bool {
        self.factors.is_empty()
    }

    pub fn len(&self) -> usize {
        self.factors.len()
    }

    pub fn is_empty(&self) -> bool {
        self.factors.is_empty()
    }

    pub fn inverse(&self) -> Self {
        TwistWord::new(self.factors.iter().rev().map(|f| TwistFactor { curve: f.curve.clone(), exponent: -f.exponent }).collect())
    }

    /// `self ∘ other`: `other` acts first.
    pub fn compose(&self, other: &TwistWord) -> Self {
        TwistWord::new(self.factors.iter().chain(other.factors.iter()).cloned().collect())
    }

    /// Sum of the exponents on `curve`.
    pub fn exponent_of(&self, curve: &str) -> i32 {
        self.factors.iter().filter(|f| f.curve == curve).map(|f| f.exponent).sum()
    }

    pub fn curves(&self) -> impl Iterator<Item = &str> {
        self.factors.iter().map(|f| f.curve.as_str())
    }

    /// Whether every exponent is positive.
    pub fn is_positive(&self) -> bool {
        self.factors.iter().all(|f| f.exponent > 0)
    }
}

impl fmt::Display for TwistWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.factors.is_empty() {
            return write!(f, "id");
        }
        let parts: Vec<String> = self
            .factors
            .iter()
            .map(|t| if t.exponent == 1 { format!("T_{}", t.curve) } else { format!("T_{}^{}", t.curve, t.exponent) })
            .collect();
        write!(f, "{}", parts.join(" "))
    }
}

/// Objects a Dehn twist can act on.
pub trait Twistable: Clone {
    fn twisted(&self, surface: &PlanarSurface, c: &SimpleClosedCurve, power: i32) -> Self;
}

impl Twistable for EmbeddedArc {
    fn twisted(&self, surface: &PlanarSurface, c: &SimpleClosedCurve, power: i32) -> Self {
        twist_arc(surface, self, c, power)
    }
}

impl Twistable for SimpleClosedCurve {
    fn twisted(&self, surface: &PlanarSurface, c: &SimpleClosedCurve, power: i32) -> Self {
        twist_curve(surface, self, c, power)
    }
}

/// The page of an open book.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum Page {
    Planar(PlanarSurface),
    /// Known only by its topological type; the curve engine refuses it.
    Symbolic {
        genus: usize,
        boundary_count: usize,
    },
}

impl Page {
    pub fn euler_characteristic(&self) -> i64 {
        match self {
            Page::Planar(s) => s.euler_characteristic(),
            Page::Symbolic { genus, boundary_count } => 2 - 2 * *genus as i64 - *boundary_count as i64,
        }
    }

    pub fn boundary_count(&self) -> usize {
        match self {
            Page::Planar(s) => s.boundary_count(),
            Page::Symbolic { boundary_count, .. } => *boundary_count,
        }
    }

    pub fn genus(&self) -> usize {
        match self {
            Page::Planar(_) => 0,
            Page::Symbolic { genus, .. } => *genus,
        }
    }
}

/// A page, a registry of named curves on it, and a monodromy word over
/// those names.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "OpenBookDoc", into = "OpenBookDoc")]
pub struct OpenBook {
    pub page: Page,
    pub curves: BTreeMap<String, SimpleClosedCurve>,
    pub monodromy: TwistWord,
}

#[derive(Serialize, Deserialize)]
struct OpenBookDoc {
    surface: Page,
    #[serde(default)]
    curves: BTreeMap<String, Word>,
    monodromy: TwistWord,
}

impl TryFrom<OpenBookDoc> for OpenBook {
    type Error = EngineError;

    fn try_from(doc: OpenBookDoc) -> Result<Self> {
        match doc.surface {
            Page::Planar(s) => {
                let mut curves = BTreeMap::new();
                for (name, word) in doc.curves {
                    curves.insert(name, SimpleClosedCurve::new(&s, word)?);
                }
                OpenBook::planar(s, curves, doc.monodromy)
            }
            page => Ok(OpenBook { page, curves: BTreeMap::new(), monodromy: doc.monodromy }),
        }
    }
}

impl From<OpenBook> for OpenBookDoc {
    fn from(ob: OpenBook) -> Self {
        OpenBookDoc { surface: ob.page, curves: ob.curves.into_iter().map(|(k, c)| (k, c.word)).collect(), monodromy: ob.monodromy }
    }
}

impl OpenBook {
    /// An engine-backed open book. Every curve named in the monodromy must
    /// be in the registry.
    pub fn planar(surface: PlanarSurface, curves: BTreeMap<String, SimpleClosedCurve>, monodromy: TwistWord) -> Result<Self> {
        for name in monodromy.curves() {
            if !curves.contains_key(name) {
                return Err(EngineError::UnknownCurve(name.to_string()));
            }
        }
        Ok(OpenBook { page: Page::Planar(surface), curves, monodromy })
    }

    pub fn is_engine_backed(&self) -> bool {
        matches!(self.page, Page::Planar(_))
    }

    pub fn surface(&self) -> Result<&PlanarSurface> {
        match &self.page {
            Page::Planar(s) => Ok(s),
            Page::Symbolic { .. } => Err(EngineError::Symbolic),
        }
    }

    /// The same page and registry with another monodromy.
    pub fn with_monodromy(&self, monodromy: TwistWord) -> Result<Self> {
        match &self.page {
            Page::Planar(s) => OpenBook::planar(*s, self.curves.clone(), monodromy),
            page => Ok(OpenBook { page: page.clone(), curves: self.curves.clone(), monodromy }),
        }
    }

    /// Image of `x` under the monodromy.
    pub fn apply<T: Twistable>(&self, x: &T) -> Result<T> {
        self.apply_word(&self.monodromy, x)
    }

    /// Image of `x` under the inverse monodromy.
    pub fn apply_inverse<T: Twistable>(&self, x: &T) -> Result<T> {
        self.apply_word(&self.monodromy.inverse(), x)
    }

    /// Image of `x` under any word over this book's curve registry.
    pub fn apply_word<T: Twistable>(&self, w: &TwistWord, x: &T) -> Result<T> {
        let s = self.surface()?;
        let mut cur = None;
        for f in w.factors().iter().rev() {
            let c = self.curves.get(&f.curve).ok_or_else(|| EngineError::UnknownCurve(f.curve.clone()))?;
            cur = Some(cur.as_ref().unwrap_or(x).twisted(s, c, f.exponent));
        }
        Ok(cur.unwrap_or_else(|| x.clone()))
    }
}

/// Registry of the five curves of the four-holed sphere family together
/// with the four boundary-parallel curves `d1..d4` (around `C_0..C_3`).
pub fn four_holed_sphere_curves() -> (PlanarSurface, BTreeMap<String, SimpleClosedCurve>) {
    let s = PlanarSurface::new(3);
    let mut m = BTreeMap::new();
    for c in 0..4 {
        m.insert(format!("d{}", c + 1), SimpleClosedCurve::boundary_curve(&s, c).expect("boundary"));
    }
    let bd = |c: usize| SimpleClosedCurve::boundary_curve(&s, c).expect("boundary");
    m.insert("a".into(), bd(FAMILY_BOUNDARIES[0]));
    m.insert("b".into(), bd(FAMILY_BOUNDARIES[1]));
    m.insert("c".into(), bd(FAMILY_BOUNDARIES[2]));
    m.insert("d".into(), bd(FAMILY_BOUNDARIES[3]));
    m.insert("e".into(), SimpleClosedCurve::new(&s, FAMILY_E.iter().map(|&(j, p)| letter(j, p)).collect()).expect("e"));
    (s, m)
}

/// Boundary components carrying `a, b, c, d`.
pub const FAMILY_BOUNDARIES: [usize; 4] = [1, 0, 2, 3];
/// Crossing word of `e`.
pub const FAMILY_E: [(usize, bool); 2] = [(2, true), (3, true)];

fn letter(j: usize, plus: bool) -> Letter {
    if plus {
        Letter::plus(j)
    } else {
        Letter::minus(j)
    }
}

/// `Φ_{h,i,k} = T_a^h T_b^i T_c T_d T_e^{-k-1}` on the four-holed sphere.
pub fn phi_family(h: i32, i: i32, k: i32) -> Result<OpenBook> {
    if h < 1 || i < 1 || k < 1 {
        return Err(EngineError::InvalidParameter(format!("h, i, k must be positive, got ({h}, {i}, {k})")));
    }
    let (s, curves) = four_holed_sphere_curves();
    let w = TwistWord::from_pairs(&[("a", h), ("b", i), ("c", 1), ("d", 1), ("e", -k - 1)]);
    OpenBook::planar(s, curves, w)
}

/// Opaque name of a curve living on a symbolic page.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CurveHandle(pub String);

/// Result of the two positive stabilizations along `a_C` and `b_C`.
#[derive(Debug, Clone)]
pub struct Stabilization {
    pub book: OpenBook,
    pub alpha: CurveHandle,
    pub beta: CurveHandle,
    /// The stabilization arcs on the old page, when it is planar.
    pub arcs: Option<(EmbeddedArc, EmbeddedArc)>,
}

/// Default stabilization arcs around a point of `C`: `a_C` cuts off a short
/// boundary segment containing `anchor`, `b_C` cuts off the long segment on
/// the other side, and the two meet twice.
pub fn hkm_arcs(surface: &PlanarSurface, c: usize, anchor: Slot) -> Result<(EmbeddedArc, EmbeddedArc)> {
    let mut taken: Vec<Slot> = vec![anchor];
    if c == 0 {
        taken.extend(surface.cut_ids().map(|j| surface.foot(j)));
    }
    let gap = taken
        .iter()
        .filter(|&&s| s != anchor)
        .map(|&s| {
            let d = if s > anchor { s - anchor } else { anchor - s };
            d.min(Rational64::from_integer(1) - d)
        })
        .chain([anchor, Rational64::from_integer(1) - anchor])
        .filter(|d| *d > Rational64::from_integer(0))
        .min()
        .unwrap_or(Rational64::new(1, 2));
    let eps = gap / 8;
    let (s1, s2, s3, s4) = (anchor - eps * 2, anchor - eps, anchor + eps, anchor + eps * 2);
    let a = boundary_parallel_arc(surface, c, s1, s4)?;
    let b = boundary_parallel_arc(surface, c, s3, s2)?;
    Ok((a, b))
}

/// Positive stabilizations along `a_C` and `b_C`: the new monodromy is
/// `T_β ∘ T_α ∘ φ`. The page gains a genus, keeps its boundary count and
/// loses 2 from its Euler characteristic, so the result is symbolic.
pub fn hkm_stabilize(ob: &OpenBook, c: usize, anchor: Option<Slot>) -> Result<Stabilization> {
    if c >= ob.page.boundary_count() {
        return Err(EngineError::UnknownBoundary(c));
    }
    let arcs = match (&ob.page, anchor) {
        (Page::Planar(s), Some(anchor)) => {
            let (a, b) = hkm_arcs(s, c, anchor)?;
            let i = geometric_intersection(s, &a, &b);
            if i != 2 {
                return Err(EngineError::Precondition(format!("i(a_C, b_C) = {i}, expected 2")));
            }
            Some((a, b))
        }
        _ => None,
    };
    let page = Page::Symbolic { genus: ob.page.genus() + 1, boundary_count: ob.page.boundary_count() };
    let monodromy = TwistWord::from_pairs(&[("beta", 1), ("alpha", 1)]).compose(&ob.monodromy);
    Ok(Stabilization {
        book: OpenBook { page, curves: BTreeMap::new(), monodromy },
        alpha: CurveHandle("alpha".into()),
        beta: CurveHandle("beta".into()),
        arcs,
    })
}

#[cfg(test)]
mod tests;

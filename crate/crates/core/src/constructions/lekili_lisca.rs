//! The movie of the overtwisted disc for `Φ_{h,i,k}`, instantiated from a
//! template with integer weights.
//!
//! One negative hyperbolic point joins the b-leaves `B1 = p1 → n1` and
//! `B2 = p2 → n2` into `X = p1 → n2` and `Y = p2 → n1`. The two leaves then
//! take turns swinging their positive end to the next point: `X` through
//! `x1..xk` and `q`, `Y` through `y1..yk`, and finally `Y` lands on `p1`
//! and `X` on `p2`, which are the preimages of `B1` and `B2`.

use std::collections::BTreeMap;

use num_rational::Rational64;
use num_traits::Zero;
use serde::Deserialize;

use crate::error::{EngineError, Result};
use crate::mcg::{phi_family, OpenBook};
use crate::movie::{build_movie, resolve_event, EllipticPoint, Leaf, Movie, MovieEvent, Page, Sign};
use crate::surface::{BoundaryPoint, EmbeddedArc, Letter, PlanarSurface, Word};

/// The template, as shipped.
pub const LL_TEMPLATE: &str = include_str!("../../data/lekili_lisca.json");

/// Counts stated for the disc: `(e+, e-, h+, h-)`.
pub fn paper_counts(k: i32) -> (i32, i32, i32, i32) {
    (2 * k + 3, 2, 2 * k + 3, 2)
}

#[derive(Debug, Deserialize)]
struct Template {
    inner_holes: usize,
    points: Vec<PointSpec>,
    b_leaves: Vec<BLeafSpec>,
    steps: Vec<StepSpec>,
}

#[derive(Debug, Deserialize)]
struct PointSpec {
    name: String,
    sign: Sign,
    boundary: usize,
    #[serde(default)]
    slot: Option<String>,
    #[serde(default)]
    spread: Option<[String; 2]>,
    #[serde(default)]
    at: Option<String>,
    #[serde(default)]
    of: Option<String>,
    #[serde(default)]
    repeat: Option<String>,
}

#[derive(Debug, Deserialize)]
struct BLeafSpec {
    name: String,
    from: String,
    to: String,
    word: String,
}

#[derive(Debug, Deserialize)]
#[serde(untagged)]
enum StepSpec {
    Group { repeat: String, steps: Vec<StepSpec> },
    Join { sign: Sign, leaves: [String; 2], from: String, to: String, word: String, produce: [String; 2] },
    Swing { sign: Sign, leaf: String, to: String, word: String },
}

#[derive(Debug, Clone, Copy)]
struct Weights {
    h: i64,
    i: i64,
    k: i64,
    j: i64,
}

fn bad(msg: impl Into<String>) -> EngineError {
    EngineError::InvalidParameter(format!("template: {}", msg.into()))
}

/// Evaluates an affine expression such as `h-1`, `2k+3` or `j`.
fn eval(expr: &str, w: Weights) -> Result<i64> {
    let expr: String = expr.chars().filter(|c| !c.is_whitespace()).collect();
    if expr.is_empty() {
        return Err(bad("empty expression"));
    }
    let mut total = 0;
    let mut rest = expr.as_str();
    while !rest.is_empty() {
        let (neg, body) = match rest.as_bytes()[0] {
            b'-' => (true, &rest[1..]),
            b'+' => (false, &rest[1..]),
            _ => (false, rest),
        };
        let end = body.find(['+', '-']).unwrap_or(body.len());
        let term = &body[..end];
        rest = &body[end..];
        let digits = term.chars().take_while(|c| c.is_ascii_digit()).count();
        let coef: i64 = if digits == 0 { 1 } else { term[..digits].parse().map_err(|_| bad(term))? };
        let var = match &term[digits..] {
            "" if digits > 0 => 1,
            "h" => w.h,
            "i" => w.i,
            "k" => w.k,
            "j" => w.j,
            other => return Err(bad(format!("unknown weight {other:?} in {expr:?}"))),
        };
        total += if neg { -coef * var } else { coef * var };
    }
    Ok(total)
}

fn parse_letter(tok: &str) -> Result<Letter> {
    let (num, sign) = tok.split_at(tok.len().saturating_sub(1));
    let j: usize = num.parse().map_err(|_| bad(format!("bad letter {tok:?}")))?;
    match sign {
        "+" => Ok(Letter::plus(j)),
        "-" => Ok(Letter::minus(j)),
        _ => Err(bad(format!("bad letter {tok:?}"))),
    }
}

/// Expands a word such as `3+ (1+ 2+ 3+)^i` or `(1-)^{h-1}`.
fn parse_word(src: &str, w: Weights) -> Result<Word> {
    let mut out = Vec::new();
    let mut rest = src.trim();
    while !rest.is_empty() {
        if let Some(inner) = rest.strip_prefix('(') {
            let close = inner.find(')').ok_or_else(|| bad(format!("unclosed group in {src:?}")))?;
            let group = parse_word(&inner[..close], w)?;
            let after = inner[close + 1..].trim_start();
            let after = after.strip_prefix('^').ok_or_else(|| bad(format!("group without power in {src:?}")))?;
            let (expr, tail) = if let Some(b) = after.strip_prefix('{') {
                let e = b.find('}').ok_or_else(|| bad(format!("unclosed power in {src:?}")))?;
                (&b[..e], &b[e + 1..])
            } else {
                let e = after.find(char::is_whitespace).unwrap_or(after.len());
                (&after[..e], &after[e..])
            };
            let n = eval(expr, w)?;
            if n < 0 {
                return Err(bad(format!("negative power {expr} = {n}")));
            }
            for _ in 0..n {
                out.extend(group.iter().copied());
            }
            rest = tail.trim_start();
        } else {
            let e = rest.find(char::is_whitespace).unwrap_or(rest.len());
            out.push(parse_letter(&rest[..e])?);
            rest = rest[e..].trim_start();
        }
    }
    Ok(out)
}

fn parse_ratio(s: &str) -> Result<Rational64> {
    s.trim().parse().map_err(|_| bad(format!("bad slot {s:?}")))
}

fn expand_name(name: &str, j: i64) -> String {
    name.replace("{j}", &j.to_string())
}

struct Builder<'a> {
    s: PlanarSurface,
    w: Weights,
    points: BTreeMap<String, &'a EllipticPoint>,
    names: BTreeMap<String, usize>,
    page: Page,
    events: Vec<MovieEvent>,
}

impl Builder<'_> {
    fn point(&self, name: &str) -> Result<BoundaryPoint> {
        self.points.get(name).map(|e| e.point).ok_or_else(|| bad(format!("unknown point {name:?}")))
    }

    fn leaf(&self, name: &str) -> Result<usize> {
        self.names.get(name).copied().ok_or_else(|| bad(format!("unknown leaf {name:?}")))
    }

    fn fire(&mut self, sign: Sign, leaves: [usize; 2], arc: EmbeddedArc) -> Result<[usize; 2]> {
        let ev = MovieEvent { t: Rational64::zero(), sign, describing_arc: arc, leaves };
        let r = resolve_event(&self.s, &self.page, &ev)?;
        self.page = r.page;
        self.events.push(ev);
        Ok(r.produced)
    }

    fn run(&mut self, steps: &[StepSpec]) -> Result<()> {
        for step in steps {
            match step {
                StepSpec::Group { repeat, steps } => {
                    let n = eval(repeat, self.w)?;
                    let outer = self.w;
                    for j in 1..=n {
                        self.w.j = j;
                        self.run(steps)?;
                    }
                    self.w = outer;
                }
                StepSpec::Join { sign, leaves, from, to, word, produce } => {
                    let ids = [self.leaf(&leaves[0])?, self.leaf(&leaves[1])?];
                    let arc = EmbeddedArc::new(&self.s, self.point(from)?, self.point(to)?, parse_word(word, self.w)?)?;
                    let out = self.fire(*sign, ids, arc)?;
                    self.names.insert(produce[0].clone(), out[0]);
                    self.names.insert(produce[1].clone(), out[1]);
                }
                StepSpec::Swing { sign, leaf, to, word } => {
                    let id = self.leaf(leaf)?;
                    let b = self.page.leaf(id).expect("named leaf is live");
                    let n = b.end.ok_or_else(|| bad(format!("{leaf} is not a b-leaf")))?;
                    let p = self.point(&expand_name(to, self.w.j))?;
                    let stub = self.page.a_leaves().find(|a| a.start == p).map(|a| a.id).ok_or_else(|| bad(format!("no a-leaf at {p}")))?;
                    let arc = EmbeddedArc::new(&self.s, n, p, parse_word(word, self.w)?)?;
                    let out = self.fire(*sign, [id, stub], arc)?;
                    self.names.insert(leaf.clone(), out[1]);
                }
            }
        }
        Ok(())
    }
}

/// Instantiates the template at `(h, i, k)` and checks it against `book`.
/// The movie is only returned if every event is valid and the final page is
/// carried back to the initial one by the monodromy of `book`.
pub fn lekili_lisca_movie_in(book: &OpenBook, h: i32, i: i32, k: i32) -> Result<Movie> {
    if h < 1 || i < 1 || k < 1 {
        return Err(EngineError::InvalidParameter(format!("h, i, k must be positive, got ({h}, {i}, {k})")));
    }
    let tpl: Template = serde_json::from_str(LL_TEMPLATE).map_err(|e| bad(e.to_string()))?;
    let s = *book.surface()?;
    if s.inner_holes != tpl.inner_holes {
        return Err(EngineError::SurfaceMismatch);
    }
    let w = Weights { h: h.into(), i: i.into(), k: k.into(), j: 0 };

    let mut elliptic = Vec::new();
    let mut names = Vec::new();
    for spec in &tpl.points {
        let count = spec.repeat.as_deref().map(|r| eval(r, w)).transpose()?;
        for j in 1..=count.unwrap_or(1) {
            let slot = match (&spec.slot, &spec.spread) {
                (Some(x), None) => parse_ratio(x)?,
                (None, Some([lo, hi])) => {
                    let (lo, hi) = (parse_ratio(lo)?, parse_ratio(hi)?);
                    let wj = Weights { j, ..w };
                    let at = spec.at.as_deref().map(|e| eval(e, wj)).transpose()?.unwrap_or(j);
                    let of = spec.of.as_deref().map(|e| eval(e, wj)).transpose()?.unwrap_or(count.unwrap_or(1));
                    if !(1..=of).contains(&at) {
                        return Err(bad(format!("point {} at {at} of {of}", spec.name)));
                    }
                    lo + (hi - lo) * Rational64::new(at, of + 1)
                }
                _ => return Err(bad(format!("point {} needs exactly one of slot, spread", spec.name))),
            };
            let point = BoundaryPoint::new(spec.boundary, slot);
            s.check_point(point)?;
            names.push(expand_name(&spec.name, j));
            elliptic.push(EllipticPoint { id: elliptic.len(), sign: spec.sign, point });
        }
    }

    let mut leaves = Vec::new();
    let mut leaf_names = BTreeMap::new();
    let lookup = |n: &str| -> Result<BoundaryPoint> {
        names.iter().position(|x| x == n).map(|i| elliptic[i].point).ok_or_else(|| bad(format!("unknown point {n:?}")))
    };
    for b in &tpl.b_leaves {
        let arc = EmbeddedArc::new(&s, lookup(&b.from)?, lookup(&b.to)?, parse_word(&b.word, w)?)?;
        leaf_names.insert(b.name.clone(), leaves.len());
        leaves.push(Leaf::b(leaves.len(), &arc));
    }
    for e in elliptic.iter().filter(|e| e.sign == Sign::Positive) {
        if !leaves.iter().any(|l: &Leaf| l.start == e.point) {
            leaves.push(Leaf::a(leaves.len(), e.point));
        }
    }
    let initial = Page { t: Rational64::zero(), elliptic: elliptic.clone(), leaves };
    initial.validate(&s)?;

    let mut b = Builder {
        s,
        w,
        points: names.iter().cloned().zip(elliptic.iter()).collect(),
        names: leaf_names,
        page: initial.clone(),
        events: Vec::new(),
    };
    b.run(&tpl.steps)?;
    let mut events = b.events;
    let m = events.len() as i64;
    for (n, ev) in events.iter_mut().enumerate() {
        ev.t = Rational64::new(2 * n as i64 + 1, 2 * m);
    }
    build_movie(book.clone(), initial, events)
}

/// The movie for `Φ_{h,i,k}`.
pub fn lekili_lisca_movie(h: i32, i: i32, k: i32) -> Result<Movie> {
    lekili_lisca_movie_in(&phi_family(h, i, k)?, h, i, k)
}

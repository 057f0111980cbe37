//! The right-veering order on arcs leaving a common point, a bounded search
//! for arcs sent to the left, and the chain of arcs that the overtwisted disc
//! construction starts from.

use std::cmp::Ordering;

use num_rational::Rational64;
use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{EngineError, Result};
use crate::mcg::OpenBook;
use crate::surface::{compare_from_start, for_each_arc, geometric_intersection, BoundaryPoint, EmbeddedArc, PathRef, PlanarSurface};

/// Position of the second arc relative to the first at their common start.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum SideComparison {
    /// The second arc lies strictly on the right: `γ > γ'`.
    StrictlyRight,
    /// The second arc lies strictly on the left: `γ' > γ`.
    StrictlyLeft,
    Isotopic,
}

impl SideComparison {
    pub fn reverse(self) -> Self {
        match self {
            SideComparison::StrictlyRight => SideComparison::StrictlyLeft,
            SideComparison::StrictlyLeft => SideComparison::StrictlyRight,
            SideComparison::Isotopic => SideComparison::Isotopic,
        }
    }
}

pub fn side_compare(surface: &PlanarSurface, g: &EmbeddedArc, g2: &EmbeddedArc) -> Result<SideComparison> {
    Ok(match compare_from_start(surface, g, g2)? {
        Ordering::Greater => SideComparison::StrictlyRight,
        Ordering::Less => SideComparison::StrictlyLeft,
        Ordering::Equal => SideComparison::Isotopic,
    })
}

/// `γ ≥ φ(γ)`: the image is isotopic to `γ` or lies on its right.
pub fn is_right_veering_on(ob: &OpenBook, g: &EmbeddedArc) -> Result<bool> {
    let s = ob.surface()?;
    let image = ob.apply(g)?;
    Ok(side_compare(s, g, &image)? != SideComparison::StrictlyLeft)
}

/// Start point used for each boundary component by the witness search.
pub fn canonical_start(c: usize) -> BoundaryPoint {
    if c == 0 {
        BoundaryPoint::new(0, Rational64::zero())
    } else {
        BoundaryPoint::new(c, Rational64::new(1, 2))
    }
}

/// End points tried from a start on `c`: the canonical start of every other
/// component and one extra slot on `c` itself.
pub fn canonical_ends(surface: &PlanarSurface, c: usize) -> Vec<BoundaryPoint> {
    (0..=surface.inner_holes)
        .map(|d| {
            if d != c {
                canonical_start(d)
            } else if c == 0 {
                BoundaryPoint::new(0, Rational64::new(1, 2 * (surface.inner_holes as i64 + 1)))
            } else {
                BoundaryPoint::new(c, Rational64::new(3, 4))
            }
        })
        .collect()
}

/// Least arc `α` with `φ(α) > α` among arcs from the canonical start points
/// with crossing words of length at most `bound`, ordered by length, then
/// start component, then end component, then word. `None` is not a proof of
/// right-veering.
pub fn find_nrv_witness(ob: &OpenBook, bound: usize) -> Result<Option<EmbeddedArc>> {
    let s = *ob.surface()?;
    let mut best: Option<(usize, usize, usize, EmbeddedArc)> = None;
    for c in 0..=s.inner_holes {
        let start = canonical_start(c);
        let ends = canonical_ends(&s, c);
        let mut err = None;
        let mut found = None;
        let limit = best.as_ref().map_or(bound, |b| b.0);
        for_each_arc(&s, start, &ends, &[], limit, |a| match is_right_veering_on(ob, a) {
            Ok(true) => true,
            Ok(false) => {
                found = Some(a.clone());
                false
            }
            Err(e) => {
                err = Some(e);
                false
            }
        });
        if let Some(e) = err {
            return Err(e);
        }
        if let Some(a) = found {
            let key = (a.len(), c, a.end.boundary);
            let better = match &best {
                None => true,
                Some((l, bc, be, _)) => key < (*l, *bc, *be),
            };
            if better {
                best = Some((key.0, key.1, key.2, a));
            }
        }
    }
    Ok(best.map(|b| b.3))
}

/// Arcs `α_0 > ⋯ > α_k` from a common point `n`, with `α_0 = φ(α_k)`.
/// Arcs are stored starting at `n`; the disc construction reads them from
/// their terminal points.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct WitnessChain {
    pub basepoint: BoundaryPoint,
    pub arcs: Vec<EmbeddedArc>,
}

impl WitnessChain {
    pub fn k(&self) -> usize {
        self.arcs.len().saturating_sub(1)
    }

    pub fn terminal_points(&self) -> Vec<BoundaryPoint> {
        self.arcs.iter().map(|a| a.end).collect()
    }
}

/// Outcome of one chain condition.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ConditionOutcome {
    pub condition: String,
    pub passed: bool,
    pub failed_at: Option<usize>,
    pub detail: String,
}

impl ConditionOutcome {
    fn pass(condition: &str) -> Self {
        ConditionOutcome { condition: condition.into(), passed: true, failed_at: None, detail: String::new() }
    }

    fn fail(condition: &str, at: usize, detail: String) -> Self {
        ConditionOutcome { condition: condition.into(), passed: false, failed_at: Some(at), detail }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ChainReport {
    pub conditions: Vec<ConditionOutcome>,
}

impl ChainReport {
    pub fn all_passed(&self) -> bool {
        self.conditions.iter().all(|c| c.passed)
    }

    pub fn get(&self, condition: &str) -> Option<&ConditionOutcome> {
        self.conditions.iter().find(|c| c.condition == condition)
    }
}

/// Checks conditions (i)–(iv). Distinct consecutive terminal points are not
/// required when `k = 1`, since `p_0 = p_k` is forced.
pub fn validate_chain(chain: &WitnessChain, ob: &OpenBook) -> Result<ChainReport> {
    let s = *ob.surface()?;
    let k = chain.k();
    let arcs = &chain.arcs;
    let mut out = Vec::new();

    out.push(match arcs.iter().position(|a| a.start != chain.basepoint) {
        Some(i) => ConditionOutcome::fail("(i)", i, format!("α_{i} starts at {}", arcs[i].start)),
        None => ConditionOutcome::pass("(i)"),
    });

    let mut second = ConditionOutcome::pass("(ii)");
    if k == 0 {
        second = ConditionOutcome::fail("(ii)", 0, "chain needs at least two arcs".into());
    } else if ob.apply(&arcs[k])? != arcs[0] {
        second = ConditionOutcome::fail("(ii)", 0, "α_0 is not the image of α_k".into());
    } else {
        for i in 0..k {
            if arcs[i].start != arcs[i + 1].start {
                second = ConditionOutcome::fail("(ii)", i + 1, "arcs do not share a start".into());
                break;
            }
            let cmp = side_compare(&s, &arcs[i], &arcs[i + 1])?;
            if cmp != SideComparison::StrictlyRight {
                second = ConditionOutcome::fail("(ii)", i + 1, format!("α_{i} vs α_{}: {cmp:?}", i + 1));
                break;
            }
        }
    }
    out.push(second);

    let mut third = ConditionOutcome::pass("(iii)");
    for i in 0..k {
        let x = geometric_intersection(&s, &arcs[i], &arcs[i + 1]);
        if x != 0 {
            third = ConditionOutcome::fail("(iii)", i + 1, format!("α_{i} and α_{} cross {x} times", i + 1));
            break;
        }
        if k > 1 && arcs[i].end == arcs[i + 1].end {
            third = ConditionOutcome::fail("(iii)", i + 1, format!("α_{i} and α_{} share a terminal point", i + 1));
            break;
        }
    }
    out.push(third);

    let mut fourth = ConditionOutcome::pass("(iv)");
    let ends = chain.terminal_points();
    'outer: for j in 1..k {
        for i in 0..j {
            if ends[i] == ends[j] {
                fourth = ConditionOutcome::fail("(iv)", j, format!("p_{i} = p_{j}"));
                break 'outer;
            }
        }
    }
    if k >= 1 && ends[0] != ends[k] {
        fourth = ConditionOutcome::fail("(iv)", k, "p_0 differs from p_k".into());
    }
    out.push(fourth);

    Ok(ChainReport { conditions: out })
}

/// Fresh slots on every boundary component, one in each gap between slots
/// already in use (cut feet included on `C_0`).
fn fresh_points(s: &PlanarSurface, used: &[BoundaryPoint]) -> Vec<BoundaryPoint> {
    let mut out = Vec::new();
    for c in 0..=s.inner_holes {
        let mut marks: Vec<Rational64> = used.iter().filter(|p| p.boundary == c).map(|p| p.slot).collect();
        if c == 0 {
            marks.extend(s.cut_ids().map(|j| s.foot(j)));
        }
        marks.sort();
        marks.dedup();
        if marks.is_empty() {
            out.push(BoundaryPoint::new(c, Rational64::new(1, 2)));
            continue;
        }
        for w in marks.windows(2) {
            out.push(BoundaryPoint::new(c, (w[0] + w[1]) / 2));
        }
        let first = marks[0];
        let last = *marks.last().expect("nonempty");
        if c == 0 {
            let mid = (last + first + Rational64::one()) / 2;
            out.push(BoundaryPoint::new(0, if mid >= Rational64::one() { mid - Rational64::one() } else { mid }));
        } else {
            out.push(BoundaryPoint::new(c, first / 2));
            out.push(BoundaryPoint::new(c, (last + Rational64::one()) / 2));
        }
    }
    out.retain(|p| s.check_point(*p).is_ok() && !used.contains(p));
    out
}

/// Longest chain `build_chain` will try before giving up.
pub const MAX_CHAIN: usize = 8;

/// A chain from `φ(α)` to `α`. When the two have disjoint interiors the
/// chain has `k = 1`. Otherwise intermediate arcs with fresh terminal points
/// are searched depth first, each disjoint from its predecessor, strictly
/// between it and `α`, and meeting `α` no more often.
pub fn build_chain(ob: &OpenBook, alpha: &EmbeddedArc) -> Result<WitnessChain> {
    let s = *ob.surface()?;
    let image = ob.apply(alpha)?;
    if side_compare(&s, alpha, &image)? != SideComparison::StrictlyLeft {
        return Err(EngineError::Precondition("φ(α) > α does not hold".into()));
    }
    let n = alpha.start;
    if geometric_intersection(&s, &image, alpha) == 0 {
        return Ok(WitnessChain { basepoint: n, arcs: vec![image, alpha.clone()] });
    }
    for depth in 2..=MAX_CHAIN {
        let mut arcs = vec![image.clone()];
        if extend(&s, alpha, &mut arcs, depth)? {
            arcs.push(alpha.clone());
            return Ok(WitnessChain { basepoint: n, arcs });
        }
    }
    Err(EngineError::SearchExhausted(format!("no chain with k ≤ {MAX_CHAIN}")))
}

fn extend(s: &PlanarSurface, alpha: &EmbeddedArc, arcs: &mut Vec<EmbeddedArc>, depth: usize) -> Result<bool> {
    let cur = arcs.last().expect("nonempty").clone();
    let left = geometric_intersection(s, &cur, alpha);
    if arcs.len() > 1 && left == 0 && cur.end != alpha.end {
        return Ok(true);
    }
    if arcs.len() >= depth {
        return Ok(false);
    }
    let mut used: Vec<BoundaryPoint> = arcs.iter().map(|a| a.end).collect();
    used.push(alpha.start);
    let ends = fresh_points(s, &used);
    let max_len = cur.len() + alpha.len() + 2;
    let mut cands: Vec<(usize, EmbeddedArc)> = Vec::new();
    let mut err = None;
    for_each_arc(s, alpha.start, &ends, &[PathRef::Arc(&cur)], max_len, |c| {
        let score = geometric_intersection(s, c, alpha);
        if score > left {
            return true;
        }
        let ordered = side_compare(s, &cur, c).and_then(|a| Ok((a, side_compare(s, c, alpha)?)));
        match ordered {
            Ok((SideComparison::StrictlyRight, SideComparison::StrictlyRight)) => {
                cands.push((score, c.clone()));
                true
            }
            Ok(_) => true,
            Err(e) => {
                err = Some(e);
                false
            }
        }
    });
    if let Some(e) = err {
        return Err(e);
    }
    cands.sort_by_key(|c| c.0);
    for (_, c) in cands {
        arcs.push(c);
        if extend(s, alpha, arcs, depth)? {
            return Ok(true);
        }
        arcs.pop();
    }
    Ok(false)
}

#[cfg(test)]
mod tests;

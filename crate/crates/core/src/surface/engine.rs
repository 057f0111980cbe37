//! Lift comparison in the cut-open polygon.
//!
//! Every reduced word traces a path of polygon visits in the universal cover.
//! Two lifts that share a run of visits are compared at both ends of the run;
//! they are forced to cross exactly when they swap sides. Counting forced
//! crossings gives geometric intersection numbers, and the same data places
//! each crossing for Dehn twist splicing.

use std::cmp::Ordering;

use num_rational::Rational64;
use num_traits::Zero;

use super::{EmbeddedArc, Letter, PlanarSurface, SimpleClosedCurve, Word};

/// A point on the boundary of the cut-open polygon.
#[derive(Debug, Clone, PartialEq, Eq)]
pub(crate) enum Pt {
    /// A bank of a reference cut; heights along the bank are not stored.
    Cut(usize),
    /// A point of the surface boundary: polygon side and position on it.
    Bd(usize, Rational64),
    /// The undecided exit of the last visit of a word prefix.
    Open,
}

impl Pt {
    fn side(&self) -> usize {
        match self {
            Pt::Cut(s) | Pt::Bd(s, _) => *s,
            Pt::Open => unreachable!("open points are screened before use"),
        }
    }

    fn pos(&self) -> Rational64 {
        match self {
            Pt::Cut(_) | Pt::Open => Rational64::zero(),
            Pt::Bd(_, p) => *p,
        }
    }

    fn is_cut(&self) -> bool {
        matches!(self, Pt::Cut(_))
    }
}

/// Counter-clockwise position of `q` seen from `from`. Smaller keys lie to
/// the right of a traveller entering the polygon at `from`.
fn key(n: usize, from: &Pt, q: &Pt) -> (usize, Rational64) {
    let mut off = (q.side() + n - from.side()) % n;
    let pos = q.pos();
    if off == 0 {
        if let Pt::Bd(_, pf) = from {
            if pos <= *pf {
                off = n;
            }
        }
    }
    (off, pos)
}

/// Sequence of polygon visits `(entry, exit)` of a reduced word.
#[derive(Debug, Clone)]
pub(crate) struct Strand {
    pub visits: Vec<(Pt, Pt)>,
    pub cyclic: bool,
}

impl Strand {
    pub fn of_arc(s: &PlanarSurface, a: &EmbeddedArc) -> Strand {
        let mut visits = Vec::with_capacity(a.word.len() + 1);
        let mut entry = s.locate(a.start);
        for &l in &a.word {
            visits.push((entry, s.exit_side(l)));
            entry = s.entry_side(l);
        }
        visits.push((entry, s.locate(a.end)));
        Strand { visits, cyclic: false }
    }

    /// Strand of a word prefix leaving `start`; its last exit is undecided.
    pub fn of_prefix(s: &PlanarSurface, start: super::BoundaryPoint, word: &[Letter]) -> Strand {
        let mut visits = Vec::with_capacity(word.len() + 1);
        let mut entry = s.locate(start);
        for &l in word {
            visits.push((entry, s.exit_side(l)));
            entry = s.entry_side(l);
        }
        visits.push((entry, Pt::Open));
        Strand { visits, cyclic: false }
    }

    pub fn of_curve(s: &PlanarSurface, c: &SimpleClosedCurve) -> Strand {
        Strand::of_cyclic_word(s, &c.word)
    }

    pub fn of_cyclic_word(s: &PlanarSurface, w: &[Letter]) -> Strand {
        let m = w.len();
        let visits = (0..m).map(|i| (s.entry_side(w[(i + m - 1) % m]), s.exit_side(w[i]))).collect();
        Strand { visits, cyclic: true }
    }

    pub fn len(&self) -> usize {
        self.visits.len()
    }

    fn index(&self, i: isize) -> Option<usize> {
        let m = self.visits.len() as isize;
        if self.cyclic {
            Some(i.rem_euclid(m) as usize)
        } else if (0..m).contains(&i) {
            Some(i as usize)
        } else {
            None
        }
    }

    /// Visit `i` read in direction `d` (`+1` along the strand, `-1` against).
    fn frame(&self, i: isize, d: isize) -> Option<(Pt, Pt)> {
        let (n, e) = self.visits[self.index(i)?].clone();
        Some(if d > 0 { (n, e) } else { (e, n) })
    }
}

/// A forced crossing between two strands.
#[derive(Debug, Clone)]
pub(crate) struct LinkInfo {
    /// Visit of the first strand whose polygon holds the crossing.
    pub x_visit: usize,
    /// Visit of the second strand in that polygon.
    pub y_visit: usize,
    /// Endpoint of the second strand's chord on the right of the first.
    pub r_pt: Pt,
    /// Whether that endpoint is the second strand's own exit, i.e. the
    /// second strand crosses from left to right.
    pub r_is_y_exit: bool,
}

/// Raised when a comparison needs the undecided exit of a prefix.
struct Undecided;

fn decided(p: &Pt) -> Result<(), Undecided> {
    if *p == Pt::Open {
        Err(Undecided)
    } else {
        Ok(())
    }
}

/// Decides whether the lifts through visit `a` of `x` and visit `b` of `y`
/// cross, counting each pair of lifts once (at the first shared polygon in
/// the direction of `x`).
fn analyze(n: usize, x: &Strand, a: usize, y: &Strand, b: usize) -> Result<Option<LinkInfo>, Undecided> {
    let (nx, ex) = x.visits[a].clone();
    let (ny, ey) = y.visits[b].clone();
    for p in [&nx, &ex, &ny, &ey] {
        decided(p)?;
    }
    let d: isize = if ex == ey || nx == ny {
        1
    } else if ex == ny || nx == ey {
        -1
    } else {
        0
    };
    if d == 0 {
        let kex = key(n, &nx, &ex);
        let r_ny = key(n, &nx, &ny) < kex;
        let r_ey = key(n, &nx, &ey) < kex;
        if r_ny == r_ey {
            return Ok(None);
        }
        let r_pt = if r_ey { ey } else { ny };
        return Ok(Some(LinkInfo { x_visit: a, y_visit: b, r_pt, r_is_y_exit: r_ey }));
    }
    let yf = |t: isize| y.frame(b as isize + d * t, d);
    let Some((yn0, _)) = yf(0) else { return Ok(None) };
    if nx == yn0 {
        return Ok(None);
    }
    let limit = (x.len() + y.len() + 2) as isize;
    let mut t: isize = 0;
    loop {
        let Some((_, xe)) = x.frame(a as isize + t, 1) else { return Ok(None) };
        let Some((_, ye)) = yf(t) else { return Ok(None) };
        decided(&xe)?;
        decided(&ye)?;
        if xe == ye {
            if !xe.is_cut() {
                return Ok(None);
            }
            t += 1;
            if t > limit {
                return Ok(None);
            }
            continue;
        }
        break;
    }
    let (e_side, xe) = x.frame(a as isize + t, 1).expect("visited");
    let (yn_end, ye) = yf(t).expect("visited");
    decided(&yn_end)?;
    let fwd_right = key(n, &e_side, &ye) < key(n, &e_side, &xe);
    let bwd_right = key(n, &ex, &yn0) < key(n, &ex, &nx);
    if fwd_right != bwd_right {
        return Ok(None);
    }
    let x_visit = x.index(a as isize + t).expect("visited");
    let y_visit = y.index(b as isize + d * t).expect("visited");
    let r_pt = if fwd_right { ye } else { yn_end };
    Ok(Some(LinkInfo { x_visit, y_visit, r_pt, r_is_y_exit: fwd_right == (d == 1) }))
}

fn settled(r: Result<Option<LinkInfo>, Undecided>) -> Option<LinkInfo> {
    r.unwrap_or_else(|_| unreachable!("complete strands have no open points"))
}

/// All forced crossings between two strands.
pub(crate) fn crossings(s: &PlanarSurface, x: &Strand, y: &Strand) -> Vec<LinkInfo> {
    let n = s.polygon_sides();
    let mut out = Vec::new();
    for a in 0..x.len() {
        for b in 0..y.len() {
            if let Some(l) = settled(analyze(n, x, a, y, b)) {
                out.push(l);
            }
        }
    }
    out
}

pub(crate) fn self_crossings(s: &PlanarSurface, x: &Strand) -> usize {
    let n = s.polygon_sides();
    let mut count = 0;
    for a in 0..x.len() {
        for b in 0..x.len() {
            if a != b && settled(analyze(n, x, a, x, b)).is_some() {
                count += 1;
            }
        }
    }
    debug_assert!(count % 2 == 0);
    count / 2
}

/// Whether a word prefix leaving a boundary point already crosses itself or
/// one of `others`, whatever its continuation.
pub(crate) fn prefix_conflicts(s: &PlanarSurface, prefix: &Strand, others: &[Strand]) -> bool {
    let n = s.polygon_sides();
    let m = prefix.len();
    for a in 0..m {
        for b in 0..m {
            if a != b && matches!(analyze(n, prefix, a, prefix, b), Ok(Some(_))) {
                return true;
            }
        }
        for o in others {
            for b in 0..o.len() {
                if matches!(analyze(n, prefix, a, o, b), Ok(Some(_))) {
                    return true;
                }
            }
        }
    }
    false
}

/// Relative position of two arcs leaving the same boundary point: `Greater`
/// when `y` is to the right of `x`, `Equal` when isotopic.
pub(crate) fn compare_from_start(s: &PlanarSurface, x: &Strand, y: &Strand) -> Ordering {
    let n = s.polygon_sides();
    let mut t = 0usize;
    loop {
        let (_, xe) = x.visits[t].clone();
        let (_, ye) = y.visits[t].clone();
        if xe == ye {
            if !xe.is_cut() {
                return Ordering::Equal;
            }
            t += 1;
            continue;
        }
        let e = x.visits[t].0.clone();
        return if key(n, &e, &ye) < key(n, &e, &xe) { Ordering::Greater } else { Ordering::Less };
    }
}

/// Counter-clockwise order of two distinct lifts of a simple closed curve
/// meeting the same cut bank of one polygon. Each lift is given by its
/// visit and whether the bank is its own exit.
fn ccw_before(n: usize, c: &Strand, l1: (usize, bool), l2: (usize, bool)) -> bool {
    let d1: isize = if l1.1 { 1 } else { -1 };
    let d2: isize = if l2.1 { 1 } else { -1 };
    let f1 = |t: isize| c.frame(l1.0 as isize + d1 * t, d1).expect("cyclic");
    let f2 = |t: isize| c.frame(l2.0 as isize + d2 * t, d2).expect("cyclic");
    let limit = 2 * c.len() as isize + 2;
    // `right2`: in the frame leaving through the shared bank, lift 2 lies
    // right of lift 1.
    let mut right2 = None;
    for t in 1..=limit {
        let (e, x1) = f1(t);
        let (_, x2) = f2(t);
        if x1 != x2 {
            right2 = Some(key(n, &e, &x2) < key(n, &e, &x1));
            break;
        }
    }
    if right2.is_none() {
        for t in (-limit..=0).rev() {
            let (n1, xs) = f1(t);
            let (n2, _) = f2(t);
            if n1 != n2 {
                right2 = Some(!(key(n, &xs, &n2) < key(n, &xs, &n1)));
                break;
            }
        }
    }
    !right2.expect("distinct lifts of a primitive curve diverge")
}

/// Splices one copy of the closed curve `c` into `x` at every crossing,
/// turning right (`sign > 0`) or left (`sign < 0`). The result is the
/// unreduced word of the twisted image.
pub(crate) fn twist_splice(s: &PlanarSurface, x: &Strand, xword: &[Letter], c: &Strand, cword: &[Letter], sign: i32) -> Word {
    let n = s.polygon_sides();
    let mut groups: Vec<Vec<LinkInfo>> = vec![Vec::new(); x.len()];
    for l in crossings(s, x, c) {
        groups[l.x_visit].push(l);
    }
    let mc = cword.len();
    let mut out = Vec::with_capacity(xword.len() + mc * 4);
    for (v, group) in groups.iter_mut().enumerate() {
        if group.len() > 1 {
            let entry = x.visits[v].0.clone();
            group.sort_by(|p, q| {
                let kp = key(n, &entry, &p.r_pt);
                let kq = key(n, &entry, &q.r_pt);
                kp.cmp(&kq).then_with(|| {
                    if ccw_before(n, c, (p.y_visit, p.r_is_y_exit), (q.y_visit, q.r_is_y_exit)) {
                        Ordering::Less
                    } else {
                        Ordering::Greater
                    }
                })
            });
        }
        for l in group.iter() {
            let b = l.y_visit;
            if l.r_is_y_exit == (sign > 0) {
                out.extend((0..mc).map(|i| cword[(b + i) % mc]));
            } else {
                out.extend((1..=mc).map(|i| cword[(b + mc - i) % mc].inverse()));
            }
        }
        if v < xword.len() {
            out.push(xword[v]);
        }
    }
    out
}

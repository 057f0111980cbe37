//! Open book foliations as cell complexes, the graphs `G_{++}` and `G_{--}`,
//! and the overtwisted disc conditions.
//!
//! Cells: vertices are elliptic points, hyperbolic points and the points
//! where separatrices meet the braid; edges are the four separatrices of
//! each hyperbolic point and the braid segments between; faces are the leaf
//! families swept between consecutive hyperbolic points.

use std::collections::BTreeMap;
use std::fmt::Write as _;

use num_rational::Rational64;
use num_traits::One;
use serde::{Deserialize, Serialize};

use crate::error::{EngineError, Result};
use crate::movie::{ratio_str, Sign, UnionFind};
use crate::surface::BoundaryPoint;

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct EllipticVertex {
    pub id: usize,
    pub sign: Sign,
    /// `None` for points that only exist in the complex.
    pub point: Option<BoundaryPoint>,
    pub label: String,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Attachment {
    Elliptic(usize),
    Braid,
}

/// Separatrix endpoints in the order: positive ends of the two joined
/// leaves, then their far ends.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct HyperbolicVertex {
    pub id: usize,
    pub sign: Sign,
    #[serde(with = "ratio_str")]
    pub t: Rational64,
    pub attachments: [Attachment; 4],
    pub label: String,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum TileKind {
    Aa,
    Ab,
    Bb,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Tile {
    pub hyperbolic: usize,
    pub kind: TileKind,
}

/// Leaves swept between the hyperbolic point `from` that creates them and
/// `to` that consumes them. Both are `None` for a family that never meets
/// a hyperbolic point.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Family {
    pub a_leaf: bool,
    pub start: usize,
    pub end: Option<usize>,
    pub from: Option<usize>,
    pub to: Option<usize>,
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct CellCounts {
    pub vertices: usize,
    pub edges: usize,
    pub faces: usize,
    pub components: usize,
    pub boundary_cycles: usize,
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct FoliationComplex {
    pub elliptic: Vec<EllipticVertex>,
    pub hyperbolic: Vec<HyperbolicVertex>,
    pub tiles: Vec<Tile>,
    pub families: Vec<Family>,
    /// One entry per closed leaf.
    pub c_circles: Vec<String>,
    pub cells: CellCounts,
    pub euler_characteristic: i64,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub notes: Vec<String>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct Counts {
    pub e_plus: usize,
    pub e_minus: usize,
    pub h_plus: usize,
    pub h_minus: usize,
}

impl Counts {
    pub fn euler(&self) -> i64 {
        (self.e_plus + self.e_minus) as i64 - (self.h_plus + self.h_minus) as i64
    }
}

impl FoliationComplex {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn add_elliptic(&mut self, sign: Sign, point: Option<BoundaryPoint>) -> usize {
        let id = self.elliptic.len();
        let label = match sign {
            Sign::Positive => format!("p{}", self.elliptic.iter().filter(|e| e.sign == sign).count()),
            Sign::Negative => format!("n{}", self.elliptic.iter().filter(|e| e.sign == sign).count()),
        };
        self.elliptic.push(EllipticVertex { id, sign, point, label });
        id
    }

    pub fn add_hyperbolic(&mut self, sign: Sign, t: Rational64, attachments: [Attachment; 4], with_a: bool) -> usize {
        let id = self.hyperbolic.len();
        self.hyperbolic.push(HyperbolicVertex { id, sign, t, attachments, label: format!("h{id}") });
        self.tiles.push(Tile { hyperbolic: id, kind: if with_a { TileKind::Ab } else { TileKind::Bb } });
        id
    }

    pub fn add_family(&mut self, a_leaf: bool, start: usize, end: Option<usize>, from: Option<usize>, to: Option<usize>) {
        self.families.push(Family { a_leaf, start, end, from, to });
    }

    pub fn counts(&self) -> Counts {
        let e = |s| self.elliptic.iter().filter(|x| x.sign == s).count();
        let h = |s| self.hyperbolic.iter().filter(|x| x.sign == s).count();
        Counts { e_plus: e(Sign::Positive), e_minus: e(Sign::Negative), h_plus: h(Sign::Positive), h_minus: h(Sign::Negative) }
    }

    /// Cell counts, components and braid cycles from the recorded families.
    pub fn finish(&mut self) -> Result<()> {
        let e = self.elliptic.len();
        let h = self.hyperbolic.len();
        let mut braid_vertex: BTreeMap<usize, usize> = BTreeMap::new();
        for hv in &self.hyperbolic {
            let n = hv.attachments.iter().filter(|a| **a == Attachment::Braid).count();
            if n > 1 {
                return Err(EngineError::InvalidFoliation(format!("{} meets the braid {n} times", hv.label)));
            }
            if n == 1 {
                let k = braid_vertex.len();
                braid_vertex.insert(hv.id, k);
            }
        }
        let bv = braid_vertex.len();
        let nodes = e + h + bv + self.families.len();
        let mut uf = UnionFind::new(nodes);
        for hv in &self.hyperbolic {
            for a in hv.attachments {
                match a {
                    Attachment::Elliptic(x) => uf.union(e + hv.id, x),
                    Attachment::Braid => uf.union(e + hv.id, e + h + braid_vertex[&hv.id]),
                }
            }
        }
        let mut succ: Vec<Option<usize>> = vec![None; bv];
        let (mut vertices, mut edges) = (e + h + bv, 4 * h);
        let mut cycles = 0;
        for (i, fam) in self.families.iter().enumerate() {
            let node = e + h + bv + i;
            uf.union(node, fam.start);
            if let Some(x) = fam.end {
                uf.union(node, x);
            }
            match (fam.from, fam.to) {
                (Some(a), Some(b)) => {
                    uf.union(node, e + a);
                    uf.union(node, e + b);
                    if fam.a_leaf {
                        let (va, vb) = match (braid_vertex.get(&a), braid_vertex.get(&b)) {
                            (Some(&va), Some(&vb)) => (va, vb),
                            _ => {
                                return Err(EngineError::InvalidFoliation(format!(
                                    "a-leaf family {i} does not meet the braid at both ends"
                                )))
                            }
                        };
                        if succ[va].replace(vb).is_some() {
                            return Err(EngineError::InvalidFoliation("braid vertex left twice".into()));
                        }
                        edges += 1;
                    }
                }
                (None, None) => {
                    edges += 1;
                    if fam.a_leaf {
                        vertices += 1;
                        edges += 1;
                        cycles += 1;
                    }
                }
                _ => return Err(EngineError::InvalidFoliation(format!("family {i} has one open end"))),
            }
        }
        if succ.iter().any(|s| s.is_none()) {
            return Err(EngineError::InvalidFoliation("braid is not closed".into()));
        }
        let mut seen = vec![false; bv];
        for v in 0..bv {
            if seen[v] {
                continue;
            }
            cycles += 1;
            let mut x = v;
            while !seen[x] {
                seen[x] = true;
                x = succ[x].expect("checked");
            }
        }
        let mut roots: Vec<usize> = (0..nodes).map(|x| uf.find(x)).collect();
        roots.sort();
        roots.dedup();
        let faces = self.families.len();
        self.cells = CellCounts { vertices, edges, faces, components: roots.len(), boundary_cycles: cycles };
        self.euler_characteristic = vertices as i64 - edges as i64 + faces as i64;
        Ok(())
    }

    pub fn is_disc(&self) -> bool {
        self.cells.components == 1 && self.cells.boundary_cycles == 1 && self.euler_characteristic == 1
    }
}

pub fn euler_count(f: &FoliationComplex) -> i64 {
    f.counts().euler()
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct RegionGraph {
    pub sign: Sign,
    pub vertices: Vec<usize>,
    /// `(hyperbolic id, endpoint, endpoint)`.
    pub edges: Vec<(usize, usize, usize)>,
    /// Hyperbolic points with a separatrix running to the braid instead.
    pub dangling: Vec<usize>,
}

impl RegionGraph {
    pub fn degree(&self, v: usize) -> usize {
        self.edges.iter().map(|&(_, a, b)| (a == v) as usize + (b == v) as usize).sum()
    }

    pub fn is_connected(&self) -> bool {
        if self.vertices.is_empty() {
            return true;
        }
        let index: BTreeMap<usize, usize> = self.vertices.iter().enumerate().map(|(i, &v)| (v, i)).collect();
        let mut uf = UnionFind::new(self.vertices.len());
        for &(_, a, b) in &self.edges {
            uf.union(index[&a], index[&b]);
        }
        (0..self.vertices.len()).all(|i| uf.find(i) == uf.find(0))
    }
}

/// `G_{++}` joins the positive ends of the leaves at each positive
/// hyperbolic point; `G_{--}` joins the far ends at each negative one when
/// both are negative elliptic points.
pub fn region_graph(f: &FoliationComplex, sign: Sign) -> RegionGraph {
    let vertices = f.elliptic.iter().filter(|e| e.sign == sign).map(|e| e.id).collect();
    let mut edges = Vec::new();
    let mut dangling = Vec::new();
    for hv in f.hyperbolic.iter().filter(|h| h.sign == sign) {
        let pair = match sign {
            Sign::Positive => [hv.attachments[0], hv.attachments[1]],
            Sign::Negative => [hv.attachments[2], hv.attachments[3]],
        };
        match pair {
            [Attachment::Elliptic(a), Attachment::Elliptic(b)] if f.elliptic[a].sign == sign && f.elliptic[b].sign == sign => {
                edges.push((hv.id, a, b))
            }
            _ => dangling.push(hv.id),
        }
    }
    RegionGraph { sign, vertices, edges, dangling }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Condition {
    pub passed: bool,
    pub detail: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct OtDiscReport {
    pub cond1: Condition,
    pub cond2: Condition,
    pub cond3: Condition,
    pub is_disc: bool,
    pub topology: String,
}

impl OtDiscReport {
    pub fn all_passed(&self) -> bool {
        self.cond1.passed && self.cond2.passed && self.cond3.passed && self.is_disc
    }

    pub fn failed(&self) -> Vec<&'static str> {
        [("(1)", &self.cond1), ("(2)", &self.cond2), ("(3)", &self.cond3)].into_iter().filter(|(_, c)| !c.passed).map(|(n, _)| n).collect()
    }

    pub fn verdict(&self) -> String {
        let mut failed: Vec<String> = self.failed().iter().map(|s| s.to_string()).collect();
        if !self.is_disc {
            failed.push("disc".into());
        }
        if failed.is_empty() {
            "overtwisted-disc-verified".into()
        } else {
            format!("conditions-failed: {}", failed.join(","))
        }
    }
}

/// Checks (1) `G_{--}` is a tree without fake vertices, (2) `G_{++}` is a
/// circle, (3) there are no c-circles. A vertex of `G_{--}` counts as fake
/// when it is isolated and not the only negative elliptic point. A circle
/// is a nonempty connected graph with every degree 2, loops counting twice.
pub fn check_transverse_ot_disc(f: &FoliationComplex) -> OtDiscReport {
    let label = |v: usize| f.elliptic[v].label.clone();
    let gm = region_graph(f, Sign::Negative);
    let cond1 = if gm.vertices.is_empty() {
        Condition { passed: false, detail: "G_{--} is empty".into() }
    } else if !gm.is_connected() {
        Condition { passed: false, detail: "G_{--} is disconnected".into() }
    } else if gm.edges.len() + 1 != gm.vertices.len() {
        Condition { passed: false, detail: format!("G_{{--}} has a cycle ({} edges on {} vertices)", gm.edges.len(), gm.vertices.len()) }
    } else if let Some(&v) = gm.vertices.iter().find(|&&v| gm.vertices.len() > 1 && gm.degree(v) == 0) {
        Condition { passed: false, detail: format!("fake vertex {}", label(v)) }
    } else {
        let n = gm.vertices.len();
        Condition { passed: true, detail: format!("tree on {n} {}", if n == 1 { "vertex" } else { "vertices" }) }
    };

    let gp = region_graph(f, Sign::Positive);
    let used: Vec<usize> = gp.vertices.iter().copied().filter(|&v| gp.degree(v) > 0).collect();
    let cond2 = if gp.edges.is_empty() {
        Condition { passed: false, detail: "G_{++} has no edges".into() }
    } else if let Some(&v) = gp.vertices.iter().find(|&&v| gp.degree(v) != 2) {
        Condition { passed: false, detail: format!("{} has degree {} in G_{{++}}", label(v), gp.degree(v)) }
    } else if !gp.is_connected() {
        Condition { passed: false, detail: "G_{++} is disconnected".into() }
    } else {
        let mut cycle = vec![label(used[0])];
        let mut at = used[0];
        let mut left: Vec<(usize, usize, usize)> = gp.edges.clone();
        while let Some(i) = left.iter().position(|&(_, a, b)| a == at || b == at) {
            let (h, a, b) = left.remove(i);
            at = if a == at { b } else { a };
            cycle.push(f.hyperbolic[h].label.clone());
            cycle.push(label(at));
        }
        Condition { passed: true, detail: format!("cycle {}", cycle.join(" ")) }
    };

    let cond3 = if f.c_circles.is_empty() {
        Condition { passed: true, detail: "no c-circles".into() }
    } else {
        Condition { passed: false, detail: f.c_circles.join("; ") }
    };

    let c = &f.cells;
    let topology = format!(
        "V={} E={} F={} chi={} components={} boundary circles={}",
        c.vertices, c.edges, c.faces, f.euler_characteristic, c.components, c.boundary_cycles
    );
    OtDiscReport { cond1, cond2, cond3, is_disc: f.is_disc(), topology }
}

fn wrap(t: Rational64) -> Rational64 {
    t - Rational64::from_integer(t.floor().to_integer())
}

/// Stabilizes the disc along the b-leaf family `family`, running from `p`
/// to `n` and consumed at the hyperbolic point `h`. New elliptic points
/// `p'` (+) and `n'` (−) carry a persistent b-leaf family. Just before `h` a
/// negative bb-tile trades `p → n` and `p' → n'` for `p → n'` and `p' → n`,
/// so `h` now meets `p'` instead of `p`. Just after `h` a positive tile
/// joins `p → n'` to the a-leaf left at `p'`, restoring `p' → n'` and the
/// a-leaf at `p`. In `G_{--}` this adds the edge `n n'`; in `G_{++}` it puts
/// `p'` on the edge of `h`. The closed leaf of the stabilized disc is
/// recorded as a c-circle; it is not detected from a movie, since the
/// stabilized page is outside the curve engine.
pub fn insert_bb_pair(f: &FoliationComplex, family: usize) -> Result<FoliationComplex> {
    let bad = |m: String| Err(EngineError::InvalidFoliation(m));
    let Some(fam) = f.families.get(family).cloned() else {
        return bad(format!("no leaf family {family}"));
    };
    let Some(n) = fam.end else {
        return bad(format!("family {family} is made of a-leaves"));
    };
    if f.elliptic[n].sign != Sign::Negative {
        return bad(format!("family {family} does not end at a negative point"));
    }
    let (Some(from), Some(h)) = (fam.from, fam.to) else {
        return bad(format!("family {family} meets no hyperbolic point"));
    };
    let p = fam.start;
    use Attachment::{Braid, Elliptic as E};
    let att = f.hyperbolic[h].attachments;
    let Some(idx) = (0..2).find(|&i| att[i] == E(p) && att[i + 2] == E(n)) else {
        return bad(format!("{} does not consume family {family}", f.hyperbolic[h].label));
    };
    let Some(a_fam) = f.families.iter().position(|g| g.a_leaf && g.start == p && g.from == Some(h)) else {
        return bad(format!("{} leaves no a-leaf at {}", f.hyperbolic[h].label, f.elliptic[p].label));
    };
    let t = |x: usize| f.hyperbolic[x].t;
    let span = |a: Rational64, b: Rational64| if b > a { b - a } else { b + Rational64::one() - a };
    let t_minus = wrap(t(from) + span(t(from), t(h)) * Rational64::new(2, 3));
    let t_plus = wrap(t(h) + span(t(h), t(f.families[a_fam].to.expect("a-leaf family closes"))) / 3);

    let mut g = f.clone();
    let pp = g.add_elliptic(Sign::Positive, None);
    let nn = g.add_elliptic(Sign::Negative, None);
    g.elliptic[pp].label = format!("{}'", f.elliptic[p].label);
    g.elliptic[nn].label = format!("{}'", f.elliptic[n].label);
    let hm = g.add_hyperbolic(Sign::Negative, t_minus, [E(p), E(pp), E(n), E(nn)], false);
    let hp = g.add_hyperbolic(Sign::Positive, t_plus, [E(p), E(pp), E(nn), Braid], true);
    g.hyperbolic[hm].label = format!("{}-", f.hyperbolic[h].label);
    g.hyperbolic[hp].label = format!("{}+", f.hyperbolic[h].label);
    g.hyperbolic[h].attachments[idx] = E(pp);
    g.families[family].to = Some(hm);
    g.families[a_fam].from = Some(hp);
    g.add_family(false, p, Some(nn), Some(hm), Some(hp));
    g.add_family(false, pp, Some(n), Some(hm), Some(h));
    g.add_family(false, pp, Some(nn), Some(hp), Some(hm));
    g.add_family(true, pp, None, Some(h), Some(hp));
    g.c_circles.push(format!("closed leaf between {} and {}", g.hyperbolic[hm].label, g.hyperbolic[hp].label));
    g.notes.push(format!("bb pair inserted along family {family} ({} to {})", f.elliptic[p].label, f.elliptic[n].label));
    g.finish()?;
    Ok(g)
}

/// Graphviz rendering of `G_{++}` or `G_{--}`.
pub fn to_dot(f: &FoliationComplex, sign: Sign) -> String {
    let g = region_graph(f, sign);
    let name = match sign {
        Sign::Positive => "G_pp",
        Sign::Negative => "G_mm",
    };
    let shape = match sign {
        Sign::Positive => "circle",
        Sign::Negative => "box",
    };
    let mut out = format!("graph {name} {{\n  node [shape={shape}];\n");
    for &v in &g.vertices {
        let _ = writeln!(out, "  v{v} [label=\"{}\"];", f.elliptic[v].label);
    }
    for &(h, a, b) in &g.edges {
        let _ = writeln!(out, "  v{a} -- v{b} [label=\"{}\"];", f.hyperbolic[h].label);
    }
    for &h in &g.dangling {
        let _ = writeln!(out, "  d{h} [shape=point];");
        let end = match sign {
            Sign::Positive => f.hyperbolic[h].attachments[..2].iter().find_map(|a| match a {
                Attachment::Elliptic(x) => Some(*x),
                Attachment::Braid => None,
            }),
            Sign::Negative => f.hyperbolic[h].attachments[2..].iter().find_map(|a| match a {
                Attachment::Elliptic(x) if f.elliptic[*x].sign == sign => Some(*x),
                _ => None,
            }),
        };
        if let Some(x) = end {
            let _ = writeln!(out, "  v{x} -- d{h} [style=dashed, label=\"{}\"];", f.hyperbolic[h].label);
        }
    }
    out.push_str("}\n");
    out
}

/// Radial picture of the disc: negative elliptic points in the middle,
/// positive ones on a ring, hyperbolic points between the ring points they
/// join, separatrices as straight segments, the braid as the outer circle.
pub fn to_svg(f: &FoliationComplex) -> String {
    let (cx, cy, r) = (200.0f64, 200.0f64, 150.0f64);
    let mut pos: BTreeMap<usize, (f64, f64)> = BTreeMap::new();
    let neg: Vec<usize> = f.elliptic.iter().filter(|e| e.sign == Sign::Negative).map(|e| e.id).collect();
    let posv: Vec<usize> = f.elliptic.iter().filter(|e| e.sign == Sign::Positive).map(|e| e.id).collect();
    for (i, &v) in neg.iter().enumerate() {
        let a = std::f64::consts::TAU * i as f64 / neg.len().max(1) as f64;
        let rr = if neg.len() == 1 { 0.0 } else { r * 0.2 };
        pos.insert(v, (cx + rr * a.cos(), cy + rr * a.sin()));
    }
    for (i, &v) in posv.iter().enumerate() {
        let a = std::f64::consts::TAU * i as f64 / posv.len().max(1) as f64;
        pos.insert(v, (cx + r * 0.7 * a.cos(), cy + r * 0.7 * a.sin()));
    }
    let mut out = String::from(
        "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n<svg xmlns=\"http://www.w3.org/2000/svg\" version=\"1.1\" width=\"400\" height=\"400\">\n",
    );
    let _ = writeln!(out, "<circle cx=\"{cx}\" cy=\"{cy}\" r=\"{r}\" fill=\"none\" stroke=\"black\" stroke-width=\"2\"/>");
    for hv in &f.hyperbolic {
        let ends: Vec<(f64, f64)> = hv
            .attachments
            .iter()
            .map(|a| match a {
                Attachment::Elliptic(x) => pos[x],
                Attachment::Braid => {
                    let a = std::f64::consts::TAU * (*hv.t.numer() as f64 / *hv.t.denom() as f64);
                    (cx + r * a.cos(), cy + r * a.sin())
                }
            })
            .collect();
        let (a, b) = (ends[0], ends[1]);
        let mid = if a == b {
            let d = ((a.0 - cx).powi(2) + (a.1 - cy).powi(2)).sqrt().max(1.0);
            (a.0 + (a.0 - cx) / d * 30.0, a.1 + (a.1 - cy) / d * 30.0)
        } else {
            let m = ((a.0 + b.0) / 2.0, (a.1 + b.1) / 2.0);
            let d = ((m.0 - cx).powi(2) + (m.1 - cy).powi(2)).sqrt().max(1.0);
            (cx + (m.0 - cx) / d * r * 0.85, cy + (m.1 - cy) / d * r * 0.85)
        };
        let dash = if hv.sign == Sign::Negative { " stroke-dasharray=\"4 3\"" } else { "" };
        for e in &ends {
            let _ =
                writeln!(out, "<line x1=\"{:.1}\" y1=\"{:.1}\" x2=\"{:.1}\" y2=\"{:.1}\" stroke=\"gray\"{dash}/>", mid.0, mid.1, e.0, e.1);
        }
        let _ = writeln!(out, "<rect x=\"{:.1}\" y=\"{:.1}\" width=\"8\" height=\"8\" fill=\"black\"/>", mid.0 - 4.0, mid.1 - 4.0);
        let _ = writeln!(out, "<text x=\"{:.1}\" y=\"{:.1}\" font-size=\"11\">{}</text>", mid.0 + 6.0, mid.1 - 6.0, hv.label);
    }
    for e in &f.elliptic {
        let (x, y) = pos[&e.id];
        let fill = if e.sign == Sign::Positive { "white" } else { "black" };
        let _ = writeln!(out, "<circle cx=\"{x:.1}\" cy=\"{y:.1}\" r=\"5\" fill=\"{fill}\" stroke=\"black\"/>");
        let _ = writeln!(out, "<text x=\"{:.1}\" y=\"{:.1}\" font-size=\"12\">{}</text>", x + 7.0, y + 14.0, e.label);
    }
    out.push_str("</svg>\n");
    out
}

#[cfg(test)]
mod tests;

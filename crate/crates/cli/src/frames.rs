//! Schematic page pictures. The page is drawn as a disc with the inner
//! holes on a ring, the cuts as dotted spokes, and each arc as a polyline
//! that passes through its cut crossings in order. Pictures show the
//! combinatorics only; they are not embedded drawings.

use std::f64::consts::{FRAC_PI_2, TAU};
use std::fmt::Write as _;

use obfol_core::movie::{Movie, MovieEvent, Page, Sign};
use obfol_core::surface::{BoundaryPoint, EmbeddedArc, PlanarSurface};

const C: (f64, f64) = (210.0, 220.0);
const R0: f64 = 180.0;
const RING: f64 = 100.0;
const RH: f64 = 22.0;

fn ratio(x: num_rational::Rational64) -> f64 {
    *x.numer() as f64 / *x.denom() as f64
}

fn foot_angle(s: &PlanarSurface, j: usize) -> f64 {
    -FRAC_PI_2 + TAU * ratio(s.foot(j))
}

fn hole_center(s: &PlanarSurface, j: usize) -> (f64, f64) {
    let a = foot_angle(s, j);
    (C.0 + RING * a.cos(), C.1 + RING * a.sin())
}

fn locate(s: &PlanarSurface, p: BoundaryPoint) -> (f64, f64) {
    if p.boundary == 0 {
        let a = -FRAC_PI_2 + TAU * ratio(p.slot);
        (C.0 + R0 * a.cos(), C.1 + R0 * a.sin())
    } else {
        let (x, y) = hole_center(s, p.boundary);
        let a = foot_angle(s, p.boundary) + TAU * ratio(p.slot);
        (x + RH * a.cos(), y + RH * a.sin())
    }
}

/// A point on cut `j`, pushed along the cut by `shift` in `(-1, 1)`.
fn on_cut(s: &PlanarSurface, j: usize, shift: f64) -> (f64, f64) {
    let a = foot_angle(s, j);
    let r = (R0 + RING + RH) / 2.0 + shift * (R0 - RING - RH) / 2.5;
    (C.0 + r * a.cos(), C.1 + r * a.sin())
}

fn polyline(s: &PlanarSurface, arc: &EmbeddedArc, lane: f64) -> String {
    let mut pts = vec![locate(s, arc.start)];
    let n = arc.word.len() as f64;
    for (i, l) in arc.word.iter().enumerate() {
        let spread = (i as f64 + 1.0) / (n + 1.0) - 0.5;
        pts.push(on_cut(s, l.cut, (spread + lane).clamp(-0.95, 0.95)));
    }
    pts.push(locate(s, arc.end));
    pts.iter().map(|(x, y)| format!("{x:.1},{y:.1}")).collect::<Vec<_>>().join(" ")
}

/// One page, with the describing arc of `next` if given.
pub fn page_svg(s: &PlanarSurface, page: &Page, next: Option<&MovieEvent>, title: &str) -> String {
    let mut out = String::from(
        "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n<svg xmlns=\"http://www.w3.org/2000/svg\" version=\"1.1\" width=\"420\" height=\"420\">\n",
    );
    let _ = writeln!(out, "<text x=\"10\" y=\"20\" font-size=\"13\">{title}</text>");
    let _ = writeln!(out, "<circle cx=\"{}\" cy=\"{}\" r=\"{R0}\" fill=\"none\" stroke=\"black\" stroke-width=\"2\"/>", C.0, C.1);
    for j in s.cut_ids() {
        let (x, y) = hole_center(s, j);
        let _ = writeln!(out, "<circle cx=\"{x:.1}\" cy=\"{y:.1}\" r=\"{RH}\" fill=\"#eee\" stroke=\"black\"/>");
        let _ = writeln!(out, "<text x=\"{:.1}\" y=\"{:.1}\" font-size=\"11\">C{j}</text>", x - 7.0, y + 4.0);
        let a = locate(s, BoundaryPoint::new(0, s.foot(j)));
        let b = locate(s, BoundaryPoint::new(j, 0.into()));
        let _ = writeln!(
            out,
            "<line x1=\"{:.1}\" y1=\"{:.1}\" x2=\"{:.1}\" y2=\"{:.1}\" stroke=\"gray\" stroke-dasharray=\"1 3\"/>",
            a.0, a.1, b.0, b.1
        );
    }
    let b_leaves: Vec<_> = page.b_leaves().collect();
    for (i, l) in b_leaves.iter().enumerate() {
        let arc = l.arc().expect("b-leaf");
        let lane = (i as f64 - (b_leaves.len() as f64 - 1.0) / 2.0) * 0.15;
        let _ = writeln!(out, "<polyline points=\"{}\" fill=\"none\" stroke=\"#1f4e9c\" stroke-width=\"2\"/>", polyline(s, &arc, lane));
    }
    for l in page.a_leaves() {
        let (x, y) = locate(s, l.start);
        let (tx, ty) = (x + (C.0 - x) * 0.12, y + (C.1 - y) * 0.12);
        let _ = writeln!(out, "<line x1=\"{x:.1}\" y1=\"{y:.1}\" x2=\"{tx:.1}\" y2=\"{ty:.1}\" stroke=\"#1f4e9c\" stroke-width=\"2\"/>");
        let _ = writeln!(out, "<circle cx=\"{tx:.1}\" cy=\"{ty:.1}\" r=\"2.5\" fill=\"#1f4e9c\"/>");
    }
    if let Some(ev) = next {
        let dash = if ev.sign == Sign::Negative { " stroke-dasharray=\"6 4\"" } else { "" };
        let _ = writeln!(
            out,
            "<polyline points=\"{}\" fill=\"none\" stroke=\"#c0392b\" stroke-width=\"1.5\"{dash}/>",
            polyline(s, &ev.describing_arc, 0.3)
        );
    }
    for e in &page.elliptic {
        let (x, y) = locate(s, e.point);
        let fill = if e.sign == Sign::Positive { "white" } else { "black" };
        let _ = writeln!(out, "<circle cx=\"{x:.1}\" cy=\"{y:.1}\" r=\"5\" fill=\"{fill}\" stroke=\"black\"/>");
    }
    out.push_str("</svg>\n");
    out
}

/// The initial page and the page after each event. Each frame carries the
/// describing arc of the event that follows it; negative ones are dashed.
pub fn movie_frames(m: &Movie) -> obfol_core::Result<Vec<String>> {
    let s = *m.book.surface()?;
    let mut pages = vec![&m.initial];
    pages.extend(m.pages.iter());
    Ok(pages
        .iter()
        .enumerate()
        .map(|(i, page)| {
            let next = m.events.get(i);
            let title = match next {
                Some(ev) => format!("t = {}, next: {} at t = {}", page.t, ev.sign.symbol(), ev.t),
                None => format!("t = {}", page.t),
            };
            page_svg(&s, page, next, &title)
        })
        .collect())
}

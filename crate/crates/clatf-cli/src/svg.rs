use std::fmt::Write as _;

use clatf::affine::CutPolytope;
use clatf::atbd::Atbd;
use clatf::scattering::{ScatteringDiagram, Support};
use clatf::{LatticeVec, Rat, RatVec};
use num_traits::{ToPrimitive, Zero};

use crate::doc::{parse_atbd, parse_diagram, parse_polytope, DResult, Envelope};

type P = (f64, f64);

fn f(q: &Rat) -> f64 {
    q.to_f64().unwrap_or(0.0)
}

fn pf(p: &RatVec) -> P {
    (f(&p.x), f(&p.y))
}

fn num(x: f64) -> String {
    let s = format!("{x:.4}");
    let s = s.trim_end_matches('0').trim_end_matches('.');
    if s == "-0" { "0".into() } else { s.into() }
}

/// Drawing items in order; y is flipped at output.
enum Item {
    Polygon { pts: Vec<P>, class: &'static str },
    Line { a: P, b: P, class: &'static str },
    Dot { at: P },
    Cross { at: P, frozen: bool },
    Label { at: P, text: String },
}

struct Canvas {
    items: Vec<Item>,
}

impl Canvas {
    fn new() -> Self {
        Canvas { items: vec![] }
    }

    fn extent(&self) -> Option<(f64, f64, f64, f64)> {
        let mut pts: Vec<P> = vec![];
        for it in &self.items {
            match it {
                Item::Polygon { pts: ps, .. } => pts.extend(ps),
                Item::Line { a, b, .. } => pts.extend([*a, *b]),
                Item::Dot { at } | Item::Cross { at, .. } | Item::Label { at, .. } => pts.push(*at),
            }
        }
        let first = pts.first()?;
        Some(pts.iter().fold((first.0, first.1, first.0, first.1), |(x0, y0, x1, y1), p| {
            (x0.min(p.0), y0.min(p.1), x1.max(p.0), y1.max(p.1))
        }))
    }

    fn finish(&self) -> String {
        let (x0, y0, x1, y1) = self.extent().unwrap_or((-1.0, -1.0, 1.0, 1.0));
        let w = (x1 - x0).max(1e-9);
        let h = (y1 - y0).max(1e-9);
        let (mx, my) = (0.1 * w.max(h), 0.1 * w.max(h));
        let (vx, vy, vw, vh) = (x0 - mx, -(y1 + my), w + 2.0 * mx, h + 2.0 * my);
        let unit = vw.max(vh) / 100.0;
        let mut s = String::new();
        let _ = writeln!(
            s,
            r#"<svg xmlns="http://www.w3.org/2000/svg" viewBox="{} {} {} {}" width="480" height="{}">"#,
            num(vx),
            num(vy),
            num(vw),
            num(vh),
            num(480.0 * vh / vw)
        );
        let sw = num(unit * 0.6);
        for it in &self.items {
            match it {
                Item::Polygon { pts, class } => {
                    let d: Vec<String> = pts.iter().map(|p| format!("{},{}", num(p.0), num(-p.1))).collect();
                    let style = if *class == "sector" {
                        r##"fill="#cccccc" fill-opacity="0.5" stroke="none""##.to_string()
                    } else {
                        format!(r#"fill="none" stroke="black" stroke-width="{sw}""#)
                    };
                    let _ = writeln!(s, r#"  <polygon class="{class}" points="{}" {style}/>"#, d.join(" "));
                }
                Item::Line { a, b, class } => {
                    let dash = if *class == "cut" { format!(r#" stroke-dasharray="{} {}""#, num(unit * 2.0), num(unit * 1.5)) } else { String::new() };
                    let _ = writeln!(
                        s,
                        r#"  <line class="{class}" x1="{}" y1="{}" x2="{}" y2="{}" stroke="black" stroke-width="{sw}"{dash}/>"#,
                        num(a.0),
                        num(-a.1),
                        num(b.0),
                        num(-b.1)
                    );
                }
                Item::Dot { at } => {
                    let _ = writeln!(s, r#"  <circle class="vertex" cx="{}" cy="{}" r="{}" fill="black"/>"#, num(at.0), num(-at.1), num(unit));
                }
                Item::Cross { at, frozen } => {
                    let (class, color) = if *frozen { ("node frozen", "blue") } else { ("node", "black") };
                    let r = unit * 1.6;
                    let _ = writeln!(
                        s,
                        r#"  <path class="{class}" d="M{} {} L{} {} M{} {} L{} {}" stroke="{color}" stroke-width="{}"/>"#,
                        num(at.0 - r),
                        num(-at.1 - r),
                        num(at.0 + r),
                        num(-at.1 + r),
                        num(at.0 - r),
                        num(-at.1 + r),
                        num(at.0 + r),
                        num(-at.1 - r),
                        num(unit * 0.8)
                    );
                }
                Item::Label { at, text } => {
                    let _ = writeln!(
                        s,
                        r#"  <text class="label" x="{}" y="{}" font-size="{}">{}</text>"#,
                        num(at.0),
                        num(-at.1),
                        num(unit * 4.0),
                        text
                    );
                }
            }
        }
        s.push_str("</svg>\n");
        s
    }
}

fn closed_edges(c: &mut Canvas, vs: &[RatVec]) {
    let n = vs.len();
    for i in 0..n {
        c.items.push(Item::Line { a: pf(&vs[i]), b: pf(&vs[(i + 1) % n]), class: "edge" });
    }
}

/// First exit of the ray base + t dir (t > 0) through the polygon boundary.
fn exit_point(vs: &[RatVec], base: &RatVec, dir: LatticeVec) -> Option<RatVec> {
    let d = dir.to_rat();
    let n = vs.len();
    let mut best: Option<Rat> = None;
    for i in 0..n {
        let a = &vs[i];
        let e = vs[(i + 1) % n].clone() - a.clone();
        let den = d.det(&e);
        if den.is_zero() {
            continue;
        }
        let w = a.clone() - base.clone();
        let t = w.det(&e) / den.clone();
        let s = w.det(&d) / den;
        if t > Rat::zero() && s >= Rat::zero() && s <= Rat::from_integer(1.into()) && best.as_ref().map_or(true, |b| t < *b) {
            best = Some(t);
        }
    }
    best.map(|t| base.clone() + d.scale(&t))
}

fn render_atbd(a: &Atbd) -> Canvas {
    let mut c = Canvas::new();
    closed_edges(&mut c, &a.boundary);
    let statuses = a.vertex_statuses().ok();
    for (i, v) in a.boundary.iter().enumerate() {
        let corner = statuses.as_ref().map_or(true, |s| s[i].det == 1);
        if corner {
            c.items.push(Item::Dot { at: pf(v) });
        }
    }
    for n in &a.nodes {
        if let Ok(q) = a.boundary_hit(&n.position, n.direction) {
            c.items.push(Item::Line { a: pf(&n.position), b: pf(&q), class: "cut" });
        }
    }
    for n in &a.nodes {
        c.items.push(Item::Cross { at: pf(&n.position), frozen: n.frozen });
    }
    c
}

fn render_polytope(p: &CutPolytope) -> Canvas {
    let mut c = Canvas::new();
    closed_edges(&mut c, &p.vertices);
    for v in &p.vertices {
        c.items.push(Item::Dot { at: pf(v) });
    }
    for cut in &p.cuts {
        let end = exit_point(&p.vertices, &cut.base, cut.direction)
            .unwrap_or_else(|| cut.base.clone() + cut.direction.to_rat());
        c.items.push(Item::Line { a: pf(&cut.base), b: pf(&end), class: "cut" });
        c.items.push(Item::Cross { at: pf(&cut.base), frozen: cut.frozen });
    }
    c
}

fn monomial(m: LatticeVec) -> String {
    format!("z^({},{})", m.x, m.y)
}

fn wall_label(w: &clatf::scattering::Wall) -> String {
    let b = w.function.base();
    let parts: Vec<String> = w
        .function
        .factors()
        .iter()
        .map(|(k, e)| {
            let m = LatticeVec::new(b.x * *k as i64, b.y * *k as i64);
            if *e == 1 { format!("(1+{})", monomial(m)) } else { format!("(1+{})^{e}", monomial(m)) }
        })
        .collect();
    parts.join("")
}

fn render_diagram(d: &ScatteringDiagram) -> Canvas {
    let mut c = Canvas::new();
    let mut reach = 2.0f64;
    for w in &d.walls {
        for p in w.support.endpoints() {
            let q = pf(&p);
            reach = reach.max(q.0.abs().max(q.1.abs()) + 2.0);
        }
    }
    for s in &d.singular_points {
        let q = pf(&s.position);
        reach = reach.max(q.0.abs().max(q.1.abs()) + 2.0);
    }
    let along = |p: P, u: LatticeVec| {
        let (ux, uy) = (u.x as f64, u.y as f64);
        let l = (ux * ux + uy * uy).sqrt();
        (p.0 + reach * ux / l, p.1 + reach * uy / l)
    };
    for w in &d.walls {
        let (a, b) = match &w.support {
            Support::Line { point, dir } => (along(pf(point), -*dir), along(pf(point), *dir)),
            Support::Ray { base, dir } => (pf(base), along(pf(base), *dir)),
            Support::Segment { start, end, .. } => (pf(start), pf(end)),
        };
        c.items.push(Item::Line { a, b, class: "wall" });
        c.items.push(Item::Label { at: b, text: wall_label(w) });
    }
    let mut shaded: Vec<usize> = vec![];
    for (i, s) in d.singular_points.iter().enumerate() {
        let at = pf(&s.position);
        c.items.push(Item::Line { a: at, b: along(at, s.cut), class: "cut" });
        if let Some(j) = (0..i).find(|&j| d.singular_points[j].position == s.position && !shaded.contains(&j)) {
            let other = d.singular_points[j].cut;
            let (u, v) = if other.det(&s.cut) > 0 { (other, s.cut) } else { (s.cut, other) };
            c.items.push(Item::Polygon { pts: vec![at, along(at, u), along(at, u + v), along(at, v)], class: "sector" });
            shaded.extend([i, j]);
        }
    }
    for s in &d.singular_points {
        c.items.push(Item::Cross { at: pf(&s.position), frozen: false });
    }
    c
}

pub fn render(doc: &Envelope) -> DResult<String> {
    let c = match doc.kind.as_str() {
        "atbd" => render_atbd(&parse_atbd(&doc.payload)?),
        "polytope" => render_polytope(&parse_polytope(&doc.payload)?),
        "diagram" => render_diagram(&parse_diagram(&doc.payload)?),
        _ => Canvas::new(),
    };
    Ok(c.finish())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::doc::{atbd, diagram};
    use clatf::atbd::seed_catalog;
    use clatf::exact::FiniteType;
    use clatf::scattering::{dp5_canonical, initial_diagram, Seed, Variant};
    use serde_json::Value;

    fn count(svg: &str, class: &str) -> usize {
        svg.matches(&format!(r#"class="{class}""#)).count()
    }

    #[test]
    fn dp5_inventory() {
        let e = Envelope::new("atbd", atbd(&seed_catalog("dp5_00").unwrap()), Value::Null);
        let s = render(&e).unwrap();
        assert_eq!(count(&s, "edge"), 5);
        assert_eq!(count(&s, "node"), 2);
        assert_eq!(count(&s, "cut"), 2);
        assert_eq!(count(&s, "vertex"), 5);
        assert_eq!(s, render(&e).unwrap());
    }

    #[test]
    fn frozen_nodes_are_blue() {
        let e = Envelope::new("atbd", atbd(&seed_catalog("dp5_5tori").unwrap()), Value::Null);
        let s = render(&e).unwrap();
        assert_eq!(count(&s, "node frozen"), 1);
        assert!(s.contains(r#"stroke="blue""#));
    }

    #[test]
    fn canonical_dp5_picture() {
        let s = render(&Envelope::new("diagram", diagram(&dp5_canonical().unwrap()), Value::Null)).unwrap();
        assert_eq!(count(&s, "wall"), 5);
        assert_eq!(count(&s, "label"), 5);
        assert_eq!(count(&s, "sector"), 1);
    }

    #[test]
    fn empty_canvas() {
        let mut d = initial_diagram(&Seed::standard(FiniteType::A2), Variant::X).unwrap();
        d.walls.clear();
        let s = render(&Envelope::new("diagram", diagram(&d), Value::Null)).unwrap();
        assert!(s.starts_with("<svg") && s.trim_end().ends_with("</svg>"));
        assert_eq!(s.lines().count(), 2);
    }
}

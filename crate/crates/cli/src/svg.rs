//! Poincaré-disk figures. Geodesics are arcs of circles orthogonal to the
//! unit circle; every primitive is also listed in a sibling CSV with the same
//! formatted numbers that appear in the SVG.

use std::fmt::Write as _;

use hypglue::hyperboloid::{BoundarySphere, Hyperplane, RealForm};
use serde::Serialize;

const STROKE: &str = "0.006";

pub const FIRST: &str = "#1f77b4";
pub const SECOND: &str = "#d62728";
pub const MARKED: &str = "#2ca02c";
pub const FAINT: &str = "#bbbbbb";
pub const POINT: &str = "#222222";
pub const WITNESS: &str = "#ff7f0e";

fn num(x: f64) -> String {
    let s = format!("{x:.6}");
    if s == "-0.000000" {
        "0.000000".into()
    } else {
        s
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct PrimitiveRow {
    pub index: usize,
    pub label: String,
    pub kind: &'static str,
    pub color: &'static str,
    pub x1: String,
    pub y1: String,
    pub x2: String,
    pub y2: String,
    pub radius: String,
    pub sweep: String,
}

pub const PRIMITIVE_HEADER: [&str; 10] = ["index", "label", "kind", "color", "x1", "y1", "x2", "y2", "radius", "sweep"];

#[derive(Debug, Default)]
pub struct Disk {
    rows: Vec<PrimitiveRow>,
}

impl Disk {
    pub fn new() -> Self {
        Disk::default()
    }

    fn push(&mut self, label: &str, kind: &'static str, color: &'static str, v: [String; 6]) {
        let [x1, y1, x2, y2, radius, sweep] = v;
        let index = self.rows.len();
        self.rows.push(PrimitiveRow { index, label: label.into(), kind, color, x1, y1, x2, y2, radius, sweep });
    }

    /// Geodesic segment between two points of the closed disk.
    pub fn segment(&mut self, label: &str, color: &'static str, p: [f64; 2], q: [f64; 2]) {
        // SVG y axis points down
        let (p, q) = ([p[0], -p[1]], [q[0], -q[1]]);
        let det = 2.0 * (p[0] * q[1] - p[1] * q[0]);
        let pp = p[0] * p[0] + p[1] * p[1] + 1.0;
        let qq = q[0] * q[0] + q[1] * q[1] + 1.0;
        let ends = [num(p[0]), num(p[1]), num(q[0]), num(q[1])];
        if det.abs() < 1e-9 {
            let [a, b, c, d] = ends;
            self.push(label, "line", color, [a, b, c, d, String::new(), String::new()]);
            return;
        }
        // centre c of the orthogonal circle: 2 c·p = |p|² + 1, same for q
        let cx = (pp * q[1] - qq * p[1]) / det;
        let cy = (p[0] * qq - q[0] * pp) / det;
        let r = (cx * cx + cy * cy - 1.0).max(0.0).sqrt();
        if r > 1e6 {
            let [a, b, c, d] = ends;
            self.push(label, "line", color, [a, b, c, d, String::new(), String::new()]);
            return;
        }
        let cross = (p[0] - cx) * (q[1] - cy) - (p[1] - cy) * (q[0] - cx);
        let sweep = if cross > 0.0 { "1" } else { "0" };
        let [a, b, c, d] = ends;
        self.push(label, "arc", color, [a, b, c, d, num(r), sweep.into()]);
    }

    /// The whole geodesic `h`, between its two ideal endpoints.
    pub fn geodesic(&mut self, label: &str, color: &'static str, form: &RealForm, h: &Hyperplane) {
        let (p, q) = ideal_endpoints(&form.boundary_sphere(h));
        self.segment(label, color, p, q);
    }

    pub fn point(&mut self, label: &str, color: &'static str, p: [f64; 2]) {
        self.push(label, "point", color, [num(p[0]), num(-p[1]), String::new(), String::new(), num(0.015), String::new()]);
    }

    pub fn rows(&self) -> &[PrimitiveRow] {
        &self.rows
    }

    pub fn render(&self, title: &str) -> String {
        let mut s = String::new();
        s.push_str("<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n");
        s.push_str("<svg xmlns=\"http://www.w3.org/2000/svg\" viewBox=\"-1.05 -1.05 2.1 2.1\" width=\"640\" height=\"640\">\n");
        let _ = writeln!(s, "<title>{}</title>", escape(title));
        let _ = writeln!(s, "<circle cx=\"0\" cy=\"0\" r=\"1\" fill=\"none\" stroke=\"#000000\" stroke-width=\"{STROKE}\"/>");
        for r in &self.rows {
            match r.kind {
                "line" => {
                    let _ = writeln!(
                        s,
                        "<path d=\"M {} {} L {} {}\" fill=\"none\" stroke=\"{}\" stroke-width=\"{STROKE}\"><title>{}</title></path>",
                        r.x1, r.y1, r.x2, r.y2, r.color, escape(&r.label)
                    );
                }
                "arc" => {
                    let _ = writeln!(
                        s,
                        "<path d=\"M {} {} A {} {} 0 0 {} {} {}\" fill=\"none\" stroke=\"{}\" stroke-width=\"{STROKE}\"><title>{}</title></path>",
                        r.x1, r.y1, r.radius, r.radius, r.sweep, r.x2, r.y2, r.color, escape(&r.label)
                    );
                }
                _ => {
                    let _ = writeln!(
                        s,
                        "<circle cx=\"{}\" cy=\"{}\" r=\"{}\" fill=\"{}\"><title>{}</title></circle>",
                        r.x1, r.y1, r.radius, r.color, escape(&r.label)
                    );
                }
            }
        }
        s.push_str("</svg>\n");
        s
    }
}

fn escape(s: &str) -> String {
    s.replace('&', "&amp;").replace('<', "&lt;").replace('>', "&gt;")
}

/// Endpoints on the unit circle of the geodesic with the given boundary
/// circle (only the first two coordinates are used).
pub fn ideal_endpoints(b: &BoundarySphere) -> ([f64; 2], [f64; 2]) {
    match b {
        BoundarySphere::Plane { normal } => {
            let (x, y) = (-normal[1], normal[0]);
            let n = x.hypot(y);
            ([x / n, y / n], [-x / n, -y / n])
        }
        BoundarySphere::Sphere { center, radius } => {
            let phi = center[1].atan2(center[0]);
            let half = radius.atan();
            let at = |t: f64| [t.cos(), t.sin()];
            (at(phi - half), at(phi + half))
        }
    }
}

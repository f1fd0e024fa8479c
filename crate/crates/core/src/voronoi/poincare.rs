//! Side-pairing check for 2-dimensional domains cut out by several cells
//! sharing one centre.

use std::f64::consts::PI;

use serde::Serialize;

use super::cell::{segments_of, FacetSegment, VoronoiCell, MAX_REGION_RADIUS};
use super::klein::{ball_polytope, irredundant, LinearConstraint};
use super::VoronoiError;
use crate::hyperboloid::{Matrix, Nesting, Vector};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct FacetRef {
    pub cell: usize,
    pub face: usize,
}

/// `map` sends facet `from` onto facet `to`.
#[derive(Debug, Clone)]
pub struct SidePairing {
    pub from: FacetRef,
    pub to: FacetRef,
    pub map: Matrix,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub enum PoincareFailure {
    /// A bounding hyperplane that does not support a facet of the domain.
    NotAFacet(FacetRef),
    Unpaired(FacetRef),
    PairedTwice(FacetRef),
    MapMismatch { pairing: usize },
    CenterNotMovedAcross { pairing: usize },
    AngleDefect { vertex: [f64; 2], angle_sum: f64 },
    Nested { inner: FacetRef, outer: FacetRef },
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct VertexCycle {
    pub vertices: Vec<[f64; 2]>,
    pub angle_sum: f64,
    pub order: Option<usize>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PoincareReport {
    pub facets: Vec<FacetRef>,
    pub cycles: Vec<VertexCycle>,
    pub failures: Vec<PoincareFailure>,
    /// Rank of the free group generated by the pairings when there are no
    /// vertex cycles and every check passed.
    pub free_rank: Option<usize>,
}

impl PoincareReport {
    pub fn passed(&self) -> bool {
        self.failures.is_empty()
    }

    pub fn nested_witness(&self) -> Option<(FacetRef, FacetRef)> {
        self.failures.iter().find_map(|f| match f {
            PoincareFailure::Nested { inner, outer } => Some((*inner, *outer)),
            _ => None,
        })
    }
}

const VERTEX_TOL: f64 = 1e-6;

fn close(a: &[f64; 2], b: &[f64; 2]) -> bool {
    (a[0] - b[0]).abs() <= VERTEX_TOL && (a[1] - b[1]).abs() <= VERTEX_TOL
}

/// Pairings for a Dirichlet domain: each face whose neighbour is `g·p` is
/// paired with the face whose neighbour is `g⁻¹·p`, via `g⁻¹`.
pub fn dirichlet_pairings(domain: &[VoronoiCell]) -> Vec<SidePairing> {
    let mut out = Vec::new();
    let mut used: Vec<FacetRef> = Vec::new();
    for (ci, cell) in domain.iter().enumerate() {
        let form = &cell.form;
        let n = form.dim();
        let f = form.gram();
        for (fi, face) in cell.faces.iter().enumerate() {
            let from = FacetRef { cell: ci, face: fi };
            if used.contains(&from) {
                continue;
            }
            let g = &face.matrix;
            let g_inv = Matrix::from_fn(n, n, |r, c| g[(c, r)] * f[(c, c)] / f[(r, r)]);
            let target = &g_inv * &cell.center;
            let scale = target.amax().max(1.0);
            let partner = domain.iter().enumerate().find_map(|(cj, other)| {
                other
                    .faces
                    .iter()
                    .position(|o| (&o.neighbor - &target).amax() <= 1e-9 * scale)
                    .map(|fj| FacetRef { cell: cj, face: fj })
            });
            if let Some(to) = partner {
                if to != from && !used.contains(&to) {
                    used.push(from);
                    used.push(to);
                    out.push(SidePairing { from, to, map: g_inv });
                }
            }
        }
    }
    out
}

pub fn check_poincare_2d(domain: &[VoronoiCell], pairings: &[SidePairing]) -> Result<PoincareReport, VoronoiError> {
    let Some(first) = domain.first() else {
        return Err(VoronoiError::EmptyDomain);
    };
    if first.dim() != 2 {
        return Err(VoronoiError::NotPlanar(first.dim()));
    }
    let form = &first.form;
    let center = &first.center;
    for c in domain {
        if c.dim() != 2 {
            return Err(VoronoiError::NotPlanar(c.dim()));
        }
        if (&c.center - center).amax() > 1e-9 * center.amax() {
            return Err(VoronoiError::DifferentCenters);
        }
    }
    let chart = first.chart();
    let mut refs = Vec::new();
    let mut cons: Vec<LinearConstraint> = Vec::new();
    for (ci, c) in domain.iter().enumerate() {
        for (fi, face) in c.faces.iter().enumerate() {
            refs.push(FacetRef { cell: ci, face: fi });
            cons.push(chart.constraint(form, &face.halfspace));
        }
    }
    let region = ball_polytope(2, MAX_REGION_RADIUS.tanh(), true);
    let alive = irredundant(2, &cons, &region);
    let mut failures = Vec::new();
    for (k, r) in refs.iter().enumerate() {
        if !alive.contains(&k) {
            failures.push(PoincareFailure::NotAFacet(*r));
        }
    }
    let facets: Vec<FacetRef> = alive.iter().map(|&k| refs[k]).collect();
    let alive_cons: Vec<LinearConstraint> = alive.iter().map(|&k| cons[k].clone()).collect();
    let segments: Vec<FacetSegment> = segments_of(&alive_cons);
    let segment_of = |r: &FacetRef| {
        let k = facets.iter().position(|x| x == r)?;
        segments.iter().find(|s| s.face == k)
    };
    let lift = |e: &super::cell::SegmentEnd| -> Vector {
        if e.ideal {
            chart.lift(&e.klein)
        } else {
            chart.point(form, &e.klein)
        }
    };
    let to_chart = |x: &Vector| -> [f64; 2] {
        let k = chart.to_chart(form, x);
        [k[0], k[1]]
    };

    // (i) every facet paired exactly once
    let mut count = vec![0usize; facets.len()];
    for p in pairings {
        for r in [p.from, p.to] {
            if let Some(k) = facets.iter().position(|x| *x == r) {
                count[k] += 1;
            }
        }
    }
    for (k, r) in facets.iter().enumerate() {
        match count[k] {
            0 => failures.push(PoincareFailure::Unpaired(*r)),
            1 => {}
            _ => failures.push(PoincareFailure::PairedTwice(*r)),
        }
    }

    // (ii) maps send facets onto partners and the centre across
    for (i, p) in pairings.iter().enumerate() {
        let (Some(a), Some(b)) = (segment_of(&p.from), segment_of(&p.to)) else {
            failures.push(PoincareFailure::MapMismatch { pairing: i });
            continue;
        };
        let img: Vec<[f64; 2]> = [&a.start, &a.end].iter().map(|e| to_chart(&(&p.map * lift(e)))).collect();
        let ok = (close(&img[0], &b.start.klein) && close(&img[1], &b.end.klein))
            || (close(&img[0], &b.end.klein) && close(&img[1], &b.start.klein));
        if !ok {
            failures.push(PoincareFailure::MapMismatch { pairing: i });
        }
        let hs = &domain[p.to.cell].faces[p.to.face].halfspace;
        if hs.value(form, &(&p.map * center)) >= 0.0 {
            failures.push(PoincareFailure::CenterNotMovedAcross { pairing: i });
        }
    }

    // (iii) vertex cycles
    let mut corners: Vec<([f64; 2], usize)> = Vec::new();
    for s in &segments {
        for e in [&s.start, &s.end] {
            if !e.ideal {
                corners.push((e.klein, s.face));
            }
        }
    }
    let pairing_of = |k: usize| -> Option<(Matrix, usize)> {
        let r = facets[k];
        pairings.iter().find_map(|p| {
            if p.from == r {
                facets.iter().position(|x| *x == p.to).map(|t| (p.map.clone(), t))
            } else if p.to == r {
                let n = form.dim();
                let f = form.gram();
                let inv = Matrix::from_fn(n, n, |a, b| p.map[(b, a)] * f[(b, b)] / f[(a, a)]);
                facets.iter().position(|x| *x == p.from).map(|t| (inv, t))
            } else {
                None
            }
        })
    };
    let angle_at = |v: &[f64; 2]| -> Option<f64> {
        let faces: Vec<usize> = corners.iter().filter(|(w, _)| close(v, w)).map(|(_, f)| *f).collect();
        if faces.len() != 2 {
            return None;
        }
        let u1 = domain[facets[faces[0]].cell].faces[facets[faces[0]].face].halfspace.inward_normal();
        let u2 = domain[facets[faces[1]].cell].faces[facets[faces[1]].face].halfspace.inward_normal();
        Some((-form.bilinear(&u1, &u2)).clamp(-1.0, 1.0).acos())
    };
    let mut seen = vec![false; corners.len()];
    let mut cycles = Vec::new();
    for start in 0..corners.len() {
        if seen[start] {
            continue;
        }
        let mut vertices = Vec::new();
        let mut angle_sum = 0.0;
        let (mut v, mut face) = corners[start];
        let mut broken = false;
        for _ in 0..4 * corners.len() + 4 {
            let idx = corners.iter().position(|(w, f)| close(w, &v) && *f == face).expect("corner is listed");
            if seen[idx] && idx == start && !vertices.is_empty() {
                break;
            }
            seen[idx] = true;
            vertices.push(v);
            match angle_at(&v) {
                Some(a) => angle_sum += a,
                None => {
                    broken = true;
                    break;
                }
            }
            let Some((map, to)) = pairing_of(face) else {
                broken = true;
                break;
            };
            let image = to_chart(&(&map * chart.point(form, &v)));
            let Some(other) = corners.iter().find(|(w, f)| close(w, &image) && *f != to) else {
                broken = true;
                break;
            };
            // mark the arrival corner on the partner facet
            if let Some(arrive) = corners.iter().position(|(w, f)| close(w, &image) && *f == to) {
                seen[arrive] = true;
            }
            v = other.0;
            face = other.1;
        }
        let order = if broken {
            None
        } else {
            let m = (2.0 * PI / angle_sum).round();
            (m >= 1.0 && (angle_sum - 2.0 * PI / m).abs() <= 1e-6).then_some(m as usize)
        };
        if order.is_none() {
            failures.push(PoincareFailure::AngleDefect { vertex: vertices.first().copied().unwrap_or(corners[start].0), angle_sum });
        }
        cycles.push(VertexCycle { vertices, angle_sum, order });
    }

    // (iv) no nesting between hyperplanes of distinct cells
    for (ci, a) in domain.iter().enumerate() {
        for (cj, b) in domain.iter().enumerate().skip(ci + 1) {
            for (fi, fa) in a.faces.iter().enumerate() {
                for (fj, fb) in b.faces.iter().enumerate() {
                    if let Nesting::Nested { first_inside } = form.nesting(&fa.halfspace, &fb.halfspace, center)? {
                        let ra = FacetRef { cell: ci, face: fi };
                        let rb = FacetRef { cell: cj, face: fj };
                        let (inner, outer) = if first_inside { (ra, rb) } else { (rb, ra) };
                        failures.push(PoincareFailure::Nested { inner, outer });
                    }
                }
            }
        }
    }

    let free_rank = (failures.is_empty() && cycles.is_empty()).then_some(pairings.len());
    Ok(PoincareReport { facets, cycles, failures, free_rank })
}

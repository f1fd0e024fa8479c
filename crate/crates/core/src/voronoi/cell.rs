use serde::Serialize;

use super::group::{OrbitSet, Word};
use super::klein::{ball_polytope, irredundant, min_norm, KleinChart, LinearConstraint};
use super::VoronoiError;
use crate::hyperboloid::{HalfSpace, Hyperplane, Matrix, RealForm, Vector, EPS};

/// Largest region radius used for pruning; beyond it Klein coordinates lose
/// too much precision.
pub const MAX_REGION_RADIUS: f64 = 10.0;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub enum FacetType {
    First,
    Second,
}

impl FacetType {
    pub fn as_str(self) -> &'static str {
        match self {
            FacetType::First => "first",
            FacetType::Second => "second",
        }
    }
}

/// A bounding halfspace of a cell, with the orbit point it separates from.
#[derive(Debug, Clone)]
pub struct CellFace {
    pub halfspace: HalfSpace,
    pub neighbor: Vector,
    pub word: Word,
    /// `neighbor = matrix · center` whenever both come from the same seed.
    pub matrix: Matrix,
    pub kind: Option<FacetType>,
}

#[derive(Debug, Clone)]
pub struct VoronoiCell {
    pub form: RealForm,
    pub center: Vector,
    pub faces: Vec<CellFace>,
    /// Hyperbolic radius of the ball around the centre in which the face
    /// list is certified irredundant.
    pub region_radius: f64,
    chart: KleinChart,
}

/// Endpoint of a facet segment: a vertex inside ℍ² or an ideal point.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SegmentEnd {
    pub klein: [f64; 2],
    pub ideal: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct FacetSegment {
    pub face: usize,
    pub start: SegmentEnd,
    pub end: SegmentEnd,
}

fn region_radius(rho: f64) -> f64 {
    if rho.is_finite() {
        rho.min(MAX_REGION_RADIUS)
    } else {
        MAX_REGION_RADIUS
    }
}

/// The Dirichlet cell of the orbit point `center`: bisector halfspaces
/// towards every other orbit point, pruned to those that are irredundant
/// within the certification radius.
pub fn dirichlet_cell(center: &Vector, orbit: &OrbitSet) -> Result<VoronoiCell, VoronoiError> {
    let ci = orbit.index_of(center).ok_or(VoronoiError::CenterNotInOrbit)?;
    let form = &orbit.form;
    let p = &orbit.points[ci];
    let mut candidates = Vec::new();
    for (j, q) in orbit.points.iter().enumerate() {
        if j == ci {
            continue;
        }
        let hs = form.voronoi_halfspace(&p.point, &q.point)?;
        // p = A·s and q = B·s give q = B A⁻¹ p
        let rel = relative_matrix(form, &p.matrix, &q.matrix);
        candidates.push(CellFace {
            halfspace: hs,
            neighbor: q.point.clone(),
            word: q.word.clone(),
            matrix: rel,
            kind: None,
        });
    }
    let region_radius = region_radius(orbit.certification_radius);
    build(form.clone(), p.point.clone(), candidates, region_radius)
}

fn relative_matrix(form: &RealForm, a: &Matrix, b: &Matrix) -> Matrix {
    let n = form.dim();
    let f = form.gram();
    let a_inv = Matrix::from_fn(n, n, |r, c| a[(c, r)] * f[(c, c)] / f[(r, r)]);
    b * a_inv
}

fn build(form: RealForm, center: Vector, candidates: Vec<CellFace>, region_radius: f64) -> Result<VoronoiCell, VoronoiError> {
    let chart = KleinChart::new(&form, &center);
    let n = chart.dim();
    let constraints: Vec<LinearConstraint> = candidates.iter().map(|c| chart.constraint(&form, &c.halfspace)).collect();
    let region = ball_polytope(n, region_radius.tanh(), true);
    let keep = irredundant(n, &constraints, &region);
    let faces = keep.into_iter().map(|i| candidates[i].clone()).collect();
    Ok(VoronoiCell { form, center, faces, region_radius, chart })
}

impl VoronoiCell {
    /// A cell given directly by halfspaces (all must contain `center`).
    pub fn from_halfspaces(
        form: RealForm,
        center: Vector,
        faces: Vec<CellFace>,
        region_radius: f64,
    ) -> Result<Self, VoronoiError> {
        for f in &faces {
            if f.halfspace.value(&form, &center) <= 0.0 {
                return Err(VoronoiError::CenterNotInterior);
            }
        }
        build(form, center, faces, region_radius)
    }

    /// The same faces, without redundancy pruning.
    pub fn with_faces(&self, faces: Vec<CellFace>) -> VoronoiCell {
        VoronoiCell { form: self.form.clone(), center: self.center.clone(), faces, region_radius: self.region_radius, chart: self.chart.clone() }
    }

    pub fn chart(&self) -> &KleinChart {
        &self.chart
    }

    pub fn dim(&self) -> usize {
        self.chart.dim()
    }

    pub fn contains(&self, x: &Vector) -> bool {
        self.faces.iter().all(|f| f.halfspace.contains(&self.form, x))
    }

    /// Smallest `b(x, u)` over inward unit normals (≥ 0 inside).
    pub fn margin(&self, x: &Vector) -> f64 {
        self.faces.iter().map(|f| f.halfspace.value(&self.form, x)).fold(f64::INFINITY, f64::min)
    }

    pub fn constraints(&self) -> Vec<LinearConstraint> {
        self.faces.iter().map(|f| self.chart.constraint(&self.form, &f.halfspace)).collect()
    }

    /// Tags each face `First` iff the facet meets one of the `marked` lifts
    /// inside the certified region.
    pub fn classify_facets(&self, marked: &[Hyperplane]) -> VoronoiCell {
        let n = self.dim();
        let cons = self.constraints();
        let r = self.region_radius.tanh();
        let planes: Vec<LinearConstraint> = marked.iter().map(|h| self.chart.plane(&self.form, h)).collect();
        let mut out = self.clone();
        for (i, face) in out.faces.iter_mut().enumerate() {
            let others: Vec<&LinearConstraint> =
                cons.iter().enumerate().filter(|&(j, _)| j != i).map(|(_, c)| c).collect();
            let hit = planes.iter().any(|m| min_norm(n, &others, &[&cons[i], m]).is_some_and(|(_, upper)| upper <= r + 1e-12));
            face.kind = Some(if hit { FacetType::First } else { FacetType::Second });
        }
        out
    }

    /// Facet segments in chart coordinates (dimension 2 only), clipped to the
    /// closed unit disk. Faces with an empty segment are skipped.
    pub fn facet_segments(&self) -> Vec<FacetSegment> {
        segments_of(&self.constraints())
    }

    /// Finite vertices in chart coordinates (dimension 2 only).
    pub fn vertices(&self) -> Vec<[f64; 2]> {
        let mut out: Vec<[f64; 2]> = Vec::new();
        for s in self.facet_segments() {
            for e in [&s.start, &s.end] {
                if !e.ideal && !out.iter().any(|v| (v[0] - e.klein[0]).abs() < 1e-9 && (v[1] - e.klein[1]).abs() < 1e-9) {
                    out.push(e.klein);
                }
            }
        }
        out
    }

    /// Sheet point (or light-cone vector when ideal) of a chart position.
    pub fn lift(&self, e: &SegmentEnd) -> Vector {
        if e.ideal {
            self.chart.lift(&e.klein)
        } else {
            self.chart.point(&self.form, &e.klein)
        }
    }
}

/// Chord-interval clipping of each constraint line against the others and
/// the unit disk.
pub(crate) fn segments_of(cons: &[LinearConstraint]) -> Vec<FacetSegment> {
    let mut out = Vec::new();
    for (i, c) in cons.iter().enumerate() {
        if c.a.len() != 2 {
            return Vec::new();
        }
        let (a0, a1) = (c.a[0], c.a[1]);
        let foot = [a0 * c.b, a1 * c.b];
        let dir = [-a1, a0];
        let r2 = 1.0 - c.b * c.b;
        if r2 <= 0.0 {
            continue;
        }
        let half = r2.sqrt();
        let (mut lo, mut hi) = (-half, half);
        let (mut lo_ideal, mut hi_ideal) = (true, true);
        for (j, d) in cons.iter().enumerate() {
            if j == i {
                continue;
            }
            let rate = d.a[0] * dir[0] + d.a[1] * dir[1];
            let base = d.eval(&foot);
            if rate.abs() < 1e-14 {
                if base < -EPS {
                    lo = f64::INFINITY;
                }
                continue;
            }
            let s = -base / rate;
            if rate > 0.0 {
                if s > lo {
                    lo = s;
                    lo_ideal = false;
                }
            } else if s < hi {
                hi = s;
                hi_ideal = false;
            }
        }
        if hi - lo > 1e-12 {
            let at = |s: f64| [foot[0] + s * dir[0], foot[1] + s * dir[1]];
            out.push(FacetSegment {
                face: i,
                start: SegmentEnd { klein: at(lo), ideal: lo_ideal },
                end: SegmentEnd { klein: at(hi), ideal: hi_ideal },
            });
        }
    }
    out
}

//! Admissible point sets on marked geodesics of a 2-dimensional desk group.

use serde::Serialize;

use super::group::{build_orbit, GroupData, OrbitSet};
use super::VoronoiError;
use crate::hyperboloid::{RealForm, Vector};

/// A marked geodesic: its lift through `start` with unit tangent `tangent`,
/// and a fundamental segment of the given length starting at `start`.
#[derive(Debug, Clone)]
pub struct MarkedSurface {
    pub start: Vector,
    pub tangent: Vector,
    pub length: f64,
}

impl MarkedSurface {
    pub fn at(&self, form: &RealForm, t: f64) -> Vector {
        form.exp(&self.start, &self.tangent, t)
    }
}

#[derive(Debug, Clone)]
pub struct AdmissibleSet {
    /// `(point, index of the surface it lies on)`.
    pub points: Vec<(Vector, usize)>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub enum AdmissibleVerdict {
    Admissible,
    /// A point of `surface` strictly closer to a centre off that surface.
    Violation { witness: Vec<f64>, surface: usize, gap: f64 },
}

impl AdmissibleVerdict {
    pub fn is_admissible(&self) -> bool {
        matches!(self, AdmissibleVerdict::Admissible)
    }
}

/// `min |A cosh t + B sinh t|` over `t ∈ [0, len]`.
fn min_abs_combination(a: f64, b: f64, len: f64) -> f64 {
    let value = |t: f64| a * t.cosh() + b * t.sinh();
    let (v0, v1) = (value(0.0), value(len));
    if v0.signum() != v1.signum() {
        return 0.0;
    }
    let mut best = v0.abs().min(v1.abs());
    if a.abs() > b.abs() {
        let t = (-b / a).atanh();
        if t > 0.0 && t < len {
            let v = value(t);
            if v.signum() != v0.signum() {
                return 0.0;
            }
            best = best.min(v.abs());
        }
    }
    best
}

/// `δᵢ`: distance from the fundamental segment of surface `i` to the orbit
/// images (words of length ≤ `cutoff`) of the lifts of the other surfaces.
pub fn surface_gaps(surfaces: &[MarkedSurface], group: &GroupData, cutoff: usize) -> Result<Vec<f64>, VoronoiError> {
    let form = group.form();
    let words = group.reduced_words(cutoff);
    let mut gaps = Vec::with_capacity(surfaces.len());
    for (i, s) in surfaces.iter().enumerate() {
        let mut best = f64::INFINITY;
        for (j, other) in surfaces.iter().enumerate() {
            if j == i {
                continue;
            }
            let lift = super::scenes::geodesic(form, &other.start, &other.tangent)?;
            for (_, m) in &words {
                let image = form.map_hyperplane(m, &lift);
                let n = image.normal();
                let a = form.bilinear(&s.start, n);
                let b = form.bilinear(&s.tangent, n);
                best = best.min(min_abs_combination(a, b, s.length).asinh());
            }
        }
        if best <= 1e-9 {
            return Err(VoronoiError::ZeroGap(i));
        }
        gaps.push(best);
    }
    Ok(gaps)
}

/// Points at spacing at most `δᵢ / 2` along each fundamental segment.
pub fn build_admissible_set(
    surfaces: &[MarkedSurface],
    group: &GroupData,
    cutoff: usize,
) -> Result<AdmissibleSet, VoronoiError> {
    let form = group.form();
    let gaps = surface_gaps(surfaces, group, cutoff)?;
    let mut points = Vec::new();
    for (i, s) in surfaces.iter().enumerate() {
        let count = if gaps[i].is_finite() { (s.length / (0.5 * gaps[i])).ceil().max(1.0) as usize } else { 1 };
        for k in 0..count {
            points.push((s.at(form, s.length * k as f64 / count as f64), i));
        }
    }
    Ok(AdmissibleSet { points })
}

struct Sampler<'a> {
    form: &'a RealForm,
    orbit: &'a OrbitSet,
    tags: Vec<usize>,
}

impl Sampler<'_> {
    /// (distance to nearest centre on `surface`, distance to nearest centre off it).
    fn split(&self, x: &Vector, surface: usize) -> Result<(f64, f64), VoronoiError> {
        let mut same = f64::INFINITY;
        let mut other = f64::INFINITY;
        for (q, &tag) in self.orbit.points.iter().zip(&self.tags) {
            let d = self.form.distance_unchecked(x, &q.point);
            if tag == surface {
                same = same.min(d);
            } else {
                other = other.min(d);
            }
        }
        let nearest = same.min(other);
        if nearest > 2.0 * self.orbit.certification_radius - self.orbit.seed_distance(x) {
            return Err(VoronoiError::Undecidable);
        }
        Ok((same, other))
    }
}

/// Samples every fundamental segment at spacing `ε_grid = min δᵢ / 10` (or
/// `length / 64` for a lone surface) and checks that the nearest centre lies
/// on the same surface. Distances are 1-Lipschitz, so a sample whose margin
/// exceeds the spacing clears its whole neighbourhood; ambiguous samples are
/// subdivided.
pub fn is_admissible(
    set: &AdmissibleSet,
    surfaces: &[MarkedSurface],
    group: &GroupData,
    cutoff: usize,
) -> Result<AdmissibleVerdict, VoronoiError> {
    let form = group.form();
    let seeds: Vec<Vector> = set.points.iter().map(|p| p.0.clone()).collect();
    let orbit = build_orbit(&seeds, group, cutoff)?;
    let tags = orbit.points.iter().map(|q| set.points[q.seed].1).collect();
    let sampler = Sampler { form, orbit: &orbit, tags };
    let gaps = if surfaces.len() > 1 { surface_gaps(surfaces, group, cutoff)? } else { vec![f64::INFINITY] };
    let min_gap = gaps.iter().copied().fold(f64::INFINITY, f64::min);
    for (i, s) in surfaces.iter().enumerate() {
        let grid = if min_gap.is_finite() { min_gap / 10.0 } else { s.length / 64.0 };
        let steps = (s.length / grid).ceil().max(1.0) as usize;
        let h = s.length / steps as f64;
        let mut stack: Vec<(f64, f64)> = (0..=steps).map(|k| (k as f64 * h, h)).collect();
        while let Some((t, h)) = stack.pop() {
            let x = s.at(form, t);
            let (same, other) = sampler.split(&x, i)?;
            if other < same - 1e-9 {
                return Ok(AdmissibleVerdict::Violation { witness: form.ball_coordinates(&x)?, surface: i, gap: same - other });
            }
            if other - same <= h && h > 1e-6 {
                for dt in [-0.25 * h, 0.25 * h] {
                    let u = t + dt;
                    if (0.0..=s.length).contains(&u) {
                        stack.push((u, 0.5 * h));
                    }
                }
            }
        }
    }
    Ok(AdmissibleVerdict::Admissible)
}

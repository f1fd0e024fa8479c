//! Desk configurations in ℍ² built from hyperbolic translations.

use super::cell::{dirichlet_cell, VoronoiCell};
use super::group::{build_orbit, GroupData};
use super::poincare::{check_poincare_2d, dirichlet_pairings, PoincareReport};
use super::VoronoiError;
use crate::hyperboloid::{Hyperplane, RealForm, Vector};

/// A group, its seed points and the geodesics that are marked.
#[derive(Debug, Clone)]
pub struct Scene {
    pub name: String,
    pub group: GroupData,
    pub seeds: Vec<Vector>,
    /// Each marked geodesic as (point on it, unit tangent).
    pub axes: Vec<(Vector, Vector)>,
}

impl Scene {
    /// Dirichlet cell at the first seed for each generator's cyclic group on
    /// its own (`C_H`, `C_V`, ...), in generator order.
    pub fn factor_cells(&self, cutoff: usize) -> Result<Vec<VoronoiCell>, VoronoiError> {
        let form = self.group.form();
        self.group
            .generators()
            .iter()
            .map(|g| {
                let sub = GroupData::new(form.clone(), vec![g.clone()], self.group.marked().to_vec(), 0.0, None)?;
                let orbit = build_orbit(&self.seeds, &sub, cutoff)?;
                dirichlet_cell(&self.seeds[0], &orbit)
            })
            .collect()
    }

    /// The factor cells together with the side-pairing check of their
    /// intersection.
    pub fn factor_report(&self, cutoff: usize) -> Result<(Vec<VoronoiCell>, PoincareReport), VoronoiError> {
        let cells = self.factor_cells(cutoff)?;
        let report = check_poincare_2d(&cells, &dirichlet_pairings(&cells))?;
        Ok((cells, report))
    }
}

fn v(x: &[f64]) -> Vector {
    Vector::from_row_slice(x)
}

/// Geodesic through `p` with unit tangent `t`, as a hyperplane of ℍ².
pub fn geodesic(form: &RealForm, p: &Vector, t: &Vector) -> Result<Hyperplane, VoronoiError> {
    // project the coordinate vectors off span{p, t} and keep the longest
    let n = form.dim();
    let normal = (0..n)
        .map(|i| {
            let mut w = Vector::zeros(n);
            w[i] = 1.0;
            w += p * form.bilinear(&w, p);
            w -= t * form.bilinear(&w, t);
            w
        })
        .max_by(|a, b| form.quad(a).total_cmp(&form.quad(b)))
        .expect("dimension ≥ 1");
    Ok(form.hyperplane(&normal)?)
}

fn direction(angle: f64) -> Vector {
    v(&[0.0, angle.cos(), angle.sin()])
}

/// `⟨t⟩` for a translation of length `len` along the x-axis; seed at the origin.
pub fn cyclic(len: f64) -> Result<Scene, VoronoiError> {
    let form = RealForm::lorentzian(2);
    let p = form.basepoint();
    let t = direction(0.0);
    let g = form.translation(&p, &t, len)?;
    let marked = vec![geodesic(&form, &p, &t)?];
    let group = GroupData::new(form, vec![g], marked, len, None)?;
    Ok(Scene { name: format!("cyclic({len})"), group, seeds: vec![p.clone()], axes: vec![(p, t)] })
}

/// Translations through the origin: `t_H` along the x-axis by `len_h`, `t_V`
/// along the direction at `angle` (radians) by `len_v`.
pub fn crossing_pair(angle: f64, len_h: f64, len_v: f64) -> Result<Scene, VoronoiError> {
    let form = RealForm::lorentzian(2);
    let p = form.basepoint();
    let th = direction(0.0);
    let tv = direction(angle);
    let gh = form.translation(&p, &th, len_h)?;
    let gv = form.translation(&p, &tv, len_v)?;
    let marked = vec![geodesic(&form, &p, &th)?, geodesic(&form, &p, &tv)?];
    let group = GroupData::new(form, vec![gh, gv], marked, len_h.min(len_v), None)?;
    Ok(Scene {
        name: format!("crossing_pair({angle}, {len_h}, {len_v})"),
        group,
        seeds: vec![p.clone()],
        axes: vec![(p.clone(), th), (p, tv)],
    })
}

/// Two translations along ultraparallel axes: both axes are orthogonal to
/// the y-axis, at distance `dist` apart, symmetric about the origin.
pub fn schottky_pair(dist: f64, len1: f64, len2: f64) -> Result<Scene, VoronoiError> {
    let form = RealForm::lorentzian(2);
    let o = form.basepoint();
    let up = direction(std::f64::consts::FRAC_PI_2);
    let mut axes = Vec::new();
    let mut gens = Vec::new();
    let mut marked = Vec::new();
    for (s, len) in [(0.5 * dist, len1), (-0.5 * dist, len2)] {
        let p = form.exp(&o, &up, s);
        let t = form.tangent_at(&p, &direction(0.0))?;
        gens.push(form.translation(&p, &t, len)?);
        marked.push(geodesic(&form, &p, &t)?);
        axes.push((p, t));
    }
    let group = GroupData::new(form, gens, marked, len1.min(len2), None)?;
    Ok(Scene {
        name: format!("schottky_pair({dist}, {len1}, {len2})"),
        group,
        seeds: vec![o],
        axes,
    })
}

/// The V-length above which the bounding lines of the two Dirichlet strips
/// of `crossing_pair(π/2, len_h, ·)` are pairwise disjoint:
/// `tanh(len_v/2) = sech(len_h/2)`.
pub fn orthogonal_threshold(len_h: f64) -> f64 {
    2.0 * (1.0 / (0.5 * len_h).cosh()).atanh()
}

/// Bisects the smallest V-length in `[lo, hi]` for which the factor domain of
/// `crossing_pair(π/2, len_h, ·)` passes the side-pairing check. Requires a
/// failure at `lo` and a pass at `hi`; `None` otherwise.
pub fn bisect_orthogonal_threshold(
    len_h: f64,
    mut lo: f64,
    mut hi: f64,
    tol: f64,
    cutoff: usize,
) -> Result<Option<f64>, VoronoiError> {
    let passes = |len_v: f64| -> Result<bool, VoronoiError> {
        Ok(crossing_pair(std::f64::consts::FRAC_PI_2, len_h, len_v)?.factor_report(cutoff)?.1.passed())
    };
    if passes(lo)? || !passes(hi)? {
        return Ok(None);
    }
    while hi - lo > tol {
        let mid = 0.5 * (lo + hi);
        if passes(mid)? {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    Ok(Some(hi))
}

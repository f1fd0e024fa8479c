use serde::Serialize;

use super::cell::{dirichlet_cell, FacetType};
use super::group::{build_orbit, GroupData};
use super::scenes::{crossing_pair, geodesic};
use super::VoronoiError;
use crate::hyperboloid::BoundarySphere;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ShrinkRow {
    pub r: f64,
    pub facet_type: FacetType,
    pub word: String,
    pub radius: f64,
    pub sphere: BoundarySphere,
}

/// Boundary-sphere radii of the facets of `C_H ∩ C_V` for orthogonal axes,
/// with `t_H` fixed at `len_h`, `t_V` of length `R` for each `R` in `rs`, and
/// the H-axis marked. Rows are ordered by `R`, then H-cell before V-cell,
/// then facet word.
pub fn sphere_shrink_report(len_h: f64, rs: &[f64], cutoff: usize) -> Result<Vec<ShrinkRow>, VoronoiError> {
    if rs.is_empty() || rs.windows(2).any(|w| w[1] <= w[0]) {
        return Err(VoronoiError::RListNotIncreasing);
    }
    let mut rows = Vec::new();
    for &r in rs {
        let scene = crossing_pair(std::f64::consts::FRAC_PI_2, len_h, r)?;
        let form = scene.group.form().clone();
        let (p, th) = &scene.axes[0];
        let marked = vec![geodesic(&form, p, th)?];
        for k in 0..2 {
            let sub = GroupData::new(form.clone(), vec![scene.group.generators()[k].clone()], marked.clone(), 0.0, None)?;
            let orbit = build_orbit(&scene.seeds, &sub, cutoff)?;
            let cell = dirichlet_cell(&scene.seeds[0], &orbit)?.classify_facets(&sub.marked_lifts(cutoff));
            let mut faces: Vec<_> = cell.faces.iter().collect();
            faces.sort_by(|a, b| a.word.cmp(&b.word));
            for f in faces {
                rows.push(ShrinkRow {
                    r,
                    facet_type: f.kind.expect("classified"),
                    word: format!("{}{}", ["H:", "V:"][k], f.word),
                    radius: form.boundary_sphere(&f.halfspace.plane).radius(),
                    sphere: form.boundary_sphere(&f.halfspace.plane),
                });
            }
        }
    }
    Ok(rows)
}

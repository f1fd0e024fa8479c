use super::cell::{CellFace, VoronoiCell};
use super::VoronoiError;
use crate::hyperboloid::{HalfSpace, Vector, EPS};

/// Extends a cell of ℍⁿ ⊂ (ℝⁿ⁺¹, f) to ℍⁿ⁺¹ ⊂ (ℝⁿ⁺², f ⊕ ⟨q⟩): every
/// normal `v` becomes `(v, 0)` and the centre `x` becomes `(x, 0)`. The
/// result is the preimage of the cell under orthogonal projection to the
/// horizontal hyperplane; facet types are inherited.
pub fn orthogonal_extension(cell: &VoronoiCell, q: f64) -> Result<VoronoiCell, VoronoiError> {
    if !(q > 0.0) {
        return Err(VoronoiError::InvalidExtension(q));
    }
    let form = cell.form.with_appended(q)?;
    let grow = |v: &Vector| v.clone().insert_row(v.len(), 0.0);
    let center = grow(&cell.center);
    let faces = cell
        .faces
        .iter()
        .map(|f| -> Result<CellFace, VoronoiError> {
            let plane = form.hyperplane(&grow(f.halfspace.plane.normal()))?;
            let hs = HalfSpace { plane, side: 1 };
            let hs = if hs.value(&form, &center) > 0.0 { hs } else { hs.complement() };
            let n = form.dim();
            let mut matrix = crate::hyperboloid::Matrix::identity(n, n);
            matrix.view_mut((0, 0), (n - 1, n - 1)).copy_from(&f.matrix);
            Ok(CellFace { halfspace: hs, neighbor: grow(&f.neighbor), word: f.word.clone(), matrix, kind: f.kind })
        })
        .collect::<Result<Vec<_>, _>>()?;
    let ext = VoronoiCell::from_halfspaces(form, center, faces.clone(), cell.region_radius)?;
    // pruning in the extended chart must not drop inherited faces
    if ext.faces.len() != faces.len() {
        return Ok(ext.with_faces(faces));
    }
    Ok(ext)
}

/// For an ideal point `ξ = (ξ_t, w, w_last)` off the boundary of the
/// horizontal hyperplane, the point of the horizontal ℍⁿ it projects to
/// along the vertical geodesic, and the hemisphere (`+1` / `−1`) it lies in.
pub fn ideal_projection(xi: &Vector) -> Option<(Vector, i8)> {
    let last = xi[xi.len() - 1];
    if last.abs() <= EPS * xi.amax() {
        return None;
    }
    let base = xi.rows(0, xi.len() - 1).into_owned() / last.abs();
    Some((base, if last > 0.0 { 1 } else { -1 }))
}

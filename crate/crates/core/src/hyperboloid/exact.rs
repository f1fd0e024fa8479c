use std::fmt;

use nalgebra::DMatrix;

use super::GeomError;
use crate::numfield::{Embedding, FieldElement, FieldTag};
use crate::qforms::DiagonalForm;

/// Square matrix over the ground field.
#[derive(Clone, PartialEq, Eq)]
pub struct ExactMatrix {
    field: FieldTag,
    rows: Vec<Vec<FieldElement>>,
}

impl ExactMatrix {
    pub fn from_rows(field: FieldTag, rows: Vec<Vec<FieldElement>>) -> Result<Self, GeomError> {
        let n = rows.len();
        if let Some(r) = rows.iter().find(|r| r.len() != n) {
            return Err(GeomError::DimensionMismatch { expected: n, got: r.len() });
        }
        Ok(ExactMatrix { field, rows })
    }

    pub fn from_ints(field: FieldTag, rows: &[&[i64]]) -> Result<Self, GeomError> {
        Self::from_rows(field, rows.iter().map(|r| r.iter().map(|&x| FieldElement::from_int(x, field)).collect()).collect())
    }

    pub fn identity(n: usize, field: FieldTag) -> Self {
        let rows = (0..n)
            .map(|i| (0..n).map(|j| FieldElement::from_int((i == j) as i64, field)).collect())
            .collect();
        ExactMatrix { field, rows }
    }

    pub fn diagonal(entries: &[FieldElement], field: FieldTag) -> Self {
        let mut m = Self::identity(entries.len(), field);
        for (i, e) in entries.iter().enumerate() {
            m.rows[i][i] = e.clone();
        }
        m
    }

    pub fn size(&self) -> usize {
        self.rows.len()
    }

    pub fn entry(&self, i: usize, j: usize) -> &FieldElement {
        &self.rows[i][j]
    }

    pub fn transpose(&self) -> Self {
        let n = self.size();
        let rows = (0..n).map(|i| (0..n).map(|j| self.rows[j][i].clone()).collect()).collect();
        ExactMatrix { field: self.field, rows }
    }

    pub fn mul(&self, other: &Self) -> Result<Self, GeomError> {
        let n = self.size();
        if other.size() != n {
            return Err(GeomError::DimensionMismatch { expected: n, got: other.size() });
        }
        let mut rows = vec![vec![FieldElement::zero(self.field); n]; n];
        for (i, row) in rows.iter_mut().enumerate() {
            for (j, out) in row.iter_mut().enumerate() {
                let mut acc = FieldElement::zero(self.field);
                for k in 0..n {
                    acc = &acc + &(&self.rows[i][k] * &other.rows[k][j]);
                }
                *out = acc;
            }
        }
        Ok(ExactMatrix { field: self.field, rows })
    }

    pub fn apply(&self, v: &[FieldElement]) -> Result<Vec<FieldElement>, GeomError> {
        if v.len() != self.size() {
            return Err(GeomError::DimensionMismatch { expected: self.size(), got: v.len() });
        }
        Ok(self
            .rows
            .iter()
            .map(|r| r.iter().zip(v).fold(FieldElement::zero(self.field), |acc, (a, b)| &acc + &(a * b)))
            .collect())
    }

    pub fn is_identity(&self) -> bool {
        *self == Self::identity(self.size(), self.field)
    }

    /// Entries evaluated at the identity embedding.
    pub fn to_f64(&self) -> DMatrix<f64> {
        let n = self.size();
        DMatrix::from_fn(n, n, |i, j| self.rows[i][j].to_f64_at(Embedding::Identity))
    }
}

impl fmt::Debug for ExactMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("[")?;
        for (i, r) in self.rows.iter().enumerate() {
            if i > 0 {
                f.write_str("; ")?;
            }
            let cells: Vec<String> = r.iter().map(|x| x.to_string()).collect();
            f.write_str(&cells.join(", "))?;
        }
        f.write_str("]")
    }
}

/// The reflection `w ↦ w − 2 b(w,v)/f(v) · v` as an exact matrix.
pub fn exact_reflection(form: &DiagonalForm, v: &[FieldElement]) -> Result<ExactMatrix, GeomError> {
    let n = form.dimension();
    let fv = form.evaluate(v)?;
    if fv.sign() <= 0 {
        return Err(GeomError::NotSpaceLike(fv.to_string()));
    }
    let field = form.field();
    let two = FieldElement::from_int(2, field);
    let scale = &two / &fv;
    let c = form.coefficients();
    let rows = (0..n)
        .map(|i| {
            (0..n)
                .map(|j| {
                    let delta = FieldElement::from_int((i == j) as i64, field);
                    &delta - &(&(&scale * &v[i]) * &(&c[j] * &v[j]))
                })
                .collect()
        })
        .collect();
    Ok(ExactMatrix { field, rows })
}

/// `AᵀFA = F` exactly.
pub fn exact_is_isometry(form: &DiagonalForm, a: &ExactMatrix) -> bool {
    if a.size() != form.dimension() {
        return false;
    }
    let f = ExactMatrix::diagonal(form.coefficients(), form.field());
    match a.transpose().mul(&f).and_then(|m| m.mul(a)) {
        Ok(m) => m == f,
        Err(_) => false,
    }
}

/// `H_u ⟂ H_v`: both normals space-like and `b(u,v) = 0`. For space-like
/// normals this already forces the span to be positive definite, so the
/// hyperplanes are distinct and meet.
pub fn exact_are_orthogonal(form: &DiagonalForm, u: &[FieldElement], v: &[FieldElement]) -> Result<bool, GeomError> {
    let fu = form.evaluate(u)?;
    let fv = form.evaluate(v)?;
    if fu.sign() <= 0 {
        return Err(GeomError::NotSpaceLike(fu.to_string()));
    }
    if fv.sign() <= 0 {
        return Err(GeomError::NotSpaceLike(fv.to_string()));
    }
    Ok(form.bilinear(u, v)?.is_zero())
}

/// Hyperplane with an exact, unscaled normal whose first nonzero coordinate
/// is positive at the identity embedding.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ExactHyperplane {
    normal: Vec<FieldElement>,
}

impl ExactHyperplane {
    pub fn new(form: &DiagonalForm, normal: Vec<FieldElement>) -> Result<Self, GeomError> {
        let fv = form.evaluate(&normal)?;
        if fv.sign() <= 0 {
            return Err(GeomError::NotSpaceLike(fv.to_string()));
        }
        let flip = normal.iter().find(|x| !x.is_zero()).map(|x| x.sign() < 0).unwrap_or(false);
        let normal = if flip { normal.iter().map(|x| -x).collect() } else { normal };
        Ok(ExactHyperplane { normal })
    }

    pub fn normal(&self) -> &[FieldElement] {
        &self.normal
    }

    /// Same hyperplane: the normals are proportional.
    pub fn same_as(&self, other: &ExactHyperplane) -> bool {
        if self.normal.len() != other.normal.len() {
            return false;
        }
        let Some(k) = self.normal.iter().position(|x| !x.is_zero()) else {
            return false;
        };
        if other.normal[k].is_zero() {
            return false;
        }
        let ratio = &other.normal[k] / &self.normal[k];
        self.normal.iter().zip(&other.normal).all(|(a, b)| &(a * &ratio) == b)
    }

    pub fn contains(&self, form: &DiagonalForm, w: &[FieldElement]) -> Result<bool, GeomError> {
        Ok(form.bilinear(w, &self.normal)?.is_zero())
    }
}

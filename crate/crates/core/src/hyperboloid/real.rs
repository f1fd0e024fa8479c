use nalgebra::{DMatrix, DVector};
use serde::Serialize;

use super::GeomError;
use crate::numfield::Embedding;
use crate::qforms::DiagonalForm;

pub type Vector = DVector<f64>;
pub type Matrix = DMatrix<f64>;

/// Floating tolerance used throughout the metric layer.
pub const EPS: f64 = 1e-9;

/// A diagonal form of signature (n,1) with real coefficients.
#[derive(Debug, Clone, PartialEq)]
pub struct RealForm {
    coeffs: Vec<f64>,
    time: usize,
}

/// Outcome of comparing two halfspaces that both contain a basepoint.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Nesting {
    /// The boundaries are disjoint and one halfspace contains the other.
    /// `first_inside` tells whether the first argument is the smaller one.
    Nested { first_inside: bool },
    Crossing,
    DisjointNotNested,
    Equal,
}

impl Nesting {
    pub fn is_nested(self) -> bool {
        matches!(self, Nesting::Nested { .. })
    }
}

/// `H_v` with a space-like normal scaled to `f(v) = 1`, first coordinate
/// above tolerance made positive.
#[derive(Debug, Clone, PartialEq)]
pub struct Hyperplane {
    normal: Vector,
}

/// `{x : side · b(x, normal) ≥ 0}`.
#[derive(Debug, Clone, PartialEq)]
pub struct HalfSpace {
    pub plane: Hyperplane,
    pub side: i8,
}

/// `∂∞H` in the ball model: a Euclidean sphere orthogonal to the unit
/// sphere, or a diametral plane when H passes through the ball center.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub enum BoundarySphere {
    Sphere { center: Vec<f64>, radius: f64 },
    Plane { normal: Vec<f64> },
}

impl BoundarySphere {
    /// Euclidean radius; infinite for a plane.
    pub fn radius(&self) -> f64 {
        match self {
            BoundarySphere::Sphere { radius, .. } => *radius,
            BoundarySphere::Plane { .. } => f64::INFINITY,
        }
    }

    /// Signed distance of a Euclidean point from the sphere (or plane).
    pub fn offset(&self, y: &[f64]) -> f64 {
        match self {
            BoundarySphere::Sphere { center, radius } => {
                let d2: f64 = center.iter().zip(y).map(|(c, x)| (c - x).powi(2)).sum();
                d2.sqrt() - radius
            }
            BoundarySphere::Plane { normal } => normal.iter().zip(y).map(|(n, x)| n * x).sum(),
        }
    }
}

fn scale_of(v: &Vector) -> f64 {
    v.iter().fold(1.0f64, |m, x| m.max(x.abs()))
}

impl RealForm {
    pub fn new(coeffs: Vec<f64>) -> Result<Self, GeomError> {
        let negatives: Vec<usize> = (0..coeffs.len()).filter(|&i| coeffs[i] < 0.0).collect();
        if negatives.len() != 1 || coeffs.iter().any(|&c| c == 0.0) || coeffs.len() < 2 {
            return Err(GeomError::NotLorentzian);
        }
        Ok(RealForm { coeffs, time: negatives[0] })
    }

    /// `J_n = −x₀² + x₁² + … + xₙ²`.
    pub fn lorentzian(n: usize) -> Self {
        let mut coeffs = vec![1.0; n + 1];
        coeffs[0] = -1.0;
        RealForm { coeffs, time: 0 }
    }

    /// The form at the identity embedding.
    pub fn from_form(form: &DiagonalForm) -> Result<Self, GeomError> {
        Self::new(form.coefficients().iter().map(|c| c.to_f64_at(Embedding::Identity)).collect())
    }

    /// `f ⊕ ⟨q⟩`.
    pub fn with_appended(&self, q: f64) -> Result<Self, GeomError> {
        let mut c = self.coeffs.clone();
        c.push(q);
        Self::new(c)
    }

    pub fn coefficients(&self) -> &[f64] {
        &self.coeffs
    }

    /// `n + 1`.
    pub fn dim(&self) -> usize {
        self.coeffs.len()
    }

    /// Index of the negative coefficient.
    pub fn time_index(&self) -> usize {
        self.time
    }

    pub fn gram(&self) -> Matrix {
        Matrix::from_diagonal(&Vector::from_vec(self.coeffs.clone()))
    }

    fn check(&self, v: &Vector) -> Result<(), GeomError> {
        if v.len() != self.dim() {
            return Err(GeomError::DimensionMismatch { expected: self.dim(), got: v.len() });
        }
        Ok(())
    }

    pub fn bilinear(&self, u: &Vector, w: &Vector) -> f64 {
        debug_assert_eq!(u.len(), self.dim());
        self.coeffs.iter().zip(u.iter().zip(w.iter())).map(|(c, (a, b))| c * a * b).sum()
    }

    pub fn quad(&self, v: &Vector) -> f64 {
        self.bilinear(v, v)
    }

    /// The point on the time axis.
    pub fn basepoint(&self) -> Vector {
        let mut x = Vector::zeros(self.dim());
        x[self.time] = 1.0 / (-self.coeffs[self.time]).sqrt();
        x
    }

    pub fn is_on_sheet(&self, x: &Vector) -> bool {
        x.len() == self.dim() && x[self.time] > 0.0 && (self.quad(x) + 1.0).abs() <= EPS * scale_of(x).powi(2)
    }

    fn require_point(&self, x: &Vector) -> Result<(), GeomError> {
        self.check(x)?;
        if !self.is_on_sheet(x) {
            return Err(GeomError::OffSheet(format!("f(x) = {}, x_t = {}", self.quad(x), x[self.time])));
        }
        Ok(())
    }

    /// Rescales a future time-like vector onto the upper sheet.
    pub fn normalize_point(&self, x: &Vector) -> Result<Vector, GeomError> {
        self.check(x)?;
        let q = self.quad(x);
        if q >= 0.0 || x[self.time] <= 0.0 {
            return Err(GeomError::OffSheet(format!("f(x) = {q}")));
        }
        Ok(x / (-q).sqrt())
    }

    /// Scales a space-like vector to `f(v) = 1`.
    pub fn unit_spacelike(&self, v: &Vector) -> Result<Vector, GeomError> {
        self.check(v)?;
        let q = self.quad(v);
        // cancellation in f(v) is a few ulps of the squared entries
        if q <= 64.0 * f64::EPSILON * scale_of(v).powi(2) {
            return Err(GeomError::NotSpaceLike(format!("{q}")));
        }
        Ok(v / q.sqrt())
    }

    /// `d(x,y) = 2 asinh(√f(x−y) / 2)`, stable for nearby points.
    pub fn distance(&self, x: &Vector, y: &Vector) -> Result<f64, GeomError> {
        self.require_point(x)?;
        self.require_point(y)?;
        Ok(self.distance_unchecked(x, y))
    }

    pub(crate) fn distance_unchecked(&self, x: &Vector, y: &Vector) -> f64 {
        // f(x − y) cancels badly for far points; −b(x, y) = cosh d does not
        let c = -self.bilinear(x, y);
        if c > 2.0 {
            return c.acosh();
        }
        let q = self.quad(&(x - y)).max(0.0);
        2.0 * (q.sqrt() / 2.0).asinh()
    }

    /// Point at distance `t` from `p` along the unit tangent `u`.
    pub fn exp(&self, p: &Vector, u: &Vector, t: f64) -> Vector {
        p * t.cosh() + u * t.sinh()
    }

    /// Unit tangent at `p` pointing towards `q`.
    pub fn direction(&self, p: &Vector, q: &Vector) -> Result<Vector, GeomError> {
        let t = q + p * self.bilinear(q, p);
        self.unit_spacelike(&t).map_err(|_| GeomError::CoincidentPoints)
    }

    /// Projects `t` to the tangent space at `p` and normalizes it.
    pub fn tangent_at(&self, p: &Vector, t: &Vector) -> Result<Vector, GeomError> {
        self.check(t)?;
        let t = t + p * self.bilinear(t, p);
        self.unit_spacelike(&t).map_err(|_| GeomError::ZeroTangent)
    }

    pub fn hyperplane(&self, normal: &Vector) -> Result<Hyperplane, GeomError> {
        Ok(canonical(self.unit_spacelike(normal)?))
    }

    /// The hyperplane through `p` orthogonal to the unit tangent `u`.
    pub fn hyperplane_at(&self, p: &Vector, u: &Vector) -> Result<Hyperplane, GeomError> {
        let u = self.tangent_at(p, u)?;
        self.hyperplane(&u)
    }

    /// Halfspace bounded by `H_v` that contains `x` in its interior.
    pub fn halfspace_containing(&self, normal: &Vector, x: &Vector) -> Result<HalfSpace, GeomError> {
        let plane = self.hyperplane(normal)?;
        let s = self.bilinear(x, &plane.normal);
        if s.abs() <= EPS * scale_of(x) {
            return Err(GeomError::BasepointNotInterior);
        }
        Ok(HalfSpace { plane, side: if s > 0.0 { 1 } else { -1 } })
    }

    /// Perpendicular bisector of `x` and `y`; its normal is `x − y`.
    pub fn bisector(&self, x: &Vector, y: &Vector) -> Result<Hyperplane, GeomError> {
        self.require_point(x)?;
        self.require_point(y)?;
        let d = x - y;
        // f(x − y) = −2 − 2 b(x, y) on the sheet, without cancellation when far
        let c = -self.bilinear(x, y);
        let q = if c > 2.0 { 2.0 * c - 2.0 } else { self.quad(&d) };
        if q <= EPS * EPS {
            return Err(GeomError::CoincidentPoints);
        }
        Ok(canonical(d / q.sqrt()))
    }

    /// The closed Voronoi halfspace of `p` against `q`.
    pub fn voronoi_halfspace(&self, p: &Vector, q: &Vector) -> Result<HalfSpace, GeomError> {
        let plane = self.bisector(p, q)?;
        let side = if self.bilinear(p, &plane.normal) > 0.0 { 1 } else { -1 };
        Ok(HalfSpace { plane, side })
    }

    pub fn reflection(&self, v: &Vector) -> Result<Matrix, GeomError> {
        let u = self.unit_spacelike(v)?;
        let n = self.dim();
        Ok(Matrix::identity(n, n) - 2.0 * &u * (self.gram() * &u).transpose())
    }

    /// `‖AᵀFA − F‖∞ ≤ ε · max(1, ‖A‖∞²)`. The tolerance is relative because
    /// entries of long translations grow like `e^ℓ`.
    pub fn is_isometry(&self, a: &Matrix) -> bool {
        if a.nrows() != self.dim() || a.ncols() != self.dim() {
            return false;
        }
        let f = self.gram();
        let err = (a.transpose() * &f * a - &f).amax();
        err <= EPS * a.amax().max(1.0).powi(2)
    }

    /// Preserves the upper sheet.
    pub fn is_orthochronous(&self, a: &Matrix) -> bool {
        let x = self.basepoint();
        (a * &x)[self.time] > 0.0
    }

    /// Translation by `length` along the geodesic through `p` with tangent `t`.
    pub fn translation(&self, p: &Vector, t: &Vector, length: f64) -> Result<Matrix, GeomError> {
        self.require_point(p)?;
        if length.partial_cmp(&0.0) != Some(std::cmp::Ordering::Greater) {
            return Err(GeomError::NonPositiveLength(length));
        }
        let t = self.tangent_at(p, t)?;
        let f = self.gram();
        let tf = (&f * &t).transpose();
        let pf = (&f * p).transpose();
        let n = self.dim();
        Ok(Matrix::identity(n, n)
            + (length.cosh() - 1.0) * (&t * &tf - p * &pf)
            + length.sinh() * (p * &tf - &t * &pf))
    }

    /// `ln` of the largest eigenvalue modulus; 0 for elliptic and parabolic elements.
    pub fn translation_length(&self, a: &Matrix) -> f64 {
        let max = a.complex_eigenvalues().iter().map(|z| z.norm()).fold(0.0f64, f64::max);
        if max <= 1.0 {
            0.0
        } else {
            max.ln()
        }
    }

    /// Coordinates in which the form is `J_n` with time first.
    pub fn to_standard(&self, x: &Vector) -> Vector {
        let mut y = Vec::with_capacity(self.dim());
        y.push(x[self.time] * (-self.coeffs[self.time]).sqrt());
        for i in 0..self.dim() {
            if i != self.time {
                y.push(x[i] * self.coeffs[i].sqrt());
            }
        }
        Vector::from_vec(y)
    }

    pub fn from_standard(&self, y: &Vector) -> Vector {
        let mut x = Vector::zeros(self.dim());
        x[self.time] = y[0] / (-self.coeffs[self.time]).sqrt();
        let mut k = 1;
        for i in 0..self.dim() {
            if i != self.time {
                x[i] = y[k] / self.coeffs[i].sqrt();
                k += 1;
            }
        }
        x
    }

    /// Poincaré ball coordinates of a sheet point or a light-cone vector.
    pub fn ball_coordinates(&self, x: &Vector) -> Result<Vec<f64>, GeomError> {
        self.check(x)?;
        let y = self.to_standard(x);
        let s = scale_of(&y);
        let q = self.quad(x);
        if y[0] <= EPS * s || q > EPS * s * s {
            return Err(GeomError::NotBallPoint);
        }
        if q.abs() <= EPS * s * s {
            return Ok(y.rows(1, self.dim() - 1).iter().map(|v| v / y[0]).collect());
        }
        Ok(self.ball_of_point(&self.normalize_point(x)?))
    }

    fn ball_of_point(&self, x: &Vector) -> Vec<f64> {
        let y = self.to_standard(x);
        y.rows(1, self.dim() - 1).iter().map(|v| v / (1.0 + y[0])).collect()
    }

    /// Inverse of `ball_coordinates` on the open ball.
    pub fn from_ball(&self, b: &[f64]) -> Vector {
        let r2: f64 = b.iter().map(|v| v * v).sum();
        let mut y = Vec::with_capacity(self.dim());
        y.push((1.0 + r2) / (1.0 - r2));
        y.extend(b.iter().map(|v| 2.0 * v / (1.0 - r2)));
        self.from_standard(&Vector::from_vec(y))
    }

    /// Klein (projective) coordinates `y_s / y_0`.
    pub fn klein_coordinates(&self, x: &Vector) -> Vec<f64> {
        let y = self.to_standard(x);
        y.rows(1, self.dim() - 1).iter().map(|v| v / y[0]).collect()
    }

    pub fn boundary_sphere(&self, h: &Hyperplane) -> BoundarySphere {
        let u = self.to_standard(&h.normal);
        let us: Vec<f64> = u.rows(1, self.dim() - 1).iter().copied().collect();
        if u[0].abs() <= EPS {
            let norm = us.iter().map(|v| v * v).sum::<f64>().sqrt();
            return BoundarySphere::Plane { normal: us.iter().map(|v| v / norm).collect() };
        }
        BoundarySphere::Sphere { center: us.iter().map(|v| v / u[0]).collect(), radius: 1.0 / u[0].abs() }
    }

    /// `b(û, v̂)` for unit normals.
    pub fn normal_cosine(&self, a: &Hyperplane, b: &Hyperplane) -> f64 {
        self.bilinear(&a.normal, &b.normal)
    }

    /// Whether the hyperplanes meet in ℍⁿ (the span of the normals is positive definite).
    pub fn intersect(&self, a: &Hyperplane, b: &Hyperplane) -> bool {
        self.normal_cosine(a, b).abs() < 1.0 - EPS
    }

    pub fn are_orthogonal(&self, a: &Hyperplane, b: &Hyperplane) -> bool {
        self.normal_cosine(a, b).abs() <= EPS
    }

    /// Hyperbolic distance between disjoint hyperplanes; 0 when they meet.
    pub fn hyperplane_distance(&self, a: &Hyperplane, b: &Hyperplane) -> f64 {
        self.normal_cosine(a, b).abs().max(1.0).acosh()
    }

    /// Compares two halfspaces containing `x`. With inward unit normals `u`,
    /// `u′` and `β = b(u,u′)`: `|β| < 1` means the boundaries cross, `β ≥ 1`
    /// means nested (the inner halfspace has its boundary closer to `x`),
    /// `β ≤ −1` means disjoint boundaries facing each other.
    pub fn nesting(&self, a: &HalfSpace, b: &HalfSpace, x: &Vector) -> Result<Nesting, GeomError> {
        self.require_point(x)?;
        let ua = a.inward_normal();
        let ub = b.inward_normal();
        let da = self.bilinear(x, &ua);
        let db = self.bilinear(x, &ub);
        let s = scale_of(x);
        if da <= EPS * s || db <= EPS * s {
            return Err(GeomError::BasepointNotInterior);
        }
        let beta = self.bilinear(&ua, &ub);
        if beta.abs() < 1.0 - EPS {
            return Ok(Nesting::Crossing);
        }
        if beta <= -1.0 + EPS {
            return Ok(Nesting::DisjointNotNested);
        }
        if (da - db).abs() <= EPS * s && (beta - 1.0).abs() <= EPS {
            return Ok(Nesting::Equal);
        }
        Ok(Nesting::Nested { first_inside: da < db })
    }

    /// Applies an isometry to a hyperplane: normals transform like points.
    /// Far-away images can have entries so large that `f` cancels to zero in
    /// floating point; the image is then kept unnormalised, since `f` is
    /// preserved exactly by `a`.
    pub fn map_hyperplane(&self, a: &Matrix, h: &Hyperplane) -> Hyperplane {
        let image = a * &h.normal;
        self.hyperplane(&image).unwrap_or_else(|_| canonical(image))
    }

    pub fn map_halfspace(&self, a: &Matrix, hs: &HalfSpace) -> HalfSpace {
        let image = a * hs.inward_normal();
        let plane = self.map_hyperplane(a, &hs.plane);
        let side = if plane.normal.dot(&image) > 0.0 { 1 } else { -1 };
        HalfSpace { plane, side }
    }
}

fn canonical(mut n: Vector) -> Hyperplane {
    if let Some(first) = n.iter().copied().find(|x| x.abs() > EPS) {
        if first < 0.0 {
            n = -n;
        }
    }
    Hyperplane { normal: n }
}

impl Hyperplane {
    pub fn normal(&self) -> &Vector {
        &self.normal
    }

    /// Equality up to tolerance of canonical normals.
    pub fn approx_eq(&self, other: &Hyperplane) -> bool {
        self.normal.len() == other.normal.len()
            && (&self.normal - &other.normal).amax() <= 1e-7 * scale_of(&self.normal)
    }
}

impl HalfSpace {
    pub fn inward_normal(&self) -> Vector {
        &self.plane.normal * self.side as f64
    }

    /// `b(x, inward normal)`; nonnegative on the halfspace.
    pub fn value(&self, form: &RealForm, x: &Vector) -> f64 {
        form.bilinear(x, &self.plane.normal) * self.side as f64
    }

    pub fn contains(&self, form: &RealForm, x: &Vector) -> bool {
        self.value(form, x) >= -EPS * scale_of(x)
    }

    pub fn complement(&self) -> HalfSpace {
        HalfSpace { plane: self.plane.clone(), side: -self.side }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn v(xs: &[f64]) -> Vector {
        Vector::from_row_slice(xs)
    }

    fn close(a: f64, b: f64) -> bool {
        (a - b).abs() <= 1e-9
    }

    #[test]
    fn bilinear_examples() {
        let j = RealForm::lorentzian(2);
        assert_eq!(j.bilinear(&v(&[1., 0., 0.]), &v(&[1., 0., 0.])), -1.0);
        assert_eq!(j.bilinear(&v(&[1., 0., 0.]), &v(&[0., 1., 0.])), 0.0);
    }

    #[test]
    fn distance_along_geodesic() {
        let j = RealForm::lorentzian(2);
        let x = v(&[1., 0., 0.]);
        let y = v(&[1f64.cosh(), 1f64.sinh(), 0.]);
        assert!(close(j.distance(&x, &y).unwrap(), 1.0));
        assert_eq!(j.distance(&x, &x).unwrap(), 0.0);
        assert!(j.distance(&x, &v(&[1., 1., 0.])).is_err());
    }

    #[test]
    fn bisector_of_symmetric_points() {
        let j = RealForm::lorentzian(2);
        let x = v(&[1f64.cosh(), 1f64.sinh(), 0.]);
        let y = v(&[1f64.cosh(), -(1f64.sinh()), 0.]);
        let h = j.bisector(&x, &y).unwrap();
        assert!(h.approx_eq(&j.hyperplane(&v(&[0., 1., 0.])).unwrap()));
        assert!(h.approx_eq(&j.bisector(&y, &x).unwrap()));
        assert!(j.bisector(&x, &x).is_err());
    }

    #[test]
    fn translations() {
        let j = RealForm::lorentzian(2);
        let p = j.basepoint();
        let t = v(&[0., 1., 0.]);
        let a = j.translation(&p, &t, 1.0).unwrap();
        assert!((a.clone() * &p - v(&[1f64.cosh(), 1f64.sinh(), 0.])).amax() < 1e-12);
        assert!(j.is_isometry(&a));
        assert!(close(j.translation_length(&a), 1.0));
        let b = j.translation(&p, &t, 0.5).unwrap();
        let ab = j.translation(&p, &t, 1.5).unwrap();
        assert!((a.clone() * b - ab).amax() < 1e-12);
        let r = j.reflection(&t).unwrap();
        let conj = &r * &a * &r;
        assert!((conj * a - Matrix::identity(3, 3)).amax() < 1e-12);
        assert!(j.translation(&p, &p, 1.0).is_err());
        assert!(j.translation(&p, &t, 0.0).is_err());
    }

    #[test]
    fn ball_coordinates() {
        let j = RealForm::lorentzian(2);
        assert_eq!(j.ball_coordinates(&j.basepoint()).unwrap(), vec![0.0, 0.0]);
        assert_eq!(j.ball_coordinates(&v(&[1., 1., 0.])).unwrap(), vec![1.0, 0.0]);
        assert!(j.ball_coordinates(&v(&[0., 1., 0.])).is_err());
        assert!(j.ball_coordinates(&v(&[-1., 0., 0.])).is_err());
        let x = v(&[2f64.cosh(), 0., 2f64.sinh()]);
        let b = j.ball_coordinates(&x).unwrap();
        assert!((j.from_ball(&b) - x).amax() < 1e-12);
    }

    #[test]
    fn boundary_spheres() {
        let j = RealForm::lorentzian(2);
        let h = j.hyperplane(&v(&[0., 1., 0.])).unwrap();
        assert!(matches!(j.boundary_sphere(&h), BoundarySphere::Plane { .. }));
        let mut last = f64::INFINITY;
        let p = j.basepoint();
        for a in [0.5, 1.0, 1.5, 2.0, 3.0] {
            let q = j.exp(&p, &v(&[0., 1., 0.]), a);
            let h = j.hyperplane_at(&q, &v(&[0., 1., 0.])).unwrap();
            let s = j.boundary_sphere(&h);
            assert!(close(s.radius(), 1.0 / f64::sinh(a)));
            assert!(s.radius() < last);
            last = s.radius();
            let scaled = j.boundary_sphere(&j.hyperplane(&(h.normal() * 3.5)).unwrap());
            assert!(close(s.radius(), scaled.radius()));
            assert!(close(s.offset(&[0.0, 0.0]), scaled.offset(&[0.0, 0.0])));
        }
    }

    #[test]
    fn nesting_in_one_dimension_of_freedom() {
        let j = RealForm::lorentzian(2);
        let x = j.basepoint();
        let e1 = v(&[0., 1., 0.]);
        let plane_at = |s: f64| j.hyperplane_at(&j.exp(&x, &e1, s), &e1).unwrap();
        let hs = |s: f64| j.halfspace_containing(plane_at(s).normal(), &x).unwrap();
        assert_eq!(j.nesting(&hs(1.0), &hs(2.0), &x).unwrap(), Nesting::Nested { first_inside: true });
        assert_eq!(j.nesting(&hs(2.0), &hs(1.0), &x).unwrap(), Nesting::Nested { first_inside: false });
        assert_eq!(j.nesting(&hs(1.0), &hs(-1.0), &x).unwrap(), Nesting::DisjointNotNested);
        assert_eq!(j.nesting(&hs(1.0), &hs(1.0), &x).unwrap(), Nesting::Equal);
        let cross = j.halfspace_containing(&v(&[0.2, 0., 1.]), &x).unwrap();
        assert_eq!(j.nesting(&hs(1.0), &cross, &x).unwrap(), Nesting::Crossing);
        assert!(j.nesting(&hs(1.0), &hs(1.0).complement(), &x).is_err());
    }

    #[test]
    fn non_standard_form() {
        let f = RealForm::new(vec![2.0, -std::f64::consts::SQRT_2, 3.0]).unwrap();
        let p = f.basepoint();
        assert!(f.is_on_sheet(&p));
        let t = f.translation(&p, &v(&[1., 0., 0.]), 1.3).unwrap();
        assert!(f.is_isometry(&t));
        assert!(close(f.distance(&p, &(t * &p)).unwrap(), 1.3));
        assert_eq!(f.ball_coordinates(&p).unwrap(), vec![0.0, 0.0]);
        assert!(RealForm::new(vec![1.0, 1.0]).is_err());
    }
}

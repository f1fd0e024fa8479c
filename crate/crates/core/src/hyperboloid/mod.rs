//! Hyperboloid model of ℍⁿ inside a diagonal quadratic space of signature (n,1).
//!
//! `exact` works over the ground field and covers everything that is
//! k-rational: reflections, isometry checks, orthogonality. `real` is the
//! binary64 layer used for distances, bisectors, translations, the ball model
//! and nesting tests.

mod exact;
mod real;

use thiserror::Error;

use crate::qforms::FormError;

pub use exact::{exact_are_orthogonal, exact_is_isometry, exact_reflection, ExactHyperplane, ExactMatrix};
pub use real::{
    BoundarySphere, HalfSpace, Hyperplane, Nesting, RealForm, Vector, Matrix, EPS,
};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum GeomError {
    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },
    #[error("vector is not space-like (f(v) = {0})")]
    NotSpaceLike(String),
    #[error("point is not on the upper sheet: {0}")]
    OffSheet(String),
    #[error("form does not have signature (n,1) at the identity embedding")]
    NotLorentzian,
    #[error("points coincide")]
    CoincidentPoints,
    #[error("zero tangent vector")]
    ZeroTangent,
    #[error("translation length must be positive, got {0}")]
    NonPositiveLength(f64),
    #[error("basepoint is not interior to both halfspaces")]
    BasepointNotInterior,
    #[error("vector is neither a point nor an ideal point")]
    NotBallPoint,
    #[error(transparent)]
    Form(#[from] FormError),
}

//! Relative Voronoi decompositions: truncated orbits, Dirichlet cells as
//! pruned halfspace lists, facet types, admissible point sets, orthogonal
//! extension, boundary-sphere shrinking and a planar side-pairing check.

mod admissible;
mod cell;
mod extension;
mod group;
pub mod klein;
mod poincare;
pub mod scenes;
mod shrink;

use thiserror::Error;

use crate::hyperboloid::GeomError;

pub use admissible::{
    build_admissible_set, is_admissible, surface_gaps, AdmissibleSet, AdmissibleVerdict, MarkedSurface,
};
pub use cell::{dirichlet_cell, CellFace, FacetSegment, FacetType, SegmentEnd, VoronoiCell, MAX_REGION_RADIUS};
pub use extension::{ideal_projection, orthogonal_extension};
pub use group::{build_orbit, GroupData, OrbitPoint, OrbitSet, Word};
pub use poincare::{
    check_poincare_2d, dirichlet_pairings, FacetRef, PoincareFailure, PoincareReport, SidePairing, VertexCycle,
};
pub use scenes::Scene;
pub use shrink::{sphere_shrink_report, ShrinkRow};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum VoronoiError {
    #[error("generator {0} is not an isometry of the upper sheet")]
    NotAnIsometry(usize),
    #[error("generator {generator} translates by {length}, below the floor {floor}")]
    BelowFloor { generator: usize, length: f64, floor: f64 },
    #[error("word cutoff must be at least 1")]
    ZeroCutoff,
    #[error("centre is not an orbit point")]
    CenterNotInOrbit,
    #[error("centre is not interior to every halfspace")]
    CenterNotInterior,
    #[error("certification radius too small to decide; increase the cutoff")]
    Undecidable,
    #[error("surface {0} is at zero distance from another surface")]
    ZeroGap(usize),
    #[error("extension coefficient must be positive, got {0}")]
    InvalidExtension(f64),
    #[error("R list must be nonempty and strictly increasing")]
    RListNotIncreasing,
    #[error("empty domain")]
    EmptyDomain,
    #[error("expected a planar domain, got dimension {0}")]
    NotPlanar(usize),
    #[error("domain cells do not share a centre")]
    DifferentCenters,
    #[error(transparent)]
    Geometry(#[from] GeomError),
}

//! Counting pipeline: rooted 4-regular edge-labelled graphs, the piece
//! complexes they prescribe, orientability, orientation double covers and
//! growth-rate fits.

mod assembly;
mod enumerate;
mod graph;
mod growth;

use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

pub use assembly::{assemble, assemble_with_flags, AssembledManifold, Pairing, PieceInstance, Provenance, Slot};
pub use enumerate::{
    base_graphs, count_graphs, count_proper_labelings, enumerate_graphs, proper_labelings, CountRow, GraphStream, MAX_EXHAUSTIVE_M,
};
pub use graph::{BaseGraph, GlueingGraph, GraphDescriptor, LabelMode};
pub use growth::{growth_fit, GrowthFit};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum GlueingError {
    #[error("invalid glueing graph: {0}")]
    InvalidGraph(String),
    #[error("m = {m} exceeds the exhaustive enumeration bound {bound}")]
    TooLarge { m: usize, bound: usize },
    #[error("complex is not closed: {0}")]
    NotClosed(String),
    #[error("growth fit needs at least 3 rows, got {0}")]
    TooFewRows(usize),
    #[error("growth fit needs positive counts (m = {0} has count 0)")]
    ZeroCount(usize),
    #[error("internal assembly error: {0}")]
    Internal(String),
}

/// The six piece symbols.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum PieceLabel {
    #[serde(rename = "a+")]
    APlus,
    #[serde(rename = "a-")]
    AMinus,
    #[serde(rename = "b+")]
    BPlus,
    #[serde(rename = "b-")]
    BMinus,
    #[serde(rename = "u")]
    U,
    #[serde(rename = "v")]
    V,
}

impl PieceLabel {
    pub const ALL: [PieceLabel; 6] =
        [PieceLabel::APlus, PieceLabel::AMinus, PieceLabel::BPlus, PieceLabel::BMinus, PieceLabel::U, PieceLabel::V];
    pub const EDGE: [PieceLabel; 4] = [PieceLabel::APlus, PieceLabel::AMinus, PieceLabel::BPlus, PieceLabel::BMinus];

    pub fn is_edge_label(self) -> bool {
        !matches!(self, PieceLabel::U | PieceLabel::V)
    }

    pub fn as_str(self) -> &'static str {
        match self {
            PieceLabel::APlus => "a+",
            PieceLabel::AMinus => "a-",
            PieceLabel::BPlus => "b+",
            PieceLabel::BMinus => "b-",
            PieceLabel::U => "u",
            PieceLabel::V => "v",
        }
    }

    fn edge_index(self) -> usize {
        match self {
            PieceLabel::APlus => 0,
            PieceLabel::AMinus => 1,
            PieceLabel::BPlus => 2,
            PieceLabel::BMinus => 3,
            _ => panic!("{self} is not an edge label"),
        }
    }
}

impl fmt::Display for PieceLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

/// A piece type: number of boundary copies of the common hypersurface, whether
/// it is orientable, and the volume assigned to it.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PieceTemplate {
    pub label: PieceLabel,
    pub boundary_count: usize,
    pub orientable: bool,
    pub volume_weight: f64,
}

impl PieceTemplate {
    pub fn standard(label: PieceLabel, volume_weight: f64) -> Self {
        let boundary_count = if label.is_edge_label() { 2 } else { 4 };
        PieceTemplate { label, boundary_count, orientable: label != PieceLabel::V, volume_weight }
    }
}

/// The six templates used by `assemble`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PieceSet {
    templates: [PieceTemplate; 6],
}

impl PieceSet {
    pub fn uniform(weight: f64) -> Self {
        Self::with_weights(|_| weight)
    }

    pub fn with_weights(weight: impl Fn(PieceLabel) -> f64) -> Self {
        let templates = PieceLabel::ALL.map(|l| PieceTemplate::standard(l, weight(l)));
        PieceSet { templates }
    }

    pub fn template(&self, label: PieceLabel) -> &PieceTemplate {
        &self.templates[PieceLabel::ALL.iter().position(|&l| l == label).unwrap()]
    }

    pub fn set_orientable(&mut self, label: PieceLabel, orientable: bool) {
        let i = PieceLabel::ALL.iter().position(|&l| l == label).unwrap();
        self.templates[i].orientable = orientable;
    }

    pub fn max_weight(&self) -> f64 {
        self.templates.iter().map(|t| t.volume_weight).fold(f64::MIN, f64::max)
    }

    pub fn scaled(&self, factor: f64) -> Self {
        let mut out = self.clone();
        for t in out.templates.iter_mut() {
            t.volume_weight *= factor;
        }
        out
    }
}

impl Default for PieceSet {
    fn default() -> Self {
        Self::uniform(1.0)
    }
}

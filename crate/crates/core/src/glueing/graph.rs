use serde::{Deserialize, Serialize};

use super::{GlueingError, PieceLabel};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum LabelMode {
    /// Each vertex sees each of a+, a−, b+, b− exactly once.
    Proper,
    /// Labels are unconstrained.
    Free,
}

impl LabelMode {
    pub fn as_str(self) -> &'static str {
        match self {
            LabelMode::Proper => "proper",
            LabelMode::Free => "free",
        }
    }
}

/// Index of the unordered pair `i < j` in the lexicographic list of pairs of `0..m`.
pub(crate) fn pair_index(m: usize, i: usize, j: usize) -> usize {
    debug_assert!(i < j && j < m);
    i * (2 * m - i - 1) / 2 + (j - i - 1)
}

/// A simple graph on at most 11 labelled vertices, stored as a bitmask over
/// vertex pairs in lexicographic order.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct BaseGraph {
    pub m: usize,
    pub mask: u64,
}

impl BaseGraph {
    pub fn edges(&self) -> Vec<(usize, usize)> {
        let mut out = Vec::new();
        for i in 0..self.m {
            for j in i + 1..self.m {
                if self.has_edge(i, j) {
                    out.push((i, j));
                }
            }
        }
        out
    }

    pub fn has_edge(&self, i: usize, j: usize) -> bool {
        let (i, j) = if i < j { (i, j) } else { (j, i) };
        i != j && self.mask >> pair_index(self.m, i, j) & 1 == 1
    }

    pub fn degree(&self, v: usize) -> usize {
        (0..self.m).filter(|&w| self.has_edge(v, w)).count()
    }

    pub fn from_edges(m: usize, edges: &[(usize, usize)]) -> Self {
        let mut mask = 0u64;
        for &(i, j) in edges {
            let (i, j) = if i < j { (i, j) } else { (j, i) };
            mask |= 1 << pair_index(m, i, j);
        }
        BaseGraph { m, mask }
    }
}

/// A rooted simple 4-regular graph with edges labelled by a±, b±.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct GlueingGraph {
    m: usize,
    edges: Vec<(usize, usize)>,
    labels: Vec<PieceLabel>,
    root: usize,
    mode: LabelMode,
}

/// JSON shape of a glueing graph.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct GraphDescriptor {
    pub m: usize,
    pub edges: Vec<[usize; 2]>,
    pub labels: Vec<PieceLabel>,
    pub root: usize,
    pub mode: LabelMode,
}

impl GlueingGraph {
    pub fn new(
        m: usize,
        edges: Vec<(usize, usize)>,
        labels: Vec<PieceLabel>,
        root: usize,
        mode: LabelMode,
    ) -> Result<Self, GlueingError> {
        let bad = |s: String| Err(GlueingError::InvalidGraph(s));
        if root >= m {
            return bad(format!("root {root} out of range for m = {m}"));
        }
        if labels.len() != edges.len() {
            return bad(format!("{} labels for {} edges", labels.len(), edges.len()));
        }
        let mut seen = std::collections::HashSet::new();
        let mut degree = vec![0usize; m];
        let mut seen_labels = vec![[false; 4]; m];
        for (&(i, j), &label) in edges.iter().zip(&labels) {
            if i >= m || j >= m {
                return bad(format!("edge ({i},{j}) out of range"));
            }
            if i == j {
                return bad(format!("loop at {i}"));
            }
            if !seen.insert((i.min(j), i.max(j))) {
                return bad(format!("multi-edge ({i},{j})"));
            }
            if !label.is_edge_label() {
                return bad(format!("label {label} is not an edge label"));
            }
            degree[i] += 1;
            degree[j] += 1;
            if mode == LabelMode::Proper {
                for v in [i, j] {
                    let slot = &mut seen_labels[v][label.edge_index()];
                    if *slot {
                        return bad(format!("vertex {v} sees label {label} twice in proper mode"));
                    }
                    *slot = true;
                }
            }
        }
        if let Some(v) = degree.iter().position(|&d| d != 4) {
            return bad(format!("vertex {v} has degree {}", degree[v]));
        }
        Ok(GlueingGraph { m, edges, labels, root, mode })
    }

    pub fn from_descriptor(d: &GraphDescriptor) -> Result<Self, GlueingError> {
        Self::new(d.m, d.edges.iter().map(|e| (e[0], e[1])).collect(), d.labels.clone(), d.root, d.mode)
    }

    pub fn descriptor(&self) -> GraphDescriptor {
        GraphDescriptor {
            m: self.m,
            edges: self.edges.iter().map(|&(i, j)| [i, j]).collect(),
            labels: self.labels.clone(),
            root: self.root,
            mode: self.mode,
        }
    }

    pub fn vertex_count(&self) -> usize {
        self.m
    }

    pub fn edges(&self) -> &[(usize, usize)] {
        &self.edges
    }

    pub fn labels(&self) -> &[PieceLabel] {
        &self.labels
    }

    pub fn root(&self) -> usize {
        self.root
    }

    pub fn mode(&self) -> LabelMode {
        self.mode
    }

    /// Incident edge indices of `v`, ascending.
    pub fn incident_edges(&self, v: usize) -> Vec<usize> {
        (0..self.edges.len()).filter(|&e| self.edges[e].0 == v || self.edges[e].1 == v).collect()
    }

    pub fn is_connected(&self) -> bool {
        let mut seen = vec![false; self.m];
        let mut stack = vec![0];
        seen[0] = true;
        while let Some(v) = stack.pop() {
            for &(i, j) in &self.edges {
                let w = if i == v { j } else if j == v { i } else { continue };
                if !seen[w] {
                    seen[w] = true;
                    stack.push(w);
                }
            }
        }
        seen.iter().all(|&s| s)
    }

    /// Relabels vertices by `perm` (vertex `i` becomes `perm[i]`).
    pub fn relabelled(&self, perm: &[usize]) -> Self {
        let edges = self.edges.iter().map(|&(i, j)| (perm[i], perm[j])).collect();
        GlueingGraph::new(self.m, edges, self.labels.clone(), perm[self.root], self.mode)
            .expect("relabelling preserves validity")
    }
}

//! Piece complexes prescribed by glueing graphs.
//!
//! Vertex pieces come first (index = vertex), then one edge piece per edge
//! in graph order. Slots of a vertex piece are handed to its incident edges
//! in ascending edge order. The non-orientable root piece is stored as an
//! orientable cut piece with two extra slots joined by a reversing handle
//! pairing; handles are kept apart from the 4m graph pairings.

use std::collections::VecDeque;

use serde::Serialize;

use super::{GlueingError, GlueingGraph, PieceLabel, PieceSet, PieceTemplate};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub enum Provenance {
    Vertex(usize),
    Edge(usize),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct Slot {
    pub piece: usize,
    pub index: usize,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub struct Pairing {
    pub a: Slot,
    pub b: Slot,
    /// `true` if the identification preserves the piece orientations.
    pub preserving: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PieceInstance {
    pub template: PieceTemplate,
    pub provenance: Provenance,
    /// Sheet index for pieces of a double cover.
    pub sheet: Option<u8>,
    /// Total slot count, handle slots included.
    pub slot_count: usize,
    /// Orientability of the stored (cut) piece.
    pub orientable: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct AssembledManifold {
    pieces: Vec<PieceInstance>,
    pairings: Vec<Pairing>,
    handles: Vec<Pairing>,
    deck: Option<Vec<usize>>,
}

/// Assembles `g` with every pairing orientation-preserving.
pub fn assemble(g: &GlueingGraph, pieces: &PieceSet) -> Result<AssembledManifold, GlueingError> {
    assemble_with_flags(g, pieces, &vec![true; 2 * g.edges().len()])
}

/// Assembles `g` with explicit orientation flags, two per edge: the flag for
/// the first endpoint, then the second.
pub fn assemble_with_flags(
    g: &GlueingGraph,
    set: &PieceSet,
    flags: &[bool],
) -> Result<AssembledManifold, GlueingError> {
    let edges = g.edges();
    if flags.len() != 2 * edges.len() {
        return Err(GlueingError::Internal(format!("{} flags for {} edges", flags.len(), edges.len())));
    }
    let m = g.vertex_count();
    let mut pieces = Vec::with_capacity(m + edges.len());
    let mut handles = Vec::new();
    for v in 0..m {
        let label = if v == g.root() { PieceLabel::V } else { PieceLabel::U };
        let template = *set.template(label);
        let cut = !template.orientable;
        pieces.push(PieceInstance {
            template,
            provenance: Provenance::Vertex(v),
            sheet: None,
            slot_count: template.boundary_count + if cut { 2 } else { 0 },
            orientable: true,
        });
        if cut {
            let n = template.boundary_count;
            handles.push(Pairing { a: Slot { piece: v, index: n }, b: Slot { piece: v, index: n + 1 }, preserving: false });
        }
    }
    for (e, &label) in g.labels().iter().enumerate() {
        let template = *set.template(label);
        pieces.push(PieceInstance {
            template,
            provenance: Provenance::Edge(e),
            sheet: None,
            slot_count: template.boundary_count,
            orientable: template.orientable,
        });
    }
    let mut next_free = vec![0usize; m];
    let mut pairings = Vec::with_capacity(2 * edges.len());
    for (e, &(i, j)) in edges.iter().enumerate() {
        for (side, v) in [i, j].into_iter().enumerate() {
            let index = next_free[v];
            if index >= pieces[v].template.boundary_count {
                return Err(GlueingError::Internal(format!("vertex piece {v} ran out of slots")));
            }
            next_free[v] += 1;
            pairings.push(Pairing {
                a: Slot { piece: m + e, index: side },
                b: Slot { piece: v, index },
                preserving: flags[2 * e + side],
            });
        }
    }
    let out = AssembledManifold { pieces, pairings, handles, deck: None };
    out.check_closed()?;
    Ok(out)
}

impl AssembledManifold {
    /// Builds a complex from explicit parts; checks that every slot index is in range.
    pub fn from_parts(
        pieces: Vec<PieceInstance>,
        pairings: Vec<Pairing>,
        handles: Vec<Pairing>,
    ) -> Result<Self, GlueingError> {
        for p in pairings.iter().chain(&handles) {
            for s in [p.a, p.b] {
                if s.piece >= pieces.len() || s.index >= pieces[s.piece].slot_count {
                    return Err(GlueingError::Internal(format!("slot {s:?} out of range")));
                }
            }
        }
        Ok(AssembledManifold { pieces, pairings, handles, deck: None })
    }

    pub fn pieces(&self) -> &[PieceInstance] {
        &self.pieces
    }

    /// Pairings prescribed by the graph (4m for an assembly).
    pub fn pairings(&self) -> &[Pairing] {
        &self.pairings
    }

    /// Internal self-pairings of cut non-orientable pieces.
    pub fn handles(&self) -> &[Pairing] {
        &self.handles
    }

    fn all_pairings(&self) -> impl Iterator<Item = &Pairing> {
        self.pairings.iter().chain(&self.handles)
    }

    fn check_closed(&self) -> Result<(), GlueingError> {
        let mut used: Vec<Vec<u8>> = self.pieces.iter().map(|p| vec![0; p.slot_count]).collect();
        for p in self.all_pairings() {
            for s in [p.a, p.b] {
                used[s.piece][s.index] += 1;
            }
        }
        for (i, u) in used.iter().enumerate() {
            if let Some(k) = u.iter().position(|&c| c != 1) {
                return Err(GlueingError::NotClosed(format!(
                    "slot {k} of piece {i} appears in {} pairings",
                    u[k]
                )));
            }
        }
        Ok(())
    }

    pub fn is_closed(&self) -> bool {
        self.check_closed().is_ok()
    }

    pub fn volume(&self) -> f64 {
        self.pieces.iter().map(|p| p.template.volume_weight).sum()
    }

    fn adjacency(&self) -> Vec<Vec<(usize, bool)>> {
        let mut adj = vec![Vec::new(); self.pieces.len()];
        for p in self.all_pairings() {
            adj[p.a.piece].push((p.b.piece, p.preserving));
            adj[p.b.piece].push((p.a.piece, p.preserving));
        }
        adj
    }

    /// Connected components of the pairing graph.
    pub fn component_count(&self) -> usize {
        let adj = self.adjacency();
        let mut seen = vec![false; self.pieces.len()];
        let mut count = 0;
        for start in 0..self.pieces.len() {
            if seen[start] {
                continue;
            }
            count += 1;
            seen[start] = true;
            let mut queue = VecDeque::from([start]);
            while let Some(p) = queue.pop_front() {
                for &(q, _) in &adj[p] {
                    if !seen[q] {
                        seen[q] = true;
                        queue.push_back(q);
                    }
                }
            }
        }
        count
    }

    /// Orientation signs per piece if the cocycle is a coboundary.
    fn orientation(&self) -> Option<Vec<i8>> {
        let adj = self.adjacency();
        let mut sign = vec![0i8; self.pieces.len()];
        for start in 0..self.pieces.len() {
            if sign[start] != 0 {
                continue;
            }
            sign[start] = 1;
            let mut queue = VecDeque::from([start]);
            while let Some(p) = queue.pop_front() {
                for &(q, preserving) in &adj[p] {
                    let want = if preserving { sign[p] } else { -sign[p] };
                    if sign[q] == 0 {
                        sign[q] = want;
                        queue.push_back(q);
                    } else if sign[q] != want {
                        return None;
                    }
                }
            }
        }
        Some(sign)
    }

    pub fn is_orientable(&self) -> Result<bool, GlueingError> {
        self.check_closed()?;
        if self.pieces.iter().any(|p| !p.orientable) {
            return Ok(false);
        }
        Ok(self.orientation().is_some())
    }

    /// Two sheets of every piece. Preserving pairings stay on their sheet,
    /// reversing pairings cross; the deck involution swaps sheets.
    pub fn orientation_double_cover(&self) -> AssembledManifold {
        let mut pieces = Vec::with_capacity(2 * self.pieces.len());
        for p in &self.pieces {
            for s in 0..2u8 {
                let mut copy = p.clone();
                copy.sheet = Some(s);
                copy.orientable = true;
                pieces.push(copy);
            }
        }
        let lift = |list: &[Pairing]| {
            let mut out = Vec::with_capacity(2 * list.len());
            for p in list {
                for s in 0..2 {
                    let t = if p.preserving { s } else { 1 - s };
                    out.push(Pairing {
                        a: Slot { piece: 2 * p.a.piece + s, index: p.a.index },
                        b: Slot { piece: 2 * p.b.piece + t, index: p.b.index },
                        preserving: p.preserving,
                    });
                }
            }
            out
        };
        let deck = (0..pieces.len()).map(|i| i ^ 1).collect();
        AssembledManifold { pieces, pairings: lift(&self.pairings), handles: lift(&self.handles), deck: Some(deck) }
    }

    /// Image of a slot under the deck involution, if this is a double cover.
    pub fn deck_slot(&self, s: Slot) -> Option<Slot> {
        self.deck.as_ref().map(|d| Slot { piece: d[s.piece], index: s.index })
    }

    pub fn deck_involution(&self) -> Option<&[usize]> {
        self.deck.as_deref()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::glueing::LabelMode;

    fn k5(labels: PieceLabel) -> GlueingGraph {
        let mut e = Vec::new();
        for i in 0..5 {
            for j in i + 1..5 {
                e.push((i, j));
            }
        }
        GlueingGraph::new(5, e, vec![labels; 10], 0, LabelMode::Free).unwrap()
    }

    fn orientable_set() -> PieceSet {
        let mut set = PieceSet::default();
        set.set_orientable(PieceLabel::V, true);
        set
    }

    #[test]
    fn complete_graph_assembly() {
        let m = assemble(&k5(PieceLabel::APlus), &PieceSet::default()).unwrap();
        assert_eq!(m.pieces().len(), 15);
        assert_eq!(m.pairings().len(), 20);
        assert_eq!(m.handles().len(), 1);
        assert!(m.is_closed());
        assert_eq!(m.volume(), 15.0);
        assert_eq!(m.is_orientable(), Ok(false));
        assert_eq!(m.component_count(), 1);
        let doubled = assemble(&k5(PieceLabel::APlus), &PieceSet::uniform(2.0)).unwrap();
        assert_eq!(doubled.volume(), 30.0);
    }

    #[test]
    fn cocycle_parity() {
        let g = k5(PieceLabel::BPlus);
        let m = assemble(&g, &orientable_set()).unwrap();
        assert!(m.handles().is_empty());
        assert_eq!(m.is_orientable(), Ok(true));
        let mut flags = vec![true; 20];
        flags[7] = false;
        let m = assemble_with_flags(&g, &orientable_set(), &flags).unwrap();
        assert_eq!(m.is_orientable(), Ok(false));
        // reversing both sides of an edge piece is a coboundary
        flags[6] = false;
        let m = assemble_with_flags(&g, &orientable_set(), &flags).unwrap();
        assert_eq!(m.is_orientable(), Ok(true));
    }

    #[test]
    fn double_covers() {
        let g = k5(PieceLabel::AMinus);
        let m = assemble(&g, &PieceSet::default()).unwrap();
        let c = m.orientation_double_cover();
        assert!(c.is_closed());
        assert_eq!(c.is_orientable(), Ok(true));
        assert_eq!(c.component_count(), 1);
        assert_eq!(c.volume(), 2.0 * m.volume());
        let deck = c.deck_involution().unwrap();
        assert!(deck.iter().enumerate().all(|(i, &j)| i != j && deck[j] == i));
        let o = assemble(&g, &orientable_set()).unwrap();
        assert_eq!(o.orientation_double_cover().component_count(), 2);
    }

    #[test]
    fn open_complex_is_rejected() {
        let m = assemble(&k5(PieceLabel::APlus), &PieceSet::default()).unwrap();
        let mut pairings = m.pairings().to_vec();
        pairings.pop();
        let open = AssembledManifold::from_parts(m.pieces().to_vec(), pairings, m.handles().to_vec()).unwrap();
        assert!(!open.is_closed());
        assert!(matches!(open.is_orientable(), Err(GlueingError::NotClosed(_))));
    }
}

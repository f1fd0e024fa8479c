//! Exhaustive enumeration of labelled simple 4-regular graphs.
//!
//! Base graphs are generated by backtracking over vertex pairs in
//! lexicographic order. The work is split by the neighbourhood of vertex 0
//! (the first adjacency row) and the partitions run in parallel; the merged
//! output is sorted by adjacency bitmask so it does not depend on scheduling.

use rayon::prelude::*;

use super::graph::pair_index;
use super::{BaseGraph, GlueingError, GlueingGraph, LabelMode, PieceLabel};

/// Largest `m` for which exhaustive enumeration is offered.
pub const MAX_EXHAUSTIVE_M: usize = 9;

const DEGREE: usize = 4;

struct Search {
    m: usize,
    pairs: Vec<(usize, usize)>,
    degree: Vec<usize>,
    out: Vec<u64>,
}

impl Search {
    // `remaining[v]` = number of undecided pairs touching v at position `k`.
    fn run(&mut self, k: usize, mask: u64, remaining: &mut Vec<usize>) {
        if k == self.pairs.len() {
            if self.degree.iter().all(|&d| d == DEGREE) {
                self.out.push(mask);
            }
            return;
        }
        let (i, j) = self.pairs[k];
        remaining[i] -= 1;
        remaining[j] -= 1;
        // include
        if self.degree[i] < DEGREE && self.degree[j] < DEGREE {
            self.degree[i] += 1;
            self.degree[j] += 1;
            if self.degree[i] + remaining[i] >= DEGREE && self.degree[j] + remaining[j] >= DEGREE {
                self.run(k + 1, mask | 1 << pair_index(self.m, i, j), remaining);
            }
            self.degree[i] -= 1;
            self.degree[j] -= 1;
        }
        // exclude
        if self.degree[i] + remaining[i] >= DEGREE && self.degree[j] + remaining[j] >= DEGREE {
            self.run(k + 1, mask, remaining);
        }
        remaining[i] += 1;
        remaining[j] += 1;
    }
}

fn combinations(n: usize, k: usize) -> Vec<Vec<usize>> {
    fn go(start: usize, n: usize, k: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == k {
            out.push(cur.clone());
            return;
        }
        for x in start..n {
            cur.push(x);
            go(x + 1, n, k, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    go(0, n, k, &mut Vec::new(), &mut out);
    out
}

/// All labelled simple 4-regular graphs on `m` vertices, sorted by bitmask.
/// Empty for `m < 5`.
pub fn base_graphs(m: usize) -> Result<Vec<BaseGraph>, GlueingError> {
    if m > MAX_EXHAUSTIVE_M {
        return Err(GlueingError::TooLarge { m, bound: MAX_EXHAUSTIVE_M });
    }
    if m <= DEGREE {
        return Ok(Vec::new());
    }
    let rest_pairs: Vec<(usize, usize)> =
        (1..m).flat_map(|i| (i + 1..m).map(move |j| (i, j))).collect();
    let first_rows = combinations(m - 1, DEGREE);
    let mut masks: Vec<u64> = first_rows
        .par_iter()
        .map(|row| {
            let mut degree = vec![0; m];
            let mut mask = 0u64;
            degree[0] = DEGREE;
            for &x in row {
                let j = x + 1;
                degree[j] += 1;
                mask |= 1 << pair_index(m, 0, j);
            }
            let mut remaining = vec![0; m];
            for &(i, j) in &rest_pairs {
                remaining[i] += 1;
                remaining[j] += 1;
            }
            let mut search = Search { m, pairs: rest_pairs.clone(), degree, out: Vec::new() };
            search.run(0, mask, &mut remaining);
            search.out
        })
        .flatten()
        .collect();
    masks.sort_unstable();
    Ok(masks.into_iter().map(|mask| BaseGraph { m, mask }).collect())
}

/// All proper labelings of the edges of `g` (edge order as in `g.edges()`).
pub fn proper_labelings(g: &BaseGraph) -> Vec<Vec<PieceLabel>> {
    let edges = g.edges();
    let mut out = Vec::new();
    let mut used = vec![0u8; g.m];
    let mut cur = Vec::with_capacity(edges.len());
    fn go(
        k: usize,
        edges: &[(usize, usize)],
        used: &mut [u8],
        cur: &mut Vec<PieceLabel>,
        out: &mut Vec<Vec<PieceLabel>>,
        count_only: bool,
        count: &mut u128,
    ) {
        if k == edges.len() {
            *count += 1;
            if !count_only {
                out.push(cur.clone());
            }
            return;
        }
        let (i, j) = edges[k];
        for (c, &label) in PieceLabel::EDGE.iter().enumerate() {
            let bit = 1u8 << c;
            if used[i] & bit == 0 && used[j] & bit == 0 {
                used[i] |= bit;
                used[j] |= bit;
                cur.push(label);
                go(k + 1, edges, used, cur, out, count_only, count);
                cur.pop();
                used[i] &= !bit;
                used[j] &= !bit;
            }
        }
    }
    let mut count = 0;
    go(0, &edges, &mut used, &mut cur, &mut out, false, &mut count);
    out
}

/// Number of proper labelings of `g`; zero when `m` is odd since each label
/// class would be a perfect matching.
pub fn count_proper_labelings(g: &BaseGraph) -> u128 {
    if g.m % 2 == 1 {
        return 0;
    }
    proper_labelings(g).len() as u128
}

/// Lazy stream over (base graph, root, labeling) in canonical order:
/// base graphs by bitmask, then root ascending, then labeling in
/// lexicographic order of label indices.
pub struct GraphStream {
    m: usize,
    mode: LabelMode,
    bases: Vec<BaseGraph>,
    base: usize,
    root: usize,
    edges: Vec<(usize, usize)>,
    proper: Vec<Vec<PieceLabel>>,
    labeling: u128,
}

impl GraphStream {
    fn load_base(&mut self) {
        if let Some(g) = self.bases.get(self.base) {
            self.edges = g.edges();
            self.proper = match self.mode {
                LabelMode::Proper if self.m % 2 == 0 => proper_labelings(g),
                LabelMode::Proper => Vec::new(),
                LabelMode::Free => Vec::new(),
            };
        }
    }

    fn labelings_per_root(&self) -> u128 {
        match self.mode {
            LabelMode::Free => 4u128.pow(self.edges.len() as u32),
            LabelMode::Proper => self.proper.len() as u128,
        }
    }
}

impl Iterator for GraphStream {
    type Item = GlueingGraph;

    fn next(&mut self) -> Option<GlueingGraph> {
        loop {
            if self.base >= self.bases.len() {
                return None;
            }
            if self.labeling >= self.labelings_per_root() {
                self.labeling = 0;
                self.root += 1;
                if self.root >= self.m {
                    self.root = 0;
                    self.base += 1;
                    self.load_base();
                }
                continue;
            }
            let labels = match self.mode {
                LabelMode::Proper => self.proper[self.labeling as usize].clone(),
                LabelMode::Free => {
                    let e = self.edges.len();
                    let mut x = self.labeling;
                    let mut labels = vec![PieceLabel::APlus; e];
                    for k in (0..e).rev() {
                        labels[k] = PieceLabel::EDGE[(x % 4) as usize];
                        x /= 4;
                    }
                    labels
                }
            };
            self.labeling += 1;
            let g = GlueingGraph::new(self.m, self.edges.clone(), labels, self.root, self.mode)
                .expect("enumerated graphs are valid");
            return Some(g);
        }
    }
}

/// Stream of every rooted, labelled glueing graph on `m` vertices. Empty for
/// `m < 5` (no simple 4-regular graph exists).
pub fn enumerate_graphs(m: usize, mode: LabelMode) -> Result<GraphStream, GlueingError> {
    let bases = base_graphs(m)?;
    let mut s = GraphStream { m, mode, bases, base: 0, root: 0, edges: Vec::new(), proper: Vec::new(), labeling: 0 };
    s.load_base();
    Ok(s)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, serde::Serialize)]
pub struct CountRow {
    pub m: usize,
    pub base_count: u128,
    pub rooted_labelled_count: u128,
}

/// Exact counts for `5 ≤ m ≤ m_max`. Free mode uses the product rule
/// `base · m · 4^(2m)`; proper mode counts labelings per base graph.
pub fn count_graphs(m_max: usize, mode: LabelMode) -> Result<Vec<CountRow>, GlueingError> {
    if m_max > MAX_EXHAUSTIVE_M {
        return Err(GlueingError::TooLarge { m: m_max, bound: MAX_EXHAUSTIVE_M });
    }
    let mut rows = Vec::new();
    for m in DEGREE + 1..=m_max {
        let bases = base_graphs(m)?;
        let base_count = bases.len() as u128;
        let per_root: u128 = match mode {
            LabelMode::Free => base_count * 4u128.pow(2 * m as u32),
            LabelMode::Proper => bases.par_iter().map(count_proper_labelings).sum(),
        };
        rows.push(CountRow { m, base_count, rooted_labelled_count: per_root * m as u128 });
    }
    Ok(rows)
}

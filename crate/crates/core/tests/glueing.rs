use std::collections::HashMap;

use hypglue::glueing::*;

/// All 4-regular graphs on `m` vertices by brute force over every subset of
/// `2m` vertex pairs, as sorted bitmasks in lexicographic pair order.
fn oracle_masks(m: usize) -> Vec<u64> {
    let pairs: Vec<(usize, usize)> = (0..m).flat_map(|i| (i + 1..m).map(move |j| (i, j))).collect();
    let k = 2 * m;
    let mut out = Vec::new();
    let mut idx: Vec<usize> = (0..k).collect();
    if pairs.len() < k {
        return out;
    }
    loop {
        let mut deg = vec![0; m];
        let mut mask = 0u64;
        for &i in &idx {
            deg[pairs[i].0] += 1;
            deg[pairs[i].1] += 1;
            mask |= 1 << i;
        }
        if deg.iter().all(|&d| d == 4) {
            out.push(mask);
        }
        // next combination
        let mut i = k;
        loop {
            if i == 0 {
                out.sort_unstable();
                return out;
            }
            i -= 1;
            if idx[i] != i + pairs.len() - k {
                break;
            }
        }
        idx[i] += 1;
        for j in i + 1..k {
            idx[j] = idx[j - 1] + 1;
        }
    }
}

/// Ordered decompositions of the edge set into four perfect matchings.
fn oracle_proper_labelings(g: &BaseGraph) -> u128 {
    let edges = g.edges();
    let m = g.m;
    let mut matchings: Vec<u64> = Vec::new();
    fn go(v: usize, m: usize, used: u32, edges: &[(usize, usize)], cur: u64, out: &mut Vec<u64>) {
        let Some(v) = (v..m).find(|&x| used & (1 << x) == 0) else {
            out.push(cur);
            return;
        };
        for (e, &(i, j)) in edges.iter().enumerate() {
            let w = if i == v { j } else if j == v { i } else { continue };
            if used & (1 << w) == 0 {
                go(v + 1, m, used | 1 << v | 1 << w, edges, cur | 1 << e, out);
            }
        }
    }
    go(0, m, 0, &edges, 0, &mut matchings);
    let full = (1u64 << edges.len()) - 1;
    let mut count = 0;
    for &a in &matchings {
        for &b in &matchings {
            for &c in &matchings {
                if a & b == 0 && a & c == 0 && b & c == 0 && (full & !(a | b | c)).count_ones() as usize == m / 2 {
                    let d = full & !(a | b | c);
                    if matchings.contains(&d) {
                        count += 1;
                    }
                }
            }
        }
    }
    count
}

#[test]
fn base_graphs_match_the_subset_oracle() {
    for (m, expected) in [(5, 1), (6, 15), (7, 465)] {
        let got: Vec<u64> = base_graphs(m).unwrap().iter().map(|g| g.mask).collect();
        let oracle = oracle_masks(m);
        assert_eq!(got.len(), expected);
        assert_eq!(got, oracle, "m = {m}");
    }
}

#[test]
fn seven_vertex_graphs_are_complements_of_cycle_covers() {
    // 2-regular graphs on 7 labelled vertices: 6!/2 = 360 heptagons and
    // C(7,3) · 1 · 3 = 105 triangle-plus-square covers
    let all = (1u64 << 21) - 1;
    let mut heptagons = 0;
    for g in base_graphs(7).unwrap() {
        let complement = BaseGraph { m: 7, mask: all & !g.mask };
        assert!((0..7).all(|v| complement.degree(v) == 2));
        let mut seen = 1u32;
        let mut stack = vec![0];
        while let Some(v) = stack.pop() {
            for w in 0..7 {
                if complement.has_edge(v, w) && seen & 1 << w == 0 {
                    seen |= 1 << w;
                    stack.push(w);
                }
            }
        }
        heptagons += (seen == 0x7f) as usize;
    }
    assert_eq!(heptagons, 360);
}

#[test]
fn proper_labelings_match_matching_oracle() {
    for m in [6, 8] {
        let bases = base_graphs(m).unwrap();
        let step = (bases.len() / 40).max(1);
        for g in bases.iter().step_by(step) {
            assert_eq!(count_proper_labelings(g), oracle_proper_labelings(g), "mask {:#x}", g.mask);
        }
    }
    assert!(base_graphs(7).unwrap().iter().all(|g| count_proper_labelings(g) == 0));
}

#[test]
fn counts_match_streams() {
    for m in 5..=7 {
        let rows = count_graphs(m, LabelMode::Proper).unwrap();
        let proper = rows.last().unwrap().rooted_labelled_count;
        assert_eq!(enumerate_graphs(m, LabelMode::Proper).unwrap().count() as u128, proper);
        let free = count_graphs(m, LabelMode::Free).unwrap();
        let f = free.last().unwrap();
        assert_eq!(f.rooted_labelled_count, f.base_count * m as u128 * 4u128.pow(2 * m as u32));
        assert!(proper <= f.rooted_labelled_count);
    }
    assert_eq!(enumerate_graphs(5, LabelMode::Free).unwrap().count(), 5 * 4usize.pow(10));
}

#[test]
fn streams_are_valid_and_distinct() {
    let mut seen = std::collections::HashSet::new();
    for g in enumerate_graphs(6, LabelMode::Proper).unwrap() {
        assert!(GlueingGraph::from_descriptor(&g.descriptor()).is_ok());
        assert!(g.is_connected());
        assert!(seen.insert(g));
    }
    let free: Vec<_> = enumerate_graphs(5, LabelMode::Free).unwrap().take(1000).collect();
    assert!(free.windows(2).all(|w| w[0] != w[1]));
}

fn assembly_is_sound(g: &GlueingGraph, set: &PieceSet) {
    let m = g.vertex_count();
    let a = assemble(g, set).unwrap();
    assert!(a.is_closed());
    assert_eq!(a.pairings().len(), 4 * m);
    assert_eq!(a.pieces().len(), 3 * m);
    assert_eq!(a.is_orientable(), Ok(false));
    assert_eq!(a.component_count(), 1);
    let c = a.orientation_double_cover();
    assert_eq!(c.is_orientable(), Ok(true));
    assert_eq!(c.component_count(), 1);
    assert!((c.volume() - 2.0 * a.volume()).abs() < 1e-12);
    assert!(a.volume() <= 3.0 * set.max_weight() * m as f64 + 1e-12);
}

#[test]
fn assemblies_up_to_six_vertices() {
    let set = PieceSet::with_weights(|l| match l {
        PieceLabel::U | PieceLabel::V => 2.0,
        _ => 0.5,
    });
    for g in enumerate_graphs(6, LabelMode::Proper).unwrap() {
        assembly_is_sound(&g, &set);
    }
    // free labels only change edge-piece weights; sweep every rooted base
    // graph with each constant labeling and a mixed one
    for m in [5, 6] {
        for base in base_graphs(m).unwrap() {
            let edges = base.edges();
            for root in 0..m {
                for k in 0..5 {
                    let labels = (0..edges.len()).map(|e| PieceLabel::EDGE[if k < 4 { k } else { e % 4 }]).collect();
                    let g = GlueingGraph::new(m, edges.clone(), labels, root, LabelMode::Free).unwrap();
                    assembly_is_sound(&g, &set);
                }
            }
        }
    }
}

/// Pairings as a multiset of unordered piece pairs, after mapping pieces.
fn pairing_profile(a: &AssembledManifold, piece_map: &dyn Fn(usize) -> usize) -> HashMap<(usize, usize, bool), usize> {
    let mut out = HashMap::new();
    for p in a.pairings().iter().chain(a.handles()) {
        let (x, y) = (piece_map(p.a.piece), piece_map(p.b.piece));
        *out.entry((x.min(y), x.max(y), p.preserving)).or_default() += 1;
    }
    out
}

#[test]
fn isomorphic_graphs_give_isomorphic_assemblies() {
    let g = enumerate_graphs(6, LabelMode::Proper).unwrap().nth(137).unwrap();
    let perm = [3, 5, 0, 1, 4, 2];
    let h = g.relabelled(&perm);
    // re-sort the edges so slot assignment differs
    let mut order: Vec<usize> = (0..h.edges().len()).collect();
    order.sort_by_key(|&e| {
        let (i, j) = h.edges()[e];
        (i.min(j), i.max(j))
    });
    let sorted = GlueingGraph::new(
        6,
        order.iter().map(|&e| h.edges()[e]).collect(),
        order.iter().map(|&e| h.labels()[e]).collect(),
        h.root(),
        h.mode(),
    )
    .unwrap();
    let set = PieceSet::default();
    let a = assemble(&g, &set).unwrap();
    let b = assemble(&sorted, &set).unwrap();
    let edge_image: Vec<usize> = (0..order.len()).map(|e| order.iter().position(|&o| o == e).unwrap()).collect();
    let map = |p: usize| if p < 6 { perm[p] } else { 6 + edge_image[p - 6] };
    assert_eq!(pairing_profile(&a, &map), pairing_profile(&b, &|p| p));
    for (p, piece) in a.pieces().iter().enumerate() {
        let q = &b.pieces()[map(p)];
        assert_eq!(piece.template, q.template);
        assert_eq!(piece.slot_count, q.slot_count);
    }
}

#[test]
fn growth_on_free_counts() {
    let rows: Vec<(usize, u128)> =
        count_graphs(7, LabelMode::Free).unwrap().iter().map(|r| (r.m, r.rooted_labelled_count)).collect();
    let fit = growth_fit(&rows, 3.0).unwrap();
    assert!(fit.c > 0.0 && !fit.degenerate);
    assert!(fit.max_abs_residual() < 0.2, "{fit:?}");
    let m_pow: Vec<(usize, u128)> = (5..=8).map(|m| (m, (m as u128).pow(m as u32))).collect();
    assert!((growth_fit(&m_pow, 1.0).unwrap().c - 1.0).abs() < 1e-9);
}

#[test]
fn refusals() {
    assert!(matches!(count_graphs(10, LabelMode::Free), Err(GlueingError::TooLarge { m: 10, bound: 9 })));
    assert!(count_graphs(4, LabelMode::Proper).unwrap().is_empty());
    assert_eq!(enumerate_graphs(3, LabelMode::Proper).unwrap().count(), 0);
}

//! The two fixed 16-vertex blocks with identical squares, and the chain
//! families built by identifying blocks at shared vertices.
//!
//! The edge tables are frozen constants; [`self_check`] re-validates the
//! invariants that make them usable (girth 5, minimum degree 2, identical
//! squares, agreeing neighborhoods at the attachment vertices) and runs once
//! on first use.

use std::collections::BTreeMap;
use std::sync::OnceLock;

use thiserror::Error;

use crate::canon::canonical_form;
use crate::graph::{Girth, Graph};

/// Which of the two interchangeable blocks a position carries. `G1` encodes
/// FALSE and `G2` encodes TRUE in the clause encoding.
#[derive(
    Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, serde::Serialize, serde::Deserialize,
)]
pub enum GadgetKind {
    G1,
    G2,
}

impl GadgetKind {
    pub fn truth(self) -> bool {
        matches!(self, GadgetKind::G2)
    }

    pub fn from_truth(value: bool) -> Self {
        if value {
            GadgetKind::G2
        } else {
            GadgetKind::G1
        }
    }

    pub fn opposite(self) -> Self {
        match self {
            GadgetKind::G1 => GadgetKind::G2,
            GadgetKind::G2 => GadgetKind::G1,
        }
    }
}

impl std::fmt::Display for GadgetKind {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            GadgetKind::G1 => write!(f, "g1"),
            GadgetKind::G2 => write!(f, "g2"),
        }
    }
}

pub const G1_EDGES: [(u8, u8); 24] = [
    (1, 7), (1, 11), (1, 12), (2, 8), (2, 12), (2, 15), (3, 9), (3, 12),
    (3, 16), (4, 10), (4, 14), (4, 15), (5, 11), (5, 13), (5, 15), (6, 13),
    (6, 14), (7, 13), (8, 14), (8, 16), (9, 15), (10, 16), (11, 14), (13, 16),
];

pub const G2_EDGES: [(u8, u8); 24] = [
    (1, 7), (1, 11), (1, 12), (2, 8), (2, 12), (2, 16), (3, 9), (3, 12),
    (3, 15), (4, 10), (4, 14), (4, 16), (5, 6), (5, 7), (5, 13), (5, 16),
    (6, 14), (8, 14), (8, 15), (9, 16), (10, 15), (11, 13), (11, 14), (13, 15),
];

/// The three local vertices whose neighborhoods agree in both block kinds;
/// chains may only be glued at these.
pub const ATTACH_POINTS: [u8; 3] = [1, 12, 14];

/// One 16-vertex block on local vertex names "1".."16".
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BlockGraph {
    pub graph: Graph,
    pub kind: GadgetKind,
}

fn edges_of(kind: GadgetKind) -> &'static [(u8, u8); 24] {
    match kind {
        GadgetKind::G1 => &G1_EDGES,
        GadgetKind::G2 => &G2_EDGES,
    }
}

fn block_graph(kind: GadgetKind) -> Graph {
    Graph::new(
        (1..=16).map(|i| i.to_string()),
        edges_of(kind).iter().map(|&(u, v)| (u.to_string(), v.to_string())),
    )
    .expect("gadget edge table is well-formed")
}

/// The block encoding FALSE.
pub fn gadget_g1() -> BlockGraph {
    self_check();
    BlockGraph {
        graph: block_graph(GadgetKind::G1),
        kind: GadgetKind::G1,
    }
}

/// The block encoding TRUE.
pub fn gadget_g2() -> BlockGraph {
    self_check();
    BlockGraph {
        graph: block_graph(GadgetKind::G2),
        kind: GadgetKind::G2,
    }
}

pub fn gadget(kind: GadgetKind) -> BlockGraph {
    match kind {
        GadgetKind::G1 => gadget_g1(),
        GadgetKind::G2 => gadget_g2(),
    }
}

/// The common square of the two blocks.
pub fn gadget_square() -> Graph {
    self_check();
    block_graph(GadgetKind::G1).square()
}

/// Validates the frozen tables once. A failure here means the constant edge
/// tables were corrupted, so it panics rather than limping on.
fn self_check() {
    static CHECKED: OnceLock<()> = OnceLock::new();
    CHECKED.get_or_init(|| {
        let g1 = block_graph(GadgetKind::G1);
        let g2 = block_graph(GadgetKind::G2);
        for (g, tag) in [(&g1, "g1"), (&g2, "g2")] {
            assert_eq!(g.vertex_count(), 16, "{tag}: vertex count");
            assert_eq!(g.edge_count(), 24, "{tag}: edge count");
            assert_eq!(g.girth(), Girth::Finite(5), "{tag}: girth");
            assert_eq!(g.min_degree(), 2, "{tag}: minimum degree");
        }
        assert_eq!(
            g1.square(),
            g2.square(),
            "block tables corrupted: squares differ"
        );
        for a in ATTACH_POINTS {
            assert_eq!(
                g1.neighbors(&a.to_string()).unwrap(),
                g2.neighbors(&a.to_string()).unwrap(),
                "attachment vertex {a} must have identical neighborhoods"
            );
        }
    });
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum FamilyError {
    #[error("chain pattern must contain at least one block")]
    EmptyPattern,
    #[error("expected {expected} attach points for {blocks} blocks, got {got}")]
    AttachArity {
        blocks: usize,
        expected: usize,
        got: usize,
    },
    #[error("attach point {0} is not one of 1, 12, 14")]
    BadAttachPoint(u8),
    #[error("candidate {index} does not square to the given graph; witness edge {witness:?}")]
    CandidateSquareMismatch {
        index: usize,
        witness: (String, String),
    },
}

/// A chain of blocks glued at attachment vertices, with the block structure
/// retained for tests and reporting.
#[derive(Debug, Clone)]
pub struct ChainGraph {
    pub graph: Graph,
    pub pattern: Vec<GadgetKind>,
    pub attach_points: Vec<u8>,
    /// For each block, local vertex (1..=16) -> vertex name in `graph`.
    pub block_vertices: Vec<BTreeMap<u8, String>>,
}

/// Builds the chain with the given block kinds, gluing consecutive blocks by
/// identifying the same local vertex at both ends. Block `t` (1-based) names
/// its vertices `b<t>:<local>`; an identified vertex keeps the lower block's
/// name.
pub fn chain_family(
    pattern: &[GadgetKind],
    attach_points: &[u8],
) -> Result<ChainGraph, FamilyError> {
    if pattern.is_empty() {
        return Err(FamilyError::EmptyPattern);
    }
    if attach_points.len() != pattern.len() - 1 {
        return Err(FamilyError::AttachArity {
            blocks: pattern.len(),
            expected: pattern.len() - 1,
            got: attach_points.len(),
        });
    }
    for &a in attach_points {
        if !ATTACH_POINTS.contains(&a) {
            return Err(FamilyError::BadAttachPoint(a));
        }
    }
    self_check();

    let mut block_vertices: Vec<BTreeMap<u8, String>> = Vec::with_capacity(pattern.len());
    let mut edges: Vec<(String, String)> = Vec::new();
    for (t, &kind) in pattern.iter().enumerate() {
        let mut names = BTreeMap::new();
        for local in 1..=16u8 {
            let name = if t > 0 && local == attach_points[t - 1] {
                block_vertices[t - 1][&local].clone()
            } else {
                format!("b{}:{}", t + 1, local)
            };
            names.insert(local, name);
        }
        for &(u, v) in edges_of(kind) {
            edges.push((names[&u].clone(), names[&v].clone()));
        }
        block_vertices.push(names);
    }
    let graph = Graph::from_edges(edges).expect("chain edges are well-formed");
    debug_assert_eq!(
        graph.vertex_count(),
        16 * pattern.len() - (pattern.len() - 1)
    );
    Ok(ChainGraph {
        graph,
        pattern: pattern.to_vec(),
        attach_points: attach_points.to_vec(),
        block_vertices,
    })
}

/// All `2^k` kind patterns for a fixed attachment-point sequence, in
/// lexicographic pattern order (G1 before G2).
pub fn chain_pattern_space(k: usize) -> Vec<Vec<GadgetKind>> {
    (0..(1usize << k))
        .map(|bits| {
            (0..k)
                .map(|t| {
                    if bits >> (k - 1 - t) & 1 == 0 {
                        GadgetKind::G1
                    } else {
                        GadgetKind::G2
                    }
                })
                .collect()
        })
        .collect()
}

/// Counts distinct isomorphism classes among candidate square roots after
/// confirming each candidate really squares to `square`.
pub fn family_root_count(square: &Graph, candidates: &[Graph]) -> Result<usize, FamilyError> {
    for (index, cand) in candidates.iter().enumerate() {
        let sq = cand.square();
        if &sq != square {
            let (mine, theirs) = sq.edge_difference(square);
            let witness = mine
                .into_iter()
                .chain(theirs)
                .next()
                .unwrap_or_else(|| ("<vertex sets differ>".into(), String::new()));
            return Err(FamilyError::CandidateSquareMismatch { index, witness });
        }
    }
    let mut forms: Vec<_> = candidates.iter().map(canonical_form).collect();
    forms.sort();
    forms.dedup();
    Ok(forms.len())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::canon::are_isomorphic;

    /// Neighborhood tables the edge lists were derived from, in symmetric
    /// closure form. Keeping them as an independent transcription guards the
    /// frozen constants against silent edits.
    const G1_NEIGHBORHOODS: [(u8, &[u8]); 16] = [
        (1, &[7, 11, 12]),
        (2, &[12, 15, 8]),
        (3, &[12, 9, 16]),
        (4, &[10, 14, 15]),
        (5, &[13, 15, 11]),
        (6, &[13, 14]),
        (7, &[1, 13]),
        (8, &[2, 14, 16]),
        (9, &[3, 15]),
        (10, &[4, 16]),
        (11, &[1, 5, 14]),
        (12, &[2, 3, 1]),
        (13, &[5, 6, 16, 7]),
        (14, &[4, 6, 8, 11]),
        (15, &[2, 4, 5, 9]),
        (16, &[13, 3, 8, 10]),
    ];

    const G2_NEIGHBORHOODS: [(u8, &[u8]); 16] = [
        (1, &[7, 11, 12]),
        (2, &[8, 12, 16]),
        (3, &[9, 12, 15]),
        (4, &[10, 14, 16]),
        (5, &[6, 7, 13, 16]),
        (6, &[5, 14]),
        (7, &[1, 5]),
        (8, &[2, 14, 15]),
        (9, &[3, 16]),
        (10, &[4, 15]),
        (11, &[1, 13, 14]),
        (12, &[2, 3, 1]),
        (13, &[5, 11, 15]),
        (14, &[4, 6, 8, 11]),
        (15, &[3, 8, 10, 13]),
        (16, &[2, 4, 5, 9]),
    ];

    fn closure(table: &[(u8, &[u8]); 16]) -> std::collections::BTreeSet<(u8, u8)> {
        let mut edges = std::collections::BTreeSet::new();
        for &(v, nbrs) in table {
            for &u in nbrs {
                edges.insert((v.min(u), v.max(u)));
            }
        }
        edges
    }

    #[test]
    fn neighborhood_closure_matches_edge_tables() {
        // symmetry: every directed entry has its reverse
        for (table, edges) in [
            (&G1_NEIGHBORHOODS, &G1_EDGES),
            (&G2_NEIGHBORHOODS, &G2_EDGES),
        ] {
            let by_vertex: BTreeMap<u8, &[u8]> = table.iter().map(|&(v, ns)| (v, ns)).collect();
            for &(v, nbrs) in table.iter() {
                for &u in nbrs {
                    assert!(
                        by_vertex[&u].contains(&v),
                        "asymmetric neighborhood entry {v}-{u}"
                    );
                }
            }
            let closed = closure(table);
            let frozen: std::collections::BTreeSet<(u8, u8)> = edges.iter().copied().collect();
            assert_eq!(closed, frozen);
            assert_eq!(closed.len(), 24);
        }
    }

    #[test]
    fn block_invariants() {
        for block in [gadget_g1(), gadget_g2()] {
            assert_eq!(block.graph.vertex_count(), 16);
            assert_eq!(block.graph.edge_count(), 24);
            assert_eq!(block.graph.girth(), Girth::Finite(5));
            assert_eq!(block.graph.min_degree(), 2);
        }
        assert!(!are_isomorphic(&gadget_g1().graph, &gadget_g2().graph));
    }

    #[test]
    fn squares_are_identical() {
        let sq = gadget_square();
        assert_eq!(sq, gadget_g1().graph.square());
        assert_eq!(sq, gadget_g2().graph.square());
        assert_eq!(sq.vertex_count(), 16);
        // squaring only adds edges
        for (u, v) in gadget_g1().graph.edges() {
            assert!(sq.has_edge(&u, &v).unwrap());
        }
        for v in 1..=16 {
            let v = v.to_string();
            assert!(sq.degree(&v).unwrap() >= gadget_g1().graph.degree(&v).unwrap());
        }
    }

    #[test]
    fn quoted_closed_neighborhoods() {
        let g1 = gadget_g1().graph;
        let g2 = gadget_g2().graph;
        let closed = |g: &Graph, v: &str| {
            let mut n: Vec<String> = g.neighbors(v).unwrap().iter().map(|s| s.to_string()).collect();
            n.push(v.to_string());
            n.sort_by_key(|s| s.parse::<u8>().unwrap());
            n
        };
        assert_eq!(closed(&g1, "5"), ["5", "11", "13", "15"]);
        assert_eq!(closed(&g1, "13"), ["5", "6", "7", "13", "16"]);
        assert_eq!(closed(&g2, "13"), ["5", "11", "13", "15"]);
        assert_eq!(closed(&g2, "5"), ["5", "6", "7", "13", "16"]);
        // open neighborhoods quoted in the derivations
        assert_eq!(g1.neighbors("1").unwrap(), ["11", "12", "7"]);
        assert_eq!(g2.neighbors("12").unwrap(), ["1", "2", "3"]);
    }

    #[test]
    fn distances_inside_g1() {
        let g1 = gadget_g1().graph;
        assert_eq!(g1.distance("1", "5").unwrap(), Some(2)); // via 11
        assert!(g1.has_edge("1", "11").unwrap() && g1.has_edge("11", "5").unwrap());
    }

    #[test]
    fn square_neighborhood_of_1_has_the_expected_clique() {
        let sq = gadget_square();
        let mut ball = vec!["1".to_string()];
        ball.extend(sq.neighbors("1").unwrap().iter().map(|s| s.to_string()));
        let local = sq
            .induced_subgraph(ball.iter().map(String::as_str))
            .unwrap();
        let cliques = crate::cliques::maximal_cliques(&local);
        let expected: Vec<String> = ["1", "11", "12", "7"].iter().map(|s| s.to_string()).collect();
        assert!(
            cliques.contains(&expected),
            "expected {{1,7,11,12}} among {cliques:?}"
        );
    }

    #[test]
    fn gadget_square_examples() {
        let sq = gadget_square();
        assert!(sq.has_edge("1", "12").unwrap());
        let g1 = gadget_g1().graph;
        let beyond: Vec<&str> = sq
            .neighbors("12")
            .unwrap()
            .into_iter()
            .filter(|v| !g1.has_edge("12", v).unwrap())
            .collect();
        for v in ["8", "9", "15", "16"] {
            assert!(beyond.contains(&v), "expected {v} among square-only neighbors of 12");
        }
    }

    #[test]
    fn attach_points_are_exactly_the_agreeing_vertices() {
        let g1 = gadget_g1().graph;
        let g2 = gadget_g2().graph;
        for v in 1..=16u8 {
            let same = g1.neighbors(&v.to_string()).unwrap() == g2.neighbors(&v.to_string()).unwrap();
            assert_eq!(
                same,
                ATTACH_POINTS.contains(&v),
                "vertex {v}: neighborhood agreement must match the attach-point list"
            );
        }
    }

    #[test]
    fn single_block_chain_is_the_block() {
        let chain = chain_family(&[GadgetKind::G1], &[]).unwrap();
        assert!(are_isomorphic(&chain.graph, &gadget_g1().graph));
        assert_eq!(chain.graph.vertex_count(), 16);
    }

    #[test]
    fn chain_vertex_count_and_block_induction() {
        let chain = chain_family(
            &[GadgetKind::G1, GadgetKind::G2, GadgetKind::G1],
            &[1, 14],
        )
        .unwrap();
        assert_eq!(chain.graph.vertex_count(), 16 * 3 - 2);
        for (t, names) in chain.block_vertices.iter().enumerate() {
            let verts: Vec<&str> = names.values().map(String::as_str).collect();
            let induced = chain.graph.induced_subgraph(verts).unwrap();
            let expected = gadget(chain.pattern[t]).graph;
            assert!(
                are_isomorphic(&induced, &expected),
                "block {t} does not induce its pattern kind"
            );
        }
    }

    #[test]
    fn chain_errors() {
        assert_eq!(
            chain_family(&[], &[]).unwrap_err(),
            FamilyError::EmptyPattern
        );
        assert_eq!(
            chain_family(&[GadgetKind::G1, GadgetKind::G1], &[5]).unwrap_err(),
            FamilyError::BadAttachPoint(5)
        );
        assert!(matches!(
            chain_family(&[GadgetKind::G1, GadgetKind::G1], &[]).unwrap_err(),
            FamilyError::AttachArity { .. }
        ));
    }

    #[test]
    fn two_block_family_counts_three_classes() {
        let patterns = chain_pattern_space(2);
        assert_eq!(patterns.len(), 4);
        let chains: Vec<_> = patterns
            .iter()
            .map(|p| chain_family(p, &[1]).unwrap())
            .collect();
        let square = chains[0].graph.square();
        let candidates: Vec<Graph> = chains.iter().map(|c| c.graph.clone()).collect();
        assert_eq!(family_root_count(&square, &candidates).unwrap(), 3);
    }

    #[test]
    fn three_block_star_family_counts_four_classes() {
        // all blocks glued at the same local vertex: block order is free, so
        // classes = multisets of kinds
        let chains: Vec<_> = chain_pattern_space(3)
            .iter()
            .map(|p| chain_family(p, &[1, 1]).unwrap())
            .collect();
        let square = chains[0].graph.square();
        let candidates: Vec<Graph> = chains.iter().map(|c| c.graph.clone()).collect();
        assert_eq!(family_root_count(&square, &candidates).unwrap(), 4);
    }

    #[test]
    fn single_candidate_counts_one() {
        let g = gadget_g1().graph;
        assert_eq!(
            family_root_count(&g.square(), std::slice::from_ref(&g)).unwrap(),
            1
        );
    }

    #[test]
    fn family_root_count_rejects_non_root() {
        let g1 = gadget_g1().graph;
        let square = g1.square();
        let err = family_root_count(&square, std::slice::from_ref(&square)).unwrap_err();
        assert!(matches!(
            err,
            FamilyError::CandidateSquareMismatch { index: 0, .. }
        ));
    }

    #[test]
    fn block_swap_preserves_square() {
        // flipping any single block of a chain never changes the square
        for k in 1..=4usize {
            let attach: Vec<u8> = [12u8, 14, 12].iter().copied().take(k - 1).collect();
            let base = vec![GadgetKind::G1; k];
            let reference = chain_family(&base, &attach).unwrap().graph.square();
            for t in 0..k {
                let mut flipped = base.clone();
                flipped[t] = flipped[t].opposite();
                let sq = chain_family(&flipped, &attach).unwrap().graph.square();
                assert_eq!(sq, reference, "flipping block {t} of {k} changed the square");
            }
        }
    }

    #[test]
    fn exponential_family_labeled_root_count() {
        for k in [2usize, 3] {
            let attach = vec![1u8; k - 1];
            let chains: Vec<_> = chain_pattern_space(k)
                .iter()
                .map(|p| chain_family(p, &attach).unwrap())
                .collect();
            let square = chains[0].graph.square();
            for c in &chains {
                assert_eq!(c.graph.square(), square);
            }
            // 2^k distinct labeled roots of one square
            let mut edge_sets: Vec<_> = chains.iter().map(|c| c.graph.edges()).collect();
            edge_sets.sort();
            edge_sets.dedup();
            assert_eq!(edge_sets.len(), 1 << k);
        }
    }
}

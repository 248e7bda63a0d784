//! Exact canonical labeling by iterated neighborhood refinement with
//! backtracking over refinement-stable orderings.
//!
//! Equality of canonical forms is exact isomorphism, not a heuristic hash:
//! the search individualizes every vertex of the first non-singleton cell
//! and keeps the lexicographically smallest relabeled edge list.

use std::collections::BTreeMap;

use crate::bitset::BitSet;
use crate::graph::Graph;

/// Order-independent fingerprint of a graph plus the certificate relabeling
/// that produces it.
#[derive(Clone, Debug)]
pub struct CanonicalForm {
    vertex_count: usize,
    edges: Vec<(u32, u32)>,
    mapping: BTreeMap<String, u32>,
}

impl CanonicalForm {
    pub fn vertex_count(&self) -> usize {
        self.vertex_count
    }

    /// Canonical edge list: sorted pairs over canonical indices 0..n.
    pub fn canonical_edges(&self) -> &[(u32, u32)] {
        &self.edges
    }

    /// Original vertex name -> canonical index.
    pub fn mapping(&self) -> &BTreeMap<String, u32> {
        &self.mapping
    }

    /// Re-applies the certificate mapping to `g` and checks it reproduces
    /// the canonical edge list.
    pub fn certifies(&self, g: &Graph) -> bool {
        if g.vertex_count() != self.vertex_count {
            return false;
        }
        let mut relabeled: Vec<(u32, u32)> = g
            .edges()
            .iter()
            .map(|(u, v)| {
                let (a, b) = (self.mapping[u], self.mapping[v]);
                (a.min(b), a.max(b))
            })
            .collect();
        relabeled.sort_unstable();
        relabeled == self.edges
    }
}

impl PartialEq for CanonicalForm {
    fn eq(&self, other: &Self) -> bool {
        self.vertex_count == other.vertex_count && self.edges == other.edges
    }
}

impl Eq for CanonicalForm {}

impl std::hash::Hash for CanonicalForm {
    fn hash<H: std::hash::Hasher>(&self, state: &mut H) {
        self.vertex_count.hash(state);
        self.edges.hash(state);
    }
}

impl PartialOrd for CanonicalForm {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for CanonicalForm {
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        (self.vertex_count, &self.edges).cmp(&(other.vertex_count, &other.edges))
    }
}

/// A candidate leaf: relabeled edge list plus the vertex order achieving it.
type Labeling = (Vec<(u32, u32)>, Vec<usize>);

/// Computes the canonical form of `g`.
pub fn canonical_form(g: &Graph) -> CanonicalForm {
    let n = g.n();
    if n == 0 {
        return CanonicalForm {
            vertex_count: 0,
            edges: Vec::new(),
            mapping: BTreeMap::new(),
        };
    }
    let mut best: Option<Labeling> = None;
    let initial = refine(g, vec![(0..n).collect()]);
    search(g, initial, &mut best);
    let (edges, order) = best.expect("at least one leaf labeling exists");
    let mut mapping = BTreeMap::new();
    for (pos, &v) in order.iter().enumerate() {
        mapping.insert(g.name_of(v).to_string(), pos as u32);
    }
    CanonicalForm {
        vertex_count: n,
        edges,
        mapping,
    }
}

/// True exactly when the two graphs are isomorphic.
pub fn are_isomorphic(a: &Graph, b: &Graph) -> bool {
    a.vertex_count() == b.vertex_count()
        && a.edge_count() == b.edge_count()
        && canonical_form(a) == canonical_form(b)
}

/// An explicit edge-preserving bijection from `a` to `b`, when one exists.
/// The returned map is re-checked edge by edge before being handed out.
pub fn isomorphism(a: &Graph, b: &Graph) -> Option<BTreeMap<String, String>> {
    let fa = canonical_form(a);
    let fb = canonical_form(b);
    if fa != fb {
        return None;
    }
    let mut by_index: Vec<&str> = vec![""; fb.vertex_count()];
    for (name, &i) in fb.mapping() {
        by_index[i as usize] = name;
    }
    let witness: BTreeMap<String, String> = fa
        .mapping()
        .iter()
        .map(|(name, &i)| (name.clone(), by_index[i as usize].to_string()))
        .collect();
    for (u, v) in a.edges() {
        assert!(
            b.has_edge(&witness[&u], &witness[&v]).unwrap_or(false),
            "canonical labeling produced a non-edge-preserving witness"
        );
    }
    assert_eq!(a.edge_count(), b.edge_count());
    Some(witness)
}

type Partition = Vec<Vec<usize>>;

/// Equitable refinement: repeatedly split cells by neighbor counts into each
/// cell until stable. Subcells are ordered by ascending count, which keeps
/// the procedure relabeling-invariant.
fn refine(g: &Graph, mut cells: Partition) -> Partition {
    loop {
        let mut changed = false;
        let mut splitter_idx = 0;
        while splitter_idx < cells.len() {
            let mut splitter = BitSet::with_capacity(g.n());
            for &v in &cells[splitter_idx] {
                splitter.insert(v);
            }
            let mut next: Partition = Vec::with_capacity(cells.len());
            let mut split_here = false;
            for cell in &cells {
                if cell.len() == 1 {
                    next.push(cell.clone());
                    continue;
                }
                let mut groups: BTreeMap<usize, Vec<usize>> = BTreeMap::new();
                for &v in cell {
                    let count = g.adj_bits(v).intersection_count(&splitter);
                    groups.entry(count).or_default().push(v);
                }
                if groups.len() > 1 {
                    split_here = true;
                }
                next.extend(groups.into_values());
            }
            if split_here {
                cells = next;
                changed = true;
                splitter_idx = 0;
            } else {
                splitter_idx += 1;
            }
        }
        if !changed {
            return cells;
        }
    }
}

fn search(g: &Graph, cells: Partition, best: &mut Option<Labeling>) {
    match cells.iter().position(|c| c.len() > 1) {
        None => {
            let order: Vec<usize> = cells.iter().map(|c| c[0]).collect();
            let mut position = vec![0u32; g.n()];
            for (pos, &v) in order.iter().enumerate() {
                position[v] = pos as u32;
            }
            let mut edges: Vec<(u32, u32)> = Vec::with_capacity(g.edge_count());
            for v in 0..g.n() {
                for w in g.adj_bits(v).iter() {
                    if v < w {
                        let (a, b) = (position[v], position[w]);
                        edges.push((a.min(b), a.max(b)));
                    }
                }
            }
            edges.sort_unstable();
            if best.as_ref().is_none_or(|(b, _)| edges < *b) {
                *best = Some((edges, order));
            }
        }
        Some(ci) => {
            for &v in &cells[ci] {
                let mut child: Partition = Vec::with_capacity(cells.len() + 1);
                for (i, cell) in cells.iter().enumerate() {
                    if i == ci {
                        child.push(vec![v]);
                        child.push(cell.iter().copied().filter(|&u| u != v).collect());
                    } else {
                        child.push(cell.clone());
                    }
                }
                search(g, refine(g, child), best);
            }
        }
    }
}

//! Maximal-clique enumeration (pivoting branch and bound) plus the small
//! clique enumerations the root search seeds from.

use crate::bitset::BitSet;
use crate::graph::Graph;

/// All inclusion-maximal cliques, each sorted, the list itself sorted.
pub fn maximal_cliques(g: &Graph) -> Vec<Vec<String>> {
    let n = g.n();
    let mut out: Vec<Vec<usize>> = Vec::new();
    let mut p = BitSet::with_capacity(n);
    for v in 0..n {
        p.insert(v);
    }
    let x = BitSet::with_capacity(n);
    let mut r = Vec::new();
    expand(g, &mut r, p, x, &mut out);
    let mut named: Vec<Vec<String>> = out
        .into_iter()
        .map(|c| {
            let mut c: Vec<String> = c.into_iter().map(|i| g.name_of(i).to_string()).collect();
            c.sort();
            c
        })
        .collect();
    named.sort();
    named
}

fn expand(g: &Graph, r: &mut Vec<usize>, p: BitSet, x: BitSet, out: &mut Vec<Vec<usize>>) {
    if p.is_empty() && x.is_empty() {
        out.push(r.clone());
        return;
    }
    // pivot: vertex of P ∪ X with most neighbors in P
    let pivot = p
        .iter()
        .chain(x.iter())
        .max_by_key(|&u| g.adj_bits(u).intersection_count(&p))
        .expect("P or X nonempty");
    let mut candidates = p.clone();
    for w in g.adj_bits(pivot).iter() {
        candidates.remove(w);
    }
    let mut p = p;
    let mut x = x;
    for v in candidates.iter() {
        let mut p2 = p.clone();
        p2.intersect_with(g.adj_bits(v));
        let mut x2 = x.clone();
        x2.intersect_with(g.adj_bits(v));
        r.push(v);
        expand(g, r, p2, x2, out);
        r.pop();
        p.remove(v);
        x.insert(v);
    }
}

/// Every clique of `g` that contains vertex `r` (index form), including the
/// singleton `{r}`. Each clique is an ascending index list; the output order
/// is deterministic.
pub(crate) fn cliques_containing(g: &Graph, r: usize) -> Vec<Vec<usize>> {
    let nbrs: Vec<usize> = g.adj_indices(r);
    let mut out = Vec::new();
    let mut current = vec![r];
    grow(g, &nbrs, 0, &mut current, &mut out);
    out
}

fn grow(
    g: &Graph,
    candidates: &[usize],
    from: usize,
    current: &mut Vec<usize>,
    out: &mut Vec<Vec<usize>>,
) {
    out.push(current.clone());
    for (pos, &v) in candidates.iter().enumerate().skip(from) {
        if current.iter().all(|&u| g.adj_bits(u).contains(v)) {
            current.push(v);
            grow(g, candidates, pos + 1, current, out);
            current.pop();
        }
    }
}

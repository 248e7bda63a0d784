//! Randomized sweeps for the graph substrate, each checked against an
//! independent oracle implemented here rather than the library path.

use std::collections::BTreeSet;

use groot_core::canon::{are_isomorphic, canonical_form, isomorphism};
use groot_core::graph::{Girth, Graph};
use groot_core::random::{random_graph, random_relabeling, rng_from_seed};

/// All-pairs shortest paths by Floyd-Warshall over the edge list; written
/// against the adjacency matrix and independent of the library's BFS.
fn floyd_warshall(g: &Graph) -> Vec<Vec<Option<usize>>> {
    let names: Vec<&str> = g.vertices().collect();
    let n = names.len();
    let mut dist = vec![vec![None::<usize>; n]; n];
    for (i, _) in names.iter().enumerate() {
        dist[i][i] = Some(0);
    }
    for (u, v) in g.edges() {
        let ui = names.iter().position(|x| *x == u).unwrap();
        let vi = names.iter().position(|x| *x == v).unwrap();
        dist[ui][vi] = Some(1);
        dist[vi][ui] = Some(1);
    }
    for k in 0..n {
        for i in 0..n {
            for j in 0..n {
                if let (Some(a), Some(b)) = (dist[i][k], dist[k][j]) {
                    if dist[i][j].is_none_or(|d| a + b < d) {
                        dist[i][j] = Some(a + b);
                    }
                }
            }
        }
    }
    dist
}

#[test]
fn power_oracle_on_random_graphs() {
    let mut rng = rng_from_seed(0x9b5e_0001);
    for case in 0..300 {
        let n = 2 + case % 11; // up to 12 vertices
        let g = random_graph(&mut rng, n, 0.3);
        let dist = floyd_warshall(&g);
        let names: Vec<&str> = g.vertices().collect();
        for k in 1..=3usize {
            let power = g.kth_power(k).unwrap();
            for i in 0..n {
                for j in i + 1..n {
                    let expected = matches!(dist[i][j], Some(d) if d >= 1 && d <= k);
                    assert_eq!(
                        power.has_edge(names[i], names[j]).unwrap(),
                        expected,
                        "case {case}: pair ({}, {}) at k={k}",
                        names[i],
                        names[j]
                    );
                }
            }
        }
    }
}

#[test]
fn power_monotone_in_k() {
    let mut rng = rng_from_seed(0x9b5e_0002);
    for _ in 0..100 {
        let g = random_graph(&mut rng, 10, 0.25);
        let mut previous: BTreeSet<(String, String)> = BTreeSet::new();
        for k in 1..=4 {
            let edges: BTreeSet<(String, String)> =
                g.kth_power(k).unwrap().edges().into_iter().collect();
            assert!(
                previous.is_subset(&edges),
                "edge set of power {k} must contain power {}",
                k - 1
            );
            previous = edges;
        }
    }
}

#[test]
fn power_distributes_over_components() {
    let mut rng = rng_from_seed(0x9b5e_0003);
    for _ in 0..60 {
        let g = random_graph(&mut rng, 11, 0.18);
        let sq = g.square();
        // the square of the whole equals the disjoint union of the squares
        // of the components
        let mut union_edges: Vec<(String, String)> = Vec::new();
        for comp in g.connected_components() {
            let induced = g
                .induced_subgraph(comp.iter().map(String::as_str))
                .unwrap();
            union_edges.extend(induced.square().edges());
        }
        let rebuilt = Graph::new(g.vertices().map(str::to_string), union_edges).unwrap();
        assert_eq!(rebuilt, sq);
    }
}

#[test]
fn girth_infinite_exactly_for_forests() {
    let mut rng = rng_from_seed(0x9b5e_0004);
    for _ in 0..200 {
        let g = random_graph(&mut rng, 9, 0.2);
        let comps = g.connected_components().len();
        let is_forest = g.edge_count() <= g.vertex_count() - comps;
        assert_eq!(
            g.girth() == Girth::Acyclic,
            is_forest,
            "girth/forest disagreement on {g:?}"
        );
    }
}

#[test]
fn canonical_form_invariant_under_relabeling() {
    let mut rng = rng_from_seed(0x9b5e_0005);
    for case in 0..200 {
        let n = 3 + case % 8; // up to 10 vertices
        let g = random_graph(&mut rng, n, 0.35);
        let h = random_relabeling(&mut rng, &g);
        let fg = canonical_form(&g);
        let fh = canonical_form(&h);
        assert_eq!(fg, fh, "case {case}: relabeling changed the canonical form");
        assert!(fg.certifies(&g));
        assert!(fh.certifies(&h));
    }
}

/// Brute-force isomorphism by trying all vertex bijections; the independent
/// oracle for the separation sweep.
fn isomorphic_by_permutation(a: &Graph, b: &Graph) -> bool {
    if a.vertex_count() != b.vertex_count() || a.edge_count() != b.edge_count() {
        return false;
    }
    let av: Vec<&str> = a.vertices().collect();
    let bv: Vec<&str> = b.vertices().collect();
    let n = av.len();
    let mut perm: Vec<usize> = (0..n).collect();
    loop {
        let ok = a.edges().iter().all(|(u, v)| {
            let ui = av.iter().position(|x| x == u).unwrap();
            let vi = av.iter().position(|x| x == v).unwrap();
            b.has_edge(bv[perm[ui]], bv[perm[vi]]).unwrap()
        });
        if ok {
            return true;
        }
        // next permutation
        let mut i = n.wrapping_sub(2);
        while i < n && perm[i] >= perm[i + 1] {
            i = i.wrapping_sub(1);
        }
        if i >= n {
            return false;
        }
        let mut j = n - 1;
        while perm[j] <= perm[i] {
            j -= 1;
        }
        perm.swap(i, j);
        perm[i + 1..].reverse();
    }
}

#[test]
fn canonical_form_separates_nonisomorphic_pairs() {
    let mut rng = rng_from_seed(0x9b5e_0006);
    let mut checked = 0;
    while checked < 200 {
        let n = 4 + (checked % 4); // up to 7 vertices
        let a = random_graph(&mut rng, n, 0.4);
        let b = random_graph(&mut rng, n, 0.4);
        let truly_isomorphic = isomorphic_by_permutation(&a, &b);
        assert_eq!(
            are_isomorphic(&a, &b),
            truly_isomorphic,
            "canonical verdict disagrees with permutation search"
        );
        if !truly_isomorphic {
            assert_ne!(canonical_form(&a), canonical_form(&b));
            checked += 1;
        }
    }
}

#[test]
fn witnesses_verified_for_random_pairs() {
    let mut rng = rng_from_seed(0x9b5e_0007);
    for _ in 0..50 {
        let g = random_graph(&mut rng, 8, 0.4);
        let h = random_relabeling(&mut rng, &g);
        let w = isomorphism(&g, &h).expect("relabelings are isomorphic");
        for (u, v) in g.edges() {
            assert!(h.has_edge(&w[&u], &w[&v]).unwrap());
        }
        assert_eq!(w.len(), g.vertex_count());
    }
}

//! Exhaustive generation of small graphs, one representative per
//! isomorphism class.

use std::collections::BTreeSet;

use crate::canon::canonical_form;
use crate::graph::Graph;

/// Every connected graph with 1..=`max_edges` edges, one representative per
/// isomorphism class, grown edge by edge from a single edge (new edges
/// either join existing vertices or attach a pendant vertex).
pub fn connected_graphs_up_to(max_edges: usize) -> Vec<Graph> {
    if max_edges == 0 {
        return Vec::new();
    }
    let k2 = Graph::from_edges([("v0", "v1")]).expect("single edge");
    let mut by_edges: Vec<Vec<Graph>> = vec![vec![k2]];
    for m in 1..max_edges {
        let mut seen = BTreeSet::new();
        let mut next = Vec::new();
        for g in &by_edges[m - 1] {
            let names: Vec<String> = g.vertices().map(str::to_string).collect();
            let mut extensions: Vec<(String, String)> = Vec::new();
            for i in 0..names.len() {
                for j in i + 1..names.len() {
                    if !g.has_edge(&names[i], &names[j]).expect("own vertices") {
                        extensions.push((names[i].clone(), names[j].clone()));
                    }
                }
            }
            for u in &names {
                extensions.push((u.clone(), format!("v{}", names.len())));
            }
            for (u, v) in extensions {
                let mut edges = g.edges();
                edges.push((u, v));
                let bigger = Graph::from_edges(edges).expect("extension is well-formed");
                if seen.insert(canonical_form(&bigger)) {
                    next.push(bigger);
                }
            }
        }
        by_edges.push(next);
    }
    by_edges.into_iter().flatten().collect()
}

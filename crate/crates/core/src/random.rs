//! Seeded generators for the randomized sweeps. Everything here is driven by
//! an explicit ChaCha stream so sweeps are reproducible from a single seed.

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::graph::Graph;
use crate::sat::{Clause, SatInstance};

pub fn rng_from_seed(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// G(n, p) with vertices `v0..v<n>`.
pub fn random_graph(rng: &mut ChaCha8Rng, n: usize, p: f64) -> Graph {
    let vertices: Vec<String> = (0..n).map(|i| format!("v{i}")).collect();
    let mut edges = Vec::new();
    for i in 0..n {
        for j in i + 1..n {
            if rng.gen_bool(p) {
                edges.push((vertices[i].clone(), vertices[j].clone()));
            }
        }
    }
    Graph::new(vertices, edges).expect("generated edges are well-formed")
}

/// A connected G(n, p): resamples until connected (p is bumped gently to
/// keep the expected number of retries small).
pub fn random_connected_graph(rng: &mut ChaCha8Rng, n: usize, p: f64) -> Graph {
    let mut p = p;
    loop {
        let g = random_graph(rng, n, p);
        if g.is_connected() {
            return g;
        }
        p = (p * 1.1).min(0.95);
    }
}

/// Relabels `g` by a random permutation of fresh names `w0..`.
pub fn random_relabeling(rng: &mut ChaCha8Rng, g: &Graph) -> Graph {
    let mut fresh: Vec<String> = (0..g.vertex_count()).map(|i| format!("w{i}")).collect();
    fresh.shuffle(rng);
    let originals: Vec<String> = g.vertices().map(str::to_string).collect();
    let map: std::collections::HashMap<&str, &str> = originals
        .iter()
        .map(String::as_str)
        .zip(fresh.iter().map(String::as_str))
        .collect();
    g.relabeled(|v| map[v].to_string())
        .expect("permutation is injective")
}

/// A random positive 1-in-3 instance over `var_pool` variables, not
/// necessarily minimum-intersecting.
pub fn random_instance(rng: &mut ChaCha8Rng, clauses: usize, var_pool: usize) -> SatInstance {
    assert!(var_pool >= 3);
    let vars: Vec<String> = (0..var_pool)
        .map(|i| format!("{}", (b'a' + (i % 26) as u8) as char).repeat(i / 26 + 1))
        .collect();
    let mut out = Vec::with_capacity(clauses);
    for _ in 0..clauses {
        let mut picks = vars.clone();
        picks.shuffle(rng);
        picks.truncate(3);
        out.push(
            Clause::new([picks[0].clone(), picks[1].clone(), picks[2].clone()])
                .expect("three distinct picks"),
        );
    }
    SatInstance::new(out)
}

/// A random minimum-intersecting positive 1-in-3 instance: rejection-samples
/// clauses that would share two variables with an earlier clause.
pub fn random_min_intersecting_instance(
    rng: &mut ChaCha8Rng,
    clauses: usize,
    var_pool: usize,
) -> SatInstance {
    assert!(var_pool >= 3);
    let vars: Vec<String> = (0..var_pool)
        .map(|i| format!("{}", (b'a' + (i % 26) as u8) as char).repeat(i / 26 + 1))
        .collect();
    let mut out: Vec<Clause> = Vec::with_capacity(clauses);
    'outer: for _ in 0..clauses {
        for _attempt in 0..1000 {
            let mut picks = vars.clone();
            picks.shuffle(rng);
            picks.truncate(3);
            let cand = Clause::new([picks[0].clone(), picks[1].clone(), picks[2].clone()])
                .expect("three distinct picks");
            let clashes = out.iter().any(|c| {
                c.var_set().intersection(&cand.var_set()).count() >= 2
            });
            if !clashes {
                out.push(cand);
                continue 'outer;
            }
        }
        break; // pool too small to extend without a clash; stop early
    }
    SatInstance::new(out)
}

//! Cross-checks of the root search against the brute-force oracle, plus the
//! certificate characterization on small graphs.

use std::collections::{BTreeMap, BTreeSet};

use groot_core::enumerate::connected_graphs_up_to;
use groot_core::graph::{Girth, Graph};
use groot_core::random::{random_connected_graph, rng_from_seed};
use groot_core::solver::{
    brute_force_roots, check_clique_cover, cover_to_root, find_square_roots,
    root_to_clique_cover, CliqueCover, HostIndex, RootSearchState, SearchOptions,
};

fn edge_set_collections_equal(a: &[Graph], b: &[Graph]) -> bool {
    let xs: BTreeSet<Vec<(String, String)>> = a.iter().map(Graph::edges).collect();
    let ys: BTreeSet<Vec<(String, String)>> = b.iter().map(Graph::edges).collect();
    xs == ys
}

#[test]
fn oracle_equivalence_on_small_hosts() {
    let hosts = connected_graphs_up_to(6);
    assert!(hosts.len() > 50, "enumeration looks too small: {}", hosts.len());
    for host in &hosts {
        let brute = brute_force_roots(host, 3).unwrap();
        let found = find_square_roots(host, 3, SearchOptions::default()).unwrap();
        assert!(found.complete);
        assert!(
            edge_set_collections_equal(&found.roots, &brute),
            "root sets differ on host {host:?}"
        );
    }
}

#[test]
fn oracle_equivalence_on_random_squares() {
    let mut rng = rng_from_seed(0x50a1_0001);
    let mut done = 0;
    while done < 40 {
        let n = 4 + done % 3;
        let h = random_connected_graph(&mut rng, n, 0.4);
        let host = h.square();
        if host.edge_count() > 15 {
            continue;
        }
        let brute = brute_force_roots(&host, 3).unwrap();
        let found = find_square_roots(&host, 3, SearchOptions::default()).unwrap();
        assert!(found.complete);
        assert!(
            edge_set_collections_equal(&found.roots, &brute),
            "root sets differ on square of {h:?}"
        );
        // the generating graph is among the roots
        assert!(brute.iter().any(|r| r.edges() == h.edges()));
        done += 1;
    }
}

#[test]
fn girth_five_completeness() {
    let mut rng = rng_from_seed(0x50a1_0002);
    let mut done = 0;
    while done < 100 {
        let n = 5 + done % 8; // up to 12 vertices
        let h = random_connected_graph(&mut rng, n, 1.6 / n as f64);
        if !h.girth().at_least(5) {
            continue;
        }
        let square = h.square();
        let found = find_square_roots(&square, 5, SearchOptions::default()).unwrap();
        assert!(found.complete);
        assert!(
            found.roots.iter().any(|r| r.edges() == h.edges()),
            "search missed the generating root {h:?}"
        );
        done += 1;
    }
}

#[test]
fn propagation_never_contradicts_a_real_root() {
    // replay: seed with a true root's closed neighborhood at the search's
    // own seed vertex; propagation must stay inside that root
    let hosts = connected_graphs_up_to(5);
    for host in hosts {
        let roots = brute_force_roots(&host, 3).unwrap();
        let index = HostIndex::new(&host);
        let names: Vec<&str> = host.vertices().collect();
        let seed = names
            .iter()
            .min_by_key(|v| (host.degree(v).unwrap(), v.to_string()))
            .copied()
            .unwrap();
        for root in roots {
            let root_edges: BTreeSet<(String, String)> = root.edges().into_iter().collect();
            let nbrs: Vec<String> = root
                .neighbors(seed)
                .unwrap()
                .into_iter()
                .map(str::to_string)
                .collect();
            let nbr_refs: Vec<&str> = nbrs.iter().map(String::as_str).collect();
            let mut state = RootSearchState::new(&index);
            state
                .assume_closed_neighborhood(seed, &nbr_refs, 3)
                .expect("seeding with a real root cannot contradict");
            state
                .propagate(3)
                .expect("propagating a real root's seed cannot contradict");
            for (u, v) in state.committed_root_edges() {
                assert!(
                    root_edges.contains(&(u.clone(), v.clone())),
                    "propagation committed {u}-{v} absent from the seeding root"
                );
            }
        }
    }
}

/// Exhaustive search for any valid clique cover, the certificate side of the
/// square characterization. Independent of the root search.
fn some_clique_cover(g: &Graph) -> Option<CliqueCover> {
    let names: Vec<String> = g.vertices().map(str::to_string).collect();
    // candidate cliques per vertex: subsets of the closed neighborhood
    // containing the vertex and pairwise adjacent
    let mut candidates: Vec<Vec<BTreeSet<String>>> = Vec::new();
    for v in &names {
        let nbrs: Vec<&str> = g.neighbors(v).unwrap();
        let mut cliques = Vec::new();
        for mask in 0u32..(1 << nbrs.len()) {
            let members: Vec<&str> = nbrs
                .iter()
                .enumerate()
                .filter(|(i, _)| mask >> i & 1 == 1)
                .map(|(_, w)| *w)
                .collect();
            let pairwise = members.iter().enumerate().all(|(i, a)| {
                members[i + 1..]
                    .iter()
                    .all(|b| g.has_edge(a, b).unwrap())
            });
            if pairwise {
                let mut set: BTreeSet<String> =
                    members.into_iter().map(str::to_string).collect();
                set.insert(v.clone());
                cliques.push(set);
            }
        }
        candidates.push(cliques);
    }
    fn assign(
        g: &Graph,
        names: &[String],
        candidates: &[Vec<BTreeSet<String>>],
        chosen: &mut Vec<BTreeSet<String>>,
    ) -> bool {
        let pos = chosen.len();
        if pos == names.len() {
            let cover = CliqueCover {
                cliques: names
                    .iter()
                    .cloned()
                    .zip(chosen.iter().cloned())
                    .collect(),
            };
            return check_clique_cover(g, &cover).is_ok();
        }
        'cands: for cand in &candidates[pos] {
            // symmetry against already-chosen cliques
            for (earlier, set) in chosen.iter().enumerate() {
                let u = &names[earlier];
                let v = &names[pos];
                if set.contains(v) != cand.contains(u) {
                    continue 'cands;
                }
            }
            chosen.push(cand.clone());
            if assign(g, names, candidates, chosen) {
                return true;
            }
            chosen.pop();
        }
        false
    }
    let mut chosen = Vec::new();
    if assign(g, &names, &candidates, &mut chosen) {
        Some(CliqueCover {
            cliques: names.into_iter().zip(chosen).collect(),
        })
    } else {
        None
    }
}

#[test]
fn clique_cover_characterizes_squares() {
    // on every connected host with <= 5 edges: a valid cover exists exactly
    // when a square root exists, and a found cover rebuilds to a real root
    for host in connected_graphs_up_to(5) {
        let has_root = !brute_force_roots(&host, 3).unwrap().is_empty();
        match some_clique_cover(&host) {
            Some(cover) => {
                assert!(has_root, "cover found for a non-square {host:?}");
                let rebuilt = cover_to_root(&host, &cover).unwrap();
                assert_eq!(rebuilt.square(), host);
            }
            None => assert!(!has_root, "square {host:?} without any cover"),
        }
    }
}

#[test]
fn root_covers_validate() {
    let mut rng = rng_from_seed(0x50a1_0003);
    for _ in 0..30 {
        let h = random_connected_graph(&mut rng, 7, 0.35);
        let g = h.square();
        let cover = root_to_clique_cover(&h);
        check_clique_cover(&g, &cover).unwrap();
        let mapped: BTreeMap<String, usize> = cover
            .cliques
            .iter()
            .map(|(v, c)| (v.clone(), c.len()))
            .collect();
        for (v, size) in mapped {
            assert_eq!(size, h.degree(&v).unwrap() + 1);
        }
    }
}

#[test]
fn forest_bound_reproduces_acyclic_roots() {
    let mut rng = rng_from_seed(0x50a1_0004);
    for _ in 0..20 {
        let n = 5 + (rng_step(&mut rng) % 4);
        let h = random_tree(&mut rng, n);
        let square = h.square();
        let found = find_square_roots(&square, usize::MAX - 2, SearchOptions::default()).unwrap();
        assert!(found.roots.iter().all(|r| r.girth() == Girth::Acyclic));
        assert!(found.roots.iter().any(|r| r.edges() == h.edges()));
    }
}

fn rng_step(rng: &mut rand_chacha::ChaCha8Rng) -> usize {
    use rand::Rng;
    rng.gen_range(0..usize::MAX / 2)
}

fn random_tree(rng: &mut rand_chacha::ChaCha8Rng, n: usize) -> Graph {
    use rand::Rng;
    let mut edges = Vec::new();
    for v in 1..n {
        let parent = rng.gen_range(0..v);
        edges.push((format!("v{parent}"), format!("v{v}")));
    }
    Graph::from_edges(edges).unwrap()
}

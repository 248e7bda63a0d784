//! Simple undirected graphs with stable string vertex identifiers.
//!
//! Vertices are opaque names mapped to dense indices; all outputs that
//! enumerate vertices or edges do so in sorted order so fixtures and CLI
//! output are reproducible.

use std::collections::HashMap;

use thiserror::Error;

use crate::bitset::BitSet;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum GraphError {
    #[error("unknown vertex {0:?}")]
    UnknownVertex(String),
    #[error("self-loop at vertex {0:?}")]
    SelfLoop(String),
    #[error("power exponent must be at least 1")]
    ZeroPower,
    #[error("vertex sets differ: {0}")]
    VertexSetMismatch(String),
}

/// Length of a shortest cycle, or `Acyclic` when the graph is a forest.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub enum Girth {
    Finite(usize),
    Acyclic,
}

impl Girth {
    pub fn at_least(self, bound: usize) -> bool {
        match self {
            Girth::Finite(g) => g >= bound,
            Girth::Acyclic => true,
        }
    }
}

impl std::fmt::Display for Girth {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Girth::Finite(g) => write!(f, "{g}"),
            Girth::Acyclic => write!(f, "inf"),
        }
    }
}

/// Simple undirected graph. Adjacency is symmetric and irreflexive.
#[derive(Clone)]
pub struct Graph {
    names: Vec<String>,
    index: HashMap<String, usize>,
    adj: Vec<BitSet>,
    edge_count: usize,
}

impl Graph {
    /// Builds a graph from an explicit vertex set and edge list.
    ///
    /// Duplicate vertices and duplicate edges collapse silently (set
    /// semantics); self-loops and edges naming unknown vertices are errors.
    pub fn new<V, E, S, T>(vertices: V, edges: E) -> Result<Graph, GraphError>
    where
        V: IntoIterator<Item = S>,
        E: IntoIterator<Item = (T, T)>,
        S: Into<String>,
        T: AsRef<str>,
    {
        let mut names: Vec<String> = vertices.into_iter().map(Into::into).collect();
        names.sort();
        names.dedup();
        let index: HashMap<String, usize> = names
            .iter()
            .enumerate()
            .map(|(i, n)| (n.clone(), i))
            .collect();
        let n = names.len();
        let mut adj = vec![BitSet::with_capacity(n); n];
        let mut edge_count = 0;
        for (u, v) in edges {
            let (u, v) = (u.as_ref(), v.as_ref());
            let ui = *index
                .get(u)
                .ok_or_else(|| GraphError::UnknownVertex(u.to_string()))?;
            let vi = *index
                .get(v)
                .ok_or_else(|| GraphError::UnknownVertex(v.to_string()))?;
            if ui == vi {
                return Err(GraphError::SelfLoop(u.to_string()));
            }
            if !adj[ui].contains(vi) {
                adj[ui].insert(vi);
                adj[vi].insert(ui);
                edge_count += 1;
            }
        }
        Ok(Graph {
            names,
            index,
            adj,
            edge_count,
        })
    }

    /// Builds a graph whose vertex set is inferred from the edge endpoints.
    pub fn from_edges<E, T>(edges: E) -> Result<Graph, GraphError>
    where
        E: IntoIterator<Item = (T, T)>,
        T: AsRef<str>,
    {
        let edges: Vec<(String, String)> = edges
            .into_iter()
            .map(|(u, v)| (u.as_ref().to_string(), v.as_ref().to_string()))
            .collect();
        let vertices: Vec<String> = edges
            .iter()
            .flat_map(|(u, v)| [u.clone(), v.clone()])
            .collect();
        Graph::new(vertices, edges)
    }

    pub fn vertex_count(&self) -> usize {
        self.names.len()
    }

    pub fn edge_count(&self) -> usize {
        self.edge_count
    }

    /// Vertex names in sorted order.
    pub fn vertices(&self) -> impl Iterator<Item = &str> {
        self.names.iter().map(String::as_str)
    }

    pub fn contains_vertex(&self, name: &str) -> bool {
        self.index.contains_key(name)
    }

    pub fn has_edge(&self, u: &str, v: &str) -> Result<bool, GraphError> {
        let (ui, vi) = (self.idx(u)?, self.idx(v)?);
        Ok(self.adj[ui].contains(vi))
    }

    pub fn degree(&self, v: &str) -> Result<usize, GraphError> {
        Ok(self.adj[self.idx(v)?].count())
    }

    pub fn min_degree(&self) -> usize {
        self.adj.iter().map(BitSet::count).min().unwrap_or(0)
    }

    /// Neighbor names of `v` in sorted order.
    pub fn neighbors(&self, v: &str) -> Result<Vec<&str>, GraphError> {
        let vi = self.idx(v)?;
        Ok(self.adj[vi].iter().map(|i| self.names[i].as_str()).collect())
    }

    /// All edges as sorted name pairs, in sorted order.
    pub fn edges(&self) -> Vec<(String, String)> {
        let mut out = Vec::with_capacity(self.edge_count);
        for u in 0..self.names.len() {
            for v in self.adj[u].iter() {
                if u < v {
                    out.push((self.names[u].clone(), self.names[v].clone()));
                }
            }
        }
        out
    }

    // ---- dense-index view used by the heavier algorithms -----------------

    pub(crate) fn n(&self) -> usize {
        self.names.len()
    }

    pub(crate) fn idx(&self, name: &str) -> Result<usize, GraphError> {
        self.index
            .get(name)
            .copied()
            .ok_or_else(|| GraphError::UnknownVertex(name.to_string()))
    }

    pub(crate) fn name_of(&self, i: usize) -> &str {
        &self.names[i]
    }

    pub(crate) fn adj_bits(&self, i: usize) -> &BitSet {
        &self.adj[i]
    }

    pub(crate) fn adj_indices(&self, i: usize) -> Vec<usize> {
        self.adj[i].iter().collect()
    }

    // ---- operations -------------------------------------------------------

    /// BFS distances from `src` over dense indices; `None` = unreachable.
    pub(crate) fn bfs_from(&self, src: usize) -> Vec<Option<usize>> {
        let mut dist = vec![None; self.n()];
        dist[src] = Some(0);
        let mut queue = std::collections::VecDeque::from([src]);
        while let Some(u) = queue.pop_front() {
            let du = dist[u].unwrap();
            for w in self.adj[u].iter() {
                if dist[w].is_none() {
                    dist[w] = Some(du + 1);
                    queue.push_back(w);
                }
            }
        }
        dist
    }

    /// Shortest-path length between two vertices; `None` when unreachable.
    pub fn distance(&self, u: &str, v: &str) -> Result<Option<usize>, GraphError> {
        let (ui, vi) = (self.idx(u)?, self.idx(v)?);
        Ok(self.bfs_from(ui)[vi])
    }

    /// The k-th power: same vertices, edges between distinct vertices at
    /// distance 1..=k.
    pub fn kth_power(&self, k: usize) -> Result<Graph, GraphError> {
        if k == 0 {
            return Err(GraphError::ZeroPower);
        }
        let n = self.n();
        let mut adj = vec![BitSet::with_capacity(n); n];
        let mut edge_count = 0;
        for u in 0..n {
            let dist = self.bfs_from(u);
            for (v, d) in dist.iter().enumerate() {
                let in_range = v != u && matches!(d, Some(d) if *d <= k);
                if in_range && !adj[u].contains(v) {
                    adj[u].insert(v);
                    adj[v].insert(u);
                    edge_count += 1;
                }
            }
        }
        Ok(Graph {
            names: self.names.clone(),
            index: self.index.clone(),
            adj,
            edge_count,
        })
    }

    /// The square, `kth_power(2)`.
    pub fn square(&self) -> Graph {
        self.kth_power(2).expect("k=2 is always valid")
    }

    /// Shortest cycle length via one BFS per root: the shortest cycle through
    /// each root is bounded by d(a)+d(b)+1 over non-tree edges (a,b), and the
    /// minimum over all roots is exact.
    pub fn girth(&self) -> Girth {
        let n = self.n();
        let mut best: Option<usize> = None;
        for r in 0..n {
            let mut dist = vec![usize::MAX; n];
            let mut parent = vec![usize::MAX; n];
            dist[r] = 0;
            let mut queue = std::collections::VecDeque::from([r]);
            while let Some(u) = queue.pop_front() {
                if best.is_some_and(|b| 2 * dist[u] >= b) {
                    break;
                }
                for w in self.adj[u].iter() {
                    if dist[w] == usize::MAX {
                        dist[w] = dist[u] + 1;
                        parent[w] = u;
                        queue.push_back(w);
                    } else if parent[u] != w && parent[w] != u {
                        let cand = dist[u] + dist[w] + 1;
                        if best.is_none_or(|b| cand < b) {
                            best = Some(cand);
                        }
                    }
                }
            }
        }
        match best {
            Some(g) => Girth::Finite(g),
            None => Girth::Acyclic,
        }
    }

    /// Connected components as sorted vertex-name groups, sorted by their
    /// smallest member.
    pub fn connected_components(&self) -> Vec<Vec<String>> {
        let n = self.n();
        let mut seen = vec![false; n];
        let mut comps = Vec::new();
        for s in 0..n {
            if seen[s] {
                continue;
            }
            let mut comp = Vec::new();
            let mut stack = vec![s];
            seen[s] = true;
            while let Some(u) = stack.pop() {
                comp.push(self.names[u].clone());
                for w in self.adj[u].iter() {
                    if !seen[w] {
                        seen[w] = true;
                        stack.push(w);
                    }
                }
            }
            comp.sort();
            comps.push(comp);
        }
        comps
    }

    pub fn is_connected(&self) -> bool {
        self.connected_components().len() <= 1
    }

    /// Induced subgraph on the given vertex names.
    pub fn induced_subgraph<'a, I: IntoIterator<Item = &'a str>>(
        &self,
        vertices: I,
    ) -> Result<Graph, GraphError> {
        let keep: Vec<&str> = vertices.into_iter().collect();
        for v in &keep {
            self.idx(v)?;
        }
        let kept: std::collections::HashSet<&str> = keep.iter().copied().collect();
        let edges: Vec<(String, String)> = self
            .edges()
            .into_iter()
            .filter(|(u, v)| kept.contains(u.as_str()) && kept.contains(v.as_str()))
            .collect();
        Graph::new(keep.iter().map(|s| s.to_string()), edges)
    }

    /// Returns the graph with every vertex renamed through `f`. The map must
    /// be injective on the vertex set.
    pub fn relabeled<F: Fn(&str) -> String>(&self, f: F) -> Result<Graph, GraphError> {
        let vertices: Vec<String> = self.names.iter().map(|n| f(n)).collect();
        if vertices.len()
            != vertices
                .iter()
                .collect::<std::collections::HashSet<_>>()
                .len()
        {
            return Err(GraphError::VertexSetMismatch(
                "relabeling is not injective".into(),
            ));
        }
        let edges: Vec<(String, String)> = self
            .edges()
            .into_iter()
            .map(|(u, v)| (f(&u), f(&v)))
            .collect();
        Graph::new(vertices, edges)
    }

    /// True when both graphs have identical vertex names and edge sets.
    pub fn same_labeled_graph(&self, other: &Graph) -> bool {
        self.names == other.names && self.adj == other.adj
    }

    /// Symmetric difference of edge sets, for diagnostics: edges of `self`
    /// absent from `other`, then edges of `other` absent from `self`.
    #[allow(clippy::type_complexity)]
    pub fn edge_difference(&self, other: &Graph) -> (Vec<(String, String)>, Vec<(String, String)>) {
        let mine: std::collections::BTreeSet<_> = self.edges().into_iter().collect();
        let theirs: std::collections::BTreeSet<_> = other.edges().into_iter().collect();
        (
            mine.difference(&theirs).cloned().collect(),
            theirs.difference(&mine).cloned().collect(),
        )
    }
}

impl PartialEq for Graph {
    fn eq(&self, other: &Self) -> bool {
        self.same_labeled_graph(other)
    }
}

impl Eq for Graph {}

impl std::fmt::Debug for Graph {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("Graph")
            .field("vertices", &self.names)
            .field("edges", &self.edges())
            .finish()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn path(names: &[&str]) -> Graph {
        Graph::from_edges(names.windows(2).map(|w| (w[0], w[1]))).unwrap()
    }

    fn cycle(n: usize) -> Graph {
        Graph::from_edges((0..n).map(|i| (format!("v{i}"), format!("v{}", (i + 1) % n)))).unwrap()
    }

    fn complete(n: usize) -> Graph {
        let mut edges = Vec::new();
        for i in 0..n {
            for j in i + 1..n {
                edges.push((format!("v{i}"), format!("v{j}")));
            }
        }
        Graph::from_edges(edges).unwrap()
    }

    #[test]
    fn rejects_self_loop() {
        let err = Graph::from_edges([("a", "a")]).unwrap_err();
        assert_eq!(err, GraphError::SelfLoop("a".into()));
    }

    #[test]
    fn rejects_unknown_endpoint() {
        let err = Graph::new(["a", "b"], [("a", "c")]).unwrap_err();
        assert_eq!(err, GraphError::UnknownVertex("c".into()));
    }

    #[test]
    fn duplicate_edges_collapse() {
        let g = Graph::from_edges([("a", "b"), ("b", "a"), ("a", "b")]).unwrap();
        assert_eq!(g.edge_count(), 1);
    }

    #[test]
    fn path_square_is_triangle() {
        let g = path(&["a", "b", "c"]);
        let sq = g.kth_power(2).unwrap();
        assert_eq!(
            sq.edges(),
            vec![
                ("a".into(), "b".into()),
                ("a".into(), "c".into()),
                ("b".into(), "c".into())
            ]
        );
    }

    #[test]
    fn power_one_is_identity() {
        let g = cycle(6);
        assert_eq!(g.kth_power(1).unwrap(), g);
    }

    #[test]
    fn power_zero_rejected() {
        assert_eq!(cycle(4).kth_power(0).unwrap_err(), GraphError::ZeroPower);
    }

    #[test]
    fn c5_square_is_k5_and_star_square_is_k5() {
        let c5 = cycle(5);
        let k5 = complete(5);
        assert_eq!(c5.square(), k5);
        let star = Graph::from_edges([("v0", "v1"), ("v0", "v2"), ("v0", "v3"), ("v0", "v4")])
            .unwrap();
        assert_eq!(star.square(), k5);
    }

    #[test]
    fn distances() {
        let c5 = cycle(5);
        assert_eq!(c5.distance("v0", "v2").unwrap(), Some(2));
        assert_eq!(c5.distance("v0", "v0").unwrap(), Some(0));
        assert_eq!(c5.distance("v0", "v3").unwrap(), c5.distance("v3", "v0").unwrap());
        let two = Graph::new(["a", "b", "c"], [("a", "b")]).unwrap();
        assert_eq!(two.distance("a", "c").unwrap(), None);
        assert!(matches!(
            two.distance("a", "zz"),
            Err(GraphError::UnknownVertex(v)) if v == "zz"
        ));
    }

    #[test]
    fn girths() {
        assert_eq!(path(&["a", "b", "c", "d"]).girth(), Girth::Acyclic);
        assert_eq!(cycle(5).girth(), Girth::Finite(5));
        assert_eq!(complete(3).girth(), Girth::Finite(3));
        assert_eq!(cycle(9).girth(), Girth::Finite(9));
        // two cycles sharing nothing: minimum wins
        let mut edges = cycle(7).edges();
        edges.extend([("x0".into(), "x1".into()), ("x1".into(), "x2".into()),
                      ("x2".into(), "x0".into())]);
        assert_eq!(Graph::from_edges(edges).unwrap().girth(), Girth::Finite(3));
        assert!(Girth::Acyclic.at_least(1_000_000));
        assert!(Girth::Finite(5).at_least(5));
        assert!(!Girth::Finite(4).at_least(5));
    }

    #[test]
    fn girth_infinite_iff_forest_edge_bound() {
        // |E| <= |V| - #components exactly characterizes acyclic graphs
        let forest = Graph::new(
            ["a", "b", "c", "d", "e"],
            [("a", "b"), ("b", "c"), ("d", "e")],
        )
        .unwrap();
        let comps = forest.connected_components().len();
        assert_eq!(forest.girth(), Girth::Acyclic);
        assert!(forest.edge_count() <= forest.vertex_count() - comps);

        let cyclic = cycle(4);
        let comps = cyclic.connected_components().len();
        assert_ne!(cyclic.girth(), Girth::Acyclic);
        assert!(cyclic.edge_count() > cyclic.vertex_count() - comps);
    }

    #[test]
    fn components_and_power_distribute() {
        let mut edges = cycle(5).edges();
        edges.extend(path(&["p0", "p1", "p2"]).edges());
        let g = Graph::from_edges(edges).unwrap();
        assert_eq!(g.connected_components().len(), 2);
        let sq = g.square();
        // no edge crosses components
        for (u, v) in sq.edges() {
            assert!(
                g.distance(&u, &v).unwrap().is_some(),
                "power connected distinct components"
            );
        }
    }

    #[test]
    fn induced_subgraph_keeps_internal_edges() {
        let g = complete(4);
        let sub = g.induced_subgraph(["v0", "v1", "v2"]).unwrap();
        assert_eq!(sub, complete(3));
    }
}

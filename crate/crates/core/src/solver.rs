//! Exact enumeration of square roots under a girth lower bound.
//!
//! The search looks for spanning subgraphs H of the host G with H² = G and
//! g(H) ≥ bound. Every H-edge is a G-edge (adjacent H-vertices are within
//! distance two), so the state is a three-valued decision per G-edge plus
//! the committed H-neighborhoods. Propagation drives each G-edge's witness
//! options (the edge itself, or a common committed neighbor) to a fixpoint;
//! the search branches on an edge from the smallest unresolved option set
//! and verifies every leaf independently.

use std::collections::BTreeMap;
use std::collections::BTreeSet;

use thiserror::Error;

use crate::bitset::BitSet;
use crate::canon::canonical_form;
use crate::cliques::cliques_containing;
use crate::graph::{Girth, Graph, GraphError};

#[derive(Debug, Error)]
pub enum SolverError {
    #[error("vertex sets differ: {0}")]
    VertexSetMismatch(String),
    #[error("root search requires a connected host graph")]
    Disconnected,
    #[error("brute force is limited to {limit} edges, host has {edges}")]
    TooManyEdges { edges: usize, limit: usize },
    #[error("girth bound must be at least 3, got {0}")]
    BadGirthBound(usize),
    #[error(transparent)]
    Graph(#[from] GraphError),
}

/// A dead search state. This is a normal outcome of propagation, not a
/// failure of the solver.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Contradiction {
    pub reason: String,
}

impl std::fmt::Display for Contradiction {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "contradiction: {}", self.reason)
    }
}

fn contra(reason: impl Into<String>) -> Contradiction {
    Contradiction {
        reason: reason.into(),
    }
}

// ---- verification -------------------------------------------------------------

/// Outcome of checking one candidate root against a host square.
#[derive(Debug, Clone)]
pub struct VerifyReport {
    pub verified: bool,
    pub girth: Girth,
    pub girth_min: usize,
    /// Host edges not realized within distance two of the candidate.
    pub missing_edges: Vec<(String, String)>,
    /// Candidate square edges absent from the host.
    pub extra_edges: Vec<(String, String)>,
}

impl std::fmt::Display for VerifyReport {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        if self.verified {
            return write!(f, "verified: square matches, girth {} >= {}", self.girth, self.girth_min);
        }
        writeln!(f, "not a root (girth {}, required >= {})", self.girth, self.girth_min)?;
        for (u, v) in &self.missing_edges {
            writeln!(f, "  missing square edge {u} -- {v}")?;
        }
        for (u, v) in &self.extra_edges {
            writeln!(f, "  extra square edge {u} -- {v}")?;
        }
        Ok(())
    }
}

/// Checks `h² = g` and `g(h) ≥ girth_min`, reporting every discrepant edge.
pub fn verify_root(h: &Graph, g: &Graph, girth_min: usize) -> Result<VerifyReport, SolverError> {
    let mine: Vec<&str> = h.vertices().collect();
    let theirs: Vec<&str> = g.vertices().collect();
    if mine != theirs {
        return Err(SolverError::VertexSetMismatch(format!(
            "candidate has {} vertices, host {}",
            mine.len(),
            theirs.len()
        )));
    }
    let square = h.square();
    let (extra, missing) = square.edge_difference(g);
    let girth = h.girth();
    let verified = extra.is_empty() && missing.is_empty() && girth.at_least(girth_min);
    Ok(VerifyReport {
        verified,
        girth,
        girth_min,
        missing_edges: missing,
        extra_edges: extra,
    })
}

// ---- host tables ---------------------------------------------------------------

/// Immutable edge tables shared by all states of one search.
pub struct HostIndex {
    graph: Graph,
    edges: Vec<(usize, usize)>,
    id_of: Vec<usize>,
    common: Vec<Vec<usize>>,
}

const NO_EDGE: usize = usize::MAX;

impl HostIndex {
    pub fn new(graph: &Graph) -> HostIndex {
        let graph = graph.clone();
        let n = graph.n();
        let mut edges = Vec::with_capacity(graph.edge_count());
        let mut id_of = vec![NO_EDGE; n * n];
        for u in 0..n {
            for v in graph.adj_bits(u).iter() {
                if u < v {
                    id_of[u * n + v] = edges.len();
                    id_of[v * n + u] = edges.len();
                    edges.push((u, v));
                }
            }
        }
        // common G-neighbors per edge: the candidate witnesses
        let common = edges
            .iter()
            .map(|&(u, v)| {
                let mut both = graph.adj_bits(u).clone();
                both.intersect_with(graph.adj_bits(v));
                both.iter().collect()
            })
            .collect();
        HostIndex {
            graph,
            edges,
            id_of,
            common,
        }
    }

    pub fn graph(&self) -> &Graph {
        &self.graph
    }

    fn n(&self) -> usize {
        self.graph.n()
    }

    fn edge_id(&self, u: usize, v: usize) -> Option<usize> {
        match self.id_of[u * self.n() + v] {
            NO_EDGE => None,
            id => Some(id),
        }
    }
}

// ---- search state ----------------------------------------------------------------

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum EdgeDecision {
    Undecided,
    In,
    Out,
}

/// Partial square-root hypothesis over a host square.
#[derive(Clone)]
pub struct RootSearchState<'h> {
    host: &'h HostIndex,
    decision: Vec<EdgeDecision>,
    in_adj: Vec<BitSet>,
    covered: Vec<bool>,
    uncovered: usize,
    dirty: Vec<usize>,
    dirty_flag: Vec<bool>,
}

impl<'h> RootSearchState<'h> {
    pub fn new(host: &'h HostIndex) -> RootSearchState<'h> {
        let n = host.n();
        let m = host.edges.len();
        RootSearchState {
            host,
            decision: vec![EdgeDecision::Undecided; m],
            in_adj: vec![BitSet::with_capacity(n); n],
            covered: vec![false; m],
            uncovered: m,
            dirty: Vec::new(),
            dirty_flag: vec![false; m],
        }
    }

    pub fn decision(&self, u: &str, v: &str) -> Result<EdgeDecision, SolverError> {
        let (ui, vi) = (self.host.graph.idx(u)?, self.host.graph.idx(v)?);
        Ok(match self.host.edge_id(ui, vi) {
            Some(e) => self.decision[e],
            None => EdgeDecision::Out,
        })
    }

    /// Committed H-neighbors of `v`, sorted by name.
    pub fn committed_neighbors(&self, v: &str) -> Result<Vec<String>, SolverError> {
        let vi = self.host.graph.idx(v)?;
        Ok(self.in_adj[vi]
            .iter()
            .map(|i| self.host.graph.name_of(i).to_string())
            .collect())
    }

    /// The committed H-neighbors of `v` that are host-adjacent to `x`: the
    /// candidate attachment points for `x` around `v`. Under a girth bound
    /// of five, exactly one member of the final set is H-adjacent to `x`.
    pub fn l_set(&self, v: &str, x: &str) -> Result<Vec<String>, SolverError> {
        let vi = self.host.graph.idx(v)?;
        let xi = self.host.graph.idx(x)?;
        Ok(self.in_adj[vi]
            .iter()
            .filter(|&u| self.host.graph.adj_bits(xi).contains(u))
            .map(|u| self.host.graph.name_of(u).to_string())
            .collect())
    }

    /// All committed root edges, sorted.
    pub fn committed_root_edges(&self) -> Vec<(String, String)> {
        let mut out: Vec<(String, String)> = self
            .decision
            .iter()
            .enumerate()
            .filter(|(_, d)| **d == EdgeDecision::In)
            .map(|(e, _)| {
                let (u, v) = self.host.edges[e];
                (
                    self.host.graph.name_of(u).to_string(),
                    self.host.graph.name_of(v).to_string(),
                )
            })
            .collect();
        out.sort();
        out
    }

    pub fn is_fully_decided(&self) -> bool {
        self.decision
            .iter()
            .all(|d| *d != EdgeDecision::Undecided)
    }

    /// Commits the closed H-neighborhood of `center` to exactly
    /// `{center} ∪ neighbors`: those edges go in, every other host edge at
    /// `center` goes out.
    pub fn assume_closed_neighborhood(
        &mut self,
        center: &str,
        neighbors: &[&str],
        girth_min: usize,
    ) -> Result<(), Contradiction> {
        let ci = self
            .host
            .graph
            .idx(center)
            .map_err(|e| contra(e.to_string()))?;
        let mut keep = Vec::new();
        for nbr in neighbors {
            let ni = self.host.graph.idx(nbr).map_err(|e| contra(e.to_string()))?;
            let e = self
                .host
                .edge_id(ci, ni)
                .ok_or_else(|| contra(format!("{center} and {nbr} are not host-adjacent")))?;
            keep.push(e);
        }
        for &e in &keep {
            self.set_in(e, girth_min)?;
        }
        for v in self.host.graph.adj_indices(ci) {
            let e = self.host.edge_id(ci, v).expect("adjacent");
            if !keep.contains(&e) {
                self.set_out(e)?;
            }
        }
        Ok(())
    }

    pub fn commit_edge_in(&mut self, u: &str, v: &str, girth_min: usize) -> Result<(), Contradiction> {
        let (ui, vi) = (
            self.host.graph.idx(u).map_err(|e| contra(e.to_string()))?,
            self.host.graph.idx(v).map_err(|e| contra(e.to_string()))?,
        );
        let e = self
            .host
            .edge_id(ui, vi)
            .ok_or_else(|| contra(format!("{u} and {v} are not host-adjacent")))?;
        self.set_in(e, girth_min)
    }

    pub fn commit_edge_out(&mut self, u: &str, v: &str) -> Result<(), Contradiction> {
        let (ui, vi) = (
            self.host.graph.idx(u).map_err(|e| contra(e.to_string()))?,
            self.host.graph.idx(v).map_err(|e| contra(e.to_string()))?,
        );
        let e = self
            .host
            .edge_id(ui, vi)
            .ok_or_else(|| contra(format!("{u} and {v} are not host-adjacent")))?;
        self.set_out(e)
    }

    fn name(&self, i: usize) -> &str {
        self.host.graph.name_of(i)
    }

    fn mark_dirty(&mut self, e: usize) {
        if !self.dirty_flag[e] && !self.covered[e] {
            self.dirty_flag[e] = true;
            self.dirty.push(e);
        }
    }

    fn mark_covered(&mut self, e: usize) {
        if !self.covered[e] {
            self.covered[e] = true;
            self.uncovered -= 1;
        }
    }

    /// Bounded BFS distance in the committed graph; `None` if above `bound`.
    fn committed_distance_bounded(&self, src: usize, dst: usize, bound: usize) -> Option<usize> {
        if src == dst {
            return Some(0);
        }
        let mut dist = vec![usize::MAX; self.host.n()];
        dist[src] = 0;
        let mut queue = std::collections::VecDeque::from([src]);
        while let Some(u) = queue.pop_front() {
            if dist[u] >= bound {
                continue;
            }
            for w in self.in_adj[u].iter() {
                if dist[w] == usize::MAX {
                    if w == dst {
                        return Some(dist[u] + 1);
                    }
                    dist[w] = dist[u] + 1;
                    queue.push_back(w);
                }
            }
        }
        None
    }

    /// Vertices within committed distance `bound` of `src`, with distances.
    fn committed_ball(&self, src: usize, bound: usize) -> Vec<(usize, usize)> {
        let mut dist = vec![usize::MAX; self.host.n()];
        dist[src] = 0;
        let mut order = vec![src];
        let mut queue = std::collections::VecDeque::from([src]);
        while let Some(u) = queue.pop_front() {
            if dist[u] >= bound {
                continue;
            }
            for w in self.in_adj[u].iter() {
                if dist[w] == usize::MAX {
                    dist[w] = dist[u] + 1;
                    order.push(w);
                    queue.push_back(w);
                }
            }
        }
        order.into_iter().map(|v| (v, dist[v])).collect()
    }

    fn set_in(&mut self, e: usize, girth_min: usize) -> Result<(), Contradiction> {
        match self.decision[e] {
            EdgeDecision::In => return Ok(()),
            EdgeDecision::Out => {
                let (u, v) = self.host.edges[e];
                return Err(contra(format!(
                    "edge {}-{} needed in the root but already excluded",
                    self.name(u),
                    self.name(v)
                )));
            }
            EdgeDecision::Undecided => {}
        }
        let (u, v) = self.host.edges[e];

        // a root edge closing a committed path shorter than the bound makes
        // a short cycle
        if girth_min >= 3 {
            if let Some(d) = self.committed_distance_bounded(u, v, girth_min.saturating_sub(2)) {
                return Err(contra(format!(
                    "edge {}-{} closes a cycle of length {}",
                    self.name(u),
                    self.name(v),
                    d + 1
                )));
            }
        }

        self.decision[e] = EdgeDecision::In;
        self.in_adj[u].insert(v);
        self.in_adj[v].insert(u);
        self.mark_covered(e);

        // every new distance-two pair must be a host edge, and is covered
        for (a, b) in [(u, v), (v, u)] {
            let others: Vec<usize> = self.in_adj[a].iter().filter(|&w| w != b).collect();
            for w in others {
                match self.host.edge_id(b, w) {
                    Some(f) => self.mark_covered(f),
                    None => {
                        return Err(contra(format!(
                            "{} and {} reach distance two but are not host-adjacent",
                            self.name(b),
                            self.name(w)
                        )))
                    }
                }
            }
        }

        // neighbors of an endpoint must stay within the host ball of the
        // other endpoint
        for (a, b) in [(u, v), (v, u)] {
            for z in self.host.graph.adj_indices(b) {
                if z != a && !self.host.graph.adj_bits(a).contains(z) {
                    let f = self.host.edge_id(b, z).expect("adjacent");
                    self.set_out(f)?;
                }
            }
        }

        // exclude edges that would close a cycle below the bound through e
        if girth_min >= 4 {
            let radius = girth_min - 3;
            let ball_u = self.committed_ball(u, radius);
            let ball_v = self.committed_ball(v, radius);
            for &(a, da) in &ball_u {
                for &(b, db) in &ball_v {
                    if a == b || da + db + 1 > girth_min - 2 {
                        continue;
                    }
                    if let Some(f) = self.host.edge_id(a, b) {
                        if f != e && self.decision[f] == EdgeDecision::Undecided {
                            self.set_out(f)?;
                        }
                    }
                }
            }
        }

        // witness sets at both endpoints shrink for girth bounds >= 5, and
        // coverage may now be resolved
        self.mark_dirty(e);
        for (a, b) in [(u, v), (v, u)] {
            let _ = b;
            for &w in &self.host.common[e] {
                if let Some(f) = self.host.edge_id(a, w) {
                    self.mark_dirty(f);
                }
            }
        }
        Ok(())
    }

    fn set_out(&mut self, e: usize) -> Result<(), Contradiction> {
        match self.decision[e] {
            EdgeDecision::Out => return Ok(()),
            EdgeDecision::In => {
                let (u, v) = self.host.edges[e];
                return Err(contra(format!(
                    "edge {}-{} committed to the root but needs exclusion",
                    self.name(u),
                    self.name(v)
                )));
            }
            EdgeDecision::Undecided => {}
        }
        self.decision[e] = EdgeDecision::Out;
        let (u, v) = self.host.edges[e];
        self.mark_dirty(e);
        // edges whose witness legs included e
        for &c in &self.host.common[e] {
            if let Some(f) = self.host.edge_id(u, c) {
                self.mark_dirty(f);
            }
            if let Some(f) = self.host.edge_id(v, c) {
                self.mark_dirty(f);
            }
        }
        Ok(())
    }

    /// Viable witness options for an uncovered host edge: the edge itself
    /// and each common neighbor whose two legs are not excluded.
    fn witness_options(&self, e: usize) -> (usize, Option<usize>) {
        let (u, v) = self.host.edges[e];
        let mut count = 0;
        let mut branch_edge = None;
        if self.decision[e] == EdgeDecision::Undecided {
            count += 1;
            branch_edge = Some(e);
        }
        for &w in &self.host.common[e] {
            let a = self.host.edge_id(u, w).expect("common neighbor");
            let b = self.host.edge_id(v, w).expect("common neighbor");
            if self.decision[a] != EdgeDecision::Out && self.decision[b] != EdgeDecision::Out {
                count += 1;
                if branch_edge.is_none() {
                    branch_edge = Some(if self.decision[a] == EdgeDecision::Undecided {
                        a
                    } else {
                        b
                    });
                }
            }
        }
        (count, branch_edge)
    }

    /// Re-examines one edge's coverage; commits a forced witness.
    fn recheck(&mut self, e: usize, girth_min: usize) -> Result<(), Contradiction> {
        if self.covered[e] {
            return Ok(());
        }
        let (u, v) = self.host.edges[e];
        let mut viable_direct = self.decision[e] == EdgeDecision::Undecided;
        let mut viable_witnesses: Vec<usize> = Vec::new();
        for &w in &self.host.common[e] {
            let a = self.host.edge_id(u, w).expect("common neighbor");
            let b = self.host.edge_id(v, w).expect("common neighbor");
            if self.decision[a] != EdgeDecision::Out && self.decision[b] != EdgeDecision::Out {
                viable_witnesses.push(w);
            }
        }
        match (viable_direct, viable_witnesses.len()) {
            (false, 0) => Err(contra(format!(
                "host edge {}-{} has no remaining witness",
                self.name(u),
                self.name(v)
            ))),
            (true, 0) => {
                viable_direct = false;
                let _ = viable_direct;
                self.set_in(e, girth_min)
            }
            (false, 1) => {
                let w = viable_witnesses[0];
                let a = self.host.edge_id(u, w).expect("common neighbor");
                let b = self.host.edge_id(v, w).expect("common neighbor");
                self.set_in(a, girth_min)?;
                self.set_in(b, girth_min)
            }
            _ => Ok(()),
        }
    }

    /// Drives the constraint rules to a fixpoint.
    pub fn propagate(&mut self, girth_min: usize) -> Result<(), Contradiction> {
        while let Some(e) = self.dirty.pop() {
            self.dirty_flag[e] = false;
            self.recheck(e, girth_min)?;
        }
        Ok(())
    }

    /// The branching edge: an undecided edge drawn from the smallest
    /// unresolved witness set, or any undecided edge once all host edges
    /// are covered. `None` means the state is a leaf.
    fn choose_branch_edge(&self) -> Option<usize> {
        let mut best: Option<(usize, usize, usize)> = None;
        for e in 0..self.host.edges.len() {
            if self.covered[e] {
                continue;
            }
            let (count, branch) = self.witness_options(e);
            let branch = branch.expect("uncovered edge with zero options survives propagation");
            if best.is_none_or(|(c, id, _)| (count, e) < (c, id)) {
                best = Some((count, e, branch));
            }
        }
        if let Some((_, _, branch)) = best {
            return Some(branch);
        }
        self.decision
            .iter()
            .position(|d| *d == EdgeDecision::Undecided)
    }
}

/// Standalone propagation entry point matching the module's operation list.
pub fn propagate(state: &mut RootSearchState<'_>, girth_min: usize) -> Result<(), Contradiction> {
    state.propagate(girth_min)
}

// ---- enumeration -----------------------------------------------------------------

/// Enumeration controls for [`find_square_roots`].
#[derive(Debug, Clone, Copy, Default)]
pub struct SearchOptions {
    /// Stop after this many labeled roots; the outcome is flagged incomplete.
    pub limit: Option<usize>,
    /// Deduplicate results by canonical form.
    pub up_to_iso: bool,
}

/// Search result: labeled roots in sorted order, and whether the enumeration
/// ran to completion.
#[derive(Debug, Clone)]
pub struct RootSearchOutcome {
    pub roots: Vec<Graph>,
    pub complete: bool,
}

struct SearchDriver<'h> {
    host: &'h HostIndex,
    girth_min: usize,
    limit: Option<usize>,
    roots: Vec<Graph>,
    complete: bool,
}

impl<'h> SearchDriver<'h> {
    /// Returns true when the search should stop (limit reached).
    fn search(&mut self, mut state: RootSearchState<'h>) -> bool {
        if state.propagate(self.girth_min).is_err() {
            return false;
        }
        let Some(e) = state.choose_branch_edge() else {
            return self.leaf(&state);
        };
        let mut in_branch = state.clone();
        if in_branch.set_in(e, self.girth_min).is_ok() && self.search(in_branch) {
            return true;
        }
        if state.set_out(e).is_err() {
            return false;
        }
        self.search(state)
    }

    fn leaf(&mut self, state: &RootSearchState<'h>) -> bool {
        debug_assert!(state.is_fully_decided());
        let candidate = Graph::new(
            self.host.graph.vertices().map(str::to_string),
            state.committed_root_edges(),
        )
        .expect("committed edges are well-formed");
        let ok = verify_root(&candidate, &self.host.graph, self.girth_min)
            .map(|r| r.verified)
            .unwrap_or(false);
        if ok {
            self.roots.push(candidate);
            if self.limit.is_some_and(|l| self.roots.len() >= l) {
                self.complete = false;
                return true;
            }
        }
        false
    }
}

/// Complete enumeration of the square roots of `g` with girth at least
/// `girth_min`. Deterministic: seeds on the minimum-degree vertex, branches
/// over its possible closed neighborhoods (cliques of the host), and
/// orders results by edge list.
pub fn find_square_roots(
    g: &Graph,
    girth_min: usize,
    options: SearchOptions,
) -> Result<RootSearchOutcome, SolverError> {
    if girth_min < 3 {
        return Err(SolverError::BadGirthBound(girth_min));
    }
    if !g.is_connected() {
        return Err(SolverError::Disconnected);
    }
    let host = HostIndex::new(g);
    let mut driver = SearchDriver {
        host: &host,
        girth_min,
        limit: options.limit,
        roots: Vec::new(),
        complete: true,
    };
    if options.limit == Some(0) {
        driver.complete = false;
    } else if host.graph.vertex_count() == 0 {
        // nothing to decide; the empty graph is its own square
    } else {
        let seed = (0..host.n())
            .min_by_key(|&v| (host.graph.adj_bits(v).count(), v))
            .expect("nonempty host");
        let seed_name = host.graph.name_of(seed).to_string();
        'seeds: for clique in cliques_containing(&host.graph, seed) {
            let neighbor_names: Vec<String> = clique
                .iter()
                .filter(|&&v| v != seed)
                .map(|&v| host.graph.name_of(v).to_string())
                .collect();
            let refs: Vec<&str> = neighbor_names.iter().map(String::as_str).collect();
            let mut state = RootSearchState::new(&host);
            if state
                .assume_closed_neighborhood(&seed_name, &refs, girth_min)
                .is_err()
            {
                continue;
            }
            if driver.search(state) {
                break 'seeds;
            }
        }
    }
    if host.graph.vertex_count() == 0 || host.graph.edge_count() == 0 {
        // K1 or the empty graph: the edgeless graph is the unique root
        let candidate = Graph::new(
            host.graph.vertices().map(str::to_string),
            Vec::<(String, String)>::new(),
        )
        .expect("edgeless");
        if verify_root(&candidate, &host.graph, girth_min)
            .map(|r| r.verified)
            .unwrap_or(false)
            && !driver.roots.contains(&candidate)
        {
            driver.roots.push(candidate);
        }
    }
    let mut roots = driver.roots;
    roots.sort_by_key(Graph::edges);
    if options.up_to_iso {
        let mut seen = BTreeSet::new();
        roots.retain(|r| seen.insert(canonical_form(r)));
    }
    Ok(RootSearchOutcome {
        roots,
        complete: driver.complete,
    })
}

// ---- brute force oracle -------------------------------------------------------------

const BRUTE_FORCE_EDGE_LIMIT: usize = 20;

/// Ground-truth enumeration over all edge subsets of the host. Independent
/// of the search path above: adjacency is rebuilt per subset and checked
/// directly.
pub fn brute_force_roots(g: &Graph, girth_min: usize) -> Result<Vec<Graph>, SolverError> {
    if girth_min < 3 {
        return Err(SolverError::BadGirthBound(girth_min));
    }
    let m = g.edge_count();
    if m > BRUTE_FORCE_EDGE_LIMIT {
        return Err(SolverError::TooManyEdges {
            edges: m,
            limit: BRUTE_FORCE_EDGE_LIMIT,
        });
    }
    let n = g.n();
    assert!(n <= 64, "edge-bounded hosts fit in 64 vertices");
    let mut host_adj = vec![0u64; n];
    for (u, row) in host_adj.iter_mut().enumerate() {
        for v in g.adj_bits(u).iter() {
            *row |= 1 << v;
        }
    }
    let edge_list: Vec<(usize, usize)> = {
        let mut out = Vec::new();
        for u in 0..n {
            for v in g.adj_bits(u).iter() {
                if u < v {
                    out.push((u, v));
                }
            }
        }
        out
    };

    let mut roots = Vec::new();
    for mask in 0u32..(1u32 << m) {
        let mut adj = vec![0u64; n];
        for (i, &(u, v)) in edge_list.iter().enumerate() {
            if mask >> i & 1 == 1 {
                adj[u] |= 1 << v;
                adj[v] |= 1 << u;
            }
        }
        if !square_equals(&adj, &host_adj) || !girth_at_least(&adj, girth_min) {
            continue;
        }
        let edges: Vec<(String, String)> = edge_list
            .iter()
            .enumerate()
            .filter(|(i, _)| mask >> i & 1 == 1)
            .map(|(_, &(u, v))| (g.name_of(u).to_string(), g.name_of(v).to_string()))
            .collect();
        roots.push(
            Graph::new(g.vertices().map(str::to_string), edges).expect("subset edges valid"),
        );
    }
    roots.sort_by_key(Graph::edges);
    Ok(roots)
}

fn square_equals(adj: &[u64], host: &[u64]) -> bool {
    for u in 0..adj.len() {
        let mut ball = adj[u];
        let mut t = adj[u];
        while t != 0 {
            let w = t.trailing_zeros() as usize;
            t &= t - 1;
            ball |= adj[w];
        }
        ball &= !(1u64 << u);
        if ball != host[u] {
            return false;
        }
    }
    true
}

fn girth_at_least(adj: &[u64], bound: usize) -> bool {
    let n = adj.len();
    for r in 0..n {
        let mut dist = vec![usize::MAX; n];
        let mut parent = vec![usize::MAX; n];
        dist[r] = 0;
        let mut queue = std::collections::VecDeque::from([r]);
        while let Some(u) = queue.pop_front() {
            let mut t = adj[u];
            while t != 0 {
                let w = t.trailing_zeros() as usize;
                t &= t - 1;
                if dist[w] == usize::MAX {
                    dist[w] = dist[u] + 1;
                    parent[w] = u;
                    queue.push_back(w);
                } else if parent[u] != w && parent[w] != u && dist[u] + dist[w] + 1 < bound {
                    return false;
                }
            }
        }
    }
    true
}

// ---- clique-cover certificates ---------------------------------------------------------

/// Per-vertex clique certificate that a graph is a square.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CliqueCover {
    pub cliques: BTreeMap<String, BTreeSet<String>>,
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum CoverViolation {
    #[error("cover has no clique for vertex {0:?}")]
    MissingVertex(String),
    #[error("clique of {v:?} references unknown vertex {u:?}")]
    UnknownVertex { v: String, u: String },
    #[error("vertex {0:?} is not a member of its own clique")]
    NotSelfMember(String),
    #[error("membership is asymmetric: {u:?} is in the clique of {v:?} but not conversely")]
    Asymmetric { v: String, u: String },
    #[error("clique of {v:?} contains the non-adjacent pair {a:?}, {b:?}")]
    NotAClique { v: String, a: String, b: String },
    #[error("edge {u:?}-{v:?} is covered by no clique")]
    EdgeUncovered { u: String, v: String },
}

/// The cover induced by a candidate root: each vertex maps to its closed
/// root neighborhood.
pub fn root_to_clique_cover(h: &Graph) -> CliqueCover {
    let cliques = h
        .vertices()
        .map(|v| {
            let mut set: BTreeSet<String> = h
                .neighbors(v)
                .expect("own vertex")
                .into_iter()
                .map(str::to_string)
                .collect();
            set.insert(v.to_string());
            (v.to_string(), set)
        })
        .collect();
    CliqueCover { cliques }
}

/// Validates the three membership conditions plus that every per-vertex set
/// is a clique of `g`; reports the first violation found.
pub fn check_clique_cover(g: &Graph, cover: &CliqueCover) -> Result<(), CoverViolation> {
    for v in g.vertices() {
        if !cover.cliques.contains_key(v) {
            return Err(CoverViolation::MissingVertex(v.to_string()));
        }
    }
    for (v, clique) in &cover.cliques {
        if !g.contains_vertex(v) {
            return Err(CoverViolation::UnknownVertex {
                v: v.clone(),
                u: v.clone(),
            });
        }
        for u in clique {
            if !g.contains_vertex(u) {
                return Err(CoverViolation::UnknownVertex {
                    v: v.clone(),
                    u: u.clone(),
                });
            }
        }
        if !clique.contains(v) {
            return Err(CoverViolation::NotSelfMember(v.clone()));
        }
        for u in clique {
            if u != v && !cover.cliques[u].contains(v) {
                return Err(CoverViolation::Asymmetric {
                    v: v.clone(),
                    u: u.clone(),
                });
            }
        }
        let members: Vec<&String> = clique.iter().collect();
        for i in 0..members.len() {
            for j in i + 1..members.len() {
                if !g.has_edge(members[i], members[j]).expect("known vertices") {
                    return Err(CoverViolation::NotAClique {
                        v: v.clone(),
                        a: members[i].clone(),
                        b: members[j].clone(),
                    });
                }
            }
        }
    }
    for (u, v) in g.edges() {
        let covered = cover
            .cliques
            .values()
            .any(|c| c.contains(&u) && c.contains(&v));
        if !covered {
            return Err(CoverViolation::EdgeUncovered { u, v });
        }
    }
    Ok(())
}

/// The root a valid cover describes: `v ~ u` exactly when each is in the
/// other's clique.
pub fn cover_to_root(g: &Graph, cover: &CliqueCover) -> Result<Graph, CoverViolation> {
    check_clique_cover(g, cover)?;
    let mut edges = Vec::new();
    for (v, clique) in &cover.cliques {
        for u in clique {
            if u > v {
                edges.push((v.clone(), u.clone()));
            }
        }
    }
    Ok(Graph::new(g.vertices().map(str::to_string), edges).expect("cover edges are host vertices"))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gadgets::{gadget_g1, gadget_g2, gadget_square};

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

    fn star(n: usize) -> Graph {
        Graph::from_edges((1..n).map(|i| ("v0".to_string(), format!("v{i}")))).unwrap()
    }

    #[test]
    fn verify_c5_and_star_as_k5_roots() {
        let k5 = complete(5);
        assert!(verify_root(&cycle(5), &k5, 5).unwrap().verified);
        assert!(verify_root(&star(5), &k5, 5).unwrap().verified);
    }

    #[test]
    fn verify_reports_missing_edges() {
        let k5 = complete(5);
        let mut edges = cycle(5).edges();
        edges.pop();
        let broken = Graph::new(k5.vertices().map(str::to_string), edges).unwrap();
        let report = verify_root(&broken, &k5, 5).unwrap();
        assert!(!report.verified);
        assert!(!report.missing_edges.is_empty());
        assert!(report.to_string().contains("missing square edge"));
    }

    #[test]
    fn verify_rejects_vertex_mismatch() {
        let k5 = complete(5);
        let c4 = cycle(4);
        assert!(matches!(
            verify_root(&c4, &k5, 3),
            Err(SolverError::VertexSetMismatch(_))
        ));
    }

    #[test]
    fn l_sets_on_the_block_square() {
        let square = gadget_square();
        let host = HostIndex::new(&square);
        let mut state = RootSearchState::new(&host);
        state
            .assume_closed_neighborhood("1", &["7", "11", "12"], 5)
            .unwrap();
        assert_eq!(state.l_set("1", "2").unwrap(), vec!["12"]);
        assert_eq!(state.l_set("1", "3").unwrap(), vec!["12"]);
        assert_eq!(state.l_set("1", "5").unwrap(), vec!["11", "7"]);
        assert_eq!(state.l_set("1", "13").unwrap(), vec!["11", "7"]);
        // no commitments at 16: empty set
        assert_eq!(state.l_set("16", "3").unwrap(), Vec::<String>::new());
    }

    #[test]
    fn propagation_rederives_both_blocks() {
        let square = gadget_square();
        let g1_edges = gadget_g1().graph.edges();
        let g2_edges = gadget_g2().graph.edges();
        for (pick, expected) in [(("5", "11"), g1_edges), (("5", "7"), g2_edges)] {
            let host = HostIndex::new(&square);
            let mut state = RootSearchState::new(&host);
            state
                .assume_closed_neighborhood("1", &["7", "11", "12"], 5)
                .unwrap();
            state.commit_edge_in(pick.0, pick.1, 5).unwrap();
            propagate(&mut state, 5).unwrap();
            assert_eq!(state.committed_root_edges(), expected);
            assert!(state.is_fully_decided());
        }
    }

    #[test]
    fn triangle_contradicts_girth_five() {
        // committing two root edges at one vertex already excludes the
        // closing edge; asking for it anyway is a contradiction
        let k3 = complete(3);
        let host = HostIndex::new(&k3);
        let mut state = RootSearchState::new(&host);
        state.commit_edge_in("v0", "v1", 5).unwrap();
        state.commit_edge_in("v1", "v2", 5).unwrap();
        assert_eq!(state.decision("v0", "v2").unwrap(), EdgeDecision::Out);
        let err = state.commit_edge_in("v0", "v2", 5).unwrap_err();
        assert!(!err.reason.is_empty());
    }

    #[test]
    fn k3_roots_at_girth_three() {
        let k3 = complete(3);
        let outcome = find_square_roots(&k3, 3, SearchOptions::default()).unwrap();
        let brute = brute_force_roots(&k3, 3).unwrap();
        let mine: Vec<_> = outcome.roots.iter().map(Graph::edges).collect();
        let theirs: Vec<_> = brute.iter().map(Graph::edges).collect();
        assert_eq!(mine, theirs);
        // K3 itself and the three labelings of the 2-path
        assert_eq!(outcome.roots.len(), 4);
        assert!(outcome.complete);
    }

    #[test]
    fn k5_roots_include_cycle_and_star() {
        let k5 = complete(5);
        let outcome = find_square_roots(&k5, 3, SearchOptions::default()).unwrap();
        assert!(outcome.complete);
        let edge_sets: BTreeSet<Vec<(String, String)>> =
            outcome.roots.iter().map(Graph::edges).collect();
        assert!(edge_sets.contains(&cycle(5).edges()));
        assert!(edge_sets.contains(&star(5).edges()));
        assert!(edge_sets.contains(&k5.edges()));
        let brute = brute_force_roots(&k5, 3).unwrap();
        let theirs: BTreeSet<Vec<(String, String)>> = brute.iter().map(Graph::edges).collect();
        assert_eq!(edge_sets, theirs);
    }

    #[test]
    fn block_square_has_exactly_two_root_classes() {
        let outcome = find_square_roots(
            &gadget_square(),
            5,
            SearchOptions {
                up_to_iso: true,
                ..Default::default()
            },
        )
        .unwrap();
        assert!(outcome.complete);
        assert_eq!(outcome.roots.len(), 2);
        let forms: BTreeSet<_> = outcome.roots.iter().map(canonical_form).collect();
        let expected: BTreeSet<_> = [gadget_g1().graph, gadget_g2().graph]
            .iter()
            .map(canonical_form)
            .collect();
        assert_eq!(forms, expected);
    }

    #[test]
    fn labeled_block_square_roots_are_the_two_tables() {
        let outcome = find_square_roots(&gadget_square(), 5, SearchOptions::default()).unwrap();
        assert_eq!(outcome.roots.len(), 2);
        let sets: Vec<_> = outcome.roots.iter().map(Graph::edges).collect();
        assert!(sets.contains(&gadget_g1().graph.edges()));
        assert!(sets.contains(&gadget_g2().graph.edges()));
    }

    #[test]
    fn disconnected_host_rejected() {
        let g = Graph::new(["a", "b", "c"], [("a", "b")]).unwrap();
        assert!(matches!(
            find_square_roots(&g, 3, SearchOptions::default()),
            Err(SolverError::Disconnected)
        ));
    }

    #[test]
    fn girth_bound_validation() {
        let g = complete(3);
        assert!(matches!(
            find_square_roots(&g, 2, SearchOptions::default()),
            Err(SolverError::BadGirthBound(2))
        ));
        assert!(matches!(
            brute_force_roots(&g, 1),
            Err(SolverError::BadGirthBound(1))
        ));
    }

    #[test]
    fn limit_flags_incomplete() {
        let k5 = complete(5);
        let outcome = find_square_roots(
            &k5,
            3,
            SearchOptions {
                limit: Some(2),
                up_to_iso: false,
            },
        )
        .unwrap();
        assert_eq!(outcome.roots.len(), 2);
        assert!(!outcome.complete);
    }

    #[test]
    fn single_edge_root() {
        let k2 = Graph::from_edges([("a", "b")]).unwrap();
        let roots = brute_force_roots(&k2, 3).unwrap();
        assert_eq!(roots.len(), 1);
        assert_eq!(roots[0].edges(), k2.edges());
        let found = find_square_roots(&k2, 3, SearchOptions::default()).unwrap();
        assert_eq!(found.roots.len(), 1);
    }

    #[test]
    fn brute_force_respects_edge_guard() {
        let g = complete(7); // 21 edges
        assert!(matches!(
            brute_force_roots(&g, 3),
            Err(SolverError::TooManyEdges { edges: 21, .. })
        ));
    }

    #[test]
    fn path_host_has_no_large_roots() {
        // a path as host: its only roots are found by brute force; compare
        let p3 = Graph::from_edges([("a", "b"), ("b", "c")]).unwrap();
        let brute = brute_force_roots(&p3, 3).unwrap();
        let found = find_square_roots(&p3, 3, SearchOptions::default()).unwrap();
        assert_eq!(
            found.roots.iter().map(Graph::edges).collect::<Vec<_>>(),
            brute.iter().map(Graph::edges).collect::<Vec<_>>()
        );
    }

    #[test]
    fn forest_roots_via_large_bound() {
        // K_{1,4} is the unique girth-infinite root of K5 up to labels here
        let k5 = complete(5);
        let outcome = find_square_roots(&k5, usize::MAX - 2, SearchOptions::default()).unwrap();
        assert!(outcome.complete);
        assert_eq!(outcome.roots.len(), 5); // one star per center
        for r in &outcome.roots {
            assert_eq!(r.girth(), Girth::Acyclic);
        }
    }

    #[test]
    fn clique_cover_roundtrip_c5_k5() {
        let c5 = cycle(5);
        let k5 = c5.square();
        let cover = root_to_clique_cover(&c5);
        check_clique_cover(&k5, &cover).unwrap();
        assert_eq!(cover_to_root(&k5, &cover).unwrap(), c5);
        for clique in cover.cliques.values() {
            assert_eq!(clique.len(), 3);
        }
    }

    #[test]
    fn clique_cover_of_block_root() {
        let g1 = gadget_g1().graph;
        let square = gadget_square();
        let cover = root_to_clique_cover(&g1);
        check_clique_cover(&square, &cover).unwrap();
        let expected: BTreeSet<String> =
            ["1", "7", "11", "12"].iter().map(|s| s.to_string()).collect();
        assert_eq!(cover.cliques["1"], expected);
    }

    #[test]
    fn cover_violations_are_named() {
        let k3 = complete(3);
        let mut cover = root_to_clique_cover(&k3);
        // break symmetry: v0's clique keeps v1, but v1's clique drops v0
        cover.cliques.get_mut("v1").unwrap().remove("v0");
        assert!(matches!(
            check_clique_cover(&k3, &cover),
            Err(CoverViolation::Asymmetric { .. })
        ));
        let p3 = Graph::from_edges([("a", "b"), ("b", "c")]).unwrap();
        let bad = CliqueCover {
            cliques: p3
                .vertices()
                .map(|v| (v.to_string(), BTreeSet::from([v.to_string()])))
                .collect(),
        };
        assert!(matches!(
            check_clique_cover(&p3, &bad),
            Err(CoverViolation::EdgeUncovered { .. })
        ));
    }
}

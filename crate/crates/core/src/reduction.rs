//! The clause/copy encoding of a positive minimum-intersecting 1-in-3
//! instance into a single graph whose girth-5 square roots are exactly the
//! satisfying assignments, plus the converters between assignments and
//! roots.
//!
//! Each variable occurrence becomes one 16-vertex block carrying the common
//! block square; each clause adds four hub vertices completing a 10-clique
//! in the square; each linked pair of occurrences of one variable adds two
//! vertices that close a 6-cycle through the blocks' 5/13 vertices in any
//! root.

use std::collections::{BTreeMap, BTreeSet};

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::canon::{canonical_form, CanonicalForm};
use crate::gadgets::{gadget, GadgetKind, G1_EDGES, G2_EDGES};
use crate::graph::{Girth, Graph};
use crate::sat::{Assignment, SatError, SatInstance};

/// Position of a variable inside its clause. The clause wiring is
/// slot-asymmetric, so the literal order of the clause file is significant.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Slot {
    X,
    Y,
    Z,
}

impl Slot {
    pub const ALL: [Slot; 3] = [Slot::X, Slot::Y, Slot::Z];

    pub fn index(self) -> usize {
        match self {
            Slot::X => 0,
            Slot::Y => 1,
            Slot::Z => 2,
        }
    }

    pub fn as_str(self) -> &'static str {
        match self {
            Slot::X => "x",
            Slot::Y => "y",
            Slot::Z => "z",
        }
    }
}

impl std::fmt::Display for Slot {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.as_str())
    }
}

/// Structured role of one vertex of the reduction graph.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "snake_case")]
pub enum Role {
    /// Local vertex 1..=16 of the block for `var`'s occurrence in `clause`.
    Block {
        clause: usize,
        slot: Slot,
        var: String,
        local: u8,
    },
    /// Clause hub vertex `y<index>` of `clause`, index 1..=4.
    ClauseY { clause: usize, index: u8 },
    /// First linking vertex of the copy pair (`lo`, `hi`) of `var`.
    LinkV { var: String, lo: usize, hi: usize },
    /// Second linking vertex of the copy pair (`lo`, `hi`) of `var`.
    LinkW { var: String, lo: usize, hi: usize },
}

/// How copies of one variable are linked pairwise.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum LinkingPolicy {
    /// Link consecutive copies (clause-index order). Default.
    Chain,
    /// Link every pair of copies.
    AllPairs,
}

impl std::str::FromStr for LinkingPolicy {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "chain" => Ok(LinkingPolicy::Chain),
            "all-pairs" | "all_pairs" => Ok(LinkingPolicy::AllPairs),
            other => Err(format!("unknown linking policy {other:?}")),
        }
    }
}

impl std::fmt::Display for LinkingPolicy {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            LinkingPolicy::Chain => write!(f, "chain"),
            LinkingPolicy::AllPairs => write!(f, "all-pairs"),
        }
    }
}

/// A graph whose every vertex carries exactly one structured role.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LabeledGraph {
    pub graph: Graph,
    pub labels: BTreeMap<String, Role>,
}

impl LabeledGraph {
    /// Checks that every vertex has exactly one role and the per-role vertex
    /// counts are consistent (16 locals per block, 4 hubs per clause, 2
    /// vertices per linked pair).
    pub fn validate(&self) -> Result<(), ReductionError> {
        for v in self.graph.vertices() {
            if !self.labels.contains_key(v) {
                return Err(ReductionError::BadLabels(format!("vertex {v:?} unlabeled")));
            }
        }
        for v in self.labels.keys() {
            if !self.graph.contains_vertex(v) {
                return Err(ReductionError::BadLabels(format!(
                    "label for absent vertex {v:?}"
                )));
            }
        }
        let mut block_locals: BTreeMap<(usize, Slot), BTreeSet<u8>> = BTreeMap::new();
        let mut clause_hubs: BTreeMap<usize, BTreeSet<u8>> = BTreeMap::new();
        let mut link_pairs: BTreeMap<(String, usize, usize), BTreeSet<bool>> = BTreeMap::new();
        for role in self.labels.values() {
            match role {
                Role::Block {
                    clause,
                    slot,
                    local,
                    ..
                } => {
                    block_locals.entry((*clause, *slot)).or_default().insert(*local);
                }
                Role::ClauseY { clause, index } => {
                    clause_hubs.entry(*clause).or_default().insert(*index);
                }
                Role::LinkV { var, lo, hi } => {
                    link_pairs
                        .entry((var.clone(), *lo, *hi))
                        .or_default()
                        .insert(false);
                }
                Role::LinkW { var, lo, hi } => {
                    link_pairs
                        .entry((var.clone(), *lo, *hi))
                        .or_default()
                        .insert(true);
                }
            }
        }
        for ((clause, slot), locals) in &block_locals {
            if locals.len() != 16 {
                return Err(ReductionError::BadLabels(format!(
                    "block c{clause}/{slot} has {} locals, expected 16",
                    locals.len()
                )));
            }
        }
        for (clause, hubs) in &clause_hubs {
            if hubs.len() != 4 {
                return Err(ReductionError::BadLabels(format!(
                    "clause {clause} has {} hub vertices, expected 4",
                    hubs.len()
                )));
            }
        }
        for ((var, lo, hi), kinds) in &link_pairs {
            if kinds.len() != 2 {
                return Err(ReductionError::BadLabels(format!(
                    "linked pair {var}/{lo}-{hi} is missing one of its two vertices"
                )));
            }
        }
        Ok(())
    }
}

#[derive(Debug, Error)]
pub enum ReductionError {
    #[error("instance is not minimum-intersecting: {0}")]
    NotMinIntersecting(SatError),
    #[error("assignment does not satisfy the instance: {0}")]
    NotSatisfying(SatError),
    #[error("vertex sets differ: {0}")]
    VertexMismatch(String),
    #[error(
        "candidate square differs from the reduction graph: {missing} edges missing, {extra} extra; first discrepancy {witness:?}"
    )]
    NotASquare {
        missing: usize,
        extra: usize,
        witness: (String, String),
    },
    #[error("root candidate has girth {found}, need at least 5")]
    GirthTooSmall { found: Girth },
    #[error("block c{clause}/{slot} is isomorphic to neither block kind; this contradicts the uniqueness of block roots")]
    BlockNotGadget { clause: usize, slot: Slot },
    #[error("copies of {var:?} disagree: clause {first_clause} decodes {first}, clause {second_clause} decodes {second}; this contradicts copy propagation")]
    CopiesDisagree {
        var: String,
        first_clause: usize,
        first: bool,
        second_clause: usize,
        second: bool,
    },
    #[error("decoded truth map violates exactly-one: {0}")]
    DecodedAssignmentInvalid(SatError),
    #[error("labels are malformed: {0}")]
    BadLabels(String),
}

// ---- vertex naming ---------------------------------------------------------

fn block_vertex(clause: usize, slot: Slot, local: u8) -> String {
    format!("c{clause}.{slot}.{local:02}")
}

fn clause_hub(clause: usize, index: u8) -> String {
    format!("c{clause}.y{index}")
}

fn link_vertex(first: bool, var: &str, lo: usize, hi: usize) -> String {
    let tag = if first { "v" } else { "w" };
    format!("{tag}.{var}.c{lo}.c{hi}")
}

/// Locals adjacent to 5 beyond 13 in one kind and to 13 in the other; the
/// clause wiring quotes these two trios throughout.
const NEAR_5_OR_13_A: [u8; 2] = [11, 15];
const NEAR_5_OR_13_B: [u8; 3] = [6, 7, 16];

// ---- occurrence bookkeeping -------------------------------------------------

/// For each variable, its occurrences as (1-based clause index, slot),
/// sorted by clause index.
pub fn occurrences(instance: &SatInstance) -> BTreeMap<String, Vec<(usize, Slot)>> {
    let mut map: BTreeMap<String, Vec<(usize, Slot)>> = BTreeMap::new();
    for (ci, clause) in instance.clauses.iter().enumerate() {
        for (si, var) in clause.vars().iter().enumerate() {
            map.entry(var.clone())
                .or_default()
                .push((ci + 1, Slot::ALL[si]));
        }
    }
    map
}

/// The linked copy pairs per variable under a policy, as (lo, hi) 1-based
/// clause-index pairs. Variables with a single occurrence get none.
pub fn linked_pairs(
    instance: &SatInstance,
    policy: LinkingPolicy,
) -> BTreeMap<String, Vec<(usize, usize)>> {
    let mut map = BTreeMap::new();
    for (var, occs) in occurrences(instance) {
        let clauses: Vec<usize> = occs.iter().map(|&(c, _)| c).collect();
        let mut pairs = Vec::new();
        match policy {
            LinkingPolicy::Chain => {
                for w in clauses.windows(2) {
                    pairs.push((w[0], w[1]));
                }
            }
            LinkingPolicy::AllPairs => {
                for i in 0..clauses.len() {
                    for j in i + 1..clauses.len() {
                        pairs.push((clauses[i], clauses[j]));
                    }
                }
            }
        }
        if !pairs.is_empty() {
            map.insert(var, pairs);
        }
    }
    map
}

// ---- build summary ----------------------------------------------------------

/// Vertex and edge class counts of one reduction build.
#[derive(Debug, Clone, Serialize)]
pub struct BuildSummary {
    pub policy: LinkingPolicy,
    pub clause_count: usize,
    pub block_count: usize,
    pub linked_pair_count: usize,
    pub vertex_count: usize,
    pub edges_block: usize,
    pub edges_clause_clique: usize,
    pub edges_clause_reach: usize,
    pub edges_link: usize,
    pub edges_link_square: usize,
    pub edges_intra_clause: usize,
    pub edges_pair_pair: usize,
    pub edge_count: usize,
    /// Cross-block square edges between linked copies (13-13 and 5-5),
    /// required for any root's square to close but absent from the
    /// class-by-class listing.
    pub derived_square_edges: Vec<(String, String)>,
}

impl std::fmt::Display for BuildSummary {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        writeln!(
            f,
            "policy={} clauses={} blocks={} linked-pairs={}",
            self.policy, self.clause_count, self.block_count, self.linked_pair_count
        )?;
        writeln!(
            f,
            "vertices={} ({} block + {} hub + {} link)",
            self.vertex_count,
            16 * self.block_count,
            4 * self.clause_count,
            2 * self.linked_pair_count
        )?;
        writeln!(
            f,
            "edges={} (block={} clause-clique={} clause-reach={} link={} link-square={} intra-clause={} pair-pair={})",
            self.edge_count,
            self.edges_block,
            self.edges_clause_clique,
            self.edges_clause_reach,
            self.edges_link,
            self.edges_link_square,
            self.edges_intra_clause,
            self.edges_pair_pair
        )?;
        for (u, v) in &self.derived_square_edges {
            writeln!(f, "derived-square-edge {u} -- {v}")?;
        }
        Ok(())
    }
}

/// A reduction graph together with its build summary.
#[derive(Debug, Clone)]
pub struct ReductionBuild {
    pub labeled: LabeledGraph,
    pub summary: BuildSummary,
}

// ---- the builder ------------------------------------------------------------

struct EdgeAccumulator {
    edges: BTreeSet<(String, String)>,
}

impl EdgeAccumulator {
    fn new() -> Self {
        EdgeAccumulator {
            edges: BTreeSet::new(),
        }
    }

    /// Inserts an edge that no other class may have produced.
    fn add_new(&mut self, u: String, v: String) {
        let key = if u <= v { (u, v) } else { (v, u) };
        assert!(
            self.edges.insert(key.clone()),
            "edge classes overlap at {key:?}"
        );
    }

    fn len(&self) -> usize {
        self.edges.len()
    }
}

/// Builds the reduction graph of a minimum-intersecting instance.
pub fn build_reduction_graph(
    instance: &SatInstance,
    policy: LinkingPolicy,
) -> Result<ReductionBuild, ReductionError> {
    instance
        .validate_min_intersecting()
        .map_err(ReductionError::NotMinIntersecting)?;

    let square_edges = gadget(GadgetKind::G1).graph.square().edges();
    let pairs = linked_pairs(instance, policy);

    let mut labels: BTreeMap<String, Role> = BTreeMap::new();
    let mut acc = EdgeAccumulator::new();

    // block vertices and the block square edges
    for (ci, clause) in instance.clauses.iter().enumerate() {
        let ci = ci + 1;
        for (si, var) in clause.vars().iter().enumerate() {
            let slot = Slot::ALL[si];
            for local in 1..=16u8 {
                labels.insert(
                    block_vertex(ci, slot, local),
                    Role::Block {
                        clause: ci,
                        slot,
                        var: var.clone(),
                        local,
                    },
                );
            }
            for (u, v) in &square_edges {
                let lu: u8 = u.parse().expect("block square uses numeric locals");
                let lv: u8 = v.parse().expect("block square uses numeric locals");
                acc.add_new(block_vertex(ci, slot, lu), block_vertex(ci, slot, lv));
            }
        }
    }
    let edges_block = acc.len();

    // clause hubs: the 10-clique over {5,13} of the three blocks plus the
    // hubs themselves, minus the three within-block 5-13 edges already laid
    // down with the block squares
    for ci in 1..=instance.clauses.len() {
        for index in 1..=4u8 {
            labels.insert(
                clause_hub(ci, index),
                Role::ClauseY { clause: ci, index },
            );
        }
        let mut ten: Vec<String> = Vec::with_capacity(10);
        for slot in Slot::ALL {
            ten.push(block_vertex(ci, slot, 5));
            ten.push(block_vertex(ci, slot, 13));
        }
        for index in 1..=4u8 {
            ten.push(clause_hub(ci, index));
        }
        for i in 0..ten.len() {
            for j in i + 1..ten.len() {
                let same_block = i / 2 == j / 2 && i < 6 && j < 6;
                if !same_block {
                    acc.add_new(ten[i].clone(), ten[j].clone());
                }
            }
        }
    }
    let edges_clause_clique = acc.len() - edges_block;

    // clause hubs reach the block interiors: 11/15 on one side, 6/7/16 on
    // the other, hub by hub
    let reach = |which_a: [bool; 3]| -> Vec<(Slot, &'static [u8])> {
        Slot::ALL
            .iter()
            .zip(which_a)
            .map(|(&s, a)| {
                (
                    s,
                    if a {
                        &NEAR_5_OR_13_A[..]
                    } else {
                        &NEAR_5_OR_13_B[..]
                    },
                )
            })
            .collect()
    };
    // hub 4's middle entry is 11/15: the root-side case tables pin each
    // 5/13 vertex to exactly two hubs, which fixes all four rows
    let hub_reach: [Vec<(Slot, &[u8])>; 4] = [
        reach([true, false, true]),
        reach([false, true, true]),
        reach([false, false, false]),
        reach([true, true, false]),
    ];
    for ci in 1..=instance.clauses.len() {
        for (h, targets) in hub_reach.iter().enumerate() {
            let hub = clause_hub(ci, h as u8 + 1);
            for (slot, locals) in targets {
                for &local in *locals {
                    acc.add_new(hub.clone(), block_vertex(ci, *slot, local));
                }
            }
        }
    }
    let edges_clause_reach = acc.len() - edges_block - edges_clause_clique;

    // linked pairs: the two link vertices see {5,13} of both copies, v also
    // the 11/15 interiors, w also the 6/7/16 interiors
    let occ = occurrences(instance);
    let slot_of = |var: &str, clause: usize| -> Slot {
        occ[var]
            .iter()
            .find(|&&(c, _)| c == clause)
            .map(|&(_, s)| s)
            .expect("pair references an occurrence")
    };
    let mut derived_square_edges = Vec::new();
    let mut edges_link = 0;
    let mut edges_link_square = 0;
    for (var, var_pairs) in &pairs {
        for &(lo, hi) in var_pairs {
            let v_name = link_vertex(true, var, lo, hi);
            let w_name = link_vertex(false, var, lo, hi);
            labels.insert(
                v_name.clone(),
                Role::LinkV {
                    var: var.clone(),
                    lo,
                    hi,
                },
            );
            labels.insert(
                w_name.clone(),
                Role::LinkW {
                    var: var.clone(),
                    lo,
                    hi,
                },
            );
            let before = acc.len();
            for &clause in &[lo, hi] {
                let slot = slot_of(var, clause);
                for local in [5u8, 13] {
                    acc.add_new(v_name.clone(), block_vertex(clause, slot, local));
                    acc.add_new(w_name.clone(), block_vertex(clause, slot, local));
                }
                for local in NEAR_5_OR_13_A {
                    acc.add_new(v_name.clone(), block_vertex(clause, slot, local));
                }
                for local in NEAR_5_OR_13_B {
                    acc.add_new(w_name.clone(), block_vertex(clause, slot, local));
                }
            }
            edges_link += acc.len() - before;

            let before = acc.len();
            let (slot_lo, slot_hi) = (slot_of(var, lo), slot_of(var, hi));
            for local in [5u8, 13] {
                let a = block_vertex(lo, slot_lo, local);
                let b = block_vertex(hi, slot_hi, local);
                derived_square_edges.push((a.clone(), b.clone()));
                acc.add_new(a, b);
            }
            edges_link_square += acc.len() - before;
        }
    }

    // clause hubs reach the link vertices of pairs containing their clause
    let before_intra = acc.len();
    // per slot: which of (v, w) each hub index 1..=4 attaches to
    let hub_uses_v = |slot: Slot, hub: u8| -> bool {
        match slot {
            Slot::X => hub == 1 || hub == 4,
            Slot::Y => hub == 2 || hub == 4,
            Slot::Z => hub == 1 || hub == 2,
        }
    };
    for (ci, clause) in instance.clauses.iter().enumerate() {
        let ci = ci + 1;
        for (si, var) in clause.vars().iter().enumerate() {
            let slot = Slot::ALL[si];
            let Some(var_pairs) = pairs.get(var) else {
                continue;
            };
            for &(lo, hi) in var_pairs.iter().filter(|&&(lo, hi)| lo == ci || hi == ci) {
                for hub in 1..=4u8 {
                    let first = hub_uses_v(slot, hub);
                    acc.add_new(clause_hub(ci, hub), link_vertex(first, var, lo, hi));
                }
            }
        }
    }
    let edges_intra_clause = acc.len() - before_intra;

    // link vertices of one variable see each other across pairs: under the
    // chain policy only pairs sharing a copy, under all-pairs every pair
    let before_pp = acc.len();
    for (var, var_pairs) in &pairs {
        for i in 0..var_pairs.len() {
            for j in i + 1..var_pairs.len() {
                let (p, q) = (var_pairs[i], var_pairs[j]);
                let share_copy = p.0 == q.0 || p.0 == q.1 || p.1 == q.0 || p.1 == q.1;
                if policy == LinkingPolicy::AllPairs || share_copy {
                    acc.add_new(
                        link_vertex(true, var, p.0, p.1),
                        link_vertex(true, var, q.0, q.1),
                    );
                    acc.add_new(
                        link_vertex(false, var, p.0, p.1),
                        link_vertex(false, var, q.0, q.1),
                    );
                }
            }
        }
    }
    let edges_pair_pair = acc.len() - before_pp;

    let graph = Graph::new(labels.keys().cloned(), acc.edges.iter().cloned())
        .expect("reduction edges are well-formed");
    let linked_pair_count: usize = pairs.values().map(Vec::len).sum();
    let summary = BuildSummary {
        policy,
        clause_count: instance.clauses.len(),
        block_count: 3 * instance.clauses.len(),
        linked_pair_count,
        vertex_count: graph.vertex_count(),
        edges_block,
        edges_clause_clique,
        edges_clause_reach,
        edges_link,
        edges_link_square,
        edges_intra_clause,
        edges_pair_pair,
        edge_count: graph.edge_count(),
        derived_square_edges,
    };
    assert_eq!(
        summary.vertex_count,
        16 * summary.block_count + 4 * summary.clause_count + 2 * summary.linked_pair_count,
        "vertex count must match the class formula"
    );
    let labeled = LabeledGraph { graph, labels };
    labeled.validate()?;
    Ok(ReductionBuild { labeled, summary })
}

// ---- assignment -> root ------------------------------------------------------

fn gadget_edges(kind: GadgetKind) -> &'static [(u8, u8); 24] {
    match kind {
        GadgetKind::G1 => &G1_EDGES,
        GadgetKind::G2 => &G2_EDGES,
    }
}

/// Lemma-style clause wiring: which of (5, 13) each hub touches per slot,
/// as a function of which slot holds the one true variable.
fn hub_block_locals(true_slot: Slot, hub: u8) -> [u8; 3] {
    // rows: hub 1..=4; entries: local at slot x, y, z
    let table: [[u8; 3]; 4] = match true_slot {
        Slot::X => [[13, 13, 5], [5, 5, 5], [5, 13, 13], [13, 5, 13]],
        Slot::Y => [[5, 5, 5], [13, 13, 5], [13, 5, 13], [5, 13, 13]],
        Slot::Z => [[5, 13, 13], [13, 5, 13], [13, 13, 5], [5, 5, 5]],
    };
    table[hub as usize - 1]
}

/// Builds the girth-5 root corresponding to a satisfying assignment: TRUE
/// blocks carry the G2 edge table, FALSE blocks G1, links and clause hubs
/// are wired by truth value.
pub fn assignment_to_root(
    instance: &SatInstance,
    assignment: &Assignment,
    policy: LinkingPolicy,
) -> Result<LabeledGraph, ReductionError> {
    instance
        .validate_min_intersecting()
        .map_err(ReductionError::NotMinIntersecting)?;
    assignment
        .satisfies(instance)
        .map_err(ReductionError::NotSatisfying)?;

    let build = build_reduction_graph(instance, policy)?;
    let labels = build.labeled.labels.clone();
    let mut edges: Vec<(String, String)> = Vec::new();

    // blocks
    for (ci, clause) in instance.clauses.iter().enumerate() {
        let ci = ci + 1;
        for (si, var) in clause.vars().iter().enumerate() {
            let slot = Slot::ALL[si];
            let kind = GadgetKind::from_truth(assignment.get(var).expect("assignment is total"));
            for &(u, v) in gadget_edges(kind) {
                edges.push((block_vertex(ci, slot, u), block_vertex(ci, slot, v)));
            }
        }
    }

    // links: TRUE pairs put v on the 13s and w on the 5s, FALSE swaps
    let occ = occurrences(instance);
    let slot_of = |var: &str, clause: usize| -> Slot {
        occ[var]
            .iter()
            .find(|&&(c, _)| c == clause)
            .map(|&(_, s)| s)
            .expect("pair references an occurrence")
    };
    for (var, var_pairs) in linked_pairs(instance, policy) {
        let value = assignment.get(&var).expect("assignment is total");
        let (v_local, w_local) = if value { (13u8, 5u8) } else { (5u8, 13u8) };
        for (lo, hi) in var_pairs {
            for clause in [lo, hi] {
                let slot = slot_of(&var, clause);
                edges.push((
                    link_vertex(true, &var, lo, hi),
                    block_vertex(clause, slot, v_local),
                ));
                edges.push((
                    link_vertex(false, &var, lo, hi),
                    block_vertex(clause, slot, w_local),
                ));
            }
        }
    }

    // clause hubs per the true slot
    for (ci, clause) in instance.clauses.iter().enumerate() {
        let ci = ci + 1;
        let true_slot = Slot::ALL[clause
            .vars()
            .iter()
            .position(|v| assignment.get(v) == Some(true))
            .expect("satisfying assignment has a true variable per clause")];
        for hub in 1..=4u8 {
            let locals = hub_block_locals(true_slot, hub);
            for (slot, local) in Slot::ALL.into_iter().zip(locals) {
                edges.push((clause_hub(ci, hub), block_vertex(ci, slot, local)));
            }
        }
    }

    let graph = Graph::new(labels.keys().cloned(), edges)
        .expect("root edges are well-formed");
    let root = LabeledGraph { graph, labels };

    // construction invariants: girth exactly five, every clause's ten-vertex
    // subgraph 3-regular of girth five
    assert_eq!(root.graph.girth(), Girth::Finite(5), "root girth must be 5");
    for ci in 1..=instance.clauses.len() {
        let ten = clause_ten_vertices(ci);
        let sub = root
            .graph
            .induced_subgraph(ten.iter().map(String::as_str))
            .expect("clause vertices exist");
        assert_eq!(sub.vertex_count(), 10);
        assert!(
            sub.vertices().all(|v| sub.degree(v).unwrap() == 3),
            "clause {ci} subgraph must be 3-regular"
        );
        assert_eq!(sub.girth(), Girth::Finite(5));
    }
    Ok(root)
}

/// The ten clause vertices of clause `ci`: hubs plus 5/13 of each block.
pub fn clause_ten_vertices(ci: usize) -> Vec<String> {
    let mut ten = Vec::with_capacity(10);
    for slot in Slot::ALL {
        ten.push(block_vertex(ci, slot, 5));
        ten.push(block_vertex(ci, slot, 13));
    }
    for index in 1..=4u8 {
        ten.push(clause_hub(ci, index));
    }
    ten
}

// ---- root -> assignment ------------------------------------------------------

/// Reads a satisfying assignment back off a girth-5 root of the reduction
/// graph: TRUE exactly when a block induces the G2 kind.
pub fn root_to_assignment(
    reduction: &LabeledGraph,
    root: &Graph,
) -> Result<Assignment, ReductionError> {
    let mine: BTreeSet<&str> = reduction.graph.vertices().collect();
    let theirs: BTreeSet<&str> = root.vertices().collect();
    if mine != theirs {
        return Err(ReductionError::VertexMismatch(format!(
            "{} vs {} vertices",
            mine.len(),
            theirs.len()
        )));
    }
    let square = root.square();
    if square != reduction.graph {
        let (extra, missing) = square.edge_difference(&reduction.graph);
        let witness = extra
            .iter()
            .chain(missing.iter())
            .next()
            .cloned()
            .unwrap_or_default();
        return Err(ReductionError::NotASquare {
            missing: missing.len(),
            extra: extra.len(),
            witness,
        });
    }
    let girth = root.girth();
    if !girth.at_least(5) {
        return Err(ReductionError::GirthTooSmall { found: girth });
    }

    // block vertex names per (clause, slot), plus the variable each carries
    let mut blocks: BTreeMap<(usize, Slot), (String, BTreeMap<u8, String>)> = BTreeMap::new();
    for (name, role) in &reduction.labels {
        if let Role::Block {
            clause,
            slot,
            var,
            local,
        } = role
        {
            let entry = blocks
                .entry((*clause, *slot))
                .or_insert_with(|| (var.clone(), BTreeMap::new()));
            entry.1.insert(*local, name.clone());
        }
    }

    let g1_form = canonical_form(&gadget(GadgetKind::G1).graph);
    let g2_form = canonical_form(&gadget(GadgetKind::G2).graph);

    let mut truth: BTreeMap<String, (bool, usize)> = BTreeMap::new();
    for ((clause, slot), (var, locals)) in &blocks {
        let induced = root
            .induced_subgraph(locals.values().map(String::as_str))
            .expect("block vertices exist");
        let form = canonical_form(&induced);
        let value = if form == g2_form {
            true
        } else if form == g1_form {
            false
        } else {
            return Err(ReductionError::BlockNotGadget {
                clause: *clause,
                slot: *slot,
            });
        };
        match truth.get(var) {
            None => {
                truth.insert(var.clone(), (value, *clause));
            }
            Some(&(prior, prior_clause)) => {
                if prior != value {
                    return Err(ReductionError::CopiesDisagree {
                        var: var.clone(),
                        first_clause: prior_clause,
                        first: prior,
                        second_clause: *clause,
                        second: value,
                    });
                }
            }
        }
    }

    let assignment = Assignment {
        truth: truth.into_iter().map(|(v, (t, _))| (v, t)).collect(),
    };
    let instance = instance_from_labels(reduction)?;
    assignment
        .satisfies(&instance)
        .map_err(ReductionError::DecodedAssignmentInvalid)?;
    Ok(assignment)
}

/// Reconstructs the clause list of a reduction graph from its block labels.
pub fn instance_from_labels(reduction: &LabeledGraph) -> Result<SatInstance, ReductionError> {
    let mut clause_slots: BTreeMap<usize, BTreeMap<Slot, String>> = BTreeMap::new();
    for role in reduction.labels.values() {
        if let Role::Block {
            clause, slot, var, ..
        } = role
        {
            if let Some(prev) = clause_slots
                .entry(*clause)
                .or_default()
                .insert(*slot, var.clone())
            {
                if &prev != var {
                    return Err(ReductionError::BadLabels(format!(
                        "clause {clause} slot {slot} carries two variables"
                    )));
                }
            }
        }
    }
    let mut clauses = Vec::new();
    for (clause, slots) in clause_slots {
        let get = |s: Slot| {
            slots
                .get(&s)
                .cloned()
                .ok_or_else(|| ReductionError::BadLabels(format!("clause {clause} missing slot {s}")))
        };
        let vars = [get(Slot::X)?, get(Slot::Y)?, get(Slot::Z)?];
        clauses.push(
            crate::sat::Clause::new(vars)
                .map_err(|e| ReductionError::BadLabels(e.to_string()))?,
        );
    }
    Ok(SatInstance::new(clauses))
}

// ---- the two-copy gadget in isolation ----------------------------------------

/// The two-block copy gadget root for one kind: two blocks of `kind` joined
/// through one v/w link pair, forming a 6-cycle through the 5/13 vertices.
pub fn copy_pair_root(kind: GadgetKind) -> LabeledGraph {
    let var = "x";
    let (lo, hi) = (1usize, 2usize);
    let mut labels = BTreeMap::new();
    let mut edges = Vec::new();
    for clause in [lo, hi] {
        for local in 1..=16u8 {
            labels.insert(
                block_vertex(clause, Slot::X, local),
                Role::Block {
                    clause,
                    slot: Slot::X,
                    var: var.into(),
                    local,
                },
            );
        }
        for &(u, v) in gadget_edges(kind) {
            edges.push((
                block_vertex(clause, Slot::X, u),
                block_vertex(clause, Slot::X, v),
            ));
        }
    }
    labels.insert(
        link_vertex(true, var, lo, hi),
        Role::LinkV {
            var: var.into(),
            lo,
            hi,
        },
    );
    labels.insert(
        link_vertex(false, var, lo, hi),
        Role::LinkW {
            var: var.into(),
            lo,
            hi,
        },
    );
    let (v_local, w_local) = if kind.truth() { (13u8, 5u8) } else { (5u8, 13u8) };
    for clause in [lo, hi] {
        edges.push((
            link_vertex(true, var, lo, hi),
            block_vertex(clause, Slot::X, v_local),
        ));
        edges.push((
            link_vertex(false, var, lo, hi),
            block_vertex(clause, Slot::X, w_local),
        ));
    }
    let graph = Graph::new(labels.keys().cloned(), edges).expect("copy pair edges well-formed");
    LabeledGraph { graph, labels }
}

/// The common square of the two copy-pair roots.
pub fn copy_pair_square() -> Graph {
    let a = copy_pair_root(GadgetKind::G1).graph.square();
    let b = copy_pair_root(GadgetKind::G2).graph.square();
    assert_eq!(a, b, "copy-pair roots must square identically");
    a
}

/// Classifies each block of a root graph against the two block kinds using
/// the labels of `reduction`; `Ok` maps (clause, slot) to the decoded kind.
pub fn classify_blocks(
    reduction: &LabeledGraph,
    root: &Graph,
) -> Result<BTreeMap<(usize, Slot), GadgetKind>, ReductionError> {
    let mut block_names: BTreeMap<(usize, Slot), Vec<String>> = BTreeMap::new();
    for (name, role) in &reduction.labels {
        if let Role::Block { clause, slot, .. } = role {
            block_names
                .entry((*clause, *slot))
                .or_default()
                .push(name.clone());
        }
    }
    let g1_form = canonical_form(&gadget(GadgetKind::G1).graph);
    let g2_form = canonical_form(&gadget(GadgetKind::G2).graph);
    let classify = |form: &CanonicalForm, clause: usize, slot: Slot| {
        if *form == g1_form {
            Ok(GadgetKind::G1)
        } else if *form == g2_form {
            Ok(GadgetKind::G2)
        } else {
            Err(ReductionError::BlockNotGadget { clause, slot })
        }
    };
    let mut out = BTreeMap::new();
    for ((clause, slot), names) in block_names {
        let induced = root
            .induced_subgraph(names.iter().map(String::as_str))
            .map_err(|e| ReductionError::VertexMismatch(e.to_string()))?;
        let kind = classify(&canonical_form(&induced), clause, slot)?;
        out.insert((clause, slot), kind);
    }
    Ok(out)
}

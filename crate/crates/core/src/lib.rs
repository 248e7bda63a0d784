//! Graph powers, girth-constrained square-root search, root-ambiguous block
//! families, and a reduction from positive minimum-intersecting 1-in-3 SAT
//! to girth-5 square-root existence.
//!
//! The crate is organized around one [`graph::Graph`] type; every other
//! module builds pure functions on top of it:
//!
//! - [`graph`]: powers, distances, girth, components.
//! - [`cliques`]: maximal-clique enumeration.
//! - [`canon`]: exact canonical labeling and isomorphism.
//! - [`gadgets`]: the fixed 16-vertex blocks with identical squares and the
//!   chain families with many non-isomorphic square roots.
//! - [`sat`]: positive 1-in-3 instances, preprocessing, brute-force solving.
//! - [`reduction`]: the clause/copy encoding into one square graph and the
//!   assignment/root converters.
//! - [`solver`]: exact enumeration of square roots under a girth bound.
//! - [`formats`]: edge-list, JSON, and DOT codecs.

#![forbid(unsafe_code)]

mod bitset;

pub mod canon;
pub mod cliques;
pub mod enumerate;
pub mod formats;
pub mod gadgets;
pub mod graph;
pub mod random;
pub mod reduction;
pub mod sat;
pub mod solver;

pub use canon::{are_isomorphic, canonical_form, isomorphism, CanonicalForm};
pub use cliques::maximal_cliques;
pub use gadgets::{
    chain_family, family_root_count, gadget_g1, gadget_g2, gadget_square, BlockGraph, ChainGraph,
    GadgetKind,
};
pub use graph::{Girth, Graph, GraphError};
pub use sat::{parse_instance, solve_one_in_three, Assignment, SatInstance};
pub use solver::{brute_force_roots, find_square_roots, verify_root, SearchOptions};

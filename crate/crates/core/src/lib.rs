//! Exact solving of the minimum dominating set problem and its two geodesic
//! variants: weakly convex domination and convex domination.
//!
//! The crate is `no_std` (it needs `alloc`) and contains only the algorithmic
//! pieces:
//!
//! * [`graph`]: validated simple connected graphs and BFS distance matrices.
//! * [`domination`]: the set predicates and a brute-force minimum oracle.
//! * [`model`]: the integer linear models (domination, convex with the full
//!   or the neighbourhood-reduced interval constraints, weakly convex).
//! * [`solver`]: clause conversion of those models and an exact MinOnes
//!   branch-and-bound.
//!
//! Parsing, serialization, timing and the command line live in the
//! `convexdom` crate.
#![cfg_attr(not(test), no_std)]

extern crate alloc;

pub mod domination;
pub mod graph;
pub mod model;
mod result;
pub mod solver;

pub use domination::{
    is_convex, is_dominating, is_weakly_convex, oracle_minimum, DominationKind, OracleError,
    VertexSet, VertexSetError, DEFAULT_ORACLE_LIMIT,
};
pub use graph::{all_pairs_distances, DistanceMatrix, Graph, GraphError};
pub use model::{
    build_cvx_full, build_cvx_reduced, build_domination, build_model, build_wcvx, BuildOptions,
    Constraint, ConstraintTag, Formulation, LinearModel, ModelError, Provenance, Sense, Term,
};
pub use result::{SolveResult, SolveStats, SolveStatus};
pub use solver::{clausify, solve, verify_witness, Budget, Clause, ClauseError, ClauseSet, Lit};

//! Optimal proof search for propositional CNF at desk scale.
//!
//! Exact optimal backtracking / DPLL / DPLL-Mono search trees, minimal regular
//! resolution refutations, the formula combinators whose sizes obey exact
//! algebraic laws, and reductions into the optimal-branching-variable,
//! optimal-tree-size and optimal-resolution-pair decision problems.

pub mod cnf;
pub mod combinators;
mod count;
pub mod optimal;
pub mod resolution;
pub mod trees;

pub use cnf::{Clause, Formula, Literal, PartialAssignment, Variable};
pub use count::{parse_count, Count, ProofSize};
pub use optimal::{OracleConfig, OracleError};
pub use trees::{Calculus, SearchTree, TreeDiscipline};

/// Proof size with machine-word counts.
pub type Size = ProofSize<u64>;
/// Proof size with arbitrary-precision counts.
pub type BigSize = ProofSize<num_bigint::BigUint>;

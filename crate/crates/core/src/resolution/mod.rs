//! Regular resolution refutations as DAGs.
//!
//! A proof lists its input leaves and its resolution steps in topological
//! order; the size of a proof is its number of steps. A proof is regular when
//! no root-to-leaf path resolves the same variable twice.

mod search;
mod trace;
mod transforms;

use std::collections::BTreeSet;
use std::fmt;

use thiserror::Error;

use crate::cnf::{Clause, Formula, Literal, Variable};

pub use search::{
    all_minimum_proofs, is_optimal_resolution_pair, min_regular_size, minimum_regular_proof,
    MAX_SEARCH_VARS,
};
pub use trace::{parse_trace, write_trace, TraceError};
pub use transforms::{f_transform, g_transform, push_pivot_to_leaves, reduce_orp};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ResolutionError {
    #[error("clauses {0} and {1} do not clash on {2}")]
    PivotMismatch(Clause, Clause, Variable),
    #[error("no refutation with at most {0} steps; result indeterminate")]
    BudgetExhausted(usize),
    #[error("{0} variables exceed the search limit of {MAX_SEARCH_VARS}")]
    TooManyVariables(usize),
    #[error("clause {0} is not in the formula")]
    NotInFormula(Clause),
    #[error("clauses {0} and {1} do not clash on exactly one variable")]
    NotResolvable(Clause, Clause),
    #[error("precondition violated: {0}")]
    Precondition(String),
    #[error("proof shape: {0}")]
    Shape(String),
}

/// A reference to a proof node.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum NodeRef {
    Leaf(usize),
    Step(usize),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ResolutionStep {
    pub pivot: Variable,
    pub left: NodeRef,
    pub right: NodeRef,
    pub resolvent: Clause,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ResolutionProof {
    pub leaves: Vec<Clause>,
    pub steps: Vec<ResolutionStep>,
    pub root: NodeRef,
}

impl ResolutionProof {
    pub fn size(&self) -> usize {
        self.steps.len()
    }

    /// The clause at `node`. Panics on a dangling reference.
    pub fn clause(&self, node: NodeRef) -> &Clause {
        match node {
            NodeRef::Leaf(i) => &self.leaves[i],
            NodeRef::Step(i) => &self.steps[i].resolvent,
        }
    }

    fn get(&self, node: NodeRef) -> Option<&Clause> {
        match node {
            NodeRef::Leaf(i) => self.leaves.get(i),
            NodeRef::Step(i) => self.steps.get(i).map(|s| &s.resolvent),
        }
    }

    /// Steps that resolve on `var`.
    pub fn steps_on(&self, var: Variable) -> impl Iterator<Item = (usize, &ResolutionStep)> + '_ {
        self.steps.iter().enumerate().filter(move |(_, s)| s.pivot == var)
    }

    /// Whether some step resolves the two leaf clauses `a` and `b` directly.
    pub fn resolves_leaves(&self, a: &Clause, b: &Clause) -> bool {
        self.steps.iter().any(|s| match (s.left, s.right) {
            (NodeRef::Leaf(l), NodeRef::Leaf(r)) => {
                let (l, r) = (&self.leaves[l], &self.leaves[r]);
                (l == a && r == b) || (l == b && r == a)
            }
            _ => false,
        })
    }

    /// Graphviz rendering: leaves as boxes, edges labeled by pivot.
    pub fn to_dot(&self) -> String {
        let mut out = String::from("digraph proof {\n  rankdir=BT;\n");
        for (i, c) in self.leaves.iter().enumerate() {
            out.push_str(&format!("  l{i} [shape=box, label=\"{c}\"];\n"));
        }
        for (i, s) in self.steps.iter().enumerate() {
            out.push_str(&format!("  s{i} [label=\"{}\"];\n", s.resolvent));
            for parent in [s.left, s.right] {
                let name = match parent {
                    NodeRef::Leaf(j) => format!("l{j}"),
                    NodeRef::Step(j) => format!("s{j}"),
                };
                out.push_str(&format!("  {name} -> s{i} [label=\"{}\"];\n", s.pivot));
            }
        }
        out.push_str("}\n");
        out
    }
}

impl fmt::Display for ResolutionProof {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&write_trace(self))
    }
}

/// The resolvent of `c1` and `c2` on `pivot`, in either orientation.
/// Tautological resolvents are returned as-is.
pub fn resolve(c1: &Clause, c2: &Clause, pivot: Variable) -> Result<Clause, ResolutionError> {
    let (p, n) = (pivot.pos(), pivot.neg());
    let oriented = (c1.contains(p) && c2.contains(n)) || (c1.contains(n) && c2.contains(p));
    if !oriented {
        return Err(ResolutionError::PivotMismatch(c1.clone(), c2.clone(), pivot));
    }
    let lits = c1.literals().iter().chain(c2.literals()).filter(|l| l.var() != pivot);
    Ok(Clause::new(lits.copied()))
}

/// The unique variable on which `a` and `b` clash, if there is exactly one.
pub fn clash_variable(a: &Clause, b: &Clause) -> Option<Variable> {
    let clashes: Vec<Literal> =
        a.literals().iter().filter(|l| b.contains(l.negate())).copied().collect();
    match clashes.as_slice() {
        [l] => Some(l.var()),
        _ => None,
    }
}

/// Checks that `proof` is a regular refutation of `formula`: leaves are
/// input clauses, parents precede their steps, resolvents are correct, the
/// root is `⊥`, and no path resolves a variable twice.
pub fn validate_regular_proof(formula: &Formula, proof: &ResolutionProof) -> bool {
    if !proof.leaves.iter().all(|c| formula.contains(c)) {
        return false;
    }
    let mut pivots: Vec<BTreeSet<Variable>> = Vec::with_capacity(proof.steps.len());
    for (i, step) in proof.steps.iter().enumerate() {
        let mut below = BTreeSet::new();
        for parent in [step.left, step.right] {
            match parent {
                NodeRef::Leaf(j) if j < proof.leaves.len() => {}
                NodeRef::Step(j) if j < i => below.extend(pivots[j].iter().copied()),
                _ => return false,
            }
        }
        let (l, r) = (proof.clause(step.left), proof.clause(step.right));
        match resolve(l, r, step.pivot) {
            Ok(c) if c == step.resolvent => {}
            _ => return false,
        }
        if !below.insert(step.pivot) {
            return false;
        }
        pivots.push(below);
    }
    matches!(proof.get(proof.root), Some(c) if c.is_empty())
}

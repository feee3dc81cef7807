//! Exhaustive search for minimum regular refutations.
//!
//! Iterative deepening over the number of steps. Each derived node carries
//! its clause and the set `P` of pivots used below it; resolving on `x`
//! requires `x ∉ P` of both parents. Pruning rules, each of which never
//! removes a minimum proof:
//!
//! - A node whose clause is a tautology or mentions a variable of its own
//!   `P` is dead: its literal would have to be resolved again above it.
//! - If two nodes satisfy `C ⊆ C'` and `P ⊆ P'` (input clauses have
//!   `P = ∅`), rerouting the uses of the second to the first yields a
//!   regular refutation with fewer steps, so no minimum proof holds both.
//! - Steps are emitted in a canonical topological order: a step that does
//!   not consume the previous step's output must have a larger key.
//! - Each step lowers the number of unused derived nodes by at most one and
//!   clause width by at most one, which bounds the steps still needed.

use std::ops::ControlFlow;

use crate::cnf::{is_satisfiable, Clause, Formula, Literal, Variable};
use crate::count::ProofSize;

use super::{clash_variable, NodeRef, ResolutionError, ResolutionProof, ResolutionStep};

/// Most variables the bitset search handles.
pub const MAX_SEARCH_VARS: usize = 64;

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord)]
struct Bits {
    pos: u64,
    neg: u64,
}

impl Bits {
    fn vars(self) -> u64 {
        self.pos | self.neg
    }

    fn width(self) -> u32 {
        self.vars().count_ones()
    }

    fn subset_of(self, other: Bits) -> bool {
        self.pos & !other.pos == 0 && self.neg & !other.neg == 0
    }
}

#[derive(Clone, Copy, Debug)]
struct Node {
    clause: Bits,
    pivots: u64,
    pivot: u32,
    parents: (usize, usize),
}

struct Engine {
    vars: Vec<Variable>,
    leaves: Vec<Bits>,
    nodes: Vec<Node>,
    /// Per derived node: has it been used as a parent?
    used: Vec<bool>,
    dangling: usize,
}

impl Engine {
    fn new(formula: &Formula) -> Result<Engine, ResolutionError> {
        let vars: Vec<Variable> = formula.vars().into_iter().collect();
        if vars.len() > MAX_SEARCH_VARS {
            return Err(ResolutionError::TooManyVariables(vars.len()));
        }
        let mut engine = Engine { vars, leaves: Vec::new(), nodes: Vec::new(), used: Vec::new(), dangling: 0 };
        engine.leaves = formula
            .clauses()
            .iter()
            .filter(|c| !c.is_tautology())
            .map(|c| engine.bits(c))
            .collect();
        Ok(engine)
    }

    fn bits(&self, clause: &Clause) -> Bits {
        let mut b = Bits { pos: 0, neg: 0 };
        for lit in clause.literals() {
            let i = self.vars.binary_search(&lit.var()).expect("variable of the formula");
            if lit.is_positive() {
                b.pos |= 1 << i;
            } else {
                b.neg |= 1 << i;
            }
        }
        b
    }

    fn clause(&self, b: Bits) -> Clause {
        let lits = (0..self.vars.len()).flat_map(|i| {
            let mut out = Vec::new();
            if b.pos >> i & 1 == 1 {
                out.push(self.vars[i].pos());
            }
            if b.neg >> i & 1 == 1 {
                out.push(self.vars[i].neg());
            }
            out
        });
        Clause::new(lits.collect::<Vec<Literal>>())
    }

    fn leaf_index(&self, clause: &Clause) -> Option<usize> {
        if clause.is_tautology() || clause.vars().any(|v| self.vars.binary_search(&v).is_err()) {
            return None;
        }
        let b = self.bits(clause);
        self.leaves.iter().position(|l| *l == b)
    }

    /// Node `i` in the combined numbering: leaves first, then derived nodes.
    fn at(&self, i: usize) -> (Bits, u64) {
        if i < self.leaves.len() {
            (self.leaves[i], 0)
        } else {
            let n = &self.nodes[i - self.leaves.len()];
            (n.clause, n.pivots)
        }
    }

    fn dominated(&self, clause: Bits, pivots: u64) -> bool {
        self.leaves.iter().any(|l| l.subset_of(clause))
            || self.nodes.iter().any(|n| {
                (n.clause.subset_of(clause) && n.pivots & !pivots == 0)
                    || (clause.subset_of(n.clause) && pivots & !n.pivots == 0)
            })
    }

    /// Enumerates every canonical step sequence of exactly `remaining` more
    /// steps that ends in `⊥` with every derived node used.
    fn dfs(
        &mut self,
        remaining: usize,
        visit: &mut dyn FnMut(&Engine) -> ControlFlow<()>,
    ) -> ControlFlow<()> {
        let total = self.leaves.len() + self.nodes.len();
        if remaining + 1 < self.dangling {
            return ControlFlow::Continue(());
        }
        let min_width = (0..total).map(|i| self.at(i).0.width()).min().unwrap_or(0);
        if (remaining as u32) < min_width {
            return ControlFlow::Continue(());
        }
        let last = self.nodes.last().map(|n| (total - 1, (n.clause, n.pivots)));
        for a in 0..total {
            let (ca, pa) = self.at(a);
            for b in a + 1..total {
                let (cb, pb) = self.at(b);
                let clash = (ca.pos & cb.neg) | (ca.neg & cb.pos);
                if clash.count_ones() != 1 || (pa | pb) & clash != 0 {
                    continue;
                }
                let clause = Bits { pos: (ca.pos | cb.pos) & !clash, neg: (ca.neg | cb.neg) & !clash };
                let pivots = pa | pb | clash;
                if clause.vars() & pivots != 0 {
                    continue;
                }
                if (clause.vars() == 0) != (remaining == 1) {
                    continue;
                }
                if let Some((prev, prev_key)) = last {
                    if a != prev && b != prev && (clause, pivots) <= prev_key {
                        continue;
                    }
                }
                if self.dominated(clause, pivots) {
                    continue;
                }
                let flow = self.apply(a, b, clause, pivots, clash.trailing_zeros(), remaining, visit);
                flow?;
            }
        }
        ControlFlow::Continue(())
    }

    #[allow(clippy::too_many_arguments)]
    fn apply(
        &mut self,
        a: usize,
        b: usize,
        clause: Bits,
        pivots: u64,
        pivot: u32,
        remaining: usize,
        visit: &mut dyn FnMut(&Engine) -> ControlFlow<()>,
    ) -> ControlFlow<()> {
        let leaves = self.leaves.len();
        let mut newly_used = Vec::new();
        for p in [a, b] {
            if p >= leaves && !self.used[p - leaves] {
                self.used[p - leaves] = true;
                self.dangling -= 1;
                newly_used.push(p - leaves);
            }
        }
        self.nodes.push(Node { clause, pivots, pivot, parents: (a, b) });
        self.used.push(false);
        self.dangling += 1;

        let flow = if remaining == 1 {
            if self.dangling == 1 {
                visit(self)
            } else {
                ControlFlow::Continue(())
            }
        } else {
            self.dfs(remaining - 1, visit)
        };

        self.nodes.pop();
        self.used.pop();
        self.dangling -= 1;
        for i in newly_used {
            self.used[i] = false;
            self.dangling += 1;
        }
        flow
    }

    fn proof(&self) -> ResolutionProof {
        let leaves_n = self.leaves.len();
        let mut leaf_ids: Vec<Option<usize>> = vec![None; leaves_n];
        let mut leaves = Vec::new();
        let mut steps = Vec::new();
        let mut refer = |i: usize, leaves: &mut Vec<Clause>| {
            if i < leaves_n {
                let id = *leaf_ids[i].get_or_insert_with(|| {
                    leaves.push(self.clause(self.leaves[i]));
                    leaves.len() - 1
                });
                NodeRef::Leaf(id)
            } else {
                NodeRef::Step(i - leaves_n)
            }
        };
        for node in &self.nodes {
            let (a, b) = node.parents;
            let (ra, rb) = (refer(a, &mut leaves), refer(b, &mut leaves));
            // left holds the pivot positively
            let (left, right) = if self.at(a).0.pos >> node.pivot & 1 == 1 { (ra, rb) } else { (rb, ra) };
            steps.push(ResolutionStep {
                pivot: self.vars[node.pivot as usize],
                left,
                right,
                resolvent: self.clause(node.clause),
            });
        }
        let root = NodeRef::Step(steps.len() - 1);
        ResolutionProof { leaves, steps, root }
    }
}

/// Outcome of a search before any proof is materialized.
enum Start {
    Trivial(ResolutionProof),
    Satisfiable,
    Search(Engine),
}

fn start(formula: &Formula) -> Result<Start, ResolutionError> {
    if formula.has_empty_clause() {
        let proof = ResolutionProof { leaves: vec![Clause::empty()], steps: vec![], root: NodeRef::Leaf(0) };
        return Ok(Start::Trivial(proof));
    }
    if is_satisfiable(formula) {
        return Ok(Start::Satisfiable);
    }
    Ok(Start::Search(Engine::new(formula)?))
}

/// Runs `visit` on every minimum proof (the first depth with any proof).
/// Returns the minimum size, or `None` when satisfiable.
fn for_each_minimum(
    formula: &Formula,
    budget: usize,
    visit: &mut dyn FnMut(ResolutionProof) -> ControlFlow<()>,
) -> Result<Option<usize>, ResolutionError> {
    let mut engine = match start(formula)? {
        Start::Trivial(proof) => {
            let _ = visit(proof);
            return Ok(Some(0));
        }
        Start::Satisfiable => return Ok(None),
        Start::Search(engine) => engine,
    };
    for depth in 1..=budget {
        let mut found = false;
        let _ = engine.dfs(depth, &mut |e| {
            found = true;
            visit(e.proof())
        });
        if found {
            return Ok(Some(depth));
        }
    }
    Err(ResolutionError::BudgetExhausted(budget))
}

/// Minimum number of steps of a regular refutation; `Infinite` when
/// satisfiable. `budget` caps the step count searched.
pub fn min_regular_size(formula: &Formula, budget: usize) -> Result<ProofSize<u64>, ResolutionError> {
    Ok(match minimum_regular_proof(formula, budget)? {
        Some(proof) => ProofSize::Finite(proof.size() as u64),
        None => ProofSize::Infinite,
    })
}

/// A minimum regular refutation, or `None` when satisfiable.
pub fn minimum_regular_proof(
    formula: &Formula,
    budget: usize,
) -> Result<Option<ResolutionProof>, ResolutionError> {
    let mut witness = None;
    for_each_minimum(formula, budget, &mut |p| {
        witness = Some(p);
        ControlFlow::Break(())
    })?;
    Ok(witness)
}

/// Up to `limit` distinct minimum regular refutations.
pub fn all_minimum_proofs(
    formula: &Formula,
    budget: usize,
    limit: usize,
) -> Result<Vec<ResolutionProof>, ResolutionError> {
    let mut proofs = Vec::new();
    for_each_minimum(formula, budget, &mut |p| {
        proofs.push(p);
        if proofs.len() >= limit {
            ControlFlow::Break(())
        } else {
            ControlFlow::Continue(())
        }
    })?;
    Ok(proofs)
}

/// Does some minimum regular refutation resolve the leaves `gamma` and
/// `delta` with each other?
pub fn is_optimal_resolution_pair(
    formula: &Formula,
    gamma: &Clause,
    delta: &Clause,
    budget: usize,
) -> Result<bool, ResolutionError> {
    for c in [gamma, delta] {
        if !formula.contains(c) {
            return Err(ResolutionError::NotInFormula(c.clone()));
        }
    }
    if clash_variable(gamma, delta).is_none() {
        return Err(ResolutionError::NotResolvable(gamma.clone(), delta.clone()));
    }
    let engine = match start(formula)? {
        Start::Trivial(_) | Start::Satisfiable => return Ok(false),
        Start::Search(engine) => engine,
    };
    let (Some(g), Some(d)) = (engine.leaf_index(gamma), engine.leaf_index(delta)) else {
        return Ok(false);
    };
    let pair = (g.min(d), g.max(d));
    let mut engine = engine;
    for depth in 1..=budget {
        let mut any = false;
        let mut hit = false;
        let _ = engine.dfs(depth, &mut |e| {
            any = true;
            hit = e.nodes.iter().any(|n| n.parents == pair);
            if hit {
                ControlFlow::Break(())
            } else {
                ControlFlow::Continue(())
            }
        });
        if any {
            return Ok(hit);
        }
    }
    Err(ResolutionError::BudgetExhausted(budget))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::resolution::validate_regular_proof;

    fn f(clauses: &[&[i32]]) -> Formula {
        Formula::from_dimacs(clauses)
    }

    #[test]
    fn small_sizes() {
        assert_eq!(min_regular_size(&f(&[&[1], &[-1]]), 5).unwrap(), ProofSize::finite(1));
        let k2 = f(&[&[1, 2], &[1, -2], &[-1, 2], &[-1, -2]]);
        assert_eq!(min_regular_size(&k2, 5).unwrap(), ProofSize::finite(3));
        assert_eq!(min_regular_size(&f(&[&[1, 2]]), 5).unwrap(), ProofSize::Infinite);
        assert_eq!(min_regular_size(&Formula::contradiction(), 5).unwrap(), ProofSize::finite(0));
    }

    #[test]
    fn budget_is_distinct_outcome() {
        let k2 = f(&[&[1, 2], &[1, -2], &[-1, 2], &[-1, -2]]);
        assert_eq!(min_regular_size(&k2, 2), Err(ResolutionError::BudgetExhausted(2)));
    }

    #[test]
    fn witnesses_validate() {
        let cases = [
            f(&[&[1, 2], &[1, -2], &[-1, 2], &[-1, -2]]),
            f(&[&[1], &[2], &[-1, -2]]),
            f(&[&[1, 2, 3], &[-1, 2], &[-2, 3], &[-3], &[1, -2]]),
        ];
        for formula in cases {
            let proof = minimum_regular_proof(&formula, 8).unwrap().unwrap();
            assert!(validate_regular_proof(&formula, &proof), "{formula}\n{proof}");
        }
    }

    #[test]
    fn chain_needs_one_step_per_link() {
        let chain = f(&[&[1, 2, 3], &[-1, 2, 3], &[-2, 3], &[-3]]);
        assert_eq!(min_regular_size(&chain, 6).unwrap(), ProofSize::finite(3));
    }

    #[test]
    fn tautologies_never_help() {
        let with_taut = f(&[&[1, -1, 2], &[1], &[-1]]);
        assert_eq!(min_regular_size(&with_taut, 4).unwrap(), ProofSize::finite(1));
    }

    #[test]
    fn enumerates_all_k2_proofs() {
        let k2 = f(&[&[1, 2], &[1, -2], &[-1, 2], &[-1, -2]]);
        let proofs = all_minimum_proofs(&k2, 4, 100).unwrap();
        // split on x1 last or on x2 last
        assert_eq!(proofs.len(), 2);
        assert!(proofs.iter().all(|p| validate_regular_proof(&k2, p)));
    }

    #[test]
    fn pair_examples() {
        let g = f(&[&[1], &[-1]]);
        let (p, n) = (Clause::from_dimacs(&[1]), Clause::from_dimacs(&[-1]));
        assert!(is_optimal_resolution_pair(&g, &p, &n, 3).unwrap());
        let k2 = f(&[&[1, 2], &[1, -2], &[-1, 2], &[-1, -2]]);
        let a = Clause::from_dimacs(&[1, 2]);
        assert!(is_optimal_resolution_pair(&k2, &a, &Clause::from_dimacs(&[1, -2]), 5).unwrap());
        assert!(matches!(
            is_optimal_resolution_pair(&k2, &a, &Clause::from_dimacs(&[-1, -2]), 5),
            Err(ResolutionError::NotResolvable(..))
        ));
        assert!(matches!(
            is_optimal_resolution_pair(&k2, &a, &Clause::from_dimacs(&[3]), 5),
            Err(ResolutionError::NotInFormula(..))
        ));
    }
}

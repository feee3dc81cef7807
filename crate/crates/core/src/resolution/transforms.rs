//! The `g_x` and `f^x_y` constructions, pushing a pivot to the leaves, and
//! the ORP reduction.

use std::collections::{BTreeMap, HashMap};

use crate::cnf::{is_satisfiable, Clause, Formula, Variable};
use crate::combinators::{exact_size_formula, FreshAllocator, Question, ReductionOutput, Role};
use crate::trees::Calculus;

use super::{resolve, NodeRef, ResolutionError, ResolutionProof, ResolutionStep};

fn require_fresh(formula: &Formula, var: Variable) -> Result<(), ResolutionError> {
    if formula.mentions(var) {
        return Err(ResolutionError::Precondition(format!("{var} occurs in the formula")));
    }
    Ok(())
}

/// `g_x(F) = {x, ¬x ∨ γ} ∪ F ∖ {γ}`.
///
/// Requires `F` unsatisfiable, `F ∖ {γ}` satisfiable and `x` fresh, so that
/// every refutation needs `γ`.
pub fn g_transform(formula: &Formula, gamma: &Clause, x: Variable) -> Result<Formula, ResolutionError> {
    if !formula.contains(gamma) {
        return Err(ResolutionError::NotInFormula(gamma.clone()));
    }
    require_fresh(formula, x)?;
    if is_satisfiable(formula) {
        return Err(ResolutionError::Precondition("formula is satisfiable".into()));
    }
    let rest = formula.without(gamma);
    if !is_satisfiable(&rest) {
        return Err(ResolutionError::Precondition(format!("formula without {gamma} is unsatisfiable")));
    }
    Ok(rest.union(&Formula::new([Clause::unit(x.pos()), gamma.with(x.neg())])))
}

fn f_formula(formula: &Formula, x: Variable, y: Variable) -> Formula {
    let head = Formula::new([Clause::unit(x.pos()), Clause::new([x.neg(), y.pos()])]);
    head.union(&formula.or_literal(y.neg()))
}

/// `f^x_y(F) = {x, ¬x ∨ y} ∪ {¬y ∨ δ | δ ∈ F}` for unsatisfiable `F` and
/// fresh, distinct `x`, `y`.
pub fn f_transform(formula: &Formula, x: Variable, y: Variable) -> Result<Formula, ResolutionError> {
    if x == y {
        return Err(ResolutionError::Precondition("x and y must differ".into()));
    }
    require_fresh(formula, x)?;
    require_fresh(formula, y)?;
    if is_satisfiable(formula) {
        return Err(ResolutionError::Precondition("formula is satisfiable".into()));
    }
    Ok(f_formula(formula, x, y))
}

/// Rewrites a proof in which every `x`-step resolves against the unit leaf
/// `x`: the `x`-steps are dropped, `¬x` disappears from every clause, and
/// each leaf `¬x ∨ γ` is replaced by one leaf-level resolution with `x`.
///
/// With `m` steps on `x` and one `¬x` leaf the size becomes `s - m + 1`.
pub fn push_pivot_to_leaves(proof: &ResolutionProof, x: Variable) -> Result<ResolutionProof, ResolutionError> {
    let unit = Clause::unit(x.pos());
    let x_steps = proof.steps.iter().filter(|s| s.pivot == x).count();
    if x_steps == 0 {
        return Err(ResolutionError::Shape(format!("no step resolves on {x}")));
    }
    if let Some(c) = proof.leaves.iter().find(|c| c.contains(x.pos()) && **c != unit) {
        return Err(ResolutionError::Shape(format!("leaf {c} contains {x} besides the unit")));
    }
    for s in proof.steps.iter().filter(|s| s.pivot == x) {
        if proof.clause(s.left) != &unit && proof.clause(s.right) != &unit {
            return Err(ResolutionError::Shape(format!("a step on {x} does not use the unit clause {x}")));
        }
    }

    let mut out = ResolutionProof { leaves: Vec::new(), steps: Vec::new(), root: NodeRef::Leaf(0) };
    let mut leaf_ids: HashMap<Clause, usize> = HashMap::new();
    let mut pushed: BTreeMap<usize, NodeRef> = BTreeMap::new();
    let mut mapped: Vec<NodeRef> = Vec::with_capacity(proof.steps.len());

    fn leaf(out: &mut ResolutionProof, ids: &mut HashMap<Clause, usize>, c: &Clause) -> NodeRef {
        let id = *ids.entry(c.clone()).or_insert_with(|| {
            out.leaves.push(c.clone());
            out.leaves.len() - 1
        });
        NodeRef::Leaf(id)
    }

    let mut map = |node: NodeRef,
                   mapped: &Vec<NodeRef>,
                   out: &mut ResolutionProof|
     -> Result<NodeRef, ResolutionError> {
        match node {
            NodeRef::Step(i) => Ok(mapped[i]),
            NodeRef::Leaf(i) => {
                let c = &proof.leaves[i];
                if !c.contains(x.neg()) {
                    return Ok(leaf(out, &mut leaf_ids, c));
                }
                if let Some(r) = pushed.get(&i) {
                    return Ok(*r);
                }
                let u = leaf(out, &mut leaf_ids, &unit);
                let l = leaf(out, &mut leaf_ids, c);
                let resolvent = resolve(&unit, c, x)?;
                out.steps.push(ResolutionStep { pivot: x, left: u, right: l, resolvent });
                let r = NodeRef::Step(out.steps.len() - 1);
                pushed.insert(i, r);
                Ok(r)
            }
        }
    };

    for s in &proof.steps {
        let node = if s.pivot == x {
            let other = if proof.clause(s.left) == &unit { s.right } else { s.left };
            map(other, &mapped, &mut out)?
        } else {
            let l = map(s.left, &mapped, &mut out)?;
            let r = map(s.right, &mapped, &mut out)?;
            let resolvent = resolve(out.clause(l), out.clause(r), s.pivot)
                .map_err(|_| ResolutionError::Shape(format!("step on {} loses its clash", s.pivot)))?;
            out.steps.push(ResolutionStep { pivot: s.pivot, left: l, right: r, resolvent });
            NodeRef::Step(out.steps.len() - 1)
        };
        mapped.push(node);
    }
    out.root = map(proof.root, &mapped, &mut out)?;
    Ok(prune_unreachable(&out))
}

/// Drops steps and leaves the root does not depend on, keeping order.
fn prune_unreachable(proof: &ResolutionProof) -> ResolutionProof {
    let mut live_steps = vec![false; proof.steps.len()];
    let mut live_leaves = vec![false; proof.leaves.len()];
    let mut stack = vec![proof.root];
    while let Some(n) = stack.pop() {
        match n {
            NodeRef::Leaf(i) => live_leaves[i] = true,
            NodeRef::Step(i) if !live_steps[i] => {
                live_steps[i] = true;
                stack.push(proof.steps[i].left);
                stack.push(proof.steps[i].right);
            }
            NodeRef::Step(_) => {}
        }
    }
    let renumber = |live: &[bool]| {
        let mut next = 0;
        live.iter()
            .map(|&l| {
                let id = next;
                next += usize::from(l);
                id
            })
            .collect::<Vec<_>>()
    };
    let (leaf_new, step_new) = (renumber(&live_leaves), renumber(&live_steps));
    let remap = |n: NodeRef| match n {
        NodeRef::Leaf(i) => NodeRef::Leaf(leaf_new[i]),
        NodeRef::Step(i) => NodeRef::Step(step_new[i]),
    };
    ResolutionProof {
        leaves: proof.leaves.iter().zip(&live_leaves).filter(|(_, l)| **l).map(|(c, _)| c.clone()).collect(),
        steps: proof
            .steps
            .iter()
            .zip(&live_steps)
            .filter(|(_, l)| **l)
            .map(|(s, _)| ResolutionStep { left: remap(s.left), right: remap(s.right), ..s.clone() })
            .collect(),
        root: remap(proof.root),
    }
}

/// Unsatisfiability to ORP: `f^x_y(F) ∪ f^w_z(H)` with `H` a backtracking
/// chain whose minimum regular refutation has `hard_threshold + 1` steps.
///
/// When `F` is unsatisfiable with a refutation of at most `hard_threshold`
/// steps, some minimum refutation resolves `x` with `¬x ∨ y`; when `F` is
/// satisfiable, every minimum refutation resolves `w` with `¬w ∨ z` instead.
pub fn reduce_orp(
    formula: &Formula,
    alloc: &mut FreshAllocator,
    hard_threshold: usize,
) -> Result<ReductionOutput, ResolutionError> {
    alloc.reserve(formula);
    let (x, y) = (alloc.fresh(), alloc.fresh());
    let hard = exact_size_formula(hard_threshold + 1, Calculus::Backtracking, alloc);
    let (w, z) = (alloc.fresh(), alloc.fresh());
    let combined = f_formula(formula, x, y).union(&f_formula(&hard.formula, w, z));
    let roles = [(x, Role::X), (y, Role::Y), (w, Role::X), (z, Role::Y)]
        .into_iter()
        .chain(hard.roles)
        .collect();
    Ok(ReductionOutput {
        formula: combined,
        reduction: "orp".into(),
        question: Question::ResolutionPair {
            gamma: Clause::unit(x.pos()),
            delta: Clause::new([x.neg(), y.pos()]),
            alternative: (Clause::unit(w.pos()), Clause::new([w.neg(), z.pos()])),
        },
        discipline: None,
        roles,
        semantics: format!(
            "some minimum regular refutation resolves {x} with -{x} {y} iff the input is unsatisfiable \
             (with a refutation of at most {hard_threshold} steps)"
        ),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::resolution::{all_minimum_proofs, min_regular_size, validate_regular_proof};
    use crate::ProofSize;

    fn f(clauses: &[&[i32]]) -> Formula {
        Formula::from_dimacs(clauses)
    }

    fn c(lits: &[i32]) -> Clause {
        Clause::from_dimacs(lits)
    }

    #[test]
    fn g_examples() {
        let g = g_transform(&f(&[&[1], &[-1]]), &c(&[1]), Variable::new(2)).unwrap();
        assert_eq!(g, f(&[&[2], &[-2, 1], &[-1]]));
        assert_eq!(min_regular_size(&g, 4).unwrap(), ProofSize::finite(2));
        for p in all_minimum_proofs(&g, 4, 100).unwrap() {
            assert_eq!(p.steps_on(Variable::new(2)).count(), 1);
        }
        let k2 = f(&[&[1, 2], &[1, -2], &[-1, 2], &[-1, -2]]);
        let g = g_transform(&k2, &c(&[1, 2]), Variable::new(3)).unwrap();
        assert_eq!(g.len(), 5);
        for p in all_minimum_proofs(&g, 6, 100).unwrap() {
            assert_eq!(p.steps_on(Variable::new(3)).count(), 1);
        }
        let redundant = f(&[&[1], &[-1], &[2], &[-2]]);
        assert!(g_transform(&redundant, &c(&[1]), Variable::new(3)).is_err());
    }

    #[test]
    fn f_examples() {
        let (x, y) = (Variable::new(5), Variable::new(6));
        let out = f_transform(&f(&[&[1], &[-1]]), x, y).unwrap();
        assert_eq!(out, f(&[&[5], &[-5, 6], &[-6, 1], &[-6, -1]]));
        assert_eq!(min_regular_size(&out, 5).unwrap(), ProofSize::finite(3));
        let out = f_transform(&Formula::contradiction(), x, y).unwrap();
        assert_eq!(out, f(&[&[5], &[-5, 6], &[-6]]));
        assert_eq!(min_regular_size(&out, 5).unwrap(), ProofSize::finite(2));
        assert!(f_transform(&f(&[&[1, 2]]), x, y).is_err());
        assert!(f_transform(&f(&[&[5], &[-5]]), x, y).is_err());
    }

    #[test]
    fn push_leaf_level_is_fixpoint() {
        let g = f(&[&[2], &[-2, 1], &[-1]]);
        let proof = crate::resolution::minimum_regular_proof(&g, 4).unwrap().unwrap();
        let pushed = push_pivot_to_leaves(&proof, Variable::new(2)).unwrap();
        assert_eq!(pushed.size(), proof.size());
        assert!(validate_regular_proof(&g, &pushed));
    }

    #[test]
    fn push_merges_two_resolutions() {
        // g_u({p, ¬p∨q, ¬p∨¬q}) with γ = p: p = 1, q = 2, u = 3
        let g = f(&[&[3], &[-3, 1], &[-1, 2], &[-1, -2]]);
        let t = "l 1 -3 1 0\nl 2 -1 2 0\nl 3 -1 -2 0\nl 4 3 0\n\
                 s 5 1 1 2 -3 2 0\ns 6 1 1 3 -3 -2 0\ns 7 3 4 5 2 0\ns 8 3 4 6 -2 0\ns 9 2 7 8 0\n";
        let proof = crate::resolution::parse_trace(t).unwrap();
        assert!(validate_regular_proof(&g, &proof));
        assert_eq!(proof.size(), 5);
        let pushed = push_pivot_to_leaves(&proof, Variable::new(3)).unwrap();
        assert!(validate_regular_proof(&g, &pushed), "{pushed}");
        assert_eq!(pushed.size(), 4);
        assert_eq!(pushed.steps_on(Variable::new(3)).count(), 1);
        assert!(pushed.resolves_leaves(&c(&[3]), &c(&[-3, 1])));
    }

    #[test]
    fn push_requires_a_pivot_step() {
        let proof = crate::resolution::minimum_regular_proof(&f(&[&[1], &[-1]]), 2).unwrap().unwrap();
        assert!(matches!(push_pivot_to_leaves(&proof, Variable::new(9)), Err(ResolutionError::Shape(_))));
    }

    #[test]
    fn orp_examples() {
        for (formula, unsat) in [(f(&[&[1], &[-1]]), true), (f(&[&[1, 2]]), false), (Formula::contradiction(), true)] {
            let out = reduce_orp(&formula, &mut FreshAllocator::new(), 1).unwrap();
            let Question::ResolutionPair { gamma, delta, alternative } = &out.question else { unreachable!() };
            let primary = crate::resolution::is_optimal_resolution_pair(&out.formula, gamma, delta, 8).unwrap();
            let other =
                crate::resolution::is_optimal_resolution_pair(&out.formula, &alternative.0, &alternative.1, 8).unwrap();
            assert_eq!(primary, unsat, "{formula}");
            assert_eq!(other, !unsat, "{formula}");
        }
    }
}

//! Formula constructions whose optimal tree sizes are known in terms of
//! their parts, and the reductions built from them.

mod families;
mod gadgets;
mod mirror;
mod reductions;

use std::collections::{BTreeMap, BTreeSet};

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::cnf::{Clause, Formula, Variable};
use crate::trees::{Calculus, SearchTree, TreeDiscipline};

pub use families::{hard_family, HardFamily};
pub use gadgets::{c_transform, e_transform, exact_size_formula, sum_mono, v_formula};
pub use mirror::{lemma1_tree_back, mono_shield, shield_tree_back, to_dpll_equivalent, Mirrored};
pub use reductions::{
    parity_sat_parts, reduce_eminsat, reduce_ots_conp, reduce_ots_to_obv, reduce_parity_sat,
    DecideError, ParitySatParts, Question, ReductionOutput,
};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ConstructionError {
    #[error("operands share variables: {0:?}")]
    SharedVariables(Vec<Variable>),
    #[error("{0} is not a variable of the formula")]
    NotInFormula(Variable),
    #[error("tree node labeled {0}, which belongs to neither alphabet")]
    UnknownVariable(Variable),
    #[error("precondition violated: {0}")]
    Precondition(String),
}

/// Hands out variable ids above every id seen so far.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FreshAllocator {
    next: u32,
}

impl Default for FreshAllocator {
    fn default() -> Self {
        FreshAllocator { next: 1 }
    }
}

impl FreshAllocator {
    pub fn new() -> FreshAllocator {
        FreshAllocator::default()
    }

    /// An allocator whose first id exceeds every variable of `formulas`.
    pub fn above<'a>(formulas: impl IntoIterator<Item = &'a Formula>) -> FreshAllocator {
        let mut alloc = FreshAllocator::new();
        for f in formulas {
            alloc.reserve(f);
        }
        alloc
    }

    pub fn next_id(&self) -> u32 {
        self.next
    }

    pub fn reserve(&mut self, formula: &Formula) {
        if let Some(v) = formula.max_var() {
            self.reserve_var(v);
        }
    }

    pub fn reserve_var(&mut self, var: Variable) {
        self.next = self.next.max(var.id() + 1);
    }

    pub fn fresh(&mut self) -> Variable {
        let v = Variable::new(self.next);
        self.next += 1;
        v
    }

    pub fn fresh_many(&mut self, n: usize) -> Vec<Variable> {
        (0..n).map(|_| self.fresh()).collect()
    }
}

/// What a variable is for inside a construction.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Role {
    X,
    Y,
    V,
    A,
    B,
    /// The connective variable of a sum.
    Connective,
    /// A copy variable introduced by the mirroring transformations.
    Mirror,
}

/// A formula together with the variables a restricted-branching search may
/// use and role annotations for its gadget variables.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Construction {
    pub formula: Formula,
    pub branchable: BTreeSet<Variable>,
    pub roles: BTreeMap<Variable, Role>,
}

impl Construction {
    /// A formula whose every variable may be branched on.
    pub fn plain(formula: Formula) -> Construction {
        let branchable = formula.vars();
        Construction { formula, branchable, roles: BTreeMap::new() }
    }

    pub fn discipline(&self, kind: Calculus) -> TreeDiscipline {
        TreeDiscipline::new(kind).restricted_to(self.branchable.iter().copied())
    }

    pub fn union(&self, other: &Construction) -> Result<Construction, ConstructionError> {
        let formula = union_disjoint(&self.formula, &other.formula)?;
        let mut branchable = self.branchable.clone();
        branchable.extend(other.branchable.iter().copied());
        let mut roles = self.roles.clone();
        roles.extend(other.roles.iter().map(|(v, r)| (*v, *r)));
        Ok(Construction { formula, branchable, roles })
    }
}

impl From<Formula> for Construction {
    fn from(formula: Formula) -> Construction {
        Construction::plain(formula)
    }
}

pub(crate) fn check_disjoint(f: &Formula, h: &Formula) -> Result<(), ConstructionError> {
    let fv = f.vars();
    let shared: Vec<Variable> = h.vars().into_iter().filter(|v| fv.contains(v)).collect();
    if shared.is_empty() {
        Ok(())
    } else {
        Err(ConstructionError::SharedVariables(shared))
    }
}

/// `F ∪ H` for variable-disjoint operands.
pub fn union_disjoint(f: &Formula, h: &Formula) -> Result<Formula, ConstructionError> {
    check_disjoint(f, h)?;
    Ok(f.union(h))
}

/// `F +_x H = (F ∨ x) ∪ (H ∨ ¬x)` with a fresh connective `x`.
pub fn sum(
    f: &Formula,
    h: &Formula,
    alloc: &mut FreshAllocator,
) -> Result<(Formula, Variable), ConstructionError> {
    check_disjoint(f, h)?;
    alloc.reserve(f);
    alloc.reserve(h);
    let x = alloc.fresh();
    Ok((f.or_literal(x.pos()).union(&h.or_literal(x.neg())), x))
}

/// `F · H = {γ ∨ δ | γ ∈ F, δ ∈ H}`.
pub fn product(f: &Formula, h: &Formula) -> Result<Formula, ConstructionError> {
    check_disjoint(f, h)?;
    let clauses: Vec<Clause> =
        f.clauses().iter().flat_map(|g| h.clauses().iter().map(move |d| g.or(d))).collect();
    Ok(Formula::new(clauses))
}

/// An optimal tree of `F · H` from optimal trees of `F` and `H`: every empty
/// subtree of `t_f` is replaced by `t_h`.
pub fn product_tree(t_f: &SearchTree, t_h: &SearchTree) -> SearchTree {
    t_f.replace_empty(t_h)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::optimal::{optimal_size, optimal_tree, OracleConfig};
    use crate::trees::validate_tree;
    use crate::ProofSize;

    fn f(clauses: &[&[i32]]) -> Formula {
        Formula::from_dimacs(clauses)
    }

    fn bt_size(formula: &Formula) -> ProofSize<u64> {
        optimal_size(formula, &OracleConfig::new(TreeDiscipline::backtracking())).unwrap()
    }

    #[test]
    fn allocator_stays_above_inputs() {
        let mut alloc = FreshAllocator::above([&f(&[&[3, -7]]), &f(&[&[2]])]);
        assert_eq!(alloc.fresh(), Variable::new(8));
        alloc.reserve_var(Variable::new(20));
        assert_eq!(alloc.fresh_many(2), vec![Variable::new(21), Variable::new(22)]);
    }

    #[test]
    fn union_examples() {
        let k2 = f(&[&[2, 3], &[2, -3], &[-2, 3], &[-2, -3]]);
        let u = union_disjoint(&f(&[&[1], &[-1]]), &k2).unwrap();
        assert_eq!(bt_size(&u), ProofSize::finite(1));
        let u = union_disjoint(&f(&[&[1, 2]]), &f(&[&[3], &[-3]])).unwrap();
        assert_eq!(bt_size(&u), ProofSize::finite(1));
        assert_eq!(union_disjoint(&Formula::empty(), &k2).unwrap(), k2);
        assert_eq!(
            union_disjoint(&f(&[&[1]]), &f(&[&[-1, 2]])),
            Err(ConstructionError::SharedVariables(vec![Variable::new(1)]))
        );
    }

    #[test]
    fn sum_examples() {
        let mut alloc = FreshAllocator::new();
        let (s, x) = sum(&Formula::contradiction(), &Formula::contradiction(), &mut alloc).unwrap();
        assert_eq!(s, Formula::new([Clause::unit(x.pos()), Clause::unit(x.neg())]));
        assert_eq!(bt_size(&s), ProofSize::finite(1));

        let (s, _) = sum(&f(&[&[1], &[-1]]), &f(&[&[2], &[-2]]), &mut alloc).unwrap();
        assert_eq!(bt_size(&s), ProofSize::finite(3));

        let (s, _) = sum(&f(&[&[1, 2]]), &Formula::contradiction(), &mut alloc).unwrap();
        assert_eq!(bt_size(&s), ProofSize::Infinite);
    }

    #[test]
    fn product_examples() {
        let h = f(&[&[5], &[-5, 6]]);
        assert_eq!(product(&Formula::contradiction(), &h).unwrap(), h);
        let p = product(&f(&[&[1], &[-1]]), &f(&[&[2], &[-2]])).unwrap();
        assert_eq!(p, f(&[&[1, 2], &[1, -2], &[-1, 2], &[-1, -2]]));
        assert_eq!(bt_size(&p), ProofSize::finite(3));
        let k2 = f(&[&[2, 3], &[2, -3], &[-2, 3], &[-2, -3]]);
        assert_eq!(bt_size(&product(&f(&[&[1], &[-1]]), &k2).unwrap()), ProofSize::finite(7));
    }

    #[test]
    fn product_tree_examples() {
        let tx = SearchTree::leaf(Variable::new(1));
        let ty = SearchTree::leaf(Variable::new(2));
        assert_eq!(product_tree(&tx, &ty).to_string(), "(1 (2 () ()) (2 () ()))");
        assert_eq!(product_tree(&SearchTree::Empty, &ty), ty);
        assert_eq!(product_tree(&tx, &SearchTree::Empty), tx);

        let a = f(&[&[1], &[-1, 2], &[-1, -2]]);
        let b = f(&[&[3, 4], &[3, -4], &[-3, 4], &[-3, -4]]);
        let cfg = OracleConfig::new(TreeDiscipline::backtracking());
        let t = product_tree(&optimal_tree(&a, &cfg).unwrap(), &optimal_tree(&b, &cfg).unwrap());
        let p = product(&a, &b).unwrap();
        assert!(validate_tree(&p, &t, &TreeDiscipline::backtracking()));
        assert_eq!(t.size(), 2 * 3 + 2 + 3);
        assert_eq!(bt_size(&p), ProofSize::finite(11));
    }
}

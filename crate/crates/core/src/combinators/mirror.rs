//! Copy-variable transformations between the three calculi.
//!
//! Both add, for every variable `x`, a fresh copy `y` and the pair
//! `x ∨ ¬y, ¬x ∨ y`, so that neither polarity of `x` or `y` is ever pure.

use std::collections::{BTreeMap, BTreeSet};

use crate::cnf::{Clause, Formula, Literal, Variable};
use crate::trees::SearchTree;

use super::{ConstructionError, FreshAllocator};

/// A transformed formula and the map from each copy variable to its original.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Mirrored {
    pub formula: Formula,
    pub mirror: BTreeMap<Variable, Variable>,
}

fn mirror_pairs(
    formula: &Formula,
    alloc: &mut FreshAllocator,
) -> (Vec<Clause>, BTreeMap<Variable, Variable>, BTreeMap<Variable, Variable>) {
    alloc.reserve(formula);
    let mut copies = BTreeMap::new();
    let mut mirror = BTreeMap::new();
    let mut pairs = Vec::new();
    for x in formula.vars() {
        let y = alloc.fresh();
        pairs.push(Clause::new([x.pos(), y.neg()]));
        pairs.push(Clause::new([x.neg(), y.pos()]));
        copies.insert(x, y);
        mirror.insert(y, x);
    }
    (pairs, copies, mirror)
}

/// The formula whose DPLL trees are exactly the backtracking trees of `F`:
/// the copy pairs, plus `F` with `x` replaced by `x ∨ y` and `¬x` by
/// `¬x ∨ ¬y`.
pub fn to_dpll_equivalent(formula: &Formula, alloc: &mut FreshAllocator) -> Mirrored {
    let (mut clauses, copies, mirror) = mirror_pairs(formula, alloc);
    for clause in formula.clauses() {
        let lits = clause.literals().iter().flat_map(|&l| {
            let y = copies[&l.var()];
            [l, Literal::new(y, l.is_positive())]
        });
        clauses.push(Clause::new(lits));
    }
    Mirrored { formula: Formula::new(clauses), mirror }
}

/// `F` plus the copy pairs: the monotone literal rule never fires, so its
/// DPLL trees are the DPLL-Mono trees of `F`.
pub fn mono_shield(formula: &Formula, alloc: &mut FreshAllocator) -> Mirrored {
    let (mut clauses, _, mirror) = mirror_pairs(formula, alloc);
    clauses.extend(formula.clauses().iter().cloned());
    Mirrored { formula: Formula::new(clauses), mirror }
}

fn originals(mirror: &BTreeMap<Variable, Variable>) -> BTreeSet<Variable> {
    mirror.values().copied().collect()
}

fn map_back(
    tree: &SearchTree,
    mirror: &BTreeMap<Variable, Variable>,
    originals: &BTreeSet<Variable>,
    swap: bool,
) -> Result<SearchTree, ConstructionError> {
    match tree {
        SearchTree::Empty => Ok(SearchTree::Empty),
        SearchTree::Node(v, left, right) => {
            let l = map_back(left, mirror, originals, swap)?;
            let r = map_back(right, mirror, originals, swap)?;
            if let Some(&x) = mirror.get(v) {
                Ok(if swap { SearchTree::node(x, r, l) } else { SearchTree::node(x, l, r) })
            } else if originals.contains(v) {
                Ok(SearchTree::node(*v, l, r))
            } else {
                Err(ConstructionError::UnknownVariable(*v))
            }
        }
    }
}

/// Maps a DPLL tree of [`to_dpll_equivalent`]'s output to a backtracking
/// tree of the original formula: copy nodes become their original with the
/// subtrees swapped.
pub fn lemma1_tree_back(
    tree: &SearchTree,
    mirror: &BTreeMap<Variable, Variable>,
) -> Result<SearchTree, ConstructionError> {
    map_back(tree, mirror, &originals(mirror), true)
}

/// Maps a DPLL tree of [`mono_shield`]'s output to a DPLL-Mono tree of the
/// original formula by relabeling copies.
pub fn shield_tree_back(
    tree: &SearchTree,
    mirror: &BTreeMap<Variable, Variable>,
) -> Result<SearchTree, ConstructionError> {
    map_back(tree, mirror, &originals(mirror), false)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::optimal::{optimal_size, optimal_tree, OracleConfig};
    use crate::trees::{validate_tree, TreeDiscipline};
    use crate::ProofSize;

    fn f(clauses: &[&[i32]]) -> Formula {
        Formula::from_dimacs(clauses)
    }

    fn size(formula: &Formula, d: TreeDiscipline) -> ProofSize<u64> {
        optimal_size(formula, &OracleConfig::new(d)).unwrap()
    }

    #[test]
    fn lemma1_examples() {
        let mut alloc = FreshAllocator::new();
        let m = to_dpll_equivalent(&f(&[&[1], &[-1]]), &mut alloc);
        assert_eq!(m.formula, f(&[&[1, -2], &[-1, 2], &[1, 2], &[-1, -2]]));
        assert_eq!(size(&m.formula, TreeDiscipline::dpll()), ProofSize::finite(1));

        let m = to_dpll_equivalent(&Formula::contradiction(), &mut alloc);
        assert_eq!(m.formula, Formula::contradiction());
        assert!(m.mirror.is_empty());

        let php = f(&[&[1], &[2], &[-1, -2]]);
        let m = to_dpll_equivalent(&php, &mut FreshAllocator::new());
        assert_eq!(size(&m.formula, TreeDiscipline::dpll()), ProofSize::finite(2));
        let t = optimal_tree(&m.formula, &OracleConfig::new(TreeDiscipline::dpll())).unwrap();
        let back = lemma1_tree_back(&t, &m.mirror).unwrap();
        assert!(validate_tree(&php, &back, &TreeDiscipline::backtracking()));
        assert_eq!(back.size(), 2);
    }

    #[test]
    fn tree_back_rules() {
        let mirror = BTreeMap::from([(Variable::new(2), Variable::new(1))]);
        let t = SearchTree::parse("(2 (1 () ()) ())").unwrap();
        assert_eq!(lemma1_tree_back(&t, &mirror).unwrap().to_string(), "(1 () (1 () ()))");
        let t = SearchTree::parse("(1 () (2 () ()))").unwrap();
        assert_eq!(lemma1_tree_back(&t, &mirror).unwrap().to_string(), "(1 () (1 () ()))");
        assert_eq!(lemma1_tree_back(&SearchTree::Empty, &mirror).unwrap(), SearchTree::Empty);
        let t = SearchTree::parse("(9 () ())").unwrap();
        assert_eq!(
            lemma1_tree_back(&t, &mirror),
            Err(ConstructionError::UnknownVariable(Variable::new(9)))
        );
    }

    #[test]
    fn shield_examples() {
        let m = mono_shield(&f(&[&[1], &[-1]]), &mut FreshAllocator::new());
        assert_eq!(m.formula, f(&[&[1, -2], &[-1, 2], &[1], &[-1]]));
        assert_eq!(size(&m.formula, TreeDiscipline::dpll()), ProofSize::finite(0));

        assert_eq!(mono_shield(&Formula::empty(), &mut FreshAllocator::new()).formula, Formula::empty());

        let g = f(&[&[1, 2], &[-1], &[-2]]);
        let m = mono_shield(&g, &mut FreshAllocator::new());
        assert_eq!(
            size(&m.formula, TreeDiscipline::dpll()),
            size(&g, TreeDiscipline::dpll_mono())
        );
    }
}

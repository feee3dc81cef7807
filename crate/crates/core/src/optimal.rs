//! Exact optimal search trees.
//!
//! Memoized exhaustive search with branch-and-bound:
//! `s(F) = 0` if the closed formula contains `⊥`, otherwise the minimum over
//! branchable `x` of `1 + s(F|¬x) + s(F|x)`. A sub-search carries an
//! exclusive cap derived from the best candidate so far. Exact values and
//! cut-induced lower bounds live in separate tables, so the exact memo never
//! holds a bound.

use std::collections::{BTreeSet, HashMap};

use thiserror::Error;

pub use crate::cnf::components;
use crate::cnf::{is_satisfiable, Formula, Variable};
use crate::count::{Count, ProofSize};
use crate::trees::{SearchTree, TreeDiscipline};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct OracleConfig {
    pub discipline: TreeDiscipline,
    /// Maximum number of search nodes per query; `None` is unbounded.
    pub node_budget: Option<u64>,
    pub memo_enabled: bool,
    /// Solve variable-disjoint components separately and take the minimum.
    /// Off by default: it presumes the union law, which the law suites test.
    pub split_components: bool,
}

impl OracleConfig {
    pub fn new(discipline: TreeDiscipline) -> OracleConfig {
        OracleConfig { discipline, node_budget: None, memo_enabled: true, split_components: false }
    }

    pub fn with_budget(mut self, budget: u64) -> OracleConfig {
        self.node_budget = Some(budget);
        self
    }

    pub fn without_memo(mut self) -> OracleConfig {
        self.memo_enabled = false;
        self
    }

    pub fn splitting_components(mut self) -> OracleConfig {
        self.split_components = true;
        self
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum OracleError {
    #[error("search budget exhausted after {explored} nodes; result indeterminate")]
    BudgetExhausted { explored: u64 },
    #[error("no refutation exists (formula satisfiable or not refutable under the branching restriction)")]
    NoRefutation,
    #[error("node budget must be at least 1")]
    InvalidBudget,
}

/// Outcome of a capped sub-search.
#[derive(Clone, Debug)]
enum Bounded<C> {
    Exact(ProofSize<C>),
    /// The value is at least the cap.
    AtLeast,
}

/// A reusable oracle for one discipline; the memo persists across queries.
pub struct Oracle<C> {
    config: OracleConfig,
    memo: HashMap<Formula, ProofSize<C>>,
    floors: HashMap<Formula, C>,
    explored: u64,
}

impl<C: Count> Oracle<C> {
    pub fn new(config: OracleConfig) -> Result<Oracle<C>, OracleError> {
        if config.node_budget == Some(0) {
            return Err(OracleError::InvalidBudget);
        }
        Ok(Oracle { config, memo: HashMap::new(), floors: HashMap::new(), explored: 0 })
    }

    pub fn config(&self) -> &OracleConfig {
        &self.config
    }

    /// Search nodes visited by the last query.
    pub fn explored(&self) -> u64 {
        self.explored
    }

    /// `s(F)` under the configured discipline.
    pub fn size(&mut self, formula: &Formula) -> Result<ProofSize<C>, OracleError> {
        self.explored = 0;
        if is_satisfiable(formula) {
            return Ok(ProofSize::Infinite);
        }
        match self.value(formula, None)? {
            Bounded::Exact(v) => Ok(v),
            Bounded::AtLeast => unreachable!("uncapped search is exact"),
        }
    }

    /// Whether `F` has a search tree with at most `k` nodes.
    pub fn within(&mut self, formula: &Formula, k: &C) -> Result<bool, OracleError> {
        self.explored = 0;
        if is_satisfiable(formula) {
            return Ok(false);
        }
        match self.value(formula, Some(&k.succ()))? {
            Bounded::Exact(v) => Ok(v.within(k)),
            Bounded::AtLeast => Ok(false),
        }
    }

    /// An optimal tree; ties go to the lowest variable id.
    pub fn tree(&mut self, formula: &Formula) -> Result<SearchTree, OracleError> {
        let size = self.size(formula)?;
        if !size.is_finite() {
            return Err(OracleError::NoRefutation);
        }
        self.build_tree(formula)
    }

    /// All variables that are the root of some optimal tree, ascending.
    pub fn optimal_roots(&mut self, formula: &Formula) -> Result<Vec<Variable>, OracleError> {
        let total = self.size(formula)?;
        if !total.is_finite() {
            return Err(OracleError::NoRefutation);
        }
        let closed = self.config.discipline.close(formula);
        let mut roots = Vec::new();
        for x in self.config.discipline.branch_candidates(&closed) {
            if self.rooted_size(&closed, x)? == total {
                roots.push(x);
            }
        }
        Ok(roots)
    }

    /// Is `x` the root of an optimal tree of `F`?
    pub fn is_optimal_root(&mut self, formula: &Formula, x: Variable) -> Result<bool, OracleError> {
        let total = self.size(formula)?;
        if !total.is_finite() {
            return Err(OracleError::NoRefutation);
        }
        let closed = self.config.discipline.close(formula);
        if closed.has_empty_clause() || !closed.mentions(x) || !self.config.discipline.may_branch(x)
        {
            return Ok(false);
        }
        Ok(self.rooted_size(&closed, x)? == total)
    }

    /// Every optimal tree of `F`, up to `limit` of them.
    pub fn all_optimal_trees(
        &mut self,
        formula: &Formula,
        limit: usize,
    ) -> Result<Vec<SearchTree>, OracleError> {
        let size = self.size(formula)?;
        if !size.is_finite() {
            return Err(OracleError::NoRefutation);
        }
        self.enumerate_trees(formula, limit)
    }

    /// `1 + s(F|¬x) + s(F|x)` for an already-closed `F`.
    fn rooted_size(&mut self, closed: &Formula, x: Variable) -> Result<ProofSize<C>, OracleError> {
        let left = self.exact(&closed.assign(x.neg()))?;
        let right = self.exact(&closed.assign(x.pos()))?;
        Ok(left.plus(&right).succ())
    }

    fn exact(&mut self, formula: &Formula) -> Result<ProofSize<C>, OracleError> {
        match self.value(formula, None)? {
            Bounded::Exact(v) => Ok(v),
            Bounded::AtLeast => unreachable!("uncapped search is exact"),
        }
    }

    fn build_tree(&mut self, formula: &Formula) -> Result<SearchTree, OracleError> {
        let closed = self.config.discipline.close(formula);
        if closed.has_empty_clause() {
            return Ok(SearchTree::Empty);
        }
        let total = self.exact(&closed)?;
        for x in self.config.discipline.branch_candidates(&closed) {
            if self.rooted_size(&closed, x)? == total {
                let left = self.build_tree(&closed.assign(x.neg()))?;
                let right = self.build_tree(&closed.assign(x.pos()))?;
                return Ok(SearchTree::node(x, left, right));
            }
        }
        Err(OracleError::NoRefutation)
    }

    fn enumerate_trees(
        &mut self,
        formula: &Formula,
        limit: usize,
    ) -> Result<Vec<SearchTree>, OracleError> {
        let closed = self.config.discipline.close(formula);
        if closed.has_empty_clause() {
            return Ok(vec![SearchTree::Empty]);
        }
        let total = self.exact(&closed)?;
        let mut out = Vec::new();
        for x in self.config.discipline.branch_candidates(&closed) {
            if self.rooted_size(&closed, x)? != total {
                continue;
            }
            let lefts = self.enumerate_trees(&closed.assign(x.neg()), limit)?;
            let rights = self.enumerate_trees(&closed.assign(x.pos()), limit)?;
            for l in &lefts {
                for r in &rights {
                    if out.len() == limit {
                        return Ok(out);
                    }
                    out.push(SearchTree::node(x, l.clone(), r.clone()));
                }
            }
        }
        Ok(out)
    }

    fn value(&mut self, formula: &Formula, cap: Option<&C>) -> Result<Bounded<C>, OracleError> {
        self.explored += 1;
        if let Some(budget) = self.config.node_budget {
            if self.explored > budget {
                return Err(OracleError::BudgetExhausted { explored: self.explored - 1 });
            }
        }
        let closed = self.config.discipline.close(formula);
        if closed.has_empty_clause() {
            return Ok(Bounded::Exact(ProofSize::zero()));
        }
        if let Some(v) = self.memo.get(&closed) {
            if let (Some(c), ProofSize::Finite(n)) = (cap, v) {
                if n >= c {
                    return Ok(Bounded::AtLeast);
                }
            }
            return Ok(Bounded::Exact(v.clone()));
        }
        let floor = self.lower_bound(&closed);
        if cap.is_some_and(|c| *c <= floor) {
            return Ok(Bounded::AtLeast);
        }

        if cap.is_none() {
            if let Some(found) = self.deepen(&closed, &floor)? {
                return Ok(Bounded::Exact(found));
            }
        }

        if self.config.split_components {
            let parts = components(&closed);
            if parts.len() > 1 {
                return self.value_of_union(&closed, &parts, cap);
            }
        }

        let candidates = self.ordered_candidates(&closed);
        let mut best: Option<C> = None;
        let mut cut = false;
        for (_, neg, pos) in candidates {
            let limit = best.as_ref().or(cap).cloned();
            let left_cap = limit.as_ref().map(|l| l.checked_sub(&C::one()).expect("limit >= 1"));
            let left = match self.value(&neg, left_cap.as_ref())? {
                Bounded::AtLeast => {
                    cut = true;
                    continue;
                }
                Bounded::Exact(ProofSize::Infinite) => continue,
                Bounded::Exact(ProofSize::Finite(n)) => n,
            };
            let right_cap = left_cap.as_ref().map(|l| l.checked_sub(&left).expect("left < limit - 1"));
            let right = match self.value(&pos, right_cap.as_ref())? {
                Bounded::AtLeast => {
                    cut = true;
                    continue;
                }
                Bounded::Exact(ProofSize::Infinite) => continue,
                Bounded::Exact(ProofSize::Finite(n)) => n,
            };
            let candidate = left.add_exact(&right).succ();
            if limit.as_ref().is_none_or(|l| candidate < *l) {
                let done = candidate == floor;
                best = Some(candidate);
                if done {
                    break;
                }
            }
        }
        self.finish(closed, best, cut, cap)
    }

    /// Uncapped search as a series of capped ones with doubling caps, so a
    /// cheap small tree bounds the rest early. Gives up (returning `None`)
    /// once the cap exceeds every finite size over the formula's variables.
    fn deepen(&mut self, closed: &Formula, floor: &C) -> Result<Option<ProofSize<C>>, OracleError> {
        let two = C::one().add_exact(&C::one());
        let ceiling = (0..=closed.vars().len()).try_fold(C::one(), |acc, _| acc.checked_mul(&two));
        let Some(ceiling) = ceiling else { return Ok(None) };
        let mut cap = floor.mul_exact(&two);
        while cap < ceiling {
            if let Bounded::Exact(v) = self.value(closed, Some(&cap))? {
                return Ok(Some(v));
            }
            cap = cap.mul_exact(&two);
        }
        Ok(None)
    }

    /// Branch candidates with their closed children, most simplifying
    /// first: a good first candidate makes the bound on the others tight.
    /// The order never changes the value, only how much is cut.
    fn ordered_candidates(&self, closed: &Formula) -> Vec<(Variable, Formula, Formula)> {
        let discipline = &self.config.discipline;
        let weight = |f: &Formula| if f.has_empty_clause() { 0 } else { f.len() + 1 };
        let mut keyed: Vec<(usize, Variable, Formula, Formula)> = discipline
            .branch_candidates(closed)
            .into_iter()
            .map(|x| {
                let neg = discipline.close(&closed.assign(x.neg()));
                let pos = discipline.close(&closed.assign(x.pos()));
                (weight(&neg) + weight(&pos), x, neg, pos)
            })
            .collect();
        keyed.sort_by_key(|(w, x, _, _)| (*w, *x));
        keyed.into_iter().map(|(_, x, neg, pos)| (x, neg, pos)).collect()
    }

    /// A lower bound for a closed, ⊥-free formula (any bound holds when it is
    /// satisfiable): one node,
    /// or for backtracking, where every leaf falsifies a whole clause, both
    /// `2^w - 1` for the narrowest clause width `w` and one less than the
    /// number of clauses in a smallest unsatisfiable subset.
    fn lower_bound(&self, closed: &Formula) -> C {
        let mut bound = C::one();
        if self.config.discipline.kind == crate::trees::Calculus::Backtracking {
            let width = closed.clauses().iter().map(|c| c.len()).min().unwrap_or(0);
            if (2..64).contains(&width) {
                bound = C::from_u64((1u64 << width) - 1).unwrap_or(bound);
            }
            if closed.len() <= NECESSARY_CLAUSE_LIMIT {
                let leaves = necessary_clauses(closed);
                if leaves > 1 {
                    bound = bound.max(C::from_usize_exact(leaves - 1));
                }
            }
        }
        if let Some(known) = self.floors.get(closed) {
            if *known > bound {
                bound = known.clone();
            }
        }
        bound
    }

    fn finish(
        &mut self,
        closed: Formula,
        best: Option<C>,
        cut: bool,
        cap: Option<&C>,
    ) -> Result<Bounded<C>, OracleError> {
        let result = match best {
            Some(n) => ProofSize::Finite(n),
            None if cut => {
                if self.config.memo_enabled {
                    let cap = cap.expect("cuts only happen under a cap").clone();
                    self.floors.insert(closed, cap);
                }
                return Ok(Bounded::AtLeast);
            }
            None => ProofSize::Infinite,
        };
        if self.config.memo_enabled {
            self.floors.remove(&closed);
            self.memo.insert(closed, result.clone());
        }
        Ok(Bounded::Exact(result))
    }

    fn value_of_union(
        &mut self,
        closed: &Formula,
        parts: &[Formula],
        cap: Option<&C>,
    ) -> Result<Bounded<C>, OracleError> {
        let mut best: Option<C> = None;
        let mut cut = false;
        for part in parts {
            if is_satisfiable(part) {
                continue;
            }
            let limit = best.as_ref().or(cap).cloned();
            match self.value(part, limit.as_ref())? {
                Bounded::AtLeast => cut = true,
                Bounded::Exact(ProofSize::Finite(n)) => best = Some(n),
                Bounded::Exact(ProofSize::Infinite) => {}
            }
        }
        self.finish(closed.clone(), best, cut, cap)
    }
}


/// Above this many clauses the one satisfiability check per clause costs more
/// than the bound saves.
const NECESSARY_CLAUSE_LIMIT: usize = 40;

/// A lower bound on the number of clauses in any unsatisfiable subset of the
/// subsumption-free part of an unsatisfiable formula: every clause whose
/// removal leaves it satisfiable counts, plus one more if those clauses are
/// themselves satisfiable.
fn necessary_clauses(formula: &Formula) -> usize {
    let cs = formula.clauses();
    let minimal = Formula::new(
        cs.iter()
            .filter(|d| !cs.iter().any(|c| c != *d && c.is_subset_of(d)))
            .cloned(),
    );
    let formula = &minimal;
    let necessary: Vec<_> = formula
        .clauses()
        .iter()
        .filter(|c| is_satisfiable(&formula.without(c)))
        .cloned()
        .collect();
    let count = necessary.len();
    if is_satisfiable(&Formula::new(necessary)) {
        count + 1
    } else {
        count
    }
}

/// `s(F)`; `Infinite` for satisfiable or unrefutable inputs.
pub fn optimal_size<C: Count>(
    formula: &Formula,
    config: &OracleConfig,
) -> Result<ProofSize<C>, OracleError> {
    Oracle::new(config.clone())?.size(formula)
}

/// A minimum-size search tree, ties broken by lowest variable id.
pub fn optimal_tree(formula: &Formula, config: &OracleConfig) -> Result<SearchTree, OracleError> {
    Oracle::<u64>::new(config.clone())?.tree(formula)
}

/// Whether `x` is the root of some optimal search tree of `F`.
pub fn is_optimal_branch_var(
    formula: &Formula,
    x: Variable,
    config: &OracleConfig,
) -> Result<bool, OracleError> {
    Oracle::<u64>::new(config.clone())?.is_optimal_root(formula, x)
}

/// Whether `F` has a search tree of size at most `k`.
pub fn has_tree_within<C: Count>(
    formula: &Formula,
    k: &C,
    config: &OracleConfig,
) -> Result<bool, OracleError> {
    Oracle::<C>::new(config.clone())?.within(formula, k)
}

/// Variables of `F` that the discipline may branch on at the root.
pub fn root_candidates(formula: &Formula, discipline: &TreeDiscipline) -> BTreeSet<Variable> {
    discipline.branch_candidates(&discipline.close(formula)).into_iter().collect()
}

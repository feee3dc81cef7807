//! Restriction, unit propagation, the monotone literal rule, satisfiability
//! and model counting.

use std::collections::{BTreeMap, BTreeSet};

use thiserror::Error;

use super::{Clause, Formula, Literal, PartialAssignment, Variable};
use crate::count::Count;

/// `F|I`: clauses satisfied by `I` are dropped and falsified literals are
/// deleted from the rest.
pub fn restrict(formula: &Formula, assignment: &PartialAssignment) -> Formula {
    if assignment.is_empty() {
        return formula.clone();
    }
    Formula::new(formula.clauses().iter().filter_map(|clause| {
        let mut kept = Vec::with_capacity(clause.len());
        for &lit in clause.literals() {
            match assignment.value(lit.var()) {
                Some(v) if v == lit.is_positive() => return None,
                Some(_) => {}
                None => kept.push(lit),
            }
        }
        Some(Clause::new(kept))
    }))
}

/// Unit propagation to fixpoint.
///
/// Returns the residual formula and the forced bindings. A conflict is
/// reported as the residual `{⊥}`; bindings made before the conflict are
/// kept. Units are taken in canonical clause order, which makes the
/// bindings deterministic.
pub fn unit_propagate(formula: &Formula) -> (Formula, PartialAssignment) {
    let mut current = formula.clone();
    let mut forced = PartialAssignment::new();
    loop {
        if current.has_empty_clause() {
            return (Formula::contradiction(), forced);
        }
        let Some(unit) = current.clauses().iter().find(|c| c.is_unit()) else {
            return (current, forced);
        };
        let lit = unit.literals()[0];
        forced.bind(lit.var(), lit.is_positive());
        current = current.assign(lit);
    }
}

/// One simultaneous pass of the monotone literal rule: every variable that
/// currently occurs with a single polarity is set to satisfy its
/// occurrences.
pub fn pure_eliminate(formula: &Formula) -> (Formula, PartialAssignment) {
    let mut polarity: BTreeMap<Variable, (bool, bool)> = BTreeMap::new();
    for clause in formula.clauses() {
        for lit in clause.literals() {
            let entry = polarity.entry(lit.var()).or_default();
            if lit.is_positive() {
                entry.0 = true;
            } else {
                entry.1 = true;
            }
        }
    }
    let pure = PartialAssignment::from_literals(
        polarity
            .into_iter()
            .filter(|(_, (p, n))| p != n)
            .map(|(v, (p, _))| Literal::new(v, p)),
    )
    .expect("pure variables are distinct");
    if pure.is_empty() {
        return (formula.clone(), pure);
    }
    (restrict(formula, &pure), pure)
}

/// `D(F)`: unit propagation to fixpoint interleaved with single monotone
/// passes, until neither rule changes the formula.
pub fn dpll_closure(formula: &Formula) -> Formula {
    let mut current = formula.clone();
    loop {
        let (propagated, _) = unit_propagate(&current);
        if propagated.has_empty_clause() {
            return propagated;
        }
        let (pured, assigned) = pure_eliminate(&propagated);
        if assigned.is_empty() {
            return propagated;
        }
        current = pured;
    }
}

/// Decides satisfiability by DPLL with component splitting, branching on the
/// most frequent variable.
pub fn is_satisfiable(formula: &Formula) -> bool {
    let closed = dpll_closure(formula);
    if closed.has_empty_clause() {
        return false;
    }
    if closed.is_empty() {
        return true;
    }
    let mut parts = components(&closed);
    if parts.len() > 1 {
        parts.sort_by_key(|p| p.len());
        return parts.iter().all(is_satisfiable);
    }
    let mut counts: BTreeMap<Literal, usize> = BTreeMap::new();
    for clause in closed.clauses() {
        for &lit in clause.literals() {
            *counts.entry(lit).or_default() += 1;
        }
    }
    let occurrences = |v: Variable| {
        counts.get(&v.pos()).copied().unwrap_or(0)
            + counts.get(&v.neg()).copied().unwrap_or(0)
    };
    let var = closed
        .vars()
        .into_iter()
        .max_by_key(|&v| (occurrences(v), std::cmp::Reverse(v)))
        .expect("nonempty formula has a variable");
    let pos = var.pos();
    let first = if counts.get(&pos).copied().unwrap_or(0) >= counts.get(&pos.negate()).copied().unwrap_or(0) {
        pos
    } else {
        pos.negate()
    };
    is_satisfiable(&closed.assign(first)) || is_satisfiable(&closed.assign(first.negate()))
}

/// Splits a formula into variable-connected components (ascending by
/// smallest variable). Empty clauses never reach here.
pub fn components(formula: &Formula) -> Vec<Formula> {
    let vars: Vec<Variable> = formula.vars().into_iter().collect();
    let index = |v: Variable| vars.binary_search(&v).expect("variable of formula");
    let mut parent: Vec<usize> = (0..vars.len()).collect();
    fn find(parent: &mut [usize], i: usize) -> usize {
        let mut r = i;
        while parent[r] != r {
            r = parent[r];
        }
        let mut j = i;
        while parent[j] != r {
            let next = parent[j];
            parent[j] = r;
            j = next;
        }
        r
    }
    for clause in formula.clauses() {
        let mut it = clause.vars();
        if let Some(first) = it.next() {
            let a = find(&mut parent, index(first));
            for v in it {
                let b = find(&mut parent, index(v));
                parent[b] = a;
            }
        }
    }
    let mut groups: Vec<(usize, Vec<Clause>)> = Vec::new();
    for clause in formula.clauses() {
        let Some(first) = clause.vars().next() else { continue };
        let root = find(&mut parent, index(first));
        match groups.iter_mut().find(|(r, _)| *r == root) {
            Some((_, cs)) => cs.push(clause.clone()),
            None => groups.push((root, vec![clause.clone()])),
        }
    }
    groups.into_iter().map(|(_, cs)| Formula::new(cs)).collect()
}


#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("variable {0} of the formula is not in the counting universe")]
pub struct MissingUniverseVariable(pub Variable);

/// Number of total assignments over `universe` that satisfy `formula`.
pub fn count_models<C: Count>(
    formula: &Formula,
    universe: &BTreeSet<Variable>,
) -> Result<C, MissingUniverseVariable> {
    if let Some(v) = formula.vars().into_iter().find(|v| !universe.contains(v)) {
        return Err(MissingUniverseVariable(v));
    }
    Ok(count_split(formula, universe.len()))
}

// `free` is the number of universe variables not yet assigned; all of the
// formula's variables are among them.
fn count_split<C: Count>(formula: &Formula, free: usize) -> C {
    if formula.has_empty_clause() {
        return C::zero();
    }
    let Some(var) = formula.clauses().first().and_then(|c| c.literals().first()).map(|l| l.var())
    else {
        return C::pow2(free);
    };
    let lo: C = count_split(&formula.assign(var.neg()), free - 1);
    let hi: C = count_split(&formula.assign(var.pos()), free - 1);
    lo.add_exact(&hi)
}

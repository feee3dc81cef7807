#![allow(dead_code)]

use optproof::cnf::is_satisfiable;
use optproof::{Clause, Formula, Literal, Variable};
use proptest::prelude::*;

fn clause(vars: u32, max_width: usize) -> impl Strategy<Value = Clause> {
    prop::collection::vec((1..=vars, any::<bool>()), 1..=max_width)
        .prop_map(|lits| Clause::new(lits.into_iter().map(|(v, s)| Literal::new(Variable::new(v), s))))
}

/// Arbitrary formula over variables `1..=vars`.
pub fn formula(vars: u32, max_clauses: usize) -> impl Strategy<Value = Formula> {
    prop::collection::vec(clause(vars, 3), 0..=max_clauses).prop_map(Formula::new)
}

fn models(f: &Formula, vars: u32) -> Vec<Vec<Literal>> {
    (0..1u32 << vars)
        .map(|bits| (1..=vars).map(|v| Literal::new(Variable::new(v), bits >> (v - 1) & 1 == 1)).collect::<Vec<_>>())
        .filter(|lits| f.clauses().iter().all(|c| c.literals().iter().any(|l| lits.contains(l))))
        .collect()
}

/// Unsatisfiable formula over variables `1..=vars`: a random formula, then
/// clauses blocking one model at a time, each the negation of a few of the
/// model's literals, until no model is left.
pub fn unsat_formula(vars: u32) -> impl Strategy<Value = Formula> {
    (formula(vars, 4), prop::collection::vec(any::<u32>(), 32)).prop_map(move |(mut f, choices)| {
        let mut rng = choices.into_iter().cycle();
        loop {
            let found = models(&f, vars);
            let Some(model) = found.first() else { break f };
            let width = 1 + rng.next().unwrap() as usize % vars.min(3) as usize;
            let mut picked: Vec<Literal> = Vec::new();
            while picked.len() < width {
                let l = model[rng.next().unwrap() as usize % model.len()];
                if !picked.contains(&l) {
                    picked.push(l);
                }
            }
            f = f.union(&Formula::new([Clause::new(picked.into_iter().map(Literal::negate))]));
        }
    })
}

/// Renames every variable `v` to `v + offset`.
pub fn shifted(f: &Formula, offset: u32) -> Formula {
    f.map_vars(|v| Variable::new(v.id() + offset))
}

/// Pair of variable-disjoint unsatisfiable formulas.
pub fn disjoint_unsat_pair(vars: u32) -> impl Strategy<Value = (Formula, Formula)> {
    (unsat_formula(vars), unsat_formula(vars)).prop_map(move |(f, h)| (f, shifted(&h, vars)))
}

pub fn assert_unsat(f: &Formula) {
    assert!(!is_satisfiable(f), "{f} should be unsatisfiable");
}

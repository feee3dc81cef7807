mod common;

use std::collections::BTreeSet;

use num_bigint::BigUint;
use optproof::cnf::{
    count_models, dpll_closure, is_satisfiable, parse_dimacs, parse_formula, restrict, unit_propagate,
    write_dimacs,
};
use optproof::{Formula, PartialAssignment, Variable};
use proptest::prelude::*;

fn assignment(bits: &[Option<bool>]) -> PartialAssignment {
    let mut a = PartialAssignment::new();
    for (i, b) in bits.iter().enumerate() {
        if let Some(b) = b {
            a.bind(Variable::new(i as u32 + 1), *b);
        }
    }
    a
}

proptest! {
    #[test]
    fn restriction_composes(f in common::formula(4, 8), a in prop::collection::vec(prop::option::of(any::<bool>()), 4), mask in any::<u8>()) {
        let first: Vec<_> = a.iter().enumerate().map(|(i, b)| if mask >> i & 1 == 1 { *b } else { None }).collect();
        let second: Vec<_> = a.iter().enumerate().map(|(i, b)| if mask >> i & 1 == 0 { *b } else { None }).collect();
        let (i1, i2) = (assignment(&first), assignment(&second));
        let both = i1.merged(&i2).unwrap();
        prop_assert_eq!(restrict(&restrict(&f, &i1), &i2), restrict(&f, &both));
    }

    #[test]
    fn unit_propagation_leaves_no_units(f in common::formula(4, 8)) {
        let (residual, _) = unit_propagate(&f);
        if residual != Formula::contradiction() {
            prop_assert!(residual.clauses().iter().all(|c| !c.is_unit()), "{}", residual);
        }
        prop_assert_eq!(unit_propagate(&residual).0, residual);
    }

    #[test]
    fn closure_preserves_satisfiability(f in common::formula(4, 10)) {
        prop_assert_eq!(is_satisfiable(&f), is_satisfiable(&dpll_closure(&f)));
    }

    #[test]
    fn model_count_splits(f in common::formula(4, 8), split in 1u32..=4) {
        let universe: BTreeSet<Variable> = (1..=4).map(Variable::new).collect();
        let x = Variable::new(split);
        let mut rest = universe.clone();
        rest.remove(&x);
        let total: BigUint = count_models(&f, &universe).unwrap();
        let pos: BigUint = count_models(&f.assign(x.pos()), &rest).unwrap();
        let neg: BigUint = count_models(&f.assign(x.neg()), &rest).unwrap();
        prop_assert_eq!(total, pos + neg);
    }

    #[test]
    fn satisfiable_iff_some_model(f in common::formula(4, 10)) {
        let universe: BTreeSet<Variable> = (1..=4).map(Variable::new).collect();
        let n: u64 = count_models(&f, &universe).unwrap();
        prop_assert_eq!(is_satisfiable(&f), n > 0);
    }

    #[test]
    fn dimacs_round_trip(f in common::formula(4, 8)) {
        prop_assert_eq!(parse_dimacs(&write_dimacs(&f)).unwrap(), f);
    }

    #[test]
    fn text_round_trip(f in common::formula(4, 8)) {
        prop_assert_eq!(parse_formula(&f.to_string()).unwrap(), f);
    }

    #[test]
    fn generated_pool_is_unsat(f in common::unsat_formula(4)) {
        common::assert_unsat(&f);
    }
}

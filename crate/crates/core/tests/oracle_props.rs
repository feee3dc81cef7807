mod common;

use optproof::optimal::{optimal_size, optimal_tree, Oracle};
use optproof::trees::validate_tree;
use optproof::{OracleConfig, ProofSize, Size, TreeDiscipline};
use proptest::prelude::*;

fn disciplines() -> [TreeDiscipline; 3] {
    [TreeDiscipline::backtracking(), TreeDiscipline::dpll_mono(), TreeDiscipline::dpll()]
}

fn size(f: &optproof::Formula, d: TreeDiscipline) -> Size {
    optimal_size(f, &OracleConfig::new(d)).unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(128))]

    #[test]
    fn optimal_tree_is_valid_and_optimal(f in common::unsat_formula(4)) {
        for d in disciplines() {
            let config = OracleConfig::new(d.clone());
            let tree = optimal_tree(&f, &config).unwrap();
            prop_assert!(validate_tree(&f, &tree, &d), "{} {}", f, tree);
            prop_assert_eq!(ProofSize::finite(tree.size() as u64), size(&f, d));
            prop_assert_eq!(tree.empty_subtrees(), tree.size() + 1);
        }
    }

    #[test]
    fn stronger_calculi_are_smaller(f in common::unsat_formula(4)) {
        let bt = size(&f, TreeDiscipline::backtracking());
        let mono = size(&f, TreeDiscipline::dpll_mono());
        let dpll = size(&f, TreeDiscipline::dpll());
        prop_assert!(dpll <= mono && mono <= bt, "{}: {} {} {}", f, dpll, mono, bt);
    }

    #[test]
    fn complete_tree_bounds_size(f in common::unsat_formula(4)) {
        let n = f.vars().len() as u32;
        prop_assert!(size(&f, TreeDiscipline::backtracking()) <= ProofSize::finite((1u64 << n) - 1));
    }

    #[test]
    fn restriction_never_helps(f in common::unsat_formula(4), mask in any::<u8>()) {
        for d in disciplines() {
            let all = size(&f, d.clone());
            let vars = f.vars();
            prop_assert_eq!(&all, &size(&f, d.clone().restricted_to(vars.iter().copied())));
            let kept = vars.iter().copied().filter(|v| mask >> (v.id() - 1) & 1 == 1);
            prop_assert!(all <= size(&f, d.restricted_to(kept)));
        }
    }

    #[test]
    fn memo_does_not_change_results(f in common::formula(4, 10)) {
        for d in disciplines() {
            let with: Size = optimal_size(&f, &OracleConfig::new(d.clone())).unwrap();
            let without: Size = optimal_size(&f, &OracleConfig::new(d.clone()).without_memo()).unwrap();
            let split: Size = optimal_size(&f, &OracleConfig::new(d).splitting_components()).unwrap();
            prop_assert_eq!(&with, &without);
            prop_assert_eq!(&with, &split);
        }
    }

    #[test]
    fn satisfiable_means_infinite(f in common::formula(4, 6)) {
        if optproof::cnf::is_satisfiable(&f) {
            for d in disciplines() {
                prop_assert_eq!(size(&f, d), ProofSize::Infinite);
            }
        }
    }

    #[test]
    fn optimal_roots_match_rooted_trees(f in common::unsat_formula(3)) {
        let mut oracle = Oracle::<u64>::new(OracleConfig::new(TreeDiscipline::backtracking())).unwrap();
        let total = oracle.size(&f).unwrap();
        let roots = oracle.optimal_roots(&f).unwrap();
        for tree in oracle.all_optimal_trees(&f, 50).unwrap() {
            prop_assert_eq!(ProofSize::finite(tree.size() as u64), total.clone());
            if let Some(r) = tree.root() {
                prop_assert!(roots.contains(&r));
            }
        }
    }
}

#[test]
fn budget_exhaustion_is_reported() {
    let f = optproof::Formula::from_dimacs(&[&[1, 2, 3], &[1, 2, -3], &[1, -2, 3], &[1, -2, -3], &[-1, 2], &[-1, -2]]);
    let err = optimal_size::<u64>(&f, &OracleConfig::new(TreeDiscipline::backtracking()).with_budget(2)).unwrap_err();
    assert!(matches!(err, optproof::OracleError::BudgetExhausted { .. }));
}

mod common;

use optproof::combinators::{
    lemma1_tree_back, mono_shield, product, product_tree, shield_tree_back, sum, to_dpll_equivalent,
    union_disjoint, FreshAllocator,
};
use optproof::optimal::{optimal_size, optimal_tree};
use optproof::trees::validate_tree;
use optproof::{Formula, OracleConfig, ProofSize, Size, TreeDiscipline};
use proptest::prelude::*;

fn bt(f: &Formula) -> Size {
    optimal_size(f, &OracleConfig::new(TreeDiscipline::backtracking())).unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn union_takes_the_minimum((f, h) in common::disjoint_unsat_pair(3)) {
        prop_assert_eq!(bt(&union_disjoint(&f, &h).unwrap()), bt(&f).min(bt(&h)));
    }

    #[test]
    fn sum_adds_one((f, h) in common::disjoint_unsat_pair(3)) {
        let (s, _) = sum(&f, &h, &mut FreshAllocator::new()).unwrap();
        prop_assert_eq!(bt(&s), bt(&f).plus(&bt(&h)).succ());
    }

    #[test]
    fn product_multiplies((f, h) in common::disjoint_unsat_pair(2)) {
        let (sf, sh) = (bt(&f), bt(&h));
        let p = product(&f, &h).unwrap();
        prop_assert_eq!(bt(&p), sf.times(&sh).plus(&sf).plus(&sh));
        let config = OracleConfig::new(TreeDiscipline::backtracking());
        let t = product_tree(&optimal_tree(&f, &config).unwrap(), &optimal_tree(&h, &config).unwrap());
        prop_assert!(validate_tree(&p, &t, &TreeDiscipline::backtracking()));
        prop_assert_eq!(ProofSize::finite(t.size() as u64), bt(&p));
    }

    #[test]
    fn dpll_image_keeps_backtracking_size(f in common::unsat_formula(3)) {
        let image = to_dpll_equivalent(&f, &mut FreshAllocator::new());
        let config = OracleConfig::new(TreeDiscipline::dpll());
        prop_assert_eq!(optimal_size::<u64>(&image.formula, &config).unwrap(), bt(&f));
        let back = lemma1_tree_back(&optimal_tree(&image.formula, &config).unwrap(), &image.mirror).unwrap();
        prop_assert!(validate_tree(&f, &back, &TreeDiscipline::backtracking()));
        prop_assert_eq!(ProofSize::finite(back.size() as u64), bt(&f));
    }

    #[test]
    fn shield_keeps_mono_size(f in common::unsat_formula(3)) {
        let shielded = mono_shield(&f, &mut FreshAllocator::new());
        let config = OracleConfig::new(TreeDiscipline::dpll());
        let mono = optimal_size::<u64>(&f, &OracleConfig::new(TreeDiscipline::dpll_mono())).unwrap();
        prop_assert_eq!(optimal_size::<u64>(&shielded.formula, &config).unwrap(), mono.clone());
        let back = shield_tree_back(&optimal_tree(&shielded.formula, &config).unwrap(), &shielded.mirror).unwrap();
        prop_assert!(validate_tree(&f, &back, &TreeDiscipline::dpll_mono()));
        prop_assert_eq!(ProofSize::finite(back.size() as u64), mono);
    }
}

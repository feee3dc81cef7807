//! Seeded random CNF instances.
//!
//! Instances are random CNF with clause width k, or k - 1 one time in four
//! (k = 2 or 3, or 1 over a single variable), and a fixed clause/variable
//! ratio per k. The variable count n is drawn with weight n and kept while
//! filtering for (un)satisfiability, so small formulas do not crowd out
//! larger ones.

use optproof::cnf::is_satisfiable;
use optproof::{Clause, Formula, Literal, Variable};
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// Clauses per variable, indexed by clause width.
pub const CLAUSE_RATIO: [u32; 4] = [0, 2, 3, 6];
const MAX_WIDTH: u32 = 3;
const MAX_ATTEMPTS: usize = 10_000;

pub struct InstanceGenerator {
    rng: ChaCha8Rng,
    max_vars: u32,
}

impl InstanceGenerator {
    pub fn new(seed: u64, max_vars: u32) -> InstanceGenerator {
        InstanceGenerator { rng: ChaCha8Rng::seed_from_u64(seed), max_vars: max_vars.max(1) }
    }

    pub fn max_vars(&self) -> u32 {
        self.max_vars
    }

    pub fn rng(&mut self) -> &mut ChaCha8Rng {
        &mut self.rng
    }

    /// A random formula over exactly the variables `1..=vars` (some of which
    /// may end up unused).
    pub fn formula_over(&mut self, vars: u32) -> Formula {
        let ids: Vec<u32> = (1..=vars).collect();
        let k = self.rng.gen_range(vars.min(2)..=vars.min(MAX_WIDTH)) as usize;
        let clauses = (0..CLAUSE_RATIO[k] * vars).map(|_| {
            let width = if k > 1 && self.rng.gen_ratio(1, 4) { k - 1 } else { k };
            let picked = ids.choose_multiple(&mut self.rng, width).copied().collect::<Vec<_>>();
            Clause::new(picked.into_iter().map(|v| Literal::new(Variable::new(v), self.rng.gen())))
        });
        Formula::new(clauses.collect::<Vec<_>>())
    }

    fn draw(&mut self, want_unsat: bool, max_vars: u32) -> Formula {
        let total = max_vars * (max_vars + 1) / 2;
        let mut ticket = self.rng.gen_range(0..total);
        let mut vars = 1;
        while ticket >= vars {
            ticket -= vars;
            vars += 1;
        }
        for _ in 0..MAX_ATTEMPTS {
            let f = self.formula_over(vars);
            if is_satisfiable(&f) != want_unsat {
                return f;
            }
        }
        panic!("no {} instance in {MAX_ATTEMPTS} draws", if want_unsat { "unsatisfiable" } else { "satisfiable" })
    }

    pub fn unsat(&mut self) -> Formula {
        self.draw(true, self.max_vars)
    }

    pub fn sat(&mut self) -> Formula {
        self.draw(false, self.max_vars)
    }

    /// Unsatisfiable with at most `max_vars` variables (capped by the
    /// generator's own limit).
    pub fn unsat_within(&mut self, max_vars: u32) -> Formula {
        self.draw(true, max_vars.min(self.max_vars).max(1))
    }

    pub fn sat_within(&mut self, max_vars: u32) -> Formula {
        self.draw(false, max_vars.min(self.max_vars).max(1))
    }

    /// Satisfiable or not with equal probability.
    pub fn either_within(&mut self, max_vars: u32) -> Formula {
        if self.rng.gen() {
            self.unsat_within(max_vars)
        } else {
            self.sat_within(max_vars)
        }
    }

    /// Two unsatisfiable formulas on disjoint variables.
    pub fn disjoint_unsat_pair(&mut self, max_vars: u32) -> (Formula, Formula) {
        let f = self.unsat_within(max_vars);
        let h = self.unsat_within(max_vars);
        let offset = max_vars.min(self.max_vars);
        (f, shifted(&h, offset))
    }
}

/// Renames `v` to `v + offset`.
pub fn shifted(f: &Formula, offset: u32) -> Formula {
    f.map_vars(|v| Variable::new(v.id() + offset))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn same_seed_same_instances() {
        let mut a = InstanceGenerator::new(11, 4);
        let mut b = InstanceGenerator::new(11, 4);
        for _ in 0..20 {
            assert_eq!(a.unsat(), b.unsat());
            assert_eq!(a.sat(), b.sat());
        }
    }

    #[test]
    fn pools_are_filtered() {
        let mut g = InstanceGenerator::new(3, 4);
        for _ in 0..50 {
            let u = g.unsat();
            assert!(!is_satisfiable(&u));
            assert!(u.vars().len() <= 4);
            assert!(is_satisfiable(&g.sat()));
        }
    }

    #[test]
    fn pairs_are_disjoint() {
        let mut g = InstanceGenerator::new(5, 3);
        for _ in 0..20 {
            let (f, h) = g.disjoint_unsat_pair(3);
            assert!(f.is_disjoint_from(&h));
        }
    }
}

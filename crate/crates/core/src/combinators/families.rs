//! Classic unsatisfiable families used as size padding and benchmarks.

use std::fmt;
use std::str::FromStr;

use crate::cnf::{Clause, Formula, Literal, Variable};

use super::{ConstructionError, FreshAllocator};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum HardFamily {
    /// `param + 1` pigeons into `param` holes.
    Php,
    /// Tseitin parity constraints on the complete graph `K_param`, with
    /// charge 1 on the first vertex only.
    Tseitin,
    /// All `2^param` full-width clauses over `param` variables.
    CompleteK,
}

impl HardFamily {
    pub fn name(self) -> &'static str {
        match self {
            HardFamily::Php => "php",
            HardFamily::Tseitin => "tseitin",
            HardFamily::CompleteK => "completek",
        }
    }
}

impl fmt::Display for HardFamily {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for HardFamily {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.to_ascii_lowercase().as_str() {
            "php" => Ok(HardFamily::Php),
            "tseitin" => Ok(HardFamily::Tseitin),
            "completek" | "complete-k" | "complete" => Ok(HardFamily::CompleteK),
            other => Err(format!("unknown family '{other}' (expected php, tseitin or completek)")),
        }
    }
}

/// Builds a member of `family` over fresh variables.
pub fn hard_family(
    family: HardFamily,
    param: usize,
    alloc: &mut FreshAllocator,
) -> Result<Formula, ConstructionError> {
    if param == 0 {
        return Err(ConstructionError::Precondition("family parameter must be >= 1".into()));
    }
    match family {
        HardFamily::Php => Ok(php(param, alloc)),
        HardFamily::Tseitin if param < 2 => {
            Err(ConstructionError::Precondition("Tseitin needs at least 2 vertices".into()))
        }
        HardFamily::Tseitin => Ok(tseitin_complete(param, alloc)),
        HardFamily::CompleteK => Ok(complete_k(param, alloc)),
    }
}

fn php(holes: usize, alloc: &mut FreshAllocator) -> Formula {
    let pigeons = holes + 1;
    // p[i][j]: pigeon i sits in hole j
    let p: Vec<Vec<Variable>> = (0..pigeons).map(|_| alloc.fresh_many(holes)).collect();
    let mut clauses: Vec<Clause> = p.iter().map(|row| Clause::new(row.iter().map(|v| v.pos()))).collect();
    for j in 0..holes {
        for i in 0..pigeons {
            for k in i + 1..pigeons {
                clauses.push(Clause::new([p[i][j].neg(), p[k][j].neg()]));
            }
        }
    }
    Formula::new(clauses)
}

fn tseitin_complete(n: usize, alloc: &mut FreshAllocator) -> Formula {
    let mut edges = Vec::new();
    for i in 0..n {
        for j in i + 1..n {
            edges.push((i, j, alloc.fresh()));
        }
    }
    let mut clauses = Vec::new();
    for vertex in 0..n {
        let incident: Vec<Variable> =
            edges.iter().filter(|(i, j, _)| *i == vertex || *j == vertex).map(|e| e.2).collect();
        let charge = u32::from(vertex == 0);
        for bits in 0u64..1 << incident.len() {
            if bits.count_ones() % 2 == charge {
                continue;
            }
            // forbid this assignment of the incident edges
            let lits = incident
                .iter()
                .enumerate()
                .map(|(k, e)| Literal::new(*e, bits >> k & 1 == 0));
            clauses.push(Clause::new(lits));
        }
    }
    Formula::new(clauses)
}

fn complete_k(n: usize, alloc: &mut FreshAllocator) -> Formula {
    let vars = alloc.fresh_many(n);
    let clauses = (0u64..1 << n).map(|bits| {
        Clause::new(vars.iter().enumerate().map(|(k, v)| Literal::new(*v, bits >> k & 1 == 1)))
    });
    Formula::new(clauses)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cnf::is_satisfiable;
    use crate::optimal::{optimal_size, OracleConfig};
    use crate::trees::TreeDiscipline;
    use crate::ProofSize;

    fn bt(f: &Formula) -> ProofSize<u64> {
        optimal_size(f, &OracleConfig::new(TreeDiscipline::backtracking())).unwrap()
    }

    #[test]
    fn php_one_hole() {
        let f = hard_family(HardFamily::Php, 1, &mut FreshAllocator::new()).unwrap();
        assert_eq!(f, Formula::from_dimacs(&[&[1], &[2], &[-1, -2]]));
        assert_eq!(bt(&f), ProofSize::finite(2));
    }

    #[test]
    fn complete_k_sizes() {
        for n in 1..=4 {
            let f = hard_family(HardFamily::CompleteK, n, &mut FreshAllocator::new()).unwrap();
            assert_eq!(f.len(), 1 << n);
            assert_eq!(bt(&f), ProofSize::finite((1 << n) - 1));
        }
    }

    #[test]
    fn tseitin_is_unsatisfiable() {
        for n in 2..=5 {
            let f = hard_family(HardFamily::Tseitin, n, &mut FreshAllocator::new()).unwrap();
            assert!(!is_satisfiable(&f), "K_{n}");
        }
        let k2 = hard_family(HardFamily::Tseitin, 2, &mut FreshAllocator::new()).unwrap();
        assert_eq!(k2, Formula::from_dimacs(&[&[1], &[-1]]));
        assert!(hard_family(HardFamily::Tseitin, 1, &mut FreshAllocator::new()).is_err());
    }

    #[test]
    fn family_names_round_trip() {
        for fam in [HardFamily::Php, HardFamily::Tseitin, HardFamily::CompleteK] {
            assert_eq!(fam.name().parse::<HardFamily>().unwrap(), fam);
        }
    }
}

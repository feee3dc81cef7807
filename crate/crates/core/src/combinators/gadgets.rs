//! Restricted-branching gadgets for DPLL-Mono and exact-size formulas.

use std::collections::BTreeSet;

use crate::cnf::{Clause, Formula, Variable};
use crate::trees::Calculus;

use super::{sum, to_dpll_equivalent, Construction, ConstructionError, FreshAllocator, Role};

/// `c_X(F)`: every clause of `F` gains `¬a ∨ ¬b`; each `x_i ∈ X` gets a fresh
/// `v_i` with `¬x_i ∨ v_i` and `x_i ∨ v_i`; and `¬v_1 ∨ … ∨ ¬v_n` is joined
/// with `a` and with `b`.
///
/// Branching is allowed on `X` plus whatever was branchable in `F`. Some
/// optimal tree then branches all of `X` first, which gives
/// `s(c_X(F)) = 2^n - 1 + Σ_{X'} s(F|X')`.
pub fn c_transform(
    inner: &Construction,
    x: &BTreeSet<Variable>,
    alloc: &mut FreshAllocator,
) -> Result<Construction, ConstructionError> {
    let vars = inner.formula.vars();
    if let Some(missing) = x.iter().find(|v| !vars.contains(v)) {
        return Err(ConstructionError::NotInFormula(*missing));
    }
    Ok(c_gadget(inner, x, alloc))
}

/// `c_X` without requiring `X ⊆ Var(F)`.
pub(crate) fn c_gadget(
    inner: &Construction,
    x: &BTreeSet<Variable>,
    alloc: &mut FreshAllocator,
) -> Construction {
    alloc.reserve(&inner.formula);
    for v in x {
        alloc.reserve_var(*v);
    }
    let vs = alloc.fresh_many(x.len());
    let a = alloc.fresh();
    let b = alloc.fresh();

    let guard = Clause::new([a.neg(), b.neg()]);
    let mut clauses: Vec<Clause> = inner.formula.clauses().iter().map(|c| c.or(&guard)).collect();
    for (xi, vi) in x.iter().zip(&vs) {
        clauses.push(Clause::new([xi.neg(), vi.pos()]));
        clauses.push(Clause::new([xi.pos(), vi.pos()]));
    }
    let all_v = Clause::new(vs.iter().map(|v| v.neg()));
    clauses.push(all_v.with(a.pos()));
    clauses.push(all_v.with(b.pos()));

    let mut out = inner.clone();
    out.formula = Formula::new(clauses);
    out.branchable.extend(x.iter().copied());
    out.roles.extend(vs.iter().map(|v| (*v, Role::V)));
    out.roles.insert(a, Role::A);
    out.roles.insert(b, Role::B);
    out
}

/// The DPLL-Mono sum `F +_x H = c_{x}((F ∨ x) ∪ (H ∨ ¬x))`.
pub fn sum_mono(
    f: &Construction,
    h: &Construction,
    alloc: &mut FreshAllocator,
) -> Result<(Construction, Variable), ConstructionError> {
    let (formula, x) = sum(&f.formula, &h.formula, alloc)?;
    let mut body = f.union(h)?;
    body.formula = formula;
    body.roles.insert(x, Role::Connective);
    let out = c_gadget(&body, &BTreeSet::from([x]), alloc);
    Ok((out, x))
}

/// `e_X(G) = c_X(G ∪ {y, ¬y})` for a fresh `y`, branchable on `X ∪ {y}`.
///
/// `X` is passed explicitly because `G` need not mention all of it.
pub fn e_transform(
    g: &Formula,
    x: &BTreeSet<Variable>,
    alloc: &mut FreshAllocator,
) -> Result<Construction, ConstructionError> {
    if let Some(stray) = g.vars().into_iter().find(|v| !x.contains(v)) {
        return Err(ConstructionError::Precondition(format!("{stray} is not in X")));
    }
    alloc.reserve(g);
    for v in x {
        alloc.reserve_var(*v);
    }
    let y = alloc.fresh();
    let mut inner = Construction::plain(g.union(&Formula::new([
        Clause::unit(y.pos()),
        Clause::unit(y.neg()),
    ])));
    inner.branchable = x.iter().copied().chain([y]).collect();
    inner.roles.extend(x.iter().map(|v| (*v, Role::X)));
    inner.roles.insert(y, Role::Y);
    Ok(c_gadget(&inner, x, alloc))
}

/// `V_n = c_X(X ∪ {y, ¬y})` over `n` fresh variables `X`.
pub fn v_formula(n: usize, alloc: &mut FreshAllocator) -> Result<Construction, ConstructionError> {
    if n == 0 {
        return Err(ConstructionError::Precondition("V_n needs n >= 1".into()));
    }
    let x: BTreeSet<Variable> = alloc.fresh_many(n).into_iter().collect();
    let units = Formula::new(x.iter().map(|v| Clause::unit(v.pos())));
    e_transform(&units, &x, alloc)
}

/// A formula of optimal size exactly `m` under `kind`, built as a chain of
/// `m` sums with the contradiction `{⊥}`.
///
/// Backtracking starts from `{⊥}`; DPLL uses the mirrored backtracking chain;
/// DPLL-Mono starts from `{z, ¬z}` and uses [`sum_mono`], with branching
/// restricted to the connectives.
pub fn exact_size_formula(m: usize, kind: Calculus, alloc: &mut FreshAllocator) -> Construction {
    let bottom = Construction::plain(Formula::contradiction());
    match kind {
        Calculus::Backtracking => {
            let mut chain = bottom.clone();
            for _ in 0..m {
                let (formula, x) = sum(&chain.formula, &bottom.formula, alloc)
                    .expect("fresh connective is disjoint");
                chain.formula = formula;
                chain.branchable.insert(x);
                chain.roles.insert(x, Role::Connective);
            }
            chain
        }
        Calculus::Dpll => {
            let chain = exact_size_formula(m, Calculus::Backtracking, alloc);
            let image = to_dpll_equivalent(&chain.formula, alloc);
            let mut out = Construction::plain(image.formula);
            out.roles = chain.roles;
            out.roles.extend(image.mirror.keys().map(|y| (*y, Role::Mirror)));
            out
        }
        Calculus::DpllMono => {
            let z = alloc.fresh();
            let mut chain = Construction {
                formula: Formula::new([Clause::unit(z.pos()), Clause::unit(z.neg())]),
                branchable: BTreeSet::new(),
                roles: Default::default(),
            };
            let empty = Construction { branchable: BTreeSet::new(), ..bottom };
            for _ in 0..m {
                chain = sum_mono(&chain, &empty, alloc).expect("fresh connective is disjoint").0;
            }
            chain
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cnf::count_models;
    use crate::optimal::{optimal_size, Oracle, OracleConfig};
    use crate::ProofSize;

    fn f(clauses: &[&[i32]]) -> Formula {
        Formula::from_dimacs(clauses)
    }

    fn mono_size(c: &Construction) -> ProofSize<u64> {
        optimal_size(&c.formula, &OracleConfig::new(c.discipline(Calculus::DpllMono))).unwrap()
    }

    fn vars(ids: &[u32]) -> BTreeSet<Variable> {
        ids.iter().map(|&i| Variable::new(i)).collect()
    }

    #[test]
    fn c_base_case_with_x() {
        let mut alloc = FreshAllocator::new();
        let c = c_transform(&f(&[&[1], &[-1]]).into(), &vars(&[1]), &mut alloc).unwrap();
        // v = 2, a = 3, b = 4
        assert_eq!(
            c.formula,
            f(&[&[1, -3, -4], &[-1, -3, -4], &[-1, 2], &[1, 2], &[-2, 3], &[-2, 4]])
        );
        assert_eq!(mono_size(&c), ProofSize::finite(1));
        let mut oracle = Oracle::<u64>::new(OracleConfig::new(c.discipline(Calculus::DpllMono))).unwrap();
        let trees = oracle.all_optimal_trees(&c.formula, 10).unwrap();
        assert_eq!(trees.iter().map(|t| t.to_string()).collect::<Vec<_>>(), vec!["(1 () ())"]);
    }

    #[test]
    fn c_base_case_without_x() {
        let mut alloc = FreshAllocator::new();
        let c = c_transform(&f(&[&[1], &[-1]]).into(), &BTreeSet::new(), &mut alloc).unwrap();
        // a = 2, b = 3
        assert_eq!(c.formula, f(&[&[1, -2, -3], &[-1, -2, -3], &[2], &[3]]));
        assert_eq!(mono_size(&c), ProofSize::finite(0));
    }

    #[test]
    fn c_size_law_two_x() {
        // F over X = {1, 2}, Y = {3}
        let g = f(&[&[1, 2], &[1, 3], &[1, -3], &[-1, 2, 3], &[-1, 2, -3], &[-1, -2, 3], &[-1, -2, -3]]);
        let x = vars(&[1, 2]);
        let c = c_transform(&g.clone().into(), &x, &mut FreshAllocator::new()).unwrap();
        let mut expected = 3u64;
        for bits in 0..4u32 {
            let lits = [Variable::new(1).pos(), Variable::new(2).pos()]
                .iter()
                .enumerate()
                .map(|(i, l)| if bits >> i & 1 == 1 { *l } else { l.negate() })
                .collect::<Vec<_>>();
            let mut sub = g.clone();
            for l in lits {
                sub = sub.assign(l);
            }
            let s: ProofSize<u64> = optimal_size(&sub, &OracleConfig::new(crate::TreeDiscipline::dpll_mono())).unwrap();
            expected += s.to_u64().unwrap();
        }
        assert_eq!(mono_size(&c), ProofSize::finite(expected));
    }

    #[test]
    fn c_rejects_foreign_x() {
        assert_eq!(
            c_transform(&f(&[&[1]]).into(), &vars(&[2]), &mut FreshAllocator::new()),
            Err(ConstructionError::NotInFormula(Variable::new(2)))
        );
    }

    #[test]
    fn v_formula_sizes() {
        for n in 1..=3usize {
            let v = v_formula(n, &mut FreshAllocator::new()).unwrap();
            assert_eq!(mono_size(&v), ProofSize::finite((1 << n) - 1), "n = {n}");
        }
        assert!(v_formula(0, &mut FreshAllocator::new()).is_err());
    }

    #[test]
    fn e_transform_value_is_complete_x_tree() {
        // With n + 1 branchable variables no tree exceeds 2^{n+1} - 1 nodes,
        // and once X is set the {y, ¬y} block is refuted by propagation.
        for g in [f(&[&[1]]), f(&[&[1], &[-1]]), Formula::empty()] {
            let e = e_transform(&g, &vars(&[1]), &mut FreshAllocator::new()).unwrap();
            let models: u64 = count_models(&g, &vars(&[1])).unwrap();
            assert!(models <= 2);
            assert_eq!(mono_size(&e), ProofSize::finite(1));
        }
    }

    #[test]
    fn exact_size_small() {
        let mut alloc = FreshAllocator::new();
        let b0 = exact_size_formula(0, Calculus::Backtracking, &mut alloc);
        assert_eq!(b0.formula, Formula::contradiction());
        let b1 = exact_size_formula(1, Calculus::Backtracking, &mut FreshAllocator::new());
        assert_eq!(b1.formula, f(&[&[1], &[-1]]));
        for (m, kind) in [(5, Calculus::Backtracking), (3, Calculus::Dpll), (2, Calculus::DpllMono)] {
            let c = exact_size_formula(m, kind, &mut FreshAllocator::new());
            let s: ProofSize<u64> =
                optimal_size(&c.formula, &OracleConfig::new(c.discipline(kind))).unwrap();
            assert_eq!(s, ProofSize::finite(m as u64), "{kind:?} m = {m}");
        }
    }

    #[test]
    fn sum_mono_adds() {
        let mut alloc = FreshAllocator::new();
        let i2 = exact_size_formula(2, Calculus::DpllMono, &mut alloc);
        let i1 = exact_size_formula(1, Calculus::DpllMono, &mut alloc);
        let (s, _) = sum_mono(&i2, &i1, &mut alloc).unwrap();
        assert_eq!(mono_size(&s), ProofSize::finite(4));
    }
}

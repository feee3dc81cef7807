//! Reductions into the optimal-branching-variable (OBV), optimal-tree-size
//! (OTS) and optimal-resolution-pair (ORP) decision problems.
//!
//! The exponential-size padding blocks of the hardness proofs are replaced by
//! [`exact_size_formula`] blocks of known size, so every output can be
//! checked end to end by the oracles.

use std::collections::{BTreeMap, BTreeSet};

use num_bigint::BigUint;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::cnf::{is_satisfiable, Clause, Formula, Variable};
use crate::optimal::{Oracle, OracleConfig, OracleError};
use crate::resolution::{is_optimal_resolution_pair, ResolutionError};
use crate::trees::{Calculus, TreeDiscipline};

use super::gadgets::c_gadget;
use super::{
    check_disjoint, exact_size_formula, sum, sum_mono, to_dpll_equivalent, Construction,
    ConstructionError, FreshAllocator, Role,
};

/// The decision question a reduction output encodes.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "snake_case")]
pub enum Question {
    /// Is `variable` the root of some optimal search tree?
    BranchVariable { variable: Variable },
    /// Is there a search tree with at most `bound` nodes?
    TreeSizeAtMost {
        #[serde(with = "decimal")]
        bound: BigUint,
    },
    /// Does some minimum regular refutation resolve the leaves `gamma` and
    /// `delta`? `alternative` is the pair expected to answer the opposite way.
    ResolutionPair { gamma: Clause, delta: Clause, alternative: (Clause, Clause) },
}

mod decimal {
    use num_bigint::BigUint;
    use serde::{de::Error, Deserialize, Deserializer, Serializer};

    pub fn serialize<S: Serializer>(n: &BigUint, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&n.to_str_radix(10))
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<BigUint, D::Error> {
        let text = String::deserialize(d)?;
        BigUint::parse_bytes(text.as_bytes(), 10).ok_or_else(|| D::Error::custom("bad integer"))
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ReductionOutput {
    #[serde(skip)]
    pub formula: Formula,
    pub reduction: String,
    pub question: Question,
    /// The search discipline the question refers to; absent for resolution.
    pub discipline: Option<TreeDiscipline>,
    pub roles: BTreeMap<Variable, Role>,
    pub semantics: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum DecideError {
    #[error(transparent)]
    Oracle(#[from] OracleError),
    #[error(transparent)]
    Resolution(#[from] ResolutionError),
}

impl ReductionOutput {
    pub fn distinguished(&self) -> Option<Variable> {
        match &self.question {
            Question::BranchVariable { variable } => Some(*variable),
            _ => None,
        }
    }

    pub fn bound(&self) -> Option<&BigUint> {
        match &self.question {
            Question::TreeSizeAtMost { bound } => Some(bound),
            _ => None,
        }
    }

    /// Answers the question with the exact oracles. `node_budget` limits tree
    /// search; `step_budget` caps the refutation length for resolution.
    ///
    /// Tree search solves variable-disjoint components separately, which
    /// the padding blocks of every reduction are.
    pub fn decide(&self, node_budget: Option<u64>, step_budget: usize) -> Result<bool, DecideError> {
        let config = |d: &TreeDiscipline| OracleConfig {
            node_budget,
            ..OracleConfig::new(d.clone()).splitting_components()
        };
        let discipline = self.discipline.clone().unwrap_or_else(TreeDiscipline::backtracking);
        match &self.question {
            Question::BranchVariable { variable } => {
                let mut oracle = Oracle::<BigUint>::new(config(&discipline))?;
                Ok(oracle.is_optimal_root(&self.formula, *variable)?)
            }
            Question::TreeSizeAtMost { bound } => {
                let mut oracle = Oracle::<BigUint>::new(config(&discipline))?;
                Ok(oracle.within(&self.formula, bound)?)
            }
            Question::ResolutionPair { gamma, delta, .. } => {
                Ok(is_optimal_resolution_pair(&self.formula, gamma, delta, step_budget)?)
            }
        }
    }
}

fn bottom() -> Construction {
    Construction { formula: Formula::contradiction(), branchable: BTreeSet::new(), roles: BTreeMap::new() }
}

/// The calculus the pieces are assembled in: DPLL outputs are built for
/// backtracking and mirrored at the end.
fn builder(kind: Calculus) -> Calculus {
    match kind {
        Calculus::Dpll => Calculus::Backtracking,
        other => other,
    }
}

fn sum_in(
    kind: Calculus,
    f: &Construction,
    h: &Construction,
    alloc: &mut FreshAllocator,
) -> Result<(Construction, Variable), ConstructionError> {
    match kind {
        Calculus::DpllMono => sum_mono(f, h, alloc),
        _ => {
            let (formula, x) = sum(&f.formula, &h.formula, alloc)?;
            let mut out = f.union(h)?;
            out.formula = formula;
            out.branchable.insert(x);
            out.roles.insert(x, Role::Connective);
            Ok((out, x))
        }
    }
}

/// The final formula and discipline for `kind`.
fn finish(
    kind: Calculus,
    built: Construction,
    alloc: &mut FreshAllocator,
) -> (Formula, TreeDiscipline, BTreeMap<Variable, Role>) {
    match kind {
        Calculus::Backtracking => (built.formula, TreeDiscipline::backtracking(), built.roles),
        Calculus::Dpll => {
            let image = to_dpll_equivalent(&built.formula, alloc);
            let mut roles = built.roles;
            roles.extend(image.mirror.keys().map(|y| (*y, Role::Mirror)));
            (image.formula, TreeDiscipline::dpll(), roles)
        }
        Calculus::DpllMono => {
            let discipline = built.discipline(Calculus::DpllMono);
            (built.formula, discipline, built.roles)
        }
    }
}

fn unrestricted_size(f: &Formula, kind: Calculus) -> Result<Option<u64>, OracleError> {
    let mut oracle = Oracle::<u64>::new(OracleConfig::new(TreeDiscipline::new(kind)))?;
    Ok(oracle.size(f)?.to_u64())
}

/// The two halves `G` and `D` of the parity reduction, built in `kind`
/// (backtracking or DPLL-Mono), and the connective `x` of `G = ⊥ +_x G'`.
#[derive(Clone, Debug)]
pub struct ParitySatParts {
    pub g: Construction,
    pub d: Construction,
    pub x: Variable,
}

/// Builds `G = ⊥ +_x (F1 ∪ (H + H + (F3 ∪ …(F_{r-1}))))` and
/// `D = H + (F2 ∪ (H + H + (F4 ∪ …(F_r))))` with `H` a block of size
/// `hard_size`.
pub fn parity_sat_parts(
    seq: &[Formula],
    kind: Calculus,
    hard_size: usize,
    alloc: &mut FreshAllocator,
) -> Result<ParitySatParts, ConstructionError> {
    let r = seq.len();
    if r < 2 || r % 2 == 1 {
        return Err(ConstructionError::Precondition(format!("sequence length {r} is not even and positive")));
    }
    for (i, a) in seq.iter().enumerate() {
        for b in &seq[i + 1..] {
            check_disjoint(a, b)?;
        }
    }
    if is_satisfiable(&seq[r - 2]) || is_satisfiable(&seq[r - 1]) {
        return Err(ConstructionError::Precondition("the last two formulas must be unsatisfiable".into()));
    }
    for (i, f) in seq.iter().enumerate() {
        let size = unrestricted_size(f, kind)
            .map_err(|e| ConstructionError::Precondition(format!("sizing F{}: {e}", i + 1)))?;
        if size.is_some_and(|s| s >= hard_size as u64) {
            return Err(ConstructionError::Precondition(format!(
                "hard block size {hard_size} does not exceed s(F{}) = {}",
                i + 1,
                size.unwrap_or_default()
            )));
        }
    }
    for f in seq {
        alloc.reserve(f);
    }

    let chain = |parts: Vec<&Formula>, alloc: &mut FreshAllocator| {
        let (last, rest) = parts.split_last().expect("nonempty");
        let mut acc = Construction::plain((*last).clone());
        for f in rest.iter().rev() {
            let h1 = exact_size_formula(hard_size, kind, alloc);
            let h2 = exact_size_formula(hard_size, kind, alloc);
            let (inner, _) = sum_in(kind, &h2, &acc, alloc)?;
            let (inner, _) = sum_in(kind, &h1, &inner, alloc)?;
            acc = Construction::plain((*f).clone()).union(&inner)?;
        }
        Ok::<_, ConstructionError>(acc)
    };
    let g_inner = chain(seq.iter().step_by(2).collect(), alloc)?;
    let d_inner = chain(seq.iter().skip(1).step_by(2).collect(), alloc)?;
    let (g, x) = sum_in(kind, &bottom(), &g_inner, alloc)?;
    let h = exact_size_formula(hard_size, kind, alloc);
    let (d, _) = sum_in(kind, &h, &d_inner, alloc)?;
    Ok(ParitySatParts { g, d, x })
}

/// PARITY(SAT) to OBV: `x` is an optimal branching variable of `G ∪ D` iff
/// the first unsatisfiable formula of `seq` has odd (1-based) index.
///
/// Requires even length, pairwise-disjoint alphabets, the last two formulas
/// unsatisfiable, and `hard_size` larger than every finite `s(F_i)`.
pub fn reduce_parity_sat(
    seq: &[Formula],
    kind: Calculus,
    hard_size: usize,
    alloc: &mut FreshAllocator,
) -> Result<ReductionOutput, ConstructionError> {
    let parts = parity_sat_parts(seq, builder(kind), hard_size, alloc)?;
    let whole = parts.g.union(&parts.d)?;
    let (formula, discipline, roles) = finish(kind, whole, alloc);
    Ok(ReductionOutput {
        formula,
        reduction: "paritysat".into(),
        question: Question::BranchVariable { variable: parts.x },
        discipline: Some(discipline),
        roles,
        semantics: format!(
            "{} is an optimal branching variable iff the first unsatisfiable formula has odd index",
            parts.x
        ),
    })
}

/// Unsatisfiability to OTS: `G ∪ H` with `s(H) = 2^{n+1}` has a tree of size
/// at most `2^n` iff `G` is unsatisfiable, where `n = |Var(G)|`.
pub fn reduce_ots_conp(
    g: &Formula,
    kind: Calculus,
    alloc: &mut FreshAllocator,
) -> Result<ReductionOutput, ConstructionError> {
    let n = g.vars().len();
    if n > 20 {
        return Err(ConstructionError::Precondition(format!("{n} variables is beyond the unary padding block")));
    }
    alloc.reserve(g);
    let h = exact_size_formula(1 << (n + 1), builder(kind), alloc);
    let whole = Construction::plain(g.clone()).union(&h)?;
    let (formula, discipline, roles) = finish(kind, whole, alloc);
    Ok(ReductionOutput {
        formula,
        reduction: "otsconp".into(),
        question: Question::TreeSizeAtMost { bound: BigUint::from(1u32) << n },
        discipline: Some(discipline),
        roles,
        semantics: format!("a search tree of size <= 2^{n} exists iff the input formula is unsatisfiable"),
    })
}

/// OTS to OBV for restricted-branching DPLL-Mono: `a` is an optimal
/// branching variable of `(⊥ +_a G) ∪ I_{k+1}` iff `s(G) <= k`.
pub fn reduce_ots_to_obv(
    g: &Formula,
    k: usize,
    alloc: &mut FreshAllocator,
) -> Result<ReductionOutput, ConstructionError> {
    alloc.reserve(g);
    let (left, a) = sum_mono(&bottom(), &Construction::plain(g.clone()), alloc)?;
    let pad = exact_size_formula(k + 1, Calculus::DpllMono, alloc);
    let whole = left.union(&pad)?;
    let (formula, discipline, roles) = finish(Calculus::DpllMono, whole, alloc);
    Ok(ReductionOutput {
        formula,
        reduction: "otstoobv".into(),
        question: Question::BranchVariable { variable: a },
        discipline: Some(discipline),
        roles,
        semantics: format!("{a} is an optimal branching variable iff s(G) <= {k}"),
    })
}

/// E-MINSAT to OTS for restricted-branching DPLL-Mono:
/// `c_X(c_Y(F ∪ I_1) ∪ I_k)` with `k = 2^n + 2^{n-1}` has a tree of size at
/// most `2^n + 2^n k - 2` iff some assignment `X'` leaves `F|X'` with at most
/// half of the `2^n` assignments to `Y` as models.
pub fn reduce_eminsat(
    f: &Formula,
    x: &BTreeSet<Variable>,
    y: &BTreeSet<Variable>,
    alloc: &mut FreshAllocator,
) -> Result<ReductionOutput, ConstructionError> {
    let n = x.len();
    if n != y.len() {
        return Err(ConstructionError::Precondition(format!("|X| = {n} but |Y| = {}", y.len())));
    }
    if n == 0 || n > 16 {
        return Err(ConstructionError::Precondition(format!("n = {n} is outside 1..=16")));
    }
    if let Some(v) = x.intersection(y).next() {
        return Err(ConstructionError::Precondition(format!("{v} is in both X and Y")));
    }
    if let Some(v) = f.vars().into_iter().find(|v| !x.contains(v) && !y.contains(v)) {
        return Err(ConstructionError::Precondition(format!("{v} is in neither X nor Y")));
    }
    alloc.reserve(f);
    for v in x.iter().chain(y) {
        alloc.reserve_var(*v);
    }
    let k = (1usize << n) + (1usize << (n - 1));
    let mut base = Construction::plain(f.clone());
    base.roles.extend(x.iter().map(|v| (*v, Role::X)));
    base.roles.extend(y.iter().map(|v| (*v, Role::Y)));
    let i1 = exact_size_formula(1, Calculus::DpllMono, alloc);
    let inner = c_gadget(&base.union(&i1)?, y, alloc);
    let ik = exact_size_formula(k, Calculus::DpllMono, alloc);
    let outer = c_gadget(&inner.union(&ik)?, x, alloc);
    let pow = BigUint::from(1u32) << n;
    let bound = &pow + &pow * BigUint::from(k) - BigUint::from(2u32);
    let (formula, discipline, roles) = finish(Calculus::DpllMono, outer, alloc);
    Ok(ReductionOutput {
        formula,
        reduction: "eminsat".into(),
        question: Question::TreeSizeAtMost { bound },
        discipline: Some(discipline),
        roles,
        semantics: "a search tree within the bound exists iff some assignment to X leaves at most half of the Y-assignments as models".into(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::optimal::optimal_size;
    use crate::ProofSize;

    fn f(clauses: &[&[i32]]) -> Formula {
        Formula::from_dimacs(clauses)
    }

    fn bt_size(c: &Construction) -> u64 {
        optimal_size::<u64>(&c.formula, &OracleConfig::new(TreeDiscipline::backtracking()))
            .unwrap()
            .to_u64()
            .unwrap()
    }

    #[test]
    fn parity_two_unsat() {
        let seq = [f(&[&[1], &[-1]]), f(&[&[2], &[-2]])];
        let out = reduce_parity_sat(&seq, Calculus::Backtracking, 2, &mut FreshAllocator::new()).unwrap();
        assert!(out.decide(None, 0).unwrap());
    }

    #[test]
    fn parity_equations() {
        let seq = [f(&[&[1], &[-1]]), f(&[&[2], &[-2]])];
        let h = 2u64;
        let parts = parity_sat_parts(&seq, Calculus::Backtracking, h as usize, &mut FreshAllocator::new()).unwrap();
        // i = 1, j = 2, s(F_i) = s(F_j) = 1
        assert_eq!(bt_size(&parts.g), 1 + 1);
        assert_eq!(bt_size(&parts.d), h + 1 + 1);
    }

    #[test]
    fn parity_first_unsat_even() {
        let seq = [f(&[&[1, 2]]), f(&[&[3], &[-3]]), f(&[&[4], &[-4]]), f(&[&[5], &[-5]])];
        let out = reduce_parity_sat(&seq, Calculus::Backtracking, 2, &mut FreshAllocator::new()).unwrap();
        assert!(!out.decide(None, 0).unwrap());
    }

    #[test]
    fn parity_rejects_bad_input() {
        let mut alloc = FreshAllocator::new();
        let unsat = f(&[&[1], &[-1]]);
        assert!(reduce_parity_sat(std::slice::from_ref(&unsat), Calculus::Backtracking, 2, &mut alloc).is_err());
        let seq = [unsat.clone(), f(&[&[1, 2], &[-1, 2], &[-2]])];
        assert!(matches!(
            reduce_parity_sat(&seq, Calculus::Backtracking, 3, &mut alloc),
            Err(ConstructionError::SharedVariables(_))
        ));
        let seq = [unsat, f(&[&[2, 3], &[-2, 3], &[2, -3], &[-2, -3]])];
        assert!(reduce_parity_sat(&seq, Calculus::Backtracking, 3, &mut alloc).is_err());
    }

    #[test]
    fn ots_conp_examples() {
        let mut alloc = FreshAllocator::new();
        let out = reduce_ots_conp(&f(&[&[1], &[-1]]), Calculus::Backtracking, &mut alloc).unwrap();
        assert_eq!(out.bound(), Some(&BigUint::from(2u32)));
        assert!(out.decide(None, 0).unwrap());
        let out = reduce_ots_conp(&f(&[&[1, 2]]), Calculus::Backtracking, &mut FreshAllocator::new()).unwrap();
        assert_eq!(out.bound(), Some(&BigUint::from(4u32)));
        assert!(!out.decide(None, 0).unwrap());
        let out = reduce_ots_conp(&Formula::contradiction(), Calculus::Backtracking, &mut FreshAllocator::new()).unwrap();
        assert_eq!(out.bound(), Some(&BigUint::from(1u32)));
        assert!(out.decide(None, 0).unwrap());
    }

    #[test]
    fn ots_to_obv_examples() {
        let zero = f(&[&[1], &[-1]]);
        assert!(reduce_ots_to_obv(&zero, 0, &mut FreshAllocator::new()).unwrap().decide(None, 0).unwrap());
        // s = 2 under DPLL-Mono: branch 1, then 2 on the true side
        let two = f(&[&[-1, 2, 3], &[-1, 2, -3], &[-1, -2, 3], &[-1, -2, -3], &[1, 4], &[1, -4]]);
        let s: ProofSize<u64> = optimal_size(&two, &OracleConfig::new(TreeDiscipline::dpll_mono())).unwrap();
        assert_eq!(s, ProofSize::finite(2));
        assert!(!reduce_ots_to_obv(&two, 1, &mut FreshAllocator::new()).unwrap().decide(None, 0).unwrap());
        assert!(reduce_ots_to_obv(&two, 2, &mut FreshAllocator::new()).unwrap().decide(None, 0).unwrap());
    }

    #[test]
    fn eminsat_examples() {
        let x = BTreeSet::from([Variable::new(1)]);
        let y = BTreeSet::from([Variable::new(2)]);
        let cases = [(f(&[&[1, 2]]), true), (f(&[&[1], &[2]]), true), (Formula::empty(), false)];
        for (formula, expected) in cases {
            let out = reduce_eminsat(&formula, &x, &y, &mut FreshAllocator::new()).unwrap();
            assert_eq!(out.bound(), Some(&BigUint::from(2u32 + 2 * 3 - 2)));
            assert_eq!(out.decide(None, 0).unwrap(), expected, "{formula}");
        }
    }

    #[test]
    fn sidecar_round_trip() {
        let out = reduce_ots_conp(&f(&[&[1], &[-1]]), Calculus::DpllMono, &mut FreshAllocator::new()).unwrap();
        let json = serde_json::to_string(&out).unwrap();
        assert!(json.contains("\"bound\":\"2\""));
        let back: ReductionOutput = serde_json::from_str(&json).unwrap();
        assert_eq!(back.question, out.question);
    }
}

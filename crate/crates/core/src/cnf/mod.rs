//! CNF data model.
//!
//! Every [`Clause`] and [`Formula`] is kept in canonical form: literals are
//! sorted by variable id with the positive literal first, clauses are sorted
//! lexicographically, and duplicates are removed. Structural equality is
//! therefore set equality, and formulas can be used directly as memo keys.

mod dimacs;
mod ops;
mod text;

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use serde::{Deserialize, Serialize};

pub use dimacs::{parse_dimacs, write_dimacs, DimacsError};
pub use ops::{
    components, count_models, dpll_closure, is_satisfiable, pure_eliminate, restrict, unit_propagate,
    MissingUniverseVariable,
};
pub use text::{parse_clause, parse_formula, ParseError};

/// A propositional variable, identified by a positive integer.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Variable(u32);

impl Variable {
    /// Panics on `0`; use [`Variable::try_new`] for untrusted input.
    pub fn new(id: u32) -> Variable {
        Variable::try_new(id).expect("variable ids start at 1")
    }

    pub fn try_new(id: u32) -> Option<Variable> {
        (id >= 1 && id <= i32::MAX as u32).then_some(Variable(id))
    }

    pub fn id(self) -> u32 {
        self.0
    }

    pub fn pos(self) -> Literal {
        Literal::new(self, true)
    }

    pub fn neg(self) -> Literal {
        Literal::new(self, false)
    }
}

impl fmt::Debug for Variable {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "x{}", self.0)
    }
}

impl fmt::Display for Variable {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "x{}", self.0)
    }
}

/// A variable or its negation. Ordered by variable, positive before negative.
/// Serializes as a DIMACS integer.
#[derive(Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(into = "i32", try_from = "i32")]
pub struct Literal {
    var: Variable,
    positive: bool,
}

impl Literal {
    pub fn new(var: Variable, positive: bool) -> Literal {
        Literal { var, positive }
    }

    pub fn var(self) -> Variable {
        self.var
    }

    pub fn is_positive(self) -> bool {
        self.positive
    }

    pub fn negate(self) -> Literal {
        Literal::new(self.var, !self.positive)
    }

    pub fn from_dimacs(n: i32) -> Option<Literal> {
        let var = Variable::try_new(n.unsigned_abs())?;
        Some(Literal::new(var, n > 0))
    }

    pub fn to_dimacs(self) -> i32 {
        let id = self.var.id() as i32;
        if self.positive {
            id
        } else {
            -id
        }
    }
}

impl From<Literal> for i32 {
    fn from(lit: Literal) -> i32 {
        lit.to_dimacs()
    }
}

impl TryFrom<i32> for Literal {
    type Error = String;

    fn try_from(n: i32) -> Result<Literal, String> {
        Literal::from_dimacs(n).ok_or_else(|| format!("invalid literal {n}"))
    }
}

impl Ord for Literal {
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        (self.var, !self.positive).cmp(&(other.var, !other.positive))
    }
}

impl PartialOrd for Literal {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Debug for Literal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl fmt::Display for Literal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.positive {
            write!(f, "x{}", self.var.id())
        } else {
            write!(f, "-x{}", self.var.id())
        }
    }
}

/// A disjunction of literals with set semantics. The empty clause is the
/// contradiction; tautologies are representable and kept as-is.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Default, Serialize, Deserialize)]
#[serde(from = "Vec<Literal>", into = "Vec<Literal>")]
pub struct Clause(Vec<Literal>);

impl From<Vec<Literal>> for Clause {
    fn from(lits: Vec<Literal>) -> Clause {
        Clause::new(lits)
    }
}

impl From<Clause> for Vec<Literal> {
    fn from(clause: Clause) -> Vec<Literal> {
        clause.0
    }
}

impl Clause {
    pub fn new(literals: impl IntoIterator<Item = Literal>) -> Clause {
        let mut lits: Vec<Literal> = literals.into_iter().collect();
        lits.sort_unstable();
        lits.dedup();
        Clause(lits)
    }

    /// The empty clause.
    pub fn empty() -> Clause {
        Clause(Vec::new())
    }

    pub fn unit(lit: Literal) -> Clause {
        Clause(vec![lit])
    }

    /// Builds a clause from DIMACS-style signed ids. Panics on `0`.
    pub fn from_dimacs(lits: &[i32]) -> Clause {
        Clause::new(
            lits.iter()
                .map(|&n| Literal::from_dimacs(n).expect("literal 0 is not a variable")),
        )
    }

    pub fn literals(&self) -> &[Literal] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn is_unit(&self) -> bool {
        self.0.len() == 1
    }

    pub fn contains(&self, lit: Literal) -> bool {
        self.0.binary_search(&lit).is_ok()
    }

    pub fn mentions(&self, var: Variable) -> bool {
        self.contains(var.pos()) || self.contains(var.neg())
    }

    pub fn is_tautology(&self) -> bool {
        self.0
            .windows(2)
            .any(|w| w[0].var == w[1].var && w[0].positive != w[1].positive)
    }

    pub fn vars(&self) -> impl Iterator<Item = Variable> + '_ {
        let mut last = None;
        self.0.iter().filter_map(move |l| {
            if last == Some(l.var) {
                None
            } else {
                last = Some(l.var);
                Some(l.var)
            }
        })
    }

    /// `self ∨ other`.
    pub fn or(&self, other: &Clause) -> Clause {
        Clause::new(self.0.iter().chain(other.0.iter()).copied())
    }

    /// `self ∨ lit`.
    pub fn with(&self, lit: Literal) -> Clause {
        Clause::new(self.0.iter().copied().chain(std::iter::once(lit)))
    }

    /// The clause with `lit` removed (if present).
    pub fn without(&self, lit: Literal) -> Clause {
        Clause(self.0.iter().copied().filter(|&l| l != lit).collect())
    }

    /// Renames variables through `f`.
    pub fn map_vars(&self, mut f: impl FnMut(Variable) -> Variable) -> Clause {
        Clause::new(self.0.iter().map(|l| Literal::new(f(l.var), l.positive)))
    }

    pub fn is_subset_of(&self, other: &Clause) -> bool {
        self.0.iter().all(|&l| other.contains(l))
    }
}

impl FromIterator<Literal> for Clause {
    fn from_iter<T: IntoIterator<Item = Literal>>(iter: T) -> Self {
        Clause::new(iter)
    }
}

impl fmt::Debug for Clause {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl fmt::Display for Clause {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_empty() {
            return f.write_str("⊥");
        }
        for (i, lit) in self.0.iter().enumerate() {
            if i > 0 {
                f.write_str(" ")?;
            }
            write!(f, "{lit}")?;
        }
        Ok(())
    }
}

/// A set of clauses (conjunction).
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Default, Serialize, Deserialize)]
#[serde(from = "Vec<Clause>", into = "Vec<Clause>")]
pub struct Formula(Vec<Clause>);

impl From<Vec<Clause>> for Formula {
    fn from(clauses: Vec<Clause>) -> Formula {
        Formula::new(clauses)
    }
}

impl From<Formula> for Vec<Clause> {
    fn from(formula: Formula) -> Vec<Clause> {
        formula.0
    }
}

impl Formula {
    pub fn new(clauses: impl IntoIterator<Item = Clause>) -> Formula {
        let mut cs: Vec<Clause> = clauses.into_iter().collect();
        cs.sort_unstable();
        cs.dedup();
        Formula(cs)
    }

    /// The formula with no clauses (trivially satisfiable).
    pub fn empty() -> Formula {
        Formula(Vec::new())
    }

    /// `{⊥}`.
    pub fn contradiction() -> Formula {
        Formula(vec![Clause::empty()])
    }

    /// Builds a formula from DIMACS-style clauses.
    pub fn from_dimacs(clauses: &[&[i32]]) -> Formula {
        Formula::new(clauses.iter().map(|c| Clause::from_dimacs(c)))
    }

    pub fn clauses(&self) -> &[Clause] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn contains(&self, clause: &Clause) -> bool {
        self.0.binary_search(clause).is_ok()
    }

    /// True iff the formula contains the empty clause. The empty clause is
    /// the smallest clause, so it can only sit at the front.
    pub fn has_empty_clause(&self) -> bool {
        self.0.first().is_some_and(Clause::is_empty)
    }

    pub fn vars(&self) -> BTreeSet<Variable> {
        self.0.iter().flat_map(|c| c.vars()).collect()
    }

    pub fn mentions(&self, var: Variable) -> bool {
        self.0.iter().any(|c| c.mentions(var))
    }

    pub fn max_var(&self) -> Option<Variable> {
        self.0
            .iter()
            .filter_map(|c| c.literals().last().map(|l| l.var))
            .max()
    }

    /// Set union.
    pub fn union(&self, other: &Formula) -> Formula {
        Formula::new(self.0.iter().chain(other.0.iter()).cloned())
    }

    /// `lit ∨ F`: the literal added to every clause.
    pub fn or_literal(&self, lit: Literal) -> Formula {
        Formula::new(self.0.iter().map(|c| c.with(lit)))
    }

    /// The formula without `clause`.
    pub fn without(&self, clause: &Clause) -> Formula {
        Formula(self.0.iter().filter(|c| *c != clause).cloned().collect())
    }

    pub fn map_vars(&self, mut f: impl FnMut(Variable) -> Variable) -> Formula {
        Formula::new(self.0.iter().map(|c| c.map_vars(&mut f)))
    }

    /// Restriction by a single literal: `F|{lit}`.
    pub fn assign(&self, lit: Literal) -> Formula {
        let falsified = lit.negate();
        let mut out = Vec::with_capacity(self.0.len());
        for clause in &self.0 {
            if clause.contains(lit) {
                continue;
            }
            if clause.contains(falsified) {
                out.push(clause.without(falsified));
            } else {
                out.push(clause.clone());
            }
        }
        out.sort_unstable();
        out.dedup();
        Formula(out)
    }

    /// Shares no variable with `other`.
    pub fn is_disjoint_from(&self, other: &Formula) -> bool {
        self.vars().is_disjoint(&other.vars())
    }
}

impl FromIterator<Clause> for Formula {
    fn from_iter<T: IntoIterator<Item = Clause>>(iter: T) -> Self {
        Formula::new(iter)
    }
}

impl fmt::Debug for Formula {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

/// The canonical text form, e.g. `{x1 -x2, x3}`; the empty clause prints as `⊥`.
impl fmt::Display for Formula {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("{")?;
        for (i, c) in self.0.iter().enumerate() {
            if i > 0 {
                f.write_str(", ")?;
            }
            write!(f, "{c}")?;
        }
        f.write_str("}")
    }
}

/// A partial interpretation: each variable bound at most once.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Default)]
pub struct PartialAssignment(BTreeMap<Variable, bool>);

impl PartialAssignment {
    pub fn new() -> PartialAssignment {
        PartialAssignment::default()
    }

    /// Builds an assignment from literals; `None` if a variable is bound
    /// with both polarities.
    pub fn from_literals(lits: impl IntoIterator<Item = Literal>) -> Option<PartialAssignment> {
        let mut a = PartialAssignment::new();
        for lit in lits {
            if !a.bind(lit.var(), lit.is_positive()) {
                return None;
            }
        }
        Some(a)
    }

    /// Binds `var`; returns false (and leaves the binding unchanged) if it
    /// was already bound to the other value.
    pub fn bind(&mut self, var: Variable, value: bool) -> bool {
        match self.0.get(&var) {
            Some(&v) => v == value,
            None => {
                self.0.insert(var, value);
                true
            }
        }
    }

    pub fn value(&self, var: Variable) -> Option<bool> {
        self.0.get(&var).copied()
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn literals(&self) -> impl Iterator<Item = Literal> + '_ {
        self.0.iter().map(|(&v, &b)| Literal::new(v, b))
    }

    pub fn vars(&self) -> impl Iterator<Item = Variable> + '_ {
        self.0.keys().copied()
    }

    /// Union of two assignments; `None` on a conflicting binding.
    pub fn merged(&self, other: &PartialAssignment) -> Option<PartialAssignment> {
        PartialAssignment::from_literals(self.literals().chain(other.literals()))
    }
}

impl fmt::Display for PartialAssignment {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("{")?;
        for (i, lit) in self.literals().enumerate() {
            if i > 0 {
                f.write_str(", ")?;
            }
            write!(f, "{lit}")?;
        }
        f.write_str("}")
    }
}

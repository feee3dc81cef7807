//! Search trees, tree disciplines and tree validation.
//!
//! A search tree is `()` or `(x T1 T2)`, where `T1` refutes the formula
//! restricted by `x = false` and `T2` the one restricted by `x = true`. The
//! three disciplines differ only in the closure applied to the formula
//! before each check: none (backtracking), unit propagation plus the
//! monotone literal rule (DPLL), or unit propagation alone (DPLL-Mono).

use std::collections::BTreeSet;
use std::fmt::{self, Write as _};
use std::str::FromStr;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::cnf::{dpll_closure, unit_propagate, Formula, Variable};

/// Which inference rules run before each branching decision.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Calculus {
    Backtracking,
    Dpll,
    DpllMono,
}

impl Calculus {
    /// The closure this calculus applies to a formula.
    pub fn close(self, formula: &Formula) -> Formula {
        match self {
            Calculus::Backtracking => formula.clone(),
            Calculus::Dpll => dpll_closure(formula),
            Calculus::DpllMono => unit_propagate(formula).0,
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            Calculus::Backtracking => "bt",
            Calculus::Dpll => "dpll",
            Calculus::DpllMono => "dpllmono",
        }
    }
}

impl fmt::Display for Calculus {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("unknown method `{0}` (expected bt, dpll or dpllmono)")]
pub struct UnknownCalculus(pub String);

impl FromStr for Calculus {
    type Err = UnknownCalculus;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "bt" | "backtracking" => Ok(Calculus::Backtracking),
            "dpll" => Ok(Calculus::Dpll),
            "dpllmono" | "dpll-mono" | "mono" => Ok(Calculus::DpllMono),
            other => Err(UnknownCalculus(other.to_string())),
        }
    }
}

/// A calculus plus an optional branching restriction.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TreeDiscipline {
    pub kind: Calculus,
    /// Variables that may be branched on; `None` allows every variable.
    pub allowed: Option<BTreeSet<Variable>>,
}

impl TreeDiscipline {
    pub fn new(kind: Calculus) -> TreeDiscipline {
        TreeDiscipline { kind, allowed: None }
    }

    pub fn backtracking() -> TreeDiscipline {
        TreeDiscipline::new(Calculus::Backtracking)
    }

    pub fn dpll() -> TreeDiscipline {
        TreeDiscipline::new(Calculus::Dpll)
    }

    pub fn dpll_mono() -> TreeDiscipline {
        TreeDiscipline::new(Calculus::DpllMono)
    }

    pub fn restricted_to(mut self, allowed: impl IntoIterator<Item = Variable>) -> TreeDiscipline {
        self.allowed = Some(allowed.into_iter().collect());
        self
    }

    pub fn close(&self, formula: &Formula) -> Formula {
        self.kind.close(formula)
    }

    pub fn may_branch(&self, var: Variable) -> bool {
        self.allowed.as_ref().is_none_or(|a| a.contains(&var))
    }

    /// Variables of an already-closed formula that may be branched on, in
    /// increasing id order.
    pub fn branch_candidates(&self, closed: &Formula) -> Vec<Variable> {
        closed.vars().into_iter().filter(|&v| self.may_branch(v)).collect()
    }
}

/// A binary search tree over variables; left is the `false` branch.
#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub enum SearchTree {
    #[default]
    Empty,
    Node(Variable, Box<SearchTree>, Box<SearchTree>),
}

impl SearchTree {
    pub fn node(var: Variable, left: SearchTree, right: SearchTree) -> SearchTree {
        SearchTree::Node(var, Box::new(left), Box::new(right))
    }

    /// `(x () ())`.
    pub fn leaf(var: Variable) -> SearchTree {
        SearchTree::node(var, SearchTree::Empty, SearchTree::Empty)
    }

    pub fn is_empty(&self) -> bool {
        matches!(self, SearchTree::Empty)
    }

    pub fn root(&self) -> Option<Variable> {
        match self {
            SearchTree::Empty => None,
            SearchTree::Node(v, _, _) => Some(*v),
        }
    }

    /// Number of nodes.
    pub fn size(&self) -> usize {
        match self {
            SearchTree::Empty => 0,
            SearchTree::Node(_, l, r) => 1 + l.size() + r.size(),
        }
    }

    /// Number of empty subtrees; always `size() + 1`.
    pub fn empty_subtrees(&self) -> usize {
        match self {
            SearchTree::Empty => 1,
            SearchTree::Node(_, l, r) => l.empty_subtrees() + r.empty_subtrees(),
        }
    }

    pub fn depth(&self) -> usize {
        match self {
            SearchTree::Empty => 0,
            SearchTree::Node(_, l, r) => 1 + l.depth().max(r.depth()),
        }
    }

    pub fn vars(&self) -> BTreeSet<Variable> {
        let mut out = BTreeSet::new();
        self.collect_vars(&mut out);
        out
    }

    fn collect_vars(&self, out: &mut BTreeSet<Variable>) {
        if let SearchTree::Node(v, l, r) = self {
            out.insert(*v);
            l.collect_vars(out);
            r.collect_vars(out);
        }
    }

    /// Replaces every empty subtree with a copy of `filler`.
    pub fn replace_empty(&self, filler: &SearchTree) -> SearchTree {
        match self {
            SearchTree::Empty => filler.clone(),
            SearchTree::Node(v, l, r) => {
                SearchTree::node(*v, l.replace_empty(filler), r.replace_empty(filler))
            }
        }
    }

    /// Parses the parenthetic notation, e.g. `(1 (2 () ()) ())`. Variable
    /// labels may carry an `x` prefix.
    pub fn parse(text: &str) -> Result<SearchTree, TreeParseError> {
        let tokens = tokenize(text);
        let mut pos = 0;
        let tree = parse_tree(&tokens, &mut pos)?;
        if pos != tokens.len() {
            return Err(TreeParseError::TrailingInput);
        }
        Ok(tree)
    }

    /// Graphviz rendering; empty subtrees are drawn as small boxes.
    pub fn to_dot(&self) -> String {
        let mut out = String::from("digraph searchtree {\n  node [shape=circle];\n");
        let mut next = 0usize;
        self.dot_node(&mut out, &mut next);
        out.push_str("}\n");
        out
    }

    fn dot_node(&self, out: &mut String, next: &mut usize) -> usize {
        let id = *next;
        *next += 1;
        match self {
            SearchTree::Empty => {
                writeln!(out, "  n{id} [shape=box, label=\"\", width=0.15, height=0.15];").unwrap();
            }
            SearchTree::Node(v, l, r) => {
                writeln!(out, "  n{id} [label=\"x{}\"];", v.id()).unwrap();
                let li = l.dot_node(out, next);
                let ri = r.dot_node(out, next);
                writeln!(out, "  n{id} -> n{li} [label=\"0\"];").unwrap();
                writeln!(out, "  n{id} -> n{ri} [label=\"1\"];").unwrap();
            }
        }
        id
    }
}

impl fmt::Display for SearchTree {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            SearchTree::Empty => f.write_str("()"),
            SearchTree::Node(v, l, r) => write!(f, "({} {} {})", v.id(), l, r),
        }
    }
}

impl fmt::Debug for SearchTree {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum TreeParseError {
    #[error("unexpected end of tree text")]
    UnexpectedEnd,
    #[error("unexpected token `{0}`")]
    Unexpected(String),
    #[error("bad variable label `{0}`")]
    BadVariable(String),
    #[error("trailing input after tree")]
    TrailingInput,
}

fn tokenize(text: &str) -> Vec<String> {
    let mut tokens = Vec::new();
    let mut word = String::new();
    for ch in text.chars() {
        if ch == '(' || ch == ')' || ch.is_whitespace() {
            if !word.is_empty() {
                tokens.push(std::mem::take(&mut word));
            }
            if !ch.is_whitespace() {
                tokens.push(ch.to_string());
            }
        } else {
            word.push(ch);
        }
    }
    if !word.is_empty() {
        tokens.push(word);
    }
    tokens
}

fn parse_tree(tokens: &[String], pos: &mut usize) -> Result<SearchTree, TreeParseError> {
    let open = tokens.get(*pos).ok_or(TreeParseError::UnexpectedEnd)?;
    if open != "(" {
        return Err(TreeParseError::Unexpected(open.clone()));
    }
    *pos += 1;
    let next = tokens.get(*pos).ok_or(TreeParseError::UnexpectedEnd)?;
    if next == ")" {
        *pos += 1;
        return Ok(SearchTree::Empty);
    }
    let label = next.strip_prefix('x').unwrap_or(next);
    let var = label
        .parse()
        .ok()
        .and_then(Variable::try_new)
        .ok_or_else(|| TreeParseError::BadVariable(next.clone()))?;
    *pos += 1;
    let left = parse_tree(tokens, pos)?;
    let right = parse_tree(tokens, pos)?;
    match tokens.get(*pos) {
        Some(t) if t == ")" => {
            *pos += 1;
            Ok(SearchTree::node(var, left, right))
        }
        Some(t) => Err(TreeParseError::Unexpected(t.clone())),
        None => Err(TreeParseError::UnexpectedEnd),
    }
}

/// Checks that `tree` is a search tree of `formula` under `discipline`.
///
/// At each node the discipline's closure is applied first; `()` is valid
/// iff the closed formula contains the empty clause, and `(x L R)` is valid
/// iff it does not, `x` occurs in the closed formula and may be branched on,
/// and `L`, `R` are valid for the two restrictions.
pub fn validate_tree(formula: &Formula, tree: &SearchTree, discipline: &TreeDiscipline) -> bool {
    let closed = discipline.close(formula);
    match tree {
        SearchTree::Empty => closed.has_empty_clause(),
        SearchTree::Node(x, left, right) => {
            !closed.has_empty_clause()
                && discipline.may_branch(*x)
                && closed.mentions(*x)
                && validate_tree(&closed.assign(x.neg()), left, discipline)
                && validate_tree(&closed.assign(x.pos()), right, discipline)
        }
    }
}

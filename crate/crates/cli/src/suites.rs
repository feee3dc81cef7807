//! Seeded law-verification suites.
//!
//! Each suite draws instances from an [`InstanceGenerator`], evaluates both
//! sides of an identity with the exact oracles and records mismatches.
//! Instances are generated before they are checked, so a failing or
//! budget-limited instance never shifts the ones after it.

use std::collections::BTreeSet;
use std::fmt;
use std::str::FromStr;
use std::time::{Duration, Instant};

use num_bigint::BigUint;
use optproof::cnf::{count_models, is_satisfiable, pure_eliminate, restrict, unit_propagate};
use optproof::combinators::{
    c_transform, e_transform, exact_size_formula, lemma1_tree_back, mono_shield, product, product_tree,
    reduce_eminsat, reduce_ots_conp, reduce_ots_to_obv, reduce_parity_sat, shield_tree_back, sum,
    to_dpll_equivalent, union_disjoint, Construction, ConstructionError, DecideError, FreshAllocator,
};
use optproof::optimal::Oracle;
use optproof::resolution::{
    all_minimum_proofs, g_transform, min_regular_size, push_pivot_to_leaves, reduce_orp, validate_regular_proof,
    ResolutionError,
};
use optproof::trees::validate_tree;
use optproof::{
    BigSize, Calculus, Clause, Formula, Literal, OracleConfig, OracleError, PartialAssignment, ProofSize,
    SearchTree, TreeDiscipline, Variable,
};
use rand::Rng;
use serde::Serialize;
use thiserror::Error;

use crate::generator::{shifted, InstanceGenerator};

/// Node budget for every tree-oracle call made by a suite.
pub const SUITE_NODE_BUDGET: u64 = 20_000_000;
/// How many optimal trees are inspected when looking for one of a given shape.
const TREE_SCAN_LIMIT: usize = 256;

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub enum Suite {
    Union,
    Sum,
    Product,
    Lemma1,
    Shield,
    CxSize,
    ExSize,
    ExactSize,
    Cross,
    ResUnion,
    ResGx,
    ResOrp,
    Reductions,
    ResSum,
    ResProduct,
}

impl Suite {
    pub const ALL: [Suite; 15] = [
        Suite::Union,
        Suite::Sum,
        Suite::Product,
        Suite::Lemma1,
        Suite::Shield,
        Suite::CxSize,
        Suite::ExSize,
        Suite::ExactSize,
        Suite::Cross,
        Suite::ResUnion,
        Suite::ResGx,
        Suite::ResOrp,
        Suite::Reductions,
        Suite::ResSum,
        Suite::ResProduct,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Suite::Union => "union",
            Suite::Sum => "sum",
            Suite::Product => "product",
            Suite::Lemma1 => "lemma1",
            Suite::Shield => "shield",
            Suite::CxSize => "cx-size",
            Suite::ExSize => "ex-size",
            Suite::ExactSize => "exact-size",
            Suite::Cross => "cross",
            Suite::ResUnion => "res-union",
            Suite::ResGx => "res-gx",
            Suite::ResOrp => "res-orp",
            Suite::Reductions => "reductions",
            Suite::ResSum => "res-sum",
            Suite::ResProduct => "res-product",
        }
    }

    /// Report-only suites: mismatches are observations, not failures of the
    /// tool.
    pub fn is_exploratory(self) -> bool {
        matches!(self, Suite::ResSum | Suite::ResProduct)
    }
}

impl fmt::Display for Suite {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("unknown suite `{0}`")]
pub struct UnknownSuite(pub String);

impl FromStr for Suite {
    type Err = UnknownSuite;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Suite::ALL.into_iter().find(|suite| suite.name() == s).ok_or_else(|| UnknownSuite(s.to_string()))
    }
}

#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Serialize)]
pub struct Failure {
    /// Canonical text of the instance.
    pub instance: String,
    pub check: String,
    pub expected: String,
    pub actual: String,
}

#[derive(Clone, Debug, Serialize)]
pub struct LawSuiteReport {
    pub suite: String,
    pub seed: u64,
    pub samples: usize,
    pub max_vars: u32,
    pub exploratory: bool,
    pub instances: usize,
    pub failures: Vec<Failure>,
    pub budget_exhaustions: usize,
    #[serde(skip)]
    pub elapsed: Duration,
}

impl LawSuiteReport {
    pub fn passed(&self) -> bool {
        self.failures.is_empty()
    }

    /// Deterministic JSON; the elapsed time is left out so equal seeds give
    /// equal bytes.
    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }

    /// Deterministic text summary, one line per failure.
    pub fn render(&self) -> String {
        let verdict = match (self.passed(), self.exploratory) {
            (true, _) => "PASS",
            (false, true) => "OBSERVED",
            (false, false) => "FAIL",
        };
        let mut out = format!(
            "{verdict} {}: {} instances, {} failures, {} budget exhaustions (seed {}, max_vars {})\n",
            self.suite,
            self.instances,
            self.failures.len(),
            self.budget_exhaustions,
            self.seed,
            self.max_vars
        );
        for f in &self.failures {
            out.push_str(&format!("  {} [{}]: expected {}, got {}\n", f.instance, f.check, f.expected, f.actual));
        }
        out
    }
}

/// Runs `suite` on `samples` seeded instances with at most `max_vars`
/// variables per generated formula.
///
/// `ex-size` and `exact-size` are exhaustive and ignore `samples`; the
/// E-MINSAT part of `reductions` is exhaustive as well.
pub fn run_law_suite(suite: Suite, samples: usize, seed: u64, max_vars: u32) -> LawSuiteReport {
    run_law_suite_traced(suite, samples, seed, max_vars, None)
}

/// Observer called after each instance with its text and check time.
pub type Trace<'a> = &'a mut dyn FnMut(&str, Duration);

/// [`run_law_suite`] with a per-instance observer.
pub fn run_law_suite_traced(
    suite: Suite,
    samples: usize,
    seed: u64,
    max_vars: u32,
    trace: Option<Trace<'_>>,
) -> LawSuiteReport {
    let start = Instant::now();
    let mut gen = InstanceGenerator::new(seed, max_vars);
    let mut t = Tally { trace, ..Tally::default() };
    match suite {
        Suite::Union => union_law(&mut gen, samples, &mut t),
        Suite::Sum => sum_law(&mut gen, samples, &mut t),
        Suite::Product => product_law(&mut gen, samples, &mut t),
        Suite::Lemma1 => lemma1(&mut gen, samples, &mut t),
        Suite::Shield => shield(&mut gen, samples, &mut t),
        Suite::CxSize => cx_size(&mut gen, samples, &mut t),
        Suite::ExSize => ex_size(&mut t),
        Suite::ExactSize => exact_size(&mut t),
        Suite::Cross => cross(&mut gen, samples, &mut t),
        Suite::ResUnion => res_union(&mut gen, samples, &mut t),
        Suite::ResGx => res_gx(&mut gen, samples, &mut t),
        Suite::ResOrp => res_orp(&mut gen, samples, &mut t),
        Suite::Reductions => reductions(&mut gen, samples, &mut t),
        Suite::ResSum => res_sum(&mut gen, samples, &mut t),
        Suite::ResProduct => res_product(&mut gen, samples, &mut t),
    }
    t.failures.sort();
    LawSuiteReport {
        suite: suite.name().to_string(),
        seed,
        samples,
        max_vars,
        exploratory: suite.is_exploratory(),
        instances: t.instances,
        failures: t.failures,
        budget_exhaustions: t.exhausted,
        elapsed: start.elapsed(),
    }
}

// ---------------------------------------------------------------------------
// plumbing

enum Trouble {
    Budget,
    Error(String),
}

impl From<OracleError> for Trouble {
    fn from(e: OracleError) -> Self {
        match e {
            OracleError::BudgetExhausted { .. } => Trouble::Budget,
            other => Trouble::Error(other.to_string()),
        }
    }
}

impl From<ResolutionError> for Trouble {
    fn from(e: ResolutionError) -> Self {
        match e {
            ResolutionError::BudgetExhausted(_) => Trouble::Budget,
            other => Trouble::Error(other.to_string()),
        }
    }
}

impl From<DecideError> for Trouble {
    fn from(e: DecideError) -> Self {
        match e {
            DecideError::Oracle(e) => e.into(),
            DecideError::Resolution(e) => e.into(),
        }
    }
}

impl From<ConstructionError> for Trouble {
    fn from(e: ConstructionError) -> Self {
        Trouble::Error(e.to_string())
    }
}

#[derive(Default)]
struct Checks(Vec<(String, String, String)>);

impl Checks {
    fn eq<T: PartialEq + fmt::Display>(&mut self, what: &str, expected: T, actual: T) {
        if expected != actual {
            self.0.push((what.to_string(), expected.to_string(), actual.to_string()));
        }
    }

    fn holds(&mut self, what: &str, ok: bool) {
        if !ok {
            self.0.push((what.to_string(), "true".into(), "false".into()));
        }
    }
}

#[derive(Default)]
struct Tally<'a> {
    instances: usize,
    failures: Vec<Failure>,
    exhausted: usize,
    trace: Option<Trace<'a>>,
}

impl Tally<'_> {
    fn check(&mut self, instance: String, body: impl FnOnce(&mut Checks) -> Result<(), Trouble>) {
        self.instances += 1;
        let mut checks = Checks::default();
        let start = Instant::now();
        let outcome = body(&mut checks);
        if let Some(trace) = self.trace.as_mut() {
            trace(&instance, start.elapsed());
        }
        match outcome {
            Ok(()) => {}
            Err(Trouble::Budget) => {
                self.exhausted += 1;
                return;
            }
            Err(Trouble::Error(message)) => checks.0.push(("error".into(), "no error".into(), message)),
        }
        for (check, expected, actual) in checks.0 {
            self.failures.push(Failure { instance: instance.clone(), check, expected, actual });
        }
    }
}

fn size_under(f: &Formula, discipline: TreeDiscipline) -> Result<BigSize, Trouble> {
    let mut oracle = Oracle::<BigUint>::new(OracleConfig::new(discipline).with_budget(SUITE_NODE_BUDGET))?;
    Ok(oracle.size(f)?)
}

fn tree_under(f: &Formula, discipline: TreeDiscipline) -> Result<SearchTree, Trouble> {
    let mut oracle = Oracle::<u64>::new(OracleConfig::new(discipline).with_budget(SUITE_NODE_BUDGET))?;
    Ok(oracle.tree(f)?)
}

fn bt(f: &Formula) -> Result<BigSize, Trouble> {
    size_under(f, TreeDiscipline::backtracking())
}

fn tree_size(t: &SearchTree) -> BigSize {
    ProofSize::Finite(BigUint::from(t.size()))
}

fn construction_size(c: &Construction, kind: Calculus) -> Result<BigSize, Trouble> {
    size_under(&c.formula, c.discipline(kind))
}

/// Upper bound on the minimum regular refutation length of an unsatisfiable
/// formula: the complete tree has `2^n - 1` internal nodes.
fn step_budget(f: &Formula) -> usize {
    ((1usize << f.vars().len().min(16)) - 1).max(1)
}

fn pow2(n: usize) -> BigUint {
    BigUint::from(1u32) << n
}

fn pair_text(f: &Formula, h: &Formula) -> String {
    format!("F={f} H={h}")
}

// ---------------------------------------------------------------------------
// tree laws

fn union_law(gen: &mut InstanceGenerator, samples: usize, t: &mut Tally<'_>) {
    for _ in 0..samples {
        let (f, h) = gen.disjoint_unsat_pair(gen.max_vars());
        t.check(pair_text(&f, &h), |c| {
            let (sf, sh) = (bt(&f)?, bt(&h)?);
            c.eq("s(F ∪ H) = min", sf.min(sh), bt(&union_disjoint(&f, &h)?)?);
            Ok(())
        });
    }
}

fn sum_law(gen: &mut InstanceGenerator, samples: usize, t: &mut Tally<'_>) {
    for _ in 0..samples {
        let (f, h) = gen.disjoint_unsat_pair(gen.max_vars());
        t.check(pair_text(&f, &h), |c| {
            let (sf, sh) = (bt(&f)?, bt(&h)?);
            let (s, _) = sum(&f, &h, &mut FreshAllocator::new())?;
            c.eq("s(F + H) = s(F) + s(H) + 1", sf.plus(&sh).succ(), bt(&s)?);
            Ok(())
        });
    }
}

fn product_law(gen: &mut InstanceGenerator, samples: usize, t: &mut Tally<'_>) {
    for _ in 0..samples {
        let (f, h) = gen.disjoint_unsat_pair(gen.max_vars());
        t.check(pair_text(&f, &h), |c| {
            let (sf, sh) = (bt(&f)?, bt(&h)?);
            let p = product(&f, &h)?;
            let expected = sf.times(&sh).plus(&sf).plus(&sh);
            c.eq("s(F · H) = s(F)s(H) + s(F) + s(H)", expected.clone(), bt(&p)?);
            let d = TreeDiscipline::backtracking();
            let joined = product_tree(&tree_under(&f, d.clone())?, &tree_under(&h, d.clone())?);
            c.holds("product tree validates", validate_tree(&p, &joined, &d));
            c.eq("product tree size", expected, tree_size(&joined));
            Ok(())
        });
    }
}

fn lemma1(gen: &mut InstanceGenerator, samples: usize, t: &mut Tally<'_>) {
    for _ in 0..samples {
        let f = gen.unsat();
        t.check(format!("F={f}"), |c| {
            let image = to_dpll_equivalent(&f, &mut FreshAllocator::new());
            let s_bt = bt(&f)?;
            c.eq("s_DPLL(image) = s_BT(F)", s_bt.clone(), size_under(&image.formula, TreeDiscipline::dpll())?);
            let dst = tree_under(&image.formula, TreeDiscipline::dpll())?;
            let back = lemma1_tree_back(&dst, &image.mirror)?;
            c.holds("mapped tree is a BST of F", validate_tree(&f, &back, &TreeDiscipline::backtracking()));
            c.eq("mapped tree size", s_bt, tree_size(&back));
            Ok(())
        });
    }
}

/// Whether the monotone literal rule fires at some node of `tree` when it
/// is run as a DPLL tree of `f`.
fn pure_rule_fires(f: &Formula, tree: &SearchTree) -> bool {
    let up = unit_propagate(f).0;
    if !pure_eliminate(&up).1.is_empty() {
        return true;
    }
    match tree {
        SearchTree::Empty => false,
        SearchTree::Node(x, l, r) => {
            pure_rule_fires(&up.assign(x.neg()), l) || pure_rule_fires(&up.assign(x.pos()), r)
        }
    }
}

fn shield(gen: &mut InstanceGenerator, samples: usize, t: &mut Tally<'_>) {
    for _ in 0..samples {
        let f = gen.either_within(gen.max_vars());
        t.check(format!("F={f}"), |c| {
            let shielded = mono_shield(&f, &mut FreshAllocator::new());
            let mono = size_under(&f, TreeDiscipline::dpll_mono())?;
            c.eq("s_DPLL(shield) = s_Mono(F)", mono.clone(), size_under(&shielded.formula, TreeDiscipline::dpll())?);
            if mono.is_finite() {
                let dst = tree_under(&shielded.formula, TreeDiscipline::dpll())?;
                c.holds("monotone rule never fires", !pure_rule_fires(&shielded.formula, &dst));
                let back = shield_tree_back(&dst, &shielded.mirror)?;
                c.holds("mapped tree is a DMST of F", validate_tree(&f, &back, &TreeDiscipline::dpll_mono()));
                c.eq("mapped tree size", mono, tree_size(&back));
            }
            Ok(())
        });
    }
}

/// All total assignments to `vars`.
fn assignments(vars: &BTreeSet<Variable>) -> Vec<PartialAssignment> {
    let vars: Vec<Variable> = vars.iter().copied().collect();
    (0..1u64 << vars.len())
        .map(|bits| {
            let lits = vars.iter().enumerate().map(|(i, v)| Literal::new(*v, bits >> i & 1 == 1));
            PartialAssignment::from_literals(lits).expect("distinct variables")
        })
        .collect()
}

/// Whether the top `|x|` levels of `tree` branch every variable of `x` on
/// every path.
fn complete_over(tree: &SearchTree, x: &BTreeSet<Variable>) -> bool {
    if x.is_empty() {
        return true;
    }
    match tree {
        SearchTree::Empty => false,
        SearchTree::Node(v, l, r) => {
            let mut rest = x.clone();
            rest.remove(v) && complete_over(l, &rest) && complete_over(r, &rest)
        }
    }
}

fn cx_size(gen: &mut InstanceGenerator, samples: usize, t: &mut Tally<'_>) {
    for _ in 0..samples {
        let f = gen.either_within(gen.max_vars().min(4));
        let vars: Vec<Variable> = f.vars().into_iter().collect();
        let lo = vars.len().saturating_sub(2);
        let n = gen.rng().gen_range(lo..=vars.len().min(2));
        let mut x = BTreeSet::new();
        while x.len() < n {
            x.insert(vars[gen.rng().gen_range(0..vars.len())]);
        }
        let x_text: Vec<String> = x.iter().map(|v| v.to_string()).collect();
        t.check(format!("F={f} X={{{}}}", x_text.join(" ")), |c| {
            let y: BTreeSet<Variable> = vars.iter().copied().filter(|v| !x.contains(v)).collect();
            let mut expected = ProofSize::Finite(pow2(n) - 1u32);
            for a in assignments(&x) {
                let sub = restrict(&f, &a);
                expected = expected.plus(&size_under(&sub, TreeDiscipline::dpll_mono().restricted_to(y.clone()))?);
            }
            let cx = c_transform(&Construction::plain(f.clone()), &x, &mut FreshAllocator::new())?;
            let actual = construction_size(&cx, Calculus::DpllMono)?;
            c.eq("s(c_X(F)) = 2^n - 1 + Σ s(F|X')", expected, actual.clone());
            if actual.is_finite() {
                let mut oracle = Oracle::<u64>::new(
                    OracleConfig::new(cx.discipline(Calculus::DpllMono)).with_budget(SUITE_NODE_BUDGET),
                )?;
                let trees = oracle.all_optimal_trees(&cx.formula, TREE_SCAN_LIMIT)?;
                c.holds("some optimal tree is complete over X", trees.iter().any(|t| complete_over(t, &x)));
            }
            Ok(())
        });
    }
}

/// Every set of at most `max_clauses` clauses over `vars`, using each
/// non-tautological nonempty clause at most once.
fn all_small_formulas(vars: &[Variable], max_clauses: usize) -> Vec<Formula> {
    let mut clauses = Vec::new();
    for code in 1..3usize.pow(vars.len() as u32) {
        let mut lits = Vec::new();
        let mut rest = code;
        for v in vars {
            match rest % 3 {
                1 => lits.push(v.pos()),
                2 => lits.push(v.neg()),
                _ => {}
            }
            rest /= 3;
        }
        clauses.push(Clause::new(lits));
    }
    let mut out = vec![Vec::new()];
    let mut frontier: Vec<(usize, Vec<Clause>)> = vec![(0, Vec::new())];
    for _ in 0..max_clauses {
        let mut next = Vec::new();
        for (start, chosen) in &frontier {
            for (i, c) in clauses.iter().enumerate().skip(*start) {
                let mut more = chosen.clone();
                more.push(c.clone());
                out.push(more.clone());
                next.push((i + 1, more));
            }
        }
        frontier = next;
    }
    out.into_iter().map(Formula::new).collect()
}

fn ex_size(t: &mut Tally<'_>) {
    for n in 1..=2u32 {
        let x: Vec<Variable> = (1..=n).map(Variable::new).collect();
        let x_set: BTreeSet<Variable> = x.iter().copied().collect();
        for g in all_small_formulas(&x, 3) {
            t.check(format!("G={g} n={n}"), |c| {
                let models: BigUint = count_models(&g, &x_set).expect("G is over X");
                let expected = ProofSize::Finite(pow2(n as usize + 1) - 1u32 + models * 2u32);
                let e = e_transform(&g, &x_set, &mut FreshAllocator::new())?;
                c.eq("s(e_X(G)) = 2^{n+1} - 1 + 2|Mod(G)|", expected, construction_size(&e, Calculus::DpllMono)?);
                Ok(())
            });
        }
    }
}

/// Sizes checked by the `exact-size` suite.
pub const EXACT_SIZE_MAX: usize = 12;

fn exact_size(t: &mut Tally<'_>) {
    for kind in [Calculus::Backtracking, Calculus::DpllMono, Calculus::Dpll] {
        for m in 0..=EXACT_SIZE_MAX {
            t.check(format!("m={m} kind={kind}"), |c| {
                let built = exact_size_formula(m, kind, &mut FreshAllocator::new());
                let expected = ProofSize::Finite(BigUint::from(m));
                c.eq("s(exact(m)) = m", expected, construction_size(&built, kind)?);
                Ok(())
            });
        }
    }
}

fn cross(gen: &mut InstanceGenerator, samples: usize, t: &mut Tally<'_>) {
    for _ in 0..samples {
        let f = gen.unsat_within(gen.max_vars().min(3));
        t.check(format!("F={f}"), |c| {
            let s_bt = bt(&f)?;
            let mono = size_under(&f, TreeDiscipline::dpll_mono())?;
            let dpll = size_under(&f, TreeDiscipline::dpll())?;
            c.holds("s_DPLL <= s_Mono", dpll <= mono);
            c.holds("s_Mono <= s_BT", mono <= s_bt);
            let res = min_regular_size(&f, step_budget(&f))?;
            c.holds("min regular size <= s_BT", res.convert::<BigUint>() <= s_bt);
            Ok(())
        });
    }
}

// ---------------------------------------------------------------------------
// resolution

const RES_PAIR_VARS: u32 = 2;

fn res_size(f: &Formula) -> Result<ProofSize<u64>, Trouble> {
    Ok(min_regular_size(f, step_budget(f))?)
}

fn res_union(gen: &mut InstanceGenerator, samples: usize, t: &mut Tally<'_>) {
    for _ in 0..samples {
        let (f, h) = gen.disjoint_unsat_pair(RES_PAIR_VARS);
        t.check(pair_text(&f, &h), |c| {
            let both = union_disjoint(&f, &h)?;
            c.eq("res(F ∪ H) = min", res_size(&f)?.min(res_size(&h)?), res_size(&both)?);
            Ok(())
        });
    }
}

/// Clauses of an unsatisfiable `F` whose removal makes it satisfiable.
fn necessary_clauses(f: &Formula) -> Vec<Clause> {
    f.clauses().iter().filter(|c| is_satisfiable(&f.without(c))).cloned().collect()
}

fn res_gx(gen: &mut InstanceGenerator, samples: usize, t: &mut Tally<'_>) {
    let mut produced = 0;
    while produced < samples {
        let f = gen.unsat_within(3);
        let needed = necessary_clauses(&f);
        if needed.is_empty() {
            continue;
        }
        produced += 1;
        let gamma = needed[gen.rng().gen_range(0..needed.len())].clone();
        t.check(format!("F={f} γ={gamma}"), |c| {
            let x = Variable::new(f.max_var().map_or(1, |v| v.id() + 1));
            let g = g_transform(&f, &gamma, x)?;
            let proofs = all_minimum_proofs(&g, step_budget(&g), 10_000)?;
            c.holds("a minimum proof exists", !proofs.is_empty());
            let unit = Clause::unit(x.pos());
            let delta = gamma.with(x.neg());
            for p in &proofs {
                c.eq("steps on x in a minimum proof", 1, p.steps_on(x).count());
                let pushed = push_pivot_to_leaves(p, x)?;
                c.holds("pushed proof validates", validate_regular_proof(&g, &pushed));
                c.holds("pushing never grows a proof", pushed.size() <= p.size());
            }
            c.holds("some minimum proof resolves x at the leaves", proofs.iter().any(|p| p.resolves_leaves(&unit, &delta)));
            Ok(())
        });
    }
}

const ORP_VARS: u32 = 2;

fn res_orp(gen: &mut InstanceGenerator, samples: usize, t: &mut Tally<'_>) {
    for _ in 0..samples {
        let f = gen.either_within(ORP_VARS);
        t.check(format!("F={f}"), |c| {
            let threshold = step_budget(&f);
            let out = reduce_orp(&f, &mut FreshAllocator::new(), threshold)?;
            let answer = out.decide(Some(SUITE_NODE_BUDGET), threshold + 4)?;
            c.eq("ORP answer = F unsatisfiable", !is_satisfiable(&f), answer);
            Ok(())
        });
    }
}

fn res_sum(gen: &mut InstanceGenerator, samples: usize, t: &mut Tally<'_>) {
    for _ in 0..samples {
        let (f, h) = gen.disjoint_unsat_pair(RES_PAIR_VARS);
        t.check(pair_text(&f, &h), |c| {
            let (s, _) = sum(&f, &h, &mut FreshAllocator::new())?;
            let expected = res_size(&f)?.plus(&res_size(&h)?).succ();
            c.eq("res(F + H) = res(F) + res(H) + 1", expected, res_size(&s)?);
            Ok(())
        });
    }
}

/// Products square the clause count, so the second factor stays on one
/// variable to keep the exhaustive resolution search small.
fn res_product(gen: &mut InstanceGenerator, samples: usize, t: &mut Tally<'_>) {
    for _ in 0..samples {
        let f = gen.unsat_within(RES_PAIR_VARS);
        let h = shifted(&gen.unsat_within(1), RES_PAIR_VARS);
        t.check(pair_text(&f, &h), |c| {
            let (sf, sh) = (res_size(&f)?, res_size(&h)?);
            let expected = sf.times(&sh).plus(&sf).plus(&sh);
            c.eq("res(F · H) = res(F)res(H) + res(F) + res(H)", expected, res_size(&product(&f, &h)?)?);
            Ok(())
        });
    }
}

// ---------------------------------------------------------------------------
// reductions

const REDUCTION_VARS: u32 = 3;
/// DPLL-style padding blocks have no cheap lower bound, so the oracle needs
/// smaller instances under those calculi.
const MIRROR_REDUCTION_VARS: u32 = 2;
const KINDS: [Calculus; 3] = [Calculus::Backtracking, Calculus::DpllMono, Calculus::Dpll];

fn reductions(gen: &mut InstanceGenerator, samples: usize, t: &mut Tally<'_>) {
    parity(gen, samples, t);
    ots_conp(gen, samples, t);
    ots_to_obv(gen, samples, t);
    eminsat(t);
}

fn seq_text(seq: &[Formula]) -> String {
    seq.iter().map(|f| f.to_string()).collect::<Vec<_>>().join(" ; ")
}

fn parity(gen: &mut InstanceGenerator, samples: usize, t: &mut Tally<'_>) {
    for i in 0..samples {
        let kind = KINDS[i % KINDS.len()];
        let r = if kind == Calculus::Backtracking && gen.rng().gen() { 4 } else { 2 };
        let seq: Vec<Formula> = (0..r)
            .map(|j| {
                let f = if j + 2 >= r {
                    gen.unsat_within(REDUCTION_VARS)
                } else {
                    gen.either_within(REDUCTION_VARS)
                };
                shifted(&f, REDUCTION_VARS * j as u32)
            })
            .collect();
        t.check(format!("paritysat {kind} [{}]", seq_text(&seq)), |c| {
            let mut hard = 1usize;
            for f in &seq {
                if let ProofSize::Finite(s) = bt(f)? {
                    hard = hard.max(usize::try_from(s).expect("small") + 1);
                }
            }
            let first_unsat = seq.iter().position(|f| !is_satisfiable(f)).expect("last two are unsatisfiable");
            let out = reduce_parity_sat(&seq, kind, hard, &mut FreshAllocator::new())?;
            c.eq("OBV answer = first unsat index odd", first_unsat % 2 == 0, out.decide(Some(SUITE_NODE_BUDGET), 0)?);
            Ok(())
        });
    }
}

fn ots_conp(gen: &mut InstanceGenerator, samples: usize, t: &mut Tally<'_>) {
    for i in 0..samples {
        let kind = KINDS[i % KINDS.len()];
        let vars = if kind == Calculus::Backtracking { REDUCTION_VARS } else { MIRROR_REDUCTION_VARS };
        let g = gen.either_within(vars);
        t.check(format!("otsconp {kind} G={g}"), |c| {
            let out = reduce_ots_conp(&g, kind, &mut FreshAllocator::new())?;
            c.eq("OTS answer = G unsatisfiable", !is_satisfiable(&g), out.decide(Some(SUITE_NODE_BUDGET), 0)?);
            Ok(())
        });
    }
}

fn ots_to_obv(gen: &mut InstanceGenerator, samples: usize, t: &mut Tally<'_>) {
    for _ in 0..samples {
        let g = gen.either_within(REDUCTION_VARS);
        let k = gen.rng().gen_range(0..=8usize);
        t.check(format!("otstoobv G={g} k={k}"), |c| {
            let s = size_under(&g, TreeDiscipline::dpll_mono())?;
            let out = reduce_ots_to_obv(&g, k, &mut FreshAllocator::new())?;
            c.eq("OBV answer = s(G) <= k", s.within(&BigUint::from(k)), out.decide(Some(SUITE_NODE_BUDGET), 0)?);
            Ok(())
        });
    }
}

fn eminsat(t: &mut Tally<'_>) {
    let (xv, yv) = (Variable::new(1), Variable::new(2));
    let x = BTreeSet::from([xv]);
    let y = BTreeSet::from([yv]);
    for f in all_small_formulas(&[xv, yv], 3) {
        t.check(format!("eminsat F={f}"), |c| {
            let mut truth = false;
            for a in assignments(&x) {
                let models: u64 = count_models(&restrict(&f, &a), &y).expect("F is over X ∪ Y");
                truth |= 2 * models <= 1 << y.len();
            }
            let out = reduce_eminsat(&f, &x, &y, &mut FreshAllocator::new())?;
            c.eq("OTS answer = some X' halves the Y-models", truth, out.decide(Some(SUITE_NODE_BUDGET), 0)?);
            Ok(())
        });
    }
}

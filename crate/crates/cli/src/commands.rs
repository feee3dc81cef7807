//! Subcommand definitions and dispatch.

use std::collections::BTreeSet;
use std::fs;
use std::io::{self, Read, Write};
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use num_bigint::BigUint;
use optproof::cnf::{parse_clause, parse_dimacs, write_dimacs};
use optproof::combinators::{
    c_transform, e_transform, exact_size_formula, hard_family, lemma1_tree_back, mono_shield, product,
    product_tree, reduce_eminsat, reduce_ots_conp, reduce_ots_to_obv, reduce_parity_sat, shield_tree_back, sum,
    to_dpll_equivalent, union_disjoint, v_formula, Construction, FreshAllocator, HardFamily, Mirrored,
    ReductionOutput,
};
use optproof::optimal::Oracle;
use optproof::resolution::{
    f_transform, g_transform, is_optimal_resolution_pair, min_regular_size, minimum_regular_proof, parse_trace,
    push_pivot_to_leaves, reduce_orp, validate_regular_proof, write_trace, ResolutionError,
};
use optproof::trees::validate_tree;
use optproof::{Calculus, Formula, OracleConfig, OracleError, SearchTree, TreeDiscipline, Variable};
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::suites::{run_law_suite_traced, Suite};

/// Environment variable holding the default budget.
pub const BUDGET_ENV: &str = "OPTPROOF_BUDGET";

#[derive(Debug, Error)]
pub enum CliError {
    /// `--help` or `--version` output; not a failure.
    #[error("{0}")]
    Help(String),
    #[error("{0}")]
    Usage(String),
    #[error("{path}: {source}")]
    Io { path: String, source: io::Error },
    #[error("budget exhausted: {0}")]
    Budget(String),
    #[error("{0} law suite(s) failed")]
    SuiteFailed(usize),
    #[error("{0}")]
    Other(String),
}

impl CliError {
    /// 0 success, 1 error, 2 law-suite failure, 3 budget exhausted.
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Help(_) => 0,
            CliError::SuiteFailed(_) => 2,
            CliError::Budget(_) => 3,
            _ => 1,
        }
    }
}

impl From<OracleError> for CliError {
    fn from(e: OracleError) -> Self {
        match e {
            OracleError::BudgetExhausted { .. } => CliError::Budget(e.to_string()),
            other => CliError::Other(other.to_string()),
        }
    }
}

impl From<ResolutionError> for CliError {
    fn from(e: ResolutionError) -> Self {
        match e {
            ResolutionError::BudgetExhausted(_) => CliError::Budget(e.to_string()),
            other => CliError::Other(other.to_string()),
        }
    }
}

impl From<optproof::combinators::DecideError> for CliError {
    fn from(e: optproof::combinators::DecideError) -> Self {
        match e {
            optproof::combinators::DecideError::Oracle(e) => e.into(),
            optproof::combinators::DecideError::Resolution(e) => e.into(),
        }
    }
}

macro_rules! other_error {
    ($($t:ty),*) => {$(
        impl From<$t> for CliError {
            fn from(e: $t) -> Self {
                CliError::Other(e.to_string())
            }
        }
    )*};
}

other_error!(
    optproof::combinators::ConstructionError,
    optproof::cnf::DimacsError,
    optproof::cnf::ParseError,
    optproof::trees::TreeParseError,
    optproof::resolution::TraceError,
    serde_json::Error
);

#[derive(Parser, Debug)]
#[command(name = "optproof", version, about = "Exact optimal search trees and regular resolution proofs for small CNFs")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Generate a formula family.
    Gen(GenArgs),
    /// Combine two variable-disjoint formulas.
    Combine(CombineArgs),
    /// Apply a formula transformation or map a tree or proof back.
    Transform(TransformArgs),
    /// Optimal search trees: size, witness tree, OBV and OTS queries.
    Opt(OptArgs),
    /// Minimum regular resolution refutations.
    Res(ResArgs),
    /// Build a reduction instance.
    Reduce(ReduceArgs),
    /// Run law-verification suites.
    Verify(VerifyArgs),
    /// Print a tree or a resolution proof in Graphviz DOT.
    ExportDot(ExportDotArgs),
}

#[derive(Clone, Copy, Debug, ValueEnum)]
pub enum Method {
    Bt,
    Dpll,
    Dpllmono,
}

impl From<Method> for Calculus {
    fn from(m: Method) -> Calculus {
        match m {
            Method::Bt => Calculus::Backtracking,
            Method::Dpll => Calculus::Dpll,
            Method::Dpllmono => Calculus::DpllMono,
        }
    }
}

#[derive(Args, Debug)]
pub struct Output {
    /// Write the formula here instead of stdout.
    #[arg(short, long)]
    pub output: Option<PathBuf>,
    /// Write the JSON sidecar (roles, mirror map, question) here.
    #[arg(long)]
    pub sidecar: Option<PathBuf>,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
pub enum Family {
    Php,
    Tseitin,
    Completek,
    /// `V_n`: the restricted-branching gadget over n variables.
    Vn,
    /// `I_m`: a formula of optimal size exactly m.
    Im,
}

#[derive(Args, Debug)]
pub struct GenArgs {
    pub family: Family,
    pub param: usize,
    /// Calculus for `im`.
    #[arg(long, value_enum, default_value = "bt")]
    pub method: Method,
    #[command(flatten)]
    pub out: Output,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
pub enum Combinator {
    Union,
    Sum,
    Product,
}

#[derive(Args, Debug)]
pub struct CombineArgs {
    pub op: Combinator,
    pub first: PathBuf,
    pub second: PathBuf,
    /// For `product`: optimal trees of the operands, joined into a tree of
    /// the product instead of printing the formula.
    #[arg(long, num_args = 2, value_names = ["TREE_F", "TREE_H"])]
    pub trees: Option<Vec<PathBuf>>,
    #[command(flatten)]
    pub out: Output,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
pub enum Transform {
    Lemma1,
    Shield,
    Cx,
    Ex,
    Gx,
    Fxy,
    /// Map a DPLL tree of a `lemma1` image back to a backtracking tree.
    Lemma1Back,
    /// Map a DPLL tree of a `shield` image back to a DPLL-Mono tree.
    ShieldBack,
    /// Push the steps on `--x` of a proof trace to the leaves.
    Push,
}

#[derive(Args, Debug)]
pub struct TransformArgs {
    pub kind: Transform,
    /// Formula (DIMACS), or the tree/proof for the mapping variants.
    pub input: PathBuf,
    /// Variable list for `cx`/`ex`; the new variable for `gx`/`fxy`/`push`.
    #[arg(long, value_delimiter = ',')]
    pub x: Vec<u32>,
    /// Second fresh variable for `fxy`.
    #[arg(long)]
    pub y: Option<u32>,
    /// The clause γ for `gx`, as text such as "1 -2".
    #[arg(long, allow_hyphen_values = true)]
    pub gamma: Option<String>,
    /// Sidecar of the image, needed by the `*-back` variants.
    #[arg(long)]
    pub mirror: Option<PathBuf>,
    #[command(flatten)]
    pub out: Output,
}

#[derive(Args, Debug)]
#[group(id = "query", required = true, multiple = false)]
pub struct OptQuery {
    /// Print s(F).
    #[arg(long, group = "query")]
    pub size: bool,
    /// Print an optimal tree.
    #[arg(long, group = "query")]
    pub tree: bool,
    /// Print every optimal root variable.
    #[arg(long, group = "query")]
    pub roots: bool,
    /// Is VAR the root of some optimal tree?
    #[arg(long, value_name = "VAR", group = "query")]
    pub obv: Option<u32>,
    /// Is there a tree of size at most K?
    #[arg(long, value_name = "K", group = "query")]
    pub ots: Option<String>,
    /// Check that a tree file is a valid tree of F.
    #[arg(long, value_name = "TREE", group = "query")]
    pub validate: Option<PathBuf>,
}

#[derive(Args, Debug)]
pub struct OptArgs {
    pub formula: PathBuf,
    #[command(flatten)]
    pub query: OptQuery,
    #[arg(long, value_enum, default_value = "bt")]
    pub method: Method,
    /// Restrict branching to these variables.
    #[arg(long, value_delimiter = ',')]
    pub allowed: Option<Vec<u32>>,
    /// Node budget for the search.
    #[arg(long, env = BUDGET_ENV)]
    pub budget: Option<u64>,
    /// Disable memoization.
    #[arg(long)]
    pub no_memo: bool,
    /// Solve variable-disjoint components separately.
    #[arg(long)]
    pub split: bool,
    /// Print the number of explored search states to stderr.
    #[arg(long)]
    pub stats: bool,
}

#[derive(Args, Debug)]
#[group(id = "res_query", required = true, multiple = false)]
pub struct ResQuery {
    /// Print the minimum regular refutation length.
    #[arg(long, group = "res_query")]
    pub min_size: bool,
    /// Print a minimum regular refutation in trace format.
    #[arg(long, group = "res_query")]
    pub proof: bool,
    /// Is (C1, C2) resolved in some minimum regular refutation?
    #[arg(long, num_args = 2, value_names = ["C1", "C2"], allow_hyphen_values = true, group = "res_query")]
    pub orp: Option<Vec<String>>,
    /// Check a proof trace against the formula.
    #[arg(long, value_name = "PROOF", group = "res_query")]
    pub validate: Option<PathBuf>,
}

#[derive(Args, Debug)]
pub struct ResArgs {
    pub formula: PathBuf,
    #[command(flatten)]
    pub query: ResQuery,
    /// Longest refutation searched for.
    #[arg(long, env = BUDGET_ENV, default_value_t = 8)]
    pub budget: usize,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
pub enum Reduction {
    Paritysat,
    Otsconp,
    Otstoobv,
    Eminsat,
    Orp,
}

#[derive(Args, Debug)]
pub struct ReduceArgs {
    pub reduction: Reduction,
    /// Input formulas (several for `paritysat`, one otherwise).
    #[arg(required = true)]
    pub inputs: Vec<PathBuf>,
    #[arg(long, value_enum, default_value = "bt")]
    pub method: Method,
    /// Size of each padding block for `paritysat`; threshold for `orp`.
    #[arg(long)]
    pub hard_size: Option<usize>,
    /// Size bound of the OTS instance for `otstoobv`.
    #[arg(long)]
    pub k: Option<usize>,
    #[arg(long, value_delimiter = ',')]
    pub x: Vec<u32>,
    #[arg(long, value_delimiter = ',')]
    pub y: Vec<u32>,
    /// Also answer the question with the exact oracles.
    #[arg(long)]
    pub decide: bool,
    #[arg(long, env = BUDGET_ENV)]
    pub budget: Option<u64>,
    #[command(flatten)]
    pub out: Output,
}

#[derive(Args, Debug)]
pub struct VerifyArgs {
    /// Suite name, or `all`.
    pub suite: String,
    #[arg(long, default_value_t = 100)]
    pub samples: usize,
    #[arg(long, default_value_t = 1)]
    pub seed: u64,
    #[arg(long, default_value_t = 4)]
    pub max_vars: u32,
    /// Print JSON reports.
    #[arg(long)]
    pub json: bool,
    /// Also print wall-clock time to stderr.
    #[arg(long)]
    pub timing: bool,
    /// Print every instance and its check time to stderr.
    #[arg(long)]
    pub trace: bool,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
pub enum DotSource {
    Tree,
    Proof,
}

#[derive(Args, Debug)]
pub struct ExportDotArgs {
    pub source: DotSource,
    pub input: PathBuf,
}

/// Parses `args` (including the program name) and runs the command,
/// writing results to `out`.
pub fn run<I, T>(args: I, out: &mut dyn Write) -> Result<(), CliError>
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = Cli::try_parse_from(args).map_err(|e| match e.kind() {
        clap::error::ErrorKind::DisplayHelp | clap::error::ErrorKind::DisplayVersion => {
            CliError::Help(e.to_string())
        }
        _ => CliError::Usage(e.render().to_string()),
    })?;
    execute(cli.command, out)
}

pub fn execute(command: Command, out: &mut dyn Write) -> Result<(), CliError> {
    match command {
        Command::Gen(a) => gen(a, out),
        Command::Combine(a) => combine(a, out),
        Command::Transform(a) => transform(a, out),
        Command::Opt(a) => opt(a, out),
        Command::Res(a) => res(a, out),
        Command::Reduce(a) => reduce(a, out),
        Command::Verify(a) => verify(a, out),
        Command::ExportDot(a) => export_dot(a, out),
    }
}

// ---------------------------------------------------------------------------
// files

fn read_text(path: &Path) -> Result<String, CliError> {
    let io_err = |source| CliError::Io { path: path.display().to_string(), source };
    if path.as_os_str() == "-" {
        let mut s = String::new();
        io::stdin().read_to_string(&mut s).map_err(io_err)?;
        return Ok(s);
    }
    fs::read_to_string(path).map_err(io_err)
}

fn read_formula(path: &Path) -> Result<Formula, CliError> {
    Ok(parse_dimacs(&read_text(path)?)?)
}

fn write_file(path: &Path, text: &str) -> Result<(), CliError> {
    fs::write(path, text).map_err(|source| CliError::Io { path: path.display().to_string(), source })
}

fn emit(out: &mut dyn Write, text: &str) -> Result<(), CliError> {
    out.write_all(text.as_bytes()).map_err(|source| CliError::Io { path: "<output>".into(), source })
}

fn emitln(out: &mut dyn Write, text: impl std::fmt::Display) -> Result<(), CliError> {
    emit(out, &format!("{text}\n"))
}

/// Sidecar written next to constructed formulas.
#[derive(Debug, Default, Serialize, Deserialize)]
pub struct Sidecar {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub reduction: Option<ReductionOutput>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub discipline: Option<TreeDiscipline>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub branchable: Vec<Variable>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub roles: Vec<(Variable, optproof::combinators::Role)>,
    /// Copy variable to original variable.
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub mirror: Vec<(Variable, Variable)>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub connective: Option<Variable>,
}

fn write_formula(formula: &Formula, sidecar: Sidecar, dest: &Output, out: &mut dyn Write) -> Result<(), CliError> {
    let text = write_dimacs(formula);
    match &dest.output {
        Some(path) => write_file(path, &text)?,
        None => emit(out, &text)?,
    }
    if let Some(path) = &dest.sidecar {
        write_file(path, &format!("{}\n", serde_json::to_string_pretty(&sidecar)?))?;
    }
    Ok(())
}

fn construction_sidecar(c: &Construction, kind: Option<Calculus>) -> Sidecar {
    Sidecar {
        discipline: kind.map(|k| c.discipline(k)),
        branchable: c.branchable.iter().copied().collect(),
        roles: c.roles.iter().map(|(v, r)| (*v, *r)).collect(),
        ..Sidecar::default()
    }
}

fn mirrored_sidecar(m: &Mirrored) -> Sidecar {
    Sidecar { mirror: m.mirror.iter().map(|(y, x)| (*y, *x)).collect(), ..Sidecar::default() }
}

fn var_set(ids: &[u32]) -> Result<BTreeSet<Variable>, CliError> {
    ids.iter()
        .map(|&id| Variable::try_new(id).ok_or_else(|| CliError::Usage("variable ids start at 1".into())))
        .collect()
}

fn one_var(ids: &[u32], what: &str) -> Result<Variable, CliError> {
    match ids {
        [id] => Variable::try_new(*id).ok_or_else(|| CliError::Usage("variable ids start at 1".into())),
        _ => Err(CliError::Usage(format!("{what} needs exactly one --x variable"))),
    }
}

// ---------------------------------------------------------------------------
// subcommands

fn gen(a: GenArgs, out: &mut dyn Write) -> Result<(), CliError> {
    let mut alloc = FreshAllocator::new();
    let family = match a.family {
        Family::Php => Some(HardFamily::Php),
        Family::Tseitin => Some(HardFamily::Tseitin),
        Family::Completek => Some(HardFamily::CompleteK),
        Family::Vn | Family::Im => None,
    };
    if let Some(family) = family {
        let f = hard_family(family, a.param, &mut alloc)?;
        return write_formula(&f, Sidecar::default(), &a.out, out);
    }
    let (built, kind) = match a.family {
        Family::Vn => (v_formula(a.param, &mut alloc)?, Calculus::DpllMono),
        _ => (exact_size_formula(a.param, a.method.into(), &mut alloc), a.method.into()),
    };
    write_formula(&built.formula, construction_sidecar(&built, Some(kind)), &a.out, out)
}

fn combine(a: CombineArgs, out: &mut dyn Write) -> Result<(), CliError> {
    let f = read_formula(&a.first)?;
    let h = read_formula(&a.second)?;
    if let Some(trees) = &a.trees {
        if !matches!(a.op, Combinator::Product) {
            return Err(CliError::Usage("--trees only applies to product".into()));
        }
        let t_f = SearchTree::parse(read_text(&trees[0])?.trim())?;
        let t_h = SearchTree::parse(read_text(&trees[1])?.trim())?;
        let d = TreeDiscipline::backtracking();
        if !validate_tree(&f, &t_f, &d) || !validate_tree(&h, &t_h, &d) {
            return Err(CliError::Other("operand trees must be backtracking trees of the operands".into()));
        }
        return emitln(out, product_tree(&t_f, &t_h));
    }
    let mut sidecar = Sidecar::default();
    let formula = match a.op {
        Combinator::Union => union_disjoint(&f, &h)?,
        Combinator::Product => product(&f, &h)?,
        Combinator::Sum => {
            let (s, x) = sum(&f, &h, &mut FreshAllocator::new())?;
            sidecar.connective = Some(x);
            s
        }
    };
    write_formula(&formula, sidecar, &a.out, out)
}

fn read_sidecar(path: &Option<PathBuf>) -> Result<Sidecar, CliError> {
    let path = path.as_ref().ok_or_else(|| CliError::Usage("this mapping needs --mirror SIDECAR".into()))?;
    Ok(serde_json::from_str(&read_text(path)?)?)
}

fn transform(a: TransformArgs, out: &mut dyn Write) -> Result<(), CliError> {
    let mut alloc = FreshAllocator::new();
    match a.kind {
        Transform::Lemma1Back | Transform::ShieldBack => {
            let tree = SearchTree::parse(read_text(&a.input)?.trim())?;
            let mirror = read_sidecar(&a.mirror)?.mirror.into_iter().collect();
            let back = match a.kind {
                Transform::Lemma1Back => lemma1_tree_back(&tree, &mirror)?,
                _ => shield_tree_back(&tree, &mirror)?,
            };
            return emitln(out, back);
        }
        Transform::Push => {
            let proof = parse_trace(&read_text(&a.input)?)?;
            let pushed = push_pivot_to_leaves(&proof, one_var(&a.x, "push")?)?;
            return emit(out, &write_trace(&pushed));
        }
        _ => {}
    }
    let f = read_formula(&a.input)?;
    match a.kind {
        Transform::Lemma1 => {
            let m = to_dpll_equivalent(&f, &mut alloc);
            write_formula(&m.formula, mirrored_sidecar(&m), &a.out, out)
        }
        Transform::Shield => {
            let m = mono_shield(&f, &mut alloc);
            write_formula(&m.formula, mirrored_sidecar(&m), &a.out, out)
        }
        Transform::Cx => {
            let c = c_transform(&Construction::plain(f), &var_set(&a.x)?, &mut alloc)?;
            write_formula(&c.formula, construction_sidecar(&c, Some(Calculus::DpllMono)), &a.out, out)
        }
        Transform::Ex => {
            let c = e_transform(&f, &var_set(&a.x)?, &mut alloc)?;
            write_formula(&c.formula, construction_sidecar(&c, Some(Calculus::DpllMono)), &a.out, out)
        }
        Transform::Gx => {
            let gamma = parse_clause(a.gamma.as_deref().ok_or_else(|| CliError::Usage("gx needs --gamma".into()))?)?;
            let g = g_transform(&f, &gamma, one_var(&a.x, "gx")?)?;
            write_formula(&g, Sidecar::default(), &a.out, out)
        }
        Transform::Fxy => {
            let y = a.y.and_then(Variable::try_new).ok_or_else(|| CliError::Usage("fxy needs --y".into()))?;
            let g = f_transform(&f, one_var(&a.x, "fxy")?, y)?;
            write_formula(&g, Sidecar::default(), &a.out, out)
        }
        Transform::Lemma1Back | Transform::ShieldBack | Transform::Push => unreachable!("handled above"),
    }
}

fn opt(a: OptArgs, out: &mut dyn Write) -> Result<(), CliError> {
    let f = read_formula(&a.formula)?;
    let mut discipline = TreeDiscipline::new(a.method.into());
    if let Some(allowed) = &a.allowed {
        discipline = discipline.restricted_to(var_set(allowed)?);
    }
    let mut config = OracleConfig::new(discipline.clone());
    config.node_budget = a.budget;
    if a.no_memo {
        config = config.without_memo();
    }
    if a.split {
        config = config.splitting_components();
    }
    let mut oracle = Oracle::<BigUint>::new(config)?;
    let result = answer_opt(&mut oracle, &f, &discipline, &a.query, out);
    if a.stats {
        eprintln!("explored {} states", oracle.explored());
    }
    result
}

fn answer_opt(
    oracle: &mut Oracle<BigUint>,
    f: &Formula,
    discipline: &TreeDiscipline,
    q: &OptQuery,
    out: &mut dyn Write,
) -> Result<(), CliError> {
    if q.size {
        emitln(out, oracle.size(f)?)
    } else if q.tree {
        emitln(out, oracle.tree(f)?)
    } else if q.roots {
        let roots: Vec<String> = oracle.optimal_roots(f)?.iter().map(|v| v.to_string()).collect();
        emitln(out, roots.join(" "))
    } else if let Some(v) = q.obv {
        let v = Variable::try_new(v).ok_or_else(|| CliError::Usage("variable ids start at 1".into()))?;
        emitln(out, oracle.is_optimal_root(f, v)?)
    } else if let Some(k) = &q.ots {
        let k: BigUint = k.parse().map_err(|_| CliError::Usage(format!("bad size bound `{k}`")))?;
        emitln(out, oracle.within(f, &k)?)
    } else if let Some(path) = &q.validate {
        let tree = SearchTree::parse(read_text(path)?.trim())?;
        emitln(out, validate_tree(f, &tree, discipline))
    } else {
        unreachable!("clap requires one query")
    }
}

fn res(a: ResArgs, out: &mut dyn Write) -> Result<(), CliError> {
    let f = read_formula(&a.formula)?;
    let q = &a.query;
    if q.min_size {
        emitln(out, min_regular_size(&f, a.budget)?)
    } else if q.proof {
        match minimum_regular_proof(&f, a.budget)? {
            Some(p) => emit(out, &write_trace(&p)),
            None => emitln(out, "satisfiable"),
        }
    } else if let Some(pair) = &q.orp {
        let (c1, c2) = (parse_clause(&pair[0])?, parse_clause(&pair[1])?);
        emitln(out, is_optimal_resolution_pair(&f, &c1, &c2, a.budget)?)
    } else if let Some(path) = &q.validate {
        let proof = parse_trace(&read_text(path)?)?;
        emitln(out, validate_regular_proof(&f, &proof))
    } else {
        unreachable!("clap requires one query")
    }
}

fn reduce(a: ReduceArgs, out: &mut dyn Write) -> Result<(), CliError> {
    let inputs = a.inputs.iter().map(|p| read_formula(p)).collect::<Result<Vec<_>, _>>()?;
    let single = || match inputs.as_slice() {
        [f] => Ok(f),
        _ => Err(CliError::Usage("this reduction takes exactly one formula".into())),
    };
    let mut alloc = FreshAllocator::new();
    let output = match a.reduction {
        Reduction::Paritysat => {
            let hard = a.hard_size.ok_or_else(|| CliError::Usage("paritysat needs --hard-size".into()))?;
            reduce_parity_sat(&inputs, a.method.into(), hard, &mut alloc)?
        }
        Reduction::Otsconp => reduce_ots_conp(single()?, a.method.into(), &mut alloc)?,
        Reduction::Otstoobv => {
            let k = a.k.ok_or_else(|| CliError::Usage("otstoobv needs --k".into()))?;
            reduce_ots_to_obv(single()?, k, &mut alloc)?
        }
        Reduction::Eminsat => reduce_eminsat(single()?, &var_set(&a.x)?, &var_set(&a.y)?, &mut alloc)?,
        Reduction::Orp => {
            let f = single()?;
            let threshold = a.hard_size.unwrap_or_else(|| (1usize << f.vars().len().min(16)) - 1).max(1);
            reduce_orp(f, &mut alloc, threshold)?
        }
    };
    let answer = if a.decide {
        let steps = match &output.question {
            optproof::combinators::Question::ResolutionPair { .. } => {
                a.budget.map_or(usize::MAX, |b| b as usize).min(output.formula.vars().len() * 4)
            }
            _ => 0,
        };
        Some(output.decide(a.budget, steps)?)
    } else {
        None
    };
    let formula = output.formula.clone();
    write_formula(&formula, Sidecar { reduction: Some(output), ..Sidecar::default() }, &a.out, out)?;
    if let Some(answer) = answer {
        if a.out.output.is_some() {
            emitln(out, answer)?;
        } else {
            emitln(out, format!("c answer {answer}"))?;
        }
    }
    Ok(())
}

fn verify(a: VerifyArgs, out: &mut dyn Write) -> Result<(), CliError> {
    let suites: Vec<Suite> = if a.suite == "all" {
        Suite::ALL.to_vec()
    } else {
        vec![a.suite.parse().map_err(|e: crate::suites::UnknownSuite| CliError::Usage(e.to_string()))?]
    };
    let mut failed = 0;
    for suite in suites {
        let mut print = |instance: &str, took: std::time::Duration| eprintln!("{took:>12.2?}  {instance}");
        let trace: Option<crate::suites::Trace<'_>> = if a.trace { Some(&mut print) } else { None };
        let report = run_law_suite_traced(suite, a.samples, a.seed, a.max_vars, trace);
        if a.json {
            emitln(out, report.to_json())?;
        } else {
            emit(out, &report.render())?;
        }
        if a.timing {
            eprintln!("{}: {:.2?}", report.suite, report.elapsed);
        }
        if !report.passed() && !report.exploratory {
            failed += 1;
        }
    }
    if failed > 0 {
        return Err(CliError::SuiteFailed(failed));
    }
    Ok(())
}

fn export_dot(a: ExportDotArgs, out: &mut dyn Write) -> Result<(), CliError> {
    let text = read_text(&a.input)?;
    match a.source {
        DotSource::Tree => emit(out, &SearchTree::parse(text.trim())?.to_dot()),
        DotSource::Proof => emit(out, &parse_trace(&text)?.to_dot()),
    }
}

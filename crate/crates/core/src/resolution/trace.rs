//! Line-oriented proof traces.
//!
//! ```text
//! c comment
//! l <id> <literals> 0                  input clause
//! s <id> <pivot> <p1> <p2> <literals> 0  resolution step
//! ```
//!
//! Ids are positive and unique; parents must be defined before use. The
//! last line defines the root. Literals use DIMACS integers.

use std::collections::HashMap;
use std::fmt::Write;

use thiserror::Error;

use crate::cnf::{Clause, Literal, Variable};

use super::{NodeRef, ResolutionProof, ResolutionStep};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum TraceError {
    #[error("line {line}: {message}")]
    Syntax { line: usize, message: String },
    #[error("trace defines no nodes")]
    Empty,
}

/// Serializes a proof; leaves get ids `1..=L`, steps follow.
pub fn write_trace(proof: &ResolutionProof) -> String {
    let mut out = String::new();
    let leaf_order: Vec<usize> = match proof.root {
        NodeRef::Leaf(r) => (0..proof.leaves.len()).filter(|&i| i != r).chain([r]).collect(),
        NodeRef::Step(_) => (0..proof.leaves.len()).collect(),
    };
    let mut leaf_id = vec![0; proof.leaves.len()];
    for (k, &i) in leaf_order.iter().enumerate() {
        leaf_id[i] = k + 1;
    }
    let id = |n: NodeRef| match n {
        NodeRef::Leaf(i) => leaf_id[i],
        NodeRef::Step(i) => proof.leaves.len() + i + 1,
    };
    let lits = |c: &Clause| {
        c.literals().iter().map(|l| format!("{} ", l.to_dimacs())).collect::<String>()
    };
    for &i in &leaf_order {
        let _ = writeln!(out, "l {} {}0", leaf_id[i], lits(&proof.leaves[i]));
    }
    for (i, s) in proof.steps.iter().enumerate() {
        let _ = writeln!(
            out,
            "s {} {} {} {} {}0",
            proof.leaves.len() + i + 1,
            s.pivot.id(),
            id(s.left),
            id(s.right),
            lits(&s.resolvent)
        );
    }
    out
}

/// Reads a trace. Resolvent correctness and regularity are left to
/// [`super::validate_regular_proof`].
pub fn parse_trace(text: &str) -> Result<ResolutionProof, TraceError> {
    let mut leaves = Vec::new();
    let mut steps = Vec::new();
    let mut ids: HashMap<u64, NodeRef> = HashMap::new();
    let mut root = None;
    for (n, raw) in text.lines().enumerate() {
        let line = n + 1;
        let err = |message: String| TraceError::Syntax { line, message };
        let mut tokens = raw.split_whitespace();
        let Some(kind) = tokens.next() else { continue };
        if kind == "c" {
            continue;
        }
        let nums: Vec<i64> = tokens
            .map(|t| t.parse::<i64>().map_err(|_| err(format!("'{t}' is not an integer"))))
            .collect::<Result<_, _>>()?;
        let (head, lits) = match kind {
            "l" if !nums.is_empty() => nums.split_at(1),
            "s" if nums.len() >= 4 => nums.split_at(4),
            "l" | "s" => return Err(err("too few fields".into())),
            other => return Err(err(format!("unknown line type '{other}'"))),
        };
        let Some((&0, lits)) = lits.split_last() else {
            return Err(err("clause is not terminated by 0".into()));
        };
        let clause = lits
            .iter()
            .map(|&v| {
                i32::try_from(v).ok().and_then(Literal::from_dimacs).ok_or_else(|| err(format!("bad literal {v}")))
            })
            .collect::<Result<Vec<_>, _>>()
            .map(Clause::new)?;
        let id = u64::try_from(head[0]).ok().filter(|&i| i > 0).ok_or_else(|| err("ids must be positive".into()))?;
        if ids.contains_key(&id) {
            return Err(err(format!("id {id} defined twice")));
        }
        let node = if kind == "l" {
            leaves.push(clause);
            NodeRef::Leaf(leaves.len() - 1)
        } else {
            let pivot = u32::try_from(head[1])
                .ok()
                .and_then(Variable::try_new)
                .ok_or_else(|| err(format!("bad pivot {}", head[1])))?;
            let parent = |raw: i64| {
                u64::try_from(raw)
                    .ok()
                    .and_then(|p| ids.get(&p).copied())
                    .ok_or_else(|| err(format!("parent {raw} is not defined earlier")))
            };
            let (left, right) = (parent(head[2])?, parent(head[3])?);
            steps.push(ResolutionStep { pivot, left, right, resolvent: clause });
            NodeRef::Step(steps.len() - 1)
        };
        ids.insert(id, node);
        root = Some(node);
    }
    let root = root.ok_or(TraceError::Empty)?;
    Ok(ResolutionProof { leaves, steps, root })
}

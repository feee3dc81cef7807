//! DIMACS CNF reader and writer.

use std::fmt::Write as _;

use thiserror::Error;

use super::{Clause, Formula, Literal};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum DimacsError {
    #[error("line {line}: missing or malformed `p cnf <vars> <clauses>` header")]
    BadHeader { line: usize },
    #[error("line {line}: clause data before the header")]
    DataBeforeHeader { line: usize },
    #[error("line {line}: bad token `{token}`")]
    BadToken { line: usize, token: String },
    #[error("line {line}: variable {var} exceeds the declared {declared}")]
    VariableOutOfRange { line: usize, var: u32, declared: u32 },
    #[error("last clause is not terminated by 0")]
    UnterminatedClause,
    #[error("header declares {declared} clauses but {found} were read")]
    ClauseCountMismatch { declared: usize, found: usize },
}

/// Parses a DIMACS CNF document. Duplicate clauses are accepted and
/// collapse in the resulting formula; the header's clause count refers to
/// the clauses as written.
pub fn parse_dimacs(input: &str) -> Result<Formula, DimacsError> {
    let mut header: Option<(u32, usize)> = None;
    let mut clauses = Vec::new();
    let mut current = Vec::new();
    for (idx, raw) in input.lines().enumerate() {
        let line = idx + 1;
        let text = raw.trim();
        if text.is_empty() || text.starts_with('c') || text.starts_with('%') {
            continue;
        }
        if text.starts_with('p') {
            let parts: Vec<&str> = text.split_whitespace().collect();
            let parsed = match parts.as_slice() {
                ["p", "cnf", v, c] => v.parse().ok().zip(c.parse().ok()),
                _ => None,
            };
            if header.is_some() || parsed.is_none() {
                return Err(DimacsError::BadHeader { line });
            }
            header = parsed;
            continue;
        }
        let Some((declared, _)) = header else {
            return Err(DimacsError::DataBeforeHeader { line });
        };
        for token in text.split_whitespace() {
            let n: i32 = token.parse().map_err(|_| DimacsError::BadToken {
                line,
                token: token.to_string(),
            })?;
            if n == 0 {
                clauses.push(Clause::new(current.drain(..)));
                continue;
            }
            if n.unsigned_abs() > declared {
                return Err(DimacsError::VariableOutOfRange {
                    line,
                    var: n.unsigned_abs(),
                    declared,
                });
            }
            current.push(Literal::from_dimacs(n).expect("nonzero"));
        }
    }
    let Some((_, declared_clauses)) = header else {
        return Err(DimacsError::BadHeader { line: input.lines().count().max(1) });
    };
    if !current.is_empty() {
        return Err(DimacsError::UnterminatedClause);
    }
    if clauses.len() != declared_clauses {
        return Err(DimacsError::ClauseCountMismatch {
            declared: declared_clauses,
            found: clauses.len(),
        });
    }
    Ok(Formula::new(clauses))
}

/// Writes `formula` in DIMACS CNF. The variable count is the largest id.
pub fn write_dimacs(formula: &Formula) -> String {
    let mut out = String::new();
    let vars = formula.max_var().map_or(0, |v| v.id());
    writeln!(out, "p cnf {} {}", vars, formula.len()).unwrap();
    for clause in formula.clauses() {
        for lit in clause.literals() {
            write!(out, "{} ", lit.to_dimacs()).unwrap();
        }
        out.push_str("0\n");
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn reads_standard_file() {
        let text = "c example\np cnf 3 2\n1 -3 0\n2\n 3 0\n";
        let f = parse_dimacs(text).unwrap();
        assert_eq!(f, Formula::from_dimacs(&[&[1, -3], &[2, 3]]));
    }

    #[test]
    fn empty_clause_line() {
        let f = parse_dimacs("p cnf 0 1\n0\n").unwrap();
        assert_eq!(f, Formula::contradiction());
        assert_eq!(write_dimacs(&f), "p cnf 0 1\n0\n");
    }

    #[test]
    fn malformed_inputs() {
        assert_eq!(parse_dimacs("1 0\n"), Err(DimacsError::DataBeforeHeader { line: 1 }));
        assert_eq!(parse_dimacs("p cnf x 1\n"), Err(DimacsError::BadHeader { line: 1 }));
        assert_eq!(parse_dimacs("p cnf 2 1\n1 2\n"), Err(DimacsError::UnterminatedClause));
        assert!(matches!(
            parse_dimacs("p cnf 1 1\n2 0\n"),
            Err(DimacsError::VariableOutOfRange { var: 2, .. })
        ));
        assert!(matches!(
            parse_dimacs("p cnf 1 2\n1 0\n"),
            Err(DimacsError::ClauseCountMismatch { declared: 2, found: 1 })
        ));
        assert!(matches!(parse_dimacs("p cnf 1 1\n1 a 0\n"), Err(DimacsError::BadToken { .. })));
    }

    proptest! {
        #[test]
        fn write_then_parse_is_identity(raw in prop::collection::vec(
            prop::collection::vec((1i32..8, any::<bool>()), 0..4), 0..8)
        ) {
            let f = Formula::new(raw.iter().map(|c| {
                Clause::new(c.iter().map(|&(v, p)| Literal::from_dimacs(if p { v } else { -v }).unwrap()))
            }));
            prop_assert_eq!(parse_dimacs(&write_dimacs(&f)).unwrap(), f);
        }
    }
}

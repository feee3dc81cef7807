//! The canonical text form `{x1 -x2, x3}`.
//!
//! Literals are `x3`, `-x3`, `~x3`, `¬x3` or bare signed ids (`3`, `-3`);
//! `⊥` (or `[]`) is the empty clause. `∨` between literals is accepted and
//! ignored.

use thiserror::Error;

use super::{Clause, Formula, Literal, Variable};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ParseError {
    #[error("formula must be enclosed in braces")]
    MissingBraces,
    #[error("bad literal `{0}`")]
    BadLiteral(String),
    #[error("`⊥` cannot be combined with other literals in `{0}`")]
    MixedEmptyClause(String),
}

pub fn parse_formula(text: &str) -> Result<Formula, ParseError> {
    let inner = text
        .trim()
        .strip_prefix('{')
        .and_then(|t| t.strip_suffix('}'))
        .ok_or(ParseError::MissingBraces)?;
    if inner.trim().is_empty() {
        return Ok(Formula::empty());
    }
    inner.split(',').map(parse_clause).collect()
}

pub fn parse_clause(text: &str) -> Result<Clause, ParseError> {
    let tokens: Vec<&str> = text
        .split(|c: char| c.is_whitespace() || c == '∨')
        .filter(|t| !t.is_empty())
        .collect();
    if tokens.iter().any(|t| *t == "⊥" || *t == "[]") {
        if tokens.len() == 1 {
            return Ok(Clause::empty());
        }
        return Err(ParseError::MixedEmptyClause(text.trim().to_string()));
    }
    tokens.into_iter().map(parse_literal).collect()
}

fn parse_literal(token: &str) -> Result<Literal, ParseError> {
    let bad = || ParseError::BadLiteral(token.to_string());
    let (positive, rest) = match token.strip_prefix(['-', '~', '¬']) {
        Some(rest) => (false, rest),
        None => (true, token),
    };
    let digits = rest.strip_prefix('x').unwrap_or(rest);
    let id: u32 = digits.parse().map_err(|_| bad())?;
    let var = Variable::try_new(id).ok_or_else(bad)?;
    Ok(Literal::new(var, positive))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn round_trips_display() {
        let f = Formula::from_dimacs(&[&[1, -2], &[3]]);
        assert_eq!(parse_formula(&f.to_string()).unwrap(), f);
        let g = Formula::new([Clause::empty(), Clause::from_dimacs(&[-7])]);
        assert_eq!(parse_formula(&g.to_string()).unwrap(), g);
    }

    #[test]
    fn accepts_alternative_spellings() {
        let f = parse_formula("{ ¬x1 ∨ x2, 3 -4, [] }").unwrap();
        assert_eq!(
            f,
            Formula::new([
                Clause::from_dimacs(&[-1, 2]),
                Clause::from_dimacs(&[3, -4]),
                Clause::empty()
            ])
        );
        assert_eq!(parse_formula("{}").unwrap(), Formula::empty());
    }

    #[test]
    fn rejects_garbage() {
        assert_eq!(parse_formula("x1"), Err(ParseError::MissingBraces));
        assert!(matches!(parse_formula("{x0}"), Err(ParseError::BadLiteral(_))));
        assert!(matches!(parse_formula("{⊥ x1}"), Err(ParseError::MixedEmptyClause(_))));
    }
}

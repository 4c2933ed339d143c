//! DIMACS CNF reading and writing.

use std::fmt::Write as _;

use thiserror::Error;

use crate::cnf::{Clause, CnfFormula, Lit};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum DimacsError {
    #[error("line {line}: malformed header: {reason}")]
    MalformedHeader { line: usize, reason: String },
    #[error("line {line}: clause data before the `p cnf` header")]
    MissingHeader { line: usize },
    #[error("line {line}: invalid literal `{token}`")]
    InvalidLiteral { line: usize, token: String },
    #[error("line {line}: literal {literal} exceeds the declared {num_variables} variables")]
    LiteralOutOfRange {
        line: usize,
        literal: i64,
        num_variables: usize,
    },
    #[error("last clause is missing its terminating 0")]
    MissingTerminator,
    #[error("header declares {declared} clauses but {found} were found")]
    ClauseCountMismatch { declared: usize, found: usize },
}

/// Parses DIMACS CNF text. Clause order is the order of the file.
pub fn parse_dimacs(text: &str) -> Result<CnfFormula, DimacsError> {
    let mut header: Option<(usize, usize)> = None;
    let mut formula = CnfFormula::new(0);
    let mut current: Vec<Lit> = Vec::new();
    let mut open = false;

    for (idx, raw) in text.lines().enumerate() {
        let line_no = idx + 1;
        let line = raw.trim();
        if line.is_empty() || line.starts_with('c') {
            continue;
        }
        if line.starts_with('p') {
            if header.is_some() {
                return Err(DimacsError::MalformedHeader {
                    line: line_no,
                    reason: "duplicate header".into(),
                });
            }
            let fields: Vec<&str> = line.split_whitespace().collect();
            if fields.len() != 4 || fields[0] != "p" || fields[1] != "cnf" {
                return Err(DimacsError::MalformedHeader {
                    line: line_no,
                    reason: format!("expected `p cnf <vars> <clauses>`, got `{line}`"),
                });
            }
            let parse = |s: &str| {
                s.parse::<usize>().map_err(|_| DimacsError::MalformedHeader {
                    line: line_no,
                    reason: format!("`{s}` is not a count"),
                })
            };
            let vars = parse(fields[2])?;
            let clauses = parse(fields[3])?;
            header = Some((vars, clauses));
            formula = CnfFormula::new(vars);
            continue;
        }
        let (num_vars, _) = header.ok_or(DimacsError::MissingHeader { line: line_no })?;
        for token in line.split_whitespace() {
            if token == "%" {
                // SATLIB files end with a `%` marker line.
                break;
            }
            let value: i64 = token.parse().map_err(|_| DimacsError::InvalidLiteral {
                line: line_no,
                token: token.to_string(),
            })?;
            if value == 0 {
                formula
                    .push(Clause::new(current.drain(..)))
                    .expect("literals were range checked");
                open = false;
                continue;
            }
            if value.unsigned_abs() as usize > num_vars {
                return Err(DimacsError::LiteralOutOfRange {
                    line: line_no,
                    literal: value,
                    num_variables: num_vars,
                });
            }
            current.push(Lit::from_dimacs(value).expect("nonzero"));
            open = true;
        }
    }

    if open {
        return Err(DimacsError::MissingTerminator);
    }
    let (_, declared) = header.ok_or(DimacsError::MalformedHeader {
        line: 0,
        reason: "no `p cnf` header found".into(),
    })?;
    if declared != formula.len() {
        return Err(DimacsError::ClauseCountMismatch {
            declared,
            found: formula.len(),
        });
    }
    Ok(formula)
}

/// Writes a formula as DIMACS CNF, with each comment line prefixed by `c `.
pub fn write_dimacs(formula: &CnfFormula, comments: &[&str]) -> String {
    let mut out = String::new();
    for c in comments {
        for line in c.lines() {
            let _ = writeln!(out, "c {line}");
        }
    }
    let _ = writeln!(out, "p cnf {} {}", formula.num_variables(), formula.len());
    for clause in formula.clauses() {
        for lit in clause.lits() {
            let _ = write!(out, "{} ", lit.to_dimacs());
        }
        out.push_str("0\n");
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_two_clauses() {
        let f = parse_dimacs("p cnf 2 2\n1 2 0\n-1 -2 0").unwrap();
        assert_eq!(f.num_variables(), 2);
        assert_eq!(
            f.clauses(),
            &[
                Clause::from_dimacs(&[1, 2]).unwrap(),
                Clause::from_dimacs(&[-1, -2]).unwrap()
            ]
        );
    }

    #[test]
    fn parses_single_unit() {
        let f = parse_dimacs("c hello\np cnf 1 1\n1 0").unwrap();
        assert_eq!(f.clauses(), &[Clause::from_dimacs(&[1]).unwrap()]);
    }

    #[test]
    fn clauses_may_span_lines() {
        let f = parse_dimacs("p cnf 3 2\n1 2\n3 0 -1\n0\n").unwrap();
        assert_eq!(f.clauses()[0].len(), 3);
        assert_eq!(f.clauses()[1].len(), 1);
    }

    #[test]
    fn rejects_out_of_range_literal() {
        assert!(matches!(
            parse_dimacs("p cnf 2 1\n3 0"),
            Err(DimacsError::LiteralOutOfRange { literal: 3, .. })
        ));
    }

    #[test]
    fn rejects_bad_input() {
        assert!(matches!(
            parse_dimacs("p cnf x 1\n1 0"),
            Err(DimacsError::MalformedHeader { .. })
        ));
        assert!(matches!(
            parse_dimacs("p dnf 1 1\n1 0"),
            Err(DimacsError::MalformedHeader { .. })
        ));
        assert_eq!(parse_dimacs("p cnf 2 1\n1 2"), Err(DimacsError::MissingTerminator));
        assert_eq!(
            parse_dimacs("p cnf 2 2\n1 2 0\n"),
            Err(DimacsError::ClauseCountMismatch { declared: 2, found: 1 })
        );
        assert!(matches!(parse_dimacs("1 0\n"), Err(DimacsError::MissingHeader { .. })));
    }

    #[test]
    fn writes_unit_formula() {
        let f = CnfFormula::from_dimacs_clauses(1, &[&[1]]).unwrap();
        assert_eq!(write_dimacs(&f, &[]), "p cnf 1 1\n1 0\n");
    }

    #[test]
    fn writes_empty_formula() {
        assert_eq!(write_dimacs(&CnfFormula::new(0), &[]), "p cnf 0 0\n");
        let with_comment = write_dimacs(&CnfFormula::new(0), &["family=raw"]);
        assert_eq!(with_comment, "c family=raw\np cnf 0 0\n");
    }
}

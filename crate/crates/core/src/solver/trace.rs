//! Line-oriented run traces.
//!
//! ```text
//! D <var> <val> <level>      decision
//! P <var> <val> <reason-id>  propagation; reason ids index the clause database
//! C <clause-id>              conflict
//! L <lits…>                  learned clause (DIMACS literals)
//! B <level>                  backtrack / backjump to level
//! R                          restart
//! ```

use std::fmt;
use std::str::FromStr;

use thiserror::Error;

use crate::cnf::{Lit, Var};

/// Index into the clause database: original clauses first, learned clauses
/// appended in learning order.
pub type ClauseId = usize;

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum TraceEvent {
    Decide { var: Var, value: bool, level: usize },
    Propagate { var: Var, value: bool, reason: ClauseId },
    Conflict { clause: ClauseId },
    Learn { lits: Vec<Lit> },
    Backtrack { level: usize },
    Restart,
}

impl fmt::Display for TraceEvent {
    fn fmt(&self, f: &mut fmt::Formatter) -> fmt::Result {
        match self {
            TraceEvent::Decide { var, value, level } => write!(f, "D {var} {} {level}", *value as u8),
            TraceEvent::Propagate { var, value, reason } => {
                write!(f, "P {var} {} {reason}", *value as u8)
            }
            TraceEvent::Conflict { clause } => write!(f, "C {clause}"),
            TraceEvent::Learn { lits } => {
                f.write_str("L")?;
                for l in lits {
                    write!(f, " {l}")?;
                }
                Ok(())
            }
            TraceEvent::Backtrack { level } => write!(f, "B {level}"),
            TraceEvent::Restart => f.write_str("R"),
        }
    }
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
#[error("malformed trace record `{0}`")]
pub struct TraceParseError(pub String);

impl FromStr for TraceEvent {
    type Err = TraceParseError;

    fn from_str(s: &str) -> Result<TraceEvent, TraceParseError> {
        let bad = || TraceParseError(s.to_string());
        let fields: Vec<&str> = s.split_whitespace().collect();
        let num = |i: usize| -> Result<usize, TraceParseError> {
            fields.get(i).and_then(|t| t.parse().ok()).ok_or_else(bad)
        };
        let var = |i: usize| -> Result<Var, TraceParseError> {
            match num(i)? {
                0 => Err(bad()),
                v => Ok(Var::new(v)),
            }
        };
        let bit = |i: usize| -> Result<bool, TraceParseError> {
            match fields.get(i) {
                Some(&"0") => Ok(false),
                Some(&"1") => Ok(true),
                _ => Err(bad()),
            }
        };
        let arity = |n: usize| if fields.len() == n { Ok(()) } else { Err(bad()) };
        match fields.first() {
            Some(&"D") => {
                arity(4)?;
                Ok(TraceEvent::Decide { var: var(1)?, value: bit(2)?, level: num(3)? })
            }
            Some(&"P") => {
                arity(4)?;
                Ok(TraceEvent::Propagate { var: var(1)?, value: bit(2)?, reason: num(3)? })
            }
            Some(&"C") => {
                arity(2)?;
                Ok(TraceEvent::Conflict { clause: num(1)? })
            }
            Some(&"L") => {
                let lits = fields[1..]
                    .iter()
                    .map(|t| t.parse::<i64>().ok().and_then(|v| Lit::from_dimacs(v).ok()))
                    .collect::<Option<Vec<_>>>()
                    .ok_or_else(bad)?;
                Ok(TraceEvent::Learn { lits })
            }
            Some(&"B") => {
                arity(2)?;
                Ok(TraceEvent::Backtrack { level: num(1)? })
            }
            Some(&"R") => {
                arity(1)?;
                Ok(TraceEvent::Restart)
            }
            _ => Err(bad()),
        }
    }
}

/// Receives trace events as the engine produces them.
pub trait TraceSink {
    fn event(&mut self, event: &TraceEvent);
}

impl TraceSink for Vec<TraceEvent> {
    fn event(&mut self, event: &TraceEvent) {
        self.push(event.clone());
    }
}

/// Forwards every event to two sinks.
pub struct Tee<'a, 'b>(pub &'a mut dyn TraceSink, pub &'b mut dyn TraceSink);

impl TraceSink for Tee<'_, '_> {
    fn event(&mut self, event: &TraceEvent) {
        self.0.event(event);
        self.1.event(event);
    }
}

pub fn write_trace(events: &[TraceEvent]) -> String {
    let mut out = String::new();
    for e in events {
        out.push_str(&e.to_string());
        out.push('\n');
    }
    out
}

pub fn parse_trace(text: &str) -> Result<Vec<TraceEvent>, TraceParseError> {
    text.lines()
        .map(str::trim)
        .filter(|l| !l.is_empty())
        .map(str::parse)
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn records_render_and_parse() {
        let events = vec![
            TraceEvent::Decide { var: Var::new(3), value: true, level: 1 },
            TraceEvent::Propagate { var: Var::new(4), value: false, reason: 17 },
            TraceEvent::Conflict { clause: 2 },
            TraceEvent::Learn { lits: vec![Var::new(1).negative(), Var::new(2).positive()] },
            TraceEvent::Backtrack { level: 0 },
            TraceEvent::Restart,
        ];
        let text = write_trace(&events);
        assert_eq!(text, "D 3 1 1\nP 4 0 17\nC 2\nL -1 2\nB 0\nR\n");
        assert_eq!(parse_trace(&text).unwrap(), events);
    }

    #[test]
    fn rejects_garbage() {
        assert!("D 1 2 3".parse::<TraceEvent>().is_err());
        assert!("P 0 1 3".parse::<TraceEvent>().is_err());
        assert!("X".parse::<TraceEvent>().is_err());
        assert!("R 1".parse::<TraceEvent>().is_err());
    }
}

//! Formulas bundled with their provenance, plus the `key=value` sidecar format.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use thiserror::Error;

use crate::cnf::{CnfFormula, Var};

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Family {
    Tseitin,
    Ladder,
    Pitfall,
    Raw,
}

impl Family {
    pub fn as_str(self) -> &'static str {
        match self {
            Family::Tseitin => "tseitin",
            Family::Ladder => "ladder",
            Family::Pitfall => "pitfall",
            Family::Raw => "raw",
        }
    }
}

impl fmt::Display for Family {
    fn fmt(&self, f: &mut fmt::Formatter) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for Family {
    type Err = SidecarError;

    fn from_str(s: &str) -> Result<Family, SidecarError> {
        match s {
            "tseitin" => Ok(Family::Tseitin),
            "ladder" => Ok(Family::Ladder),
            "pitfall" => Ok(Family::Pitfall),
            "raw" => Ok(Family::Raw),
            other => Err(SidecarError::BadValue {
                key: "family".into(),
                value: other.into(),
            }),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ExpectedStatus {
    Sat,
    Unsat,
    Unknown,
}

impl ExpectedStatus {
    pub fn as_str(self) -> &'static str {
        match self {
            ExpectedStatus::Sat => "SAT",
            ExpectedStatus::Unsat => "UNSAT",
            ExpectedStatus::Unknown => "unknown",
        }
    }
}

impl FromStr for ExpectedStatus {
    type Err = SidecarError;

    fn from_str(s: &str) -> Result<ExpectedStatus, SidecarError> {
        match s {
            "SAT" => Ok(ExpectedStatus::Sat),
            "UNSAT" => Ok(ExpectedStatus::Unsat),
            "unknown" => Ok(ExpectedStatus::Unknown),
            other => Err(SidecarError::BadValue {
                key: "expected_status".into(),
                value: other.into(),
            }),
        }
    }
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum SidecarError {
    #[error("line {line}: expected `key=value`")]
    BadLine { line: usize },
    #[error("bad value `{value}` for key `{key}`")]
    BadValue { key: String, value: String },
    #[error("missing key `{0}`")]
    MissingKey(String),
    #[error("backdoor `{name}` mentions variable {var} beyond {num_variables}")]
    BackdoorOutOfRange {
        name: String,
        var: usize,
        num_variables: usize,
    },
}

/// A formula plus the metadata experiments need: family, generator
/// parameters, named backdoor sets and the expected verdict.
#[derive(Clone, Debug)]
pub struct CnfInstance {
    pub formula: CnfFormula,
    pub family: Family,
    pub parameters: BTreeMap<String, String>,
    pub backdoors: BTreeMap<String, Vec<Var>>,
    pub expected_status: ExpectedStatus,
}

impl CnfInstance {
    pub fn raw(formula: CnfFormula) -> CnfInstance {
        CnfInstance {
            formula,
            family: Family::Raw,
            parameters: BTreeMap::new(),
            backdoors: BTreeMap::new(),
            expected_status: ExpectedStatus::Unknown,
        }
    }

    pub fn backdoor(&self, name: &str) -> Option<&[Var]> {
        self.backdoors.get(name).map(Vec::as_slice)
    }

    pub fn parameter<T: FromStr>(&self, key: &str) -> Option<T> {
        self.parameters.get(key).and_then(|v| v.parse().ok())
    }

    pub fn set_parameter(&mut self, key: &str, value: impl ToString) {
        self.parameters.insert(key.to_string(), value.to_string());
    }

    /// Checks that every backdoor variable exists in the formula.
    pub fn validate(&self) -> Result<(), SidecarError> {
        let n = self.formula.num_variables();
        for (name, vars) in &self.backdoors {
            if let Some(v) = vars.iter().find(|v| v.index() > n) {
                return Err(SidecarError::BackdoorOutOfRange {
                    name: name.clone(),
                    var: v.index(),
                    num_variables: n,
                });
            }
        }
        Ok(())
    }

    /// Renders the sidecar: one `key=value` per line. Backdoors are written
    /// as `backdoor.<name>=i,j,k`.
    pub fn sidecar(&self) -> String {
        let mut out = format!("family={}\n", self.family);
        for (k, v) in &self.parameters {
            out.push_str(&format!("{k}={v}\n"));
        }
        for (name, vars) in &self.backdoors {
            let list: Vec<String> = vars.iter().map(|v| v.index().to_string()).collect();
            out.push_str(&format!("backdoor.{name}={}\n", list.join(",")));
        }
        out.push_str(&format!("expected_status={}\n", self.expected_status.as_str()));
        out
    }

    /// Attaches sidecar metadata to an already parsed formula.
    pub fn from_sidecar(formula: CnfFormula, text: &str) -> Result<CnfInstance, SidecarError> {
        let mut inst = CnfInstance::raw(formula);
        let mut saw_family = false;
        for (idx, raw) in text.lines().enumerate() {
            let line = raw.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let (key, value) = line
                .split_once('=')
                .ok_or(SidecarError::BadLine { line: idx + 1 })?;
            let (key, value) = (key.trim(), value.trim());
            if key == "family" {
                inst.family = value.parse()?;
                saw_family = true;
            } else if key == "expected_status" {
                inst.expected_status = value.parse()?;
            } else if let Some(name) = key.strip_prefix("backdoor.") {
                let vars = parse_var_list(value).ok_or_else(|| SidecarError::BadValue {
                    key: key.into(),
                    value: value.into(),
                })?;
                inst.backdoors.insert(name.to_string(), vars);
            } else {
                inst.parameters.insert(key.to_string(), value.to_string());
            }
        }
        if !saw_family {
            return Err(SidecarError::MissingKey("family".into()));
        }
        inst.validate()?;
        Ok(inst)
    }
}

fn parse_var_list(s: &str) -> Option<Vec<Var>> {
    if s.is_empty() {
        return Some(Vec::new());
    }
    s.split(',')
        .map(|t| match t.trim().parse::<usize>() {
            Ok(i) if i >= 1 => Some(Var::new(i)),
            _ => None,
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn sidecar_round_trip() {
        let mut inst = CnfInstance::raw(CnfFormula::new(5));
        inst.family = Family::Ladder;
        inst.set_parameter("n", 4);
        inst.backdoors.insert("c-vars".into(), vec![Var::new(4), Var::new(5)]);
        inst.expected_status = ExpectedStatus::Sat;
        let text = inst.sidecar();
        assert!(text.contains("backdoor.c-vars=4,5\n"));
        let back = CnfInstance::from_sidecar(CnfFormula::new(5), &text).unwrap();
        assert_eq!(back.family, Family::Ladder);
        assert_eq!(back.parameter::<usize>("n"), Some(4));
        assert_eq!(back.backdoor("c-vars").unwrap(), &[Var::new(4), Var::new(5)]);
        assert_eq!(back.expected_status, ExpectedStatus::Sat);
    }

    #[test]
    fn backdoor_beyond_formula_is_rejected() {
        let err = CnfInstance::from_sidecar(CnfFormula::new(2), "family=raw\nbackdoor.v=3\n");
        assert!(matches!(err, Err(SidecarError::BackdoorOutOfRange { var: 3, .. })));
    }

    #[test]
    fn malformed_sidecar_lines() {
        assert!(matches!(
            CnfInstance::from_sidecar(CnfFormula::new(1), "family=raw\nnonsense\n"),
            Err(SidecarError::BadLine { line: 2 })
        ));
        assert!(matches!(
            CnfInstance::from_sidecar(CnfFormula::new(1), "n=3\n"),
            Err(SidecarError::MissingKey(_))
        ));
    }
}

//! Experiment plans: line-oriented `key=value` files. Repeating a parameter
//! key sweeps over its values; cells are the cartesian product of all
//! parameter values and configurations.
//!
//! ```text
//! family = ladder
//! param.n = 8
//! param.n = 16
//! param.degree = 4
//! config = C-TR-ND-RD
//! config = C-T-ND-RD
//! seeds = 20
//! max_conflicts = 100000
//! restart = cprobe
//! ```

use std::collections::BTreeMap;
use std::path::{Path, PathBuf};
use std::time::Duration;

use restartlab_core::solver::{Budget, Preset};
use thiserror::Error;

#[derive(Debug, Error)]
pub enum PlanError {
    #[error("line {line}: expected `key=value`")]
    BadLine { line: usize },
    #[error("line {line}: unknown key `{key}`")]
    UnknownKey { line: usize, key: String },
    #[error("line {line}: bad value `{value}` for `{key}`")]
    BadValue { line: usize, key: String, value: String },
    #[error("plan is missing `{0}`")]
    Missing(&'static str),
    #[error("claim-bearing plans need at least 10 seeds per cell, got {0}")]
    TooFewSeeds(u64),
    #[error("reading {path}: {source}")]
    Io { path: PathBuf, source: std::io::Error },
}

/// Instance generator named in a plan.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub enum Generator {
    Tseitin,
    Ladder,
    Pitfall,
    Random3,
}

impl Generator {
    pub fn name(self) -> &'static str {
        match self {
            Generator::Tseitin => "tseitin",
            Generator::Ladder => "ladder",
            Generator::Pitfall => "pitfall",
            Generator::Random3 => "random3",
        }
    }

    pub fn parse(s: &str) -> Option<Generator> {
        [Generator::Tseitin, Generator::Ladder, Generator::Pitfall, Generator::Random3]
            .into_iter()
            .find(|g| g.name() == s)
    }
}

/// Where a selector or restart schedule comes from.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Source {
    /// The family's built-in witness.
    Default,
    /// One entry per line.
    Script(PathBuf),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum RestartChoice {
    Default,
    Never,
    EachConflict,
    CProbe,
    Script(PathBuf),
}

impl RestartChoice {
    pub fn parse(s: &str) -> Option<RestartChoice> {
        Some(match s {
            "default" => RestartChoice::Default,
            "never" => RestartChoice::Never,
            "each-conflict" => RestartChoice::EachConflict,
            "cprobe" => RestartChoice::CProbe,
            _ => RestartChoice::Script(PathBuf::from(s.strip_prefix("script:")?)),
        })
    }
}

#[derive(Clone, Debug)]
pub struct ExperimentPlan {
    pub generator: Generator,
    pub params: BTreeMap<String, Vec<String>>,
    pub configs: Vec<Preset>,
    pub seeds: u64,
    pub seed_base: u64,
    pub budget: Budget,
    pub restart: RestartChoice,
    pub variables: Source,
    pub values: Source,
    pub claim: bool,
    pub output: Option<PathBuf>,
}

impl ExperimentPlan {
    pub fn new(generator: Generator) -> ExperimentPlan {
        ExperimentPlan {
            generator,
            params: BTreeMap::new(),
            configs: Vec::new(),
            seeds: 10,
            seed_base: 0,
            budget: Budget { max_conflicts: 100_000, ..Budget::default() },
            restart: RestartChoice::Default,
            variables: Source::Default,
            values: Source::Default,
            claim: false,
            output: None,
        }
    }

    pub fn param(mut self, key: &str, values: &[&str]) -> ExperimentPlan {
        self.params.insert(key.into(), values.iter().map(|v| v.to_string()).collect());
        self
    }

    pub fn load(path: &Path) -> Result<ExperimentPlan, PlanError> {
        let text = std::fs::read_to_string(path).map_err(|source| PlanError::Io {
            path: path.to_path_buf(),
            source,
        })?;
        let mut plan = ExperimentPlan::parse(&text)?;
        // Relative script paths resolve against the plan's directory.
        let dir = path.parent().unwrap_or(Path::new("."));
        let fix = |p: &mut PathBuf| {
            if p.is_relative() {
                *p = dir.join(&*p);
            }
        };
        if let RestartChoice::Script(p) = &mut plan.restart {
            fix(p);
        }
        for s in [&mut plan.variables, &mut plan.values] {
            if let Source::Script(p) = s {
                fix(p);
            }
        }
        Ok(plan)
    }

    pub fn parse(text: &str) -> Result<ExperimentPlan, PlanError> {
        let mut generator = None;
        let mut plan = ExperimentPlan::new(Generator::Random3);
        for (i, raw) in text.lines().enumerate() {
            let line = raw.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let line_no = i + 1;
            let (key, value) = line.split_once('=').ok_or(PlanError::BadLine { line: line_no })?;
            let (key, value) = (key.trim(), value.trim());
            let bad = || PlanError::BadValue { line: line_no, key: key.into(), value: value.into() };
            let num = || value.parse::<u64>().map_err(|_| bad());
            match key {
                "family" => generator = Some(Generator::parse(value).ok_or_else(bad)?),
                "config" => plan.configs.push(value.parse().map_err(|_| bad())?),
                "seeds" => plan.seeds = num()?,
                "seed_base" => plan.seed_base = num()?,
                "max_conflicts" => plan.budget.max_conflicts = num()?,
                "max_decisions" => plan.budget.max_decisions = num()?,
                "max_restarts" => plan.budget.max_restarts = num()?,
                "wall_time_ms" => plan.budget.wall_time = Some(Duration::from_millis(num()?)),
                "restart" => plan.restart = RestartChoice::parse(value).ok_or_else(bad)?,
                "variables" | "values" => {
                    let src = match value {
                        "default" => Source::Default,
                        v => Source::Script(PathBuf::from(v.strip_prefix("script:").ok_or_else(bad)?)),
                    };
                    if key == "variables" {
                        plan.variables = src;
                    } else {
                        plan.values = src;
                    }
                }
                "claim" => plan.claim = value.parse().map_err(|_| bad())?,
                "output" => plan.output = Some(PathBuf::from(value)),
                k => match k.strip_prefix("param.") {
                    Some(p) if !p.is_empty() => plan.params.entry(p.into()).or_default().push(value.into()),
                    _ => return Err(PlanError::UnknownKey { line: line_no, key: k.into() }),
                },
            }
        }
        plan.generator = generator.ok_or(PlanError::Missing("family"))?;
        plan.validate()?;
        Ok(plan)
    }

    pub fn validate(&self) -> Result<(), PlanError> {
        if self.configs.is_empty() {
            return Err(PlanError::Missing("config"));
        }
        if self.seeds == 0 {
            return Err(PlanError::Missing("seeds"));
        }
        if self.claim && self.seeds < 10 {
            return Err(PlanError::TooFewSeeds(self.seeds));
        }
        Ok(())
    }

    /// Every combination of parameter values, in key order.
    pub fn parameter_cells(&self) -> Vec<BTreeMap<String, String>> {
        let mut cells = vec![BTreeMap::new()];
        for (key, values) in &self.params {
            cells = cells
                .into_iter()
                .flat_map(|cell| {
                    values.iter().map(move |v| {
                        let mut c = cell.clone();
                        c.insert(key.clone(), v.clone());
                        c
                    })
                })
                .collect();
        }
        cells
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    const LADDER: &str = "\
# ladder sweep
family=ladder
param.n=8
param.n=16
param.degree=4
config=C-TR-ND-RD
config=C-T-ND-RD
seeds=20
max_conflicts=1000
restart=cprobe
";

    #[test]
    fn parses_a_sweep() {
        let plan = ExperimentPlan::parse(LADDER).unwrap();
        assert_eq!(plan.generator, Generator::Ladder);
        assert_eq!(plan.configs, vec![Preset::CTrNdRd, Preset::CTNdRd]);
        assert_eq!(plan.seeds, 20);
        assert_eq!(plan.budget.max_conflicts, 1000);
        assert_eq!(plan.restart, RestartChoice::CProbe);
        let cells = plan.parameter_cells();
        assert_eq!(cells.len(), 2);
        assert_eq!(cells[1]["n"], "16");
        assert_eq!(cells[1]["degree"], "4");
    }

    #[test]
    fn rejects_bad_plans() {
        assert!(matches!(ExperimentPlan::parse("config=C-J-S-S"), Err(PlanError::Missing("family"))));
        assert!(matches!(ExperimentPlan::parse("family=ladder"), Err(PlanError::Missing("config"))));
        assert!(matches!(
            ExperimentPlan::parse("family=ladder\nconfig=X"),
            Err(PlanError::BadValue { line: 2, .. })
        ));
        assert!(matches!(
            ExperimentPlan::parse("family=ladder\nconfig=C-J-S-S\nclaim=true\nseeds=3"),
            Err(PlanError::TooFewSeeds(3))
        ));
        assert!(matches!(ExperimentPlan::parse("family=ladder\nbogus=1"), Err(PlanError::UnknownKey { .. })));
    }
}

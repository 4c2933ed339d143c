use std::fmt;
use std::str::FromStr;
use std::time::Duration;

use crate::cnf::Var;
use crate::heuristics::{ValueSelector, VariableSelector, VsidsParams, Vsids};
use crate::restart::RestartPolicy;

use super::SolveError;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Model {
    Cdcl,
    Dpll,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum BacktrackMode {
    /// Undo only the most recent decision level.
    Chronological,
    /// Jump to the second-highest level of the learned clause.
    Backjump,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum LearningScheme {
    FirstUip,
    Wdls,
    None,
}

/// Both modes propagate the lowest-indexed unit clause first and produce
/// identical runs; `Scan` rescans the whole database and exists as a
/// reference for testing.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum PropagationMode {
    #[default]
    Watched,
    Scan,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Budget {
    pub max_conflicts: u64,
    pub max_decisions: u64,
    pub max_restarts: u64,
    pub wall_time: Option<Duration>,
}

impl Default for Budget {
    fn default() -> Budget {
        Budget {
            max_conflicts: 1_000_000,
            max_decisions: 100_000_000,
            max_restarts: u64::MAX,
            wall_time: None,
        }
    }
}

#[derive(Clone, Debug)]
pub struct SolverConfig {
    pub name: String,
    pub model: Model,
    pub learning: LearningScheme,
    pub backtrack: BacktrackMode,
    pub variable_selector: VariableSelector,
    pub value_selector: ValueSelector,
    pub restart_policy: RestartPolicy,
    pub reset_activity_on_restart: bool,
    pub propagation: PropagationMode,
    pub seed: u64,
    pub budget: Budget,
}

impl SolverConfig {
    pub fn cdcl(variable_selector: VariableSelector, value_selector: ValueSelector) -> SolverConfig {
        SolverConfig {
            name: "custom".into(),
            model: Model::Cdcl,
            learning: LearningScheme::FirstUip,
            backtrack: BacktrackMode::Backjump,
            variable_selector,
            value_selector,
            restart_policy: RestartPolicy::Never,
            reset_activity_on_restart: true,
            propagation: PropagationMode::Watched,
            seed: 0,
            budget: Budget::default(),
        }
    }

    pub fn dpll(variable_selector: VariableSelector, value_selector: ValueSelector) -> SolverConfig {
        SolverConfig {
            model: Model::Dpll,
            learning: LearningScheme::None,
            backtrack: BacktrackMode::Chronological,
            ..SolverConfig::cdcl(variable_selector, value_selector)
        }
    }

    pub fn validate(&self, num_vars: usize) -> Result<(), SolveError> {
        let bad = |m: &str| Err(SolveError::InvalidConfig(m.to_string()));
        match self.model {
            Model::Dpll if self.learning != LearningScheme::None => return bad("DPLL does not learn"),
            Model::Dpll if self.backtrack != BacktrackMode::Chronological => {
                return bad("DPLL backtracks chronologically")
            }
            Model::Cdcl if self.learning == LearningScheme::None => return bad("CDCL needs a learning scheme"),
            _ => {}
        }
        let b = self.budget;
        if b.max_conflicts == 0 || b.max_decisions == 0 || b.wall_time == Some(Duration::ZERO) {
            return bad("budgets must be positive");
        }
        if let RestartPolicy::CProbe(vars) = &self.restart_policy {
            if vars.is_empty() || vars.iter().any(|v| v.index() == 0 || v.index() > num_vars) {
                return bad("probe variables out of range");
            }
        }
        self.variable_selector.validate(num_vars)?;
        self.value_selector.validate(num_vars)?;
        Ok(())
    }
}

/// The thirteen configurations, named `model-backtracking[R]-variables-values`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Preset {
    CTrNdRd,
    CTNdRd,
    CJrVsPs,
    CJVsPs,
    CJrSS,
    CJSS,
    DTNdAny,
    DTrNdNd,
    DTNdNd,
    DTrNdRd,
    DTNdRd,
    CJrNdNd,
    CJNdNd,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum VarKind {
    Scripted,
    Vsids,
    Static,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ValueKind {
    Scripted,
    Random,
    PhaseSaving,
    Static,
    /// Any selector works; the static map is used.
    Arbitrary,
}

/// Concrete choices behind the scripted and static selectors plus the
/// restart policy used when the configuration restarts.
#[derive(Clone, Debug, Default)]
pub struct Witness {
    pub order: Vec<Var>,
    /// Indexed by variable, slot 0 unused.
    pub value_map: Vec<bool>,
    pub value_script: Vec<bool>,
    pub restart: Option<RestartPolicy>,
    pub vsids: VsidsParams,
}

impl Preset {
    pub const ALL: [Preset; 13] = [
        Preset::CTrNdRd,
        Preset::CTNdRd,
        Preset::CJrVsPs,
        Preset::CJVsPs,
        Preset::CJrSS,
        Preset::CJSS,
        Preset::DTNdAny,
        Preset::DTrNdNd,
        Preset::DTNdNd,
        Preset::DTrNdRd,
        Preset::DTNdRd,
        Preset::CJrNdNd,
        Preset::CJNdNd,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Preset::CTrNdRd => "C-TR-ND-RD",
            Preset::CTNdRd => "C-T-ND-RD",
            Preset::CJrVsPs => "C-JR-VS-PS",
            Preset::CJVsPs => "C-J-VS-PS",
            Preset::CJrSS => "C-JR-S-S",
            Preset::CJSS => "C-J-S-S",
            Preset::DTNdAny => "D-T-ND-ANY",
            Preset::DTrNdNd => "D-TR-ND-ND",
            Preset::DTNdNd => "D-T-ND-ND",
            Preset::DTrNdRd => "D-TR-ND-RD",
            Preset::DTNdRd => "D-T-ND-RD",
            Preset::CJrNdNd => "C-JR-ND-ND",
            Preset::CJNdNd => "C-J-ND-ND",
        }
    }

    pub fn model(self) -> Model {
        match self.name().as_bytes()[0] {
            b'C' => Model::Cdcl,
            _ => Model::Dpll,
        }
    }

    pub fn restarts(self) -> bool {
        self.name().split('-').nth(1).is_some_and(|p| p.ends_with('R'))
    }

    pub fn backtrack(self) -> BacktrackMode {
        match self.name().split('-').nth(1) {
            Some(p) if p.starts_with('J') => BacktrackMode::Backjump,
            _ => BacktrackMode::Chronological,
        }
    }

    pub fn variable_kind(self) -> VarKind {
        match self.name().split('-').nth(2) {
            Some("VS") => VarKind::Vsids,
            Some("S") => VarKind::Static,
            _ => VarKind::Scripted,
        }
    }

    pub fn value_kind(self) -> ValueKind {
        match self.name().split('-').nth(3) {
            Some("RD") => ValueKind::Random,
            Some("PS") => ValueKind::PhaseSaving,
            Some("S") => ValueKind::Static,
            Some("ANY") => ValueKind::Arbitrary,
            _ => ValueKind::Scripted,
        }
    }

    /// 1UIP everywhere except the ND/ND CDCL pair, which learns with WDLS.
    pub fn learning(self) -> LearningScheme {
        match self {
            _ if self.model() == Model::Dpll => LearningScheme::None,
            Preset::CJrNdNd | Preset::CJNdNd => LearningScheme::Wdls,
            _ => LearningScheme::FirstUip,
        }
    }

    pub fn config(self, witness: &Witness, seed: u64, budget: Budget) -> SolverConfig {
        let variable_selector = match self.variable_kind() {
            VarKind::Scripted => VariableSelector::Scripted(witness.order.clone()),
            VarKind::Static => VariableSelector::Static(witness.order.clone()),
            VarKind::Vsids => VariableSelector::Vsids(Vsids::new(witness.vsids)),
        };
        let value_selector = match self.value_kind() {
            ValueKind::Scripted => ValueSelector::scripted(witness.value_script.clone()),
            ValueKind::Random => ValueSelector::RandomDynamic,
            ValueKind::PhaseSaving => ValueSelector::PhaseSaving,
            ValueKind::Static | ValueKind::Arbitrary => ValueSelector::Static(witness.value_map.clone()),
        };
        let restart_policy = if self.restarts() {
            witness.restart.clone().unwrap_or(RestartPolicy::AfterEachConflict)
        } else {
            RestartPolicy::Never
        };
        SolverConfig {
            name: self.name().to_string(),
            model: self.model(),
            learning: self.learning(),
            backtrack: self.backtrack(),
            variable_selector,
            value_selector,
            restart_policy,
            reset_activity_on_restart: true,
            propagation: PropagationMode::Watched,
            seed,
            budget,
        }
    }
}

impl fmt::Display for Preset {
    fn fmt(&self, f: &mut fmt::Formatter) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Preset {
    type Err = SolveError;

    fn from_str(s: &str) -> Result<Preset, SolveError> {
        Preset::ALL
            .into_iter()
            .find(|c| c.name().eq_ignore_ascii_case(s))
            .ok_or_else(|| SolveError::InvalidConfig(format!("unknown configuration `{s}`")))
    }
}

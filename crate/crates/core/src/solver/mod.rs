//! CDCL and DPLL search.
//!
//! The main loop propagates to saturation, handles conflicts by learning and
//! backjumping (CDCL) or by flipping the deepest open decision (DPLL), asks
//! the restart policy for permission at the two hook points and otherwise
//! branches with the configured selectors.

mod config;
mod state;
mod trace;

use std::time::{Duration, Instant};

use thiserror::Error;

use crate::cnf::CnfFormula;
use crate::heuristics::{on_restart_reset, HeuristicError};
use crate::instance::CnfInstance;
use crate::restart::RestartEvent;

pub use config::{
    BacktrackMode, Budget, LearningScheme, Model, PropagationMode, SolverConfig, Preset, ValueKind, VarKind,
    Witness,
};
pub use state::{EngineError, LearnedClause, Propagation, Reason, SolverState, Stats, TrailEntry};
pub use trace::{parse_trace, write_trace, ClauseId, Tee, TraceEvent, TraceParseError, TraceSink};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum SolveError {
    #[error("invalid configuration: {0}")]
    InvalidConfig(String),
    #[error(transparent)]
    Heuristic(#[from] HeuristicError),
    #[error(transparent)]
    Engine(#[from] EngineError),
    #[error("engine produced an assignment that falsifies the formula")]
    UnsoundModel,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum SolveStatus {
    /// Indexed by variable; slot 0 unused.
    Sat(Vec<bool>),
    Unsat,
    BudgetExhausted,
}

impl SolveStatus {
    pub fn label(&self) -> &'static str {
        match self {
            SolveStatus::Sat(_) => "SAT",
            SolveStatus::Unsat => "UNSAT",
            SolveStatus::BudgetExhausted => "budget-exhausted",
        }
    }

    pub fn is_sat(&self) -> bool {
        matches!(self, SolveStatus::Sat(_))
    }
}

#[derive(Clone, Debug)]
pub struct SolveReport {
    pub status: SolveStatus,
    pub stats: Stats,
    pub trace: Option<Vec<TraceEvent>>,
    pub wall_time: Duration,
}

pub fn solve(instance: &CnfInstance, config: &SolverConfig) -> Result<SolveReport, SolveError> {
    run(&instance.formula, config, None)
}

/// Like [`solve`] but keeps the full event log in the report.
pub fn solve_traced(instance: &CnfInstance, config: &SolverConfig) -> Result<SolveReport, SolveError> {
    let mut events = Vec::new();
    let mut report = run(&instance.formula, config, Some(&mut events))?;
    report.trace = Some(events);
    Ok(report)
}

/// Streams events into `sink` instead of storing them.
pub fn solve_with_sink(
    formula: &CnfFormula,
    config: &SolverConfig,
    sink: &mut dyn TraceSink,
) -> Result<SolveReport, SolveError> {
    run(formula, config, Some(sink))
}

pub fn solve_formula(formula: &CnfFormula, config: &SolverConfig) -> Result<SolveReport, SolveError> {
    run(formula, config, None)
}

fn run(
    formula: &CnfFormula,
    config: &SolverConfig,
    sink: Option<&mut dyn TraceSink>,
) -> Result<SolveReport, SolveError> {
    config.validate(formula.num_variables())?;
    let start = Instant::now();
    let mut state = SolverState::with_sink(formula, config.seed, config.propagation, sink);
    let mut vars = config.variable_selector.clone();
    let mut vals = config.value_selector.clone();
    let mut restart = config.restart_policy.clone();
    let budget = config.budget;
    let mut ticks = 0u64;

    let status = loop {
        let s = state.stats;
        if s.conflicts > budget.max_conflicts
            || s.decisions > budget.max_decisions
            || s.restarts > budget.max_restarts
        {
            break SolveStatus::BudgetExhausted;
        }
        ticks += 1;
        if let Some(limit) = budget.wall_time {
            if ticks.is_multiple_of(256) && start.elapsed() > limit {
                break SolveStatus::BudgetExhausted;
            }
        }

        match state.propagate() {
            Propagation::Conflict(conflict) => {
                if state.decision_level() == 0 {
                    break SolveStatus::Unsat;
                }
                match config.model {
                    Model::Cdcl => {
                        let learned = state.analyze_conflict(conflict, config.learning)?;
                        vars.on_conflict_update(&learned.conflict_side, state.stats.conflicts);
                        match config.backtrack {
                            BacktrackMode::Backjump => state.backjump(&learned)?,
                            BacktrackMode::Chronological => state.backtrack_step()?,
                        }
                    }
                    Model::Dpll => {
                        state.stats.conflicts += 1;
                        let Some(level) = state.highest_unflipped_level() else {
                            break SolveStatus::Unsat;
                        };
                        let d = state.decision_at(level);
                        state.backtrack_to(level - 1);
                        state.decide_flipped(d.var(), !d.is_positive())?;
                    }
                }
                if restart.should_restart(&state, RestartEvent::AfterConflict) {
                    state.restart();
                    if config.reset_activity_on_restart {
                        on_restart_reset(&mut vars, &mut vals);
                    }
                }
            }
            Propagation::NoConflict => {
                if state.all_assigned() {
                    let model = state.model();
                    if !formula.satisfied_by(&model) {
                        return Err(SolveError::UnsoundModel);
                    }
                    break SolveStatus::Sat(model);
                }
                if state.decision_level() > 0 && restart.should_restart(&state, RestartEvent::AfterDecision) {
                    state.restart();
                    if config.reset_activity_on_restart {
                        on_restart_reset(&mut vars, &mut vals);
                    }
                    continue;
                }
                let var = vars.next_variable(&mut state)?;
                let value = vals.next_value(&mut state, var)?;
                state.decide(var, value)?;
            }
        }
    };

    Ok(SolveReport {
        status,
        stats: state.stats,
        trace: None,
        wall_time: start.elapsed(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cnf::Var;
    use crate::heuristics::{ValueSelector, VariableSelector};

    fn inst(n: usize, clauses: &[&[i64]]) -> CnfInstance {
        CnfInstance::raw(CnfFormula::from_dimacs_clauses(n, clauses).unwrap())
    }

    fn order(n: usize) -> Vec<Var> {
        (1..=n).map(Var::new).collect()
    }

    fn configs(n: usize) -> Vec<SolverConfig> {
        let witness = Witness {
            order: order(n),
            value_map: vec![false; n + 1],
            value_script: vec![true, false, true, true, false, false, true, false],
            restart: Some(crate::restart::RestartPolicy::scripted(vec![1, 2])),
            ..Witness::default()
        };
        Preset::ALL
            .into_iter()
            .map(|c| c.config(&witness, 7, Budget::default()))
            .collect()
    }

    #[test]
    fn unit_contradiction_is_unsat_without_decisions() {
        let i = inst(1, &[&[1], &[-1]]);
        for cfg in configs(1) {
            let r = solve(&i, &cfg).unwrap();
            assert_eq!(r.status, SolveStatus::Unsat, "{}", cfg.name);
            assert_eq!(r.stats.decisions, 0);
        }
    }

    #[test]
    fn single_binary_clause_is_sat_quickly() {
        let i = inst(2, &[&[1, 2]]);
        for cfg in configs(2) {
            let r = solve(&i, &cfg).unwrap();
            assert!(r.status.is_sat(), "{}", cfg.name);
            assert!(r.stats.decisions <= 2, "{} took {}", cfg.name, r.stats.decisions);
        }
    }

    #[test]
    fn dpll_explores_both_branches() {
        // x1 ∨ x2, x1 ∨ ¬x2, ¬x1 ∨ x2, ¬x1 ∨ ¬x2
        let i = inst(2, &[&[1, 2], &[1, -2], &[-1, 2], &[-1, -2]]);
        let cfg = SolverConfig::dpll(VariableSelector::Static(order(2)), ValueSelector::Static(vec![false; 3]));
        let r = solve_traced(&i, &cfg).unwrap();
        assert_eq!(r.status, SolveStatus::Unsat);
        assert_eq!(r.stats.decisions, 2);
        assert_eq!(r.stats.conflicts, 2);
    }

    #[test]
    fn traces_are_deterministic() {
        let i = inst(4, &[&[1, 2, 3], &[-1, -2], &[-2, -3], &[-1, -3], &[1, 2, 4], &[-4, 3]]);
        let cfg = Preset::CJrVsPs.config(
            &Witness { restart: Some(crate::restart::RestartPolicy::AfterEachConflict), ..Witness::default() },
            3,
            Budget::default(),
        );
        let a = solve_traced(&i, &cfg).unwrap();
        let b = solve_traced(&i, &cfg).unwrap();
        assert_eq!(a.trace, b.trace);
        assert_eq!(a.status, b.status);
    }

    fn pigeonhole(holes: usize) -> CnfInstance {
        let p = holes + 1;
        let var = |i: usize, j: usize| (i * holes + j + 1) as i64;
        let mut clauses: Vec<Vec<i64>> = (0..p).map(|i| (0..holes).map(|j| var(i, j)).collect()).collect();
        for j in 0..holes {
            for a in 0..p {
                for b in a + 1..p {
                    clauses.push(vec![-var(a, j), -var(b, j)]);
                }
            }
        }
        let refs: Vec<&[i64]> = clauses.iter().map(Vec::as_slice).collect();
        inst(p * holes, &refs)
    }

    #[test]
    fn budget_exhaustion_is_a_status() {
        let i = pigeonhole(4);
        let n = i.formula.num_variables();
        let mut cfg = SolverConfig::cdcl(VariableSelector::Static(order(n)), ValueSelector::Static(vec![true; n + 1]));
        cfg.budget.max_conflicts = 1;
        assert_eq!(solve(&i, &cfg).unwrap().status, SolveStatus::BudgetExhausted);
        cfg.budget.max_conflicts = 100_000;
        assert_eq!(solve(&i, &cfg).unwrap().status, SolveStatus::Unsat);
    }
}

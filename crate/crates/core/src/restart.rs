//! When to throw the trail away.

use thiserror::Error;

use crate::cnf::Var;
use crate::solver::SolverState;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum RestartEvent {
    /// Right after a conflict has been handled.
    AfterConflict,
    /// Propagation saturated without conflict, before the next decision.
    AfterDecision,
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
#[error("probe restart needs at least one variable")]
pub struct EmptyProbe;

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum RestartPolicy {
    Never,
    AfterEachConflict,
    /// Restart once every probe variable is assigned and one of them is 0.
    CProbe(Vec<Var>),
    /// Restart whenever the conflict counter reaches the next entry.
    Scripted { schedule: Vec<u64>, cursor: usize },
}

impl RestartPolicy {
    pub fn probe(vars: Vec<Var>) -> Result<RestartPolicy, EmptyProbe> {
        if vars.is_empty() {
            return Err(EmptyProbe);
        }
        Ok(RestartPolicy::CProbe(vars))
    }

    pub fn scripted(mut schedule: Vec<u64>) -> RestartPolicy {
        schedule.sort_unstable();
        RestartPolicy::Scripted { schedule, cursor: 0 }
    }

    pub fn is_never(&self) -> bool {
        matches!(self, RestartPolicy::Never)
    }

    pub fn should_restart(&mut self, state: &SolverState, event: RestartEvent) -> bool {
        match self {
            RestartPolicy::Never => false,
            RestartPolicy::AfterEachConflict => event == RestartEvent::AfterConflict,
            RestartPolicy::CProbe(vars) => {
                event == RestartEvent::AfterDecision
                    && vars.iter().all(|&v| state.is_assigned(v))
                    && vars.iter().any(|&v| state.value(v) == Some(false))
            }
            RestartPolicy::Scripted { schedule, cursor } => {
                if event != RestartEvent::AfterConflict {
                    return false;
                }
                let conflicts = state.stats.conflicts;
                let mut fired = false;
                while *cursor < schedule.len() && schedule[*cursor] <= conflicts {
                    *cursor += 1;
                    fired = true;
                }
                fired
            }
        }
    }
}

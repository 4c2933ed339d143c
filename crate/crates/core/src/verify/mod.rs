//! Oracles and checkers that validate the engine from the outside.

mod audit;
mod backdoor;
mod equivalence;
mod oracle;

use thiserror::Error;

use crate::cnf::Var;
use crate::instance::Family;
use crate::solver::{EngineError, SolveError};

pub use audit::{audit_run, audit_run_with, AuditOptions, AuditReport, Auditor, Violation};
pub use backdoor::{
    check_ladder_weak_backdoor, check_pitfall_conflict_pairs, check_strong_backdoor, pitfall_single_zero_conflicts,
    LadderBackdoorReport, PairCheck, StrongBackdoorCheck, STRONG_BACKDOOR_CAP,
};
pub use equivalence::{
    check_dpll_value_order_invariance, check_static_restart_equivalence, DpllInvariance, EquivalenceOutcome,
    LearnedLog,
};
pub use oracle::{brute_force_sat, naive_propagate, BruteForce, NaiveOutcome, BRUTE_FORCE_CAP};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum VerifyError {
    #[error("{num_variables} variables exceed the cap of {cap}")]
    TooManyVariables { num_variables: usize, cap: usize },
    #[error("set of {size} variables exceeds the cap of {cap}")]
    SetTooLarge { size: usize, cap: usize },
    #[error("variable {0} is out of range")]
    VariableOutOfRange(Var),
    #[error("expected a {expected} instance, got {found}")]
    FamilyMismatch { expected: Family, found: Family },
    #[error("instance lacks parameter `{0}`")]
    MissingParameter(String),
    #[error("run `{0}` exhausted its budget")]
    BudgetExhausted(String),
    #[error("formula is satisfiable")]
    FormulaSat,
    #[error(transparent)]
    Solve(#[from] SolveError),
}

impl From<EngineError> for VerifyError {
    fn from(e: EngineError) -> VerifyError {
        VerifyError::Solve(SolveError::Engine(e))
    }
}

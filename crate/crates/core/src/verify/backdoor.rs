use crate::cnf::{CnfFormula, Restriction, Var};
use crate::families::{LadderLayout, PitfallLayout};
use crate::instance::{CnfInstance, Family};
use crate::solver::{Propagation, SolverState};

use super::oracle::{assignment, naive_propagate, NaiveOutcome};
use super::VerifyError;

pub const STRONG_BACKDOOR_CAP: usize = 20;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct StrongBackdoorCheck {
    pub holds: bool,
    pub assignments_checked: u64,
    /// First assignment (in binary counting order) that propagates cleanly.
    pub counterexample: Option<Restriction>,
}

/// Every assignment to `vars` must propagate to a conflict.
pub fn check_strong_backdoor(formula: &CnfFormula, vars: &[Var]) -> Result<StrongBackdoorCheck, VerifyError> {
    if vars.len() > STRONG_BACKDOOR_CAP {
        return Err(VerifyError::SetTooLarge { size: vars.len(), cap: STRONG_BACKDOOR_CAP });
    }
    let n = formula.num_variables();
    if let Some(v) = vars.iter().find(|v| v.index() == 0 || v.index() > n) {
        return Err(VerifyError::VariableOutOfRange(*v));
    }
    let total = 1u64 << vars.len();
    for bits in 0..total {
        let pi = assignment(n, vars, bits);
        if let NaiveOutcome::Fixpoint(_) = naive_propagate(formula, &pi) {
            return Ok(StrongBackdoorCheck {
                holds: false,
                assignments_checked: bits + 1,
                counterexample: Some(pi),
            });
        }
    }
    Ok(StrongBackdoorCheck { holds: true, assignments_checked: total, counterexample: None })
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LadderBackdoorReport {
    pub n: usize,
    pub conflicts: u64,
    /// Trail growth after the single ℓ decision, one entry per value tried.
    pub extensions: Vec<usize>,
    /// `n · log n`
    pub bound: usize,
    pub satisfied: bool,
}

impl LadderBackdoorReport {
    pub fn passed(&self) -> bool {
        self.conflicts == 0 && self.satisfied && self.extensions.iter().all(|&e| e <= self.bound)
    }
}

/// Sets every `c` to 1, then decides `ℓ^0_1` to 0 and to 1 in turn and lets
/// the engine propagate.
pub fn check_ladder_weak_backdoor(instance: &CnfInstance) -> Result<LadderBackdoorReport, VerifyError> {
    expect_family(instance, Family::Ladder)?;
    let n: usize = param(instance, "n")?;
    let lay = LadderLayout::new(n);
    let formula = &instance.formula;
    let mut state = SolverState::new(formula, 0);
    let mut conflicts = 0;
    let mut satisfied = true;
    let mut extensions = Vec::new();
    let mut step = |state: &mut SolverState| {
        if let Propagation::Conflict(_) = state.propagate() {
            conflicts += 1;
            false
        } else {
            true
        }
    };
    if !step(&mut state) {
        satisfied = false;
    }
    for c in lay.c_vars() {
        state.decide(c, true)?;
        if !step(&mut state) {
            satisfied = false;
        }
    }
    let base = state.decision_level();
    for value in [false, true] {
        let before = state.trail().len();
        state.decide(lay.ell(0, 1), value)?;
        let ok = step(&mut state);
        extensions.push(state.trail().len() - before);
        satisfied &= ok && state.all_assigned() && formula.satisfied_by(&state.model());
        state.backtrack_to(base);
    }
    Ok(LadderBackdoorReport {
        n,
        conflicts,
        extensions,
        bound: n * lay.log_n,
        satisfied,
    })
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PairCheck {
    pub pairs_checked: usize,
    /// `(block, i1, i2)` pairs that propagated without conflict.
    pub failures: Vec<(usize, usize, usize)>,
}

impl PairCheck {
    pub fn holds(&self) -> bool {
        self.failures.is_empty()
    }
}

fn pitfall_layout(instance: &CnfInstance) -> Result<PitfallLayout, VerifyError> {
    expect_family(instance, Family::Pitfall)?;
    Ok(PitfallLayout::new(param(instance, "k")?, param(instance, "n")?, param(instance, "m")?))
}

/// For every block and pair `i1 < i2`, `y_{j,i1} = y_{j,i2} = 0` must
/// propagate to a conflict.
pub fn check_pitfall_conflict_pairs(instance: &CnfInstance) -> Result<PairCheck, VerifyError> {
    let lay = pitfall_layout(instance)?;
    let nv = instance.formula.num_variables();
    let mut check = PairCheck { pairs_checked: 0, failures: Vec::new() };
    for j in 1..=lay.k {
        for i1 in 1..=lay.n {
            for i2 in i1 + 1..=lay.n {
                let pi = Restriction::unassigned(nv).with(lay.y(j, i1), false).with(lay.y(j, i2), false);
                check.pairs_checked += 1;
                if naive_propagate(&instance.formula, &pi) != NaiveOutcome::Conflict {
                    check.failures.push((j, i1, i2));
                }
            }
        }
    }
    Ok(check)
}

/// Whether `y_{j,i} = 0` alone propagates to a conflict.
pub fn pitfall_single_zero_conflicts(instance: &CnfInstance, j: usize, i: usize) -> Result<bool, VerifyError> {
    let lay = pitfall_layout(instance)?;
    let pi = Restriction::unassigned(instance.formula.num_variables()).with(lay.y(j, i), false);
    Ok(naive_propagate(&instance.formula, &pi) == NaiveOutcome::Conflict)
}

fn expect_family(instance: &CnfInstance, family: Family) -> Result<(), VerifyError> {
    if instance.family != family {
        return Err(VerifyError::FamilyMismatch { expected: family, found: instance.family });
    }
    Ok(())
}

fn param(instance: &CnfInstance, key: &str) -> Result<usize, VerifyError> {
    instance
        .parameter(key)
        .ok_or_else(|| VerifyError::MissingParameter(key.to_string()))
}

//! Branching: which variable to decide next and which value to give it.

use rand::Rng;
use thiserror::Error;

use crate::cnf::Var;
use crate::solver::SolverState;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum HeuristicError {
    #[error("script exhausted after {0} entries")]
    ScriptExhausted(usize),
    #[error("no unassigned variable left")]
    NothingUnassigned,
    #[error("invalid selector: {0}")]
    Invalid(String),
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct VsidsParams {
    pub bump: f64,
    pub decay: f64,
    pub decay_interval: u64,
}

impl Default for VsidsParams {
    fn default() -> VsidsParams {
        VsidsParams { bump: 1.0, decay: 0.95, decay_interval: 1 }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct Vsids {
    pub params: VsidsParams,
    activity: Vec<f64>,
}

impl Vsids {
    pub fn new(params: VsidsParams) -> Vsids {
        Vsids { params, activity: Vec::new() }
    }

    pub fn activity(&self, var: Var) -> f64 {
        self.activity.get(var.index()).copied().unwrap_or(0.0)
    }

    pub fn set_activity(&mut self, var: Var, value: f64) {
        self.grow(var.index());
        self.activity[var.index()] = value;
    }

    fn grow(&mut self, index: usize) {
        if self.activity.len() <= index {
            self.activity.resize(index + 1, 0.0);
        }
    }

    pub fn reset(&mut self) {
        self.activity.iter_mut().for_each(|a| *a = 0.0);
    }
}

#[derive(Clone, Debug, PartialEq)]
pub enum VariableSelector {
    /// Total order over all variables; the first unassigned one wins.
    Static(Vec<Var>),
    /// Priority list standing in for a non-deterministic choice: the first
    /// unassigned entry wins. It is an error if every entry is assigned while
    /// other variables remain open.
    Scripted(Vec<Var>),
    Vsids(Vsids),
}

impl VariableSelector {
    pub fn vsids() -> VariableSelector {
        VariableSelector::Vsids(Vsids::new(VsidsParams::default()))
    }

    pub fn validate(&self, num_vars: usize) -> Result<(), HeuristicError> {
        match self {
            VariableSelector::Static(order) => {
                let mut seen = vec![false; num_vars + 1];
                for v in order {
                    if v.index() > num_vars || std::mem::replace(&mut seen[v.index()], true) {
                        return Err(HeuristicError::Invalid(format!("static order repeats or overflows at {v}")));
                    }
                }
                if order.len() != num_vars {
                    return Err(HeuristicError::Invalid("static order is not a permutation".into()));
                }
            }
            VariableSelector::Scripted(script) => {
                if let Some(v) = script.iter().find(|v| v.index() > num_vars) {
                    return Err(HeuristicError::Invalid(format!("script names variable {v}")));
                }
            }
            VariableSelector::Vsids(vs) => {
                let p = vs.params;
                if !(p.bump > 0.0 && p.decay > 0.0 && p.decay < 1.0 && p.decay_interval > 0) {
                    return Err(HeuristicError::Invalid(format!("bad VSIDS parameters {p:?}")));
                }
            }
        }
        Ok(())
    }

    pub fn next_variable(&mut self, state: &mut SolverState) -> Result<Var, HeuristicError> {
        if state.all_assigned() {
            return Err(HeuristicError::NothingUnassigned);
        }
        match self {
            VariableSelector::Static(order) => order
                .iter()
                .copied()
                .find(|&v| !state.is_assigned(v))
                .ok_or(HeuristicError::NothingUnassigned),
            VariableSelector::Scripted(script) => script
                .iter()
                .copied()
                .find(|&v| !state.is_assigned(v))
                .ok_or(HeuristicError::ScriptExhausted(script.len())),
            VariableSelector::Vsids(vs) => {
                vs.grow(state.num_variables());
                let mut best_score = f64::NEG_INFINITY;
                let mut tied: Vec<Var> = Vec::new();
                for i in 1..=state.num_variables() {
                    let v = Var::new(i);
                    if state.is_assigned(v) {
                        continue;
                    }
                    let a = vs.activity[i];
                    if a > best_score {
                        best_score = a;
                        tied.clear();
                    }
                    if a == best_score {
                        tied.push(v);
                    }
                }
                // Uniform over the tied maxima, one draw per decision.
                let best = match tied.len() {
                    0 => None,
                    1 => Some(tied[0]),
                    k => Some(tied[state.rng.gen_range(0..k)]),
                };
                best.ok_or(HeuristicError::NothingUnassigned)
            }
        }
    }

    /// Bumps `conflict_side` and applies the periodic decay. No-op unless VSIDS.
    pub fn on_conflict_update(&mut self, conflict_side: &[Var], conflicts_so_far: u64) {
        if let VariableSelector::Vsids(vs) = self {
            if let Some(max) = conflict_side.iter().map(|v| v.index()).max() {
                vs.grow(max);
            }
            for v in conflict_side {
                vs.activity[v.index()] += vs.params.bump;
            }
            if conflicts_so_far.is_multiple_of(vs.params.decay_interval) {
                let c = vs.params.decay;
                vs.activity.iter_mut().for_each(|a| *a *= c);
            }
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub enum ValueSelector {
    /// Indexed by variable; slot 0 unused.
    Static(Vec<bool>),
    Scripted { bits: Vec<bool>, cursor: usize },
    RandomDynamic,
    /// Last value the variable held, 0 if it was never assigned. The memory
    /// lives in the solver state and survives restarts.
    PhaseSaving,
}

impl ValueSelector {
    pub fn scripted(bits: Vec<bool>) -> ValueSelector {
        ValueSelector::Scripted { bits, cursor: 0 }
    }

    pub fn validate(&self, num_vars: usize) -> Result<(), HeuristicError> {
        match self {
            ValueSelector::Static(map) if map.len() != num_vars + 1 => Err(HeuristicError::Invalid(
                format!("static value map covers {} of {num_vars} variables", map.len().saturating_sub(1)),
            )),
            _ => Ok(()),
        }
    }

    pub fn next_value(&mut self, state: &mut SolverState, var: Var) -> Result<bool, HeuristicError> {
        match self {
            ValueSelector::Static(map) => Ok(map[var.index()]),
            ValueSelector::Scripted { bits, cursor } => {
                let b = *bits.get(*cursor).ok_or(HeuristicError::ScriptExhausted(bits.len()))?;
                *cursor += 1;
                Ok(b)
            }
            ValueSelector::RandomDynamic => Ok(state.rng.gen()),
            ValueSelector::PhaseSaving => Ok(state.saved_phase(var).unwrap_or(false)),
        }
    }
}

/// Selector bookkeeping when a restart fires: VSIDS activities drop to zero,
/// everything else (including saved phases) is kept.
pub fn on_restart_reset(variables: &mut VariableSelector, _values: &mut ValueSelector) {
    if let VariableSelector::Vsids(vs) = variables {
        vs.reset();
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cnf::CnfFormula;

    fn v(i: usize) -> Var {
        Var::new(i)
    }

    fn state(n: usize, seed: u64) -> SolverState<'static> {
        SolverState::new(&CnfFormula::new(n), seed)
    }

    #[test]
    fn static_order_head() {
        let mut s = state(3, 0);
        let mut sel = VariableSelector::Static(vec![v(3), v(1), v(2)]);
        sel.validate(3).unwrap();
        assert_eq!(sel.next_variable(&mut s).unwrap(), v(3));
        s.decide(v(3), true).unwrap();
        assert_eq!(sel.next_variable(&mut s).unwrap(), v(1));
        assert!(VariableSelector::Static(vec![v(1), v(1), v(2)]).validate(3).is_err());
        assert!(VariableSelector::Static(vec![v(1), v(2)]).validate(3).is_err());
    }

    #[test]
    fn script_exhaustion() {
        let mut s = state(2, 0);
        let mut sel = VariableSelector::Scripted(vec![v(2)]);
        assert_eq!(sel.next_variable(&mut s).unwrap(), v(2));
        s.decide(v(2), true).unwrap();
        assert_eq!(sel.next_variable(&mut s), Err(HeuristicError::ScriptExhausted(1)));
        let mut bits = ValueSelector::scripted(vec![true]);
        assert!(bits.next_value(&mut s, v(1)).unwrap());
        assert_eq!(bits.next_value(&mut s, v(1)), Err(HeuristicError::ScriptExhausted(1)));
    }

    #[test]
    fn vsids_strict_argmax() {
        let mut s = state(2, 0);
        let mut vs = Vsids::new(VsidsParams::default());
        vs.set_activity(v(1), 5.0);
        vs.set_activity(v(2), 3.0);
        let mut sel = VariableSelector::Vsids(vs);
        for _ in 0..20 {
            assert_eq!(sel.next_variable(&mut s).unwrap(), v(1));
        }
    }

    #[test]
    fn vsids_zero_ties_split_over_seeds() {
        let mut ones = 0;
        for seed in 0..2000 {
            let mut s = state(2, seed);
            if VariableSelector::vsids().next_variable(&mut s).unwrap() == v(1) {
                ones += 1;
            }
        }
        assert!((900..=1100).contains(&ones), "{ones}");
    }

    #[test]
    fn bump_and_decay() {
        let mut sel = VariableSelector::Vsids(Vsids::new(VsidsParams { bump: 1.0, decay: 0.5, decay_interval: 2 }));
        sel.on_conflict_update(&[v(1), v(2)], 1);
        let VariableSelector::Vsids(vs) = &sel else { unreachable!() };
        assert_eq!((vs.activity(v(1)), vs.activity(v(2))), (1.0, 1.0));
        let mut sel2 = VariableSelector::Vsids(Vsids::new(VsidsParams { bump: 4.0, decay: 0.5, decay_interval: 1 }));
        sel2.on_conflict_update(&[v(1)], 1);
        let VariableSelector::Vsids(vs) = &sel2 else { unreachable!() };
        assert_eq!(vs.activity(v(1)), 2.0);
    }

    #[test]
    fn restart_reset_zeroes_activity_only() {
        let mut vs = Vsids::new(VsidsParams::default());
        vs.set_activity(v(1), 7.5);
        let mut sel = VariableSelector::Vsids(vs);
        let mut val = ValueSelector::PhaseSaving;
        on_restart_reset(&mut sel, &mut val);
        let VariableSelector::Vsids(vs) = &sel else { unreachable!() };
        assert_eq!(vs.activity(v(1)), 0.0);

        let mut st = VariableSelector::Static(vec![v(2), v(1)]);
        let before = st.clone();
        on_restart_reset(&mut st, &mut val);
        assert_eq!(st, before);
    }

    #[test]
    fn phase_saving() {
        let mut s = state(2, 0);
        let mut ps = ValueSelector::PhaseSaving;
        assert!(!ps.next_value(&mut s, v(1)).unwrap());
        s.decide(v(1), true).unwrap();
        s.backtrack_step().unwrap();
        assert!(ps.next_value(&mut s, v(1)).unwrap());
        s.decide(v(1), true).unwrap();
        s.restart();
        assert!(ps.next_value(&mut s, v(1)).unwrap());
    }

    #[test]
    fn random_values_are_fair_and_reproducible() {
        let mut s = state(1, 42);
        let mut rd = ValueSelector::RandomDynamic;
        let draws: Vec<bool> = (0..10_000).map(|_| rd.next_value(&mut s, v(1)).unwrap()).collect();
        let freq = draws.iter().filter(|&&b| b).count() as f64 / 10_000.0;
        assert!((freq - 0.5).abs() <= 0.02, "{freq}");
        let mut s2 = state(1, 42);
        let again: Vec<bool> = (0..10_000).map(|_| rd.next_value(&mut s2, v(1)).unwrap()).collect();
        assert_eq!(draws, again);
    }
}

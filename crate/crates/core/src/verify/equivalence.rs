use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::cnf::{CnfFormula, Lit, Var};
use crate::heuristics::{ValueSelector, VariableSelector};
use crate::restart::RestartPolicy;
use crate::solver::{solve_with_sink, Budget, SolveStatus, SolverConfig, Preset, Tee, TraceEvent, TraceSink, Witness};

use super::audit::{AuditOptions, AuditReport, Auditor};
use super::oracle::brute_force_sat;
use super::VerifyError;

/// Keeps only the learned clauses of a run.
#[derive(Default)]
pub struct LearnedLog(pub Vec<Vec<Lit>>);

impl TraceSink for LearnedLog {
    fn event(&mut self, event: &TraceEvent) {
        if let TraceEvent::Learn { lits } = event {
            self.0.push(lits.clone());
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct EquivalenceOutcome {
    pub equal: bool,
    pub learned: usize,
    pub restarts: u64,
    pub status: SolveStatus,
    /// Index of the first learned clause on which the runs disagree.
    pub first_difference: Option<usize>,
    /// Audits of the restarting and the restart-free run.
    pub audits: Vec<AuditReport>,
}

/// Runs the static/static backjumping configuration with and without the
/// restart schedule and compares the learned-clause sequences and verdicts.
pub fn check_static_restart_equivalence(
    formula: &CnfFormula,
    order: &[Var],
    mapping: &[bool],
    restart_schedule: &[u64],
    budget: Budget,
) -> Result<EquivalenceOutcome, VerifyError> {
    let witness = Witness {
        order: order.to_vec(),
        value_map: mapping.to_vec(),
        restart: Some(RestartPolicy::scripted(restart_schedule.to_vec())),
        ..Witness::default()
    };
    let run = |cfg: Preset| -> Result<(LearnedLog, SolveStatus, u64, AuditReport), VerifyError> {
        let cfg = cfg.config(&witness, 0, budget);
        let mut log = LearnedLog::default();
        let mut auditor = Auditor::new(formula, AuditOptions::for_config(&cfg));
        let r = solve_with_sink(formula, &cfg, &mut Tee(&mut log, &mut auditor))?;
        if r.status == SolveStatus::BudgetExhausted {
            return Err(VerifyError::BudgetExhausted(cfg.name));
        }
        let audit = auditor.finish(&r.status, formula);
        Ok((log, r.status, r.stats.restarts, audit))
    };
    let (with, status_with, restarts, audit_with) = run(Preset::CJrSS)?;
    let (without, status_without, _, audit_without) = run(Preset::CJSS)?;
    let first_difference = with
        .0
        .iter()
        .zip(&without.0)
        .position(|(a, b)| a != b)
        .or((with.0.len() != without.0.len()).then(|| with.0.len().min(without.0.len())));
    Ok(EquivalenceOutcome {
        equal: first_difference.is_none() && status_with == status_without,
        learned: without.0.len(),
        restarts,
        status: status_without,
        first_difference,
        audits: vec![audit_with, audit_without],
    })
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DpllInvariance {
    /// Decisions per run: all-0 script, all-1 script, then the random ones.
    pub node_counts: Vec<u64>,
    pub audits: Vec<AuditReport>,
}

impl DpllInvariance {
    pub fn equal(&self) -> bool {
        self.node_counts.windows(2).all(|w| w[0] == w[1])
    }
}

/// DPLL with a fixed variable script under several value scripts. On an
/// unsatisfiable formula both branches of every node get refuted, so the
/// tree size cannot depend on which branch goes first.
pub fn check_dpll_value_order_invariance(
    formula: &CnfFormula,
    variable_script: &[Var],
    random_scripts: usize,
    seed: u64,
) -> Result<DpllInvariance, VerifyError> {
    if brute_force_sat(formula)?.is_sat() {
        return Err(VerifyError::FormulaSat);
    }
    let len = 1usize << (formula.num_variables() + 1).min(22);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut scripts = vec![vec![false; len], vec![true; len]];
    for _ in 0..random_scripts {
        scripts.push((0..len).map(|_| rng.gen()).collect());
    }
    let budget = Budget { max_conflicts: u64::MAX, max_decisions: u64::MAX, ..Budget::default() };
    let mut node_counts = Vec::with_capacity(scripts.len());
    let mut audits = Vec::with_capacity(scripts.len());
    for bits in scripts {
        let mut cfg = SolverConfig::dpll(
            VariableSelector::Scripted(variable_script.to_vec()),
            ValueSelector::scripted(bits),
        );
        cfg.budget = budget;
        let mut auditor = Auditor::new(formula, AuditOptions::for_config(&cfg));
        let r = solve_with_sink(formula, &cfg, &mut auditor)?;
        if r.status != SolveStatus::Unsat {
            return Err(VerifyError::BudgetExhausted("DPLL".into()));
        }
        node_counts.push(r.stats.decisions);
        audits.push(auditor.finish(&r.status, formula));
    }
    Ok(DpllInvariance { node_counts, audits })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn all_vars(n: usize) -> Vec<Var> {
        (1..=n).map(Var::new).collect()
    }

    #[test]
    fn empty_schedule_is_the_same_run() {
        let f = CnfFormula::from_dimacs_clauses(3, &[&[1, 2], &[-1, 3], &[-2, -3], &[-3, 1]]).unwrap();
        let out = check_static_restart_equivalence(&f, &all_vars(3), &[false; 4], &[], Budget::default()).unwrap();
        assert!(out.equal);
        assert_eq!(out.restarts, 0);
    }

    #[test]
    fn unit_contradiction_needs_no_decisions() {
        let f = CnfFormula::from_dimacs_clauses(1, &[&[1], &[-1]]).unwrap();
        let inv = check_dpll_value_order_invariance(&f, &all_vars(1), 8, 1).unwrap();
        assert_eq!(inv.node_counts, vec![0; 10]);
    }

    #[test]
    fn sat_formula_is_rejected() {
        let f = CnfFormula::from_dimacs_clauses(1, &[&[1]]).unwrap();
        assert_eq!(
            check_dpll_value_order_invariance(&f, &all_vars(1), 1, 0),
            Err(VerifyError::FormulaSat)
        );
    }
}

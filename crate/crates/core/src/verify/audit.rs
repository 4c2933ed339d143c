//! Replays an engine trace against its own copy of the clause database and
//! reports every broken invariant.

use std::fmt::Write as _;

use crate::cnf::{CnfFormula, Lit, Var};
use crate::solver::{ClauseId, LearningScheme, Model, SolveStatus, SolverConfig, TraceEvent, TraceSink};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct AuditOptions {
    pub model: Model,
    pub learning: LearningScheme,
    /// Before each decision no clause may be unit or falsified, and every
    /// propagation or conflict must use the lowest-indexed candidate clause.
    /// Costs a database scan per event.
    pub check_saturation: bool,
}

impl Default for AuditOptions {
    fn default() -> AuditOptions {
        AuditOptions { model: Model::Cdcl, learning: LearningScheme::FirstUip, check_saturation: false }
    }
}

impl AuditOptions {
    pub fn for_config(config: &SolverConfig) -> AuditOptions {
        AuditOptions { model: config.model, learning: config.learning, ..AuditOptions::default() }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Violation {
    pub invariant: &'static str,
    pub event: usize,
    pub detail: String,
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct AuditReport {
    pub violations: Vec<Violation>,
    pub passed: bool,
    pub events: usize,
    pub learned: usize,
    pub restarts: usize,
    /// Propagations whose reason was a learned clause.
    pub learned_reason_uses: usize,
}

impl AuditReport {
    pub fn render(&self) -> String {
        let mut out = format!(
            "audit {} events={} learned={} restarts={} violations={}\n",
            if self.passed { "passed" } else { "FAILED" },
            self.events,
            self.learned,
            self.restarts,
            self.violations.len()
        );
        for v in &self.violations {
            let _ = writeln!(out, "violation {} at event {}: {}", v.invariant, v.event, v.detail);
        }
        out
    }
}

const MAX_RECORDED: usize = 1000;

pub struct Auditor {
    opts: AuditOptions,
    num_original: usize,
    clauses: Vec<Vec<Lit>>,
    values: Vec<Option<bool>>,
    levels: Vec<usize>,
    trail: Vec<Lit>,
    level_starts: Vec<usize>,
    flipped: Vec<bool>,
    undone: Option<(usize, Lit)>,
    reason_uses: Vec<u32>,
    used_in_segment: Vec<ClauseId>,
    last_conflict_level: Option<usize>,
    last_was_conflict: bool,
    index: usize,
    violation_count: usize,
    report: AuditReport,
}

impl Auditor {
    pub fn new(formula: &CnfFormula, opts: AuditOptions) -> Auditor {
        let n = formula.num_variables();
        Auditor {
            opts,
            num_original: formula.len(),
            clauses: formula.clauses().iter().map(|c| c.lits().to_vec()).collect(),
            values: vec![None; n + 1],
            levels: vec![0; n + 1],
            trail: Vec::new(),
            level_starts: Vec::new(),
            flipped: Vec::new(),
            undone: None,
            reason_uses: Vec::new(),
            used_in_segment: Vec::new(),
            last_conflict_level: None,
            last_was_conflict: false,
            index: 0,
            violation_count: 0,
            report: AuditReport::default(),
        }
    }

    fn flag(&mut self, invariant: &'static str, detail: String) {
        self.violation_count += 1;
        if self.report.violations.len() < MAX_RECORDED {
            self.report.violations.push(Violation { invariant, event: self.index, detail });
        }
    }

    fn lit_value(&self, l: Lit) -> Option<bool> {
        self.values.get(l.var().index()).copied().flatten().map(|v| l.eval(v))
    }

    fn level(&self) -> usize {
        self.level_starts.len()
    }

    fn var_ok(&self, v: Var) -> bool {
        v.index() >= 1 && v.index() < self.values.len()
    }

    /// Lowest-indexed clause that is unit or falsified, if any.
    fn first_candidate(&self) -> Option<ClauseId> {
        self.clauses.iter().position(|c| {
            let mut open = 0;
            for &l in c {
                match self.lit_value(l) {
                    Some(true) => return false,
                    Some(false) => {}
                    None => open += 1,
                }
            }
            open <= 1
        })
    }

    fn assign(&mut self, l: Lit) {
        let v = l.var().index();
        self.values[v] = Some(l.is_positive());
        self.levels[v] = self.level();
        self.trail.push(l);
    }

    fn unwind(&mut self, level: usize) {
        if level >= self.level() {
            return;
        }
        let start = self.level_starts[level];
        for l in self.trail.drain(start..) {
            self.values[l.var().index()] = None;
        }
        self.level_starts.truncate(level);
        self.flipped.truncate(level);
    }

    pub fn step(&mut self, event: &TraceEvent) {
        let was_conflict = std::mem::replace(&mut self.last_was_conflict, false);
        match event {
            TraceEvent::Decide { var, value, level } => self.on_decide(*var, *value, *level),
            TraceEvent::Propagate { var, value, reason } => self.on_propagate(*var, *value, *reason),
            TraceEvent::Conflict { clause } => self.on_conflict(*clause),
            TraceEvent::Learn { lits } => self.on_learn(lits, was_conflict),
            TraceEvent::Backtrack { level } => self.on_backtrack(*level),
            TraceEvent::Restart => {
                self.unwind(0);
                self.report.restarts += 1;
                self.used_in_segment.clear();
                self.reason_uses.iter_mut().for_each(|u| *u = 0);
            }
        }
        if !matches!(event, TraceEvent::Backtrack { .. }) {
            self.undone = None;
        }
        self.index += 1;
    }

    fn on_decide(&mut self, var: Var, value: bool, level: usize) {
        self.check_wdls_satisfied();
        if self.opts.check_saturation {
            if let Some(c) = self.first_candidate() {
                self.flag("saturation", format!("clause {c} is unit or falsified before deciding {var}"));
            }
        }
        if !self.var_ok(var) {
            self.flag("decision-unassigned", format!("variable {var} out of range"));
            return;
        }
        if self.values[var.index()].is_some() {
            self.flag("decision-unassigned", format!("variable {var} already assigned"));
            return;
        }
        if level != self.level() + 1 {
            self.flag("decision-level", format!("decision at level {level}, expected {}", self.level() + 1));
        }
        let lit = var.lit(value);
        let flipped = self.undone == Some((self.level() + 1, !lit));
        self.level_starts.push(self.trail.len());
        self.flipped.push(flipped);
        self.assign(lit);
    }

    fn on_propagate(&mut self, var: Var, value: bool, reason: ClauseId) {
        if !self.var_ok(var) || self.values[var.index()].is_some() {
            self.flag("reason-validity", format!("propagated variable {var} is out of range or assigned"));
            return;
        }
        let lit = var.lit(value);
        let Some(clause) = self.clauses.get(reason) else {
            self.flag("reason-validity", format!("reason {reason} does not exist"));
            return;
        };
        let contains = clause.contains(&lit);
        let others_false = clause.iter().filter(|&&l| l != lit).all(|&l| self.lit_value(l) == Some(false));
        if !contains || !others_false {
            self.flag("reason-validity", format!("clause {reason} is not unit on {lit}"));
        }
        if self.opts.check_saturation {
            if let Some(c) = self.first_candidate() {
                if c != reason {
                    self.flag("propagation-order", format!("propagated with {reason} before clause {c}"));
                }
            }
        }
        if reason >= self.num_original {
            self.report.learned_reason_uses += 1;
            let k = reason - self.num_original;
            self.reason_uses[k] += 1;
            if self.reason_uses[k] == 1 {
                self.used_in_segment.push(reason);
            } else if self.opts.learning == LearningScheme::Wdls {
                self.flag("wdls-single-use", format!("learned clause {reason} used {} times", self.reason_uses[k]));
            }
        }
        self.assign(lit);
    }

    fn on_conflict(&mut self, clause: ClauseId) {
        self.last_was_conflict = true;
        self.last_conflict_level = Some(self.level());
        match self.clauses.get(clause) {
            None => self.flag("conflict-falsified", format!("clause {clause} does not exist")),
            Some(c) => {
                if !c.iter().all(|&l| self.lit_value(l) == Some(false)) {
                    self.flag("conflict-falsified", format!("clause {clause} is not falsified"));
                }
            }
        }
        if self.opts.check_saturation {
            if let Some(c) = self.first_candidate() {
                if c != clause {
                    self.flag("propagation-order", format!("conflict on {clause} before clause {c}"));
                }
            }
        }
    }

    fn on_learn(&mut self, lits: &[Lit], after_conflict: bool) {
        self.report.learned += 1;
        if !after_conflict {
            self.flag("learn-after-conflict", "learned clause without a preceding conflict".into());
        }
        if !lits.iter().all(|&l| self.var_ok(l.var()) && self.lit_value(l) == Some(false)) {
            self.flag("learned-falsified", format!("learned clause {lits:?} is not falsified"));
        } else {
            let top = self.level();
            let at_top = lits.iter().filter(|l| self.levels[l.var().index()] == top).count();
            if at_top != 1 {
                self.flag("learned-asserting", format!("{at_top} literals at conflict level {top}"));
            }
        }
        if self.opts.learning == LearningScheme::Wdls {
            let expected: Vec<Lit> = self.level_starts.iter().map(|&i| !self.trail[i]).collect();
            if lits != expected.as_slice() {
                self.flag("wdls-shape", format!("learned {lits:?}, negated decisions {expected:?}"));
            }
        }
        self.clauses.push(lits.to_vec());
        self.reason_uses.push(0);
    }

    fn on_backtrack(&mut self, level: usize) {
        if level >= self.level() {
            self.flag("backtrack-level", format!("backtrack to {level} from level {}", self.level()));
            return;
        }
        let decision = self.trail[self.level_starts[level]];
        self.unwind(level);
        self.undone = Some((level + 1, decision));
    }

    /// WDLS clauses that served as a reason in this segment must be satisfied
    /// whenever propagation has saturated.
    fn check_wdls_satisfied(&mut self) {
        if self.opts.learning != LearningScheme::Wdls {
            return;
        }
        let unsatisfied: Vec<ClauseId> = self
            .used_in_segment
            .iter()
            .copied()
            .filter(|&c| !self.clauses[c].iter().any(|&l| self.lit_value(l) == Some(true)))
            .collect();
        for c in unsatisfied {
            self.flag("wdls-stays-satisfied", format!("learned clause {c} is no longer satisfied"));
        }
    }

    /// Checks the final verdict against the replayed state.
    pub fn finish(mut self, status: &SolveStatus, formula: &CnfFormula) -> AuditReport {
        if !self.last_was_conflict {
            self.check_wdls_satisfied();
        }
        match status {
            SolveStatus::Sat(model) => {
                if !formula.satisfied_by(model) {
                    self.flag("model-soundness", "reported model falsifies the formula".into());
                }
                let disagrees = (1..self.values.len()).any(|v| self.values[v] != Some(model[v]));
                if disagrees {
                    self.flag("model-soundness", "model differs from the replayed trail".into());
                }
            }
            SolveStatus::Unsat => {
                let justified = self.last_was_conflict
                    && match self.opts.model {
                        Model::Cdcl => self.last_conflict_level == Some(0),
                        Model::Dpll => self.flipped.iter().all(|&f| f),
                    };
                if !justified {
                    self.flag("unsat-justification", "UNSAT without a terminal refutation".into());
                }
            }
            SolveStatus::BudgetExhausted => {}
        }
        self.report.events = self.index;
        self.report.passed = self.violation_count == 0;
        self.report
    }

    pub fn violation_count(&self) -> usize {
        self.violation_count
    }
}

impl TraceSink for Auditor {
    fn event(&mut self, event: &TraceEvent) {
        self.step(event);
    }
}

/// Replays `trace` with default options; no final-verdict check.
pub fn audit_run(trace: &[TraceEvent], formula: &CnfFormula) -> AuditReport {
    audit_run_with(trace, formula, AuditOptions::default(), &SolveStatus::BudgetExhausted)
}

pub fn audit_run_with(
    trace: &[TraceEvent],
    formula: &CnfFormula,
    opts: AuditOptions,
    status: &SolveStatus,
) -> AuditReport {
    let mut a = Auditor::new(formula, opts);
    for e in trace {
        a.step(e);
    }
    a.finish(status, formula)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::heuristics::{ValueSelector, VariableSelector};
    use crate::instance::CnfInstance;
    use crate::solver::solve_traced;

    fn php32() -> CnfFormula {
        CnfFormula::from_dimacs_clauses(
            6,
            &[&[1, 2], &[3, 4], &[5, 6], &[-1, -3], &[-1, -5], &[-3, -5], &[-2, -4], &[-2, -6], &[-4, -6]],
        )
        .unwrap()
    }

    fn order() -> Vec<Var> {
        (1..=6).map(Var::new).collect()
    }

    #[test]
    fn engine_traces_pass() {
        let f = php32();
        let inst = CnfInstance::raw(f.clone());
        for learning in [LearningScheme::FirstUip, LearningScheme::Wdls] {
            let mut cfg = SolverConfig::cdcl(VariableSelector::Static(order()), ValueSelector::Static(vec![true; 7]));
            cfg.learning = learning;
            let r = solve_traced(&inst, &cfg).unwrap();
            let opts = AuditOptions { check_saturation: true, ..AuditOptions::for_config(&cfg) };
            let audit = audit_run_with(r.trace.as_ref().unwrap(), &f, opts, &r.status);
            assert!(audit.passed, "{}", audit.render());
        }
    }

    #[test]
    fn corrupted_propagation_is_flagged() {
        let f = php32();
        let trace = vec![
            TraceEvent::Decide { var: Var::new(1), value: true, level: 1 },
            TraceEvent::Propagate { var: Var::new(4), value: true, reason: 0 },
        ];
        let audit = audit_run(&trace, &f);
        assert!(!audit.passed);
        assert_eq!(audit.violations[0].invariant, "reason-validity");
        assert_eq!(audit.violations[0].event, 1);
    }

    #[test]
    fn unjustified_unsat_is_flagged() {
        let f = php32();
        let trace = vec![TraceEvent::Decide { var: Var::new(1), value: true, level: 1 }];
        let audit = audit_run_with(&trace, &f, AuditOptions::default(), &SolveStatus::Unsat);
        assert_eq!(audit.violations[0].invariant, "unsat-justification");
    }

    #[test]
    fn non_falsified_learned_clause_is_flagged() {
        let f = php32();
        let trace = vec![
            TraceEvent::Decide { var: Var::new(1), value: true, level: 1 },
            TraceEvent::Conflict { clause: 1 },
            TraceEvent::Learn { lits: vec![Var::new(1).positive()] },
        ];
        let audit = audit_run(&trace, &f);
        let names: Vec<_> = audit.violations.iter().map(|v| v.invariant).collect();
        assert_eq!(names, vec!["conflict-falsified", "learned-falsified"]);
    }
}

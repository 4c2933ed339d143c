use std::cmp::Reverse;
use std::collections::BinaryHeap;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use thiserror::Error;

use crate::cnf::{CnfFormula, Lit, Var};

use super::config::{LearningScheme, PropagationMode};
use super::trace::{ClauseId, TraceEvent, TraceSink};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum EngineError {
    #[error("variable {0} is already assigned")]
    AlreadyAssigned(Var),
    #[error("variable {0} is out of range")]
    VariableOutOfRange(Var),
    #[error("conflict at decision level 0")]
    ConflictAtLevelZero,
    #[error("cannot backtrack from decision level 0")]
    BacktrackAtLevelZero,
    #[error("clause {0} is not falsified by the trail")]
    NotFalsified(ClauseId),
    #[error("learned clause is not asserting at the current level")]
    NonAsserting,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Reason {
    Decision,
    Clause(ClauseId),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct TrailEntry {
    pub lit: Lit,
    pub level: usize,
    pub reason: Reason,
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct Stats {
    pub decisions: u64,
    pub propagations: u64,
    pub conflicts: u64,
    pub restarts: u64,
    pub learned: u64,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Propagation {
    NoConflict,
    Conflict(ClauseId),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LearnedClause {
    pub id: ClauseId,
    /// 1UIP: asserting literal first, the rest by variable index.
    /// WDLS: negated decisions in trail order.
    pub lits: Vec<Lit>,
    pub asserting: Lit,
    pub backjump_level: usize,
    /// Conflict clause variables plus every variable resolved over.
    pub conflict_side: Vec<Var>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
enum Status {
    Satisfied,
    Falsified,
    Unit(Lit),
    Open,
}

/// Trail, clause database and counters of one search. Original clauses keep
/// their formula indices; learned clauses are appended behind them.
pub struct SolverState<'s> {
    num_vars: usize,
    num_original: usize,
    clauses: Vec<Vec<Lit>>,
    /// Per literal code: watching clause and a blocker literal from it.
    watches: Vec<Vec<(ClauseId, Lit)>>,
    short: Vec<ClauseId>,
    values: Vec<Option<bool>>,
    levels: Vec<usize>,
    reasons: Vec<Option<ClauseId>>,
    saved_phase: Vec<Option<bool>>,
    trail: Vec<TrailEntry>,
    level_starts: Vec<usize>,
    flipped: Vec<bool>,
    pending: BinaryHeap<Reverse<ClauseId>>,
    qhead: usize,
    mode: PropagationMode,
    seen: Vec<bool>,
    sink: Option<&'s mut dyn TraceSink>,
    pub stats: Stats,
    pub rng: ChaCha8Rng,
}

impl SolverState<'static> {
    pub fn new(formula: &CnfFormula, seed: u64) -> SolverState<'static> {
        SolverState::build(formula, seed, PropagationMode::Watched, None)
    }
}

impl<'s> SolverState<'s> {
    pub fn with_sink(
        formula: &CnfFormula,
        seed: u64,
        mode: PropagationMode,
        sink: Option<&'s mut dyn TraceSink>,
    ) -> SolverState<'s> {
        SolverState::build(formula, seed, mode, sink)
    }

    fn build(
        formula: &CnfFormula,
        seed: u64,
        mode: PropagationMode,
        sink: Option<&'s mut dyn TraceSink>,
    ) -> SolverState<'s> {
        let n = formula.num_variables();
        let mut state = SolverState {
            num_vars: n,
            num_original: formula.len(),
            clauses: Vec::with_capacity(formula.len()),
            watches: vec![Vec::new(); 2 * n + 2],
            short: Vec::new(),
            values: vec![None; n + 1],
            levels: vec![0; n + 1],
            reasons: vec![None; n + 1],
            saved_phase: vec![None; n + 1],
            trail: Vec::with_capacity(n),
            level_starts: Vec::new(),
            flipped: Vec::new(),
            pending: BinaryHeap::new(),
            qhead: 0,
            mode,
            seen: vec![false; n + 1],
            sink,
            stats: Stats::default(),
            rng: ChaCha8Rng::seed_from_u64(seed),
        };
        for c in formula.clauses() {
            state.add_clause(c.lits().to_vec());
        }
        state
    }

    fn emit(&mut self, event: impl FnOnce() -> TraceEvent) {
        if let Some(sink) = self.sink.as_deref_mut() {
            sink.event(&event());
        }
    }

    pub fn tracing(&self) -> bool {
        self.sink.is_some()
    }

    fn add_clause(&mut self, lits: Vec<Lit>) -> ClauseId {
        let id = self.clauses.len();
        if lits.len() >= 2 {
            self.watches[lits[0].code()].push((id, lits[1]));
            self.watches[lits[1].code()].push((id, lits[0]));
        } else {
            self.short.push(id);
        }
        self.clauses.push(lits);
        self.pending.push(Reverse(id));
        id
    }

    pub fn num_variables(&self) -> usize {
        self.num_vars
    }

    pub fn num_original(&self) -> usize {
        self.num_original
    }

    pub fn num_clauses(&self) -> usize {
        self.clauses.len()
    }

    /// Literals of a database clause. Watched propagation may reorder them.
    pub fn clause(&self, id: ClauseId) -> &[Lit] {
        &self.clauses[id]
    }

    pub fn learned_clauses(&self) -> &[Vec<Lit>] {
        &self.clauses[self.num_original..]
    }

    pub fn value(&self, var: Var) -> Option<bool> {
        self.values[var.index()]
    }

    pub fn lit_value(&self, lit: Lit) -> Option<bool> {
        self.values[lit.var().index()].map(|v| lit.eval(v))
    }

    pub fn is_assigned(&self, var: Var) -> bool {
        self.values[var.index()].is_some()
    }

    pub fn level_of(&self, var: Var) -> Option<usize> {
        self.values[var.index()].map(|_| self.levels[var.index()])
    }

    pub fn saved_phase(&self, var: Var) -> Option<bool> {
        self.saved_phase[var.index()]
    }

    pub fn trail(&self) -> &[TrailEntry] {
        &self.trail
    }

    pub fn decision_level(&self) -> usize {
        self.level_starts.len()
    }

    pub fn all_assigned(&self) -> bool {
        self.trail.len() == self.num_vars
    }

    pub fn decisions_on_trail(&self) -> Vec<Lit> {
        self.level_starts.iter().map(|&i| self.trail[i].lit).collect()
    }

    /// Assignment indexed by variable; slot 0 unused, unassigned reads false.
    pub fn model(&self) -> Vec<bool> {
        self.values.iter().map(|v| v.unwrap_or(false)).collect()
    }

    fn status(&self, id: ClauseId) -> Status {
        let mut free = None;
        let mut count = 0;
        for &l in &self.clauses[id] {
            match self.lit_value(l) {
                Some(true) => return Status::Satisfied,
                Some(false) => {}
                None => {
                    count += 1;
                    free = Some(l);
                }
            }
        }
        match (count, free) {
            (0, _) => Status::Falsified,
            (1, Some(l)) => Status::Unit(l),
            _ => Status::Open,
        }
    }

    fn assign(&mut self, lit: Lit, reason: Reason) {
        let v = lit.var().index();
        debug_assert!(self.values[v].is_none());
        self.values[v] = Some(lit.is_positive());
        self.levels[v] = self.decision_level();
        self.reasons[v] = match reason {
            Reason::Decision => None,
            Reason::Clause(c) => Some(c),
        };
        self.trail.push(TrailEntry { lit, level: self.decision_level(), reason });
    }

    /// Visits the clauses watching `false_lit`, moving watches where possible
    /// and queueing the clauses that became unit or falsified.
    fn process_watches(&mut self, false_lit: Lit) {
        let mut list = std::mem::take(&mut self.watches[false_lit.code()]);
        let values = &self.values;
        let val = |l: Lit| values[l.var().index()].map(|v| l.eval(v));
        let mut i = 0;
        while i < list.len() {
            let (id, blocker) = list[i];
            if val(blocker) == Some(true) {
                i += 1;
                continue;
            }
            let c = &mut self.clauses[id];
            if c[0] == false_lit {
                c.swap(0, 1);
            }
            if val(c[0]) == Some(true) {
                list[i].1 = c[0];
                i += 1;
                continue;
            }
            if let Some(k) = (2..c.len()).find(|&k| val(c[k]) != Some(false)) {
                c.swap(1, k);
                self.watches[c[1].code()].push((id, c[0]));
                list.swap_remove(i);
                continue;
            }
            self.pending.push(Reverse(id));
            i += 1;
        }
        self.watches[false_lit.code()] = list;
    }

    /// Unit propagation to saturation. The unit or falsified clause with the
    /// lowest database index is always handled first.
    pub fn propagate(&mut self) -> Propagation {
        let result = match self.mode {
            PropagationMode::Watched => self.propagate_watched(),
            PropagationMode::Scan => self.propagate_scan(),
        };
        if let Propagation::Conflict(clause) = result {
            self.emit(|| TraceEvent::Conflict { clause });
        }
        result
    }

    fn propagate_watched(&mut self) -> Propagation {
        loop {
            while self.qhead < self.trail.len() {
                let lit = self.trail[self.qhead].lit;
                self.qhead += 1;
                self.process_watches(!lit);
            }
            let Some(Reverse(id)) = self.pending.pop() else {
                return Propagation::NoConflict;
            };
            match self.status(id) {
                Status::Unit(l) => self.propagate_lit(l, id),
                Status::Falsified => {
                    self.pending.push(Reverse(id));
                    return Propagation::Conflict(id);
                }
                Status::Satisfied | Status::Open => {}
            }
        }
    }

    fn propagate_scan(&mut self) -> Propagation {
        'rescan: loop {
            for id in 0..self.clauses.len() {
                match self.status(id) {
                    Status::Unit(l) => {
                        self.propagate_lit(l, id);
                        continue 'rescan;
                    }
                    Status::Falsified => return Propagation::Conflict(id),
                    Status::Satisfied | Status::Open => {}
                }
            }
            self.qhead = self.trail.len();
            return Propagation::NoConflict;
        }
    }

    fn propagate_lit(&mut self, lit: Lit, reason: ClauseId) {
        self.assign(lit, Reason::Clause(reason));
        self.stats.propagations += 1;
        self.emit(|| TraceEvent::Propagate {
            var: lit.var(),
            value: lit.is_positive(),
            reason,
        });
    }

    pub fn decide(&mut self, var: Var, value: bool) -> Result<(), EngineError> {
        self.open_level(var, value, false)
    }

    /// Re-decides the opposite branch of an exhausted DPLL decision.
    pub(crate) fn decide_flipped(&mut self, var: Var, value: bool) -> Result<(), EngineError> {
        self.open_level(var, value, true)
    }

    fn open_level(&mut self, var: Var, value: bool, flipped: bool) -> Result<(), EngineError> {
        if var.index() == 0 || var.index() > self.num_vars {
            return Err(EngineError::VariableOutOfRange(var));
        }
        if self.is_assigned(var) {
            return Err(EngineError::AlreadyAssigned(var));
        }
        self.level_starts.push(self.trail.len());
        self.flipped.push(flipped);
        self.assign(var.lit(value), Reason::Decision);
        self.stats.decisions += 1;
        let level = self.decision_level();
        self.emit(|| TraceEvent::Decide { var, value, level });
        Ok(())
    }

    /// Highest level whose decision has not been flipped yet.
    pub(crate) fn highest_unflipped_level(&self) -> Option<usize> {
        (1..=self.decision_level()).rev().find(|&l| !self.flipped[l - 1])
    }

    pub(crate) fn decision_at(&self, level: usize) -> Lit {
        self.trail[self.level_starts[level - 1]].lit
    }

    fn unwind(&mut self, level: usize) {
        if level >= self.decision_level() {
            return;
        }
        let start = self.level_starts[level];
        for e in self.trail.drain(start..) {
            // A reason asserted above the level of its other literals (T
            // backtracking over a learned clause) turns unit again here.
            if let Reason::Clause(r) = e.reason {
                self.pending.push(Reverse(r));
            }
            let v = e.lit.var().index();
            self.saved_phase[v] = self.values[v];
            self.values[v] = None;
            self.reasons[v] = None;
        }
        self.level_starts.truncate(level);
        self.flipped.truncate(level);
        self.qhead = self.qhead.min(self.trail.len());
        for &id in &self.short {
            self.pending.push(Reverse(id));
        }
    }

    pub fn backtrack_to(&mut self, level: usize) {
        self.unwind(level);
        self.emit(|| TraceEvent::Backtrack { level });
    }

    /// Undoes the most recent decision level.
    pub fn backtrack_step(&mut self) -> Result<(), EngineError> {
        match self.decision_level() {
            0 => Err(EngineError::BacktrackAtLevelZero),
            l => {
                self.backtrack_to(l - 1);
                Ok(())
            }
        }
    }

    /// Jumps to the second-highest level of `learned` (0 for unit clauses).
    pub fn backjump(&mut self, learned: &LearnedClause) -> Result<(), EngineError> {
        let top = self.decision_level();
        let mut at_top = 0;
        let mut second = 0;
        for &l in &learned.lits {
            if self.lit_value(l) != Some(false) {
                return Err(EngineError::NonAsserting);
            }
            match self.levels[l.var().index()] {
                lv if lv == top => at_top += 1,
                lv => second = second.max(lv),
            }
        }
        if at_top != 1 || top == 0 {
            return Err(EngineError::NonAsserting);
        }
        self.backtrack_to(second);
        self.pending.push(Reverse(learned.id));
        Ok(())
    }

    pub fn restart(&mut self) {
        self.unwind(0);
        self.stats.restarts += 1;
        self.emit(|| TraceEvent::Restart);
    }

    pub fn analyze_conflict(
        &mut self,
        conflict: ClauseId,
        scheme: LearningScheme,
    ) -> Result<LearnedClause, EngineError> {
        if self.decision_level() == 0 {
            return Err(EngineError::ConflictAtLevelZero);
        }
        if self.status(conflict) != Status::Falsified {
            return Err(EngineError::NotFalsified(conflict));
        }
        let (lits, asserting, conflict_side) = match scheme {
            LearningScheme::FirstUip => self.first_uip(conflict),
            LearningScheme::Wdls | LearningScheme::None => self.wdls(conflict),
        };
        let backjump_level = lits
            .iter()
            .filter(|&&l| l != asserting)
            .map(|l| self.levels[l.var().index()])
            .max()
            .unwrap_or(0);

        let mut stored = lits.clone();
        let a = stored.iter().position(|&l| l == asserting).unwrap_or(0);
        stored.swap(0, a);
        if stored.len() > 1 {
            let (b, _) = stored[1..]
                .iter()
                .enumerate()
                .max_by_key(|(i, l)| (self.levels[l.var().index()], Reverse(*i)))
                .unwrap();
            stored.swap(1, b + 1);
        }
        let id = self.add_clause(stored);
        self.stats.conflicts += 1;
        self.stats.learned += 1;
        if self.tracing() {
            let lits = lits.clone();
            self.emit(|| TraceEvent::Learn { lits });
        }
        Ok(LearnedClause { id, lits, asserting, backjump_level, conflict_side })
    }

    fn first_uip(&mut self, conflict: ClauseId) -> (Vec<Lit>, Lit, Vec<Var>) {
        let top = self.decision_level();
        let mut side: Vec<Var> = self.clauses[conflict].iter().map(|l| l.var()).collect();
        let mut marked: Vec<Var> = Vec::new();
        let mut others: Vec<Lit> = Vec::new();
        let mut open = 0usize;
        let mut idx = self.trail.len();
        let mut clause = conflict;
        let mut pivot: Option<Var> = None;
        let uip = loop {
            for k in 0..self.clauses[clause].len() {
                let l = self.clauses[clause][k];
                let v = l.var();
                if Some(v) == pivot || self.seen[v.index()] {
                    continue;
                }
                let lv = self.levels[v.index()];
                if lv == 0 {
                    continue;
                }
                self.seen[v.index()] = true;
                marked.push(v);
                if lv == top {
                    open += 1;
                } else {
                    others.push(l);
                }
            }
            let entry = loop {
                idx -= 1;
                let e = self.trail[idx];
                if self.seen[e.lit.var().index()] && e.level == top {
                    break e;
                }
            };
            open -= 1;
            if open == 0 {
                break !entry.lit;
            }
            let v = entry.lit.var();
            side.push(v);
            pivot = Some(v);
            clause = self.reasons[v.index()].expect("non-decision literal at conflict level");
        };
        for v in marked {
            self.seen[v.index()] = false;
        }
        others.sort_by_key(|l| l.var());
        let mut lits = Vec::with_capacity(others.len() + 1);
        lits.push(uip);
        lits.extend(others);
        side.sort();
        side.dedup();
        (lits, uip, side)
    }

    fn wdls(&self, conflict: ClauseId) -> (Vec<Lit>, Lit, Vec<Var>) {
        let lits: Vec<Lit> = self.decisions_on_trail().into_iter().map(|l| !l).collect();
        let asserting = *lits.last().expect("level >= 1");
        let mut side: Vec<Var> = self.clauses[conflict]
            .iter()
            .map(|l| l.var())
            .chain(lits.iter().map(|l| l.var()))
            .collect();
        side.sort();
        side.dedup();
        (lits, asserting, side)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cnf::CnfFormula;

    fn f(n: usize, clauses: &[&[i64]]) -> CnfFormula {
        CnfFormula::from_dimacs_clauses(n, clauses).unwrap()
    }

    fn v(i: usize) -> Var {
        Var::new(i)
    }

    #[test]
    fn unit_clause_propagates_at_level_zero() {
        let formula = f(1, &[&[1]]);
        let mut s = SolverState::new(&formula, 0);
        assert_eq!(s.propagate(), Propagation::NoConflict);
        assert_eq!(
            s.trail(),
            &[TrailEntry { lit: v(1).positive(), level: 0, reason: Reason::Clause(0) }]
        );
    }

    #[test]
    fn forced_chain_ends_in_conflict() {
        let formula = f(2, &[&[1], &[-1, 2], &[-2, -1]]);
        let mut s = SolverState::new(&formula, 0);
        assert_eq!(s.propagate(), Propagation::Conflict(2));
        let lits: Vec<Lit> = s.trail().iter().map(|e| e.lit).collect();
        assert_eq!(lits, vec![v(1).positive(), v(2).positive()]);
    }

    #[test]
    fn lowest_index_unit_wins() {
        // After x1, clauses 1 and 2 are both unit on x2 with opposite signs.
        let formula = f(2, &[&[1], &[-1, -2], &[-1, 2]]);
        let mut s = SolverState::new(&formula, 0);
        assert_eq!(s.propagate(), Propagation::Conflict(2));
        assert_eq!(s.trail()[1].reason, Reason::Clause(1));
    }

    #[test]
    fn decisions_open_levels() {
        let formula = f(3, &[&[-1, 2], &[-2, 3]]);
        let mut s = SolverState::new(&formula, 0);
        s.decide(v(1), true).unwrap();
        assert_eq!(s.trail()[0], TrailEntry { lit: v(1).positive(), level: 1, reason: Reason::Decision });
        s.propagate();
        assert!(s.trail().iter().all(|e| e.level == 1));
        assert_eq!(s.trail().len(), 3);
        assert_eq!(s.decide(v(2), false), Err(EngineError::AlreadyAssigned(v(2))));
        assert_eq!(s.stats.decisions, 1);
    }

    #[test]
    fn backtrack_step_removes_top_level() {
        let formula = f(3, &[&[-1, 2]]);
        let mut s = SolverState::new(&formula, 0);
        assert_eq!(s.backtrack_step(), Err(EngineError::BacktrackAtLevelZero));
        s.decide(v(1), true).unwrap();
        s.propagate();
        s.decide(v(3), false).unwrap();
        s.backtrack_step().unwrap();
        assert_eq!(s.trail().len(), 2);
        s.backtrack_step().unwrap();
        assert!(s.trail().is_empty());
        assert_eq!(s.stats.decisions, 2);
        assert_eq!(s.saved_phase(v(1)), Some(true));
        assert_eq!(s.saved_phase(v(3)), Some(false));
    }

    #[test]
    fn wdls_learns_negated_decisions() {
        let formula = f(2, &[&[-1, -2]]);
        let mut s = SolverState::new(&formula, 0);
        s.decide(v(1), true).unwrap();
        s.decide(v(2), true).unwrap();
        assert_eq!(s.propagate(), Propagation::Conflict(0));
        let learned = s.analyze_conflict(0, LearningScheme::Wdls).unwrap();
        assert_eq!(learned.lits, vec![v(1).negative(), v(2).negative()]);
        assert_eq!(learned.asserting, v(2).negative());
        assert_eq!(learned.backjump_level, 1);
        assert_eq!(s.stats.conflicts, 1);
    }

    #[test]
    fn first_uip_stops_at_the_first_asserting_clause() {
        // The conflict clause (¬x2) already has a single literal at level 1.
        let formula = f(2, &[&[-1, 2], &[-2]]);
        let mut s = SolverState::new(&formula, 0);
        s.decide(v(1), true).unwrap();
        let Propagation::Conflict(c) = s.propagate() else { panic!("expected conflict") };
        assert_eq!(c, 1);
        let learned = s.analyze_conflict(c, LearningScheme::FirstUip).unwrap();
        assert_eq!(learned.lits, vec![v(2).negative()]);
        assert_eq!(learned.backjump_level, 0);
    }

    #[test]
    fn first_uip_resolves_through_reasons() {
        let formula = f(3, &[&[-1, 2], &[-1, 3], &[-2, -3]]);
        let mut s = SolverState::new(&formula, 0);
        s.decide(v(1), true).unwrap();
        assert_eq!(s.propagate(), Propagation::Conflict(2));
        let learned = s.analyze_conflict(2, LearningScheme::FirstUip).unwrap();
        assert_eq!(learned.lits, vec![v(1).negative()]);
        assert_eq!(learned.conflict_side, vec![v(2), v(3)]);
        s.backjump(&learned).unwrap();
        assert_eq!(s.decision_level(), 0);
        s.propagate();
        let e = s.trail().iter().find(|e| e.lit.var() == v(1)).unwrap();
        assert_eq!(e.reason, Reason::Clause(learned.id));
        assert_eq!(e.lit, v(1).negative());
    }

    #[test]
    fn backjump_goes_to_second_highest_level() {
        // a=x1 @1, filler x3 @2..x5 @4, b=x2 @5; conflict (¬x1 ∨ ¬x2)
        let formula = f(5, &[&[-1, -2]]);
        let mut s = SolverState::new(&formula, 0);
        s.decide(v(1), true).unwrap();
        for i in 3..=5 {
            s.decide(v(i), true).unwrap();
        }
        s.decide(v(2), true).unwrap();
        let Propagation::Conflict(c) = s.propagate() else { panic!() };
        let learned = s.analyze_conflict(c, LearningScheme::FirstUip).unwrap();
        assert_eq!(learned.lits, vec![v(2).negative(), v(1).negative()]);
        s.backjump(&learned).unwrap();
        assert_eq!(s.decision_level(), 1);
        s.propagate();
        assert_eq!(s.value(v(2)), Some(false));
    }

    #[test]
    fn backjump_rejects_non_asserting() {
        let formula = f(3, &[&[-1, -2, -3]]);
        let mut s = SolverState::new(&formula, 0);
        s.decide(v(1), true).unwrap();
        s.decide(v(2), true).unwrap();
        s.decide(v(3), true).unwrap();
        let bogus = LearnedClause {
            id: 0,
            lits: vec![v(2).negative(), v(1).negative()],
            asserting: v(2).negative(),
            backjump_level: 1,
            conflict_side: vec![],
        };
        assert_eq!(s.backjump(&bogus), Err(EngineError::NonAsserting));
    }

    #[test]
    fn conflict_at_level_zero_is_reported() {
        let formula = f(1, &[&[1], &[-1]]);
        let mut s = SolverState::new(&formula, 0);
        assert_eq!(s.propagate(), Propagation::Conflict(1));
        assert_eq!(s.analyze_conflict(1, LearningScheme::FirstUip), Err(EngineError::ConflictAtLevelZero));
    }

    #[test]
    fn restart_keeps_learned_clauses() {
        let formula = f(2, &[&[-1, -2]]);
        let mut s = SolverState::new(&formula, 0);
        s.decide(v(1), true).unwrap();
        s.decide(v(2), true).unwrap();
        s.propagate();
        s.analyze_conflict(0, LearningScheme::FirstUip).unwrap();
        s.restart();
        assert!(s.trail().is_empty());
        assert_eq!(s.learned_clauses().len(), 1);
        assert_eq!(s.stats.restarts, 1);
    }
}

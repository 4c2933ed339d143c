//! Variables, literals, clauses, formulas and restrictions.

use std::fmt;
use std::ops::Not;

use thiserror::Error;

/// Largest number of variables a single XOR constraint may be expanded over.
pub const DEFAULT_XOR_DEGREE_CAP: usize = 16;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum CnfError {
    #[error("variable index must be at least 1")]
    ZeroVariable,
    #[error("literal {literal} exceeds the declared {num_variables} variables")]
    VariableOutOfRange { literal: i64, num_variables: usize },
    #[error("xor over {degree} variables exceeds the degree cap {cap}")]
    DegreeCapExceeded { degree: usize, cap: usize },
    #[error("xor constraint needs at least one variable")]
    EmptyXor,
}

/// A propositional variable. Indices start at 1.
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Var(u32);

impl Var {
    pub fn new(index: usize) -> Var {
        assert!(index >= 1, "variables are 1-based");
        Var(index as u32)
    }

    pub fn index(self) -> usize {
        self.0 as usize
    }

    pub fn positive(self) -> Lit {
        Lit::new(self, true)
    }

    pub fn negative(self) -> Lit {
        Lit::new(self, false)
    }

    pub fn lit(self, polarity: bool) -> Lit {
        Lit::new(self, polarity)
    }
}

impl fmt::Debug for Var {
    fn fmt(&self, f: &mut fmt::Formatter) -> fmt::Result {
        write!(f, "x{}", self.0)
    }
}

impl fmt::Display for Var {
    fn fmt(&self, f: &mut fmt::Formatter) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

/// A literal, encoded as `2 * var + negated`.
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Lit(u32);

impl Lit {
    pub fn new(var: Var, polarity: bool) -> Lit {
        Lit((var.0 << 1) | (!polarity) as u32)
    }

    /// Builds a literal from a signed DIMACS integer.
    pub fn from_dimacs(value: i64) -> Result<Lit, CnfError> {
        if value == 0 {
            return Err(CnfError::ZeroVariable);
        }
        Ok(Lit::new(Var::new(value.unsigned_abs() as usize), value > 0))
    }

    pub fn to_dimacs(self) -> i64 {
        let v = self.var().index() as i64;
        if self.is_positive() {
            v
        } else {
            -v
        }
    }

    pub fn var(self) -> Var {
        Var(self.0 >> 1)
    }

    pub fn is_positive(self) -> bool {
        self.0 & 1 == 0
    }

    /// Dense code usable as an index into per-literal tables.
    pub fn code(self) -> usize {
        self.0 as usize
    }

    /// Value of this literal under an assignment of its variable.
    pub fn eval(self, value: bool) -> bool {
        value == self.is_positive()
    }
}

impl Not for Lit {
    type Output = Lit;

    fn not(self) -> Lit {
        Lit(self.0 ^ 1)
    }
}

impl fmt::Debug for Lit {
    fn fmt(&self, f: &mut fmt::Formatter) -> fmt::Result {
        write!(f, "{}", self.to_dimacs())
    }
}

impl fmt::Display for Lit {
    fn fmt(&self, f: &mut fmt::Formatter) -> fmt::Result {
        write!(f, "{}", self.to_dimacs())
    }
}

/// A disjunction of literals. Duplicate literals are dropped on construction,
/// keeping the first occurrence.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Clause {
    lits: Vec<Lit>,
    tautological: bool,
}

impl Clause {
    pub fn new(lits: impl IntoIterator<Item = Lit>) -> Clause {
        let mut out: Vec<Lit> = Vec::new();
        for lit in lits {
            if !out.contains(&lit) {
                out.push(lit);
            }
        }
        let tautological = out.iter().any(|&l| out.contains(&!l));
        Clause {
            lits: out,
            tautological,
        }
    }

    pub fn from_dimacs(values: &[i64]) -> Result<Clause, CnfError> {
        let lits = values
            .iter()
            .map(|&v| Lit::from_dimacs(v))
            .collect::<Result<Vec<_>, _>>()?;
        Ok(Clause::new(lits))
    }

    pub fn lits(&self) -> &[Lit] {
        &self.lits
    }

    pub fn len(&self) -> usize {
        self.lits.len()
    }

    pub fn is_empty(&self) -> bool {
        self.lits.is_empty()
    }

    /// True when the clause contains both `x` and `¬x` for some variable.
    pub fn is_tautological(&self) -> bool {
        self.tautological
    }

    pub fn max_var(&self) -> usize {
        self.lits.iter().map(|l| l.var().index()).max().unwrap_or(0)
    }

    /// Whether a total assignment (indexed by variable, slot 0 unused) satisfies the clause.
    pub fn satisfied_by(&self, assignment: &[bool]) -> bool {
        self.lits.iter().any(|l| l.eval(assignment[l.var().index()]))
    }
}

impl fmt::Debug for Clause {
    fn fmt(&self, f: &mut fmt::Formatter) -> fmt::Result {
        f.debug_list().entries(self.lits.iter()).finish()
    }
}

/// A CNF formula. Clause order is the clause database order seen by the solver.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct CnfFormula {
    num_variables: usize,
    clauses: Vec<Clause>,
}

impl CnfFormula {
    pub fn new(num_variables: usize) -> CnfFormula {
        CnfFormula {
            num_variables,
            clauses: Vec::new(),
        }
    }

    pub fn from_clauses(
        num_variables: usize,
        clauses: impl IntoIterator<Item = Clause>,
    ) -> Result<CnfFormula, CnfError> {
        let mut formula = CnfFormula::new(num_variables);
        for clause in clauses {
            formula.push(clause)?;
        }
        Ok(formula)
    }

    /// Builds a formula from DIMACS-style integer clauses; mainly for tests.
    pub fn from_dimacs_clauses(
        num_variables: usize,
        clauses: &[&[i64]],
    ) -> Result<CnfFormula, CnfError> {
        let mut formula = CnfFormula::new(num_variables);
        for c in clauses {
            formula.push(Clause::from_dimacs(c)?)?;
        }
        Ok(formula)
    }

    pub fn num_variables(&self) -> usize {
        self.num_variables
    }

    pub fn clauses(&self) -> &[Clause] {
        &self.clauses
    }

    pub fn len(&self) -> usize {
        self.clauses.len()
    }

    pub fn is_empty(&self) -> bool {
        self.clauses.is_empty()
    }

    pub fn push(&mut self, clause: Clause) -> Result<(), CnfError> {
        if let Some(bad) = clause
            .lits()
            .iter()
            .find(|l| l.var().index() > self.num_variables)
        {
            return Err(CnfError::VariableOutOfRange {
                literal: bad.to_dimacs(),
                num_variables: self.num_variables,
            });
        }
        self.clauses.push(clause);
        Ok(())
    }

    pub fn variables(&self) -> impl Iterator<Item = Var> {
        (1..=self.num_variables).map(Var::new)
    }

    /// Whether a total assignment (slot 0 unused) satisfies every clause.
    pub fn satisfied_by(&self, assignment: &[bool]) -> bool {
        self.clauses.iter().all(|c| c.satisfied_by(assignment))
    }
}

/// A partial assignment `π : vars → {0, 1, *}`.
#[derive(Clone, PartialEq, Eq)]
pub struct Restriction {
    values: Vec<Option<bool>>,
}

impl Restriction {
    /// All variables unassigned.
    pub fn unassigned(num_variables: usize) -> Restriction {
        Restriction {
            values: vec![None; num_variables + 1],
        }
    }

    pub fn num_variables(&self) -> usize {
        self.values.len() - 1
    }

    pub fn get(&self, var: Var) -> Option<bool> {
        self.values[var.index()]
    }

    pub fn set(&mut self, var: Var, value: Option<bool>) {
        self.values[var.index()] = value;
    }

    pub fn with(mut self, var: Var, value: bool) -> Restriction {
        self.set(var, Some(value));
        self
    }

    pub fn lit_value(&self, lit: Lit) -> Option<bool> {
        self.get(lit.var()).map(|v| lit.eval(v))
    }

    pub fn assigned_count(&self) -> usize {
        self.values[1..].iter().filter(|v| v.is_some()).count()
    }
}

impl fmt::Debug for Restriction {
    fn fmt(&self, f: &mut fmt::Formatter) -> fmt::Result {
        let s: String = self.values[1..]
            .iter()
            .map(|v| match v {
                Some(true) => '1',
                Some(false) => '0',
                None => '*',
            })
            .collect();
        write!(f, "π[{s}]")
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum RestrictStatus {
    FalsifiedClausePresent,
    NoFalsifiedClause,
}

/// Computes `F[π]`: satisfied clauses are removed and falsified literals are
/// dropped from the remaining ones. Variable indices are kept as-is.
pub fn restrict(formula: &CnfFormula, pi: &Restriction) -> (CnfFormula, RestrictStatus) {
    let mut out = CnfFormula::new(formula.num_variables());
    let mut status = RestrictStatus::NoFalsifiedClause;
    for clause in formula.clauses() {
        if clause.lits().iter().any(|&l| pi.lit_value(l) == Some(true)) {
            continue;
        }
        let kept: Vec<Lit> = clause
            .lits()
            .iter()
            .copied()
            .filter(|&l| pi.lit_value(l).is_none())
            .collect();
        if kept.is_empty() {
            status = RestrictStatus::FalsifiedClausePresent;
        }
        out.clauses.push(Clause::new(kept));
    }
    (out, status)
}

/// Expands `⊕ vars = parity` into the 2^(d-1) clauses that each rule out one
/// violating assignment, using the default degree cap.
pub fn xor_to_cnf(vars: &[Var], parity: bool) -> Result<Vec<Clause>, CnfError> {
    xor_to_cnf_capped(vars, parity, DEFAULT_XOR_DEGREE_CAP)
}

pub fn xor_to_cnf_capped(vars: &[Var], parity: bool, cap: usize) -> Result<Vec<Clause>, CnfError> {
    let d = vars.len();
    if d == 0 {
        return Err(CnfError::EmptyXor);
    }
    if d > cap {
        return Err(CnfError::DegreeCapExceeded { degree: d, cap });
    }
    let mut clauses = Vec::with_capacity(1 << (d - 1));
    for bits in 0u32..(1u32 << d) {
        // Bit i of `bits` is the value of vars[i]; keep only violating assignments.
        if ((bits.count_ones() & 1) == 1) == parity {
            continue;
        }
        let lits = vars
            .iter()
            .enumerate()
            .map(|(i, &v)| v.lit(bits >> i & 1 == 0));
        clauses.push(Clause::new(lits));
    }
    Ok(clauses)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn v(i: usize) -> Var {
        Var::new(i)
    }

    #[test]
    fn negation_is_an_involution() {
        let l = v(7).negative();
        assert_eq!(!!l, l);
        assert_eq!((!l).to_dimacs(), 7);
        assert_eq!(l.var(), v(7));
    }

    #[test]
    fn duplicate_literals_are_dropped_and_tautologies_flagged() {
        let c = Clause::from_dimacs(&[1, 2, 1, -3]).unwrap();
        assert_eq!(c.lits().iter().map(|l| l.to_dimacs()).collect::<Vec<_>>(), [1, 2, -3]);
        assert!(!c.is_tautological());
        assert!(Clause::from_dimacs(&[1, -1]).unwrap().is_tautological());
    }

    #[test]
    fn push_rejects_out_of_range_literals() {
        let mut f = CnfFormula::new(2);
        assert!(matches!(
            f.push(Clause::from_dimacs(&[3]).unwrap()),
            Err(CnfError::VariableOutOfRange { literal: 3, .. })
        ));
    }

    #[test]
    fn restrict_removes_satisfied_clauses() {
        let f = CnfFormula::from_dimacs_clauses(2, &[&[1, 2]]).unwrap();
        let pi = Restriction::unassigned(2).with(v(1), true);
        let (g, status) = restrict(&f, &pi);
        assert!(g.is_empty());
        assert_eq!(status, RestrictStatus::NoFalsifiedClause);
    }

    #[test]
    fn restrict_drops_falsified_literals() {
        let f = CnfFormula::from_dimacs_clauses(2, &[&[1, 2]]).unwrap();
        let pi = Restriction::unassigned(2).with(v(1), false);
        let (g, _) = restrict(&f, &pi);
        assert_eq!(g.clauses(), &[Clause::from_dimacs(&[2]).unwrap()]);
        assert_eq!(g.num_variables(), 2);
    }

    #[test]
    fn restrict_reports_empty_clause() {
        let f = CnfFormula::from_dimacs_clauses(2, &[&[1], &[-1, 2]]).unwrap();
        let pi = Restriction::unassigned(2).with(v(1), false);
        assert_eq!(restrict(&f, &pi).1, RestrictStatus::FalsifiedClausePresent);
    }

    #[test]
    fn xor_of_two_variables() {
        let odd = xor_to_cnf(&[v(1), v(2)], true).unwrap();
        let want_odd = [Clause::from_dimacs(&[1, 2]).unwrap(), Clause::from_dimacs(&[-1, -2]).unwrap()];
        assert_eq!(odd.len(), 2);
        assert!(want_odd.iter().all(|c| odd.contains(c)));

        let even = xor_to_cnf(&[v(1), v(2)], false).unwrap();
        let want_even = [Clause::from_dimacs(&[1, -2]).unwrap(), Clause::from_dimacs(&[-1, 2]).unwrap()];
        assert!(want_even.iter().all(|c| even.contains(c)));
    }

    #[test]
    fn xor_of_three_variables_rules_out_each_even_assignment_once() {
        let clauses = xor_to_cnf(&[v(1), v(2), v(3)], true).unwrap();
        assert_eq!(clauses.len(), 4);
        // Enumerate all 8 assignments; each even one falsifies exactly one clause.
        for bits in 0u32..8 {
            let a = [false, bits & 1 != 0, bits & 2 != 0, bits & 4 != 0];
            let falsified = clauses.iter().filter(|c| !c.satisfied_by(&a)).count();
            let even = bits.count_ones() % 2 == 0;
            assert_eq!(falsified, even as usize, "assignment {bits:03b}");
        }
    }

    #[test]
    fn xor_degree_cap() {
        let vars: Vec<Var> = (1..=17).map(v).collect();
        assert_eq!(
            xor_to_cnf(&vars, true),
            Err(CnfError::DegreeCapExceeded { degree: 17, cap: 16 })
        );
        assert_eq!(xor_to_cnf(&[], true), Err(CnfError::EmptyXor));
    }
}

//! Reference implementations that share no code with the engine.

use crate::cnf::{CnfFormula, Lit, Restriction, Var};

use super::VerifyError;

pub const BRUTE_FORCE_CAP: usize = 26;

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum BruteForce {
    /// Indexed by variable; slot 0 unused.
    Sat(Vec<bool>),
    Unsat,
}

impl BruteForce {
    pub fn is_sat(&self) -> bool {
        matches!(self, BruteForce::Sat(_))
    }
}

/// Truth-table verdict. Assignments are visited in lexicographic order with
/// `x1` most significant, so the model returned is the first one in that
/// order. Subtrees are skipped as soon as a clause is fully assigned and
/// false, which never changes the verdict or the model.
pub fn brute_force_sat(formula: &CnfFormula) -> Result<BruteForce, VerifyError> {
    let n = formula.num_variables();
    if n > BRUTE_FORCE_CAP {
        return Err(VerifyError::TooManyVariables { num_variables: n, cap: BRUTE_FORCE_CAP });
    }
    // Clauses become fully assigned exactly when their largest variable is.
    let mut closing: Vec<Vec<&[Lit]>> = vec![Vec::new(); n + 1];
    for c in formula.clauses() {
        if c.is_tautological() {
            continue;
        }
        closing[c.max_var()].push(c.lits());
    }
    if !closing[0].is_empty() {
        return Ok(BruteForce::Unsat);
    }
    let mut a = vec![false; n + 1];
    let violated = |a: &[bool], v: usize| {
        closing[v]
            .iter()
            .any(|c| c.iter().all(|l| !l.eval(a[l.var().index()])))
    };
    // Depth-first over x1..xn, value 0 before 1.
    let mut depth = 1;
    let mut tried_one = vec![false; n + 2];
    if n == 0 {
        return Ok(BruteForce::Sat(a));
    }
    a[1] = false;
    loop {
        if !violated(&a, depth) {
            if depth == n {
                return Ok(BruteForce::Sat(a));
            }
            depth += 1;
            a[depth] = false;
            tried_one[depth] = false;
            continue;
        }
        // advance to the next sibling, climbing while both values are spent
        loop {
            if !tried_one[depth] {
                tried_one[depth] = true;
                a[depth] = true;
                break;
            }
            depth -= 1;
            if depth == 0 {
                return Ok(BruteForce::Unsat);
            }
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum NaiveOutcome {
    Conflict,
    Fixpoint(Restriction),
}

/// Unit propagation by repeated full passes until nothing changes.
pub fn naive_propagate(formula: &CnfFormula, start: &Restriction) -> NaiveOutcome {
    let mut pi = start.clone();
    loop {
        let mut changed = false;
        for c in formula.clauses() {
            let mut free = None;
            let mut open = 0;
            let mut sat = false;
            for &l in c.lits() {
                match pi.lit_value(l) {
                    Some(true) => {
                        sat = true;
                        break;
                    }
                    Some(false) => {}
                    None => {
                        open += 1;
                        free = Some(l);
                    }
                }
            }
            if sat {
                continue;
            }
            match (open, free) {
                (0, _) => return NaiveOutcome::Conflict,
                (1, Some(l)) => {
                    pi.set(l.var(), Some(l.is_positive()));
                    changed = true;
                }
                _ => {}
            }
        }
        if !changed {
            return NaiveOutcome::Fixpoint(pi);
        }
    }
}

/// Restriction assigning `vars[i]` to bit `i` of `bits`.
pub(crate) fn assignment(num_vars: usize, vars: &[Var], bits: u64) -> Restriction {
    let mut pi = Restriction::unassigned(num_vars);
    for (i, &v) in vars.iter().enumerate() {
        pi.set(v, Some(bits >> i & 1 == 1));
    }
    pi
}

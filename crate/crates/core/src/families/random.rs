use rand::seq::index::sample;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::cnf::{Clause, CnfFormula, Var};

use super::GenError;

/// `num_clauses` clauses over `k` distinct variables each, signs uniform.
pub fn random_k_cnf(num_vars: usize, num_clauses: usize, k: usize, seed: u64) -> Result<CnfFormula, GenError> {
    if k == 0 || k > num_vars {
        return Err(GenError::InvalidParams(format!("clause width {k} for {num_vars} variables")));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut f = CnfFormula::new(num_vars);
    for _ in 0..num_clauses {
        let vars = sample(&mut rng, num_vars, k);
        let lits: Vec<_> = vars.iter().map(|i| Var::new(i + 1).lit(rng.gen())).collect();
        f.push(Clause::new(lits))?;
    }
    Ok(f)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn shape_and_determinism() {
        let a = random_k_cnf(10, 43, 3, 5).unwrap();
        assert_eq!(a.len(), 43);
        assert!(a.clauses().iter().all(|c| c.len() == 3 && !c.is_tautological()));
        assert_eq!(a.clauses(), random_k_cnf(10, 43, 3, 5).unwrap().clauses());
        assert!(random_k_cnf(2, 1, 3, 0).is_err());
    }
}

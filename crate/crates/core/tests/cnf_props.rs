use proptest::prelude::*;
use restartlab_core::cnf::{restrict, xor_to_cnf, Clause, CnfFormula, Lit, RestrictStatus, Restriction, Var};
use restartlab_core::dimacs::{parse_dimacs, write_dimacs};

fn formula_strategy(max_vars: usize, max_clauses: usize) -> impl Strategy<Value = CnfFormula> {
    (1..=max_vars).prop_flat_map(move |n| {
        let lit = (1..=n as i64, any::<bool>()).prop_map(|(v, s)| if s { v } else { -v });
        let clause = prop::collection::vec(lit, 1..=4);
        prop::collection::vec(clause, 0..=max_clauses).prop_map(move |cs| {
            let refs: Vec<&[i64]> = cs.iter().map(Vec::as_slice).collect();
            CnfFormula::from_dimacs_clauses(n, &refs).unwrap()
        })
    })
}

fn assignment(n: usize, bits: u32) -> Vec<bool> {
    (0..=n).map(|v| v > 0 && bits >> (v - 1) & 1 == 1).collect()
}

proptest! {
    #[test]
    fn dimacs_round_trips(f in formula_strategy(12, 30)) {
        let text = write_dimacs(&f, &["generated"]);
        let back = parse_dimacs(&text).unwrap();
        prop_assert_eq!(back.num_variables(), f.num_variables());
        prop_assert_eq!(back.clauses(), f.clauses());
    }

    #[test]
    fn restriction_preserves_extensions(
        f in formula_strategy(8, 20),
        mask in any::<u32>(),
        vals in any::<u32>(),
    ) {
        let n = f.num_variables();
        let mut pi = Restriction::unassigned(n);
        for v in 1..=n {
            if mask >> (v - 1) & 1 == 1 {
                pi.set(Var::new(v), Some(vals >> (v - 1) & 1 == 1));
            }
        }
        let (g, status) = restrict(&f, &pi);
        if status == RestrictStatus::FalsifiedClausePresent {
            prop_assert!(g.clauses().iter().any(Clause::is_empty));
        }
        // Every total assignment consistent with π satisfies F iff it satisfies F[π].
        for bits in 0u32..(1 << n) {
            let a = assignment(n, bits);
            let consistent = (1..=n).all(|v| pi.get(Var::new(v)).is_none_or(|b| b == a[v]));
            if consistent {
                prop_assert_eq!(f.satisfied_by(&a), g.satisfied_by(&a));
            }
        }
        for c in g.clauses() {
            prop_assert!(c.lits().iter().all(|l| pi.get(l.var()).is_none()));
        }
    }

    #[test]
    fn xor_expansion_matches_parity(d in 1usize..=10, parity in any::<bool>()) {
        let vars: Vec<Var> = (1..=d).map(Var::new).collect();
        let clauses = xor_to_cnf(&vars, parity).unwrap();
        prop_assert_eq!(clauses.len(), 1 << (d - 1));
        let f = CnfFormula::from_clauses(d, clauses).unwrap();
        for bits in 0u32..(1 << d) {
            let a = assignment(d, bits);
            prop_assert_eq!(f.satisfied_by(&a), (bits.count_ones() % 2 == 1) == parity);
        }
    }
}

#[test]
fn literal_encoding_round_trips() {
    for x in [-7i64, -1, 1, 9] {
        assert_eq!(Lit::from_dimacs(x).unwrap().to_dimacs(), x);
    }
    assert!(Lit::from_dimacs(0).is_err());
}

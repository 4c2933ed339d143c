use proptest::prelude::*;
use restartlab_core::cnf::{restrict, CnfFormula, Restriction, Var};
use restartlab_core::families::{ladder, pitfall, tseitin, LadderLayout, LadderParams, PitfallLayout, PitfallParams};
use restartlab_core::graph::{edge_expansion, random_near_regular_graph, random_regular_graph, Graph, Labelling};
use restartlab_core::verify::{brute_force_sat, check_ladder_weak_backdoor, check_strong_backdoor, naive_propagate, NaiveOutcome};

fn count_models(f: &CnfFormula) -> usize {
    let n = f.num_variables();
    (0u32..1 << n)
        .filter(|bits| {
            let a: Vec<bool> = (0..=n).map(|v| v > 0 && bits >> (v - 1) & 1 == 1).collect();
            f.satisfied_by(&a)
        })
        .count()
}

#[test]
fn ladder4_has_two_models() {
    for seed in 0..5 {
        let inst = ladder(&LadderParams::random(4, 4, seed).unwrap()).unwrap();
        assert_eq!(inst.formula.num_variables(), 8);
        assert_eq!(count_models(&inst.formula), 2, "seed {seed}");
    }
}

#[test]
fn ladder_c_restrictions() {
    let inst = ladder(&LadderParams::random(8, 4, 3).unwrap()).unwrap();
    let lay = LadderLayout::new(8);
    let n = inst.formula.num_variables();
    let all_one = lay.c_vars().into_iter().fold(Restriction::unassigned(n), |r, c| r.with(c, true));
    // One further decision on any ℓ propagates to a model.
    for value in [false, true] {
        match naive_propagate(&inst.formula, &all_one.clone().with(lay.ell(2, 1), value)) {
            NaiveOutcome::Fixpoint(r) => assert_eq!(r.assigned_count(), n),
            NaiveOutcome::Conflict => panic!("c = 1 and one ℓ must propagate to a model"),
        }
    }
    assert!(check_ladder_weak_backdoor(&inst).unwrap().passed());
    for bits in 0u32..(1 << 3) {
        let pi = lay
            .c_vars()
            .into_iter()
            .enumerate()
            .fold(Restriction::unassigned(n), |r, (i, c)| r.with(c, bits >> i & 1 == 1));
        let (g, _) = restrict(&inst.formula, &pi);
        let sat = brute_force_sat(&g).unwrap().is_sat();
        assert_eq!(sat, bits == 0b111, "c bits {bits:03b}");
    }
}

/// Independent exhaustive edge expansion.
fn expansion_by_subsets(g: &Graph) -> f64 {
    let n = g.num_vertices();
    let mut best = f64::INFINITY;
    for s in 1u32..(1 << n) {
        let size = s.count_ones() as usize;
        if size > n / 2 {
            continue;
        }
        let cut = g.edges().iter().filter(|&&(a, b)| (s >> a & 1) != (s >> b & 1)).count();
        best = best.min(cut as f64 / size as f64);
    }
    best
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(40))]

    #[test]
    fn tseitin_parity_decides_satisfiability(edges in 3usize..=12, seed in any::<u64>(), flip in any::<bool>()) {
        let g = random_near_regular_graph(edges, 3, seed).unwrap();
        prop_assume!(g.is_connected());
        let mut lab: Vec<bool> = vec![false; g.num_vertices()];
        lab[0] = !flip;
        let inst = tseitin(&g, &Labelling::new(lab), 1).unwrap();
        let odd = !flip;
        prop_assert_eq!(brute_force_sat(&inst.formula).unwrap().is_sat(), !odd);
    }

    #[test]
    fn exact_expansion_matches_enumeration(n in 4usize..=12, seed in any::<u64>()) {
        let g = random_regular_graph(n - n % 2, 3, seed).unwrap();
        let e = edge_expansion(&g).unwrap();
        prop_assert!(e.exact);
        prop_assert!((e.as_f64() - expansion_by_subsets(&g)).abs() < 1e-12);
    }
}

#[test]
fn pitfall_backdoor_forces_two_zeros_in_a_block() {
    let inst = pitfall(&PitfallParams::random(2, 6, 3, 11).unwrap()).unwrap();
    let lay = PitfallLayout::new(2, 6, 9);
    let v = lay.backdoor();
    assert_eq!(v.len(), 12);
    assert_eq!(inst.backdoor("V").unwrap(), &v[..]);
    let check = check_strong_backdoor(&inst.formula, &v).unwrap();
    assert!(check.holds);
    assert_eq!(check.assignments_checked, 4096);
    // A same-size set away from the Y blocks is not a backdoor.
    let control: Vec<Var> = (1..=9).map(|i| lay.x(1, i)).chain((1..=3).map(|i| lay.z(2, i))).collect();
    assert!(!check_strong_backdoor(&inst.formula, &control).unwrap().holds);
}

#[test]
fn pitfall_is_refuted_by_every_cdcl_config() {
    use restartlab_core::solver::{solve, Budget, SolveStatus, Preset, Witness};
    let inst = pitfall(&PitfallParams::random(2, 6, 3, 4).unwrap()).unwrap();
    for cfg in [Preset::CJrVsPs, Preset::CJVsPs] {
        let r = solve(&inst, &cfg.config(&Witness::default(), 1, Budget::default())).unwrap();
        assert_eq!(r.status, SolveStatus::Unsat, "{cfg}");
    }
}

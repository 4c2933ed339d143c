//! Ladder formulas: a Tseitin core guarded by "trapdoor" gadgets. They are
//! satisfiable, but only by the two assignments that set every `c` to 1 and
//! every `ℓ` to one common value.
//!
//! Variable layout (1-based): block `ℓ^i` for `0 ≤ i ≤ n-2` occupies
//! `i·log n + 1 ..= (i+1)·log n`, followed by `c_1 ..= c_{log n}`.
//! `bin(i, m)` is bit `m-1` of `i`, least significant first.

use crate::cnf::{Clause, CnfFormula, Lit, Var};
use crate::graph::{odd_labelling, random_near_regular_graph, Graph, Labelling};
use crate::instance::{CnfInstance, ExpectedStatus, Family};

use super::tseitin::{edge_list, tseitin_clauses};
use super::GenError;

#[derive(Clone, Debug)]
pub struct LadderParams {
    pub n: usize,
    pub graph: Graph,
    pub labelling: Labelling,
}

impl LadderParams {
    /// Near-regular Tseitin graph with `n - 1` edges and degree at most
    /// `max_degree`, plus an odd labelling, both derived from `seed`.
    pub fn random(n: usize, max_degree: usize, seed: u64) -> Result<LadderParams, GenError> {
        if !n.is_power_of_two() || n < 4 {
            return Err(GenError::InvalidParams(format!("n = {n} must be a power of two >= 4")));
        }
        let graph = random_near_regular_graph(n - 1, max_degree, seed)?;
        let labelling = odd_labelling(&graph, seed ^ 0xA5A5_5A5A);
        Ok(LadderParams { n, graph, labelling })
    }

    fn validate(&self) -> Result<(), GenError> {
        if !self.n.is_power_of_two() || self.n < 4 {
            return Err(GenError::InvalidParams(format!("n = {} must be a power of two >= 4", self.n)));
        }
        if self.graph.num_edges() != self.n - 1 {
            return Err(GenError::InvalidParams(format!(
                "graph has {} edges, ladder({}) needs {}",
                self.graph.num_edges(),
                self.n,
                self.n - 1
            )));
        }
        if !self.labelling.is_odd() {
            return Err(GenError::InvalidParams("labelling must be odd".into()));
        }
        Ok(())
    }
}

/// Index arithmetic for ladder variables.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct LadderLayout {
    pub n: usize,
    pub log_n: usize,
}

impl LadderLayout {
    pub fn new(n: usize) -> LadderLayout {
        LadderLayout {
            n,
            log_n: n.trailing_zeros() as usize,
        }
    }

    pub fn blocks(&self) -> usize {
        self.n - 1
    }

    /// `ℓ^i_j` with `0 ≤ i ≤ n-2` and `1 ≤ j ≤ log n`.
    pub fn ell(&self, i: usize, j: usize) -> Var {
        debug_assert!(i < self.blocks() && (1..=self.log_n).contains(&j));
        Var::new(i * self.log_n + j)
    }

    /// `c_m` with `1 ≤ m ≤ log n`.
    pub fn c(&self, m: usize) -> Var {
        debug_assert!((1..=self.log_n).contains(&m));
        Var::new(self.blocks() * self.log_n + m)
    }

    pub fn c_vars(&self) -> Vec<Var> {
        (1..=self.log_n).map(|m| self.c(m)).collect()
    }

    pub fn ell_vars(&self) -> Vec<Var> {
        (0..self.blocks())
            .flat_map(|i| (1..=self.log_n).map(move |j| (i, j)))
            .map(|(i, j)| self.ell(i, j))
            .collect()
    }

    pub fn num_variables(&self) -> usize {
        (self.blocks() + 1) * self.log_n
    }

    /// `c_m^{bin(i,m)}`: `c_m` if the bit is 1, else `¬c_m`.
    pub fn c_lit(&self, i: usize, m: usize) -> Lit {
        self.c(m).lit(bin(i, m))
    }
}

fn bin(i: usize, m: usize) -> bool {
    (i >> (m - 1)) & 1 == 1
}

/// Builds `Ladder_n(G, f)`. Clause database order: the `L^i ⇒ C^i` clauses,
/// then the guarded Tseitin copies `C^i ⇒ Tseitin`, then the guarded `EQ`
/// clauses `C^{n-1} ⇒ EQ`.
pub fn ladder(params: &LadderParams) -> Result<CnfInstance, GenError> {
    params.validate()?;
    let lay = LadderLayout::new(params.n);
    let log_n = lay.log_n;
    let mut formula = CnfFormula::new(lay.num_variables());

    // L^i ⇒ C^i
    for i in 0..lay.blocks() {
        for j in 1..=log_n {
            for k in 1..=log_n {
                if j == k {
                    continue;
                }
                for m in 1..=log_n {
                    formula.push(Clause::new([
                        lay.ell(i, j).positive(),
                        lay.ell(i, k).negative(),
                        lay.c_lit(i, m),
                    ]))?;
                }
            }
        }
    }

    // C^i ⇒ Tseitin(G, f) over ℓ^0_1, …, ℓ^{n-2}_1
    let tseitin = tseitin_clauses(&params.graph, &params.labelling, |e| lay.ell(e, 1))?;
    for i in 0..lay.blocks() {
        let guard: Vec<Lit> = (1..=log_n).map(|m| !lay.c_lit(i, m)).collect();
        for t in &tseitin {
            formula.push(Clause::new(guard.iter().copied().chain(t.lits().iter().copied())))?;
        }
    }

    // C^{n-1} ⇒ EQ; the trivial pairs ℓ^i_j ⇔ ℓ^i_j would be tautologies.
    let guard: Vec<Lit> = lay.c_vars().into_iter().map(Var::negative).collect();
    let ells = lay.ell_vars();
    for &a in &ells {
        for &b in &ells {
            if a == b {
                continue;
            }
            formula.push(Clause::new(
                guard.iter().copied().chain([a.positive(), b.negative()]),
            ))?;
        }
    }

    let mut inst = CnfInstance::raw(formula);
    inst.family = Family::Ladder;
    inst.expected_status = ExpectedStatus::Sat;
    inst.set_parameter("n", params.n);
    inst.set_parameter("log_n", log_n);
    inst.set_parameter("degree", params.graph.max_degree());
    inst.set_parameter("vertices", params.graph.num_vertices());
    inst.set_parameter("edge_list", edge_list(&params.graph));
    inst.set_parameter(
        "layout",
        format!(
            "ell:1..{},c:{}..{}",
            lay.blocks() * log_n,
            lay.c(1).index(),
            lay.c(log_n).index()
        ),
    );
    inst.backdoors.insert("c-vars".into(), lay.c_vars());
    Ok(inst)
}

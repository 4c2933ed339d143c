//! Pitfall formulas `Φ(G, f, n, k)`: `k` blocks, each a Tseitin copy hidden
//! behind a gadget that VSIDS tends to fall into, tied together by the `Γ_i`
//! clauses that give the formula a small strong backdoor.
//!
//! Variable layout, per block `j ∈ [k]` (blocks are consecutive): `x_{j,1..m}`
//! (one per edge, in edge order), `y_{j,1..n}`, `z_{j,1..n}`,
//! `p_{j,1..m+n}`, `a_{j,1..3}`.

use crate::cnf::{Clause, CnfFormula, Lit, Var, DEFAULT_XOR_DEGREE_CAP};
use crate::graph::{odd_labelling, random_regular_graph, Graph, Labelling};
use crate::instance::{CnfInstance, ExpectedStatus, Family};

use super::tseitin::{edge_list, tseitin_clauses};
use super::GenError;

#[derive(Clone, Debug)]
pub struct PitfallParams {
    pub k: usize,
    pub graph: Graph,
    pub labelling: Labelling,
}

impl PitfallParams {
    /// Random `degree`-regular graph on `n` vertices with an odd labelling.
    pub fn random(k: usize, n: usize, degree: usize, seed: u64) -> Result<PitfallParams, GenError> {
        let graph = random_regular_graph(n, degree, seed)?;
        let labelling = odd_labelling(&graph, seed ^ 0x0DD0_0DD0);
        Ok(PitfallParams { k, graph, labelling })
    }

    fn validate(&self) -> Result<(), GenError> {
        let n = self.graph.num_vertices();
        if self.k == 0 {
            return Err(GenError::InvalidParams("k must be >= 1".into()));
        }
        if n < 2 * self.k + 2 {
            return Err(GenError::InvalidParams(format!(
                "n = {n} vertices is below 2k+2 = {}",
                2 * self.k + 2
            )));
        }
        if !self.labelling.is_odd() {
            return Err(GenError::InvalidParams("labelling must be odd".into()));
        }
        let d = self.graph.max_degree();
        if d > DEFAULT_XOR_DEGREE_CAP {
            return Err(GenError::InvalidParams(format!("degree {d} exceeds the xor cap")));
        }
        Ok(())
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct PitfallLayout {
    pub k: usize,
    pub n: usize,
    pub m: usize,
}

impl PitfallLayout {
    pub fn new(k: usize, n: usize, m: usize) -> PitfallLayout {
        PitfallLayout { k, n, m }
    }

    fn block_size(&self) -> usize {
        2 * self.m + 3 * self.n + 3
    }

    fn base(&self, j: usize) -> usize {
        debug_assert!((1..=self.k).contains(&j));
        (j - 1) * self.block_size()
    }

    pub fn num_variables(&self) -> usize {
        self.k * self.block_size()
    }

    pub fn x(&self, j: usize, i: usize) -> Var {
        debug_assert!((1..=self.m).contains(&i));
        Var::new(self.base(j) + i)
    }

    pub fn y(&self, j: usize, i: usize) -> Var {
        debug_assert!((1..=self.n).contains(&i));
        Var::new(self.base(j) + self.m + i)
    }

    pub fn z(&self, j: usize, i: usize) -> Var {
        debug_assert!((1..=self.n).contains(&i));
        Var::new(self.base(j) + self.m + self.n + i)
    }

    pub fn p(&self, j: usize, i: usize) -> Var {
        debug_assert!((1..=self.m + self.n).contains(&i));
        Var::new(self.base(j) + self.m + 2 * self.n + i)
    }

    pub fn a(&self, j: usize, i: usize) -> Var {
        debug_assert!((1..=3).contains(&i));
        Var::new(self.base(j) + 2 * self.m + 3 * self.n + i)
    }

    /// `{y_{j,i} : (j,i) ∈ [k] × [2k+2]}`, block-major.
    pub fn backdoor(&self) -> Vec<Var> {
        (1..=self.k)
            .flat_map(|j| (1..=2 * self.k + 2).map(move |i| (j, i)))
            .map(|(j, i)| self.y(j, i))
            .collect()
    }
}

/// Builds the pitfall formula. Families are emitted in order (1)–(6), each
/// for every block before the next family starts.
pub fn pitfall(params: &PitfallParams) -> Result<CnfInstance, GenError> {
    params.validate()?;
    let (k, n, m) = (params.k, params.graph.num_vertices(), params.graph.num_edges());
    let lay = PitfallLayout::new(k, n, m);
    let mut f = CnfFormula::new(lay.num_variables());
    let blocks = 1..=k;

    // (1) vertex parity constraints, each weakened by ⋁ z_{j,i}
    for j in blocks.clone() {
        let tseitin = tseitin_clauses(&params.graph, &params.labelling, |e| lay.x(j, e + 1))?;
        for t in tseitin {
            let zs = (1..=n).map(|i| lay.z(j, i).positive());
            f.push(Clause::new(t.lits().iter().copied().chain(zs)))?;
        }
    }

    // (2) y_{j,i1} ∨ y_{j,i2} ∨ ¬p_{j,i3}
    for j in blocks.clone() {
        for i1 in 1..=n {
            for i2 in i1 + 1..=n {
                for i3 in 1..=m + n {
                    f.push(Clause::new([
                        lay.y(j, i1).positive(),
                        lay.y(j, i2).positive(),
                        lay.p(j, i3).negative(),
                    ]))?;
                }
            }
        }
    }

    // (3) x-chain
    for j in blocks.clone() {
        for i1 in 1..=n {
            for i2 in 1..=m {
                let mut lits = vec![lay.y(j, i1).positive()];
                lits.extend((1..=m + n).filter(|&i| i != i2).map(|i| lay.p(j, i).positive()));
                lits.extend((1..i2).map(|i| lay.x(j, i).positive()));
                lits.push(lay.x(j, i2).negative());
                f.push(Clause::new(lits))?;
            }
        }
    }

    // (4) z-chain; for i2 = n the z-disjunction starts at z_{j,2}
    for j in blocks.clone() {
        for i1 in 1..=n {
            for i2 in 1..=n {
                let mut lits = vec![lay.y(j, i1).positive()];
                lits.extend((1..=m + n).filter(|&i| i != m + i2).map(|i| lay.p(j, i).positive()));
                lits.extend((1..=m).map(|i| lay.x(j, i).positive()));
                let start = 1 + (i2 == n) as usize;
                lits.extend((start..i2).map(|i| lay.z(j, i).positive()));
                lits.push(lay.z(j, i2).negative());
                f.push(Clause::new(lits))?;
            }
        }
    }

    // (5) a-gadget. The first two shapes do not mention i2 and are emitted once per i1.
    for j in blocks.clone() {
        let a = |i: usize| lay.a(j, i);
        for i1 in 1..=n {
            let nz = lay.z(j, i1).negative();
            f.push(Clause::new([a(1).negative(), a(3).positive(), nz]))?;
            f.push(Clause::new([a(2).negative(), a(3).negative(), nz]))?;
            for i2 in 1..=n {
                let ny = lay.y(j, i2).negative();
                f.push(Clause::new([a(1).positive(), nz, ny]))?;
                f.push(Clause::new([a(2).positive(), nz, ny]))?;
            }
        }
    }

    // (6) Γ_i for odd i with i + 1 ≤ n
    for i in (1..n).step_by(2) {
        let lits: Vec<Lit> = blocks
            .clone()
            .flat_map(|j| [lay.y(j, i).negative(), lay.y(j, i + 1).negative()])
            .collect();
        f.push(Clause::new(lits))?;
    }

    let mut inst = CnfInstance::raw(f);
    inst.family = Family::Pitfall;
    inst.expected_status = ExpectedStatus::Unsat;
    inst.set_parameter("k", k);
    inst.set_parameter("n", n);
    inst.set_parameter("m", m);
    inst.set_parameter("degree", params.graph.max_degree());
    inst.set_parameter("edge_list", edge_list(&params.graph));
    inst.set_parameter("layout", "per-block:x[m],y[n],z[n],p[m+n],a[3]");
    inst.backdoors.insert("V".into(), lay.backdoor());
    let ys: Vec<Var> = blocks.flat_map(|j| (1..=n).map(move |i| lay.y(j, i))).collect();
    inst.backdoors.insert("y".into(), ys);
    Ok(inst)
}

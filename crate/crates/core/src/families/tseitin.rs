use crate::cnf::{xor_to_cnf, Clause, CnfFormula, Var};
use crate::graph::{Graph, Labelling};
use crate::instance::{CnfInstance, ExpectedStatus, Family};

use super::GenError;

/// Parity constraints `⊕_{e ∋ v} x_e = f(v)`, one XOR block per vertex in
/// vertex order. Isolated vertices with label 1 contribute the empty clause.
pub fn tseitin_clauses(
    graph: &Graph,
    labelling: &Labelling,
    edge_var: impl Fn(usize) -> Var,
) -> Result<Vec<Clause>, GenError> {
    if labelling.len() != graph.num_vertices() {
        return Err(GenError::InvalidParams(format!(
            "labelling has {} entries for {} vertices",
            labelling.len(),
            graph.num_vertices()
        )));
    }
    let mut clauses = Vec::new();
    for v in 0..graph.num_vertices() {
        let vars: Vec<Var> = graph.incident_edges(v).into_iter().map(&edge_var).collect();
        if vars.is_empty() {
            if labelling.get(v) {
                clauses.push(Clause::new([]));
            }
            continue;
        }
        clauses.extend(xor_to_cnf(&vars, labelling.get(v))?);
    }
    Ok(clauses)
}

/// Satisfiable iff every connected component has even label sum.
pub fn tseitin_is_satisfiable(graph: &Graph, labelling: &Labelling) -> bool {
    let n = graph.num_vertices();
    let mut comp: Vec<usize> = (0..n).collect();
    fn find(p: &mut [usize], mut x: usize) -> usize {
        while p[x] != x {
            p[x] = p[p[x]];
            x = p[x];
        }
        x
    }
    for &(u, w) in graph.edges() {
        let (a, b) = (find(&mut comp, u), find(&mut comp, w));
        comp[a] = b;
    }
    let mut parity = vec![false; n];
    for v in 0..n {
        let r = find(&mut comp, v);
        parity[r] ^= labelling.get(v);
    }
    parity.iter().all(|&p| !p)
}

/// Tseitin formula with edge `e` mapped to variable `variable_base + e`.
pub fn tseitin(graph: &Graph, labelling: &Labelling, variable_base: usize) -> Result<CnfInstance, GenError> {
    if variable_base == 0 {
        return Err(GenError::InvalidParams("variable_base must be >= 1".into()));
    }
    let num_vars = variable_base + graph.num_edges() - 1;
    let clauses = tseitin_clauses(graph, labelling, |e| Var::new(variable_base + e))?;
    let formula = CnfFormula::from_clauses(num_vars, clauses)?;
    let mut inst = CnfInstance::raw(formula);
    inst.family = Family::Tseitin;
    inst.expected_status = if tseitin_is_satisfiable(graph, labelling) {
        ExpectedStatus::Sat
    } else {
        ExpectedStatus::Unsat
    };
    inst.set_parameter("vertices", graph.num_vertices());
    inst.set_parameter("edges", graph.num_edges());
    inst.set_parameter("degree", graph.max_degree());
    inst.set_parameter("variable_base", variable_base);
    inst.set_parameter("edge_list", edge_list(graph));
    Ok(inst)
}

pub(crate) fn edge_list(graph: &Graph) -> String {
    graph
        .edges()
        .iter()
        .map(|(u, w)| format!("{u}-{w}"))
        .collect::<Vec<_>>()
        .join(",")
}

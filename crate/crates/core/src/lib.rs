//! Propositional formulas, the formula families used to probe restart
//! behaviour, and a CDCL/DPLL engine with pluggable heuristics.

pub mod cnf;
pub mod dimacs;
pub mod families;
pub mod graph;
pub mod heuristics;
pub mod instance;
pub mod restart;
pub mod solver;
pub mod verify;

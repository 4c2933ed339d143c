//! Generators for the Tseitin, Ladder and pitfall formula families, plus
//! uniform random k-CNF.

mod ladder;
mod pitfall;
mod random;
mod tseitin;

use thiserror::Error;

use crate::cnf::CnfError;
use crate::graph::GraphError;

pub use ladder::{ladder, LadderLayout, LadderParams};
pub use pitfall::{pitfall, PitfallLayout, PitfallParams};
pub use random::random_k_cnf;
pub use tseitin::{tseitin, tseitin_clauses, tseitin_is_satisfiable};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum GenError {
    #[error(transparent)]
    Cnf(#[from] CnfError),
    #[error(transparent)]
    Graph(#[from] GraphError),
    #[error("invalid parameters: {0}")]
    InvalidParams(String),
}

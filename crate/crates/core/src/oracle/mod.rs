//! Exact evaluation of `<Z_L Z_R>` on a finite lightcone, independent of the product
//! structure: a state-vector simulator and a configuration-basis contraction.

mod contraction;
mod statevector;

pub use contraction::{contraction_expectation, elimination_order, EliminationOrder, DEFAULT_ENTRY_BUDGET};
pub use statevector::{statevector_expectation, DEFAULT_QUBIT_CAP};

use crate::error::{Error, Result};
use crate::graphs::LocalSubgraph;
use crate::params::ParamSet;

/// A lightcone plus angles. Cost `sum_e (-Z_u Z_v)` with the angle of the edge's class,
/// mixer `sum_v X_v`, initial state `|+>^n`.
#[derive(Clone, Copy, Debug)]
pub struct CircuitSpec<'a> {
    pub subgraph: &'a LocalSubgraph,
    pub params: &'a ParamSet,
}

impl<'a> CircuitSpec<'a> {
    pub fn new(subgraph: &'a LocalSubgraph, params: &'a ParamSet) -> Result<Self> {
        if let Some(&(_, _, c)) = subgraph.edges.iter().find(|e| e.2 >= params.sharing.len()) {
            return Err(Error::InvalidParams(format!("edge category {c} has no gamma class")));
        }
        Ok(Self { subgraph, params })
    }
}

use num_complex::Complex64;

use super::CircuitSpec;
use crate::config::{f_table, phase_table, z0_sign};
use crate::engine::real_part;
use crate::error::{Error, Result};
use crate::factor::{contract, greedy_order, Factor};
use crate::graphs::LocalSubgraph;

/// Largest intermediate table, in complex entries, a contraction may allocate.
pub const DEFAULT_ENTRY_BUDGET: u128 = 1 << 26;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct EliminationOrder {
    pub order: Vec<usize>,
    /// Largest number of neighbors a vertex had when it was eliminated.
    pub width: usize,
}

/// Greedy minimum-degree order (ties by minimum fill) over the subgraph's vertices.
pub fn elimination_order(g: &LocalSubgraph) -> EliminationOrder {
    let edges: Vec<(usize, usize)> = g.edges.iter().map(|&(u, v, _)| (u, v)).collect();
    let (order, width) = greedy_order(g.num_vertices(), &edges, &[]);
    EliminationOrder { order, width }
}

/// Sums `z_L[0] z_R[0] prod_k f(z_k) prod_e exp(-i Gamma_e . z_u z_v)` over all vertex
/// configurations by eliminating vertices in `order`; returns `<Z_L Z_R>`.
pub fn contraction_expectation(circ: CircuitSpec<'_>, order: &EliminationOrder, budget: u128) -> Result<f64> {
    let g = circ.subgraph;
    let p = circ.params.p();
    let bits = 2 * p + 1;
    let entries = 1u128.checked_shl((bits * order.width) as u32).unwrap_or(u128::MAX);
    if entries > budget {
        return Err(Error::WidthOverflow {
            width: order.width,
            entries,
            budget,
        });
    }
    let f = f_table(&circ.params.betas);
    let signed: Vec<Complex64> = f.iter().enumerate().map(|(x, v)| v * z0_sign(x, p)).collect();
    let phases: Vec<Vec<Complex64>> = circ.params.gamma_vectors().iter().map(|gv| phase_table(gv)).collect();
    let (l, r) = g.root_edge;
    let mut factors: Vec<Factor> = (0..g.num_vertices())
        .map(|v| Factor::unary(v, if v == l || v == r { signed.clone() } else { f.clone() }))
        .collect();
    for &(u, v, c) in &g.edges {
        factors.push(Factor::xor_pair(u, v, bits, &phases[c]));
    }
    let s = contract(factors, &order.order, &[], bits).data[0];
    real_part(s)
}

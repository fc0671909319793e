//! Placement algorithms over a candidate set and its conflict graph.
//!
//! The exact solver minimizes the ILP objective
//!
//! ```text
//! min  sum_{(p,q) in E_A} y_pq + (1/M) sum_e sum_{p in A_e} d(p) x_p
//! s.t. sum_{p in A_e} x_p = 1          for every edge e
//!      x_p + x_q <= y_pq + 1           for every conflict (p, q)
//! ```
//!
//! over binary `x`, `y`. For fixed `x` the objective is minimized by the
//! smallest feasible `y`, which is `y_pq = max(0, x_p + x_q - 1)`: one exactly
//! when both endpoints of a conflict are chosen. The ILP optimum therefore
//! equals the minimum over one-position-per-edge choices of
//! `conflicts_among_chosen + rank_sum / M`, which is what branch-and-bound in
//! [`exact`] searches directly.

use std::time::Duration;

use crate::conflict::ConflictGraph;
use crate::model::CandidateSet;

pub mod editor;
pub mod exact;
pub mod greedy;
pub mod oracle;

pub use editor::solve_editor;
pub use exact::solve_exact;
pub use greedy::solve_greedy;
pub use oracle::{brute_force_oracle, count_zero_overlap, count_zero_overlap_exhaustive};

#[derive(Debug, Clone, Default, PartialEq)]
pub struct SolveConfig {
    /// Weight divisor of the rank term; defaults to `|E| * max_e |A_e|`.
    pub m: Option<f64>,
    pub time_limit: Option<Duration>,
    pub node_limit: Option<u64>,
    /// Randomizes greedy tie-breaking among equal costs. Off by default.
    pub seed: Option<u64>,
}

impl SolveConfig {
    pub fn m_for(&self, cs: &CandidateSet) -> f64 {
        self.m.unwrap_or_else(|| cs.default_m())
    }
}

/// Conflicts among the nodes chosen by `choice` (index into each `A_e`).
pub fn conflicts_among(cg: &ConflictGraph, choice: &[usize]) -> usize {
    let chosen: Vec<usize> = choice
        .iter()
        .enumerate()
        .map(|(e, &i)| cg.node(crate::model::EdgeId(e), i))
        .collect();
    let mut mark = vec![false; cg.num_nodes()];
    for &n in &chosen {
        mark[n] = true;
    }
    chosen
        .iter()
        .map(|&n| {
            cg.neighbors(n)
                .iter()
                .filter(|&&b| (b as usize) > n && mark[b as usize])
                .count()
        })
        .sum()
}

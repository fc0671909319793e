//! Greedy placement over a (full or local) conflict graph.
//!
//! Every remaining position `p` has cost
//! `c(p) = delta(p) + d(p) / M + T * sigma(p)` where `delta` is its degree in
//! the residual conflict graph, `d` its rank and `sigma` the number of already
//! placed arrows it conflicts with. `T` is the largest initial cost of a valid
//! position, so any `sigma >= 1` outweighs every conflict-free alternative.
//! Each round places the cheapest position and deletes its edge's positions
//! from the residual graph.

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use super::SolveConfig;
use crate::conflict::{ConflictGraph, Variant};
use crate::model::{CandidateSet, EdgeId, Placement, SolverTag};

pub fn solve_greedy(cs: &CandidateSet, cg: &ConflictGraph, cfg: &SolveConfig) -> Placement {
    let choice = greedy_choice(cs, cg, cfg);
    let tag = match cg.variant() {
        Variant::Full => SolverTag::HeurGlobal,
        Variant::Local => SolverTag::HeurLocal,
    };
    cs.placement(&choice, tag, false)
}

/// Chosen index into each `A_e`.
pub(crate) fn greedy_choice(cs: &CandidateSet, cg: &ConflictGraph, cfg: &SolveConfig) -> Vec<usize> {
    let m = cfg.m_for(cs);
    let n = cg.num_nodes();
    let rank = |node: usize| (cg.index_in_edge(node) + 1) as f64;
    let valid: Vec<bool> = cs.per_edge().iter().flatten().map(|p| p.valid).collect();

    let mut delta: Vec<u32> = (0..n).map(|v| cg.neighbors(v).len() as u32).collect();
    let mut sigma = vec![0u32; n];
    let mut alive = vec![true; n];

    let t = (0..n)
        .filter(|&v| valid[v])
        .map(|v| delta[v] as f64 + rank(v) / m)
        .fold(0.0f64, f64::max)
        .max(f64::MIN_POSITIVE);

    // Secondary order among equal costs: (edge, rank) by default, a seeded
    // permutation when requested.
    let tie: Vec<usize> = match cfg.seed {
        None => (0..n).collect(),
        Some(seed) => {
            let mut perm: Vec<usize> = (0..n).collect();
            perm.shuffle(&mut ChaCha8Rng::seed_from_u64(seed));
            perm
        }
    };

    let mut choice = vec![usize::MAX; cs.num_edges()];
    for _ in 0..cs.num_edges() {
        let mut best: Option<(bool, f64, usize, usize)> = None;
        for v in (0..n).filter(|&v| alive[v]) {
            let cost = delta[v] as f64 + rank(v) / m + t * sigma[v] as f64;
            let key = (!valid[v], cost, tie[v], v);
            let better = match &best {
                None => true,
                Some(b) => (key.0, key.1, key.2) < (b.0, b.1, b.2),
            };
            if better {
                best = Some(key);
            }
        }
        let (_, _, _, picked) = best.expect("a remaining position");
        let edge = cg.edge_of(picked);
        choice[edge.0] = cg.index_in_edge(picked);
        for q in cg.nodes_of(EdgeId(edge.0)) {
            alive[q] = false;
        }
        for q in cg.nodes_of(EdgeId(edge.0)) {
            for &nb in cg.neighbors(q) {
                let nb = nb as usize;
                if alive[nb] {
                    delta[nb] -= 1;
                    if q == picked {
                        sigma[nb] += 1;
                    }
                }
            }
        }
    }
    choice
}

//! Exact branch-and-bound over one-position-per-edge assignments.
//!
//! The cost of choosing position `p` given the positions already chosen is
//! `hits(p) * M + rank(p)`, where `hits` counts chosen positions in conflict
//! with `p`. The search works on sets of undecided edges:
//!
//! * a set whose edges fall into several groups with no conflicts between
//!   them is solved group by group, since their costs simply add up;
//! * otherwise it branches on the edge with the fewest conflict-free options
//!   left, trying options by increasing cost, and prunes with the bound
//!   "cost so far + cheapest current option of every undecided edge".
//!
//! Before searching, a position `q` is dropped when a lower-ranked position
//! `p` of the same edge conflicts with a subset of `q`'s neighbours: swapping
//! `q` for `p` never adds an overlap and lowers the rank sum.

use std::cmp::Reverse;
use std::time::Instant;

use super::greedy::greedy_choice;
use super::{conflicts_among, SolveConfig};
use crate::conflict::ConflictGraph;
use crate::model::{CandidateSet, EdgeId, Placement, SolverTag};

/// Minimizes `overlaps + rank_sum / M`. The result has `proven_optimal` set
/// unless a time or node limit stopped the search, in which case it is the
/// best placement found, never worse than the greedy one.
pub fn solve_exact(cs: &CandidateSet, cg: &ConflictGraph, cfg: &SolveConfig) -> Placement {
    let m = cfg.m_for(cs);
    let mut choice = greedy_choice(cs, cg, &SolveConfig { seed: None, ..cfg.clone() });
    let alive = undominated(cs, cg);
    let options: Vec<Vec<usize>> = (0..cs.num_edges())
        .map(|e| cg.nodes_of(EdgeId(e)).filter(|&n| alive[n]).collect())
        .collect();
    let edge_adj = edge_adjacency(cg, &options, cs.num_edges());
    let static_key = (0..cs.num_edges())
        .map(|e| {
            let degree: usize = options[e].iter().map(|&n| cg.neighbors(n).len()).sum();
            (options[e].len(), Reverse(degree), e)
        })
        .collect();
    let mut search = Search {
        cg,
        m,
        options,
        edge_adj,
        static_key,
        hits: vec![0; cg.num_nodes()],
        in_set: vec![false; cs.num_edges()],
        mark: vec![false; cs.num_edges()],
        nodes: 0,
        started: Instant::now(),
        cfg,
        aborted: false,
    };

    let greedy = choice.clone();
    let all: Vec<usize> = (0..cs.num_edges()).collect();
    for comp in search.components(&all) {
        // A pruned position may conflict with other groups, so the greedy
        // assignment only bounds the search when it avoids them.
        let bounded = comp.iter().all(|&e| alive[cg.node(EdgeId(e), choice[e])]);
        let budget = if bounded {
            search.assignment_cost(&comp, &choice)
        } else {
            f64::INFINITY
        };
        if let Some((_, asg)) = search.solve_set(&comp, budget) {
            choice = comp_with(&comp, &asg, &choice);
        }
    }
    let proven = !search.aborted;
    if !proven {
        let value = |c: &[usize]| {
            conflicts_among(cg, c) as f64 * m + c.iter().map(|&i| (i + 1) as f64).sum::<f64>()
        };
        if value(&greedy) < value(&choice) {
            choice = greedy;
        }
    }
    cs.placement(&choice, SolverTag::Exact, proven)
}

/// `choice` with the entries of `asg` (edge, index) written in.
fn comp_with(comp: &[usize], asg: &[(usize, usize)], choice: &[usize]) -> Vec<usize> {
    let mut out = choice.to_vec();
    debug_assert_eq!(comp.len(), asg.len());
    for &(e, i) in asg {
        out[e] = i;
    }
    out
}

/// Positions not dominated by a lower-ranked position of the same edge,
/// iterated until stable.
fn undominated(cs: &CandidateSet, cg: &ConflictGraph) -> Vec<bool> {
    let mut alive = vec![true; cg.num_nodes()];
    let live_neighbors = |alive: &[bool], n: usize| -> Vec<u32> {
        cg.neighbors(n).iter().copied().filter(|&b| alive[b as usize]).collect()
    };
    loop {
        let mut changed = false;
        for e in 0..cs.num_edges() {
            let nodes: Vec<usize> = cg.nodes_of(EdgeId(e)).filter(|&n| alive[n]).collect();
            let neigh: Vec<Vec<u32>> = nodes.iter().map(|&n| live_neighbors(&alive, n)).collect();
            let mut killed = vec![false; nodes.len()];
            for q in 1..nodes.len() {
                let dominated = (0..q).any(|p| !killed[p] && is_subset(&neigh[p], &neigh[q]));
                if dominated {
                    killed[q] = true;
                    alive[nodes[q]] = false;
                    changed = true;
                }
            }
        }
        if !changed {
            return alive;
        }
    }
}

fn is_subset(small: &[u32], big: &[u32]) -> bool {
    if small.len() > big.len() {
        return false;
    }
    let mut it = big.iter();
    small.iter().all(|x| it.by_ref().any(|y| y == x))
}

/// Sorted lists of edges that have at least one conflicting pair of
/// surviving positions.
fn edge_adjacency(cg: &ConflictGraph, options: &[Vec<usize>], num_edges: usize) -> Vec<Vec<usize>> {
    let mut alive = vec![false; cg.num_nodes()];
    for &n in options.iter().flatten() {
        alive[n] = true;
    }
    let mut adj = vec![Vec::new(); num_edges];
    for (e, opts) in options.iter().enumerate() {
        for &n in opts {
            for &b in cg.neighbors(n) {
                if alive[b as usize] {
                    adj[e].push(cg.edge_of(b as usize).0);
                }
            }
        }
        adj[e].sort_unstable();
        adj[e].dedup();
    }
    adj
}

type Assignment = Vec<(usize, usize)>;

struct Search<'a> {
    cg: &'a ConflictGraph,
    m: f64,
    options: Vec<Vec<usize>>,
    edge_adj: Vec<Vec<usize>>,
    static_key: Vec<(usize, Reverse<usize>, usize)>,
    hits: Vec<u32>,
    in_set: Vec<bool>,
    mark: Vec<bool>,
    nodes: u64,
    started: Instant,
    cfg: &'a SolveConfig,
    aborted: bool,
}

impl Search<'_> {
    fn cost(&self, node: usize) -> f64 {
        self.hits[node] as f64 * self.m + (self.cg.index_in_edge(node) + 1) as f64
    }

    fn min_cost(&self, e: usize) -> f64 {
        self.options[e]
            .iter()
            .map(|&n| self.cost(n))
            .fold(f64::INFINITY, f64::min)
    }

    fn apply(&mut self, node: usize, up: bool) {
        for &b in self.cg.neighbors(node) {
            if up {
                self.hits[b as usize] += 1;
            } else {
                self.hits[b as usize] -= 1;
            }
        }
    }

    /// Cost of `choice` restricted to `comp`, counting each conflict once.
    fn assignment_cost(&mut self, comp: &[usize], choice: &[usize]) -> f64 {
        let nodes: Vec<usize> = comp.iter().map(|&e| self.cg.node(EdgeId(e), choice[e])).collect();
        let mut cost = 0.0;
        for &n in &nodes {
            cost += self.cost(n);
            self.apply(n, true);
        }
        for &n in &nodes {
            self.apply(n, false);
        }
        cost
    }

    /// Connected groups of `set` under the edge adjacency, each sorted.
    fn components(&mut self, set: &[usize]) -> Vec<Vec<usize>> {
        for &e in set {
            self.in_set[e] = true;
        }
        let mut out = Vec::new();
        for &start in set {
            if self.mark[start] {
                continue;
            }
            let mut comp = vec![start];
            self.mark[start] = true;
            let mut i = 0;
            while i < comp.len() {
                let e = comp[i];
                i += 1;
                for &f in &self.edge_adj[e] {
                    if self.in_set[f] && !self.mark[f] {
                        self.mark[f] = true;
                        comp.push(f);
                    }
                }
            }
            comp.sort_unstable();
            out.push(comp);
        }
        for &e in set {
            self.in_set[e] = false;
            self.mark[e] = false;
        }
        out
    }

    fn out_of_budget(&mut self) -> bool {
        if self.aborted {
            return true;
        }
        self.nodes += 1;
        if self.cfg.node_limit.is_some_and(|lim| self.nodes > lim) {
            self.aborted = true;
        } else if self.nodes.is_multiple_of(1024) {
            if let Some(limit) = self.cfg.time_limit {
                if self.started.elapsed() >= limit {
                    self.aborted = true;
                }
            }
        }
        self.aborted
    }

    /// Cheapest assignment of `set` costing strictly less than `budget`, if
    /// one exists.
    fn solve_set(&mut self, set: &[usize], budget: f64) -> Option<(f64, Assignment)> {
        if set.is_empty() {
            return (budget > 0.0).then(|| (0.0, Vec::new()));
        }
        let comps = self.components(set);
        if comps.len() == 1 {
            return self.branch(set, budget);
        }
        let bounds: Vec<f64> = comps
            .iter()
            .map(|c| c.iter().map(|&e| self.min_cost(e)).sum())
            .collect();
        let mut rest: f64 = bounds.iter().sum();
        if rest >= budget {
            return None;
        }
        let mut total = 0.0;
        let mut asg = Vec::with_capacity(set.len());
        for (comp, lb) in comps.iter().zip(bounds) {
            rest -= lb;
            let (c, a) = self.solve_set_single(comp, budget - total - rest)?;
            total += c;
            asg.extend(a);
        }
        Some((total, asg))
    }

    fn solve_set_single(&mut self, comp: &[usize], budget: f64) -> Option<(f64, Assignment)> {
        if comp.len() == 1 {
            let e = comp[0];
            let best = self.options[e]
                .iter()
                .map(|&n| (self.cost(n), n))
                .fold(None, |acc: Option<(f64, usize)>, x| match acc {
                    Some(a) if a.0 <= x.0 => Some(a),
                    _ => Some(x),
                })?;
            return (best.0 < budget).then(|| (best.0, vec![(e, self.cg.index_in_edge(best.1))]));
        }
        self.branch(comp, budget)
    }

    /// Branches on one edge of a connected set.
    fn branch(&mut self, set: &[usize], budget: f64) -> Option<(f64, Assignment)> {
        if self.out_of_budget() {
            return None;
        }
        let mut bound = 0.0;
        let mut pick = 0;
        let mut pick_key = (usize::MAX, (usize::MAX, Reverse(0), usize::MAX));
        for (i, &e) in set.iter().enumerate() {
            bound += self.min_cost(e);
            let free = self.options[e].iter().filter(|&&n| self.hits[n] == 0).count();
            let key = (free, self.static_key[e]);
            if key < pick_key {
                pick_key = key;
                pick = i;
            }
        }
        if bound >= budget {
            return None;
        }
        let e = set[pick];
        let rest_bound = bound - self.min_cost(e);
        let rest: Vec<usize> = set.iter().copied().filter(|&f| f != e).collect();

        let mut opts: Vec<(u32, usize)> = self.options[e].iter().map(|&n| (self.hits[n], n)).collect();
        opts.sort_unstable();
        let mut best: Option<(f64, Assignment)> = None;
        let mut limit = budget;
        for (_, n) in opts {
            let c = self.cost(n);
            if c + rest_bound >= limit {
                continue;
            }
            self.apply(n, true);
            let sub = self.solve_set(&rest, limit - c);
            self.apply(n, false);
            if let Some((v, mut asg)) = sub {
                asg.push((e, self.cg.index_in_edge(n)));
                limit = c + v;
                best = Some((limit, asg));
            }
            if self.aborted {
                return None;
            }
        }
        best
    }
}

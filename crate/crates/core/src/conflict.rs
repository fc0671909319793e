//! The arrow conflict graph: one node per candidate position, an undirected
//! edge between two positions of different graph edges whose arrows would
//! overlap.

use std::collections::HashMap;
use std::fmt::Write as _;

use crate::error::{Error, Result};
use crate::geom::{circles_overlap_default, Circle};
use crate::model::{CandidateSet, Digraph, EdgeId};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Variant {
    /// Every overlapping pair of positions.
    Full,
    /// Only pairs whose edges share an endpoint in the input graph.
    Local,
}

/// Nodes are numbered by `(EdgeId, rank)` in lexicographic order.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ConflictGraph {
    variant: Variant,
    /// `offsets[e]..offsets[e + 1]` are the nodes of edge `e`.
    offsets: Vec<usize>,
    node_edge: Vec<EdgeId>,
    adjacency: Vec<Vec<u32>>,
}

impl ConflictGraph {
    fn empty(cs: &CandidateSet, variant: Variant) -> Self {
        let mut offsets = Vec::with_capacity(cs.num_edges() + 1);
        let mut node_edge = Vec::with_capacity(cs.total_positions());
        offsets.push(0);
        for (e, list) in cs.per_edge().iter().enumerate() {
            node_edge.extend(std::iter::repeat_n(EdgeId(e), list.len()));
            offsets.push(node_edge.len());
        }
        let adjacency = vec![Vec::new(); node_edge.len()];
        ConflictGraph {
            variant,
            offsets,
            node_edge,
            adjacency,
        }
    }

    fn add(&mut self, a: usize, b: usize) {
        self.adjacency[a].push(b as u32);
        self.adjacency[b].push(a as u32);
    }

    fn finish(mut self) -> Self {
        for list in &mut self.adjacency {
            list.sort_unstable();
            list.dedup();
        }
        self
    }

    pub fn variant(&self) -> Variant {
        self.variant
    }

    pub fn num_nodes(&self) -> usize {
        self.node_edge.len()
    }

    pub fn num_edges(&self) -> usize {
        self.adjacency.iter().map(Vec::len).sum::<usize>() / 2
    }

    pub fn num_graph_edges(&self) -> usize {
        self.offsets.len() - 1
    }

    /// Node index of the position at 0-based index `i` in `A_e`.
    pub fn node(&self, e: EdgeId, i: usize) -> usize {
        debug_assert!(self.offsets[e.0] + i < self.offsets[e.0 + 1]);
        self.offsets[e.0] + i
    }

    pub fn nodes_of(&self, e: EdgeId) -> std::ops::Range<usize> {
        self.offsets[e.0]..self.offsets[e.0 + 1]
    }

    pub fn edge_of(&self, node: usize) -> EdgeId {
        self.node_edge[node]
    }

    /// Index of `node` within its edge's candidate list.
    pub fn index_in_edge(&self, node: usize) -> usize {
        node - self.offsets[self.node_edge[node].0]
    }

    pub fn neighbors(&self, node: usize) -> &[u32] {
        &self.adjacency[node]
    }

    pub fn degree(&self, node: usize) -> Result<usize> {
        self.adjacency
            .get(node)
            .map(Vec::len)
            .ok_or(Error::UnknownNode(node))
    }

    pub fn are_conflicting(&self, a: usize, b: usize) -> bool {
        self.adjacency[a].binary_search(&(b as u32)).is_ok()
    }

    /// Conflict edges as `(a, b)` with `a < b`, ascending.
    pub fn edge_list(&self) -> Vec<(usize, usize)> {
        let mut out = Vec::with_capacity(self.num_edges());
        for (a, list) in self.adjacency.iter().enumerate() {
            out.extend(list.iter().map(|&b| b as usize).filter(|&b| a < b).map(|b| (a, b)));
        }
        out
    }

    /// Text dump, one conflict per line as `edge:rank edge:rank`.
    pub fn dump(&self) -> String {
        let mut s = String::new();
        for (a, b) in self.edge_list() {
            let (ea, eb) = (self.edge_of(a), self.edge_of(b));
            let _ = writeln!(
                s,
                "{}:{} {}:{}",
                ea,
                self.index_in_edge(a) + 1,
                eb,
                self.index_in_edge(b) + 1
            );
        }
        s
    }
}

fn circles(cs: &CandidateSet) -> Vec<Circle> {
    cs.per_edge()
        .iter()
        .flatten()
        .map(|p| Circle::new(p.center, cs.r_e))
        .collect()
}

/// All-pairs construction.
pub fn build_full(cs: &CandidateSet) -> ConflictGraph {
    let mut cg = ConflictGraph::empty(cs, Variant::Full);
    let circles = circles(cs);
    for a in 0..circles.len() {
        let ea = cg.node_edge[a];
        for b in cg.offsets[ea.0 + 1]..circles.len() {
            if circles_overlap_default(&circles[a], &circles[b]) {
                cg.add(a, b);
            }
        }
    }
    cg.finish()
}

/// Same output as [`build_full`], using a uniform grid with cell size `2 r_E`
/// so only positions in neighboring cells are compared.
pub fn build_full_grid(cs: &CandidateSet) -> ConflictGraph {
    let mut cg = ConflictGraph::empty(cs, Variant::Full);
    let circles = circles(cs);
    let cell = 2.0 * cs.r_e;
    let key = |c: &Circle| {
        (
            (c.center.x / cell).floor() as i64,
            (c.center.y / cell).floor() as i64,
        )
    };
    let mut grid: HashMap<(i64, i64), Vec<usize>> = HashMap::new();
    for (i, c) in circles.iter().enumerate() {
        grid.entry(key(c)).or_default().push(i);
    }
    for (a, c) in circles.iter().enumerate() {
        let (kx, ky) = key(c);
        for dx in -1..=1 {
            for dy in -1..=1 {
                let Some(bucket) = grid.get(&(kx + dx, ky + dy)) else {
                    continue;
                };
                for &b in bucket {
                    if b > a
                        && cg.node_edge[a] != cg.node_edge[b]
                        && circles_overlap_default(c, &circles[b])
                    {
                        cg.add(a, b);
                    }
                }
            }
        }
    }
    cg.finish()
}

/// Conflicts restricted to positions of edges that share an endpoint.
pub fn build_local(cs: &CandidateSet, graph: &Digraph) -> ConflictGraph {
    let mut cg = ConflictGraph::empty(cs, Variant::Local);
    let circles = circles(cs);
    let mut pairs: Vec<(usize, usize)> = Vec::new();
    for incident in graph.incidence() {
        for (i, &e) in incident.iter().enumerate() {
            for &g in &incident[i + 1..] {
                if e != g {
                    pairs.push((e.0.min(g.0), e.0.max(g.0)));
                }
            }
        }
    }
    pairs.sort_unstable();
    pairs.dedup();
    for (e, g) in pairs {
        for a in cg.nodes_of(EdgeId(e)) {
            for b in cg.nodes_of(EdgeId(g)) {
                if circles_overlap_default(&circles[a], &circles[b]) {
                    cg.add(a, b);
                }
            }
        }
    }
    cg.finish()
}

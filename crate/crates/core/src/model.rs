//! Digraph drawings, arrow positions, placements and their quality metrics.

use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};
use crate::geom::{
    circle_segment_overlap_default, circles_overlap_default, Circle, Point, Segment,
};

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct VertexId(pub usize);

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct EdgeId(pub usize);

impl fmt::Display for VertexId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

impl fmt::Display for EdgeId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Edge {
    pub source: VertexId,
    pub target: VertexId,
}

impl Edge {
    pub fn shares_endpoint(&self, other: &Edge) -> bool {
        self.source == other.source
            || self.source == other.target
            || self.target == other.source
            || self.target == other.target
    }

    /// Same unordered endpoint pair: parallel or antiparallel twins.
    pub fn is_twin(&self, other: &Edge) -> bool {
        (self.source == other.source && self.target == other.target)
            || (self.source == other.target && self.target == other.source)
    }
}

/// A directed multigraph without self-loops. Edge ids are dense indices.
#[derive(Debug, Clone, PartialEq)]
pub struct Digraph {
    num_vertices: usize,
    edges: Vec<Edge>,
}

impl Digraph {
    pub fn new(num_vertices: usize, edges: Vec<(usize, usize)>) -> Result<Self> {
        let mut out = Vec::with_capacity(edges.len());
        for (i, (s, t)) in edges.into_iter().enumerate() {
            for v in [s, t] {
                if v >= num_vertices {
                    return Err(Error::UnknownVertex { edge: i, vertex: v });
                }
            }
            if s == t {
                return Err(Error::SelfLoop { edge: i, vertex: s });
            }
            out.push(Edge {
                source: VertexId(s),
                target: VertexId(t),
            });
        }
        Ok(Digraph {
            num_vertices,
            edges: out,
        })
    }

    pub fn num_vertices(&self) -> usize {
        self.num_vertices
    }

    pub fn num_edges(&self) -> usize {
        self.edges.len()
    }

    pub fn edges(&self) -> &[Edge] {
        &self.edges
    }

    pub fn edge(&self, e: EdgeId) -> Edge {
        self.edges[e.0]
    }

    /// Incident edge ids per vertex, ascending.
    pub fn incidence(&self) -> Vec<Vec<EdgeId>> {
        let mut inc = vec![Vec::new(); self.num_vertices];
        for (i, e) in self.edges.iter().enumerate() {
            inc[e.source.0].push(EdgeId(i));
            inc[e.target.0].push(EdgeId(i));
        }
        inc
    }
}

/// A straight-line drawing with common vertex and arrow radii.
#[derive(Debug, Clone, PartialEq)]
pub struct Layout {
    pub graph: Digraph,
    pub pos: Vec<Point>,
    pub r_v: f64,
    pub r_e: f64,
}

impl Layout {
    pub fn new(graph: Digraph, pos: Vec<Point>, r_v: f64, r_e: f64) -> Result<Self> {
        if pos.len() != graph.num_vertices() {
            return Err(Error::CandidateMismatch(format!(
                "{} positions for {} vertices",
                pos.len(),
                graph.num_vertices()
            )));
        }
        if let Some(i) = pos.iter().position(|p| !p.is_finite()) {
            return Err(Error::NonFinitePoint(i));
        }
        if !(r_e.is_finite() && r_e > 0.0) {
            return Err(Error::InvalidRadius(format!("r_E must be positive, got {r_e}")));
        }
        if !(r_v.is_finite() && r_v >= 0.0) {
            return Err(Error::InvalidRadius(format!("r_V must be >= 0, got {r_v}")));
        }
        Ok(Layout {
            graph,
            pos,
            r_v,
            r_e,
        })
    }

    pub fn segment(&self, e: EdgeId) -> Segment {
        let edge = self.graph.edge(e);
        Segment::new(self.pos[edge.source.0], self.pos[edge.target.0])
    }

    pub fn source_point(&self, e: EdgeId) -> Point {
        self.pos[self.graph.edge(e).source.0]
    }

    pub fn target_point(&self, e: EdgeId) -> Point {
        self.pos[self.graph.edge(e).target.0]
    }

    pub fn vertex_circle(&self, v: VertexId) -> Circle {
        Circle::new(self.pos[v.0], self.r_v)
    }

    /// Number of vertex (P1) and edge (P2) violations of an arrow of edge `e`
    /// centered at `center` with radius `r_e`. The edge itself and its
    /// parallel/antiparallel twins are not tested.
    pub fn violations_with_radius(&self, e: EdgeId, center: Point, r_e: f64) -> usize {
        let arrow = Circle::new(center, r_e);
        let own = self.graph.edge(e);
        let p1 = (0..self.graph.num_vertices())
            .filter(|&v| circles_overlap_default(&arrow, &self.vertex_circle(VertexId(v))))
            .count();
        let p2 = self
            .graph
            .edges()
            .iter()
            .enumerate()
            .filter(|(g, edge)| *g != e.0 && !edge.is_twin(&own))
            .filter(|(g, _)| circle_segment_overlap_default(&arrow, &self.segment(EdgeId(*g))))
            .count();
        p1 + p2
    }

    pub fn violations(&self, e: EdgeId, center: Point) -> usize {
        self.violations_with_radius(e, center, self.r_e)
    }

    pub fn is_valid_position(&self, e: EdgeId, center: Point) -> bool {
        self.violations(e, center) == 0
    }
}

/// A candidate arrow center on an edge. `rank` is the 1-based closeness to the
/// target within the edge's candidate list.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ArrowPosition {
    pub edge: EdgeId,
    pub center: Point,
    pub rank: u32,
    pub valid: bool,
}

/// Per-edge candidate lists, rank-ascending, plus the common arrow radius.
#[derive(Debug, Clone, PartialEq)]
pub struct CandidateSet {
    pub r_e: f64,
    per_edge: Vec<Vec<ArrowPosition>>,
}

impl CandidateSet {
    pub fn new(r_e: f64, per_edge: Vec<Vec<ArrowPosition>>) -> Result<Self> {
        if !(r_e.is_finite() && r_e > 0.0) {
            return Err(Error::InvalidRadius(format!("r_E must be positive, got {r_e}")));
        }
        for (e, list) in per_edge.iter().enumerate() {
            if list.is_empty() {
                return Err(Error::CandidateMismatch(format!("edge {e} has no position")));
            }
            for (i, p) in list.iter().enumerate() {
                if p.edge.0 != e {
                    return Err(Error::CandidateMismatch(format!(
                        "position listed under edge {e} belongs to edge {}",
                        p.edge
                    )));
                }
                if p.rank as usize != i + 1 {
                    return Err(Error::CandidateMismatch(format!(
                        "edge {e}: ranks must be 1..{} in order",
                        list.len()
                    )));
                }
                if !p.center.is_finite() {
                    return Err(Error::CandidateMismatch(format!("edge {e}: non-finite center")));
                }
            }
            if list.iter().any(|p| !p.valid) && list.len() != 1 {
                return Err(Error::CandidateMismatch(format!(
                    "edge {e}: an invalid fallback must be the only position"
                )));
            }
        }
        Ok(CandidateSet { r_e, per_edge })
    }

    pub fn num_edges(&self) -> usize {
        self.per_edge.len()
    }

    pub fn positions(&self, e: EdgeId) -> &[ArrowPosition] {
        &self.per_edge[e.0]
    }

    pub fn per_edge(&self) -> &[Vec<ArrowPosition>] {
        &self.per_edge
    }

    pub fn total_positions(&self) -> usize {
        self.per_edge.iter().map(Vec::len).sum()
    }

    pub fn max_positions(&self) -> usize {
        self.per_edge.iter().map(Vec::len).max().unwrap_or(0)
    }

    pub fn is_fallback(&self, e: EdgeId) -> bool {
        !self.per_edge[e.0][0].valid
    }

    /// `|E| * max_e |A_e|`, at least 1.
    pub fn default_m(&self) -> f64 {
        (self.num_edges() * self.max_positions()).max(1) as f64
    }

    /// Number of complete assignments, saturating.
    pub fn search_space(&self) -> u128 {
        self.per_edge
            .iter()
            .fold(1u128, |acc, l| acc.saturating_mul(l.len() as u128))
    }

    /// Keeps only index `i` of `A_e` wherever `fixed[e] == Some(i)`; the kept
    /// position is re-ranked to 1.
    pub fn restrict(&self, fixed: &[Option<usize>]) -> Result<CandidateSet> {
        if fixed.len() != self.num_edges() {
            return Err(Error::CandidateMismatch(format!(
                "{} fixings for {} edges",
                fixed.len(),
                self.num_edges()
            )));
        }
        let per_edge = self
            .per_edge
            .iter()
            .zip(fixed)
            .enumerate()
            .map(|(e, (list, f))| match *f {
                None => Ok(list.clone()),
                Some(i) if i < list.len() => Ok(vec![ArrowPosition { rank: 1, ..list[i] }]),
                Some(i) => Err(Error::CandidateMismatch(format!(
                    "edge {e} has no position with index {i}"
                ))),
            })
            .collect::<Result<Vec<_>>>()?;
        CandidateSet::new(self.r_e, per_edge)
    }

    /// Builds the placement that picks index `choice[e]` in every `A_e`.
    pub fn placement(&self, choice: &[usize], solver: SolverTag, proven_optimal: bool) -> Placement {
        debug_assert_eq!(choice.len(), self.num_edges());
        Placement {
            positions: choice
                .iter()
                .enumerate()
                .map(|(e, &i)| self.per_edge[e][i])
                .collect(),
            solver,
            proven_optimal,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum SolverTag {
    Exact,
    HeurGlobal,
    HeurLocal,
    Editor,
}

impl SolverTag {
    pub const ALL: [SolverTag; 4] = [
        SolverTag::Exact,
        SolverTag::HeurGlobal,
        SolverTag::HeurLocal,
        SolverTag::Editor,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            SolverTag::Exact => "exact",
            SolverTag::HeurGlobal => "heur-global",
            SolverTag::HeurLocal => "heur-local",
            SolverTag::Editor => "editor",
        }
    }
}

impl fmt::Display for SolverTag {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for SolverTag {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, Self::Err> {
        SolverTag::ALL
            .into_iter()
            .find(|t| t.as_str() == s)
            .ok_or_else(|| format!("unknown solver '{s}' (expected exact, heur-global, heur-local or editor)"))
    }
}

/// One arrow position per edge.
#[derive(Debug, Clone, PartialEq)]
pub struct Placement {
    pub positions: Vec<ArrowPosition>,
    pub solver: SolverTag,
    /// Set by the exact solver when optimality was proven; false for
    /// heuristics and for exact runs cut short by a limit.
    pub proven_optimal: bool,
}

impl Placement {
    pub fn rank_sum(&self) -> u64 {
        self.positions.iter().map(|p| p.rank as u64).sum()
    }

    pub fn check_matches(&self, graph: &Digraph) -> Result<()> {
        if self.positions.len() != graph.num_edges() {
            return Err(Error::PlacementMismatch(format!(
                "{} arrows for {} edges",
                self.positions.len(),
                graph.num_edges()
            )));
        }
        if let Some((i, p)) = self.positions.iter().enumerate().find(|(i, p)| p.edge.0 != *i) {
            return Err(Error::PlacementMismatch(format!(
                "arrow {i} is assigned to edge {}",
                p.edge
            )));
        }
        Ok(())
    }
}

/// Number of unordered pairs of overlapping arrows, all of radius `r_e`.
pub fn overlap_number_with_radius(pl: &Placement, r_e: f64) -> usize {
    let circles: Vec<Circle> = pl.positions.iter().map(|p| Circle::new(p.center, r_e)).collect();
    let mut count = 0;
    for i in 0..circles.len() {
        for j in i + 1..circles.len() {
            if circles_overlap_default(&circles[i], &circles[j]) {
                count += 1;
            }
        }
    }
    count
}

pub fn overlap_number(pl: &Placement, layout: &Layout) -> usize {
    overlap_number_with_radius(pl, layout.r_e)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct Crossings {
    /// P1 plus P2 violations over all placed arrows.
    pub crossings: usize,
    /// Edges whose chosen position is flagged invalid.
    pub invalid_positions: usize,
}

pub fn crossing_count(pl: &Placement, layout: &Layout) -> Crossings {
    pl.positions.iter().fold(Crossings::default(), |mut acc, p| {
        acc.crossings += layout.violations(p.edge, p.center);
        acc.invalid_positions += usize::from(!p.valid);
        acc
    })
}

/// `overlaps + rank_sum / m`: the value of the ILP objective for a placement.
pub fn objective_value(pl: &Placement, r_e: f64, m: f64) -> f64 {
    assert!(m > 0.0, "M must be positive");
    overlap_number_with_radius(pl, r_e) as f64 + pl.rank_sum() as f64 / m
}

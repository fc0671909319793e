//! Radius selection and discrete candidate generation.
//!
//! Slot `i >= 1` of an edge `(w, u)` sits on the segment at distance
//! `r_V + i * r_E` from the target `u`; slots are generated while they keep a
//! clearance of at least `r_V + r_E` from the source `w`. Slots that overlap
//! any vertex or another edge are dropped and the survivors are ranked
//! contiguously from the target outwards. An edge left without a survivor gets
//! a single position flagged invalid.

use crate::error::{Error, Result};
use crate::geom::{eps_for, Point};
use crate::model::{ArrowPosition, CandidateSet, Digraph, EdgeId, Layout};

#[derive(Debug, Clone, PartialEq)]
pub struct RadiusConfig {
    pub pct_shortest: f64,
    pub pct_average: f64,
    pub cap_px: f64,
    pub floor_px: f64,
    /// Use `r_V = r_E` unless `r_v` is given.
    pub rv_equals_re: bool,
    pub r_v: Option<f64>,
    pub r_e: Option<f64>,
}

impl Default for RadiusConfig {
    fn default() -> Self {
        RadiusConfig {
            pct_shortest: 0.40,
            pct_average: 0.25,
            cap_px: 10.0,
            floor_px: 3.0,
            rv_equals_re: true,
            r_v: None,
            r_e: None,
        }
    }
}

impl RadiusConfig {
    fn validate(&self) -> Result<()> {
        if !(self.floor_px > 0.0 && self.floor_px <= self.cap_px) {
            return Err(Error::InvalidRadius(format!(
                "need 0 < floor ({}) <= cap ({})",
                self.floor_px, self.cap_px
            )));
        }
        for pct in [self.pct_shortest, self.pct_average] {
            if !(pct > 0.0 && pct < 1.0) {
                return Err(Error::InvalidRadius(format!("percentage {pct} outside (0, 1)")));
            }
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Radii {
    pub r_v: f64,
    pub r_e: f64,
}

/// `r_E = max(floor, min(pct_shortest * min_len, pct_average * avg_len, cap))`.
/// Zero-length edges do not contribute to the minimum or the average.
pub fn radii_from_lengths(lengths: &[f64], cfg: &RadiusConfig) -> Result<Radii> {
    cfg.validate()?;
    let positive: Vec<f64> = lengths.iter().copied().filter(|&l| l > 0.0).collect();
    let r_e = match cfg.r_e {
        Some(r) => r,
        None => {
            if positive.is_empty() {
                return Err(Error::NoPositiveEdge);
            }
            let shortest = positive.iter().copied().fold(f64::INFINITY, f64::min);
            let average = positive.iter().sum::<f64>() / positive.len() as f64;
            let r = (cfg.pct_shortest * shortest)
                .min(cfg.pct_average * average)
                .min(cfg.cap_px);
            r.max(cfg.floor_px)
        }
    };
    let r_v = match cfg.r_v {
        Some(r) => r,
        None if cfg.rv_equals_re => r_e,
        None => 0.0,
    };
    if !(r_e.is_finite() && r_e > 0.0) || !(r_v.is_finite() && r_v >= 0.0) {
        return Err(Error::InvalidRadius(format!("r_V = {r_v}, r_E = {r_e}")));
    }
    Ok(Radii { r_v, r_e })
}

pub fn compute_radii(graph: &Digraph, pos: &[Point], cfg: &RadiusConfig) -> Result<Radii> {
    let lengths: Vec<f64> = graph
        .edges()
        .iter()
        .map(|e| pos[e.source.0].dist(pos[e.target.0]))
        .collect();
    radii_from_lengths(&lengths, cfg)
}

/// Raw slot centers of edge `e`, nearest to the target first.
pub fn candidate_slots(layout: &Layout, e: EdgeId) -> Vec<Point> {
    let source = layout.source_point(e);
    let target = layout.target_point(e);
    let len = source.dist(target);
    let clearance = layout.r_v + layout.r_e;
    let tol = eps_for(len);
    let mut slots = Vec::new();
    if len <= 0.0 {
        return slots;
    }
    for i in 1.. {
        let from_target = layout.r_v + i as f64 * layout.r_e;
        if len - from_target < clearance - tol {
            break;
        }
        slots.push(target.towards(source, from_target));
    }
    slots
}

/// Position used by the editor baseline: the first slot, ignoring validity.
/// Edges shorter than `r_V + r_E` clamp to the source end.
pub fn editor_slot(layout: &Layout, e: EdgeId) -> Point {
    let source = layout.source_point(e);
    let target = layout.target_point(e);
    let len = source.dist(target);
    target.towards(source, (layout.r_v + layout.r_e).min(len))
}

fn edge_candidates(layout: &Layout, e: EdgeId) -> Vec<ArrowPosition> {
    let slots = candidate_slots(layout, e);
    let mut out: Vec<ArrowPosition> = slots
        .iter()
        .copied()
        .filter(|&c| layout.is_valid_position(e, c))
        .enumerate()
        .map(|(i, center)| ArrowPosition {
            edge: e,
            center,
            rank: i as u32 + 1,
            valid: true,
        })
        .collect();
    if out.is_empty() {
        let center = match slots.first() {
            Some(&first) => first,
            None => layout.source_point(e).midpoint(layout.target_point(e)),
        };
        out.push(ArrowPosition {
            edge: e,
            center,
            rank: 1,
            valid: false,
        });
    }
    out
}

pub fn generate_candidates(layout: &Layout) -> CandidateSet {
    let per_edge = (0..layout.graph.num_edges())
        .map(|e| edge_candidates(layout, EdgeId(e)))
        .collect();
    CandidateSet::new(layout.r_e, per_edge).expect("generated candidates satisfy invariants")
}

//! End-to-end placement: radii, candidates, conflict graph, solver, metrics.

use std::time::Instant;

use crate::conflict::{build_full, build_local, ConflictGraph};
use crate::error::Result;
use crate::format::{ArrowRecord, LayoutFile, PlacementFile};
use crate::model::{crossing_count, overlap_number, CandidateSet, Crossings, Layout, Placement, SolverTag};
use crate::posgen::{compute_radii, generate_candidates, RadiusConfig};
use crate::solve::{solve_editor, solve_exact, solve_greedy, SolveConfig};

#[derive(Debug, Clone)]
pub struct PlaceOptions {
    pub solver: SolverTag,
    pub radius: RadiusConfig,
    pub solve: SolveConfig,
    /// Explicit candidates replacing generation (their `r_e` wins).
    pub candidates: Option<CandidateSet>,
}

impl PlaceOptions {
    pub fn new(solver: SolverTag) -> Self {
        PlaceOptions {
            solver,
            radius: RadiusConfig::default(),
            solve: SolveConfig::default(),
            candidates: None,
        }
    }
}

#[derive(Debug, Clone)]
pub struct PlaceOutcome {
    pub layout: Layout,
    pub candidates: CandidateSet,
    /// Conflict edges of the graph the solver used; 0 for the editor.
    pub conflicts: usize,
    pub placement: Placement,
    pub overlaps: usize,
    pub crossings: Crossings,
    pub conflict_build_ms: f64,
    pub placement_ms: f64,
    pub total_ms: f64,
}

impl PlaceOutcome {
    pub fn to_file(&self, file: &LayoutFile) -> PlacementFile {
        PlacementFile {
            solver: self.placement.solver,
            proven_optimal: self.placement.proven_optimal,
            r_e: self.layout.r_e,
            overlaps: self.overlaps,
            crossings: self.crossings.crossings,
            invalid_positions: self.crossings.invalid_positions,
            rank_sum: self.placement.rank_sum(),
            conflict_build_ms: self.conflict_build_ms,
            placement_ms: self.placement_ms,
            total_ms: self.total_ms,
            arrows: self
                .placement
                .positions
                .iter()
                .map(|p| ArrowRecord {
                    edge_id: file.edge_ids[p.edge.0],
                    center: p.center,
                    rank: p.rank,
                    valid: p.valid,
                })
                .collect(),
        }
    }

    /// True when an exact run stopped at a limit before proving optimality.
    pub fn hit_limit(&self) -> bool {
        self.placement.solver == SolverTag::Exact && !self.placement.proven_optimal
    }
}

fn ms(start: Instant) -> f64 {
    start.elapsed().as_secs_f64() * 1e3
}

/// Resolves the radii: explicit overrides first, then the file's radii, then
/// the length rule. Explicit candidates fix `r_E`.
pub fn build_layout(file: &LayoutFile, opts: &PlaceOptions) -> Result<Layout> {
    let graph = file.digraph()?;
    let mut cfg = opts.radius.clone();
    if let Some(r) = file.radii {
        cfg.r_e = cfg.r_e.or(Some(r.r_e));
        cfg.r_v = cfg.r_v.or(Some(r.r_v));
    }
    if let Some(cs) = &opts.candidates {
        cfg.r_e = Some(cs.r_e);
    }
    let radii = compute_radii(&graph, &file.pos, &cfg)?;
    Layout::new(graph, file.pos.clone(), radii.r_v, radii.r_e)
}

pub fn build_conflicts(cs: &CandidateSet, layout: &Layout, solver: SolverTag) -> Option<ConflictGraph> {
    match solver {
        SolverTag::Exact | SolverTag::HeurGlobal => Some(build_full(cs)),
        SolverTag::HeurLocal => Some(build_local(cs, &layout.graph)),
        SolverTag::Editor => None,
    }
}

pub fn run_place(file: &LayoutFile, opts: &PlaceOptions) -> Result<PlaceOutcome> {
    let start = Instant::now();
    let layout = build_layout(file, opts)?;
    let candidates = match &opts.candidates {
        Some(cs) => {
            if cs.num_edges() != layout.graph.num_edges() {
                return Err(crate::Error::CandidateMismatch(format!(
                    "{} candidate lists for {} edges",
                    cs.num_edges(),
                    layout.graph.num_edges()
                )));
            }
            cs.clone()
        }
        None => generate_candidates(&layout),
    };

    let build_start = Instant::now();
    let cg = build_conflicts(&candidates, &layout, opts.solver);
    let conflict_build_ms = if cg.is_some() { ms(build_start) } else { 0.0 };

    let solve_start = Instant::now();
    let placement = match (&cg, opts.solver) {
        (Some(cg), SolverTag::Exact) => solve_exact(&candidates, cg, &opts.solve),
        (Some(cg), _) => solve_greedy(&candidates, cg, &opts.solve),
        (None, _) => solve_editor(&candidates, &layout),
    };
    let placement_ms = ms(solve_start);

    let overlaps = overlap_number(&placement, &layout);
    let crossings = crossing_count(&placement, &layout);
    log::info!(
        "{}: {} overlaps, {} crossings, {:.3} ms placement",
        opts.solver,
        overlaps,
        crossings.crossings,
        placement_ms
    );
    Ok(PlaceOutcome {
        conflicts: cg.as_ref().map_or(0, ConflictGraph::num_edges),
        layout,
        candidates,
        placement,
        overlaps,
        crossings,
        conflict_build_ms,
        placement_ms,
        total_ms: ms(start),
    })
}

//! Baseline that mimics a diagram editor: every arrow sits right next to its
//! target vertex, whatever it overlaps.

use crate::model::{ArrowPosition, CandidateSet, EdgeId, Layout, Placement, SolverTag};
use crate::posgen::editor_slot;

/// Places each arrow at distance `r_V + r_E` from the target (clamped to the
/// edge length). When that point is the edge's rank-1 candidate the candidate
/// is reused; otherwise the arrow gets rank 1 and a validity computed from the
/// geometry.
pub fn solve_editor(cs: &CandidateSet, layout: &Layout) -> Placement {
    let positions = (0..layout.graph.num_edges())
        .map(|e| {
            let e = EdgeId(e);
            let center = editor_slot(layout, e);
            let first = cs.positions(e)[0];
            let tol = 1e-9 * layout.r_e.max(1.0);
            if first.center.dist(center) <= tol {
                first
            } else {
                ArrowPosition {
                    edge: e,
                    center,
                    rank: 1,
                    valid: layout.is_valid_position(e, center),
                }
            }
        })
        .collect();
    Placement {
        positions,
        solver: SolverTag::Editor,
        proven_optimal: false,
    }
}

//! SVG rendering of a drawing with its arrows.
//!
//! Layout coordinates are written unchanged, so `y` grows downwards as in
//! any SVG viewer.

use std::fmt::Write as _;

use crate::error::Result;
use crate::geom::{circles_overlap_default, Circle, Point};
use crate::model::{CandidateSet, Layout, Placement};

#[derive(Debug, Clone, Default)]
pub struct RenderOptions<'a> {
    /// Draws every candidate position as a hollow circle.
    pub candidates: Option<&'a CandidateSet>,
    /// Marks each pair of overlapping arrows with a line between their centers.
    pub highlight_overlaps: bool,
}

/// Corners of the equilateral triangle inscribed in the arrow circle, apex
/// first, pointing from `source` towards `target`.
pub fn arrow_triangle(center: Point, radius: f64, source: Point, target: Point) -> [Point; 3] {
    let (dx, dy) = (target.x - source.x, target.y - source.y);
    let len = dx.hypot(dy);
    let base = if len > 0.0 { dy.atan2(dx) } else { 0.0 };
    let corner = |k: f64| {
        let a = base + k * std::f64::consts::TAU / 3.0;
        Point::new(center.x + radius * a.cos(), center.y + radius * a.sin())
    };
    [corner(0.0), corner(1.0), corner(2.0)]
}

fn bounds(layout: &Layout, pl: &Placement, extra: Option<&CandidateSet>) -> (f64, f64, f64, f64) {
    let mut pts: Vec<(Point, f64)> = layout.pos.iter().map(|&p| (p, layout.r_v)).collect();
    pts.extend(pl.positions.iter().map(|p| (p.center, layout.r_e)));
    if let Some(cs) = extra {
        pts.extend(cs.per_edge().iter().flatten().map(|p| (p.center, cs.r_e)));
    }
    let mut b = (f64::INFINITY, f64::INFINITY, f64::NEG_INFINITY, f64::NEG_INFINITY);
    for (p, r) in pts {
        b = (b.0.min(p.x - r), b.1.min(p.y - r), b.2.max(p.x + r), b.3.max(p.y + r));
    }
    if !b.0.is_finite() {
        return (0.0, 0.0, 1.0, 1.0);
    }
    let pad = layout.r_e.max(1.0);
    (b.0 - pad, b.1 - pad, b.2 + pad, b.3 + pad)
}

pub fn render_svg(layout: &Layout, pl: &Placement, opts: &RenderOptions) -> Result<String> {
    pl.check_matches(&layout.graph)?;
    let (x0, y0, x1, y1) = bounds(layout, pl, opts.candidates);
    let stroke = layout.r_e / 8.0;
    let mut s = String::new();
    let _ = writeln!(
        s,
        r#"<svg xmlns="http://www.w3.org/2000/svg" viewBox="{:.6} {:.6} {:.6} {:.6}" width="{:.0}" height="{:.0}">"#,
        x0,
        y0,
        x1 - x0,
        y1 - y0,
        (x1 - x0).max(1.0),
        (y1 - y0).max(1.0)
    );
    let _ = writeln!(
        s,
        "<style>.edge{{stroke:#555;stroke-width:{stroke:.6}}} .vertex{{fill:#fff;stroke:#000;stroke-width:{stroke:.6}}} \
         .arrow{{fill:#000}} .candidate{{fill:none;stroke:#2a7;stroke-width:{:.6}}} \
         .overlap{{stroke:#d00;stroke-width:{:.6}}}</style>",
        stroke / 2.0,
        stroke * 2.0
    );
    for e in 0..layout.graph.num_edges() {
        let seg = layout.segment(crate::model::EdgeId(e));
        let _ = writeln!(
            s,
            r#"<line class="edge" x1="{:.6}" y1="{:.6}" x2="{:.6}" y2="{:.6}"/>"#,
            seg.a.x, seg.a.y, seg.b.x, seg.b.y
        );
    }
    for p in &layout.pos {
        let _ = writeln!(
            s,
            r#"<circle class="vertex" cx="{:.6}" cy="{:.6}" r="{:.6}"/>"#,
            p.x, p.y, layout.r_v
        );
    }
    if let Some(cs) = opts.candidates {
        for p in cs.per_edge().iter().flatten() {
            let _ = writeln!(
                s,
                r#"<circle class="candidate" cx="{:.6}" cy="{:.6}" r="{:.6}"/>"#,
                p.center.x, p.center.y, cs.r_e
            );
        }
    }
    for p in &pl.positions {
        let tri = arrow_triangle(
            p.center,
            layout.r_e,
            layout.source_point(p.edge),
            layout.target_point(p.edge),
        );
        let pts: Vec<String> = tri.iter().map(|q| format!("{:.6},{:.6}", q.x, q.y)).collect();
        let _ = writeln!(s, r#"<polygon class="arrow" points="{}"/>"#, pts.join(" "));
    }
    if opts.highlight_overlaps {
        let circles: Vec<Circle> = pl.positions.iter().map(|p| Circle::new(p.center, layout.r_e)).collect();
        for i in 0..circles.len() {
            for j in i + 1..circles.len() {
                if circles_overlap_default(&circles[i], &circles[j]) {
                    let (a, b) = (circles[i].center, circles[j].center);
                    let _ = writeln!(
                        s,
                        r#"<line class="overlap" x1="{:.6}" y1="{:.6}" x2="{:.6}" y2="{:.6}"/>"#,
                        a.x, a.y, b.x, b.y
                    );
                }
            }
        }
    }
    s.push_str("</svg>\n");
    Ok(s)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::{ArrowPosition, Digraph, EdgeId, SolverTag};

    fn close(a: Point, b: Point) -> bool {
        a.dist(b) < 1e-12
    }

    #[test]
    fn apex_follows_edge_direction() {
        let c = Point::new(5.0, 5.0);
        let t = arrow_triangle(c, 2.0, Point::new(0.0, 5.0), Point::new(10.0, 5.0));
        assert!(close(t[0], Point::new(7.0, 5.0)));
        let t = arrow_triangle(c, 2.0, Point::new(5.0, 10.0), Point::new(5.0, 0.0));
        assert!(close(t[0], Point::new(5.0, 3.0)));
        for q in t {
            assert!((q.dist(c) - 2.0).abs() < 1e-12);
        }
    }

    fn sample(overlap: bool) -> (Layout, Placement) {
        let g = Digraph::new(3, vec![(0, 1), (2, 1)]).unwrap();
        let pos = vec![Point::new(0.0, 0.0), Point::new(50.0, 0.0), Point::new(50.0, 50.0)];
        let layout = Layout::new(g, pos, 3.0, 3.0).unwrap();
        let second = if overlap { Point::new(48.0, 2.0) } else { Point::new(50.0, 20.0) };
        let pl = Placement {
            positions: vec![
                ArrowPosition {
                    edge: EdgeId(0),
                    center: Point::new(44.0, 0.0),
                    rank: 1,
                    valid: true,
                },
                ArrowPosition {
                    edge: EdgeId(1),
                    center: second,
                    rank: 1,
                    valid: true,
                },
            ],
            solver: SolverTag::Exact,
            proven_optimal: true,
        };
        (layout, pl)
    }

    #[test]
    fn element_counts() {
        let (layout, pl) = sample(true);
        let opts = RenderOptions {
            highlight_overlaps: true,
            ..RenderOptions::default()
        };
        let svg = render_svg(&layout, &pl, &opts).unwrap();
        assert_eq!(svg.matches(r#"class="vertex""#).count(), 3);
        assert_eq!(svg.matches(r#"<line class="edge""#).count(), 2);
        assert_eq!(svg.matches(r#"class="arrow""#).count(), 2);
        assert_eq!(svg.matches(r#"class="overlap""#).count(), 1);
        let (layout, pl) = sample(false);
        let svg = render_svg(&layout, &pl, &opts).unwrap();
        assert_eq!(svg.matches(r#"class="overlap""#).count(), 0);
    }

    #[test]
    fn mismatched_placement_is_rejected() {
        let (layout, mut pl) = sample(false);
        pl.positions.pop();
        assert!(render_svg(&layout, &pl, &RenderOptions::default()).is_err());
    }
}

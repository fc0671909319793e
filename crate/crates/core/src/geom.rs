//! Planar primitives and the overlap predicates that validity and conflicts
//! are defined on.
//!
//! Overlap is the open-disk predicate: a circle overlaps another circle (or a
//! segment) when the distance falls strictly below the radius sum (or the
//! radius) by more than a tolerance. Tangency is never an overlap.

use std::sync::atomic::{AtomicU64, Ordering};

use serde::{Deserialize, Serialize};

/// Relative tolerance used when callers do not pass an explicit epsilon.
pub const DEFAULT_REL_EPS: f64 = 1e-9;

static REL_EPS_BITS: AtomicU64 = AtomicU64::new(0x3E11_2E0B_E826_D695); // 1e-9

/// Overrides the process-wide relative tolerance.
pub fn set_rel_eps(rel: f64) {
    assert!(rel.is_finite() && rel >= 0.0, "tolerance must be finite and >= 0");
    REL_EPS_BITS.store(rel.to_bits(), Ordering::Relaxed);
}

pub fn rel_eps() -> f64 {
    f64::from_bits(REL_EPS_BITS.load(Ordering::Relaxed))
}

/// Absolute tolerance for a comparison whose natural length scale is `scale`.
pub fn eps_for(scale: f64) -> f64 {
    rel_eps() * scale.abs().max(1.0)
}

#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
pub struct Point {
    pub x: f64,
    pub y: f64,
}

impl Point {
    pub const fn new(x: f64, y: f64) -> Self {
        Point { x, y }
    }

    pub fn dist(self, other: Point) -> f64 {
        (self.x - other.x).hypot(self.y - other.y)
    }

    pub fn is_finite(self) -> bool {
        self.x.is_finite() && self.y.is_finite()
    }

    /// Point at distance `t` from `self` in the direction of `towards`.
    /// Returns `self` when both points coincide.
    pub fn towards(self, towards: Point, t: f64) -> Point {
        let len = self.dist(towards);
        if len == 0.0 {
            return self;
        }
        let k = t / len;
        Point::new(
            self.x + (towards.x - self.x) * k,
            self.y + (towards.y - self.y) * k,
        )
    }

    pub fn midpoint(self, other: Point) -> Point {
        Point::new((self.x + other.x) * 0.5, (self.y + other.y) * 0.5)
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Segment {
    pub a: Point,
    pub b: Point,
}

impl Segment {
    pub const fn new(a: Point, b: Point) -> Self {
        Segment { a, b }
    }

    pub fn length(&self) -> f64 {
        self.a.dist(self.b)
    }

    /// Closest point of the segment to `p`. A zero-length segment is its
    /// single point.
    pub fn closest_point(&self, p: Point) -> Point {
        let dx = self.b.x - self.a.x;
        let dy = self.b.y - self.a.y;
        let len2 = dx * dx + dy * dy;
        if len2 == 0.0 {
            return self.a;
        }
        let t = (((p.x - self.a.x) * dx + (p.y - self.a.y) * dy) / len2).clamp(0.0, 1.0);
        Point::new(self.a.x + t * dx, self.a.y + t * dy)
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Circle {
    pub center: Point,
    pub radius: f64,
}

impl Circle {
    pub const fn new(center: Point, radius: f64) -> Self {
        Circle { center, radius }
    }
}

pub fn dist_point_segment(p: Point, s: &Segment) -> f64 {
    p.dist(s.closest_point(p))
}

/// True iff the open disks intersect: `dist(centers) < r1 + r2 - eps`.
pub fn circles_overlap(c1: &Circle, c2: &Circle, eps: f64) -> bool {
    c1.center.dist(c2.center) < c1.radius + c2.radius - eps
}

/// True iff the segment meets the open disk: `dist(center, s) < radius - eps`.
pub fn circle_segment_overlap(c: &Circle, s: &Segment, eps: f64) -> bool {
    dist_point_segment(c.center, s) < c.radius - eps
}

/// [`circles_overlap`] with the process-wide tolerance scaled by the radii.
pub fn circles_overlap_default(c1: &Circle, c2: &Circle) -> bool {
    circles_overlap(c1, c2, eps_for(c1.radius + c2.radius))
}

/// [`circle_segment_overlap`] with the process-wide tolerance.
pub fn circle_segment_overlap_default(c: &Circle, s: &Segment) -> bool {
    circle_segment_overlap(c, s, eps_for(c.radius))
}

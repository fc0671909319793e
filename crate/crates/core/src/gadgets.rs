//! Hardness gadgets built from triangle and trapezoid blocks.
//!
//! Every construction is laid out in units of the arrow radius and scaled at
//! the end, so coordinates depend only on `r_E` and the anchor. Vertices are
//! points (`r_V = 0`) and candidate positions are explicit tangent centers.
//! Index 0 of a two-position edge is its "solid" position, index 1 its
//! "dashed" one.
//!
//! Conventions for the single-clause assembly:
//! * a variable is true when its chain sits in the solid placement;
//! * a leg is solid when its literal is true;
//! * a plain literal's leg stands on the shared endpoint of the chain's first
//!   two lower bases, a negated literal's leg on the middle of the first one.

use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};
use crate::geom::Point;
use crate::model::{ArrowPosition, CandidateSet, Digraph, EdgeId, Layout};

const SQRT3: f64 = 1.732_050_807_568_877_2;

/// Triangle side and trapezoid minor base, in units of `r_E`.
pub fn side() -> f64 {
    2.0 * SQRT3
}

/// Trapezoid height and spacing between stacked lines, in units of `r_E`.
pub fn height() -> f64 {
    1.0 + std::f64::consts::SQRT_2 / 2.0
}

/// Distance of a triangle candidate from its nearer corner.
fn tri_offset() -> f64 {
    2.0 / SQRT3
}

/// Offset of a base candidate from the base's left end: tangent to the
/// diagonal arrow of the trapezoid below.
fn base_offset() -> f64 {
    let h = height();
    (1.0 - h) + (4.0 - (h - 1.0) * (h - 1.0)).sqrt()
}

/// Length of the clause edge `e*`, in units of `r_E`.
pub fn e_star_length() -> f64 {
    4.0 * SQRT3 - 2.0
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PositionLabel {
    Solid,
    Dashed,
    /// Only position of a diagonal trapezoid edge.
    Single,
    /// One of the sampled positions of `e*`.
    Sample,
}

impl PositionLabel {
    pub fn as_str(self) -> &'static str {
        match self {
            PositionLabel::Solid => "solid",
            PositionLabel::Dashed => "dashed",
            PositionLabel::Single => "single",
            PositionLabel::Sample => "sample",
        }
    }
}

impl fmt::Display for PositionLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for PositionLabel {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, Self::Err> {
        [
            PositionLabel::Solid,
            PositionLabel::Dashed,
            PositionLabel::Single,
            PositionLabel::Sample,
        ]
        .into_iter()
        .find(|l| l.as_str() == s)
        .ok_or_else(|| format!("unknown position label '{s}'"))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TrapezoidOrientation {
    /// Major base extends to the left of the minor base.
    QLeft,
    /// Major base extends to the right.
    QRight,
}

/// State a leg can be pinned to.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum LegState {
    Solid,
    Dashed,
    Free,
}

impl FromStr for LegState {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, Self::Err> {
        match s {
            "s" | "solid" => Ok(LegState::Solid),
            "d" | "dashed" => Ok(LegState::Dashed),
            "f" | "free" => Ok(LegState::Free),
            _ => Err(format!("unknown leg state '{s}' (expected s, d or f)")),
        }
    }
}

/// How the candidates of `e*` are sampled along its feasible sub-segment.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum EStarSampling {
    /// Spacing in units of `r_E`, starting at the left end.
    Step(f64),
    /// This many evenly spaced samples including both ends.
    Dense(usize),
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ClauseOptions {
    pub negated: [bool; 3],
    pub legs_k: usize,
    pub chain_blocks: usize,
    pub e_star: EStarSampling,
    /// Attach a 5-block variable chain under every leg.
    pub with_variables: bool,
}

impl Default for ClauseOptions {
    fn default() -> Self {
        ClauseOptions {
            negated: [false; 3],
            legs_k: 3,
            chain_blocks: 9,
            e_star: EStarSampling::Step(0.25),
            with_variables: true,
        }
    }
}

/// A gadget drawing with its explicit candidates.
#[derive(Debug, Clone, PartialEq)]
pub struct GadgetAssembly {
    pub layout: Layout,
    pub candidates: CandidateSet,
    /// Label of every candidate, parallel to the candidate lists.
    pub labels: Vec<Vec<PositionLabel>>,
    /// Horizontal bases of each leg, bottom first.
    pub legs: Vec<Vec<EdgeId>>,
    /// Edge whose choice encodes each variable (index 0 = true).
    pub variables: Vec<EdgeId>,
    pub e_star: Option<EdgeId>,
}

impl GadgetAssembly {
    /// Maps every solid choice to dashed and back; other edges keep their
    /// choice.
    pub fn reflect(&self, choice: &[usize]) -> Vec<usize> {
        choice
            .iter()
            .zip(&self.labels)
            .map(|(&i, labels)| match labels.as_slice() {
                [PositionLabel::Solid, PositionLabel::Dashed] => 1 - i,
                _ => i,
            })
            .collect()
    }

    /// Fixings pinning the bottom base of each leg.
    pub fn leg_fixings(&self, states: &[LegState]) -> Result<Vec<Option<usize>>> {
        if states.len() != self.legs.len() {
            return Err(Error::Gadget(format!(
                "{} leg states for {} legs",
                states.len(),
                self.legs.len()
            )));
        }
        let mut fixed = vec![None; self.candidates.num_edges()];
        for (leg, state) in self.legs.iter().zip(states) {
            fixed[leg[0].0] = match state {
                LegState::Solid => Some(0),
                LegState::Dashed => Some(1),
                LegState::Free => None,
            };
        }
        Ok(fixed)
    }

    /// Fixings encoding a truth assignment of the variables.
    pub fn variable_fixings(&self, values: &[bool]) -> Result<Vec<Option<usize>>> {
        if values.len() != self.variables.len() {
            return Err(Error::Gadget(format!(
                "{} values for {} variables",
                values.len(),
                self.variables.len()
            )));
        }
        let mut fixed = vec![None; self.candidates.num_edges()];
        for (&e, &v) in self.variables.iter().zip(values) {
            fixed[e.0] = Some(usize::from(!v));
        }
        Ok(fixed)
    }

    /// Copy whose candidate lists keep only the fixed positions.
    pub fn restricted(&self, fixed: &[Option<usize>]) -> Result<GadgetAssembly> {
        let candidates = self.candidates.restrict(fixed)?;
        let labels = self
            .labels
            .iter()
            .zip(fixed)
            .map(|(l, f)| match f {
                Some(i) => vec![l[*i]],
                None => l.clone(),
            })
            .collect();
        Ok(GadgetAssembly {
            candidates,
            labels,
            ..self.clone()
        })
    }
}

/// Collects vertices and edges in unit coordinates, merging coincident
/// vertices and repeated vertex pairs.
#[derive(Default)]
struct Builder {
    verts: Vec<(f64, f64)>,
    edges: Vec<(usize, usize)>,
    cands: Vec<Vec<((f64, f64), PositionLabel)>>,
}

impl Builder {
    fn vertex(&mut self, p: (f64, f64)) -> usize {
        if let Some(i) = self
            .verts
            .iter()
            .position(|q| (p.0 - q.0).abs() < 1e-7 && (p.1 - q.1).abs() < 1e-7)
        {
            return i;
        }
        self.verts.push(p);
        self.verts.len() - 1
    }

    fn edge(&mut self, a: (f64, f64), b: (f64, f64), cands: Vec<((f64, f64), PositionLabel)>) -> EdgeId {
        let (ia, ib) = (self.vertex(a), self.vertex(b));
        if let Some(i) = self
            .edges
            .iter()
            .position(|&(x, y)| (x == ia && y == ib) || (x == ib && y == ia))
        {
            return EdgeId(i);
        }
        self.edges.push((ia, ib));
        self.cands.push(cands);
        EdgeId(self.edges.len() - 1)
    }

    /// Two-position edge; `solid` first.
    fn pair(&mut self, a: (f64, f64), b: (f64, f64), solid: (f64, f64), dashed: (f64, f64)) -> EdgeId {
        self.edge(a, b, vec![(solid, PositionLabel::Solid), (dashed, PositionLabel::Dashed)])
    }

    fn finish(self, r_e: f64, anchor: Point) -> Result<Parts> {
        if !(r_e.is_finite() && r_e > 0.0) {
            return Err(Error::InvalidRadius(format!("r_E must be positive, got {r_e}")));
        }
        let map = |(x, y): (f64, f64)| Point::new(anchor.x + x * r_e, anchor.y + y * r_e);
        let graph = Digraph::new(self.verts.len(), self.edges)?;
        let layout = Layout::new(graph, self.verts.into_iter().map(map).collect(), 0.0, r_e)?;
        let mut labels = Vec::with_capacity(self.cands.len());
        let per_edge = self
            .cands
            .into_iter()
            .enumerate()
            .map(|(e, list)| {
                labels.push(list.iter().map(|&(_, l)| l).collect());
                list.into_iter()
                    .enumerate()
                    .map(|(i, (c, _))| ArrowPosition {
                        edge: EdgeId(e),
                        center: map(c),
                        rank: i as u32 + 1,
                        valid: true,
                    })
                    .collect()
            })
            .collect();
        let candidates = CandidateSet::new(r_e, per_edge)?;
        Ok(Parts {
            layout,
            candidates,
            labels,
        })
    }
}

struct Parts {
    layout: Layout,
    candidates: CandidateSet,
    labels: Vec<Vec<PositionLabel>>,
}

impl Parts {
    fn assemble(self, legs: Vec<Vec<EdgeId>>, variables: Vec<EdgeId>, e_star: Option<EdgeId>) -> GadgetAssembly {
        GadgetAssembly {
            layout: self.layout,
            candidates: self.candidates,
            labels: self.labels,
            legs,
            variables,
            e_star,
        }
    }
}

fn towards(a: (f64, f64), b: (f64, f64), t: f64) -> (f64, f64) {
    let len = ((b.0 - a.0).powi(2) + (b.1 - a.1).powi(2)).sqrt();
    (a.0 + (b.0 - a.0) * t / len, a.1 + (b.1 - a.1) * t / len)
}

/// Triangle whose horizontal side starts at `left` (unit coordinates).
/// Returns the id of the horizontal side.
fn triangle(b: &mut Builder, left: (f64, f64), flip: bool) -> EdgeId {
    let (x, y) = left;
    let s = side();
    let t = tri_offset();
    let near = |a, c| towards(a, c, t);
    if !flip {
        let (bl, br, apex) = ((x, y), (x + s, y), (x + s / 2.0, y + 3.0));
        let base = b.pair(bl, br, near(bl, br), near(br, bl));
        b.pair(bl, apex, near(apex, bl), near(bl, apex));
        b.pair(br, apex, near(br, apex), near(apex, br));
        base
    } else {
        let (pl, pr, bottom) = ((x, y), (x + s, y), (x + s / 2.0, y - 3.0));
        let base = b.pair(pl, pr, near(pl, pr), near(pr, pl));
        b.pair(pl, bottom, near(bottom, pl), near(pl, bottom));
        b.pair(pr, bottom, near(pr, bottom), near(bottom, pr));
        base
    }
}

/// Chain of `k` triangles, upright ones with their base on `y`, flipped ones
/// with their base on `y + 3`. Returns the id of the first base.
fn chain(b: &mut Builder, k: usize, origin: (f64, f64)) -> EdgeId {
    let (x, y) = origin;
    let s = side();
    let mut first = None;
    for i in 0..k {
        let id = if i % 2 == 0 {
            triangle(b, (x + (i / 2) as f64 * s, y), false)
        } else {
            triangle(b, (x + s / 2.0 + (i / 2) as f64 * s, y + 3.0), true)
        };
        first.get_or_insert(id);
    }
    first.expect("k >= 1")
}

/// Leg of `k` stacked trapezoids whose top base starts at `origin` and has
/// length `top_len`. Bases use candidates at `a` and `b` from the left end of
/// the top base; `top` replaces the candidates of the top base. Returns the
/// base ids, bottom first.
fn leg(
    bl: &mut Builder,
    k: usize,
    origin: (f64, f64),
    top_len: f64,
    a: f64,
    b: f64,
    top: Option<Vec<((f64, f64), PositionLabel)>>,
) -> Vec<EdgeId> {
    let (ox, oy) = origin;
    let h = height();
    let mut bases = Vec::with_capacity(k + 1);
    let mut top = top;
    for j in 0..=k {
        let y = oy - (k - j) as f64 * h;
        let (pa, pb) = ((ox + a, y), (ox + b, y));
        let (xl, xr) = if j == k {
            (ox, ox + top_len)
        } else if (k - j) % 2 == 1 {
            (ox - h, ox + top_len)
        } else {
            (ox, ox + top_len + h)
        };
        let id = match top.take_if(|_| j == k) {
            Some(list) => bl.edge((xl, y), (xr, y), list),
            None if j % 2 == 0 => bl.pair((xl, y), (xr, y), pa, pb),
            None => bl.pair((xl, y), (xr, y), pb, pa),
        };
        bases.push(id);
    }
    for j in 1..=k {
        let y0 = oy - (k - j + 1) as f64 * h;
        let y1 = y0 + h;
        let (p0, p1, c) = if (k - j).is_multiple_of(2) {
            ((ox - h, y0), (ox, y1), (ox - h + 1.0, y0 + 1.0))
        } else {
            ((ox + top_len + h, y0), (ox + top_len, y1), (ox + top_len + h - 1.0, y0 + 1.0))
        };
        bl.edge(p0, p1, vec![(c, PositionLabel::Single)]);
    }
    bases
}

/// A single equilateral triangle with side `2√3 r_E`, its horizontal side
/// centered on `base_mid`. Upright unless `flip`.
pub fn make_triangle_block(base_mid: Point, flip: bool, r_e: f64) -> Result<GadgetAssembly> {
    let mut b = Builder::default();
    triangle(&mut b, (-side() / 2.0, 0.0), flip);
    Ok(b.finish(r_e, base_mid)?.assemble(Vec::new(), Vec::new(), None))
}

/// A trapezoid block: minor base of length `2√3 r_E` starting at `anchor`,
/// major base one height below, and a 45° diagonal on the side given by
/// `orientation`.
pub fn make_trapezoid_block(orientation: TrapezoidOrientation, anchor: Point, r_e: f64) -> Result<GadgetAssembly> {
    let mut b = Builder::default();
    let m = side();
    let h = height();
    let (a, bb) = (base_offset(), m - base_offset());
    let bases = match orientation {
        TrapezoidOrientation::QLeft => leg(&mut b, 1, (0.0, 0.0), m, a, bb, None),
        TrapezoidOrientation::QRight => {
            // Mirror image of the left-handed block.
            let top = b.pair((0.0, 0.0), (m, 0.0), (m - bb, 0.0), (m - a, 0.0));
            let bottom = b.pair((0.0, -h), (m + h, -h), (m - a, -h), (m - bb, -h));
            b.edge((m + h, -h), (m, 0.0), vec![((m + h - 1.0, 1.0 - h), PositionLabel::Single)]);
            vec![bottom, top]
        }
    };
    Ok(b.finish(r_e, anchor)?.assemble(vec![bases], Vec::new(), None))
}

/// Horizontal chain of `k` triangles starting at `origin` (the left corner
/// of the first, upright, triangle's base).
pub fn make_variable_chain(k: usize, origin: Point, r_e: f64) -> Result<GadgetAssembly> {
    if k < 5 || k.is_multiple_of(2) {
        return Err(Error::Gadget(format!("variable chain needs an odd k >= 5, got {k}")));
    }
    let mut b = Builder::default();
    let first = chain(&mut b, k, (0.0, 0.0));
    Ok(b.finish(r_e, origin)?.assemble(Vec::new(), vec![first], None))
}

/// Vertical chain of `k` alternating trapezoids. `anchor` is the left end of
/// the top base.
pub fn make_leg_chain(k: usize, anchor: Point, r_e: f64) -> Result<GadgetAssembly> {
    if k == 0 || k.is_multiple_of(2) {
        return Err(Error::Gadget(format!("leg chain needs an odd k, got {k}")));
    }
    let mut b = Builder::default();
    let m = side();
    let bases = leg(&mut b, k, (0.0, 0.0), m, base_offset(), m - base_offset(), None);
    Ok(b.finish(r_e, anchor)?.assemble(vec![bases], Vec::new(), None))
}

/// Single-clause assembly with default options; `negated[i]` selects the
/// polarity of literal `i`.
pub fn make_clause_gadget(negated: [bool; 3], r_e: f64) -> Result<GadgetAssembly> {
    make_clause_gadget_with(
        &ClauseOptions {
            negated,
            ..ClauseOptions::default()
        },
        r_e,
    )
}

/// Single-clause assembly. The tangent point between the two horizontal
/// chains is the origin; `e*` lies on the line one height below it.
pub fn make_clause_gadget_with(opts: &ClauseOptions, r_e: f64) -> Result<GadgetAssembly> {
    let (l, k) = (opts.chain_blocks, opts.legs_k);
    if l < 5 || l % 2 == 0 {
        return Err(Error::Gadget(format!("clause chains need an odd length >= 5, got {l}")));
    }
    if k == 0 || k % 2 == 0 {
        return Err(Error::Gadget(format!("clause legs need an odd k, got {k}")));
    }
    let s = side();
    let m = s;
    let h = height();
    let lo = base_offset();
    let gap = 2.0 - 2.0 / SQRT3;
    let mut b = Builder::default();

    let left_origin = (-gap / 2.0 - l.div_ceil(2) as f64 * s, h);
    chain(&mut b, l, left_origin);
    chain(&mut b, l, (gap / 2.0, h));

    let mut legs = Vec::with_capacity(3);
    let mut feet = Vec::with_capacity(3);

    let left_mid = left_origin.0 + s / 2.0;
    legs.push(leg(&mut b, k, (left_mid - m / 2.0, 0.0), m, lo, m - lo, None));
    feet.push(left_mid);

    let len = e_star_length();
    let xl = -len / 2.0;
    let (lo_x, hi_x) = (xl + lo, xl + len - 1.0);
    let xs: Vec<f64> = match opts.e_star {
        EStarSampling::Step(step) => {
            if !(step.is_finite() && step > 0.0) {
                return Err(Error::Gadget(format!("e* step must be positive, got {step}")));
            }
            (0..)
                .map(|i| lo_x + i as f64 * step)
                .take_while(|&x| x <= hi_x + 1e-12)
                .collect()
        }
        EStarSampling::Dense(n) => {
            if n < 2 {
                return Err(Error::Gadget(format!("dense e* sampling needs >= 2 samples, got {n}")));
            }
            (0..n)
                .map(|i| lo_x + (hi_x - lo_x) * i as f64 / (n - 1) as f64)
                .collect()
        }
    };
    let top = xs.into_iter().map(|x| ((x, 0.0), PositionLabel::Sample)).collect();
    let mid_b = (lo + len - 1.0) / 2.0;
    let middle = leg(&mut b, k, (xl, 0.0), len, lo, mid_b, Some(top));
    let e_star = *middle.last().expect("leg has bases");
    legs.push(middle);
    feet.push(xl + (lo + mid_b) / 2.0);

    let right_mid = gap / 2.0 + ((l - 1) / 2) as f64 * s;
    legs.push(leg(&mut b, k, (right_mid - m / 2.0, 0.0), m, lo, m - lo, None));
    feet.push(right_mid);

    let mut variables = Vec::new();
    if opts.with_variables {
        let bottom = -(k as f64) * h - h;
        for (&q, &neg) in feet.iter().zip(&opts.negated) {
            let x = if neg { q - s } else { q - 1.5 * s };
            variables.push(chain(&mut b, 5, (x, bottom - 3.0)));
        }
    }
    Ok(b.finish(r_e, Point::new(0.0, 0.0))?.assemble(legs, variables, Some(e_star)))
}

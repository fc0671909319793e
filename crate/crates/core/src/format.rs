//! Line-oriented text formats for layouts, placements and candidate sets.
//!
//! Every file starts with a version header, then one record per line. Blank
//! lines and lines starting with `#` are ignored. Coordinates and radii are
//! written with six decimals, timings with three.
//!
//! ```text
//! arrowplace-layout v1
//! radii 10.000000 10.000000        (optional: r_V r_E)
//! node <id> <x> <y>
//! edge <id> <source-node-id> <target-node-id>
//! ```

use std::collections::HashMap;
use std::fmt::Write as _;

use crate::error::{Error, Result};
use crate::gadgets::{GadgetAssembly, PositionLabel};
use crate::geom::Point;
use crate::model::{ArrowPosition, CandidateSet, Digraph, EdgeId, Layout, Placement, SolverTag};
use crate::posgen::Radii;

pub const LAYOUT_HEADER: &str = "arrowplace-layout v1";
pub const PLACEMENT_HEADER: &str = "arrowplace-placement v1";
pub const CANDIDATES_HEADER: &str = "arrowplace-candidates v1";

fn err(line: usize, msg: impl Into<String>) -> Error {
    Error::Parse {
        line,
        msg: msg.into(),
    }
}

/// Non-empty, non-comment lines with their 1-based numbers, header checked.
fn records<'a>(text: &'a str, header: &str) -> Result<Vec<(usize, Vec<&'a str>)>> {
    let mut lines = text
        .lines()
        .enumerate()
        .map(|(i, l)| (i + 1, l.trim()))
        .filter(|(_, l)| !l.is_empty() && !l.starts_with('#'));
    match lines.next() {
        Some((_, l)) if l == header => {}
        Some((n, l)) => return Err(err(n, format!("expected header '{header}', found '{l}'"))),
        None => return Err(err(1, format!("empty file, expected header '{header}'"))),
    }
    Ok(lines.map(|(n, l)| (n, l.split_whitespace().collect())).collect())
}

fn field<T: std::str::FromStr>(line: usize, fields: &[&str], i: usize, what: &str) -> Result<T> {
    let raw = fields
        .get(i)
        .ok_or_else(|| err(line, format!("missing field '{what}'")))?;
    raw.parse()
        .map_err(|_| err(line, format!("field '{what}': cannot parse '{raw}'")))
}

fn float(line: usize, fields: &[&str], i: usize, what: &str) -> Result<f64> {
    let v: f64 = field(line, fields, i, what)?;
    if !v.is_finite() {
        return Err(err(line, format!("field '{what}' must be finite")));
    }
    Ok(v)
}

fn arity(line: usize, fields: &[&str], n: usize) -> Result<()> {
    if fields.len() != n {
        return Err(err(
            line,
            format!("'{}' takes {} fields, found {}", fields[0], n - 1, fields.len() - 1),
        ));
    }
    Ok(())
}

fn parse_bool(line: usize, fields: &[&str], i: usize, what: &str) -> Result<bool> {
    match fields.get(i).copied() {
        Some("true") => Ok(true),
        Some("false") => Ok(false),
        Some(other) => Err(err(line, format!("field '{what}': expected true or false, found '{other}'"))),
        None => Err(err(line, format!("missing field '{what}'"))),
    }
}

/// A drawing as stored on disk: arbitrary unique node and edge ids mapped to
/// dense indices in file order.
#[derive(Debug, Clone, PartialEq)]
pub struct LayoutFile {
    pub node_ids: Vec<u64>,
    pub pos: Vec<Point>,
    pub edge_ids: Vec<u64>,
    /// Endpoints as dense vertex indices.
    pub edges: Vec<(usize, usize)>,
    pub radii: Option<Radii>,
}

impl LayoutFile {
    /// Ids equal to the dense indices.
    pub fn from_parts(graph: &Digraph, pos: &[Point], radii: Option<Radii>) -> Self {
        LayoutFile {
            node_ids: (0..pos.len() as u64).collect(),
            pos: pos.to_vec(),
            edge_ids: (0..graph.num_edges() as u64).collect(),
            edges: graph.edges().iter().map(|e| (e.source.0, e.target.0)).collect(),
            radii,
        }
    }

    pub fn from_layout(layout: &Layout) -> Self {
        Self::from_parts(
            &layout.graph,
            &layout.pos,
            Some(Radii {
                r_v: layout.r_v,
                r_e: layout.r_e,
            }),
        )
    }

    pub fn digraph(&self) -> Result<Digraph> {
        Digraph::new(self.pos.len(), self.edges.clone())
    }

    pub fn edge_index(&self) -> HashMap<u64, usize> {
        self.edge_ids.iter().enumerate().map(|(i, &id)| (id, i)).collect()
    }

    pub fn parse(text: &str) -> Result<Self> {
        let mut out = LayoutFile {
            node_ids: Vec::new(),
            pos: Vec::new(),
            edge_ids: Vec::new(),
            edges: Vec::new(),
            radii: None,
        };
        let mut nodes: HashMap<u64, usize> = HashMap::new();
        let mut edge_seen: HashMap<u64, usize> = HashMap::new();
        let mut pending_edges = Vec::new();
        for (line, f) in records(text, LAYOUT_HEADER)? {
            match f[0] {
                "radii" => {
                    arity(line, &f, 3)?;
                    if out.radii.is_some() {
                        return Err(err(line, "duplicate 'radii' record"));
                    }
                    let (r_v, r_e) = (float(line, &f, 1, "r_v")?, float(line, &f, 2, "r_e")?);
                    if r_v < 0.0 || r_e <= 0.0 {
                        return Err(err(line, format!("radii must satisfy r_v >= 0 and r_e > 0, got {r_v} {r_e}")));
                    }
                    out.radii = Some(Radii { r_v, r_e });
                }
                "node" => {
                    arity(line, &f, 4)?;
                    let id: u64 = field(line, &f, 1, "id")?;
                    let p = Point::new(float(line, &f, 2, "x")?, float(line, &f, 3, "y")?);
                    if nodes.insert(id, out.pos.len()).is_some() {
                        return Err(err(line, format!("duplicate node id {id}")));
                    }
                    out.node_ids.push(id);
                    out.pos.push(p);
                }
                "edge" => {
                    arity(line, &f, 4)?;
                    let id: u64 = field(line, &f, 1, "id")?;
                    let s: u64 = field(line, &f, 2, "source")?;
                    let t: u64 = field(line, &f, 3, "target")?;
                    if edge_seen.insert(id, out.edge_ids.len()).is_some() {
                        return Err(err(line, format!("duplicate edge id {id}")));
                    }
                    if s == t {
                        return Err(err(line, format!("edge {id} is a self-loop on node {s}")));
                    }
                    out.edge_ids.push(id);
                    pending_edges.push((line, id, s, t));
                }
                other => return Err(err(line, format!("unknown record '{other}'"))),
            }
        }
        for (line, id, s, t) in pending_edges {
            let lookup = |v: u64| {
                nodes
                    .get(&v)
                    .copied()
                    .ok_or_else(|| err(line, format!("edge {id} references unknown node {v}")))
            };
            out.edges.push((lookup(s)?, lookup(t)?));
        }
        Ok(out)
    }

    pub fn to_text(&self) -> String {
        let mut s = String::new();
        s.push_str(LAYOUT_HEADER);
        s.push('\n');
        if let Some(r) = self.radii {
            let _ = writeln!(s, "radii {:.6} {:.6}", r.r_v, r.r_e);
        }
        for (id, p) in self.node_ids.iter().zip(&self.pos) {
            let _ = writeln!(s, "node {id} {:.6} {:.6}", p.x, p.y);
        }
        for (id, &(a, b)) in self.edge_ids.iter().zip(&self.edges) {
            let _ = writeln!(s, "edge {id} {} {}", self.node_ids[a], self.node_ids[b]);
        }
        s
    }
}

/// One line of a placement file.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ArrowRecord {
    pub edge_id: u64,
    pub center: Point,
    pub rank: u32,
    pub valid: bool,
}

/// A placement with its summary metrics.
#[derive(Debug, Clone, PartialEq)]
pub struct PlacementFile {
    pub solver: SolverTag,
    pub proven_optimal: bool,
    pub r_e: f64,
    pub overlaps: usize,
    pub crossings: usize,
    pub invalid_positions: usize,
    pub rank_sum: u64,
    pub conflict_build_ms: f64,
    pub placement_ms: f64,
    pub total_ms: f64,
    pub arrows: Vec<ArrowRecord>,
}

impl PlacementFile {
    /// Resolves edge ids against `layout` into a [`Placement`].
    pub fn to_placement(&self, layout: &LayoutFile) -> Result<Placement> {
        if self.arrows.len() != layout.edge_ids.len() {
            return Err(Error::PlacementMismatch(format!(
                "{} arrows for {} edges",
                self.arrows.len(),
                layout.edge_ids.len()
            )));
        }
        let index = layout.edge_index();
        let mut slots: Vec<Option<ArrowPosition>> = vec![None; layout.edge_ids.len()];
        for a in &self.arrows {
            let e = *index
                .get(&a.edge_id)
                .ok_or_else(|| Error::PlacementMismatch(format!("unknown edge id {}", a.edge_id)))?;
            if slots[e].is_some() {
                return Err(Error::PlacementMismatch(format!("edge {} placed twice", a.edge_id)));
            }
            slots[e] = Some(ArrowPosition {
                edge: EdgeId(e),
                center: a.center,
                rank: a.rank,
                valid: a.valid,
            });
        }
        Ok(Placement {
            positions: slots.into_iter().map(|p| p.expect("every edge placed")).collect(),
            solver: self.solver,
            proven_optimal: self.proven_optimal,
        })
    }

    pub fn parse(text: &str) -> Result<Self> {
        let mut kv: HashMap<&str, (usize, &str)> = HashMap::new();
        let mut arrows = Vec::new();
        for (line, f) in records(text, PLACEMENT_HEADER)? {
            if f[0] == "arrow" {
                arity(line, &f, 6)?;
                arrows.push(ArrowRecord {
                    edge_id: field(line, &f, 1, "edge")?,
                    center: Point::new(float(line, &f, 2, "x")?, float(line, &f, 3, "y")?),
                    rank: field(line, &f, 4, "rank")?,
                    valid: parse_bool(line, &f, 5, "valid")?,
                });
            } else {
                arity(line, &f, 2)?;
                if kv.insert(f[0], (line, f[1])).is_some() {
                    return Err(err(line, format!("duplicate key '{}'", f[0])));
                }
            }
        }
        let last = text.lines().count().max(1);
        let get = |k: &str| kv.get(k).copied().ok_or_else(|| err(last, format!("missing key '{k}'")));
        let num = |k: &str| -> Result<f64> {
            let (line, v) = get(k)?;
            float(line, &[k, v], 1, k)
        };
        let int = |k: &str| -> Result<u64> {
            let (line, v) = get(k)?;
            field(line, &[k, v], 1, k)
        };
        let known = [
            "solver",
            "proven_optimal",
            "r_e",
            "overlaps",
            "crossings",
            "invalid_positions",
            "rank_sum",
            "conflict_build_ms",
            "placement_ms",
            "total_ms",
        ];
        if let Some((k, (line, _))) = kv.iter().find(|(k, _)| !known.contains(k)) {
            return Err(err(*line, format!("unknown key '{k}'")));
        }
        let (sline, solver) = get("solver")?;
        let (pline, proven) = get("proven_optimal")?;
        Ok(PlacementFile {
            solver: solver.parse().map_err(|e: String| err(sline, e))?,
            proven_optimal: parse_bool(pline, &["proven_optimal", proven], 1, "proven_optimal")?,
            r_e: num("r_e")?,
            overlaps: int("overlaps")? as usize,
            crossings: int("crossings")? as usize,
            invalid_positions: int("invalid_positions")? as usize,
            rank_sum: int("rank_sum")?,
            conflict_build_ms: num("conflict_build_ms")?,
            placement_ms: num("placement_ms")?,
            total_ms: num("total_ms")?,
            arrows,
        })
    }

    pub fn to_text(&self) -> String {
        let mut s = String::new();
        s.push_str(PLACEMENT_HEADER);
        s.push('\n');
        let _ = writeln!(s, "solver {}", self.solver);
        let _ = writeln!(s, "proven_optimal {}", self.proven_optimal);
        let _ = writeln!(s, "r_e {:.6}", self.r_e);
        let _ = writeln!(s, "overlaps {}", self.overlaps);
        let _ = writeln!(s, "crossings {}", self.crossings);
        let _ = writeln!(s, "invalid_positions {}", self.invalid_positions);
        let _ = writeln!(s, "rank_sum {}", self.rank_sum);
        let _ = writeln!(s, "conflict_build_ms {:.3}", self.conflict_build_ms);
        let _ = writeln!(s, "placement_ms {:.3}", self.placement_ms);
        let _ = writeln!(s, "total_ms {:.3}", self.total_ms);
        for a in &self.arrows {
            let _ = writeln!(
                s,
                "arrow {} {:.6} {:.6} {} {}",
                a.edge_id, a.center.x, a.center.y, a.rank, a.valid
            );
        }
        s
    }
}

/// Keys whose values depend on wall-clock time.
pub const TIMING_KEYS: [&str; 3] = ["conflict_build_ms", "placement_ms", "total_ms"];

/// Replaces the values of timing keys so two runs can be compared.
pub fn mask_timings(text: &str) -> String {
    text.lines()
        .map(|l| match l.split_whitespace().next() {
            Some(k) if TIMING_KEYS.contains(&k) => format!("{k} *"),
            _ => l.to_string(),
        })
        .collect::<Vec<_>>()
        .join("\n")
}

/// Tolerance stamped on gadget candidate files: rounding to six decimals
/// moves a center by up to about 1e-6, well above the default tolerance.
pub const GADGET_FILE_EPS: f64 = 1e-6;

/// Explicit candidate positions, one line each, in rank order per edge.
#[derive(Debug, Clone, PartialEq)]
pub struct CandidatesFile {
    pub r_e: f64,
    /// Relative overlap tolerance the positions were written for. Gadget
    /// files need one coarser than the default because six decimals do not
    /// preserve exact tangency.
    pub eps: Option<f64>,
    pub entries: Vec<CandidateRecord>,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CandidateRecord {
    pub edge_id: u64,
    pub rank: u32,
    pub center: Point,
    pub valid: bool,
    pub label: Option<PositionLabel>,
}

impl CandidatesFile {
    pub fn from_set(cs: &CandidateSet, layout: &LayoutFile, labels: Option<&[Vec<PositionLabel>]>) -> Self {
        let entries = cs
            .per_edge()
            .iter()
            .enumerate()
            .flat_map(|(e, list)| {
                list.iter().enumerate().map(move |(i, p)| CandidateRecord {
                    edge_id: layout.edge_ids[e],
                    rank: p.rank,
                    center: p.center,
                    valid: p.valid,
                    label: labels.map(|l| l[e][i]),
                })
            })
            .collect();
        CandidatesFile { r_e: cs.r_e, eps: None, entries }
    }

    pub fn from_gadget(g: &GadgetAssembly) -> (LayoutFile, CandidatesFile) {
        let layout = LayoutFile::from_layout(&g.layout);
        let mut cands = Self::from_set(&g.candidates, &layout, Some(&g.labels));
        cands.eps = Some(GADGET_FILE_EPS);
        (layout, cands)
    }

    /// Groups the records by edge and validates them against `layout`.
    pub fn to_set(&self, layout: &LayoutFile) -> Result<CandidateSet> {
        let index = layout.edge_index();
        let mut per_edge: Vec<Vec<ArrowPosition>> = vec![Vec::new(); layout.edge_ids.len()];
        for r in &self.entries {
            let e = *index
                .get(&r.edge_id)
                .ok_or_else(|| Error::CandidateMismatch(format!("unknown edge id {}", r.edge_id)))?;
            per_edge[e].push(ArrowPosition {
                edge: EdgeId(e),
                center: r.center,
                rank: r.rank,
                valid: r.valid,
            });
        }
        for list in &mut per_edge {
            list.sort_by_key(|p| p.rank);
        }
        CandidateSet::new(self.r_e, per_edge)
    }

    pub fn parse(text: &str) -> Result<Self> {
        let mut r_e = None;
        let mut eps = None;
        let mut entries = Vec::new();
        for (line, f) in records(text, CANDIDATES_HEADER)? {
            match f[0] {
                "eps" => {
                    arity(line, &f, 2)?;
                    let v = float(line, &f, 1, "eps")?;
                    if v < 0.0 {
                        return Err(err(line, format!("eps must be >= 0, got {v}")));
                    }
                    eps = Some(v);
                }
                "r_e" => {
                    arity(line, &f, 2)?;
                    r_e = Some(float(line, &f, 1, "r_e")?);
                }
                "candidate" => {
                    arity(line, &f, 7)?;
                    let label = match f[6] {
                        "-" => None,
                        l => Some(l.parse().map_err(|e: String| err(line, e))?),
                    };
                    entries.push(CandidateRecord {
                        edge_id: field(line, &f, 1, "edge")?,
                        rank: field(line, &f, 2, "rank")?,
                        center: Point::new(float(line, &f, 3, "x")?, float(line, &f, 4, "y")?),
                        valid: parse_bool(line, &f, 5, "valid")?,
                        label,
                    });
                }
                other => return Err(err(line, format!("unknown record '{other}'"))),
            }
        }
        let r_e = r_e.ok_or_else(|| err(text.lines().count().max(1), "missing 'r_e' record"))?;
        Ok(CandidatesFile { r_e, eps, entries })
    }

    pub fn to_text(&self) -> String {
        let mut s = String::new();
        s.push_str(CANDIDATES_HEADER);
        s.push('\n');
        let _ = writeln!(s, "r_e {:.6}", self.r_e);
        if let Some(eps) = self.eps {
            let _ = writeln!(s, "eps {eps:e}");
        }
        for r in &self.entries {
            let label = r.label.map_or("-", PositionLabel::as_str);
            let _ = writeln!(
                s,
                "candidate {} {} {:.6} {:.6} {} {}",
                r.edge_id, r.rank, r.center.x, r.center.y, r.valid, label
            );
        }
        s
    }
}

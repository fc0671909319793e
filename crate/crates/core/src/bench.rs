//! Batch runs over a directory of layout files, reported as CSV.

use std::io::Write;
use std::path::{Path, PathBuf};

use serde::Serialize;

use crate::error::Result;
use crate::format::LayoutFile;
use crate::model::SolverTag;
use crate::pipeline::{run_place, PlaceOptions};
use crate::posgen::RadiusConfig;
use crate::solve::SolveConfig;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BenchRow {
    pub instance: String,
    pub vertices: usize,
    pub edges: usize,
    pub positions: usize,
    pub conflicts: usize,
    pub solver: String,
    pub overlap: usize,
    pub crossings: usize,
    pub invalid_positions: usize,
    #[serde(serialize_with = "ms3")]
    pub placement_ms: f64,
    #[serde(serialize_with = "ms3")]
    pub conflict_build_ms: f64,
    #[serde(serialize_with = "ms3")]
    pub total_ms: f64,
    /// `ok`, `limit` (exact search stopped unproven) or `failed`.
    pub status: String,
}

fn ms3<S: serde::Serializer>(v: &f64, s: S) -> std::result::Result<S::Ok, S::Error> {
    s.serialize_str(&format!("{v:.3}"))
}

pub const CSV_HEADER: &str = "instance,vertices,edges,positions,conflicts,solver,overlap,crossings,\
invalid_positions,placement_ms,conflict_build_ms,total_ms,status";

/// Layout files (`*.layout`) of `dir`, sorted by file name.
pub fn list_instances(dir: &Path) -> Result<Vec<PathBuf>> {
    let mut files: Vec<PathBuf> = std::fs::read_dir(dir)?
        .filter_map(|e| e.ok().map(|e| e.path()))
        .filter(|p| p.is_file() && p.extension().is_some_and(|x| x == "layout"))
        .collect();
    files.sort();
    Ok(files)
}

fn failed_row(instance: &str, solver: SolverTag) -> BenchRow {
    BenchRow {
        instance: instance.to_string(),
        vertices: 0,
        edges: 0,
        positions: 0,
        conflicts: 0,
        solver: solver.to_string(),
        overlap: 0,
        crossings: 0,
        invalid_positions: 0,
        placement_ms: 0.0,
        conflict_build_ms: 0.0,
        total_ms: 0.0,
        status: "failed".to_string(),
    }
}

/// One row per (instance, solver), instances in file-name order. A failing
/// instance yields `failed` rows and the run continues.
pub fn run_bench(dir: &Path, solvers: &[SolverTag], radius: &RadiusConfig, solve: &SolveConfig) -> Result<Vec<BenchRow>> {
    let mut rows = Vec::new();
    for path in list_instances(dir)? {
        let name = path
            .file_stem()
            .map(|s| s.to_string_lossy().into_owned())
            .unwrap_or_default();
        let file = std::fs::read_to_string(&path)
            .map_err(crate::Error::from)
            .and_then(|t| LayoutFile::parse(&t));
        for &solver in solvers {
            let outcome = file.as_ref().map_err(|e| e.to_string()).and_then(|f| {
                let opts = PlaceOptions {
                    solver,
                    radius: radius.clone(),
                    solve: solve.clone(),
                    candidates: None,
                };
                run_place(f, &opts).map_err(|e| e.to_string())
            });
            match outcome {
                Ok(out) => rows.push(BenchRow {
                    instance: name.clone(),
                    vertices: out.layout.graph.num_vertices(),
                    edges: out.layout.graph.num_edges(),
                    positions: out.candidates.total_positions(),
                    conflicts: out.conflicts,
                    solver: solver.to_string(),
                    overlap: out.overlaps,
                    crossings: out.crossings.crossings,
                    invalid_positions: out.crossings.invalid_positions,
                    placement_ms: out.placement_ms,
                    conflict_build_ms: out.conflict_build_ms,
                    total_ms: out.total_ms,
                    status: if out.hit_limit() { "limit" } else { "ok" }.to_string(),
                }),
                Err(msg) => {
                    log::warn!("{}: {solver} failed: {msg}", path.display());
                    rows.push(failed_row(&name, solver));
                }
            }
        }
    }
    Ok(rows)
}

/// Writes the header (always) and the rows.
pub fn write_csv<W: Write>(rows: &[BenchRow], out: W) -> Result<()> {
    let mut w = csv::WriterBuilder::new().has_headers(false).from_writer(out);
    w.write_record(CSV_HEADER.split(','))?;
    for r in rows {
        w.serialize(r)?;
    }
    w.flush()?;
    Ok(())
}

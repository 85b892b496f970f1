//! On-disk layout of a [`ResultSet`]:
//!
//! ```text
//! <dir>/manifest.json        schema version, algorithms, problems, runs, seeds, config hash
//! <dir>/results.csv          one row per run
//! <dir>/positions.csv        best position per run, space separated
//! <dir>/summary.csv          best/mean/std per (algorithm, problem)
//! <dir>/traces/*.trace       "fes best_so_far" lines per run
//! <dir>/timing.json          wall times and save timestamp
//! ```
//!
//! Everything except `timing.json` is a pure function of the results, so
//! identical seeds give byte-identical files.

use std::collections::HashMap;
use std::fs;
use std::path::{Path, PathBuf};
use std::time::{SystemTime, UNIX_EPOCH};

use mco_stats::ResultMatrix;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::result::{CellSummary, ProblemMeta, ResultSet};
use crate::run::RunRecord;

pub const SCHEMA_VERSION: u32 = 1;

#[derive(Debug, Serialize, Deserialize)]
struct Manifest {
    schema_version: u32,
    algorithms: Vec<String>,
    problems: Vec<ProblemMeta>,
    runs: usize,
    base_seed: u64,
    config_hash: String,
}

#[derive(Debug, Serialize, Deserialize)]
struct ResultRow {
    algorithm: String,
    problem: String,
    #[serde(rename = "D")]
    dim: usize,
    run: usize,
    seed: u64,
    best_fitness: f64,
    evaluations_used: usize,
    fes_max: usize,
    feasible: bool,
}

#[derive(Debug, Serialize, Deserialize)]
struct PositionRow {
    algorithm: String,
    problem: String,
    run: usize,
    position: String,
}

#[derive(Debug, Serialize, Deserialize)]
struct Timing {
    saved_unix_secs: u64,
    wall_times: Vec<(String, String, usize, f64)>,
}

type Key = (String, String, usize);

pub fn trace_file_name(algorithm: &str, problem: &str, run: usize) -> String {
    format!("{algorithm}__{problem}__run{run:03}.trace")
}

fn write_csv<T: Serialize>(path: &Path, rows: impl IntoIterator<Item = T>) -> Result<()> {
    let mut w = csv::Writer::from_path(path).map_err(|e| Error::io(path, e))?;
    for r in rows {
        w.serialize(r).map_err(|e| Error::io(path, e))?;
    }
    w.flush().map_err(|e| Error::io(path, e))
}

fn read_csv<T: for<'de> Deserialize<'de>>(path: &Path) -> Result<Vec<T>> {
    let mut r = csv::Reader::from_path(path).map_err(|e| Error::io(path, e))?;
    r.deserialize()
        .collect::<std::result::Result<Vec<T>, _>>()
        .map_err(|e| Error::Format(format!("{}: {e}", path.display())))
}

fn write_text(path: &Path, text: &str) -> Result<()> {
    fs::write(path, text).map_err(|e| Error::io(path, e))
}

pub fn trace_text(trace: &[(usize, f64)]) -> String {
    trace.iter().map(|(f, b)| format!("{f} {b:e}\n")).collect()
}

fn parse_trace(path: &Path) -> Result<Vec<(usize, f64)>> {
    let text = fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
    text.lines()
        .filter(|l| !l.trim().is_empty())
        .map(|l| {
            let mut it = l.split_whitespace();
            let fes = it.next().and_then(|v| v.parse().ok());
            let best = it.next().and_then(|v| v.parse().ok());
            match (fes, best, it.next()) {
                (Some(f), Some(b), None) => Ok((f, b)),
                _ => Err(Error::Format(format!("{}: bad trace line {l:?}", path.display()))),
            }
        })
        .collect()
}

/// Writes `set` under `dir`, replacing any earlier traces there.
pub fn save(set: &ResultSet, dir: &Path) -> Result<()> {
    fs::create_dir_all(dir).map_err(|e| Error::io(dir, e))?;
    let manifest = Manifest {
        schema_version: SCHEMA_VERSION,
        algorithms: set.algorithms.clone(),
        problems: set.problems.clone(),
        runs: set.runs,
        base_seed: set.base_seed,
        config_hash: set.config_hash.clone(),
    };
    let json = serde_json::to_string_pretty(&manifest).expect("manifest serializes");
    write_text(&dir.join("manifest.json"), &(json + "\n"))?;
    write_csv(
        &dir.join("results.csv"),
        set.records().iter().map(|r| ResultRow {
            algorithm: r.algorithm.clone(),
            problem: r.problem.clone(),
            dim: r.dim,
            run: r.run,
            seed: r.seed,
            best_fitness: r.best_fitness,
            evaluations_used: r.evaluations_used,
            fes_max: r.fes_max,
            feasible: r.feasible,
        }),
    )?;
    write_csv(
        &dir.join("positions.csv"),
        set.records().iter().map(|r| PositionRow {
            algorithm: r.algorithm.clone(),
            problem: r.problem.clone(),
            run: r.run,
            position: r.best_position.iter().map(|v| format!("{v:e}")).collect::<Vec<_>>().join(" "),
        }),
    )?;
    write_csv(&dir.join("summary.csv"), set.summaries())?;
    let traces = dir.join("traces");
    if traces.exists() {
        fs::remove_dir_all(&traces).map_err(|e| Error::io(&traces, e))?;
    }
    fs::create_dir_all(&traces).map_err(|e| Error::io(&traces, e))?;
    for r in set.records() {
        write_text(&traces.join(trace_file_name(&r.algorithm, &r.problem, r.run)), &trace_text(&r.trace))?;
    }
    let timing = Timing {
        saved_unix_secs: SystemTime::now().duration_since(UNIX_EPOCH).map(|d| d.as_secs()).unwrap_or(0),
        wall_times: set
            .records()
            .iter()
            .map(|r| (r.algorithm.clone(), r.problem.clone(), r.run, r.wall_time))
            .collect(),
    };
    let json = serde_json::to_string_pretty(&timing).expect("timing serializes");
    write_text(&dir.join("timing.json"), &(json + "\n"))
}

/// Reads a result directory written by [`save`]. A missing `timing.json` leaves wall times at 0.
pub fn load(dir: &Path) -> Result<ResultSet> {
    let path = dir.join("manifest.json");
    let text = fs::read_to_string(&path).map_err(|e| Error::io(&path, e))?;
    let raw: serde_json::Value =
        serde_json::from_str(&text).map_err(|e| Error::Format(format!("{}: {e}", path.display())))?;
    let found = raw.get("schema_version").and_then(|v| v.as_u64()).unwrap_or(0) as u32;
    if found != SCHEMA_VERSION {
        return Err(Error::Schema {
            found,
            expected: SCHEMA_VERSION,
        });
    }
    let manifest: Manifest =
        serde_json::from_value(raw).map_err(|e| Error::Format(format!("{}: {e}", path.display())))?;

    let mut positions: HashMap<Key, Vec<f64>> = HashMap::new();
    for row in read_csv::<PositionRow>(&dir.join("positions.csv"))? {
        let pos = row
            .position
            .split_whitespace()
            .map(|v| v.parse::<f64>())
            .collect::<std::result::Result<Vec<_>, _>>()
            .map_err(|e| Error::Format(format!("positions.csv: {e}")))?;
        positions.insert((row.algorithm, row.problem, row.run), pos);
    }
    let mut wall: HashMap<Key, f64> = HashMap::new();
    let timing_path = dir.join("timing.json");
    if timing_path.exists() {
        let text = fs::read_to_string(&timing_path).map_err(|e| Error::io(&timing_path, e))?;
        let t: Timing = serde_json::from_str(&text).map_err(|e| Error::Format(format!("timing.json: {e}")))?;
        for (a, p, r, w) in t.wall_times {
            wall.insert((a, p, r), w);
        }
    }
    let traces: PathBuf = dir.join("traces");
    let mut records = Vec::new();
    for row in read_csv::<ResultRow>(&dir.join("results.csv"))? {
        let key = (row.algorithm.clone(), row.problem.clone(), row.run);
        let best_position = positions
            .remove(&key)
            .ok_or_else(|| Error::Format(format!("no position for {key:?}")))?;
        let trace = parse_trace(&traces.join(trace_file_name(&row.algorithm, &row.problem, row.run)))?;
        records.push(RunRecord {
            wall_time: wall.get(&key).copied().unwrap_or(0.0),
            algorithm: row.algorithm,
            problem: row.problem,
            dim: row.dim,
            run: row.run,
            seed: row.seed,
            best_position,
            best_fitness: row.best_fitness,
            feasible: row.feasible,
            evaluations_used: row.evaluations_used,
            fes_max: row.fes_max,
            trace,
        });
    }
    ResultSet::new(
        manifest.algorithms,
        manifest.problems,
        manifest.runs,
        manifest.base_seed,
        manifest.config_hash,
        records,
    )
}

/// Reads the stored `summary.csv`.
pub fn load_summary(dir: &Path) -> Result<Vec<CellSummary>> {
    read_csv(&dir.join("summary.csv"))
}

#[derive(Debug, Deserialize)]
struct MatrixRow {
    algorithm: String,
    problem: String,
    run: usize,
    best_fitness: f64,
}

/// Builds the best-fitness matrix from `results.csv`, or from the
/// `results.csv` inside `path` when it is a directory.
///
/// Only the `algorithm`, `problem`, `run` and `best_fitness` columns are
/// read, so hand-made files work too. Algorithms and problems keep their
/// first-appearance order; a missing or repeated cell is an error.
pub fn load_matrix(path: &Path) -> Result<ResultMatrix> {
    let file = if path.is_dir() { path.join("results.csv") } else { path.to_path_buf() };
    let rows: Vec<MatrixRow> = read_csv(&file)?;
    let mut algorithms: Vec<String> = Vec::new();
    let mut problems: Vec<String> = Vec::new();
    for r in &rows {
        if !algorithms.contains(&r.algorithm) {
            algorithms.push(r.algorithm.clone());
        }
        if !problems.contains(&r.problem) {
            problems.push(r.problem.clone());
        }
    }
    let mut cells: Vec<Vec<Vec<(usize, f64)>>> = vec![vec![Vec::new(); algorithms.len()]; problems.len()];
    for r in rows {
        let a = algorithms.iter().position(|x| *x == r.algorithm).expect("collected above");
        let p = problems.iter().position(|x| *x == r.problem).expect("collected above");
        cells[p][a].push((r.run, r.best_fitness));
    }
    let mut values = Vec::with_capacity(problems.len());
    for (p, row) in cells.into_iter().enumerate() {
        let mut out = Vec::with_capacity(row.len());
        for (a, mut runs) in row.into_iter().enumerate() {
            runs.sort_by_key(|(run, _)| *run);
            if runs.windows(2).any(|w| w[0].0 == w[1].0) {
                return Err(Error::Format(format!(
                    "{}: repeated run for {} on {}",
                    file.display(),
                    algorithms[a],
                    problems[p]
                )));
            }
            out.push(runs.into_iter().map(|(_, v)| v).collect());
        }
        values.push(out);
    }
    Ok(ResultMatrix::new(problems, algorithms, values)?)
}

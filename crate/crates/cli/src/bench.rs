//! Batch runs over (map × agent count × instance × algorithm), written to a
//! resumable CSV.

use std::collections::{BTreeMap, HashSet};
use std::fmt;
use std::fs::OpenOptions;
use std::hash::Hasher;
use std::io::{self, Write};
use std::path::{Path, PathBuf};
use std::str::FromStr;
use std::sync::atomic::{AtomicUsize, Ordering};
use std::sync::mpsc;
use std::time::Instant;

use cgamapf_core::baselines::{solve_pibt, solve_prp};
use cgamapf_core::cga::{solve_cga_with, CgaConfig};
use cgamapf_core::instance::generate_instance;
use cgamapf_core::metrics::RunRecord;
use cgamapf_core::solution::validate_for_instance;
use cgamapf_core::svs::compute_svs;
use cgamapf_core::{GridGraph, GridMap, Instance, Limits, SeparatingVertexSet, Solution, SolveError};
use fnv::FnvHasher;
use thiserror::Error;

use crate::clock::WallClock;
use crate::movingai::{parse_map, MapParseError};
use crate::replicas;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Algorithm {
    Cga,
    Prp,
    Pibt,
}

impl Algorithm {
    pub const ALL: [Algorithm; 3] = [Algorithm::Cga, Algorithm::Prp, Algorithm::Pibt];

    pub fn name(self) -> &'static str {
        match self {
            Algorithm::Cga => "cga",
            Algorithm::Prp => "prp",
            Algorithm::Pibt => "pibt",
        }
    }
}

impl fmt::Display for Algorithm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Algorithm {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        Self::ALL
            .into_iter()
            .find(|a| a.name() == s)
            .ok_or_else(|| format!("unknown algorithm `{s}` (expected cga, prp or pibt)"))
    }
}

/// Outcome of one solver call.
#[derive(Debug)]
pub struct Run {
    pub solution: Solution,
    /// `None` when the solver returned a result, else why it stopped.
    pub error: Option<SolveError>,
}

/// Runs one algorithm under a wall-clock budget. Unsolved runs carry the
/// partial paths (if the solver produced any) with `solved = false`.
pub fn run_algorithm(
    algo: Algorithm,
    instance: &Instance,
    svs: &SeparatingVertexSet,
    seed: u64,
    time_limit_s: f64,
) -> Run {
    let start = Instant::now();
    let deadline = WallClock::after_secs(time_limit_s);
    let limits = Limits::default();
    let result = match algo {
        Algorithm::Cga => {
            let config = CgaConfig {
                seed,
                ..CgaConfig::default()
            };
            solve_cga_with(instance, svs, config, &limits, &deadline)
        }
        Algorithm::Prp => solve_prp(instance, seed, &deadline),
        Algorithm::Pibt => solve_pibt(instance, &limits, &deadline),
    };
    let runtime = start.elapsed().as_secs_f64();
    let (paths, solved, error) = match result {
        Ok(paths) => (paths, true, None),
        Err(e) => {
            let partial = match &e {
                SolveError::Timeout { partial, .. } if !partial.is_empty() => partial.clone(),
                _ => instance.starts().iter().map(|&s| vec![s]).collect(),
            };
            (partial, false, Some(e))
        }
    };
    let mut solution = Solution::from_paths(paths, algo.name());
    solution.seed = seed;
    solution.runtime_seconds = runtime;
    solution.solved = solved;
    Run { solution, error }
}

/// Instance seed: FNV-1a over the base seed, map name, agent count and
/// instance index.
pub fn derive_seed(base: u64, map: &str, n: usize, index: usize) -> u64 {
    let mut h = FnvHasher::default();
    h.write(&base.to_le_bytes());
    h.write(map.as_bytes());
    h.write(&[0xff]);
    h.write(&(n as u64).to_le_bytes());
    h.write(&(index as u64).to_le_bytes());
    h.finish()
}

#[derive(Debug, Error)]
pub enum BenchError {
    #[error("{path}: {source}")]
    Io { path: PathBuf, source: io::Error },
    #[error("{path}: {source}")]
    Map { path: PathBuf, source: MapParseError },
    #[error("unknown map `{0}` (not a file and not a benchmark map name)")]
    UnknownMap(String),
    #[error("{path}: {source}")]
    Csv { path: PathBuf, source: csv::Error },
    #[error("invalid configuration: {0}")]
    Config(String),
}

/// A named map, loaded from a file or built by [`replicas::generate`].
#[derive(Debug, Clone)]
pub struct NamedMap {
    pub name: String,
    pub map: GridMap,
}

/// Resolves `spec` as a map file path, then `map_dir/<spec>.map`, then a
/// benchmark map name.
pub fn load_map(spec: &str, map_dir: &Path) -> Result<NamedMap, BenchError> {
    let direct = PathBuf::from(spec);
    let in_dir = map_dir.join(format!("{spec}.map"));
    let path = [direct, in_dir].into_iter().find(|p| p.is_file());
    if let Some(path) = path {
        let text = std::fs::read_to_string(&path).map_err(|source| BenchError::Io {
            path: path.clone(),
            source,
        })?;
        let map = parse_map(&text).map_err(|source| BenchError::Map {
            path: path.clone(),
            source,
        })?;
        let name = path
            .file_stem()
            .map_or_else(|| spec.to_owned(), |s| s.to_string_lossy().into_owned());
        return Ok(NamedMap { name, map });
    }
    replicas::generate(spec)
        .map(|map| NamedMap {
            name: spec.to_owned(),
            map,
        })
        .ok_or_else(|| BenchError::UnknownMap(spec.to_owned()))
}

#[derive(Debug, Clone)]
pub struct BenchConfig {
    pub maps: Vec<NamedMap>,
    pub agents: Vec<usize>,
    pub instances: usize,
    pub time_limit_s: f64,
    pub algorithms: Vec<Algorithm>,
    pub base_seed: u64,
    pub out: PathBuf,
    pub workers: usize,
}

impl BenchConfig {
    pub fn validate(&self) -> Result<(), BenchError> {
        let fail = |m: &str| Err(BenchError::Config(m.to_owned()));
        if self.maps.is_empty() || self.agents.is_empty() || self.algorithms.is_empty() {
            return fail("maps, agent counts and algorithms must be non-empty");
        }
        if self.agents.contains(&0) || self.instances == 0 || self.workers == 0 {
            return fail("agent counts, instances and workers must be positive");
        }
        if !self.time_limit_s.is_finite() || self.time_limit_s <= 0.0 {
            return fail("time limit must be a positive number of seconds");
        }
        Ok(())
    }
}

#[derive(Debug, Clone)]
struct Job {
    map: usize,
    n: usize,
    instance: usize,
    algo: Algorithm,
}

pub type RowKey = (String, String, usize, usize);

fn key(r: &RunRecord) -> RowKey {
    (r.map.clone(), r.algo.clone(), r.n, r.instance)
}

pub fn read_records(path: &Path) -> Result<Vec<RunRecord>, BenchError> {
    let mut reader = csv::Reader::from_path(path).map_err(|source| BenchError::Csv {
        path: path.to_owned(),
        source,
    })?;
    reader
        .deserialize()
        .collect::<Result<_, _>>()
        .map_err(|source| BenchError::Csv {
            path: path.to_owned(),
            source,
        })
}

/// Runs one job and checks any claimed solution against the validator. A
/// solution that fails validation is recorded as unsolved.
fn execute(job: &Job, map: &NamedMap, svs: &SeparatingVertexSet, config: &BenchConfig) -> (RunRecord, bool) {
    let seed = derive_seed(config.base_seed, &map.name, job.n, job.instance);
    let base = RunRecord {
        map: map.name.clone(),
        algo: job.algo.name().to_owned(),
        n: job.n,
        instance: job.instance,
        seed,
        solved: false,
        runtime_s: 0.0,
        soc: None,
        makespan: None,
    };
    let instance = match generate_instance(&map.map, job.n, seed) {
        Ok(i) => i,
        Err(e) => {
            eprintln!("{} n={} #{}: {e}", map.name, job.n, job.instance);
            return (base, false);
        }
    };
    let run = run_algorithm(job.algo, &instance, svs, seed, config.time_limit_s);
    let mut record = RunRecord {
        runtime_s: run.solution.runtime_seconds,
        ..base
    };
    let mut rejected = false;
    if run.solution.solved {
        let report = validate_for_instance(&run.solution, &instance);
        if report.is_valid() {
            record.solved = true;
            record.soc = Some(run.solution.soc());
            record.makespan = Some(run.solution.makespan());
        } else {
            rejected = true;
            eprintln!(
                "{} {} n={} #{}: solution rejected by the validator: {report:?}",
                map.name, job.algo, job.n, job.instance
            );
        }
    }
    (record, rejected)
}

/// Summary of a batch invocation.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct BatchOutcome {
    pub executed: usize,
    pub skipped: usize,
    /// Claimed solutions the validator rejected (recorded as unsolved).
    pub rejected: usize,
}

/// Executes every job not already present in the output CSV and appends
/// the new rows in job order, whatever the worker count.
pub fn run_bench(config: &BenchConfig) -> Result<BatchOutcome, BenchError> {
    config.validate()?;
    let done: HashSet<RowKey> = if config.out.is_file() && std::fs::metadata(&config.out).map_or(0, |m| m.len()) > 0 {
        read_records(&config.out)?.iter().map(key).collect()
    } else {
        HashSet::new()
    };

    let mut jobs = Vec::new();
    let mut skipped = 0;
    for (mi, m) in config.maps.iter().enumerate() {
        for &n in &config.agents {
            for instance in 0..config.instances {
                for &algo in &config.algorithms {
                    if done.contains(&(m.name.clone(), algo.name().to_owned(), n, instance)) {
                        skipped += 1;
                    } else {
                        jobs.push(Job {
                            map: mi,
                            n,
                            instance,
                            algo,
                        });
                    }
                }
            }
        }
    }

    let graphs: Vec<SeparatingVertexSet> = config
        .maps
        .iter()
        .map(|m| compute_svs(&GridGraph::new(m.map.clone())))
        .collect();

    let io_err = |source| BenchError::Io {
        path: config.out.clone(),
        source,
    };
    let fresh = done.is_empty();
    let file = OpenOptions::new()
        .create(true)
        .append(true)
        .open(&config.out)
        .map_err(io_err)?;
    let mut writer = csv::WriterBuilder::new().has_headers(fresh).from_writer(file);

    let next = AtomicUsize::new(0);
    let (tx, rx) = mpsc::channel::<(usize, (RunRecord, bool))>();
    let mut rejected = 0;
    std::thread::scope(|scope| -> Result<(), BenchError> {
        for _ in 0..config.workers.min(jobs.len().max(1)) {
            let tx = tx.clone();
            let (jobs, next, graphs) = (&jobs, &next, &graphs);
            scope.spawn(move || loop {
                let i = next.fetch_add(1, Ordering::Relaxed);
                let Some(job) = jobs.get(i) else { break };
                let record = execute(job, &config.maps[job.map], &graphs[job.map], config);
                if tx.send((i, record)).is_err() {
                    break;
                }
            });
        }
        drop(tx);
        // Reorder buffer: rows are written strictly in job order.
        let mut pending = BTreeMap::new();
        let mut expected = 0;
        for (i, (record, bad)) in rx {
            rejected += usize::from(bad);
            pending.insert(i, record);
            while let Some(record) = pending.remove(&expected) {
                writer.serialize(&record).map_err(|source| BenchError::Csv {
                    path: config.out.clone(),
                    source,
                })?;
                writer.flush().map_err(io_err)?;
                expected += 1;
            }
        }
        Ok(())
    })?;
    writer
        .into_inner()
        .map_err(|e| io_err(e.into_error()))?
        .flush()
        .map_err(io_err)?;
    Ok(BatchOutcome {
        executed: jobs.len(),
        skipped,
        rejected,
    })
}

/// Header plus data rows of a bench CSV with the runtime column blanked,
/// for comparing runs whose timings naturally differ.
pub fn rows_without_runtime(path: &Path) -> Result<Vec<String>, BenchError> {
    let text = std::fs::read_to_string(path).map_err(|source| BenchError::Io {
        path: path.to_owned(),
        source,
    })?;
    let mut lines = text.lines();
    let header: Vec<&str> = lines.next().unwrap_or_default().split(',').collect();
    let col = header.iter().position(|&h| h == "runtime_s");
    Ok(lines
        .map(|l| {
            let mut cells: Vec<&str> = l.split(',').collect();
            if let Some(c) = col.filter(|&c| c < cells.len()) {
                cells[c] = "";
            }
            cells.join(",")
        })
        .collect())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn seeds_depend_on_every_component() {
        let s = derive_seed(1, "m", 10, 0);
        assert_eq!(s, derive_seed(1, "m", 10, 0));
        assert_ne!(s, derive_seed(2, "m", 10, 0));
        assert_ne!(s, derive_seed(1, "n", 10, 0));
        assert_ne!(s, derive_seed(1, "m", 11, 0));
        assert_ne!(s, derive_seed(1, "m", 10, 1));
    }

    #[test]
    fn algorithm_names_round_trip() {
        for a in Algorithm::ALL {
            assert_eq!(a.name().parse::<Algorithm>(), Ok(a));
        }
        assert!("lns2".parse::<Algorithm>().is_err());
    }
}

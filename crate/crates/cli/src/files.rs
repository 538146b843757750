//! Solution documents (JSON) and the separating-vertex cache file.

use cgamapf_core::svs::SeparatingVertexSet;
use cgamapf_core::{ConflictReport, GridGraph, Solution, Vertex};
use serde::{Deserialize, Serialize};
use thiserror::Error;

/// On-disk form of a solution.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SolutionFile {
    pub map: String,
    pub n: usize,
    pub algorithm: String,
    pub seed: u64,
    /// Initial goal of each agent; empty when unknown.
    #[serde(default)]
    pub goals: Vec<Vertex>,
    /// Per-agent vertex indices, one per time step.
    pub paths: Vec<Vec<Vertex>>,
    pub soc: Option<usize>,
    pub makespan: Option<usize>,
    pub runtime_seconds: f64,
    pub solved: bool,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub validation: Option<ConflictReport>,
}

impl SolutionFile {
    pub fn new(map: &str, solution: &Solution) -> Self {
        let solved = solution.solved;
        Self {
            map: map.to_owned(),
            n: solution.num_agents(),
            algorithm: solution.algorithm.clone(),
            seed: solution.seed,
            goals: Vec::new(),
            paths: solution.paths.clone(),
            soc: solved.then(|| solution.soc()),
            makespan: solved.then(|| solution.makespan()),
            runtime_seconds: solution.runtime_seconds,
            solved,
            validation: None,
        }
    }

    pub fn with_goals(mut self, goals: &[Vertex]) -> Self {
        self.goals = goals.to_vec();
        self
    }

    pub fn to_solution(&self) -> Solution {
        Solution {
            paths: self.paths.clone(),
            algorithm: self.algorithm.clone(),
            seed: self.seed,
            runtime_seconds: self.runtime_seconds,
            solved: self.solved,
        }
    }
}

pub fn write_solution(file: &SolutionFile) -> String {
    let mut s = serde_json::to_string_pretty(file).expect("solution documents always serialize");
    s.push('\n');
    s
}

pub fn read_solution(text: &str) -> Result<SolutionFile, serde_json::Error> {
    serde_json::from_str(text)
}

/// Separating-vertex cache: one flag per passable cell, row-major.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SvsFile {
    pub map_name: String,
    pub width: usize,
    pub height: usize,
    /// `1` for a separating vertex, `0` otherwise.
    pub sv_flags: String,
}

#[derive(Debug, Error)]
pub enum SvsFileError {
    #[error("malformed cache: {0}")]
    Json(#[from] serde_json::Error),
    #[error("cache is for a {width}x{height} map, not {map_width}x{map_height}")]
    Dimensions {
        width: usize,
        height: usize,
        map_width: usize,
        map_height: usize,
    },
    #[error("cache has {found} flags but the map has {expected} passable cells")]
    FlagCount { found: usize, expected: usize },
    #[error("invalid flag {0:?} (expected 0 or 1)")]
    Flag(char),
}

pub fn write_svs(map_name: &str, graph: &GridGraph, svs: &SeparatingVertexSet) -> String {
    let file = SvsFile {
        map_name: map_name.to_owned(),
        width: graph.map().width(),
        height: graph.map().height(),
        sv_flags: graph
            .vertices()
            .map(|v| if svs.is_separating(v) { '1' } else { '0' })
            .collect(),
    };
    let mut s = serde_json::to_string_pretty(&file).expect("cache documents always serialize");
    s.push('\n');
    s
}

pub fn read_svs(text: &str, graph: &GridGraph) -> Result<SeparatingVertexSet, SvsFileError> {
    let file: SvsFile = serde_json::from_str(text)?;
    let map = graph.map();
    if (file.width, file.height) != (map.width(), map.height()) {
        return Err(SvsFileError::Dimensions {
            width: file.width,
            height: file.height,
            map_width: map.width(),
            map_height: map.height(),
        });
    }
    let flags = file
        .sv_flags
        .chars()
        .map(|c| match c {
            '0' => Ok(false),
            '1' => Ok(true),
            other => Err(SvsFileError::Flag(other)),
        })
        .collect::<Result<Vec<_>, _>>()?;
    if flags.len() != graph.num_vertices() {
        return Err(SvsFileError::FlagCount {
            found: flags.len(),
            expected: graph.num_vertices(),
        });
    }
    Ok(SeparatingVertexSet::from_flags(flags))
}

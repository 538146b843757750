//! MAPF instances: a grid graph plus one start and one goal per agent.

use alloc::vec::Vec;
use core::fmt;

use rand::seq::index;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use thiserror::Error;

use crate::graph::{GridGraph, Vertex};
use crate::grid::GridMap;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
#[cfg_attr(feature = "serde", serde(transparent))]
pub struct AgentId(pub u32);

impl AgentId {
    #[inline]
    pub fn index(self) -> usize {
        self.0 as usize
    }
}

impl fmt::Display for AgentId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "a{}", self.0)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum InstanceError {
    #[error("no agents requested")]
    NoAgents,
    #[error("{starts} starts but {goals} goals")]
    LengthMismatch { starts: usize, goals: usize },
    #[error("agent {agent}: vertex {vertex} is not a passable cell")]
    UnknownVertex { agent: usize, vertex: Vertex },
    #[error("agents {first} and {second} share start {vertex}")]
    DuplicateStart {
        first: usize,
        second: usize,
        vertex: Vertex,
    },
    #[error("agents {first} and {second} share goal {vertex}")]
    DuplicateGoal {
        first: usize,
        second: usize,
        vertex: Vertex,
    },
    #[error("agent {agent}: start and goals are not all in one connected component")]
    Disconnected { agent: usize },
    #[error("{requested} agents requested but the largest component has {available} cells")]
    TooManyAgents { requested: usize, available: usize },
}

/// A validated instance: distinct starts, distinct goals, all in one
/// connected component.
#[derive(Debug, Clone)]
pub struct Instance {
    graph: GridGraph,
    starts: Vec<Vertex>,
    goals: Vec<Vertex>,
}

impl Instance {
    pub fn new(graph: GridGraph, starts: Vec<Vertex>, goals: Vec<Vertex>) -> Result<Self, InstanceError> {
        if starts.len() != goals.len() {
            return Err(InstanceError::LengthMismatch {
                starts: starts.len(),
                goals: goals.len(),
            });
        }
        if starts.is_empty() {
            return Err(InstanceError::NoAgents);
        }
        let n = graph.num_vertices();
        let mut start_owner = alloc::vec![u32::MAX; n];
        let mut goal_owner = alloc::vec![u32::MAX; n];
        for (agent, (&s, &g)) in starts.iter().zip(&goals).enumerate() {
            for v in [s, g] {
                if !graph.contains(v) {
                    return Err(InstanceError::UnknownVertex { agent, vertex: v });
                }
            }
            if start_owner[s.index()] != u32::MAX {
                return Err(InstanceError::DuplicateStart {
                    first: start_owner[s.index()] as usize,
                    second: agent,
                    vertex: s,
                });
            }
            start_owner[s.index()] = agent as u32;
            if goal_owner[g.index()] != u32::MAX {
                return Err(InstanceError::DuplicateGoal {
                    first: goal_owner[g.index()] as usize,
                    second: agent,
                    vertex: g,
                });
            }
            goal_owner[g.index()] = agent as u32;
        }
        let (labels, _) = graph.components();
        let component = labels[starts[0].index()];
        for (agent, (&s, &g)) in starts.iter().zip(&goals).enumerate() {
            if labels[s.index()] != component || labels[g.index()] != component {
                return Err(InstanceError::Disconnected { agent });
            }
        }
        Ok(Self { graph, starts, goals })
    }

    pub fn graph(&self) -> &GridGraph {
        &self.graph
    }

    pub fn map(&self) -> &GridMap {
        self.graph.map()
    }

    pub fn num_agents(&self) -> usize {
        self.starts.len()
    }

    pub fn starts(&self) -> &[Vertex] {
        &self.starts
    }

    pub fn goals(&self) -> &[Vertex] {
        &self.goals
    }

    pub fn agents(&self) -> impl Iterator<Item = AgentId> {
        (0..self.starts.len() as u32).map(AgentId)
    }
}

/// Vertices of the largest connected component, ascending. Ties go to the
/// component containing the smallest vertex index.
pub fn largest_component(graph: &GridGraph) -> Vec<Vertex> {
    let (labels, count) = graph.components();
    let mut sizes = alloc::vec![0usize; count];
    for &l in &labels {
        sizes[l as usize] += 1;
    }
    let Some(best) = (0..count).max_by_key(|&c| (sizes[c], core::cmp::Reverse(c))) else {
        return Vec::new();
    };
    labels
        .iter()
        .enumerate()
        .filter(|(_, &l)| l as usize == best)
        .map(|(i, _)| Vertex::from_index(i))
        .collect()
}

/// Grid whose cells are each blocked with probability `obstacle_density`.
///
/// # Panics
/// On a zero dimension or a density outside `[0, 1]`.
pub fn random_map(width: usize, height: usize, obstacle_density: f64, seed: u64) -> GridMap {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let cells = (0..width * height)
        .map(|_| !rng.random_bool(obstacle_density))
        .collect();
    GridMap::new(width, height, cells).expect("non-empty dimensions")
}

/// Samples `n` distinct starts and, independently, `n` distinct goals from
/// the largest connected component. Deterministic in `(map, n, seed)`.
pub fn generate_instance(map: &GridMap, n: usize, seed: u64) -> Result<Instance, InstanceError> {
    if n == 0 {
        return Err(InstanceError::NoAgents);
    }
    let graph = GridGraph::new(map.clone());
    let pool = largest_component(&graph);
    if n > pool.len() {
        return Err(InstanceError::TooManyAgents {
            requested: n,
            available: pool.len(),
        });
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let starts = index::sample(&mut rng, pool.len(), n)
        .into_iter()
        .map(|i| pool[i])
        .collect();
    let goals = index::sample(&mut rng, pool.len(), n)
        .into_iter()
        .map(|i| pool[i])
        .collect();
    Instance::new(graph, starts, goals)
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::vec;

    fn open(w: usize, h: usize) -> GridGraph {
        GridGraph::new(GridMap::open(w, h).unwrap())
    }

    #[test]
    fn rejects_duplicates_and_empty() {
        assert_eq!(
            Instance::new(open(3, 1), vec![], vec![]).unwrap_err(),
            InstanceError::NoAgents
        );
        assert!(matches!(
            Instance::new(open(3, 1), vec![Vertex(0), Vertex(0)], vec![Vertex(1), Vertex(2)]),
            Err(InstanceError::DuplicateStart { .. })
        ));
        assert!(matches!(
            Instance::new(open(3, 1), vec![Vertex(0), Vertex(1)], vec![Vertex(2), Vertex(2)]),
            Err(InstanceError::DuplicateGoal { .. })
        ));
    }

    #[test]
    fn rejects_split_components() {
        let g = GridGraph::new(GridMap::new(3, 1, vec![true, false, true]).unwrap());
        assert_eq!(
            Instance::new(g, vec![Vertex(0)], vec![Vertex(1)]).unwrap_err(),
            InstanceError::Disconnected { agent: 0 }
        );
    }

    #[test]
    fn saturated_row_uses_every_cell() {
        let map = GridMap::open(3, 1).unwrap();
        for seed in 0..5 {
            let inst = generate_instance(&map, 3, seed).unwrap();
            let mut s = inst.starts().to_vec();
            s.sort();
            assert_eq!(s, vec![Vertex(0), Vertex(1), Vertex(2)]);
        }
    }

    #[test]
    fn generation_is_deterministic() {
        let map = GridMap::open(8, 8).unwrap();
        let a = generate_instance(&map, 10, 42).unwrap();
        let b = generate_instance(&map, 10, 42).unwrap();
        assert_eq!((a.starts(), a.goals()), (b.starts(), b.goals()));
        let c = generate_instance(&map, 10, 43).unwrap();
        assert_ne!(a.starts(), c.starts());
    }

    #[test]
    fn generation_samples_only_the_largest_component() {
        let map = GridMap::new(5, 1, vec![true, false, true, true, true]).unwrap();
        let inst = generate_instance(&map, 3, 1).unwrap();
        assert!(inst.starts().iter().all(|v| v.0 >= 1));
        assert!(matches!(
            generate_instance(&map, 4, 1),
            Err(InstanceError::TooManyAgents {
                requested: 4,
                available: 3
            })
        ));
    }
}

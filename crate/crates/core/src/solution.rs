//! Timed solutions, conflict validation and cost metrics.

use alloc::string::String;
use alloc::vec::Vec;

use crate::graph::{GridGraph, Vertex};
use crate::instance::{AgentId, Instance};

/// One timed vertex sequence per agent; `paths[i][t]` is agent `i` at time `t`.
#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct Solution {
    pub paths: Vec<Vec<Vertex>>,
    pub algorithm: String,
    pub seed: u64,
    pub runtime_seconds: f64,
    pub solved: bool,
}

impl Solution {
    /// Wraps paths, padding shorter ones with waits so all share one length.
    pub fn from_paths(mut paths: Vec<Vec<Vertex>>, algorithm: &str) -> Self {
        pad_paths(&mut paths);
        Self {
            paths,
            algorithm: algorithm.into(),
            seed: 0,
            runtime_seconds: 0.0,
            solved: true,
        }
    }

    pub fn num_agents(&self) -> usize {
        self.paths.len()
    }

    /// Number of time steps covered (path length minus one).
    pub fn horizon(&self) -> usize {
        self.paths.iter().map(|p| p.len().saturating_sub(1)).max().unwrap_or(0)
    }

    /// Per-agent cost: last time step at which the agent is away from its
    /// final vertex, plus one. Terminal waits on the final vertex are free.
    pub fn agent_cost(&self, agent: usize) -> usize {
        let p = &self.paths[agent];
        let Some(&last) = p.last() else { return 0 };
        p.iter().rposition(|&v| v != last).map_or(0, |t| t + 1)
    }

    /// Sum of per-agent costs.
    pub fn soc(&self) -> usize {
        (0..self.paths.len()).map(|a| self.agent_cost(a)).sum()
    }

    /// Largest per-agent cost.
    pub fn makespan(&self) -> usize {
        (0..self.paths.len()).map(|a| self.agent_cost(a)).max().unwrap_or(0)
    }
}

/// Pads every path with copies of its last vertex up to the longest length.
pub fn pad_paths(paths: &mut [Vec<Vertex>]) {
    let len = paths.iter().map(Vec::len).max().unwrap_or(0);
    for p in paths.iter_mut() {
        if let Some(&last) = p.last() {
            p.resize(len, last);
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
#[cfg_attr(feature = "serde", serde(rename_all = "lowercase"))]
pub enum ConflictKind {
    Vertex,
    Swapping,
}

/// A pairwise conflict. For vertex conflicts `time` is the shared time step
/// and `to == from` is the vertex; for swapping conflicts the first agent
/// moves `from -> to` between `time` and `time + 1` while the second moves
/// the other way. `agents.0 < agents.1`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct Conflict {
    pub kind: ConflictKind,
    pub time: usize,
    pub agents: (AgentId, AgentId),
    pub from: Vertex,
    pub to: Vertex,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
#[cfg_attr(feature = "serde", serde(tag = "kind", rename_all = "snake_case"))]
pub enum StructuralError {
    EmptyPath {
        agent: AgentId,
    },
    UnequalLength {
        agent: AgentId,
        len: usize,
        expected: usize,
    },
    UnknownVertex {
        agent: AgentId,
        time: usize,
        vertex: Vertex,
    },
    IllegalMove {
        agent: AgentId,
        time: usize,
        from: Vertex,
        to: Vertex,
    },
    WrongStart {
        agent: AgentId,
        expected: Vertex,
        actual: Vertex,
    },
    WrongGoal {
        agent: AgentId,
        expected: Vertex,
        actual: Vertex,
    },
}

#[derive(Debug, Clone, Default, PartialEq, Eq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct ConflictReport {
    pub conflicts: Vec<Conflict>,
    pub structural: Vec<StructuralError>,
}

impl ConflictReport {
    /// No conflicts and no structural errors.
    pub fn is_valid(&self) -> bool {
        self.conflicts.is_empty() && self.structural.is_empty()
    }
}

/// Reports every vertex conflict, every swapping conflict and every
/// structural defect (unknown vertices, non-adjacent moves, ragged lengths).
/// Agents whose path is shorter than the longest are treated as waiting on
/// their last vertex.
pub fn validate(solution: &Solution, graph: &GridGraph) -> ConflictReport {
    let mut report = ConflictReport::default();
    let paths = &solution.paths;
    let len = paths.iter().map(Vec::len).max().unwrap_or(0);

    let mut usable = alloc::vec![true; paths.len()];
    for (i, p) in paths.iter().enumerate() {
        let agent = AgentId(i as u32);
        if p.is_empty() {
            report.structural.push(StructuralError::EmptyPath { agent });
            usable[i] = false;
            continue;
        }
        if p.len() != len {
            report.structural.push(StructuralError::UnequalLength {
                agent,
                len: p.len(),
                expected: len,
            });
        }
        for (t, &v) in p.iter().enumerate() {
            if !graph.contains(v) {
                report.structural.push(StructuralError::UnknownVertex {
                    agent,
                    time: t,
                    vertex: v,
                });
                usable[i] = false;
            }
        }
        if usable[i] {
            for (t, w) in p.windows(2).enumerate() {
                if w[0] != w[1] && !graph.are_adjacent(w[0], w[1]) {
                    report.structural.push(StructuralError::IllegalMove {
                        agent,
                        time: t,
                        from: w[0],
                        to: w[1],
                    });
                }
            }
        }
    }

    let at = |i: usize, t: usize| -> Vertex {
        let p = &paths[i];
        p[t.min(p.len() - 1)]
    };
    let agents: Vec<usize> = (0..paths.len()).filter(|&i| usable[i]).collect();
    let mut slots: Vec<(Vertex, usize)> = Vec::with_capacity(agents.len());
    for t in 0..len {
        slots.clear();
        slots.extend(agents.iter().map(|&i| (at(i, t), i)));
        slots.sort_unstable();
        let mut start = 0;
        while start < slots.len() {
            let mut end = start + 1;
            while end < slots.len() && slots[end].0 == slots[start].0 {
                end += 1;
            }
            for x in start..end {
                for y in x + 1..end {
                    report.conflicts.push(Conflict {
                        kind: ConflictKind::Vertex,
                        time: t,
                        agents: (AgentId(slots[x].1 as u32), AgentId(slots[y].1 as u32)),
                        from: slots[x].0,
                        to: slots[x].0,
                    });
                }
            }
            start = end;
        }
        if t + 1 == len {
            break;
        }
        for &a in &agents {
            let (u, v) = (at(a, t), at(a, t + 1));
            if u == v {
                continue;
            }
            let lo = slots.partition_point(|s| s.0 < v);
            for &(w, b) in &slots[lo..] {
                if w != v {
                    break;
                }
                if a < b && at(b, t + 1) == u {
                    report.conflicts.push(Conflict {
                        kind: ConflictKind::Swapping,
                        time: t,
                        agents: (AgentId(a as u32), AgentId(b as u32)),
                        from: u,
                        to: v,
                    });
                }
            }
        }
    }
    report.conflicts.sort_unstable();
    report.structural.sort_unstable();
    report
}

/// [`validate`] plus start checks, and goal checks when the solution claims
/// to be solved.
pub fn validate_for_instance(solution: &Solution, instance: &Instance) -> ConflictReport {
    let mut report = validate(solution, instance.graph());
    if solution.paths.len() != instance.num_agents() {
        // Surface the mismatch through the per-agent checks below.
        for i in solution.paths.len()..instance.num_agents() {
            report.structural.push(StructuralError::EmptyPath {
                agent: AgentId(i as u32),
            });
        }
    }
    for (i, p) in solution.paths.iter().enumerate().take(instance.num_agents()) {
        let agent = AgentId(i as u32);
        let (Some(&first), Some(&last)) = (p.first(), p.last()) else {
            continue;
        };
        let (s, g) = (instance.starts()[i], instance.goals()[i]);
        if first != s {
            report.structural.push(StructuralError::WrongStart {
                agent,
                expected: s,
                actual: first,
            });
        }
        if solution.solved && last != g {
            report.structural.push(StructuralError::WrongGoal {
                agent,
                expected: g,
                actual: last,
            });
        }
    }
    report.structural.sort_unstable();
    report
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::grid::GridMap;
    use alloc::vec;

    fn p(vs: &[u32]) -> Vec<Vertex> {
        vs.iter().map(|&v| Vertex(v)).collect()
    }

    fn row(n: usize) -> GridGraph {
        GridGraph::new(GridMap::open(n, 1).unwrap())
    }

    #[test]
    fn stationary_agents_on_distinct_vertices_are_valid() {
        let s = Solution::from_paths(vec![p(&[0, 0]), p(&[2, 2])], "test");
        assert!(validate(&s, &row(3)).is_valid());
    }

    #[test]
    fn head_on_exchange_is_a_swapping_conflict() {
        let s = Solution::from_paths(vec![p(&[0, 1]), p(&[1, 0])], "test");
        let r = validate(&s, &row(3));
        assert_eq!(r.conflicts.len(), 1);
        assert_eq!(r.conflicts[0].kind, ConflictKind::Swapping);
        assert_eq!(r.conflicts[0].time, 0);
    }

    #[test]
    fn converging_agents_make_a_vertex_conflict() {
        let s = Solution::from_paths(vec![p(&[0, 1]), p(&[2, 1])], "test");
        let r = validate(&s, &row(3));
        assert_eq!(r.conflicts.len(), 1);
        assert_eq!(r.conflicts[0].kind, ConflictKind::Vertex);
        assert_eq!(r.conflicts[0].time, 1);
        assert_eq!(r.conflicts[0].from, Vertex(1));
    }

    #[test]
    fn following_is_legal() {
        let s = Solution::from_paths(vec![p(&[1, 2]), p(&[0, 1])], "test");
        assert!(validate(&s, &row(3)).is_valid());
    }

    #[test]
    fn teleport_is_structural() {
        let s = Solution::from_paths(vec![p(&[0, 2])], "test");
        let r = validate(&s, &row(3));
        assert!(r.conflicts.is_empty());
        assert_eq!(r.structural.len(), 1);
        assert!(matches!(r.structural[0], StructuralError::IllegalMove { .. }));
    }

    #[test]
    fn costs_ignore_terminal_waits() {
        let s = Solution::from_paths(vec![p(&[3, 3])], "test");
        assert_eq!((s.soc(), s.makespan()), (0, 0));
        let s = Solution::from_paths(vec![p(&[0, 1, 2, 3, 4])], "test");
        assert_eq!((s.soc(), s.makespan()), (4, 4));
        let s = Solution::from_paths(vec![p(&[0, 1, 2, 3]), p(&[9, 8, 7, 6, 5, 4])], "test");
        assert_eq!((s.soc(), s.makespan()), (8, 5));
    }

    #[test]
    fn leaving_the_goal_reaccrues_cost() {
        let s = Solution::from_paths(vec![p(&[1, 0, 1, 1, 1])], "test");
        assert_eq!(s.soc(), 2);
    }
}

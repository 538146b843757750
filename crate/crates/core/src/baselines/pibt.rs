//! Priority Inheritance with Backtracking.
//!
//! One configuration per time step. Agents are visited in decreasing
//! priority; an agent that wants a vertex held by an unplanned agent lends
//! it its priority, and the holder must find a move of its own (never into
//! the requester's vertex) or the requester tries its next candidate.
//! Priority grows by one each step an agent is away from its goal and drops
//! back to its fractional tie-breaker on arrival.

use alloc::vec::Vec;

use crate::budget::{Deadline, Limits, SolveError, StopReason};
use crate::graph::{GridGraph, Vertex};
use crate::instance::Instance;
use crate::search::{bfs_distances, UNREACHABLE};

const NONE: u32 = u32::MAX;

#[derive(Debug, Clone)]
pub struct PibtState {
    /// Current vertex of each agent.
    pub config: Vec<Vertex>,
    pub goals: Vec<Vertex>,
    pub priorities: Vec<f64>,
    /// Static distance-to-goal field per agent.
    dist: Vec<Vec<u32>>,
}

impl PibtState {
    pub fn new(graph: &GridGraph, starts: &[Vertex], goals: &[Vertex]) -> Self {
        let n = starts.len();
        let dist = goals
            .iter()
            .map(|&g| bfs_distances(graph, g, |_| false).as_slice().to_vec())
            .collect();
        // Distinct fractional tie-breakers; agent 0 ranks highest.
        let priorities = (0..n).map(|i| 1.0 - (i + 1) as f64 / (n + 1) as f64).collect();
        Self {
            config: starts.to_vec(),
            goals: goals.to_vec(),
            priorities,
            dist,
        }
    }

    pub fn all_at_goals(&self) -> bool {
        self.config == self.goals
    }

    fn update_priorities(&mut self) {
        for (i, p) in self.priorities.iter_mut().enumerate() {
            if self.config[i] == self.goals[i] {
                *p -= (*p as u64) as f64;
            } else {
                *p += 1.0;
            }
        }
    }
}

struct StepScratch<'a> {
    graph: &'a GridGraph,
    state: &'a PibtState,
    occupied_now: Vec<u32>,
    occupied_next: Vec<u32>,
    next: Vec<u32>,
}

impl StepScratch<'_> {
    fn plan(&mut self, a: usize) -> bool {
        let here = self.state.config[a];
        let dist = &self.state.dist[a];
        let mut candidates: Vec<Vertex> = self.graph.neighbors(here).to_vec();
        candidates.push(here);
        candidates.sort_by_key(|&v| (dist[v.index()], v));

        for v in candidates {
            if dist[v.index()] == UNREACHABLE || self.occupied_next[v.index()] != NONE {
                continue;
            }
            let holder = self.occupied_now[v.index()];
            // The holder already committed to moving onto our vertex: swap.
            if holder != NONE && holder as usize != a && self.next[holder as usize] == here.0 {
                continue;
            }
            self.occupied_next[v.index()] = a as u32;
            self.next[a] = v.0;
            if holder != NONE
                && holder as usize != a
                && self.next[holder as usize] == NONE
                && !self.plan(holder as usize)
            {
                continue;
            }
            return true;
        }
        self.occupied_next[here.index()] = a as u32;
        self.next[a] = here.0;
        false
    }
}

/// Computes the next configuration and advances priorities.
pub fn pibt_step(state: &mut PibtState, graph: &GridGraph) {
    let n = state.config.len();
    let mut occupied_now = alloc::vec![NONE; graph.num_vertices()];
    for (a, v) in state.config.iter().enumerate() {
        occupied_now[v.index()] = a as u32;
    }
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&x, &y| state.priorities[y].total_cmp(&state.priorities[x]).then(x.cmp(&y)));

    let mut scratch = StepScratch {
        graph,
        state,
        occupied_now,
        occupied_next: alloc::vec![NONE; graph.num_vertices()],
        next: alloc::vec![NONE; n],
    };
    for a in order {
        if scratch.next[a] == NONE {
            scratch.plan(a);
        }
    }
    let next: Vec<Vertex> = scratch.next.into_iter().map(Vertex).collect();
    state.config = next;
    state.update_priorities();
}

/// Runs PIBT until every agent is on its goal at once, or the step cap or
/// deadline is hit.
pub fn solve_pibt(
    instance: &Instance,
    limits: &Limits,
    deadline: &dyn Deadline,
) -> Result<Vec<Vec<Vertex>>, SolveError> {
    let graph = instance.graph();
    let mut state = PibtState::new(graph, instance.starts(), instance.goals());
    for (a, &s) in instance.starts().iter().enumerate() {
        if state.dist[a][s.index()] == UNREACHABLE {
            return Err(SolveError::Unreachable { agent: a });
        }
    }
    let cap = limits.resolve_step_cap(graph.num_vertices());
    let mut paths: Vec<Vec<Vertex>> = instance.starts().iter().map(|&s| alloc::vec![s]).collect();
    let mut steps = 0;
    while !state.all_at_goals() {
        let reason = if deadline.expired() {
            Some(StopReason::Deadline)
        } else if steps >= cap {
            Some(StopReason::StepCap)
        } else {
            None
        };
        if let Some(reason) = reason {
            return Err(SolveError::Timeout { reason, partial: paths });
        }
        pibt_step(&mut state, graph);
        for (p, &v) in paths.iter_mut().zip(&state.config) {
            p.push(v);
        }
        steps += 1;
    }
    Ok(paths)
}

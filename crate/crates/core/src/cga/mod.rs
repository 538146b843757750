//! Corridor-generating MAPF solver.
//!
//! Every frontier time step the solver walks the agents in priority order.
//! An idle agent builds a corridor along its optimal path (stopping at the
//! first non-separating vertex or its goal), finds evacuation paths for the
//! agents standing in that corridor, and commits a short timed plan that
//! clears the corridor and pushes the agent through it. Agents busy with a
//! committed plan are skipped; vertices on committed plans are off limits to
//! everyone else. Agents that reach their goal are demoted to the back of
//! the order.

mod corridor;
mod evacuation;

use alloc::vec::Vec;
use core::hash::Hasher;

use fnv::FnvHasher;
use hashbrown::HashSet;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub use corridor::{longest_corridor, Corridor};
pub use evacuation::{EvacuationFailure, EvacuationPlan, EvacuationRoute, Move};

use crate::budget::{Deadline, Limits, SolveError, StopReason};
use crate::graph::{GridGraph, Vertex};
use crate::instance::{AgentId, Instance};
use crate::search::{bfs_distances, UNREACHABLE};
use crate::solution::{pad_paths, validate, Solution};
use crate::svs::SeparatingVertexSet;

const NONE: u32 = u32::MAX;

/// One agent's bookkeeping.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AgentState {
    pub id: AgentId,
    /// Active goal: the initial goal, or a temporary one.
    pub goal: Vertex,
    pub init_goal: Vertex,
    pub temp_goal_active: bool,
    /// `path[t]` is the vertex occupied at time `t`.
    pub path: Vec<Vertex>,
}

impl AgentState {
    /// Last written vertex.
    pub fn curr(&self) -> Vertex {
        *self.path.last().expect("path starts at the start vertex")
    }

    pub fn at(&self, t: usize) -> Vertex {
        self.path[t.min(self.path.len() - 1)]
    }
}

#[derive(Debug, Clone, Copy)]
pub struct CgaConfig {
    /// Re-validate all written paths after every committed plan. Quadratic
    /// in the run length; meant for tests on small instances.
    pub validate_each_plan: bool,
    /// When the whole solver state repeats (a livelock, since the rules are
    /// deterministic), send the agents that are away from their goals to
    /// random nearby temporary goals instead of cycling until the step cap.
    pub escape_livelocks: bool,
    /// Seeds the livelock escapes; the run is a pure function of it.
    pub seed: u64,
}

impl Default for CgaConfig {
    fn default() -> Self {
        Self {
            validate_each_plan: false,
            escape_livelocks: true,
            seed: 0,
        }
    }
}

/// How far (in hops) a livelock escape may send an agent.
const ESCAPE_RADIUS: u32 = 8;

/// Epoch-stamped vertex marks; clearing is O(1).
#[derive(Debug, Clone)]
struct Marks {
    stamp: Vec<u32>,
    epoch: u32,
}

impl Marks {
    fn new(n: usize) -> Self {
        Self {
            stamp: alloc::vec![0; n],
            epoch: 1,
        }
    }

    fn clear(&mut self) {
        self.epoch = self.epoch.wrapping_add(1);
        if self.epoch == 0 {
            self.stamp.fill(0);
            self.epoch = 1;
        }
    }

    #[inline]
    fn set(&mut self, v: Vertex) {
        self.stamp[v.index()] = self.epoch;
    }

    #[inline]
    fn unset(&mut self, v: Vertex) {
        self.stamp[v.index()] = 0;
    }

    #[inline]
    fn get(&self, v: Vertex) -> bool {
        self.stamp[v.index()] == self.epoch
    }
}

/// Solver state for one run.
#[derive(Debug)]
pub struct CgaSolver<'a> {
    graph: &'a GridGraph,
    svs: &'a SeparatingVertexSet,
    config: CgaConfig,
    agents: Vec<AgentState>,
    order: Vec<AgentId>,
    time: usize,
    /// Agent at each vertex at the frontier time (`NONE` if empty).
    occupant: Vec<u32>,
    /// Vertices on any committed plan at or after the frontier time.
    reserved: Marks,
    goal_dist: Vec<Option<Vec<u32>>>,
    scratch: evacuation::Scratch,
    wrote_plan: bool,
    rng: ChaCha8Rng,
    /// Fingerprints of the states seen since the last escape.
    seen: HashSet<u64>,
    escapes: usize,
}

impl<'a> CgaSolver<'a> {
    pub fn new(instance: &'a Instance, svs: &'a SeparatingVertexSet) -> Result<Self, SolveError> {
        Self::with_config(instance, svs, CgaConfig::default())
    }

    pub fn with_config(
        instance: &'a Instance,
        svs: &'a SeparatingVertexSet,
        config: CgaConfig,
    ) -> Result<Self, SolveError> {
        let graph = instance.graph();
        let n = graph.num_vertices();
        assert_eq!(svs.len(), n, "separating-vertex set belongs to another graph");
        let agents = instance
            .agents()
            .map(|id| AgentState {
                id,
                goal: instance.goals()[id.index()],
                init_goal: instance.goals()[id.index()],
                temp_goal_active: false,
                path: alloc::vec![instance.starts()[id.index()]],
            })
            .collect();
        let mut solver = Self {
            graph,
            svs,
            config,
            agents,
            order: instance.agents().collect(),
            time: 0,
            occupant: alloc::vec![NONE; n],
            reserved: Marks::new(n),
            goal_dist: alloc::vec![None; n],
            scratch: evacuation::Scratch::new(n),
            wrote_plan: false,
            rng: ChaCha8Rng::seed_from_u64(config.seed),
            seen: HashSet::new(),
            escapes: 0,
        };
        for a in 0..solver.agents.len() {
            let (start, goal) = (solver.agents[a].curr(), solver.agents[a].goal);
            if solver.distances_to(goal)[start.index()] == UNREACHABLE {
                return Err(SolveError::Unreachable { agent: a });
            }
        }
        solver.prepare_frontier();
        Ok(solver)
    }

    pub fn graph(&self) -> &GridGraph {
        self.graph
    }

    pub fn svs(&self) -> &SeparatingVertexSet {
        self.svs
    }

    pub fn agents(&self) -> &[AgentState] {
        &self.agents
    }

    pub fn agent(&self, id: AgentId) -> &AgentState {
        &self.agents[id.index()]
    }

    /// Current priority order, highest first.
    pub fn order(&self) -> &[AgentId] {
        &self.order
    }

    /// Frontier time: every agent has a written position at this step.
    pub fn time(&self) -> usize {
        self.time
    }

    /// Whether the agent already has a committed step beyond the frontier.
    pub fn is_busy(&self, id: AgentId) -> bool {
        self.agents[id.index()].path.len() > self.time + 1
    }

    pub fn occupant(&self, v: Vertex) -> Option<AgentId> {
        let o = self.occupant[v.index()];
        (o != NONE).then_some(AgentId(o))
    }

    pub fn is_reserved(&self, v: Vertex) -> bool {
        self.reserved.get(v)
    }

    /// Every agent stands on its initial goal at the frontier.
    pub fn all_at_goals(&self) -> bool {
        self.agents.iter().all(|a| a.at(self.time) == a.init_goal)
    }

    /// Distance field to `goal`, computed once per goal vertex.
    fn distances_to(&mut self, goal: Vertex) -> &[u32] {
        let graph = self.graph;
        self.goal_dist[goal.index()]
            .get_or_insert_with(|| {
                let dm = bfs_distances(graph, goal, |_| false);
                dm.as_slice().to_vec()
            })
            .as_slice()
    }

    /// Rebuilds frontier occupancy and the reservation marks.
    fn prepare_frontier(&mut self) {
        let t = self.time;
        self.occupant.fill(NONE);
        self.reserved.clear();
        for a in &self.agents {
            self.occupant[a.at(t).index()] = a.id.0;
            if a.path.len() > t + 1 {
                for &v in &a.path[t..] {
                    self.reserved.set(v);
                }
            }
        }
    }

    /// Builds the corridor for an idle agent that is not on its active goal.
    pub fn create_corridor(&mut self, id: AgentId) -> Option<Corridor> {
        let (from, goal) = {
            let a = &self.agents[id.index()];
            (a.curr(), a.goal)
        };
        self.distances_to(goal);
        let dist = self.goal_dist[goal.index()].as_deref().expect("just computed");
        let occupant = &self.occupant;
        corridor::build(self.graph, self.svs, dist, from, |v| {
            occupant[v.index()] != NONE && occupant[v.index()] != id.0
        })
    }

    /// Runs one frontier iteration over all agents, then advances time.
    pub fn step(&mut self) {
        self.wrote_plan = false;
        for idx in 0..self.order.len() {
            let id = self.order[idx];
            if self.is_busy(id) {
                continue;
            }
            {
                let a = &mut self.agents[id.index()];
                if a.temp_goal_active && a.curr() == a.goal {
                    a.temp_goal_active = false;
                    a.goal = a.init_goal;
                }
                if a.curr() == a.goal {
                    continue;
                }
            }
            let Some(corridor) = self.create_corridor(id) else {
                continue;
            };
            let Ok(plan) = self.find_evs(id, &corridor) else {
                continue;
            };
            self.evacuate_and_push(id, &corridor, &plan);
        }
        for a in &mut self.agents {
            if a.path.len() == self.time + 1 {
                let v = a.curr();
                a.path.push(v);
            }
        }
        self.time += 1;
        self.prepare_frontier();
        self.update_order();
    }

    /// Demotes agents standing on their active goal to the back (stable).
    /// When the last iteration committed nothing, also rotates the first
    /// unfinished agent behind the other unfinished ones so that every agent
    /// eventually leads.
    pub fn update_order(&mut self) {
        let t = self.time;
        let agents = &self.agents;
        let finished = |id: &AgentId| {
            let a = &agents[id.index()];
            a.at(t) == a.init_goal
        };
        let (mut order, done): (Vec<AgentId>, Vec<AgentId>) = self.order.iter().copied().partition(|id| !finished(id));
        if !self.wrote_plan && order.len() > 1 {
            order.rotate_left(1);
        }
        order.extend(done);
        self.order = order;
    }

    fn snapshot(&self) -> Vec<Vec<Vertex>> {
        let mut paths: Vec<Vec<Vertex>> = self.agents.iter().map(|a| a.path.clone()).collect();
        pad_paths(&mut paths);
        paths
    }

    /// Iterates until every agent is on its initial goal at the same time.
    pub fn run(&mut self, limits: &Limits, deadline: &dyn Deadline) -> Result<Vec<Vec<Vertex>>, SolveError> {
        let cap = limits.resolve_step_cap(self.graph.num_vertices());
        loop {
            if self.all_at_goals() {
                let t = self.time;
                return Ok(self.agents.iter().map(|a| a.path[..=t].to_vec()).collect());
            }
            let reason = if deadline.expired() {
                Some(StopReason::Deadline)
            } else if self.time >= cap {
                Some(StopReason::StepCap)
            } else {
                None
            };
            if let Some(reason) = reason {
                return Err(SolveError::Timeout {
                    reason,
                    partial: self.snapshot(),
                });
            }
            self.advance();
        }
    }

    /// [`step`](Self::step), then the livelock check: a state seen before
    /// since the last escape triggers a new one (when enabled).
    pub fn advance(&mut self) {
        self.step();
        if self.config.escape_livelocks && !self.seen.insert(self.fingerprint()) {
            self.escape_livelock();
            self.seen.clear();
        }
    }

    /// Number of livelock escapes so far.
    pub fn escapes(&self) -> usize {
        self.escapes
    }

    /// Hash of everything the next step depends on: positions, committed
    /// future steps, active goals and the priority order.
    fn fingerprint(&self) -> u64 {
        let t = self.time;
        let mut h = FnvHasher::default();
        for a in &self.agents {
            for &v in &a.path[t..] {
                h.write_u32(v.0);
            }
            h.write_u32(u32::MAX);
            h.write_u32(a.goal.0);
        }
        for id in &self.order {
            h.write_u32(id.0);
        }
        h.finish()
    }

    /// Gives every idle agent that is away from its initial goal a random
    /// temporary goal: a free, unreserved non-separating vertex within
    /// [`ESCAPE_RADIUS`] hops.
    fn escape_livelock(&mut self) {
        self.escapes += 1;
        let graph = self.graph;
        let mut ball = Vec::new();
        let mut dist = alloc::vec![UNREACHABLE; graph.num_vertices()];
        for idx in 0..self.order.len() {
            let id = self.order[idx];
            let (from, init_goal) = {
                let a = &self.agents[id.index()];
                (a.curr(), a.init_goal)
            };
            if self.is_busy(id) || from == init_goal {
                continue;
            }
            ball.clear();
            let mut visited = alloc::vec![from];
            dist[from.index()] = 0;
            let mut head = 0;
            while head < visited.len() {
                let u = visited[head];
                head += 1;
                if dist[u.index()] == ESCAPE_RADIUS {
                    continue;
                }
                for &w in graph.neighbors(u) {
                    if dist[w.index()] != UNREACHABLE {
                        continue;
                    }
                    dist[w.index()] = dist[u.index()] + 1;
                    visited.push(w);
                    if !self.svs.is_separating(w)
                        && self.occupant[w.index()] == NONE
                        && !self.reserved.get(w)
                        && w != init_goal
                    {
                        ball.push(w);
                    }
                }
            }
            for v in visited {
                dist[v.index()] = UNREACHABLE;
            }
            if ball.is_empty() {
                continue;
            }
            let g = ball[self.rng.random_range(0..ball.len())];
            let a = &mut self.agents[id.index()];
            a.goal = g;
            a.temp_goal_active = true;
        }
    }

    fn check_written_paths(&self) {
        let sol = Solution::from_paths(self.snapshot(), "cga");
        let report = validate(&sol, self.graph);
        assert!(report.is_valid(), "committed plan conflicts: {report:?}");
    }
}

/// Solves an instance with the corridor-generating algorithm and the
/// default configuration.
pub fn solve_cga(
    instance: &Instance,
    svs: &SeparatingVertexSet,
    limits: &Limits,
    deadline: &dyn Deadline,
) -> Result<Vec<Vec<Vertex>>, SolveError> {
    solve_cga_with(instance, svs, CgaConfig::default(), limits, deadline)
}

pub fn solve_cga_with(
    instance: &Instance,
    svs: &SeparatingVertexSet,
    config: CgaConfig,
    limits: &Limits,
    deadline: &dyn Deadline,
) -> Result<Vec<Vec<Vertex>>, SolveError> {
    CgaSolver::with_config(instance, svs, config)?.run(limits, deadline)
}

#[cfg(test)]
mod tests;

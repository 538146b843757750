//! Prioritized planning: agents plan one after another, each avoiding the
//! committed paths of those before it. A failed agent triggers a restart
//! with a fresh random order until the deadline.

use alloc::collections::BinaryHeap;
use alloc::vec::Vec;
use core::cmp::Reverse;

use hashbrown::HashSet;
use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::budget::{Deadline, SolveError, StopReason};
use crate::graph::{GridGraph, Vertex};
use crate::instance::Instance;
use crate::search::{bfs_distances, UNREACHABLE};
use crate::solution::pad_paths;

const FOREVER: u32 = u32::MAX;

/// Vertex and edge occupations of already-planned agents.
#[derive(Debug, Clone)]
pub struct ReservationTable {
    vertices: HashSet<(u32, u32)>,
    /// `(from, to, t)`: a committed move `from -> to` between `t` and `t + 1`.
    edges: HashSet<(u32, u32, u32)>,
    /// Vertex blocked for every `t >= rest_from[v]` (an agent parked on its goal).
    rest_from: Vec<u32>,
    /// Latest time any committed path occupies the vertex, plus one (0 = never).
    last_use: Vec<u32>,
    /// Latest time of any timed entry.
    horizon_used: u32,
}

impl ReservationTable {
    pub fn new(num_vertices: usize) -> Self {
        Self {
            vertices: HashSet::new(),
            edges: HashSet::new(),
            rest_from: alloc::vec![FOREVER; num_vertices],
            last_use: alloc::vec![0; num_vertices],
            horizon_used: 0,
        }
    }

    /// Commits a timed path; the agent then rests on its last vertex forever.
    pub fn reserve_path(&mut self, path: &[Vertex]) {
        for (t, &v) in path.iter().enumerate() {
            let t = t as u32;
            self.vertices.insert((v.0, t));
            self.last_use[v.index()] = self.last_use[v.index()].max(t + 1);
            self.horizon_used = self.horizon_used.max(t);
        }
        for (t, w) in path.windows(2).enumerate() {
            if w[0] != w[1] {
                self.edges.insert((w[0].0, w[1].0, t as u32));
            }
        }
        if let Some(&last) = path.last() {
            let r = &mut self.rest_from[last.index()];
            *r = (*r).min(path.len() as u32 - 1);
        }
    }

    pub fn vertex_blocked(&self, v: Vertex, t: u32) -> bool {
        t >= self.rest_from[v.index()] || self.vertices.contains(&(v.0, t))
    }

    /// Would moving `from -> to` between `t` and `t + 1` swap with a committed agent?
    pub fn edge_blocked(&self, from: Vertex, to: Vertex, t: u32) -> bool {
        self.edges.contains(&(to.0, from.0, t))
    }

    /// Can an agent stand on `v` from time `t` onwards without ever being hit?
    pub fn can_rest(&self, v: Vertex, t: u32) -> bool {
        self.rest_from[v.index()] == FOREVER && self.last_use[v.index()] <= t
    }

    fn settle_time(&self) -> u32 {
        self.horizon_used + 1
    }
}

#[derive(Debug, Clone, Copy)]
struct Node {
    v: Vertex,
    t: u32,
    parent: u32,
}

/// Earliest-arrival timed path from `start` to `goal` avoiding the table,
/// with waiting allowed, ending on a vertex the agent can occupy forever.
///
/// `h` is the static distance-to-goal field. Returns `Ok(None)` when no path
/// exists within `horizon` steps and `Err` when the deadline fires.
pub fn space_time_astar(
    graph: &GridGraph,
    start: Vertex,
    goal: Vertex,
    h: &[u32],
    table: &ReservationTable,
    horizon: u32,
    deadline: &dyn Deadline,
) -> Result<Option<Vec<Vertex>>, StopReason> {
    if table.vertex_blocked(start, 0) || h[start.index()] == UNREACHABLE {
        return Ok(None);
    }
    // Past `settle` nothing changes over time except parked agents, so all
    // later times collapse into one key.
    let settle = table.settle_time();
    let key = |v: Vertex, t: u32| (v.0, t.min(settle));
    let mut nodes: Vec<Node> = Vec::new();
    let mut closed: HashSet<(u32, u32)> = HashSet::new();
    // (f, -g as tie-break towards deeper nodes, node index)
    let mut open: BinaryHeap<Reverse<(u32, Reverse<u32>, u32)>> = BinaryHeap::new();
    nodes.push(Node {
        v: start,
        t: 0,
        parent: u32::MAX,
    });
    open.push(Reverse((h[start.index()], Reverse(0), 0)));
    let mut expansions = 0u32;

    while let Some(Reverse((_, _, idx))) = open.pop() {
        let Node { v, t, .. } = nodes[idx as usize];
        if !closed.insert(key(v, t)) {
            continue;
        }
        expansions += 1;
        if expansions.is_multiple_of(4096) && deadline.expired() {
            return Err(StopReason::Deadline);
        }
        if v == goal && table.can_rest(v, t) {
            let mut path = Vec::with_capacity(t as usize + 1);
            let mut i = idx;
            while i != u32::MAX {
                path.push(nodes[i as usize].v);
                i = nodes[i as usize].parent;
            }
            path.reverse();
            return Ok(Some(path));
        }
        if t >= horizon {
            continue;
        }
        let nt = t + 1;
        let waits = t < settle;
        let candidates = graph.neighbors(v).iter().copied().chain(waits.then_some(v));
        for w in candidates {
            if h[w.index()] == UNREACHABLE
                || table.vertex_blocked(w, nt)
                || (w != v && table.edge_blocked(v, w, t))
                || closed.contains(&key(w, nt))
            {
                continue;
            }
            let i = nodes.len() as u32;
            nodes.push(Node {
                v: w,
                t: nt,
                parent: idx,
            });
            open.push(Reverse((nt + h[w.index()], Reverse(nt), i)));
        }
    }
    Ok(None)
}

/// Prioritized planning with random restarts. Only the deadline ends an
/// unsuccessful run.
pub fn solve_prp(instance: &Instance, seed: u64, deadline: &dyn Deadline) -> Result<Vec<Vec<Vertex>>, SolveError> {
    let graph = instance.graph();
    let n = instance.num_agents();
    let horizon = 4 * (graph.num_vertices() + n) as u32;
    let heuristics: Vec<Vec<u32>> = instance
        .goals()
        .iter()
        .map(|&g| bfs_distances(graph, g, |_| false).as_slice().to_vec())
        .collect();
    for (a, &s) in instance.starts().iter().enumerate() {
        if heuristics[a][s.index()] == UNREACHABLE {
            return Err(SolveError::Unreachable { agent: a });
        }
    }

    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut order: Vec<usize> = (0..n).collect();
    let timeout = || SolveError::Timeout {
        reason: StopReason::Deadline,
        partial: Vec::new(),
    };
    'restart: loop {
        if deadline.expired() {
            return Err(timeout());
        }
        order.shuffle(&mut rng);
        let mut table = ReservationTable::new(graph.num_vertices());
        let mut paths: Vec<Vec<Vertex>> = alloc::vec![Vec::new(); n];
        for &a in &order {
            let (s, g) = (instance.starts()[a], instance.goals()[a]);
            match space_time_astar(graph, s, g, &heuristics[a], &table, horizon, deadline) {
                Ok(Some(path)) => {
                    table.reserve_path(&path);
                    paths[a] = path;
                }
                Ok(None) => continue 'restart,
                Err(_) => return Err(timeout()),
            }
        }
        pad_paths(&mut paths);
        return Ok(paths);
    }
}

use alloc::vec::Vec;

use super::{CgaSolver, Corridor, Marks, NONE};
use crate::graph::Vertex;
use crate::instance::AgentId;

/// Why a corridor could not be cleared this round.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum EvacuationFailure {
    /// Only committed plans of other agents stand in the way.
    BlockedByPlan,
    /// No evacuation exists even ignoring committed plans. The main agent
    /// has been given a temporary goal (when one exists).
    UnsolvableLocally,
}

/// A single-step relocation in the sequential evacuation order.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Move {
    pub agent: AgentId,
    pub from: Vertex,
    pub to: Vertex,
}

/// Evacuation path of one agent found inside a corridor.
///
/// `route` runs from the agent's vertex to the claimed free vertex
/// (`route.last()`). Its first `exit` hops stay inside the corridor over
/// free vertices; the vertices after that, up to the claimed one, hold
/// agents outside the corridor. Those agents shift one vertex along the
/// route and the evacuee stops at `route[exit]`, the first vertex outside
/// the corridor.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EvacuationRoute {
    pub agent: AgentId,
    pub route: Vec<Vertex>,
    pub exit: usize,
}

impl EvacuationRoute {
    pub fn terminal(&self) -> Vertex {
        *self.route.last().expect("route is never empty")
    }
}

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct EvacuationPlan {
    /// Agents found inside the corridor, in corridor order.
    pub blockers: Vec<AgentId>,
    /// Evacuations in the order they were resolved.
    pub routes: Vec<EvacuationRoute>,
    /// Every relocation, in a sequentially valid order.
    pub moves: Vec<Move>,
}

impl EvacuationPlan {
    pub fn is_empty(&self) -> bool {
        self.routes.is_empty()
    }
}

#[derive(Debug, Clone)]
pub(super) struct Scratch {
    in_corridor: Marks,
    blockers: Marks,
    claimed: Marks,
    visited: Marks,
    parent: Vec<u32>,
    layer: Vec<Vertex>,
    next_layer: Vec<Vertex>,
    undo: Vec<(Vertex, u32)>,
    avail_set: Marks,
    avail: Vec<u32>,
}

impl Scratch {
    pub(super) fn new(n: usize) -> Self {
        Self {
            in_corridor: Marks::new(n),
            blockers: Marks::new(n),
            claimed: Marks::new(n),
            visited: Marks::new(n),
            parent: alloc::vec![NONE; n],
            layer: Vec::new(),
            next_layer: Vec::new(),
            undo: Vec::new(),
            avail_set: Marks::new(n),
            avail: alloc::vec![0; n],
        }
    }
}

const NEVER: u32 = u32::MAX;

impl CgaSolver<'_> {
    /// Finds evacuation paths for every other agent inside `corridor`.
    ///
    /// Searches never pass the main agent's vertex, never touch vertices on
    /// committed plans, and each claims its own free vertex outside the
    /// corridor. The main agent's active goal is avoided whenever some
    /// blocker can leave without it. On [`EvacuationFailure::UnsolvableLocally`]
    /// the main agent's goal is switched to the closest free non-separating
    /// vertex.
    pub fn find_evs(&mut self, id: AgentId, corridor: &Corridor) -> Result<EvacuationPlan, EvacuationFailure> {
        let cells = corridor.vertices();
        if cells[1..].iter().any(|&v| self.reserved.get(v)) {
            return Err(EvacuationFailure::BlockedByPlan);
        }
        let mut plan = EvacuationPlan::default();
        // (corridor index, agent)
        let mut remaining: Vec<(usize, AgentId)> = Vec::new();
        for (i, &v) in cells.iter().enumerate().skip(1) {
            let o = self.occupant[v.index()];
            if o != NONE && o != id.0 {
                remaining.push((i, AgentId(o)));
                plan.blockers.push(AgentId(o));
            }
        }
        if remaining.is_empty() {
            return Ok(plan);
        }
        // Far end first.
        remaining.reverse();

        let s = &mut self.scratch;
        s.in_corridor.clear();
        s.blockers.clear();
        s.claimed.clear();
        s.undo.clear();
        for &v in cells {
            s.in_corridor.set(v);
        }
        for &(i, _) in &remaining {
            s.blockers.set(cells[i]);
        }

        let main_pos = cells[0];
        let goal = self.agents[id.index()].goal;
        let mut failure = None;
        while !remaining.is_empty() {
            // The main agent's goal is an obstacle unless no blocker can get
            // out without crossing it.
            let found = [Some(goal), None].into_iter().find_map(|avoid| {
                remaining.iter().enumerate().find_map(|(k, &(i, b))| {
                    self.evacuation_route(cells[i], main_pos, avoid, true)
                        .map(|route| (k, b, route))
                })
            });
            let Some((k, agent, route)) = found else {
                let reachable_ignoring_plans = remaining
                    .iter()
                    .any(|&(i, _)| self.evacuation_route(cells[i], main_pos, None, false).is_some());
                failure = Some(if reachable_ignoring_plans {
                    EvacuationFailure::BlockedByPlan
                } else {
                    EvacuationFailure::UnsolvableLocally
                });
                break;
            };
            remaining.remove(k);
            self.scratch.blockers.unset(route[0]);
            plan.routes.push(self.apply_route(agent, route, &mut plan.moves));
        }

        for (v, o) in self.scratch.undo.drain(..).rev() {
            self.occupant[v.index()] = o;
        }
        match failure {
            None => Ok(plan),
            Some(f) => {
                if f == EvacuationFailure::UnsolvableLocally {
                    self.assign_temporary_goal(id);
                }
                Err(f)
            }
        }
    }

    /// Layered BFS from `source` to the nearest free vertex outside the
    /// corridor (smallest index among equally near ones). Once a search
    /// branch leaves the corridor it may not re-enter it.
    fn evacuation_route(
        &mut self,
        source: Vertex,
        main_pos: Vertex,
        avoid: Option<Vertex>,
        respect_plans: bool,
    ) -> Option<Vec<Vertex>> {
        let graph = self.graph;
        let s = &mut self.scratch;
        s.visited.clear();
        s.visited.set(source);
        s.layer.clear();
        s.layer.push(source);
        while !s.layer.is_empty() {
            s.next_layer.clear();
            let mut best: Option<Vertex> = None;
            for li in 0..s.layer.len() {
                let u = s.layer[li];
                let u_inside = s.in_corridor.get(u);
                for &w in graph.neighbors(u) {
                    if s.visited.get(w)
                        || w == main_pos
                        || Some(w) == avoid
                        || s.blockers.get(w)
                        || s.claimed.get(w)
                        || (respect_plans && self.reserved.get(w))
                    {
                        continue;
                    }
                    let w_inside = s.in_corridor.get(w);
                    if w_inside && !u_inside {
                        continue;
                    }
                    s.visited.set(w);
                    s.parent[w.index()] = u.0;
                    if !w_inside && self.occupant[w.index()] == NONE {
                        best = Some(best.map_or(w, |b| b.min(w)));
                    }
                    s.next_layer.push(w);
                }
            }
            if let Some(t) = best {
                let mut route = alloc::vec![t];
                let mut cur = t;
                while cur != source {
                    cur = Vertex(s.parent[cur.index()]);
                    route.push(cur);
                }
                route.reverse();
                return Some(route);
            }
            core::mem::swap(&mut s.layer, &mut s.next_layer);
        }
        None
    }

    /// Shifts the agents on the outside part of `route` one vertex forward,
    /// then walks the evacuee out of the corridor, updating the local
    /// occupancy (recorded for undo).
    fn apply_route(&mut self, agent: AgentId, route: Vec<Vertex>, moves: &mut Vec<Move>) -> EvacuationRoute {
        let s = &mut self.scratch;
        let exit = route
            .iter()
            .position(|&v| !s.in_corridor.get(v))
            .expect("route ends outside the corridor");
        let last = route.len() - 1;
        debug_assert_eq!(self.occupant[route[last].index()], NONE);
        let mut relocate = |occupant: &mut Vec<u32>, a: u32, from: Vertex, to: Vertex| {
            s.undo.push((from, occupant[from.index()]));
            s.undo.push((to, occupant[to.index()]));
            occupant[from.index()] = NONE;
            occupant[to.index()] = a;
            moves.push(Move {
                agent: AgentId(a),
                from,
                to,
            });
        };
        for i in (exit..last).rev() {
            let a = self.occupant[route[i].index()];
            debug_assert_ne!(a, NONE, "outside stretch of an evacuation route is packed");
            relocate(&mut self.occupant, a, route[i], route[i + 1]);
        }
        for i in 0..exit {
            debug_assert_eq!(self.occupant[route[i + 1].index()], NONE);
            relocate(&mut self.occupant, agent.0, route[i], route[i + 1]);
        }
        s.claimed.set(route[last]);
        EvacuationRoute { agent, route, exit }
    }

    /// Closest non-separating vertex that is free, not on a committed plan
    /// and not the agent's own initial goal; ties go to the smallest index.
    fn assign_temporary_goal(&mut self, id: AgentId) {
        let graph = self.graph;
        let (from, init_goal) = {
            let a = &self.agents[id.index()];
            (a.curr(), a.init_goal)
        };
        let s = &mut self.scratch;
        s.visited.clear();
        s.visited.set(from);
        s.layer.clear();
        s.layer.push(from);
        while !s.layer.is_empty() {
            s.next_layer.clear();
            let mut best: Option<Vertex> = None;
            for li in 0..s.layer.len() {
                for &w in graph.neighbors(s.layer[li]) {
                    if s.visited.get(w) {
                        continue;
                    }
                    s.visited.set(w);
                    s.next_layer.push(w);
                    if !self.svs.is_separating(w)
                        && self.occupant[w.index()] == NONE
                        && !self.reserved.get(w)
                        && w != init_goal
                    {
                        best = Some(best.map_or(w, |b| b.min(w)));
                    }
                }
            }
            if let Some(g) = best {
                let a = &mut self.agents[id.index()];
                a.goal = g;
                a.temp_goal_active = true;
                return;
            }
            core::mem::swap(&mut s.layer, &mut s.next_layer);
        }
    }

    /// Turns the evacuation moves plus the main agent's walk through the
    /// corridor into timed steps and commits them.
    ///
    /// Moves are taken in their sequential order; each is scheduled at the
    /// earliest step at which the mover has finished its previous move and
    /// the target vertex has been vacated (entering a vertex in the same
    /// step its occupant leaves is allowed). This keeps every vertex's
    /// occupancy intervals in sequential order, so the result has neither
    /// vertex nor swapping conflicts.
    pub fn evacuate_and_push(&mut self, id: AgentId, corridor: &Corridor, plan: &EvacuationPlan) {
        let mut moves = plan.moves.clone();
        moves.extend(corridor.vertices().windows(2).map(|w| Move {
            agent: id,
            from: w[0],
            to: w[1],
        }));

        let s = &mut self.scratch;
        s.avail_set.clear();
        let occupant = &self.occupant;
        let avail_of = |s: &Scratch, v: Vertex| -> u32 {
            if s.avail_set.get(v) {
                s.avail[v.index()]
            } else if occupant[v.index()] == NONE {
                0
            } else {
                NEVER
            }
        };
        // (agent, ready time)
        let mut ready: Vec<(AgentId, u32)> = Vec::new();
        // (agent, relative arrival time, vertex)
        let mut arrivals: Vec<(AgentId, u32, Vertex)> = Vec::with_capacity(moves.len());
        for mv in &moves {
            let slot = match ready.iter().position(|&(a, _)| a == mv.agent) {
                Some(k) => k,
                None => {
                    ready.push((mv.agent, 0));
                    ready.len() - 1
                }
            };
            let free_at = avail_of(s, mv.to);
            assert_ne!(free_at, NEVER, "move into a vertex that is never vacated: {mv:?}");
            let depart = ready[slot].1.max(free_at.saturating_sub(1));
            s.avail_set.set(mv.from);
            s.avail[mv.from.index()] = depart + 1;
            s.avail_set.set(mv.to);
            s.avail[mv.to.index()] = NEVER;
            ready[slot].1 = depart + 1;
            arrivals.push((mv.agent, depart + 1, mv.to));
        }

        let span = arrivals.iter().map(|a| a.1).max().unwrap_or(0) as usize;
        let bound = corridor.len() + plan.routes.iter().map(|r| r.route.len()).sum::<usize>();
        assert!(
            span <= bound,
            "evacuation schedule of {span} steps exceeds bound {bound}"
        );

        let t = self.time;
        arrivals.sort_by_key(|&(a, rt, _)| (a, rt));
        for &(a, rt, v) in &arrivals {
            let path = &mut self.agents[a.index()].path;
            let at = t + rt as usize;
            debug_assert!(path.len() <= at);
            let last = *path.last().expect("non-empty path");
            path.resize(at, last);
            path.push(v);
        }
        for &(a, _) in &ready {
            for &v in &self.agents[a.index()].path[t..] {
                self.reserved.set(v);
            }
        }
        self.wrote_plan = true;
        if self.config.validate_each_plan {
            self.check_written_paths();
        }
    }
}

use alloc::vec;
use alloc::vec::Vec;

use super::*;
use crate::budget::NoDeadline;
use crate::grid::GridMap;
use crate::svs::compute_svs;

fn graph(w: usize, h: usize, cells: &str) -> GridGraph {
    GridGraph::new(GridMap::new(w, h, cells.bytes().map(|c| c == b'.').collect()).unwrap())
}

fn instance(g: &GridGraph, starts: &[u32], goals: &[u32]) -> Instance {
    Instance::new(
        g.clone(),
        starts.iter().copied().map(Vertex).collect(),
        goals.iter().copied().map(Vertex).collect(),
    )
    .unwrap()
}

fn vs(ids: &[u32]) -> Vec<Vertex> {
    ids.iter().copied().map(Vertex).collect()
}

fn checked(inst: &Instance, svs: &SeparatingVertexSet) -> Vec<Vec<Vertex>> {
    let cfg = CgaConfig {
        validate_each_plan: true,
        ..CgaConfig::default()
    };
    let paths = CgaSolver::with_config(inst, svs, cfg)
        .unwrap()
        .run(&Limits::default(), &NoDeadline)
        .unwrap();
    let sol = Solution::from_paths(paths.clone(), "cga");
    assert!(crate::solution::validate_for_instance(&sol, inst).is_valid());
    paths
}

#[test]
fn corridor_in_a_row_runs_to_the_goal() {
    let g = graph(5, 1, ".....");
    let inst = instance(&g, &[0], &[4]);
    let svs = compute_svs(&g);
    let mut s = CgaSolver::new(&inst, &svs).unwrap();
    let c = s.create_corridor(AgentId(0)).unwrap();
    assert_eq!(c.vertices(), vs(&[0, 1, 2, 3, 4]).as_slice());
}

#[test]
fn open_grid_corridor_is_trivial() {
    let g = graph(3, 3, ".........");
    let inst = instance(&g, &[0], &[8]);
    let svs = compute_svs(&g);
    assert_eq!(svs.count(), 0);
    let mut s = CgaSolver::new(&inst, &svs).unwrap();
    let c = s.create_corridor(AgentId(0)).unwrap();
    assert!(c.is_trivial());
    assert_eq!(c.vertices(), vs(&[0, 1]).as_slice());
}

#[test]
fn empty_corridor_needs_no_evacuation() {
    let g = graph(5, 1, ".....");
    let inst = instance(&g, &[0], &[4]);
    let svs = compute_svs(&g);
    let mut s = CgaSolver::new(&inst, &svs).unwrap();
    let c = s.create_corridor(AgentId(0)).unwrap();
    let plan = s.find_evs(AgentId(0), &c).unwrap();
    assert!(plan.is_empty() && plan.blockers.is_empty());

    s.evacuate_and_push(AgentId(0), &c, &plan);
    assert_eq!(s.agent(AgentId(0)).path, vs(&[0, 1, 2, 3, 4]));
    assert!(s.is_busy(AgentId(0)));
}

// Plus graph: v0 top, v1 left, v2 centre, v3 right, v4 bottom.
const PLUS: &str = "@.@...@.@";

#[test]
fn blocker_on_plus_centre_steps_into_a_spur() {
    let g = graph(3, 3, PLUS);
    let inst = instance(&g, &[1, 2], &[3, 2]);
    let svs = compute_svs(&g);
    assert_eq!(svs.iter().collect::<Vec<_>>(), vs(&[2]));
    let mut s = CgaSolver::new(&inst, &svs).unwrap();
    let c = s.create_corridor(AgentId(0)).unwrap();
    assert_eq!(c.vertices(), vs(&[1, 2, 3]).as_slice());
    let plan = s.find_evs(AgentId(0), &c).unwrap();
    assert_eq!(plan.blockers, vec![AgentId(1)]);
    assert_eq!(plan.routes.len(), 1);

    // The free spurs one hop from the centre are v0 and v4; v1 holds the
    // main agent and v3 is its goal. Lowest index wins.
    let spurs: Vec<Vertex> = g
        .neighbors(Vertex(2))
        .iter()
        .copied()
        .filter(|&v| !c.contains(v) && s.occupant(v).is_none())
        .collect();
    assert_eq!(spurs.iter().min(), Some(&Vertex(0)));
    let ev = &plan.routes[0];
    assert_eq!(ev.route, vs(&[2, 0]));
    assert_eq!(ev.terminal(), Vertex(0));

    s.evacuate_and_push(AgentId(0), &c, &plan);
    assert_eq!(s.agent(AgentId(1)).path, vs(&[2, 0]));
    // The main agent follows the evacuee into the centre in the same step.
    assert_eq!(s.agent(AgentId(0)).path, vs(&[1, 2, 3]));
    s.check_written_paths();
}

#[test]
fn plus_graph_instance_is_solved() {
    let g = graph(3, 3, PLUS);
    let svs = compute_svs(&g);
    let paths = checked(&instance(&g, &[1, 2], &[3, 2]), &svs);
    assert_eq!(paths[0].last(), Some(&Vertex(3)));
    assert_eq!(paths[1].last(), Some(&Vertex(2)));
}

// A dead-end passage v1..v4 hanging off a 2x2 block (v0, v1, v5, v6).
//
//   . . . . .
//   . . @ @ @
const DEAD_END: (usize, usize, &str) = (5, 2, ".......@@@");

#[test]
fn dead_end_corridor_is_locally_unsolvable() {
    let (w, h, cells) = DEAD_END;
    let g = graph(w, h, cells);
    let svs = compute_svs(&g);
    assert_eq!(svs.iter().collect::<Vec<_>>(), vs(&[1, 2, 3]));
    let inst = instance(&g, &[1, 2, 3], &[4, 5, 6]);
    let mut s = CgaSolver::new(&inst, &svs).unwrap();
    let c = s.create_corridor(AgentId(0)).unwrap();
    assert_eq!(c.vertices(), vs(&[1, 2, 3, 4]).as_slice());
    assert_eq!(s.find_evs(AgentId(0), &c), Err(EvacuationFailure::UnsolvableLocally));
    // Closest free non-separating vertices are v0 and v6 (one hop); v0 wins.
    let a = s.agent(AgentId(0));
    assert!(a.temp_goal_active);
    assert_eq!(a.goal, Vertex(0));
    assert_eq!(a.init_goal, Vertex(4));
    // Nothing moved.
    assert_eq!(s.occupant(Vertex(2)), Some(AgentId(1)));
    assert_eq!(s.occupant(Vertex(3)), Some(AgentId(2)));
}

#[test]
fn dead_end_instance_is_solved_through_temporary_goals() {
    let (w, h, cells) = DEAD_END;
    let g = graph(w, h, cells);
    let svs = compute_svs(&g);
    checked(&instance(&g, &[1, 2, 3], &[4, 5, 6]), &svs);
}

#[test]
fn reserved_corridor_is_blocked_by_plan() {
    let g = graph(5, 1, ".....");
    let inst = instance(&g, &[0, 4], &[3, 4]);
    let svs = compute_svs(&g);
    let mut s = CgaSolver::new(&inst, &svs).unwrap();
    s.agents[1].path.extend(vs(&[3, 3]));
    s.prepare_frontier();
    let c = s.create_corridor(AgentId(0)).unwrap();
    assert_eq!(s.find_evs(AgentId(0), &c), Err(EvacuationFailure::BlockedByPlan));
    assert!(!s.agent(AgentId(0)).temp_goal_active);
}

// Two spurs above a line corridor v2..v7.
//
//   @ . @ . @ @
//   . . . . . .
const TWO_SPURS: &str = "@.@.@@......";

#[test]
fn two_blockers_leave_through_their_spurs() {
    let g = graph(6, 2, TWO_SPURS);
    assert_eq!(g.num_vertices(), 8);
    let svs = compute_svs(&g);
    let inst = instance(&g, &[2, 3, 5], &[7, 3, 5]);
    let mut s = CgaSolver::with_config(
        &inst,
        &svs,
        CgaConfig {
            validate_each_plan: true,
            ..CgaConfig::default()
        },
    )
    .unwrap();
    let c = s.create_corridor(AgentId(0)).unwrap();
    assert_eq!(c.vertices(), vs(&[2, 3, 4, 5, 6, 7]).as_slice());
    let plan = s.find_evs(AgentId(0), &c).unwrap();
    assert_eq!(plan.blockers, vec![AgentId(1), AgentId(2)]);
    // Far end first.
    assert_eq!(plan.routes[0].agent, AgentId(2));
    assert_eq!(plan.routes[0].route, vs(&[5, 1]));
    assert_eq!(plan.routes[1].agent, AgentId(1));
    assert_eq!(plan.routes[1].route, vs(&[3, 0]));

    s.evacuate_and_push(AgentId(0), &c, &plan);
    let main = &s.agent(AgentId(0)).path;
    assert_eq!(main.last(), Some(&Vertex(7)));
    assert!(main.len() - 1 <= c.len() + 4);
    assert_eq!(s.agent(AgentId(1)).curr(), Vertex(0));
    assert_eq!(s.agent(AgentId(2)).curr(), Vertex(1));
}

#[test]
fn blocker_chain_pushes_outside_agents_along() {
    // A spur of two cells above v3 (v0 over v1); the lower one is taken, so
    // the evacuee shoves its occupant up into the free top cell.
    //   @ . @ @
    //   @ . @ @
    //   . . . .
    let g = graph(4, 3, "@.@@@.@@....");
    let svs = compute_svs(&g);
    let inst = instance(&g, &[2, 3, 1], &[5, 3, 1]);
    let mut s = CgaSolver::with_config(
        &inst,
        &svs,
        CgaConfig {
            validate_each_plan: true,
            ..CgaConfig::default()
        },
    )
    .unwrap();
    let c = s.create_corridor(AgentId(0)).unwrap();
    assert_eq!(c.vertices(), vs(&[2, 3, 4, 5]).as_slice());
    let plan = s.find_evs(AgentId(0), &c).unwrap();
    assert_eq!(plan.routes[0].route, vs(&[3, 1, 0]));
    assert_eq!(plan.routes[0].exit, 1);
    assert_eq!(
        plan.moves,
        vec![
            Move {
                agent: AgentId(2),
                from: Vertex(1),
                to: Vertex(0)
            },
            Move {
                agent: AgentId(1),
                from: Vertex(3),
                to: Vertex(1)
            },
        ]
    );
    s.evacuate_and_push(AgentId(0), &c, &plan);
    assert_eq!(s.agent(AgentId(0)).curr(), Vertex(5));
    checked(&inst, &svs);
}

fn order_fixture(starts: &[u32], goals: &[u32]) -> (GridGraph, Instance) {
    let g = graph(5, 1, ".....");
    let inst = instance(&g, starts, goals);
    (g, inst)
}

#[test]
fn update_order_keeps_order_when_nobody_finished() {
    let (g, inst) = order_fixture(&[0, 2, 4], &[1, 3, 2]);
    let svs = compute_svs(&g);
    let mut s = CgaSolver::new(&inst, &svs).unwrap();
    s.wrote_plan = true;
    s.update_order();
    assert_eq!(s.order(), &[AgentId(0), AgentId(1), AgentId(2)]);
}

#[test]
fn update_order_demotes_finished_agents_stably() {
    let (g, inst) = order_fixture(&[0, 2, 4], &[0, 3, 4]);
    let svs = compute_svs(&g);
    let mut s = CgaSolver::new(&inst, &svs).unwrap();
    s.wrote_plan = true;
    s.update_order();
    assert_eq!(s.order(), &[AgentId(1), AgentId(0), AgentId(2)]);
}

#[test]
fn stalled_round_rotates_the_leader_back() {
    let (g, inst) = order_fixture(&[0, 2, 4], &[1, 3, 2]);
    let svs = compute_svs(&g);
    let mut s = CgaSolver::new(&inst, &svs).unwrap();
    s.wrote_plan = false;
    s.update_order();
    assert_eq!(s.order(), &[AgentId(1), AgentId(2), AgentId(0)]);
}

#[test]
fn single_agent_follows_a_shortest_path() {
    let g = graph(3, 3, ".........");
    let svs = compute_svs(&g);
    let paths = checked(&instance(&g, &[0], &[8]), &svs);
    assert_eq!(paths[0].len() - 1, 4);
}

#[test]
fn opposing_agents_in_a_dead_end_time_out() {
    let g = graph(3, 1, "...");
    let svs = compute_svs(&g);
    let inst = instance(&g, &[0, 2], &[2, 0]);
    let err = solve_cga(&inst, &svs, &Limits::default(), &NoDeadline).unwrap_err();
    assert!(matches!(
        err,
        SolveError::Timeout {
            reason: StopReason::StepCap,
            ..
        }
    ));
    if let SolveError::Timeout { partial, .. } = err {
        let sol = Solution::from_paths(partial, "cga");
        assert!(validate(&sol, &g).is_valid());
    }
}

#[test]
fn solver_is_deterministic() {
    let map = GridMap::new(
        6,
        6,
        "......\
         .@@.@.\
         ......\
         .@.@@.\
         ......\
         ..@...."[..36]
            .bytes()
            .map(|c| c == b'.')
            .collect(),
    )
    .unwrap();
    let inst = crate::instance::generate_instance(&map, 8, 11).unwrap();
    let svs = compute_svs(inst.graph());
    let a = solve_cga(&inst, &svs, &Limits::default(), &NoDeadline);
    let b = solve_cga(&inst, &svs, &Limits::default(), &NoDeadline);
    assert_eq!(a.is_ok(), b.is_ok());
    match (a, b) {
        (Ok(x), Ok(y)) => assert_eq!(x, y),
        (Err(SolveError::Timeout { partial: x, .. }), Err(SolveError::Timeout { partial: y, .. })) => {
            assert_eq!(x, y)
        }
        other => panic!("unexpected outcomes {other:?}"),
    }
}

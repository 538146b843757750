use alloc::vec::Vec;

use crate::graph::{GridGraph, Vertex};
use crate::search::UNREACHABLE;
use crate::svs::SeparatingVertexSet;

/// A path whose interior vertices are all separating vertices. The first
/// vertex is the owning agent's current location.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Corridor {
    vertices: Vec<Vertex>,
}

impl Corridor {
    pub fn vertices(&self) -> &[Vertex] {
        &self.vertices
    }

    pub fn start(&self) -> Vertex {
        self.vertices[0]
    }

    pub fn end(&self) -> Vertex {
        *self.vertices.last().expect("corridor is never empty")
    }

    pub fn len(&self) -> usize {
        self.vertices.len()
    }

    pub fn is_empty(&self) -> bool {
        self.vertices.is_empty()
    }

    /// Two vertices, at least one of them non-separating.
    pub fn is_trivial(&self) -> bool {
        self.vertices.len() == 2
    }

    pub fn contains(&self, v: Vertex) -> bool {
        self.vertices.contains(&v)
    }
}

/// Number of vertices on the longest corridor anywhere in the graph, by
/// exhaustive search over simple paths with separating interiors.
/// Exponential in the worst case; meant for small maps.
pub fn longest_corridor(graph: &GridGraph, svs: &SeparatingVertexSet) -> usize {
    fn extend(graph: &GridGraph, svs: &SeparatingVertexSet, v: Vertex, on_path: &mut [bool], len: usize) -> usize {
        let mut best = len;
        if len > 1 && !svs.is_separating(v) {
            return best;
        }
        for &w in graph.neighbors(v) {
            if !on_path[w.index()] {
                on_path[w.index()] = true;
                best = best.max(extend(graph, svs, w, on_path, len + 1));
                on_path[w.index()] = false;
            }
        }
        best
    }
    let mut on_path = alloc::vec![false; graph.num_vertices()];
    graph
        .vertices()
        .map(|v| {
            on_path[v.index()] = true;
            let best = extend(graph, svs, v, &mut on_path, 1);
            on_path[v.index()] = false;
            best
        })
        .max()
        .unwrap_or(0)
}

/// Follows the optimal path from `from` towards the root of `to_goal` (a BFS
/// distance field rooted at the goal), stepping to a neighbor one hop
/// closer each time, and stops at the first non-separating vertex after
/// `from` or at the goal. Among equally close neighbors an unoccupied one
/// is preferred, then the smallest index.
///
/// Returns `None` when the goal is unreachable or `from` is the goal.
pub(crate) fn build(
    graph: &GridGraph,
    svs: &SeparatingVertexSet,
    to_goal: &[u32],
    from: Vertex,
    occupied: impl Fn(Vertex) -> bool,
) -> Option<Corridor> {
    let mut d = to_goal[from.index()];
    if d == UNREACHABLE || d == 0 {
        return None;
    }
    let mut vertices = alloc::vec![from];
    let mut cur = from;
    loop {
        cur = graph
            .neighbors(cur)
            .iter()
            .copied()
            .filter(|w| to_goal[w.index()] == d - 1)
            .min_by_key(|&w| (occupied(w), w))
            .expect("distance field is consistent");
        d -= 1;
        vertices.push(cur);
        if d == 0 || !svs.is_separating(cur) {
            break;
        }
    }
    debug_assert!(vertices[1..vertices.len() - 1].iter().all(|&v| svs.is_separating(v)));
    Some(Corridor { vertices })
}

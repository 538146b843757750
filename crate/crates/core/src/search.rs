//! Breadth-first search primitives shared by all solvers.

use alloc::collections::VecDeque;
use alloc::vec::Vec;

use crate::graph::{GridGraph, Vertex};

pub const UNREACHABLE: u32 = u32::MAX;

/// Hop distances from a single source.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DistanceMap {
    source: Vertex,
    dist: Vec<u32>,
}

impl DistanceMap {
    pub fn source(&self) -> Vertex {
        self.source
    }

    /// Distance to `v`, `None` when unreachable.
    pub fn get(&self, v: Vertex) -> Option<u32> {
        let d = self.dist[v.index()];
        (d != UNREACHABLE).then_some(d)
    }

    /// Raw distances, [`UNREACHABLE`] marking unreachable vertices.
    pub fn as_slice(&self) -> &[u32] {
        &self.dist
    }

    pub fn max_finite(&self) -> Option<u32> {
        self.dist.iter().copied().filter(|&d| d != UNREACHABLE).max()
    }
}

/// Hop distances from `source` over the graph minus the vertices for which
/// `blocked` returns true. The source itself is never treated as blocked.
pub fn bfs_distances(graph: &GridGraph, source: Vertex, blocked: impl Fn(Vertex) -> bool) -> DistanceMap {
    let mut dist = alloc::vec![UNREACHABLE; graph.num_vertices()];
    let mut queue = VecDeque::new();
    dist[source.index()] = 0;
    queue.push_back(source);
    while let Some(u) = queue.pop_front() {
        let du = dist[u.index()];
        for &w in graph.neighbors(u) {
            if dist[w.index()] == UNREACHABLE && !blocked(w) {
                dist[w.index()] = du + 1;
                queue.push_back(w);
            }
        }
    }
    DistanceMap { source, dist }
}

/// Minimum-hop path from `from` to `to`, inclusive of both ends.
///
/// Ties are resolved by giving every vertex the smallest-index neighbor one
/// hop closer to `from` as its predecessor. Returns `None` when `to` is
/// unreachable.
pub fn shortest_path(graph: &GridGraph, from: Vertex, to: Vertex) -> Option<Vec<Vertex>> {
    shortest_path_avoiding(graph, from, to, |_| false)
}

/// [`shortest_path`] over the graph minus `blocked` vertices.
pub fn shortest_path_avoiding(
    graph: &GridGraph,
    from: Vertex,
    to: Vertex,
    blocked: impl Fn(Vertex) -> bool,
) -> Option<Vec<Vertex>> {
    let dm = bfs_distances(graph, from, blocked);
    path_from_distances(graph, &dm.dist, to)
}

/// Walks back from `to` to the BFS source using smallest-index predecessors.
pub(crate) fn path_from_distances(graph: &GridGraph, dist: &[u32], to: Vertex) -> Option<Vec<Vertex>> {
    let mut d = dist[to.index()];
    if d == UNREACHABLE {
        return None;
    }
    let mut path = Vec::with_capacity(d as usize + 1);
    let mut cur = to;
    path.push(cur);
    while d > 0 {
        cur = graph
            .neighbors(cur)
            .iter()
            .copied()
            .filter(|w| dist[w.index()] == d - 1)
            .min()
            .expect("BFS layers are contiguous");
        path.push(cur);
        d -= 1;
    }
    path.reverse();
    Some(path)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::grid::GridMap;
    use alloc::vec;

    fn row(n: usize) -> GridGraph {
        GridGraph::new(GridMap::open(n, 1).unwrap())
    }

    #[test]
    fn distances_along_a_row() {
        let g = row(5);
        let dm = bfs_distances(&g, Vertex(0), |_| false);
        assert_eq!(dm.as_slice(), &[0, 1, 2, 3, 4]);
    }

    #[test]
    fn blocked_vertex_cuts_the_row() {
        let g = row(5);
        let dm = bfs_distances(&g, Vertex(0), |v| v == Vertex(2));
        assert_eq!(dm.get(Vertex(1)), Some(1));
        assert_eq!(dm.get(Vertex(2)), None);
        assert_eq!(dm.get(Vertex(3)), None);
        assert_eq!(dm.get(Vertex(4)), None);
    }

    #[test]
    fn path_to_self_is_singleton() {
        let g = row(3);
        assert_eq!(shortest_path(&g, Vertex(1), Vertex(1)), Some(vec![Vertex(1)]));
    }

    #[test]
    fn unique_path_on_a_row() {
        let g = row(5);
        let p = shortest_path(&g, Vertex(0), Vertex(4)).unwrap();
        assert_eq!(p, (0..5).map(Vertex).collect::<Vec<_>>());
    }

    #[test]
    fn unreachable_target_has_no_path() {
        let g = GridGraph::new(GridMap::new(3, 1, vec![true, false, true]).unwrap());
        assert_eq!(shortest_path(&g, Vertex(0), Vertex(1)), None);
    }

    /// All minimum-hop paths, by exhaustive DFS.
    fn all_shortest(g: &GridGraph, from: Vertex, to: Vertex) -> Vec<Vec<Vertex>> {
        let d = bfs_distances(g, from, |_| false).get(to).unwrap() as usize;
        let mut out = Vec::new();
        let mut stack = vec![vec![from]];
        while let Some(p) = stack.pop() {
            let last = *p.last().unwrap();
            if p.len() == d + 1 {
                if last == to {
                    out.push(p);
                }
                continue;
            }
            for &w in g.neighbors(last) {
                if !p.contains(&w) {
                    let mut q = p.clone();
                    q.push(w);
                    stack.push(q);
                }
            }
        }
        out
    }

    #[test]
    fn corner_to_corner_on_open_3x3_uses_lowest_index_predecessors() {
        let g = GridGraph::new(GridMap::open(3, 3).unwrap());
        let candidates = all_shortest(&g, Vertex(0), Vertex(8));
        // 4 moves, C(4,2) = 6 monotone lattice paths.
        assert_eq!(candidates.len(), 6);
        let p = shortest_path(&g, Vertex(0), Vertex(8)).unwrap();
        assert_eq!(p.len(), 5);
        assert!(candidates.contains(&p));
        // Reversed lexicographic minimum: predecessor chain 8 <- 5 <- 2 <- 1 <- 0.
        assert_eq!(p, vec![Vertex(0), Vertex(1), Vertex(2), Vertex(5), Vertex(8)]);
    }
}

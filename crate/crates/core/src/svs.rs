//! Separating vertices: vertices whose removal increases the number of
//! connected components (articulation points).

use alloc::vec::Vec;

use crate::graph::{GridGraph, Vertex};

/// Per-vertex separating / non-separating classification of a graph.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SeparatingVertexSet {
    flags: Vec<bool>,
}

impl SeparatingVertexSet {
    pub fn from_flags(flags: Vec<bool>) -> Self {
        Self { flags }
    }

    #[inline]
    pub fn is_separating(&self, v: Vertex) -> bool {
        self.flags[v.index()]
    }

    pub fn flags(&self) -> &[bool] {
        &self.flags
    }

    pub fn len(&self) -> usize {
        self.flags.len()
    }

    pub fn is_empty(&self) -> bool {
        self.flags.is_empty()
    }

    /// Number of separating vertices.
    pub fn count(&self) -> usize {
        self.flags.iter().filter(|&&f| f).count()
    }

    pub fn iter(&self) -> impl Iterator<Item = Vertex> + '_ {
        self.flags
            .iter()
            .enumerate()
            .filter(|(_, &f)| f)
            .map(|(i, _)| Vertex::from_index(i))
    }
}

/// Linear-time classification with an iterative lowlink DFS.
pub fn compute_svs(graph: &GridGraph) -> SeparatingVertexSet {
    const UNSEEN: u32 = u32::MAX;
    let n = graph.num_vertices();
    let mut disc = alloc::vec![UNSEEN; n];
    let mut low = alloc::vec![0u32; n];
    let mut flags = alloc::vec![false; n];
    // (vertex, parent, next neighbor slot)
    let mut stack: Vec<(Vertex, Option<Vertex>, usize)> = Vec::new();
    let mut clock = 0u32;

    for root in graph.vertices() {
        if disc[root.index()] != UNSEEN {
            continue;
        }
        disc[root.index()] = clock;
        low[root.index()] = clock;
        clock += 1;
        let mut root_children = 0;
        stack.push((root, None, 0));

        while let Some(top) = stack.last_mut() {
            let (u, parent, slot) = *top;
            let nbrs = graph.neighbors(u);
            if slot < nbrs.len() {
                top.2 += 1;
                let w = nbrs[slot];
                if disc[w.index()] == UNSEEN {
                    disc[w.index()] = clock;
                    low[w.index()] = clock;
                    clock += 1;
                    if u == root {
                        root_children += 1;
                    }
                    stack.push((w, Some(u), 0));
                } else if Some(w) != parent {
                    low[u.index()] = low[u.index()].min(disc[w.index()]);
                }
            } else {
                stack.pop();
                if let Some(p) = parent {
                    low[p.index()] = low[p.index()].min(low[u.index()]);
                    if p != root && low[u.index()] >= disc[p.index()] {
                        flags[p.index()] = true;
                    }
                }
            }
        }
        if root_children > 1 {
            flags[root.index()] = true;
        }
    }
    SeparatingVertexSet { flags }
}

/// Direct check of the definition: remove each vertex in turn and compare
/// component counts. Quadratic; meant as a test oracle.
pub fn svs_oracle(graph: &GridGraph) -> SeparatingVertexSet {
    let n = graph.num_vertices();
    let base = count_components(graph, None);
    let flags = (0..n)
        .map(|i| count_components(graph, Some(Vertex::from_index(i))) > base)
        .collect();
    SeparatingVertexSet { flags }
}

fn count_components(graph: &GridGraph, removed: Option<Vertex>) -> usize {
    let n = graph.num_vertices();
    let mut seen = alloc::vec![false; n];
    if let Some(r) = removed {
        seen[r.index()] = true;
    }
    let mut queue = alloc::collections::VecDeque::new();
    let mut count = 0;
    for s in 0..n {
        if seen[s] {
            continue;
        }
        count += 1;
        seen[s] = true;
        queue.push_back(Vertex::from_index(s));
        while let Some(u) = queue.pop_front() {
            for &w in graph.neighbors(u) {
                if !seen[w.index()] {
                    seen[w.index()] = true;
                    queue.push_back(w);
                }
            }
        }
    }
    count
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::grid::GridMap;
    use alloc::vec;

    fn graph(w: usize, h: usize, cells: &str) -> GridGraph {
        GridGraph::new(GridMap::new(w, h, cells.bytes().map(|c| c == b'.').collect()).unwrap())
    }

    #[test]
    fn interior_of_a_row_is_separating() {
        let g = graph(5, 1, ".....");
        let svs = compute_svs(&g);
        assert_eq!(svs.iter().collect::<Vec<_>>(), vec![Vertex(1), Vertex(2), Vertex(3)]);
        assert_eq!(svs, svs_oracle(&g));
    }

    #[test]
    fn open_3x3_has_no_separating_vertex() {
        let g = graph(3, 3, ".........");
        assert_eq!(svs_oracle(&g).count(), 0);
        assert_eq!(compute_svs(&g).count(), 0);
    }

    #[test]
    fn single_vertex_and_single_edge_are_non_separating() {
        let g = graph(1, 1, ".");
        assert_eq!(svs_oracle(&g).count(), 0);
        assert_eq!(compute_svs(&g).count(), 0);
        let g = graph(2, 1, "..");
        assert_eq!(svs_oracle(&g).count(), 0);
        assert_eq!(compute_svs(&g).count(), 0);
    }

    #[test]
    fn plus_shape_center_is_separating() {
        let g = graph(3, 3, "@.@...@.@");
        let center = g.vertex_at(1, 1).unwrap();
        let oracle = svs_oracle(&g);
        assert_eq!(oracle.iter().collect::<Vec<_>>(), vec![center]);
        assert_eq!(compute_svs(&g), oracle);
    }

    #[test]
    fn isolated_vertices_are_non_separating() {
        let g = graph(5, 1, ".@.@.");
        assert_eq!(compute_svs(&g).count(), 0);
        assert_eq!(svs_oracle(&g).count(), 0);
    }

    #[test]
    fn multiple_components_are_handled_independently() {
        let g = graph(7, 1, "...@...");
        let expected = vec![Vertex(1), Vertex(4)];
        assert_eq!(compute_svs(&g).iter().collect::<Vec<_>>(), expected);
        assert_eq!(svs_oracle(&g).iter().collect::<Vec<_>>(), expected);
    }
}

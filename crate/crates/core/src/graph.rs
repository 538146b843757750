//! 4-connected grid graphs.

use alloc::vec::Vec;
use core::fmt;

use crate::grid::GridMap;

/// Index of a passable cell, numbered row-major over passable cells only.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
#[cfg_attr(feature = "serde", serde(transparent))]
pub struct Vertex(pub u32);

impl Vertex {
    #[inline]
    pub fn index(self) -> usize {
        self.0 as usize
    }

    #[inline]
    pub fn from_index(index: usize) -> Self {
        Vertex(index as u32)
    }
}

impl fmt::Display for Vertex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "v{}", self.0)
    }
}

const NO_VERTEX: u32 = u32::MAX;

/// Undirected graph over the passable cells of a [`GridMap`].
///
/// Neighbor lists are ordered up, right, down, left relative to the cell;
/// every search in the crate expands neighbors in that order.
#[derive(Debug, Clone)]
pub struct GridGraph {
    map: GridMap,
    cell_to_vertex: Vec<u32>,
    vertex_to_cell: Vec<u32>,
    offsets: Vec<u32>,
    adjacency: Vec<Vertex>,
}

impl GridGraph {
    pub fn new(map: GridMap) -> Self {
        let (w, h) = (map.width(), map.height());
        let mut cell_to_vertex = alloc::vec![NO_VERTEX; w * h];
        let mut vertex_to_cell = Vec::new();
        for (cell, &open) in map.cells().iter().enumerate() {
            if open {
                cell_to_vertex[cell] = vertex_to_cell.len() as u32;
                vertex_to_cell.push(cell as u32);
            }
        }

        let mut offsets = Vec::with_capacity(vertex_to_cell.len() + 1);
        let mut adjacency = Vec::with_capacity(vertex_to_cell.len() * 4);
        offsets.push(0);
        for &cell in &vertex_to_cell {
            let (r, c) = (cell as usize / w, cell as usize % w);
            let candidates = [
                (r > 0).then(|| (r - 1, c)),
                (c + 1 < w).then(|| (r, c + 1)),
                (r + 1 < h).then(|| (r + 1, c)),
                (c > 0).then(|| (r, c - 1)),
            ];
            for (nr, nc) in candidates.into_iter().flatten() {
                let id = cell_to_vertex[nr * w + nc];
                if id != NO_VERTEX {
                    adjacency.push(Vertex(id));
                }
            }
            offsets.push(adjacency.len() as u32);
        }

        Self {
            map,
            cell_to_vertex,
            vertex_to_cell,
            offsets,
            adjacency,
        }
    }

    pub fn map(&self) -> &GridMap {
        &self.map
    }

    pub fn num_vertices(&self) -> usize {
        self.vertex_to_cell.len()
    }

    pub fn num_edges(&self) -> usize {
        self.adjacency.len() / 2
    }

    pub fn vertices(&self) -> impl Iterator<Item = Vertex> + '_ {
        (0..self.num_vertices()).map(Vertex::from_index)
    }

    #[inline]
    pub fn neighbors(&self, v: Vertex) -> &[Vertex] {
        let i = v.index();
        &self.adjacency[self.offsets[i] as usize..self.offsets[i + 1] as usize]
    }

    pub fn degree(&self, v: Vertex) -> usize {
        self.neighbors(v).len()
    }

    pub fn are_adjacent(&self, a: Vertex, b: Vertex) -> bool {
        self.neighbors(a).contains(&b)
    }

    /// Vertex at `(row, col)`, or `None` for blocked / out-of-range cells.
    pub fn vertex_at(&self, row: usize, col: usize) -> Option<Vertex> {
        if row >= self.map.height() || col >= self.map.width() {
            return None;
        }
        let id = self.cell_to_vertex[row * self.map.width() + col];
        (id != NO_VERTEX).then_some(Vertex(id))
    }

    /// `(row, col)` of a vertex.
    pub fn coords(&self, v: Vertex) -> (usize, usize) {
        let cell = self.vertex_to_cell[v.index()] as usize;
        (cell / self.map.width(), cell % self.map.width())
    }

    pub fn contains(&self, v: Vertex) -> bool {
        v.index() < self.num_vertices()
    }

    /// Component label per vertex plus the number of components.
    pub fn components(&self) -> (Vec<u32>, usize) {
        let n = self.num_vertices();
        let mut label = alloc::vec![u32::MAX; n];
        let mut count = 0;
        let mut stack = Vec::new();
        for s in 0..n {
            if label[s] != u32::MAX {
                continue;
            }
            label[s] = count as u32;
            stack.push(Vertex::from_index(s));
            while let Some(u) = stack.pop() {
                for &w in self.neighbors(u) {
                    if label[w.index()] == u32::MAX {
                        label[w.index()] = count as u32;
                        stack.push(w);
                    }
                }
            }
            count += 1;
        }
        (label, count)
    }
}

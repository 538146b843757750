//! Generators for stand-ins of the six 32×32 benchmark maps.
//!
//! Each map is a pure function of its name; the committed files under
//! `maps/` are the output of [`generate`] and a test keeps them in sync.

use cgamapf_core::{GridGraph, GridMap};
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub const BENCHMARK_MAPS: [&str; 6] = [
    "empty-32-32",
    "random-32-32-10",
    "random-32-32-20",
    "room-32-32-4",
    "maze-32-32-2",
    "maze-32-32-4",
];

const SIZE: usize = 32;

/// Builds the named map, or `None` for an unknown name.
pub fn generate(name: &str) -> Option<GridMap> {
    // One fixed seed per map, so regenerating never drifts.
    let seed = 0x5eed_0000 + BENCHMARK_MAPS.iter().position(|&m| m == name)? as u64;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    Some(match name {
        "empty-32-32" => GridMap::open(SIZE, SIZE).expect("non-empty"),
        "random-32-32-10" => random_obstacles(&mut rng, 102),
        "random-32-32-20" => random_obstacles(&mut rng, 205),
        "room-32-32-4" => rooms(&mut rng),
        "maze-32-32-2" => maze(&mut rng, 2, 11, 0),
        "maze-32-32-4" => maze(&mut rng, 4, 6, 1),
        _ => unreachable!("name is in BENCHMARK_MAPS"),
    })
}

/// Exactly `obstacles` blocked cells, redrawn until the free cells form one
/// connected component.
fn random_obstacles(rng: &mut ChaCha8Rng, obstacles: usize) -> GridMap {
    loop {
        let mut cells = vec![true; SIZE * SIZE];
        for i in rand::seq::index::sample(rng, SIZE * SIZE, obstacles) {
            cells[i] = false;
        }
        let map = GridMap::new(SIZE, SIZE, cells).expect("dimensions match");
        if GridGraph::new(map.clone()).components().1 == 1 {
            return map;
        }
    }
}

/// 8×8 rooms with 3×3 interiors separated by one-cell walls (the last row
/// and column are wall too). A random spanning tree of doors keeps every
/// room reachable; most remaining walls get a door as well.
fn rooms(rng: &mut ChaCha8Rng) -> GridMap {
    const ROOMS: usize = 8;
    const PERIOD: usize = 4;
    let mut map = GridMap::new(SIZE, SIZE, vec![false; SIZE * SIZE]).expect("dimensions match");
    for r in 0..SIZE {
        for c in 0..SIZE {
            if r % PERIOD != PERIOD - 1 && c % PERIOD != PERIOD - 1 {
                map.set_passable(r, c, true);
            }
        }
    }
    let tree = spanning_tree(rng, ROOMS, ROOMS);
    let mut walls = Vec::new();
    for r in 0..ROOMS {
        for c in 0..ROOMS {
            if c + 1 < ROOMS {
                walls.push(((r, c), (r, c + 1)));
            }
            if r + 1 < ROOMS {
                walls.push(((r, c), (r + 1, c)));
            }
        }
    }
    for (a, b) in walls {
        let keep = tree.contains(&(a, b)) || rng.random_bool(0.9);
        if !keep {
            continue;
        }
        let offset = rng.random_range(0..PERIOD - 1);
        if a.0 == b.0 {
            map.set_passable(a.0 * PERIOD + offset, a.1 * PERIOD + PERIOD - 1, true);
        } else {
            map.set_passable(a.0 * PERIOD + PERIOD - 1, a.1 * PERIOD + offset, true);
        }
    }
    map
}

/// Perfect maze on a `cells × cells` lattice of `width`-wide square cells
/// joined by `width`-wide gaps in one-cell walls, placed at `margin`.
fn maze(rng: &mut ChaCha8Rng, width: usize, cells: usize, margin: usize) -> GridMap {
    let period = width + 1;
    assert!(margin + cells * period - 1 <= SIZE);
    let mut map = GridMap::new(SIZE, SIZE, vec![false; SIZE * SIZE]).expect("dimensions match");
    let open = |map: &mut GridMap, r0: usize, c0: usize, h: usize, w: usize| {
        for r in r0..r0 + h {
            for c in c0..c0 + w {
                map.set_passable(margin + r, margin + c, true);
            }
        }
    };
    for r in 0..cells {
        for c in 0..cells {
            open(&mut map, r * period, c * period, width, width);
        }
    }
    for ((r, c), (r2, c2)) in spanning_tree(rng, cells, cells) {
        if r == r2 {
            open(&mut map, r * period, c.min(c2) * period + width, width, 1);
        } else {
            open(&mut map, r.min(r2) * period + width, c * period, 1, width);
        }
    }
    map
}

type Cell = (usize, usize);

/// Randomised depth-first spanning tree of a `rows × cols` lattice; edges
/// are returned with the smaller cell first.
fn spanning_tree(rng: &mut ChaCha8Rng, rows: usize, cols: usize) -> Vec<(Cell, Cell)> {
    let mut seen = vec![false; rows * cols];
    let mut edges = Vec::with_capacity(rows * cols - 1);
    let mut stack = vec![(0usize, 0usize)];
    seen[0] = true;
    while let Some(&(r, c)) = stack.last() {
        let mut next: Vec<Cell> = [(-1isize, 0isize), (0, 1), (1, 0), (0, -1)]
            .iter()
            .filter_map(|&(dr, dc)| {
                let (nr, nc) = (r.checked_add_signed(dr)?, c.checked_add_signed(dc)?);
                (nr < rows && nc < cols && !seen[nr * cols + nc]).then_some((nr, nc))
            })
            .collect();
        if next.is_empty() {
            stack.pop();
            continue;
        }
        next.shuffle(rng);
        let n = next[0];
        seen[n.0 * cols + n.1] = true;
        edges.push(((r, c).min(n), (r, c).max(n)));
        stack.push(n);
    }
    edges
}

#[cfg(test)]
mod tests {
    use super::*;
    use cgamapf_core::svs::compute_svs;

    #[test]
    fn every_benchmark_map_is_connected() {
        for name in BENCHMARK_MAPS {
            let map = generate(name).unwrap();
            assert_eq!((map.width(), map.height()), (32, 32));
            assert_eq!(GridGraph::new(map).components().1, 1, "{name}");
        }
    }

    #[test]
    fn passable_counts() {
        let count = |n| generate(n).unwrap().passable_count();
        assert_eq!(count("empty-32-32"), 1024);
        assert_eq!(count("random-32-32-10"), 922);
        assert_eq!(count("random-32-32-20"), 819);
        // 121 cells of 2x2 plus 120 two-cell gaps.
        assert_eq!(count("maze-32-32-2"), 724);
        // 36 cells of 4x4 plus 35 four-cell gaps.
        assert_eq!(count("maze-32-32-4"), 716);
    }

    #[test]
    fn generation_is_deterministic() {
        for name in BENCHMARK_MAPS {
            assert_eq!(generate(name), generate(name));
        }
    }

    #[test]
    fn open_map_has_no_separating_vertices() {
        let g = GridGraph::new(generate("empty-32-32").unwrap());
        assert_eq!(compute_svs(&g).count(), 0);
    }
}

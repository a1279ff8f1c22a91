#![allow(dead_code)]

//! Shared helpers for the integration tests: an independent breadth-first
//! path-length oracle (built on literal neighbor tables, not the library's
//! direction types), a path validity checker, and a tiny deterministic
//! pseudo-random generator for building maps.

use std::collections::VecDeque;

use cellnav_core::{CellCoord, CellLookup, CellState, Grid, Tessellation};

/// Neighbor offsets straight from the lattice definitions: four compass
/// steps on the square grid; on the hex grid the six ring cells of an
/// odd-row-shifted layout, which differ between even and odd rows.
pub fn neighbor_cells(c: CellCoord, tessellation: Tessellation) -> Vec<CellCoord> {
    let offsets: &[(i32, i32)] = match tessellation {
        Tessellation::Square => &[(0, 1), (1, 0), (0, -1), (-1, 0)],
        Tessellation::Hex => {
            if c.y & 1 == 0 {
                &[(0, 1), (1, 0), (0, -1), (-1, -1), (-1, 0), (-1, 1)]
            } else {
                &[(1, 1), (1, 0), (1, -1), (0, -1), (-1, 0), (0, 1)]
            }
        }
    };
    offsets
        .iter()
        .map(|&(dx, dy)| CellCoord::new(c.x + dx, c.y + dy))
        .collect()
}

/// Shortest path length from `from` to `to` over non-obstacle cells, or
/// `None` when unreachable.
pub fn bfs_distance(grid: &Grid, from: CellCoord, to: CellCoord) -> Option<u32> {
    let (w, h) = grid.dims();
    let index = |c: CellCoord| (c.y * w + c.x) as usize;
    let mut dist: Vec<Option<u32>> = vec![None; (w * h) as usize];
    let mut queue = VecDeque::new();
    dist[index(from)] = Some(0);
    queue.push_back(from);
    while let Some(c) = queue.pop_front() {
        let d = dist[index(c)].unwrap();
        if c == to {
            return Some(d);
        }
        for n in neighbor_cells(c, grid.tessellation()) {
            if n.x < 0 || n.x >= w || n.y < 0 || n.y >= h {
                continue;
            }
            if grid.state(n) == CellState::Obstacle {
                continue;
            }
            if dist[index(n)].is_none() {
                dist[index(n)] = Some(d + 1);
                queue.push_back(n);
            }
        }
    }
    None
}

/// Panic unless consecutive path cells are lattice neighbors and none of
/// them holds an obstacle.
pub fn assert_path_valid(grid: &Grid, path: &[CellCoord]) {
    for (i, pair) in path.windows(2).enumerate() {
        assert!(
            neighbor_cells(pair[0], grid.tessellation()).contains(&pair[1]),
            "path cells {} and {} ({} -> {}) are not adjacent",
            i,
            i + 1,
            pair[0],
            pair[1]
        );
    }
    for &c in path {
        assert_ne!(grid.state(c), CellState::Obstacle, "path crosses {}", c);
    }
}

/// Small deterministic generator (an xorshift variant) so map fuzzing stays
/// reproducible without extra dependencies.
pub struct TestRng(u64);

impl TestRng {
    pub fn new(seed: u64) -> TestRng {
        TestRng(seed.wrapping_mul(2685821657736338717).wrapping_add(1442695040888963407))
    }

    pub fn next_u64(&mut self) -> u64 {
        let mut x = self.0;
        x ^= x << 13;
        x ^= x >> 7;
        x ^= x << 17;
        self.0 = x;
        x
    }

    /// Uniform value in `0..bound`.
    pub fn below(&mut self, bound: u64) -> u64 {
        self.next_u64() % bound
    }

    pub fn coord(&mut self, width: i32, height: i32) -> CellCoord {
        CellCoord::new(
            self.below(width as u64) as i32,
            self.below(height as u64) as i32,
        )
    }
}

/// Scatter roughly `count` obstacles over the grid, never on the listed
/// protected cells.
pub fn random_obstacles(
    rng: &mut TestRng,
    width: i32,
    height: i32,
    count: usize,
    protected: &[CellCoord],
) -> Vec<CellCoord> {
    let mut out = Vec::new();
    for _ in 0..count {
        let c = rng.coord(width, height);
        if !protected.contains(&c) && !out.contains(&c) {
            out.push(c);
        }
    }
    out
}

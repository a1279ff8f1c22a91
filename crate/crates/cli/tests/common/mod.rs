#![allow(dead_code)]

//! Shared oracles for the CLI integration suites: an independent
//! breadth-first-search distance, literal neighbor tables, and a tiny
//! deterministic RNG, all written without consulting the engine's own
//! planning code.

use cellnav_core::{CellCoord, CellLookup, CellState, Grid, Tessellation};
use std::collections::VecDeque;

/// Literal neighbor offsets: four-square, or the two hexagonal offset rows.
pub fn neighbor_cells(cell: CellCoord, tessellation: Tessellation) -> Vec<CellCoord> {
    let offsets: &[(i32, i32)] = match tessellation {
        Tessellation::Square => &[(0, 1), (1, 0), (0, -1), (-1, 0)],
        Tessellation::Hex => {
            if cell.y & 1 == 0 {
                &[(0, 1), (1, 0), (0, -1), (-1, -1), (-1, 0), (-1, 1)]
            } else {
                &[(1, 1), (1, 0), (1, -1), (0, -1), (-1, 0), (0, 1)]
            }
        }
    };
    offsets
        .iter()
        .map(|&(dx, dy)| CellCoord::new(cell.x + dx, cell.y + dy))
        .collect()
}

/// Fewest moves from `from` to `to` over non-obstacle cells, or `None` when
/// disconnected. Robots' own active cells count as walkable.
pub fn bfs_distance(grid: &Grid, from: CellCoord, to: CellCoord) -> Option<u32> {
    let (w, h) = grid.dims();
    let index = |c: CellCoord| (c.y * w + c.x) as usize;
    let walkable = |c: CellCoord| {
        c.x >= 0 && c.y >= 0 && c.x < w && c.y < h && grid.state(c) != CellState::Obstacle
    };
    if !walkable(from) || !walkable(to) {
        return None;
    }
    let mut dist = vec![u32::MAX; (w * h) as usize];
    let mut queue = VecDeque::new();
    dist[index(from)] = 0;
    queue.push_back(from);
    while let Some(cell) = queue.pop_front() {
        let d = dist[index(cell)];
        if cell == to {
            return Some(d);
        }
        for next in neighbor_cells(cell, grid.tessellation()) {
            if walkable(next) && dist[index(next)] == u32::MAX {
                dist[index(next)] = d + 1;
                queue.push_back(next);
            }
        }
    }
    None
}

/// xorshift with a splitmix-style seed scramble; deterministic and
/// independent of the engine's RNG choices.
pub struct TestRng(u64);

impl TestRng {
    pub fn new(seed: u64) -> TestRng {
        let mut z = seed.wrapping_add(0x9e3779b97f4a7c15);
        z = (z ^ (z >> 30)).wrapping_mul(0xbf58476d1ce4e5b9);
        z = (z ^ (z >> 27)).wrapping_mul(0x94d049bb133111eb);
        TestRng((z ^ (z >> 31)) | 1)
    }

    pub fn next_u64(&mut self) -> u64 {
        let mut x = self.0;
        x ^= x << 13;
        x ^= x >> 7;
        x ^= x << 17;
        self.0 = x;
        x
    }

    pub fn below(&mut self, bound: u64) -> u64 {
        self.next_u64() % bound
    }

    pub fn coord(&mut self, w: i32, h: i32) -> CellCoord {
        CellCoord::new(self.below(w as u64) as i32, self.below(h as u64) as i32)
    }
}

/// Compose a map file string from dimensions, obstacles, and robot marks.
/// `robots` is (start, target) per robot; one robot uses S/F, more use
/// digit/letter pairs.
pub fn build_map_text(
    w: i32,
    h: i32,
    obstacles: &[CellCoord],
    robots: &[(CellCoord, CellCoord)],
) -> String {
    let mut canvas = vec![vec!['.'; w as usize]; h as usize];
    for c in obstacles {
        canvas[c.y as usize][c.x as usize] = '#';
    }
    for (i, (start, target)) in robots.iter().enumerate() {
        let (s, f) = if robots.len() == 1 {
            ('S', 'F')
        } else {
            ((b'0' + i as u8) as char, (b'a' + i as u8) as char)
        };
        canvas[start.y as usize][start.x as usize] = s;
        canvas[target.y as usize][target.x as usize] = f;
    }
    let mut out = String::new();
    for row in canvas.iter().rev() {
        out.extend(row.iter());
        out.push('\n');
    }
    out
}

/// Scatter `count` obstacles on a w-by-h field, avoiding protected cells.
/// Returns the obstacle list (duplicates skipped, so fewer may land).
pub fn random_obstacles(
    rng: &mut TestRng,
    w: i32,
    h: i32,
    count: usize,
    protected: &[CellCoord],
) -> Vec<CellCoord> {
    let mut cells = Vec::new();
    for _ in 0..count {
        let c = rng.coord(w, h);
        if !protected.contains(&c) && !cells.contains(&c) {
            cells.push(c);
        }
    }
    cells
}

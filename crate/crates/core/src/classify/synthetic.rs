//! Analytically constructed bitmaps with known domain types, and a brute-force
//! cover search used to cross-check the deck subgroup.

use std::collections::VecDeque;

use super::components::FOUR;
use super::deck::{normalize, Subgroup};
use super::grid::OccupancyGrid;
use crate::geom::{wrap01, Vec2};

/// Marked everywhere except a disk of `radius` (torus units) around `center`.
pub fn disk_hole(r: usize, center: Vec2, radius: f64) -> OccupancyGrid {
    let g = OccupancyGrid::new(r);
    OccupancyGrid::from_fn(r, |i, j| crate::geom::torus_dist(g.cell_center(g.index(i, j)), center) > radius)
}

/// Marked only on a disk: its complement is doubly essential.
pub fn disk_mark(r: usize, center: Vec2, radius: f64) -> OccupancyGrid {
    let g = OccupancyGrid::new(r);
    OccupancyGrid::from_fn(r, |i, j| crate::geom::torus_dist(g.cell_center(g.index(i, j)), center) <= radius)
}

/// Half-band of the closed geodesic with direction `(p, q)`: marked where
/// `frac(q·x - p·y) < 1/2`, so the unmarked half is an annulus with that core.
pub fn strip(r: usize, p: i64, q: i64) -> OccupancyGrid {
    let g = OccupancyGrid::new(r);
    OccupancyGrid::from_fn(r, |i, j| {
        let z = g.cell_center(g.index(i, j));
        wrap01(q as f64 * z.x - p as f64 * z.y) < 0.5
    })
}

/// Carpet of square holes to `depth` levels, holes scaled by `shrink` inside their
/// ninth so that closures stay apart when `shrink < 1`.
pub fn carpet(r: usize, depth: u32, shrink: f64) -> OccupancyGrid {
    let g = OccupancyGrid::new(r);
    OccupancyGrid::from_fn(r, |i, j| {
        let z = g.cell_center(g.index(i, j));
        let (mut x, mut y) = (z.x, z.y);
        for _ in 0..depth {
            let (cx, cy) = ((x * 3.0).floor(), (y * 3.0).floor());
            let (fx, fy) = (x * 3.0 - cx, y * 3.0 - cy);
            if cx == 1.0 && cy == 1.0 {
                let h = 0.5 * shrink;
                if (fx - 0.5).abs() < h && (fy - 0.5).abs() < h {
                    return false;
                }
                return true;
            }
            x = fx;
            y = fy;
        }
        true
    })
}

/// Offsets `(p, q)` with `|p|, |q| ≤ copies/2 - 1` for which the base cell reaches its
/// translate inside an explicit `copies × copies` tiling, and the subgroup they span.
pub fn brute_force_subgroup(grid: &OccupancyGrid, base: usize, copies: usize) -> Subgroup {
    let r = grid.resolution();
    let n = r * copies;
    let (bi, bj) = grid.coords(base);
    let mid = copies / 2;
    let start = (bi + mid * r, bj + mid * r);
    let mut seen = vec![false; n * n];
    seen[start.1 * n + start.0] = true;
    let mut queue = VecDeque::from([start]);
    while let Some((x, y)) = queue.pop_front() {
        for (dx, dy) in FOUR {
            let (nx, ny) = (x as i64 + dx, y as i64 + dy);
            if nx < 0 || ny < 0 || nx >= n as i64 || ny >= n as i64 {
                continue;
            }
            let (nx, ny) = (nx as usize, ny as usize);
            if !seen[ny * n + nx] && !grid.is_marked_at(nx % r, ny % r) {
                seen[ny * n + nx] = true;
                queue.push_back((nx, ny));
            }
        }
    }
    let reach = mid as i64 - 1;
    let mut found = Vec::new();
    for p in -reach..=reach {
        for q in -reach..=reach {
            let (x, y) = ((start.0 as i64 + p * r as i64) as usize, (start.1 as i64 + q * r as i64) as usize);
            if (p, q) != (0, 0) && seen[y * n + x] {
                found.push((p, q));
            }
        }
    }
    if found.is_empty() {
        return Subgroup::Zero;
    }
    let (p0, q0) = found[0];
    if found.iter().all(|&(p, q)| p * q0 - q * p0 == 0) {
        let g = found.iter().fold(0, |g, &(p, q)| super::deck::gcd(g, super::deck::gcd(p.abs(), q.abs())));
        let (p, q) = normalize(p0, q0);
        let _ = g;
        Subgroup::Cyclic(p, q)
    } else {
        Subgroup::Full
    }
}

//! Measurements layered on occupancy grids: pushed-forward occupancy for blown-up maps,
//! windowed disk census, 1-D factor occupancy and accumulation distances.

use serde::Serialize;

use crate::blowup::{BlowupState, DiskRecord, Preimage};
use crate::circle::CircleMap;
use crate::classify::{classify_grid, label_map, DomainType, OccupancyGrid, Provenance};
use crate::geom::{torus_delta, Vec2};

/// Occupancy of the blown-up orbit: the base orbit pushed through `ψ_N`, which is the
/// orbit of the blown-up map through the image of `seed`.
pub fn blown_occupancy(state: &BlowupState, seed: Vec2, steps: u64, resolution: usize, dilate: usize) -> OccupancyGrid {
    let f = state.base();
    let m = state.stage();
    let mut g = OccupancyGrid::new(resolution);
    let mark = |g: &mut OccupancyGrid, z: Vec2| {
        if let Some(p) = state.psi(z, m) {
            g.mark_point(p.wrap());
        }
    };
    let forward = steps - steps / 2;
    let mut z = seed.wrap();
    mark(&mut g, z);
    for _ in 1..forward {
        z = (z + f.displacement(z)).wrap();
        mark(&mut g, z);
    }
    let mut w = seed.wrap();
    for _ in 0..steps / 2 {
        w = f.eval_inv(w).wrap();
        mark(&mut g, w);
    }
    g.provenance = Provenance {
        map_label: format!("blowup(N={m}, {})", f.label()),
        orbit_length: steps,
        seed,
        dilation: 0,
    };
    g.dilate(dilate);
    g
}

/// Census of one blown-up disk inside a window that resolves it.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct DiskCensus {
    pub index: i64,
    pub stage: usize,
    pub diameter: f64,
    /// Side length of the square window in torus units.
    pub window: f64,
    pub zoom_resolution: usize,
    /// Window cells of the complement component holding the disk marker.
    pub hole_cells: usize,
    /// The hole reaches the window border, so it is not certified bounded.
    pub touches_border: bool,
    pub domain_type: Option<DomainType>,
}

impl DiskCensus {
    /// Hole resolved, bounded inside the window and classified Trivial.
    pub fn is_trivial_hole(&self) -> bool {
        self.hole_cells > 0 && !self.touches_border && self.domain_type == Some(DomainType::Trivial)
    }
}

/// Subsamples per cell side in the census window.
pub const CENSUS_SUBSAMPLES: usize = 4;

/// Rasterizes the minimal set of the blown-up map in a square window around disk `k`.
///
/// A window cell is marked when one of its subsample points has a regular preimage
/// under `φ_N` lying in the base minimal set (`member`). The window side is four disk
/// half-diameters, so the disk and a collar around it are resolved.
pub fn zoom_census(state: &BlowupState, disk: &DiskRecord, member: &dyn Fn(Vec2) -> bool, zoom: usize) -> DiskCensus {
    let center = disk.bbox.center();
    let half = 2.0 * disk.bbox.half_extent().max_norm().max(1e-12);
    let side = 2.0 * half;
    let lo = center - Vec2::new(half, half);
    let m = state.stage();
    let cell = side / zoom as f64;
    let s = CENSUS_SUBSAMPLES;
    let mut grid = OccupancyGrid::from_fn(zoom, |i, j| {
        (0..s).any(|a| {
            (0..s).any(|b| {
                let p = lo + Vec2::new(
                    (i as f64 + (a as f64 + 0.5) / s as f64) * cell,
                    (j as f64 + (b as f64 + 0.5) / s as f64) * cell,
                );
                matches!(state.phi(p.wrap(), m), Preimage::Regular(q) if member(q.wrap()))
            })
        })
    });
    grid.provenance.map_label = format!("census(disk {})", disk.index);
    let (comps, report) = classify_grid(&grid, 8);
    let labels = label_map(&grid, &comps);
    let d = torus_delta(lo, disk.marker);
    let (mi, mj) = ((d.x / cell) as usize, (d.y / cell) as usize);
    let label = labels[grid.index(mi.min(zoom - 1), mj.min(zoom - 1))];
    let (hole_cells, touches_border, domain_type) = if label == usize::MAX {
        (0, false, None)
    } else {
        let c = &comps[label];
        let border = c.cells.iter().any(|&idx| {
            let (i, j) = grid.coords(idx);
            i == 0 || j == 0 || i == zoom - 1 || j == zoom - 1
        });
        (c.size(), border, Some(report.components[label].domain_type))
    };
    DiskCensus {
        index: disk.index,
        stage: disk.stage,
        diameter: disk.diameter(),
        window: side,
        zoom_resolution: zoom,
        hole_cells,
        touches_border,
        domain_type,
    }
}

/// Bins of `[0,1)` visited by a circle orbit split between forward and backward halves.
pub fn circle_occupancy(f: &dyn CircleMap, seed: f64, steps: u64, resolution: usize) -> Vec<bool> {
    let mut bins = vec![false; resolution];
    let r = resolution as f64;
    let bin = |x: f64| ((x.rem_euclid(1.0) * r) as usize).min(resolution - 1);
    let forward = steps - steps / 2;
    let mut x = seed;
    bins[bin(x)] = true;
    for _ in 1..forward {
        x = (x + f.displacement(x)).rem_euclid(1.0);
        bins[bin(x)] = true;
    }
    let mut w = seed;
    for _ in 0..steps / 2 {
        w = f.eval_inv(w).rem_euclid(1.0);
        bins[bin(w)] = true;
    }
    bins
}

/// `bins` dilated by `radius` bins on each side, with wraparound.
pub fn widen(bins: &[bool], radius: usize) -> Vec<bool> {
    let n = bins.len() as i64;
    let rad = radius as i64;
    (0..n).map(|i| (-rad..=rad).any(|d| bins[(i + d).rem_euclid(n) as usize])).collect()
}

pub fn fraction(bins: &[bool]) -> f64 {
    bins.iter().filter(|&&m| m).count() as f64 / bins.len() as f64
}

/// Distances, in cells, from sample points to the nearest marked cell (searched up to
/// `reach` cells away; farther points report `reach + 1`).
pub fn distances_to_marked(grid: &OccupancyGrid, points: &[Vec2], reach: i64) -> Vec<f64> {
    let r = grid.resolution() as f64;
    points
        .iter()
        .map(|&p| {
            let home = grid.cell_of(p);
            let mut best = f64::INFINITY;
            for dj in -reach..=reach {
                for di in -reach..=reach {
                    let (c, _) = grid.step(home, di, dj);
                    if grid.is_marked(c) {
                        // distance to the closed cell square
                        let (i, j) = grid.coords(c);
                        let lo = Vec2::new(i as f64 / r, j as f64 / r);
                        let d = torus_delta(lo + Vec2::new(0.5 / r, 0.5 / r), p);
                        let gx = (d.x.abs() - 0.5 / r).max(0.0);
                        let gy = (d.y.abs() - 0.5 / r).max(0.0);
                        best = best.min((gx * gx + gy * gy).sqrt() * r);
                    }
                }
            }
            if best.is_finite() {
                best
            } else {
                (reach + 1) as f64
            }
        })
        .collect()
}

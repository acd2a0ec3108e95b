//! Membership in the basin of repulsion of the repeller.

use serde::Serialize;

use super::map::DaMap;
use crate::classify::OccupancyGrid;
use crate::error::{Error, Result};
use crate::geom::{torus_dist, Vec2};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum BasinVerdict {
    /// The backward orbit entered the ball after this many steps.
    InBasin(usize),
    NotWithinBudget,
}

impl BasinVerdict {
    pub fn is_in(&self) -> bool {
        matches!(self, BasinVerdict::InBasin(_))
    }
}

/// Iterates `g⁻¹` from `z` for up to `budget` steps, watching for the ball around `z₀`.
pub fn basin_membership(g: &DaMap, z: Vec2, budget: usize, ball: f64) -> Result<BasinVerdict> {
    if !(ball > 0.0 && ball < g.scale) {
        return Err(Error::InvalidParameter(format!("ball {ball} must lie in (0, {}) ", g.scale)));
    }
    let z0 = g.repeller();
    let mut p = z.wrap();
    for k in 0..=budget {
        if torus_dist(p, z0) < ball {
            return Ok(BasinVerdict::InBasin(k));
        }
        p = g.eval_inv(p).wrap();
    }
    Ok(BasinVerdict::NotWithinBudget)
}

/// Default ball: half the saddle distance, in the plane.
pub fn default_ball(g: &DaMap) -> f64 {
    0.5 * g.r0 * g.scale
}

/// Marks cells whose center tests `InBasin`.
pub fn basin_grid(g: &DaMap, resolution: usize, budget: usize, ball: f64) -> Result<OccupancyGrid> {
    let mut grid = OccupancyGrid::new(resolution);
    for idx in 0..grid.len() {
        if basin_membership(g, grid.cell_center(idx), budget, ball)?.is_in() {
            grid.set(idx, true);
        }
    }
    Ok(grid)
}

//! The invariant unstable line field as a slope section over a torus mesh.

use rayon::prelude::*;
use serde::Serialize;

use super::map::DaMap;
use crate::error::{Error, Result};
use crate::geom::{wrap01, Vec2};

/// Slopes `S(z)` at mesh nodes `(i/R, j/R)`: `E^u(z) = span(e₁ + S(z)·e₂)`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SectionGrid {
    pub resolution: usize,
    /// Row-major, `values[j·R + i]` at `(i/R, j/R)`.
    pub values: Vec<f64>,
    /// Sup-difference of each sweep.
    pub history: Vec<f64>,
    /// Ratios of successive sup-differences above the roundoff floor.
    pub ratios: Vec<f64>,
}

/// Ratios are recorded only while the previous difference exceeds this.
const RATIO_FLOOR: f64 = 1e-13;

/// Allowance on the contraction ratio for interpolation error.
pub const CONTRACTION_SLACK: f64 = 0.05;

impl SectionGrid {
    /// Periodic bilinear interpolation.
    pub fn value(&self, z: Vec2) -> f64 {
        let r = self.resolution;
        let fx = wrap01(z.x) * r as f64;
        let fy = wrap01(z.y) * r as f64;
        let (i0, j0) = (fx.floor() as usize % r, fy.floor() as usize % r);
        let (tx, ty) = (fx - fx.floor(), fy - fy.floor());
        let (i1, j1) = ((i0 + 1) % r, (j0 + 1) % r);
        let v = |i: usize, j: usize| self.values[j * r + i];
        (1.0 - ty) * ((1.0 - tx) * v(i0, j0) + tx * v(i1, j0)) + ty * ((1.0 - tx) * v(i0, j1) + tx * v(i1, j1))
    }

    pub fn sup(&self) -> f64 {
        self.values.iter().fold(0.0f64, |m, v| m.max(v.abs()))
    }

    pub fn max_ratio(&self) -> f64 {
        self.ratios.iter().copied().fold(0.0, f64::max)
    }

    /// Grayscale image with `±scale` mapped to 0 and 255, top row first.
    pub fn to_pgm(&self, scale: f64) -> Vec<u8> {
        let r = self.resolution;
        let mut gray = Vec::with_capacity(r * r);
        for row in 0..r {
            let j = r - 1 - row;
            gray.extend((0..r).map(|i| {
                let s = (self.values[j * r + i] / scale).clamp(-1.0, 1.0);
                (127.5 + 127.5 * s).round() as u8
            }));
        }
        crate::io::encode_pgm(r, r, &gray)
    }
}

/// `2δ/(λ_u − ν)` with `ν = v`.
pub fn cone_radius(g: &DaMap) -> f64 {
    match &g.bumps {
        Some(b) => 2.0 * b.spec.delta / (g.lambda_u - b.spec.v),
        None => 0.0,
    }
}

/// Contraction bound `ν/λ_u` of the graph transform.
pub fn contraction_bound(g: &DaMap) -> f64 {
    match &g.bumps {
        Some(b) => b.spec.v / g.lambda_u,
        None => g.lambda_s / g.lambda_u,
    }
}

/// Iterates `S ↦ (c̃ + Ñ·S)/λ_u ∘ g⁻¹` from `S ≡ 0` until the sup-difference is below
/// `tol` or `iterations` sweeps have run.
pub fn invariant_section(g: &DaMap, resolution: usize, iterations: usize, tol: f64) -> Result<SectionGrid> {
    if resolution < 2 {
        return Err(Error::InvalidParameter(format!("mesh resolution {resolution} too small")));
    }
    let r = resolution;
    let h = 1.0 / r as f64;
    // pullback points and derivative entries are fixed across sweeps
    let pulled: Vec<(Vec2, f64, f64)> = (0..r * r)
        .into_par_iter()
        .map(|k| {
            let z = Vec2::new((k % r) as f64 * h, (k / r) as f64 * h);
            let w = g.eval_inv(z);
            let d = g.derivative(w);
            (w.wrap(), d.c, d.n)
        })
        .collect();
    let bound = contraction_bound(g) + CONTRACTION_SLACK;
    let mut grid = SectionGrid { resolution: r, values: vec![0.0; r * r], history: vec![], ratios: vec![] };
    let mut violations = 0;
    for _ in 0..iterations {
        let next: Vec<f64> =
            pulled.par_iter().map(|&(w, c, n)| (c + n * grid.value(w)) / g.lambda_u).collect();
        let diff = next.iter().zip(&grid.values).fold(0.0f64, |m, (a, b)| m.max((a - b).abs()));
        grid.values = next;
        if let Some(&prev) = grid.history.last() {
            if prev > RATIO_FLOOR {
                let ratio = diff / prev;
                grid.ratios.push(ratio);
                if ratio > bound {
                    violations += 1;
                    if violations >= 3 {
                        return Err(Error::NoContraction(format!(
                            "sup-difference ratio {ratio:.4} exceeds {bound:.4} for 3 sweeps at mesh {r}; refine the mesh"
                        )));
                    }
                } else {
                    violations = 0;
                }
            }
        }
        grid.history.push(diff);
        if diff < tol {
            break;
        }
    }
    Ok(grid)
}

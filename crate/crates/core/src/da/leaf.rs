//! Tracing strong unstable leaves up to a target height.

use std::sync::Arc;

use super::map::DaMap;
use super::section::SectionGrid;
use crate::error::{Error, Result};
use crate::geom::Vec2;

/// Orientation of travel along a leaf, relative to height.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum LeafDirection {
    Up,
    Down,
}

impl LeafDirection {
    fn sign(self) -> f64 {
        match self {
            LeafDirection::Up => 1.0,
            LeafDirection::Down => -1.0,
        }
    }

    pub fn toward(from: f64, to: f64) -> Self {
        if to >= from {
            LeafDirection::Up
        } else {
            LeafDirection::Down
        }
    }
}

/// Crossing refinement tolerance in height.
pub const CROSSING_TOL: f64 = 1e-10;

/// Unit leaf direction at `z`, oriented upward.
fn unit_direction(g: &DaMap, s: &SectionGrid, z: Vec2) -> Vec2 {
    let d = g.e1 + g.e2 * s.value(z);
    let d = d * (1.0 / d.norm());
    if d.y < 0.0 {
        -d
    } else {
        d
    }
}

/// Smallest vertical component of the leaf direction over the mesh.
pub fn min_vertical_component(g: &DaMap, s: &SectionGrid) -> f64 {
    s.values
        .iter()
        .map(|&v| {
            let d = g.e1 + g.e2 * v;
            (d.y / d.norm()).abs()
        })
        .fold(f64::INFINITY, f64::min)
}

fn rk4(g: &DaMap, s: &SectionGrid, z: Vec2, h: f64) -> Vec2 {
    let k1 = unit_direction(g, s, z);
    let k2 = unit_direction(g, s, z + k1 * (0.5 * h));
    let k3 = unit_direction(g, s, z + k2 * (0.5 * h));
    let k4 = unit_direction(g, s, z + k3 * h);
    z + (k1 + k2 * 2.0 + k3 * 2.0 + k4) * (h / 6.0)
}

/// Polyline of the leaf from `z` to its first crossing of the plane height `target`.
pub fn leaf_trace(g: &DaMap, s: &SectionGrid, z: Vec2, target: f64, dir: LeafDirection) -> Result<Vec<Vec2>> {
    let vmin = min_vertical_component(g, s);
    if vmin < 0.05 {
        return Err(Error::NotTransverse(vmin));
    }
    let sgn = dir.sign();
    let gap = sgn * (target - z.y);
    if gap < 0.0 {
        return Err(Error::InvalidParameter(format!("target {target} lies behind {} in direction {dir:?}", z.y)));
    }
    let h = sgn / (4.0 * s.resolution as f64);
    let budget = 2.0 * gap / vmin + 1.0;
    let mut pts = vec![z];
    let mut cur = z;
    let mut arc = 0.0;
    while sgn * (target - cur.y) > CROSSING_TOL {
        let next = rk4(g, s, cur, h);
        if sgn * (next.y - target) >= 0.0 {
            // bisect on the partial step length
            let (mut lo, mut hi) = (0.0, 1.0);
            let mut p = next;
            for _ in 0..100 {
                let mid = 0.5 * (lo + hi);
                p = rk4(g, s, cur, h * mid);
                if (p.y - target).abs() <= CROSSING_TOL {
                    break;
                }
                if sgn * (p.y - target) < 0.0 {
                    lo = mid;
                } else {
                    hi = mid;
                }
            }
            pts.push(p);
            return Ok(pts);
        }
        arc += h.abs();
        if arc > budget {
            return Err(Error::LeafBudget { arc });
        }
        cur = next;
        pts.push(cur);
    }
    Ok(pts)
}

/// RK4 on the interpolated section, step a quarter mesh cell.
pub fn leaf_advance(g: &DaMap, s: &SectionGrid, z: Vec2, target: f64, dir: LeafDirection) -> Result<Vec2> {
    leaf_trace(g, s, z, target, dir).map(|p| *p.last().expect("trace starts at z"))
}

/// Polyline as CSV `vertex,x,y`.
pub fn polyline_csv(pts: &[Vec2]) -> String {
    let mut out = String::from("vertex,x,y\n");
    for (i, p) in pts.iter().enumerate() {
        out.push_str(&format!("{i},{:.12},{:.12}\n", p.x, p.y));
    }
    out
}

/// Leaf tracer through the dynamics: pulls `z` back `pullback` steps, where the
/// leaf is a tiny segment along `E^u`, and pushes that segment forward.
#[derive(Debug, Clone)]
pub struct LeafTracer {
    pub g: Arc<DaMap>,
    pub pullback: usize,
    /// Backward steps used to evaluate the slope pointwise.
    pub section_depth: usize,
}

impl LeafTracer {
    pub fn new(g: Arc<DaMap>) -> Self {
        LeafTracer { g, pullback: 20, section_depth: 25 }
    }

    fn dg(&self, z: Vec2, v: Vec2) -> Vec2 {
        let g = &*self.g;
        let d = g.derivative(z);
        let (a, b) = (g.e1.dot(v), g.e2.dot(v));
        g.e1 * (g.lambda_u * a) + g.e2 * (d.c * a + d.n * b)
    }

    /// Point of the leaf through `z` at plane height `z.y + dy`.
    pub fn advance(&self, z: Vec2, dy: f64) -> Result<Vec2> {
        if dy == 0.0 {
            return Ok(z);
        }
        let g = &*self.g;
        let k = self.pullback;
        let mut base = vec![z; k + 1];
        for j in (0..k).rev() {
            base[j] = g.eval_inv(base[j + 1]).wrap();
        }
        // slope at base[0] by the pointwise graph transform
        let mut chain = vec![base[0]];
        for _ in 0..self.section_depth {
            let p = g.eval_inv(*chain.last().unwrap()).wrap();
            chain.push(p);
        }
        let mut slope = 0.0;
        for p in chain[1..].iter().rev() {
            let d = g.derivative(*p);
            slope = (d.c + d.n * slope) / g.lambda_u;
        }
        let u = g.e1 + g.e2 * slope;
        let u = if u.y < 0.0 { -u } else { u };
        let push = |t: f64| -> (Vec2, Vec2) {
            let (mut d, mut tan) = (u * t, u);
            for b in &base[..k] {
                let p = *b + d;
                tan = self.dg(p, tan);
                d = g.a.apply(d) + (g.correction(p) - g.correction(*b));
            }
            (d, tan)
        };
        let target = dy;
        let scale = g.lambda_u.powi(k as i32);
        let mut t = dy / (scale * g.e1.y.abs());
        let (mut lo, mut hi) = (f64::NAN, f64::NAN);
        let mut best = (f64::INFINITY, z);
        for _ in 0..200 {
            let (d, tan) = push(t);
            let err = d.y - target;
            if err.abs() < best.0 {
                best = (err.abs(), z + d);
            }
            if err.abs() <= 1e-12 {
                return Ok(z + d);
            }
            // height is increasing in t
            if err < 0.0 {
                lo = t;
            } else {
                hi = t;
            }
            let mut next = t - err / tan.y;
            let bracketed = lo.is_finite() && hi.is_finite();
            if !(tan.y > 0.0) || (bracketed && !(next > lo.min(hi) && next < lo.max(hi))) {
                next = if bracketed { 0.5 * (lo + hi) } else { t * 2.0 };
            }
            if next == t {
                break;
            }
            t = next;
        }
        // pushed-forward roundoff sets a floor on the reachable height error
        if best.0 <= CROSSING_TOL {
            return Ok(best.1);
        }
        Err(Error::LeafBudget { arc: dy.abs() })
    }
}

//! Sampled wedge condition: every wedge at `z₀` must meet the product of the
//! irrational parts away from the orbit of `z₀`.

use serde::Serialize;

use crate::circle::CantorSetSpec;
use crate::error::Result;
use crate::geom::{torus_dist, Vec2};
use crate::torus::TorusMap;

/// Region `{z₀ + s·e^{iφ} : 0 < s ≤ r·δ₀, φ strictly between θ₁ and θ₂}`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Wedge {
    pub r: f64,
    pub theta1: f64,
    pub theta2: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub enum WedgeOutcome {
    /// A point free of realized gaps in both factors by at least the margin.
    Hit(Vec2),
    Miss,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct WedgeReport {
    pub margin: f64,
    pub results: Vec<(Wedge, WedgeOutcome)>,
}

impl WedgeReport {
    pub fn hits(&self) -> usize {
        self.results.iter().filter(|(_, o)| matches!(o, WedgeOutcome::Hit(_))).count()
    }

    pub fn misses(&self) -> usize {
        self.results.len() - self.hits()
    }

    pub fn all_hit(&self) -> bool {
        self.misses() == 0
    }
}

/// `nr × nt × nw` grid: radii `r = i/nr`, start angles spread over the circle, and
/// opening widths in `(0, π)`.
pub fn wedge_grid(nr: usize, nt: usize, nw: usize) -> Vec<Wedge> {
    let mut out = Vec::with_capacity(nr * nt * nw);
    for i in 1..=nr {
        let r = i as f64 / nr as f64;
        for j in 0..nt {
            let t1 = std::f64::consts::TAU * j as f64 / nt as f64;
            for w in 1..=nw {
                let width = std::f64::consts::PI * w as f64 / (nw as f64 + 1.0);
                out.push(Wedge { r, theta1: t1, theta2: t1 + width });
            }
        }
    }
    out
}

/// Interval of `t` with `o + t·d` inside the open wedge cone and the disk of radius `rad`
/// around the origin, where `o` is on a line with direction `d` (unit).
fn chord(o: Vec2, d: Vec2, u1: Vec2, u2: Vec2, rad: f64) -> Option<(f64, f64)> {
    let (mut lo, mut hi) = (f64::NEG_INFINITY, f64::INFINITY);
    // cross(u1, p) > 0 and cross(p, u2) > 0
    for (a, b) in [(u1.cross(o), u1.cross(d)), (o.cross(u2), d.cross(u2))] {
        if b.abs() < 1e-300 {
            if a <= 0.0 {
                return None;
            }
        } else if b > 0.0 {
            lo = lo.max(-a / b);
        } else {
            hi = hi.min(-a / b);
        }
    }
    let od = o.dot(d);
    let disc = od * od - (o.dot(o) - rad * rad);
    if disc <= 0.0 {
        return None;
    }
    let s = disc.sqrt();
    lo = lo.max(-od - s);
    hi = hi.min(-od + s);
    (hi > lo).then_some((lo, hi))
}

fn search(q1: &CantorSetSpec, q2: &CantorSetSpec, z0: Vec2, w: &Wedge, delta0: f64, margin: f64) -> Option<Vec2> {
    let rad = w.r * delta0;
    let (u1, u2) = (Vec2::from_polar(1.0, w.theta1), Vec2::from_polar(1.0, w.theta2));
    // vertical lines through free abscissae, then horizontal lines through free ordinates
    for (qa, qb, swap) in [(q1, q2, false), (q2, q1, true)] {
        let (ca, cb) = if swap { (z0.y, z0.x) } else { (z0.x, z0.y) };
        for (lo, hi) in qa.free_intervals(ca - rad, ca + rad, margin) {
            for t in [0.5, 0.05, 0.95, 0.25, 0.75] {
                let a = lo + t * (hi - lo) - ca;
                if a == 0.0 {
                    continue;
                }
                let (o, d) = if swap {
                    (Vec2::new(0.0, a), Vec2::new(1.0, 0.0))
                } else {
                    (Vec2::new(a, 0.0), Vec2::new(0.0, 1.0))
                };
                let Some((s0, s1)) = chord(o, d, u1, u2, rad) else { continue };
                if let Some(&(b0, b1)) = qb.free_intervals(cb + s0, cb + s1, margin).first() {
                    let b = 0.5 * (b0 + b1);
                    return Some(if swap { Vec2::new(b, ca + a) } else { Vec2::new(ca + a, b) });
                }
            }
        }
    }
    None
}

/// For each wedge, looks for a point of the product of the two sets (free of realized
/// gaps by `margin`) inside the wedge and off the first `orbit_span` orbit points.
pub fn wedge_sample_check(
    q1: &CantorSetSpec,
    q2: &CantorSetSpec,
    z0: Vec2,
    delta0: f64,
    wedges: &[Wedge],
    margin: f64,
    orbit: Option<(&dyn TorusMap, usize)>,
) -> WedgeReport {
    let mut orbit_pts = Vec::new();
    if let Some((f, span)) = orbit {
        let (mut a, mut b) = (z0, z0);
        orbit_pts.push(z0);
        for _ in 0..span {
            a = f.eval(a);
            b = f.eval_inv(b);
            orbit_pts.push(a);
            orbit_pts.push(b);
        }
    }
    let results = wedges
        .iter()
        .map(|w| {
            let hit = search(q1, q2, z0, w, delta0, margin)
                .filter(|p| orbit_pts.iter().all(|&o| torus_dist(o, *p) > margin));
            (*w, hit.map_or(WedgeOutcome::Miss, WedgeOutcome::Hit))
        })
        .collect();
    WedgeReport { margin, results }
}

/// Control set whose gaps are comparable to their distance from `x0`: on each side,
/// gaps `(s·a^{-m}·b, s·a^{-m+1})` for `m ≥ 1` down to `min_scale`, so the set near `x0`
/// lives in the log-periodic bands `s·a^{-m}·[1, b]`.
pub fn linear_gap_control(x0: f64, s: f64, a: f64, b: f64, min_scale: f64) -> Result<CantorSetSpec> {
    let mut intervals = Vec::new();
    let mut unit = s / a;
    while unit * b > min_scale {
        let (lo, hi) = (unit * b, unit * a);
        let (mid, len) = (0.5 * (lo + hi), hi - lo);
        intervals.push((crate::geom::wrap01(x0 + mid), len));
        intervals.push((crate::geom::wrap01(x0 - mid), len));
        unit /= a;
    }
    CantorSetSpec::from_intervals(&intervals)?.with_anchor(x0)
}

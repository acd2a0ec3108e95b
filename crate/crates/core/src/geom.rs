//! Plane and torus geometry shared by every module.

use std::ops::{Add, AddAssign, Mul, Neg, Sub, SubAssign};

use serde::{Deserialize, Serialize};

/// Point or vector in the plane (the universal cover of the torus).
#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
pub struct Vec2 {
    pub x: f64,
    pub y: f64,
}

impl Vec2 {
    pub const ZERO: Vec2 = Vec2 { x: 0.0, y: 0.0 };

    pub const fn new(x: f64, y: f64) -> Self {
        Vec2 { x, y }
    }

    pub fn from_polar(r: f64, theta: f64) -> Self {
        Vec2::new(r * theta.cos(), r * theta.sin())
    }

    pub fn dot(self, o: Vec2) -> f64 {
        self.x * o.x + self.y * o.y
    }

    pub fn cross(self, o: Vec2) -> f64 {
        self.x * o.y - self.y * o.x
    }

    pub fn norm(self) -> f64 {
        self.x.hypot(self.y)
    }

    pub fn max_norm(self) -> f64 {
        self.x.abs().max(self.y.abs())
    }

    pub fn angle(self) -> f64 {
        self.y.atan2(self.x)
    }

    pub fn is_finite(self) -> bool {
        self.x.is_finite() && self.y.is_finite()
    }

    /// Representative in `[0,1)²`.
    pub fn wrap(self) -> Vec2 {
        Vec2::new(wrap01(self.x), wrap01(self.y))
    }

    /// Componentwise floor, as the integer translation taking `wrap()` back to `self`.
    pub fn floor(self) -> Vec2 {
        Vec2::new(self.x.floor(), self.y.floor())
    }

    /// Componentwise nearest integer.
    pub fn round(self) -> Vec2 {
        Vec2::new(self.x.round(), self.y.round())
    }
}

impl Add for Vec2 {
    type Output = Vec2;
    fn add(self, o: Vec2) -> Vec2 {
        Vec2::new(self.x + o.x, self.y + o.y)
    }
}

impl AddAssign for Vec2 {
    fn add_assign(&mut self, o: Vec2) {
        self.x += o.x;
        self.y += o.y;
    }
}

impl Sub for Vec2 {
    type Output = Vec2;
    fn sub(self, o: Vec2) -> Vec2 {
        Vec2::new(self.x - o.x, self.y - o.y)
    }
}

impl SubAssign for Vec2 {
    fn sub_assign(&mut self, o: Vec2) {
        self.x -= o.x;
        self.y -= o.y;
    }
}

impl Mul<f64> for Vec2 {
    type Output = Vec2;
    fn mul(self, s: f64) -> Vec2 {
        Vec2::new(self.x * s, self.y * s)
    }
}

impl Mul<Vec2> for f64 {
    type Output = Vec2;
    fn mul(self, v: Vec2) -> Vec2 {
        v * self
    }
}

impl Neg for Vec2 {
    type Output = Vec2;
    fn neg(self) -> Vec2 {
        Vec2::new(-self.x, -self.y)
    }
}

/// `x mod 1` in `[0,1)`.
pub fn wrap01(x: f64) -> f64 {
    let r = x - x.floor();
    // x = -1e-18 gives r == 1.0 after rounding
    if r >= 1.0 {
        0.0
    } else {
        r
    }
}

/// Signed circle difference `b - a` reduced to `[-1/2, 1/2)`.
pub fn circle_delta(a: f64, b: f64) -> f64 {
    let d = b - a;
    d - (d + 0.5).floor()
}

pub fn circle_dist(a: f64, b: f64) -> f64 {
    circle_delta(a, b).abs()
}

/// Shortest displacement from `a` to `b` on the torus.
pub fn torus_delta(a: Vec2, b: Vec2) -> Vec2 {
    Vec2::new(circle_delta(a.x, b.x), circle_delta(a.y, b.y))
}

pub fn torus_dist(a: Vec2, b: Vec2) -> f64 {
    torus_delta(a, b).norm()
}

/// Representative of `p` closest to `anchor` in the plane.
pub fn nearest_rep(p: Vec2, anchor: Vec2) -> Vec2 {
    anchor + torus_delta(anchor, p)
}

/// Distance from `p` to the segment `[a, b]` in the plane.
pub fn point_segment_dist(p: Vec2, a: Vec2, b: Vec2) -> f64 {
    let ab = b - a;
    let len2 = ab.dot(ab);
    if len2 == 0.0 {
        return (p - a).norm();
    }
    let t = ((p - a).dot(ab) / len2).clamp(0.0, 1.0);
    (p - (a + ab * t)).norm()
}

/// Torus distance from `p` to a closed polyline given in a common plane chart.
pub fn torus_dist_to_polyline(p: Vec2, closed: &[Vec2]) -> f64 {
    if closed.is_empty() {
        return f64::INFINITY;
    }
    let q = nearest_rep(p, closed[0]);
    let n = closed.len();
    (0..n)
        .map(|i| point_segment_dist(q, closed[i], closed[(i + 1) % n]))
        .fold(f64::INFINITY, f64::min)
}

fn orient(a: Vec2, b: Vec2, c: Vec2) -> f64 {
    (b - a).cross(c - a)
}

/// Proper or touching intersection of closed segments `[a,b]` and `[c,d]`.
pub fn segments_intersect(a: Vec2, b: Vec2, c: Vec2, d: Vec2) -> bool {
    let d1 = orient(c, d, a);
    let d2 = orient(c, d, b);
    let d3 = orient(a, b, c);
    let d4 = orient(a, b, d);
    if ((d1 > 0.0 && d2 < 0.0) || (d1 < 0.0 && d2 > 0.0))
        && ((d3 > 0.0 && d4 < 0.0) || (d3 < 0.0 && d4 > 0.0))
    {
        return true;
    }
    let on = |p: Vec2, q: Vec2, r: Vec2, o: f64| {
        o == 0.0
            && r.x >= p.x.min(q.x)
            && r.x <= p.x.max(q.x)
            && r.y >= p.y.min(q.y)
            && r.y <= p.y.max(q.y)
    };
    on(c, d, a, d1) || on(c, d, b, d2) || on(a, b, c, d3) || on(a, b, d, d4)
}

/// True when no two non-adjacent edges of the closed polyline meet.
pub fn is_simple_closed(poly: &[Vec2]) -> bool {
    let n = poly.len();
    if n < 3 {
        return false;
    }
    let bb = BBox::of_points(poly);
    // uniform bucket grid keeps the all-pairs test near linear
    let cells = ((n as f64).sqrt().ceil() as usize).max(1);
    let w = (bb.hi.x - bb.lo.x).max(1e-300);
    let h = (bb.hi.y - bb.lo.y).max(1e-300);
    let cell_of = |p: Vec2| {
        let i = (((p.x - bb.lo.x) / w * cells as f64) as usize).min(cells - 1);
        let j = (((p.y - bb.lo.y) / h * cells as f64) as usize).min(cells - 1);
        (i, j)
    };
    let mut buckets: Vec<Vec<usize>> = vec![Vec::new(); cells * cells];
    for e in 0..n {
        let (a, b) = (poly[e], poly[(e + 1) % n]);
        let (i0, j0) = cell_of(Vec2::new(a.x.min(b.x), a.y.min(b.y)));
        let (i1, j1) = cell_of(Vec2::new(a.x.max(b.x), a.y.max(b.y)));
        for i in i0..=i1 {
            for j in j0..=j1 {
                buckets[j * cells + i].push(e);
            }
        }
    }
    for bucket in &buckets {
        for (u, &e) in bucket.iter().enumerate() {
            for &f in &bucket[u + 1..] {
                let adjacent = f == e + 1 || e == f + 1 || (e == 0 && f == n - 1) || (f == 0 && e == n - 1);
                if adjacent {
                    continue;
                }
                if segments_intersect(poly[e], poly[(e + 1) % n], poly[f], poly[(f + 1) % n]) {
                    return false;
                }
            }
        }
    }
    true
}

/// Symmetric Hausdorff distance between two finite samples (torus metric).
pub fn hausdorff(a: &[Vec2], b: &[Vec2]) -> f64 {
    let one_sided = |p: &[Vec2], q: &[Vec2]| {
        p.iter()
            .map(|&u| q.iter().map(|&v| torus_dist(u, v)).fold(f64::INFINITY, f64::min))
            .fold(0.0, f64::max)
    };
    one_sided(a, b).max(one_sided(b, a))
}

/// Hausdorff distance from samples to closed polylines, measured against segments.
pub fn hausdorff_to_polyline(samples: &[Vec2], poly: &[Vec2]) -> f64 {
    let forward = samples
        .iter()
        .map(|&p| torus_dist_to_polyline(p, poly))
        .fold(0.0, f64::max);
    let backward = poly
        .iter()
        .map(|&p| torus_dist_to_polyline(p, samples))
        .fold(0.0, f64::max);
    forward.max(backward)
}

/// Even-odd containment of a torus point in a closed polyline given in a common chart.
pub fn point_in_polygon(p: Vec2, closed: &[Vec2]) -> bool {
    if closed.len() < 3 {
        return false;
    }
    let q = nearest_rep(p, closed[0]);
    let n = closed.len();
    let mut inside = false;
    for i in 0..n {
        let (a, b) = (closed[i], closed[(i + 1) % n]);
        if (a.y > q.y) != (b.y > q.y) {
            let x = a.x + (q.y - a.y) / (b.y - a.y) * (b.x - a.x);
            if q.x < x {
                inside = !inside;
            }
        }
    }
    inside
}

/// Axis-aligned rectangle in a plane chart.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BBox {
    pub lo: Vec2,
    pub hi: Vec2,
}

impl BBox {
    pub fn of_points(pts: &[Vec2]) -> BBox {
        let mut lo = Vec2::new(f64::INFINITY, f64::INFINITY);
        let mut hi = Vec2::new(f64::NEG_INFINITY, f64::NEG_INFINITY);
        for p in pts {
            lo.x = lo.x.min(p.x);
            lo.y = lo.y.min(p.y);
            hi.x = hi.x.max(p.x);
            hi.y = hi.y.max(p.y);
        }
        BBox { lo, hi }
    }

    pub fn center(&self) -> Vec2 {
        (self.lo + self.hi) * 0.5
    }

    pub fn half_extent(&self) -> Vec2 {
        (self.hi - self.lo) * 0.5
    }

    pub fn inflate(&self, m: f64) -> BBox {
        BBox { lo: self.lo - Vec2::new(m, m), hi: self.hi + Vec2::new(m, m) }
    }

    /// Scales about the center by `factor`.
    pub fn scale(&self, factor: f64) -> BBox {
        let (c, h) = (self.center(), self.half_extent() * factor);
        BBox { lo: c - h, hi: c + h }
    }

    pub fn diameter(&self) -> f64 {
        (self.hi - self.lo).norm()
    }

    /// Membership of a torus point, testing the representative nearest the center.
    pub fn contains_torus(&self, p: Vec2) -> bool {
        let c = self.center();
        let d = torus_delta(c, p);
        let h = self.half_extent();
        d.x.abs() <= h.x && d.y.abs() <= h.y
    }

    pub fn contains(&self, p: Vec2) -> bool {
        p.x >= self.lo.x && p.x <= self.hi.x && p.y >= self.lo.y && p.y <= self.hi.y
    }

    /// Overlap of the torus projections of two boxes (each smaller than half the torus).
    pub fn overlaps_torus(&self, o: &BBox) -> bool {
        let d = torus_delta(self.center(), o.center());
        let (h1, h2) = (self.half_extent(), o.half_extent());
        d.x.abs() <= h1.x + h2.x && d.y.abs() <= h1.y + h2.y
    }
}

/// Neumaier compensated sum accumulator.
#[derive(Debug, Clone, Copy, Default)]
pub struct KahanSum {
    sum: f64,
    comp: f64,
}

impl KahanSum {
    pub fn add(&mut self, v: f64) {
        let t = self.sum + v;
        if self.sum.abs() >= v.abs() {
            self.comp += (self.sum - t) + v;
        } else {
            self.comp += (v - t) + self.sum;
        }
        self.sum = t;
    }

    pub fn value(&self) -> f64 {
        self.sum + self.comp
    }
}

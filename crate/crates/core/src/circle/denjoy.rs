//! Denjoy lifts: the rotation by α with the orbit of 0 blown up into gaps.

use crate::error::{Error, Result};
use crate::geom::{circle_dist, wrap01};

use super::cantor::{CantorSetSpec, Gap, DEFAULT_TOL};
use super::CircleMap;

/// Gaps shorter than this are not representable next to unit-scale positions.
const LENGTH_FLOOR: f64 = 1e-17;

/// Length of the gap inserted at the `k`-th orbit point.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum GapSchedule {
    /// `scale · ratio^|k|`
    Geometric { scale: f64, ratio: f64 },
}

impl Default for GapSchedule {
    fn default() -> Self {
        GapSchedule::Geometric { scale: 0.125, ratio: 1.0 / 3.0 }
    }
}

impl GapSchedule {
    pub fn length(&self, k: i64) -> f64 {
        match *self {
            GapSchedule::Geometric { scale, ratio } => scale * ratio.powi(k.unsigned_abs() as i32),
        }
    }

    /// Sum over all `k ∈ Z`.
    pub fn total(&self) -> f64 {
        match *self {
            GapSchedule::Geometric { scale, ratio } => scale * (1.0 + ratio) / (1.0 - ratio),
        }
    }

    /// Sum over `|k| > k_max`.
    pub fn tail(&self, k_max: i64) -> f64 {
        match *self {
            GapSchedule::Geometric { scale, ratio } => {
                2.0 * scale * ratio.powi(k_max as i32 + 1) / (1.0 - ratio)
            }
        }
    }

    fn validate(&self) -> Result<()> {
        match *self {
            GapSchedule::Geometric { scale, ratio } => {
                if !(scale > 0.0) || !(0.0..1.0).contains(&ratio) || ratio == 0.0 {
                    return Err(Error::InvalidParameter(format!(
                        "geometric schedule needs scale > 0 and ratio in (0,1), got {scale}, {ratio}"
                    )));
                }
            }
        }
        let total = self.total();
        if total >= 1.0 {
            return Err(Error::ScheduleTooLarge { total });
        }
        Ok(())
    }

    /// Largest `|k|` whose gap is still representable, capped by `max_gaps`.
    fn depth(&self, max_gaps: usize) -> i64 {
        let cap = (max_gaps / 2) as i64;
        (0..=cap).take_while(|&k| self.length(k) >= LENGTH_FLOOR).last().unwrap_or(0)
    }
}

/// Smallest `q ≤ h` with `q·α` within `tol` of an integer.
fn circle_resonance(alpha: f64, h: i64, tol: f64) -> Option<(i64, i64)> {
    (1..=h).find_map(|q| {
        let p = (q as f64 * alpha).round();
        ((q as f64 * alpha - p).abs() < tol).then_some((-(p as i64), q))
    })
}

/// A Denjoy counterexample over the rotation by `alpha`.
#[derive(Debug, Clone)]
pub struct Denjoy {
    alpha: f64,
    shift: f64,
    /// Slope of the position map off the gaps.
    c: f64,
    k_max: i64,
    theta: Vec<f64>,
    len: Vec<f64>,
    index: Vec<i64>,
    prefix: Vec<f64>,
    left: Vec<f64>,
    slot: Vec<Option<usize>>,
    tail: f64,
}

enum Loc {
    InGap(usize, f64),
    Between(usize, f64),
}

impl Denjoy {
    /// Gap `k` gets length `lengths[k + k_max]`; zero-length gaps are dropped.
    fn from_lengths(alpha: f64, k_max: i64, lengths: &[f64], tail: f64) -> Result<Self> {
        let total: f64 = lengths.iter().sum::<f64>() + tail;
        if total >= 1.0 {
            return Err(Error::ScheduleTooLarge { total });
        }
        let mut rows: Vec<(f64, f64, i64)> = (-k_max..=k_max)
            .map(|k| (wrap01(k as f64 * alpha), lengths[(k + k_max) as usize], k))
            .filter(|r| r.1 > 0.0)
            .collect();
        rows.sort_by(|a, b| a.0.total_cmp(&b.0));
        let c = 1.0 - lengths.iter().sum::<f64>();
        let n = rows.len();
        let mut prefix = Vec::with_capacity(n + 1);
        prefix.push(0.0);
        for r in &rows {
            prefix.push(prefix.last().unwrap() + r.1);
        }
        let left = rows.iter().enumerate().map(|(i, r)| c * r.0 + prefix[i]).collect();
        let mut slot = vec![None; (2 * k_max + 1) as usize];
        for (i, r) in rows.iter().enumerate() {
            slot[(r.2 + k_max) as usize] = Some(i);
        }
        Ok(Denjoy {
            alpha,
            shift: 0.0,
            c,
            k_max,
            theta: rows.iter().map(|r| r.0).collect(),
            len: rows.iter().map(|r| r.1).collect(),
            index: rows.iter().map(|r| r.2).collect(),
            prefix,
            left,
            slot,
            tail,
        })
    }

    pub fn alpha(&self) -> f64 {
        self.alpha
    }

    /// Number of realized gaps.
    pub fn gap_count(&self) -> usize {
        self.len.len()
    }

    pub fn depth(&self) -> i64 {
        self.k_max
    }

    /// Unshifted position of base angle `t ∈ [0,1)`; left endpoint at gap angles.
    fn x_of(&self, t: f64) -> f64 {
        let i = self.theta.partition_point(|&th| th < t);
        self.c * t + self.prefix[i]
    }

    fn x_lift(&self, t: f64) -> f64 {
        let n = t.floor();
        let f = t - n;
        if f >= 1.0 {
            n + 1.0 + self.x_of(0.0)
        } else {
            n + self.x_of(f)
        }
    }

    fn locate(&self, u: f64) -> Loc {
        let p = self.left.partition_point(|&l| l <= u);
        if p > 0 && u <= self.left[p - 1] + self.len[p - 1] {
            let i = p - 1;
            return Loc::InGap(i, ((u - self.left[i]) / self.len[i]).clamp(0.0, 1.0));
        }
        Loc::Between(p, (u - self.prefix[p]) / self.c)
    }

    /// Image of the point at fraction `s` of sorted gap `i` under `F^dir`, same period.
    fn gap_image(&self, i: usize, s: f64, dir: i64) -> f64 {
        let src = self.theta[i];
        let k = self.index[i] + dir;
        if k.abs() <= self.k_max {
            if let Some(j) = self.slot[(k + self.k_max) as usize] {
                let dst = self.theta[j];
                let off = match dir {
                    1 if dst < src => 1.0,
                    -1 if dst > src => -1.0,
                    _ => 0.0,
                };
                return off + self.left[j] + s * self.len[j];
            }
        }
        self.x_lift(src + dir as f64 * self.alpha)
    }

    fn step_unshifted(&self, big_u: f64, dir: i64) -> f64 {
        let m = big_u.floor();
        let mut u = big_u - m;
        let mut m = m;
        if u >= 1.0 {
            u = 0.0;
            m += 1.0;
        }
        let img = match self.locate(u) {
            Loc::InGap(i, s) => self.gap_image(i, s, dir),
            Loc::Between(p, t) => {
                let raw = self.x_lift(t + dir as f64 * self.alpha);
                let n = self.len.len();
                let lo = if p > 0 { self.gap_image(p - 1, 1.0, dir) } else { f64::NEG_INFINITY };
                let hi = if p < n {
                    self.gap_image(p, 0.0, dir)
                } else if n > 0 {
                    1.0 + self.gap_image(0, 0.0, dir)
                } else {
                    f64::INFINITY
                };
                raw.clamp(lo, hi.max(lo))
            }
        };
        m + img
    }

    /// The collapse map `π₁`, semiconjugating this map to the rotation by α.
    pub fn collapse(&self, x: f64) -> f64 {
        match self.locate(wrap01(x - self.shift)) {
            Loc::InGap(i, _) => self.theta[i],
            Loc::Between(_, t) => wrap01(t),
        }
    }

    /// Point of the Cantor set over base angle `theta` (left endpoint on gap angles).
    pub fn embed(&self, theta: f64) -> f64 {
        wrap01(self.shift + self.x_of(wrap01(theta)))
    }

    /// Closed gap `k` as `(left, right)` circle coordinates.
    pub fn gap_endpoints(&self, k: i64) -> Option<(f64, f64)> {
        if k.abs() > self.k_max {
            return None;
        }
        let i = self.slot[(k + self.k_max) as usize]?;
        let l = self.shift + self.left[i];
        Some((wrap01(l), wrap01(l + self.len[i])))
    }

    pub fn cantor_spec(&self) -> CantorSetSpec {
        let gaps = (0..self.len.len())
            .map(|i| Gap {
                index: self.index[i],
                center: wrap01(self.shift + self.left[i] + 0.5 * self.len[i]),
                length: self.len[i],
            })
            .collect();
        CantorSetSpec::from_gaps(gaps, Some(self.alpha), self.tail)
            .expect("gaps of a Denjoy construction are disjoint by construction")
    }
}

impl CircleMap for Denjoy {
    fn eval(&self, x: f64) -> f64 {
        self.shift + self.step_unshifted(x - self.shift, 1)
    }
    fn eval_inv(&self, x: f64) -> f64 {
        self.shift + self.step_unshifted(x - self.shift, -1)
    }
    fn label(&self) -> String {
        format!("denjoy(alpha={}, gaps={})", self.alpha, self.len.len())
    }
}

fn check_alpha(alpha: f64) -> Result<()> {
    if !(alpha > 0.0 && alpha < 1.0) {
        return Err(Error::InvalidParameter(format!("alpha {alpha} not in (0,1)")));
    }
    if let Some((n1, n2)) = circle_resonance(alpha, 100, 1e-9) {
        return Err(Error::Resonant { n1, n2, n3: 0 });
    }
    Ok(())
}

/// Denjoy lift over `alpha` with gaps from `schedule`, realized up to `max_gaps` gaps.
pub fn build_denjoy(alpha: f64, schedule: GapSchedule, max_gaps: usize) -> Result<(Denjoy, CantorSetSpec)> {
    check_alpha(alpha)?;
    schedule.validate()?;
    let k_max = schedule.depth(max_gaps);
    let lengths: Vec<f64> = (-k_max..=k_max).map(|k| schedule.length(k)).collect();
    let d = Denjoy::from_lengths(alpha, k_max, &lengths, schedule.tail(k_max))?;
    let spec = d.cantor_spec();
    Ok((d, spec))
}

/// Inputs for a Cantor set whose gaps shrink quadratically toward an anchor.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QuadraticGapParams {
    pub x0: f64,
    pub c: f64,
    /// Half-width of the requested window `J` around `x0`.
    pub half_width: f64,
    pub max_gaps: usize,
    pub alpha: f64,
    pub schedule: GapSchedule,
    /// Base angle sent to `x0`; must avoid the gap orbit.
    pub theta_star: f64,
}

impl QuadraticGapParams {
    pub fn new(x0: f64, c: f64, half_width: f64) -> Self {
        QuadraticGapParams {
            x0,
            c,
            half_width,
            max_gaps: 20_000,
            alpha: std::f64::consts::SQRT_2 - 1.0,
            schedule: GapSchedule::default(),
            theta_star: 0.5 * (5f64.sqrt() - 1.0),
        }
    }
}

/// Denjoy lift whose gaps satisfy `|I_k| ≤ C·d(x₀, x_k)²`, with `x₀` and the (possibly
/// shrunk) window boundary in the irrational part.
pub fn build_quadratic_gap_cantor(p: QuadraticGapParams) -> Result<(Denjoy, CantorSetSpec)> {
    if !(p.c > 0.0) {
        return Err(Error::InvalidParameter(format!("C must be positive, got {}", p.c)));
    }
    if !(p.half_width > 0.0 && p.half_width < 0.5) {
        return Err(Error::InvalidParameter(format!("degenerate window half-width {}", p.half_width)));
    }
    check_alpha(p.alpha)?;
    p.schedule.validate()?;
    let k_max = p.schedule.depth(p.max_gaps);
    let theta_star = wrap01(p.theta_star);
    // positions spread at least by this slope however the lengths shrink
    let c_min = 1.0 - p.schedule.total();
    let mut lengths = Vec::with_capacity((2 * k_max + 1) as usize);
    for k in -k_max..=k_max {
        let d = circle_dist(theta_star, wrap01(k as f64 * p.alpha));
        if d < 1e-12 {
            return Err(Error::InvalidParameter(format!("theta_star hits gap {k}")));
        }
        let cap = p.c * (c_min * d).powi(2);
        lengths.push(p.schedule.length(k).min(cap));
    }
    let tail = p.schedule.tail(k_max);
    let mut d = Denjoy::from_lengths(p.alpha, k_max, &lengths, tail)?;
    d.shift = wrap01(p.x0 - d.x_of(theta_star));
    let spec = d.cantor_spec();

    let mut w = p.half_width;
    for _ in 0..1000 {
        let bad = [p.x0 - w, p.x0 + w].into_iter().find(|&e| !spec.is_free(e, DEFAULT_TOL));
        let Some(e) = bad else { break };
        let g = spec
            .gaps()
            .iter()
            .find(|g| circle_dist(e, g.center) <= 0.5 * g.length + DEFAULT_TOL)
            .expect("a non-free point lies near some gap");
        w = circle_dist(p.x0, g.center) - 0.5 * g.length - 4.0 * DEFAULT_TOL;
        if w <= 0.0 {
            return Err(Error::InvalidParameter("window collapsed onto the anchor".into()));
        }
    }
    let spec = spec.with_anchor(p.x0)?.with_window(p.x0 - w, p.x0 + w);
    Ok((d, spec))
}

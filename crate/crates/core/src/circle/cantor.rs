//! Cantor sets on the circle given as complements of disjoint open gaps.

use std::fmt::Write as _;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::geom::{circle_delta, circle_dist, wrap01};

/// Endpoint tolerance used when none is given.
pub const DEFAULT_TOL: f64 = 1e-12;

/// A deleted open interval `(center - length/2, center + length/2)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Gap {
    pub index: i64,
    pub center: f64,
    pub length: f64,
}

impl Gap {
    pub fn left(&self) -> f64 {
        wrap01(self.center - 0.5 * self.length)
    }
    pub fn right(&self) -> f64 {
        wrap01(self.center + 0.5 * self.length)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Side {
    Left,
    Right,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Membership {
    InGap(i64),
    RationalPart(i64, Side),
    IrrationalPart,
    /// Unrealized gaps carry more mass than the tolerance can certify.
    Undetermined,
}

/// Circle Cantor set realized by finitely many gaps.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CantorSetSpec {
    /// Sorted by left endpoint in `[0,1)`.
    gaps: Vec<Gap>,
    lefts: Vec<f64>,
    /// Rotation whose orbit indexes the gaps, if any.
    pub alpha: Option<f64>,
    pub anchor: Option<f64>,
    /// Closed arc `[lo, hi]` read counterclockwise.
    pub window: Option<(f64, f64)>,
    /// Total length of gaps the realization omitted.
    pub tail_mass: f64,
}

impl CantorSetSpec {
    /// Validates disjointness and total length, then sorts.
    pub fn from_gaps(mut gaps: Vec<Gap>, alpha: Option<f64>, tail_mass: f64) -> Result<Self> {
        let mut total = tail_mass;
        for g in &gaps {
            if !(g.length >= 0.0) || !g.center.is_finite() {
                return Err(Error::InvalidParameter(format!("bad gap {g:?}")));
            }
            total += g.length;
        }
        if total >= 1.0 {
            return Err(Error::ScheduleTooLarge { total });
        }
        gaps.retain(|g| g.length > 0.0);
        for g in &mut gaps {
            g.center = wrap01(g.center);
        }
        gaps.sort_by(|a, b| a.left().total_cmp(&b.left()));
        let n = gaps.len();
        for i in 0..n {
            let a = &gaps[i];
            let next_left = if i + 1 < n { gaps[i + 1].left() } else { 1.0 + gaps[0].left() };
            if n > 1 && a.left() + a.length > next_left {
                return Err(Error::InvalidParameter(format!(
                    "gaps {} and {} overlap",
                    a.index,
                    gaps[(i + 1) % n].index
                )));
            }
        }
        let lefts = gaps.iter().map(Gap::left).collect();
        Ok(CantorSetSpec { gaps, lefts, alpha, anchor: None, window: None, tail_mass })
    }

    /// Cantor set whose gaps are the given `(center, length)` pairs, indexed by position.
    pub fn from_intervals(intervals: &[(f64, f64)]) -> Result<Self> {
        let gaps = intervals
            .iter()
            .enumerate()
            .map(|(i, &(center, length))| Gap { index: i as i64, center, length })
            .collect();
        CantorSetSpec::from_gaps(gaps, None, 0.0)
    }

    pub fn with_anchor(mut self, x0: f64) -> Result<Self> {
        if self.gap_containing_closed(x0, 0.0).is_some() {
            return Err(Error::InvalidParameter(format!("anchor {x0} lies in a closed gap")));
        }
        self.anchor = Some(wrap01(x0));
        Ok(self)
    }

    pub fn with_window(mut self, lo: f64, hi: f64) -> Self {
        self.window = Some((wrap01(lo), wrap01(hi)));
        self
    }

    pub fn gaps(&self) -> &[Gap] {
        &self.gaps
    }

    pub fn len(&self) -> usize {
        self.gaps.len()
    }

    pub fn is_empty(&self) -> bool {
        self.gaps.is_empty()
    }

    pub fn gap_by_index(&self, k: i64) -> Option<&Gap> {
        self.gaps.iter().find(|g| g.index == k)
    }

    pub fn total_length(&self) -> f64 {
        self.gaps.iter().map(|g| g.length).sum()
    }

    /// Measure of the realized Cantor set.
    pub fn measure(&self) -> f64 {
        1.0 - self.total_length() - self.tail_mass
    }

    /// Sorted positions whose gap may contain or touch `u`.
    fn candidates(&self, u: f64) -> impl Iterator<Item = usize> + '_ {
        let n = self.gaps.len();
        let p = self.lefts.partition_point(|&l| l <= u);
        let near = [p.wrapping_sub(1), p, n.wrapping_sub(1), 0];
        near.into_iter().filter(move |&i| i < n)
    }

    fn gap_containing_closed(&self, x: f64, tol: f64) -> Option<&Gap> {
        let u = wrap01(x);
        self.candidates(u)
            .map(|i| &self.gaps[i])
            .find(|g| circle_dist(u, g.center) <= 0.5 * g.length + tol)
    }

    /// Classifies `x` against the realized gaps.
    pub fn membership(&self, x: f64, tol: f64) -> Membership {
        let u = wrap01(x);
        for i in self.candidates(u) {
            let g = &self.gaps[i];
            let d = circle_delta(g.center, u);
            let h = 0.5 * g.length;
            if (d + h).abs() <= tol {
                return Membership::RationalPart(g.index, Side::Left);
            }
            if (d - h).abs() <= tol {
                return Membership::RationalPart(g.index, Side::Right);
            }
            if d.abs() < h {
                return Membership::InGap(g.index);
            }
        }
        if self.tail_mass > tol {
            Membership::Undetermined
        } else {
            Membership::IrrationalPart
        }
    }

    /// True when `x` is at least `margin` away from every realized closed gap.
    pub fn is_free(&self, x: f64, margin: f64) -> bool {
        self.gap_containing_closed(x, margin).is_none()
    }

    /// Open subintervals of `[a, b]` (plane coordinates, `b - a < 1`) that avoid the
    /// realized closed gaps by at least `margin`.
    pub fn free_intervals(&self, a: f64, b: f64, margin: f64) -> Vec<(f64, f64)> {
        let mut blocked: Vec<(f64, f64)> = Vec::new();
        let base = a.floor();
        for shift in [-1.0, 0.0, 1.0] {
            for g in &self.gaps {
                let lo = base + shift + g.center - 0.5 * g.length - margin;
                let hi = base + shift + g.center + 0.5 * g.length + margin;
                if hi > a && lo < b {
                    blocked.push((lo, hi));
                }
            }
        }
        blocked.sort_by(|p, q| p.0.total_cmp(&q.0));
        let mut out = Vec::new();
        let mut cur = a;
        for (lo, hi) in blocked {
            if lo > cur {
                out.push((cur, lo.min(b)));
            }
            cur = cur.max(hi);
            if cur >= b {
                break;
            }
        }
        if cur < b {
            out.push((cur, b));
        }
        out.retain(|&(l, h)| h > l);
        out
    }

    /// Plain-text table, one gap per line: `index center length`.
    pub fn to_table(&self) -> String {
        let mut s = String::from("# index center length\n");
        if let Some(a) = self.alpha {
            let _ = writeln!(s, "# alpha {a:.17e}");
        }
        if let Some(x0) = self.anchor {
            let _ = writeln!(s, "# anchor {x0:.17e}");
        }
        if let Some((lo, hi)) = self.window {
            let _ = writeln!(s, "# window {lo:.17e} {hi:.17e}");
        }
        let _ = writeln!(s, "# tail {:.17e}", self.tail_mass);
        let mut by_index = self.gaps.clone();
        by_index.sort_by_key(|g| g.index);
        for g in by_index {
            let _ = writeln!(s, "{} {:.17e} {:.17e}", g.index, g.center, g.length);
        }
        s
    }

    pub fn from_table(text: &str) -> Result<Self> {
        let bad = |line: &str| Error::Format(format!("bad gap table line: {line}"));
        let mut gaps = Vec::new();
        let (mut alpha, mut anchor, mut window, mut tail) = (None, None, None, 0.0);
        for line in text.lines().map(str::trim).filter(|l| !l.is_empty()) {
            let fields: Vec<&str> = line.split_whitespace().collect();
            if fields[0] == "#" {
                let num = |i: usize| -> Result<f64> {
                    fields.get(i).ok_or_else(|| bad(line))?.parse().map_err(|_| bad(line))
                };
                match fields.get(1).copied() {
                    Some("alpha") => alpha = Some(num(2)?),
                    Some("anchor") => anchor = Some(num(2)?),
                    Some("window") => window = Some((num(2)?, num(3)?)),
                    Some("tail") => tail = num(2)?,
                    _ => {}
                }
                continue;
            }
            if fields.len() != 3 {
                return Err(bad(line));
            }
            gaps.push(Gap {
                index: fields[0].parse().map_err(|_| bad(line))?,
                center: fields[1].parse().map_err(|_| bad(line))?,
                length: fields[2].parse().map_err(|_| bad(line))?,
            });
        }
        let mut spec = CantorSetSpec::from_gaps(gaps, alpha, tail)?;
        if let Some(x0) = anchor {
            spec = spec.with_anchor(x0)?;
        }
        if let Some((lo, hi)) = window {
            spec = spec.with_window(lo, hi);
        }
        Ok(spec)
    }
}

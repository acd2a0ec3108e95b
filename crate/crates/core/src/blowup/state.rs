//! Staged blow-up of one orbit into a null-sequence of disks.
//!
//! All pockets live in base coordinates: stage `n` contributes the pair
//! `f^{±n} ∘ P_{±n} ∘ f^{∓n}`, where `P` is the radial profile around `z₀`.
//! The stage-`N` conjugacy is `ψ_N = h₀ ∘ B₁ ∘ … ∘ B_N`, `φ_N = ψ_N⁻¹` and
//! `f_N = ψ_N ∘ f ∘ φ_N`.

use std::sync::Arc;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use super::radial::{PocketProfile, RadialChart};
use crate::error::{Error, Result};
use crate::geom::{
    is_simple_closed, nearest_rep, point_in_polygon, segments_intersect, torus_delta, torus_dist,
    torus_dist_to_polyline, BBox, Vec2,
};
use crate::torus::{TorusLift, TorusMap};

/// Tunables of the construction.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct BlowupConfig {
    /// Inner radius fraction of the central disk.
    pub eps0: f64,
    /// Chart radius around `z₀`.
    pub delta0: f64,
    /// Boundary samples per disk.
    pub samples: usize,
    /// Safety factor on sampled diameters and support boxes.
    pub inflation: f64,
    /// Distances at or below this abort a stage.
    pub floor: f64,
}

impl Default for BlowupConfig {
    fn default() -> Self {
        BlowupConfig { eps0: 0.5, delta0: 0.25, samples: 256, inflation: 2.0, floor: 1e-13 }
    }
}

impl BlowupConfig {
    pub fn with_delta0(delta0: f64) -> Self {
        BlowupConfig { delta0, ..Default::default() }
    }
}

/// One blown-up disk `Σ_k` in final coordinates.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct DiskRecord {
    pub index: i64,
    pub stage: usize,
    /// Closed polyline, plane representatives nearest `marker`.
    pub boundary: Vec<Vec2>,
    pub bbox: BBox,
    /// A point inside the disk.
    pub marker: Vec2,
}

impl DiskRecord {
    fn new(index: i64, stage: usize, marker: Vec2, raw: Vec<Vec2>) -> Self {
        let boundary: Vec<Vec2> = raw.into_iter().map(|p| nearest_rep(p, marker)).collect();
        let bbox = BBox::of_points(&boundary);
        DiskRecord { index, stage, boundary, bbox, marker }
    }

    /// Sampled diameter of the boundary.
    pub fn diameter(&self) -> f64 {
        let b = &self.boundary;
        let mut d = 0.0f64;
        for i in 0..b.len() {
            for j in i + 1..b.len() {
                d = d.max((b[i] - b[j]).norm());
            }
        }
        d
    }

    pub fn contains(&self, p: Vec2) -> bool {
        self.bbox.contains_torus(p) && point_in_polygon(p, &self.boundary)
    }

    pub fn distance(&self, p: Vec2) -> f64 {
        if self.contains(p) {
            0.0
        } else {
            torus_dist_to_polyline(p, &self.boundary)
        }
    }

    /// Polyline test for disjoint closed disks.
    pub fn disjoint_from(&self, o: &DiskRecord) -> bool {
        if !self.bbox.overlaps_torus(&o.bbox) {
            return true;
        }
        let shift = torus_delta(self.marker, o.marker) - (o.marker - self.marker);
        let other: Vec<Vec2> = o.boundary.iter().map(|&p| p + shift).collect();
        let (n, m) = (self.boundary.len(), other.len());
        for i in 0..n {
            let (a, b) = (self.boundary[i], self.boundary[(i + 1) % n]);
            for j in 0..m {
                if segments_intersect(a, b, other[j], other[(j + 1) % m]) {
                    return false;
                }
            }
        }
        !self.contains(o.marker) && !o.contains(self.marker)
    }
}

/// One radial pocket `f^k ∘ P_k ∘ f^{-k}`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Pocket {
    pub index: i64,
    pub profile: PocketProfile,
    /// Box around `f^k` of the pocket disk, in base coordinates.
    pub support: BBox,
    /// Box around the pocket disk at `z₀`.
    pub seed_box: BBox,
}

/// `d_n` and the distances it is built from.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct GapBound {
    pub value: f64,
    pub z_minus: Vec2,
    pub z_plus: Vec2,
    pub pair: f64,
    pub minus_to_disks: f64,
    pub plus_to_disks: f64,
}

/// Per-stage bookkeeping.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct StageRecord {
    pub stage: usize,
    pub gap: GapBound,
    pub eps_plus: f64,
    pub eps_minus: f64,
    /// Inflated sampled annulus diameters for `+n` and `-n`.
    pub annulus_plus: f64,
    pub annulus_minus: f64,
    /// Sampled `sup |f_n - f_{n-1}|` off the disks.
    pub perturbation: f64,
}

/// Result of pulling a point back to base coordinates.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Preimage {
    Regular(Vec2),
    /// The point lies in the closed disk `Σ_k`.
    Collapsed(i64),
}

/// Stage-`n` state: disks, pockets, gap bounds and evaluable `f_n`, `φ_n`.
#[derive(Debug, Clone)]
pub struct BlowupState {
    base: TorusLift,
    chart: RadialChart,
    cfg: BlowupConfig,
    pockets: Vec<[Pocket; 2]>,
    disks: Vec<DiskRecord>,
    stages: Vec<StageRecord>,
}

fn circle_angles(m: usize) -> impl Iterator<Item = f64> {
    (0..m).map(move |i| std::f64::consts::TAU * i as f64 / m as f64)
}

fn sample_diameter(pts: &[Vec2]) -> f64 {
    let mut d = 0.0f64;
    for i in 0..pts.len() {
        for j in i + 1..pts.len() {
            d = d.max(torus_dist(pts[i], pts[j]));
        }
    }
    d
}

impl BlowupState {
    /// Stage 0: the central disk `Σ₀` of radius `ε₀·δ₀`.
    pub fn initial(f: TorusLift, z0: Vec2, cfg: BlowupConfig) -> Result<Self> {
        if !(cfg.eps0 > 0.0 && cfg.eps0 < 1.0) {
            return Err(Error::InvalidParameter(format!("ε₀ = {} outside (0, 1)", cfg.eps0)));
        }
        if cfg.samples < 8 || cfg.inflation < 1.0 {
            return Err(Error::InvalidParameter("need ≥ 8 samples and inflation ≥ 1".into()));
        }
        let chart = RadialChart::new(z0, cfg.delta0)?;
        let ring = circle_angles(cfg.samples)
            .map(|t| chart.from_unit(Vec2::from_polar(cfg.eps0, t)))
            .collect();
        let disks = vec![DiskRecord::new(0, 0, z0, ring)];
        Ok(BlowupState { base: f, chart, cfg, pockets: Vec::new(), disks, stages: Vec::new() })
    }

    pub fn stage(&self) -> usize {
        self.pockets.len()
    }

    pub fn chart(&self) -> RadialChart {
        self.chart
    }

    pub fn config(&self) -> BlowupConfig {
        self.cfg
    }

    pub fn base(&self) -> &TorusLift {
        &self.base
    }

    pub fn disks(&self) -> &[DiskRecord] {
        &self.disks
    }

    pub fn disk(&self, k: i64) -> Option<&DiskRecord> {
        self.disks.iter().find(|d| d.index == k)
    }

    pub fn stage_records(&self) -> &[StageRecord] {
        &self.stages
    }

    pub fn pockets(&self) -> impl Iterator<Item = &Pocket> {
        self.pockets.iter().flatten()
    }

    /// `Σ_{n>N} d_n ≤ (1/4)^{N+2}/3`.
    pub fn tail_bound(&self) -> f64 {
        0.25f64.powi(self.stage() as i32 + 2) / 3.0
    }

    /// `f^k(p)` in base coordinates.
    pub fn iterate(&self, mut p: Vec2, k: i64) -> Vec2 {
        for _ in 0..k.unsigned_abs() {
            p = if k > 0 { self.base.eval(p) } else { self.base.eval_inv(p) };
        }
        p
    }

    pub fn orbit_point(&self, k: i64) -> Vec2 {
        self.iterate(self.chart.center, k)
    }

    fn pocket_forward(&self, pk: &Pocket, x: Vec2) -> Option<Vec2> {
        if !pk.support.contains_torus(x) {
            return Some(x);
        }
        let u = self.iterate(x, -pk.index);
        let r = self.chart.to_unit(u).norm();
        if r >= pk.profile.rho {
            return Some(x);
        }
        if r == 0.0 {
            return None;
        }
        let u2 = u + self.chart.radial_shift(u, |r| pk.profile.forward(r));
        Some(x + (self.iterate(u2, pk.index) - self.iterate(u, pk.index)))
    }

    fn pocket_backward(&self, pk: &Pocket, x: Vec2) -> Preimage {
        if !pk.support.contains_torus(x) {
            return Preimage::Regular(x);
        }
        let u = self.iterate(x, -pk.index);
        let r = self.chart.to_unit(u).norm();
        if r >= pk.profile.rho {
            return Preimage::Regular(x);
        }
        if r <= pk.profile.rho_prime {
            return Preimage::Collapsed(pk.index);
        }
        let u2 = u + self.chart.radial_shift(u, |r| pk.profile.backward(r));
        Preimage::Regular(x + (self.iterate(u2, pk.index) - self.iterate(u, pk.index)))
    }

    /// `ψ_m(p)` for `m ≤ stage`; `None` at a blown-up orbit point.
    pub fn psi(&self, mut p: Vec2, m: usize) -> Option<Vec2> {
        for pair in self.pockets[..m].iter().rev() {
            for pk in pair {
                p = self.pocket_forward(pk, p)?;
            }
        }
        let r = self.chart.to_unit(p).norm();
        if r == 0.0 {
            return None;
        }
        if r < 1.0 {
            let e0 = self.cfg.eps0;
            p += self.chart.radial_shift(p, |r| (r + e0) / (1.0 + r * e0));
        }
        Some(p)
    }

    /// `φ_m(x)` for `m ≤ stage`, reporting which disk swallowed `x` if any.
    pub fn phi(&self, mut x: Vec2, m: usize) -> Preimage {
        let r = self.chart.to_unit(x).norm();
        let e0 = self.cfg.eps0;
        if r <= e0 {
            return Preimage::Collapsed(0);
        }
        if r < 1.0 {
            x += self.chart.radial_shift(x, |s| (s - e0) / (1.0 - s * e0));
        }
        for pair in &self.pockets[..m] {
            for pk in pair.iter().rev() {
                match self.pocket_backward(pk, x) {
                    Preimage::Regular(p) => x = p,
                    c => return c,
                }
            }
        }
        Preimage::Regular(x)
    }

    /// Collapse map `φ_N`, sending `Σ_k` to `f^k(z₀)`.
    pub fn collapse(&self, x: Vec2) -> Vec2 {
        match self.phi(x, self.stage()) {
            Preimage::Regular(p) => p,
            Preimage::Collapsed(k) => self.orbit_point(k),
        }
    }

    /// `f_m(x)` off the disks of stage `m`.
    pub fn eval_stage(&self, x: Vec2, m: usize) -> Option<Vec2> {
        match self.phi(x, m) {
            Preimage::Regular(p) => self.psi(self.base.eval(p), m),
            Preimage::Collapsed(_) => None,
        }
    }

    pub fn eval_stage_inv(&self, x: Vec2, m: usize) -> Option<Vec2> {
        match self.phi(x, m) {
            Preimage::Regular(p) => self.psi(self.base.eval_inv(p), m),
            Preimage::Collapsed(_) => None,
        }
    }

    /// Point of `Σ_k` (closed) at unit radius `t·ρ'_k` and angle `θ`, `t ∈ [0, 1]`.
    pub fn disk_point(&self, k: i64, t: f64, theta: f64) -> Option<Vec2> {
        let m = k.unsigned_abs() as usize;
        if k == 0 {
            return Some(self.chart.from_unit(Vec2::from_polar(t * self.cfg.eps0, theta)));
        }
        let pk = self.pockets.get(m - 1)?.iter().find(|p| p.index == k)?;
        let p = self.iterate(self.chart.from_unit(Vec2::from_polar(t * pk.profile.rho_prime, theta)), k);
        self.psi(p, m - 1)
    }

    /// Image under `f_N` of the boundary point of `Σ_k` at angle `θ`, taken as the limit
    /// from base points at unit radius `t` around `f^k(z₀)`.
    pub fn boundary_image(&self, k: i64, theta: f64, t: f64) -> Option<Vec2> {
        let p = self.iterate(self.chart.from_unit(Vec2::from_polar(t, theta)), k + 1);
        self.psi(p, self.stage())
    }

    /// `d_n` for `1 ≤ n ≤ stage + 1`, measured in stage-`(n-1)` coordinates.
    pub fn gap_bound(&self, n: usize) -> Result<GapBound> {
        if n == 0 || n > self.stage() + 1 {
            return Err(Error::InvalidParameter(format!("gap bound index {n} outside 1..={}", self.stage() + 1)));
        }
        let abort = |reason: String| Error::StageAborted { stage: n, reason };
        let m = n - 1;
        let z_plus = self.psi(self.orbit_point(n as i64), m).ok_or_else(|| abort("z₊ is singular".into()))?;
        let z_minus = self.psi(self.orbit_point(-(n as i64)), m).ok_or_else(|| abort("z₋ is singular".into()))?;
        let to_disks = |z: Vec2| {
            self.disks
                .iter()
                .filter(|d| d.stage <= m)
                .map(|d| d.distance(z))
                .fold(f64::INFINITY, f64::min)
        };
        let pair = torus_dist(z_minus, z_plus);
        let (dm, dp) = (to_disks(z_minus), to_disks(z_plus));
        let least = pair.min(dm).min(dp);
        if least <= self.cfg.floor {
            return Err(abort(format!("orbit point within {least:e} of the existing disks")));
        }
        let value = 0.25 * 0.25f64.powi(n as i32 + 1).min(least);
        Ok(GapBound { value, z_minus, z_plus, pair, minus_to_disks: dm, plus_to_disks: dp })
    }

    /// Pocket for index `k` at unit radius `rho`, with its inflated annulus diameter,
    /// or `None` when it violates a support constraint.
    fn try_pocket(&self, k: i64, rho: f64, others: &[Pocket]) -> Option<(Pocket, f64)> {
        let profile = PocketProfile::from_rho(rho, self.cfg.eps0).ok()?;
        let m = k.unsigned_abs() as usize - 1;
        let center = self.orbit_point(k);
        let mut outer = Vec::with_capacity(self.cfg.samples + 1);
        for t in circle_angles(self.cfg.samples) {
            outer.push(nearest_rep(self.iterate(self.chart.from_unit(Vec2::from_polar(rho, t)), k), center));
        }
        outer.push(center);
        let support = BBox::of_points(&outer).scale(self.cfg.inflation).inflate(1e-12);
        let reach = rho * self.cfg.delta0 * self.cfg.inflation;
        let seed_box = BBox { lo: self.chart.center, hi: self.chart.center }.inflate(reach);
        if support.contains_torus(self.chart.center) {
            return None;
        }
        let n = k.abs();
        if (-n..=n).any(|j| j != k && support.contains_torus(self.orbit_point(j))) {
            return None;
        }
        for o in self.pockets().chain(others) {
            if support.overlaps_torus(&o.support) || seed_box.overlaps_torus(&o.support) {
                return None;
            }
        }
        let mut ring = Vec::with_capacity(self.cfg.samples);
        for &p in &outer[..self.cfg.samples] {
            ring.push(self.psi(p, m)?);
        }
        let diam = self.cfg.inflation * sample_diameter(&ring);
        Some((Pocket { index: k, profile, support, seed_box }, diam))
    }

    fn choose_pocket(&self, k: i64, bound: f64, others: &[Pocket]) -> Result<(Pocket, f64)> {
        let ok = |rho: f64| self.try_pocket(k, rho, others).filter(|(_, d)| *d <= bound);
        let mut rho = 0.5;
        let mut best = None;
        let mut smallest = f64::INFINITY;
        for _ in 0..60 {
            if let Some(hit) = ok(rho) {
                best = Some(hit);
                break;
            }
            if let Some((_, d)) = self.try_pocket(k, rho, others) {
                smallest = smallest.min(d);
            }
            rho *= 0.5;
        }
        let stage = k.unsigned_abs() as usize;
        let mut best = best.ok_or_else(|| Error::StageAborted {
            stage,
            reason: format!("no ε for index {k} meets diameter bound {bound:e} (smallest measured {smallest:e})"),
        })?;
        let (mut lo, mut hi) = (rho, (2.0 * rho).min(0.999));
        for _ in 0..24 {
            let mid = 0.5 * (lo + hi);
            match ok(mid) {
                Some(hit) => {
                    best = hit;
                    lo = mid;
                }
                None => hi = mid,
            }
        }
        Ok(best)
    }

    /// Sampled `sup |f_n - f_{n-1}|`: uniform points plus points near the new
    /// punctures and their `f_{n-1}`-preimages, where the two maps can differ.
    fn perturbation(&self, n: usize, gap: &GapBound) -> f64 {
        let mut rng = ChaCha8Rng::seed_from_u64(0x5eed ^ n as u64);
        let mut centers = vec![gap.z_plus, gap.z_minus];
        centers.extend([gap.z_plus, gap.z_minus].iter().filter_map(|&z| self.eval_stage_inv(z, n - 1)));
        let reach = 2.0 * gap.value;
        let mut pts: Vec<Vec2> = (0..256).map(|_| Vec2::new(rng.gen(), rng.gen())).collect();
        for c in centers {
            pts.extend((0..128).map(|_| c + Vec2::new(rng.gen_range(-reach..reach), rng.gen_range(-reach..reach))));
        }
        let mut sup = 0.0f64;
        for x in pts {
            if let (Some(a), Some(b)) = (self.eval_stage(x, n), self.eval_stage(x, n - 1)) {
                sup = sup.max(torus_dist(a, b));
            }
        }
        sup
    }
}

/// Adds stage `n = stage + 1`: two pockets and the disks `Σ_{±n}`.
pub fn blowup_stage(mut state: BlowupState) -> Result<BlowupState> {
    let n = state.stage() + 1;
    let gap = state.gap_bound(n)?;
    let (plus, dp) = state.choose_pocket(n as i64, gap.value, &[])?;
    let (minus, dm) = state.choose_pocket(-(n as i64), gap.value, &[plus])?;
    let rings: Vec<DiskRecord> = [(plus, gap.z_plus), (minus, gap.z_minus)]
        .iter()
        .map(|(pk, marker)| {
            let raw = circle_angles(state.cfg.samples)
                .map(|t| {
                    let p = state.iterate(state.chart.from_unit(Vec2::from_polar(pk.profile.rho_prime, t)), pk.index);
                    state.psi(p, n - 1).expect("boundary avoids earlier punctures")
                })
                .collect();
            DiskRecord::new(pk.index, n, *marker, raw)
        })
        .collect();
    for d in &rings {
        if !is_simple_closed(&d.boundary) {
            return Err(Error::StageAborted { stage: n, reason: format!("boundary of Σ_{} not simple", d.index) });
        }
        if let Some(o) = state.disks.iter().chain(rings.iter().filter(|r| r.index != d.index)).find(|o| !d.disjoint_from(o)) {
            return Err(Error::StageAborted { stage: n, reason: format!("Σ_{} meets Σ_{}", d.index, o.index) });
        }
    }
    state.pockets.push([plus, minus]);
    state.disks.extend(rings);
    let perturbation = state.perturbation(n, &gap);
    state.stages.push(StageRecord {
        stage: n,
        gap,
        eps_plus: plus.profile.eps,
        eps_minus: minus.profile.eps,
        annulus_plus: dp,
        annulus_minus: dm,
        perturbation,
    });
    Ok(state)
}

/// Stage 0 followed by stages `1..=stages`.
pub fn run_blowup(f: TorusLift, z0: Vec2, stages: usize, cfg: BlowupConfig) -> Result<BlowupState> {
    let mut state = BlowupState::initial(f, z0, cfg)?;
    for _ in 0..stages {
        state = blowup_stage(state)?;
    }
    Ok(state)
}

/// `f_N` as a plane lift. Points inside `Σ_k` go to the marker of `Σ_{k±1}` (the
/// disk interiors carry no dynamics in this realization).
#[derive(Debug, Clone)]
pub struct BlownUpMap {
    pub state: Arc<BlowupState>,
}

impl BlownUpMap {
    fn step(&self, x: Vec2, dir: i64) -> Vec2 {
        let s = &self.state;
        match s.phi(x, s.stage()) {
            Preimage::Regular(p) => {
                let q = if dir > 0 { s.base.eval(p) } else { s.base.eval_inv(p) };
                s.psi(q, s.stage()).unwrap_or(q)
            }
            Preimage::Collapsed(k) => {
                let next = k + dir;
                let target = match s.disk(next) {
                    Some(d) => d.marker,
                    None => s.psi(s.orbit_point(next), s.stage()).unwrap_or_else(|| s.orbit_point(next)),
                };
                // keep the lift: move by the displacement of the collapsed orbit point
                let anchor = s.orbit_point(k);
                let shift = s.orbit_point(next) - anchor;
                x + shift + torus_delta(x + shift, target)
            }
        }
    }
}

impl TorusMap for BlownUpMap {
    fn eval(&self, z: Vec2) -> Vec2 {
        self.step(z, 1)
    }
    fn eval_inv(&self, z: Vec2) -> Vec2 {
        self.step(z, -1)
    }
    fn label(&self) -> String {
        format!("blowup(N={}, {})", self.state.stage(), self.state.base.label())
    }
}

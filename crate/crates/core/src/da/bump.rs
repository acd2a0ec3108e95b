//! Plateau, logarithmic decay, plateau bump profiles and the smooth partition of unity.

use serde::Serialize;

use crate::error::{Error, Result};

/// Decay windows may start no earlier than `t = e^{-LOG_LIMIT}`.
pub const LOG_LIMIT: f64 = 27.631_021_115_928_547; // ln(1e12)

/// Cubic smoothstep `3s² − 2s³` on `[0, 1]`, clamped outside.
pub fn smoothstep(s: f64) -> f64 {
    let s = s.clamp(0.0, 1.0);
    s * s * (3.0 - 2.0 * s)
}

fn smoothstep_prime(s: f64) -> f64 {
    if (0.0..=1.0).contains(&s) {
        6.0 * s * (1.0 - s)
    } else {
        0.0
    }
}

/// `∫₀ˢ smoothstep`.
fn smoothstep_integral(s: f64) -> f64 {
    let s = s.clamp(0.0, 1.0);
    s * s * s - 0.5 * s * s * s * s
}

/// Parameters of the bump pair.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct BumpSpec {
    /// Cap value `v > 1`.
    pub v: f64,
    /// Target value, the stable eigenvalue.
    pub kappa: f64,
    /// Floor `ρ` with `1 > ρ > κ`.
    pub rho_floor: f64,
    /// Bound on `|t·λ'(t)|`.
    pub delta: f64,
    /// Cap of the second bump, `1 − δ ≥ v̄ > ρ`.
    pub v_bar: f64,
    /// Width in `ln t` of the smoothstep corners.
    pub ramp: f64,
    /// Unstable eigenvalue, bounding `v` from above.
    pub lambda_u: f64,
}

impl BumpSpec {
    /// Defaults used by the type I pipeline for `A = [[1,1],[1,2]]`.
    pub fn standard(lambda_u: f64, lambda_s: f64) -> Self {
        BumpSpec { v: 1.1, kappa: lambda_s, rho_floor: 0.5, delta: 0.3, v_bar: 0.6, ramp: 0.1, lambda_u }
    }

    fn validate(&self) -> Result<()> {
        let bad = |m: String| Err(Error::InvalidParameter(m));
        let s = self;
        if !(s.lambda_u > s.v && s.v > 1.0) {
            return bad(format!("need λ_u > v > 1, got λ_u = {}, v = {}", s.lambda_u, s.v));
        }
        if !(1.0 > s.rho_floor && s.rho_floor > s.kappa && s.kappa > 0.0) {
            return bad(format!("need 1 > ρ > κ > 0, got ρ = {}, κ = {}", s.rho_floor, s.kappa));
        }
        if !(s.delta > 0.0 && 1.0 - s.delta > s.rho_floor) {
            return bad(format!("need δ > 0 and 1 − δ > ρ, got δ = {}", s.delta));
        }
        if s.delta >= s.kappa {
            return bad(format!("need δ < κ so the vertical derivative stays positive, got δ = {}", s.delta));
        }
        if !(1.0 - s.delta >= s.v_bar && s.v_bar > s.rho_floor) {
            return bad(format!("need 1 − δ ≥ v̄ > ρ, got v̄ = {}", s.v_bar));
        }
        if !(s.ramp > 0.0) {
            return bad(format!("ramp width must be positive, got {}", s.ramp));
        }
        Ok(())
    }
}

/// `λ(t)`: equal to `top` for `t ≤ e^{u₀}`, then `t·λ'(t) = −δ·w(ln t)` with `w` a
/// smoothstep-cornered plateau of height 1 on `[u₀, u₁]`, then equal to `κ`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Bump {
    pub top: f64,
    pub kappa: f64,
    pub delta: f64,
    pub ramp: f64,
    /// Start of the decay window in `u = ln t`.
    pub u0: f64,
    /// End of the decay window, `u₁ ≤ 0`.
    pub u1: f64,
}

impl Bump {
    fn new(top: f64, kappa: f64, delta: f64, ramp: f64) -> Result<Self> {
        let need = (top - kappa) / delta + ramp;
        if need > LOG_LIMIT {
            return Err(Error::BumpInfeasible { need, limit: LOG_LIMIT });
        }
        if (top - kappa) / delta < ramp {
            return Err(Error::InvalidParameter(format!(
                "drop {} too small for ramp {} at slope δ = {}",
                top - kappa,
                ramp,
                delta
            )));
        }
        Ok(Bump { top, kappa, delta, ramp, u0: -need, u1: 0.0 })
    }

    /// Same start of decay, stopping at `kappa ∈ [κ, top)`: agrees with `self` until
    /// `self` falls below `kappa`.
    pub fn with_target(&self, kappa: f64) -> Result<Self> {
        if !(kappa >= self.kappa && kappa < self.top) {
            return Err(Error::InvalidParameter(format!(
                "target {kappa} outside [{}, {})",
                self.kappa, self.top
            )));
        }
        let len = (self.top - kappa) / self.delta + self.ramp;
        if len < 2.0 * self.ramp {
            return Err(Error::InvalidParameter(format!("target {kappa} leaves no room for both ramps")));
        }
        Ok(Bump { kappa, u1: self.u0 + len, ..*self })
    }

    /// Decay weight `w(u) ∈ [0, 1]`.
    fn weight(&self, u: f64) -> f64 {
        let m = self.ramp;
        if u <= self.u0 || u >= self.u1 {
            0.0
        } else if u < self.u0 + m {
            smoothstep((u - self.u0) / m)
        } else if u < self.u1 - m {
            1.0
        } else {
            1.0 - smoothstep((u - self.u1 + m) / m)
        }
    }

    /// `∫_{u₀}^{u} w`.
    fn accumulated(&self, u: f64) -> f64 {
        let m = self.ramp;
        let plateau = self.u1 - self.u0 - 2.0 * m;
        if u <= self.u0 {
            0.0
        } else if u < self.u0 + m {
            m * smoothstep_integral((u - self.u0) / m)
        } else if u < self.u1 - m {
            0.5 * m + (u - self.u0 - m)
        } else if u < self.u1 {
            let s = (u - self.u1 + m) / m;
            0.5 * m + plateau + m * (s - smoothstep_integral(s))
        } else {
            plateau + m
        }
    }

    /// `λ(t)`, equal to `top` for `t ≤ 0`.
    pub fn eval(&self, t: f64) -> f64 {
        if t <= 0.0 {
            return self.top;
        }
        let u = t.ln();
        if u >= self.u1 {
            return self.kappa;
        }
        self.top - self.delta * self.accumulated(u)
    }

    /// `t·λ'(t)`.
    pub fn t_deriv(&self, t: f64) -> f64 {
        if t <= 0.0 {
            return 0.0;
        }
        -self.delta * self.weight(t.ln())
    }

    /// `λ'(t)`.
    pub fn deriv(&self, t: f64) -> f64 {
        if t <= 0.0 {
            0.0
        } else {
            self.t_deriv(t) / t
        }
    }

    /// `η(t) = t·λ(t)`.
    pub fn eta(&self, t: f64) -> f64 {
        t * self.eval(t)
    }

    /// `η'(t) = λ(t) + t·λ'(t)`.
    pub fn eta_prime(&self, t: f64) -> f64 {
        self.eval(t) + self.t_deriv(t)
    }

    /// The unique `t > 0` with `λ(t) = level`, for `κ < level < top`.
    pub fn level_point(&self, level: f64) -> Option<f64> {
        if !(level > self.kappa && level < self.top) {
            return None;
        }
        let (mut lo, mut hi) = (self.u0, self.u1);
        for _ in 0..200 {
            let mid = 0.5 * (lo + hi);
            if self.top - self.delta * self.accumulated(mid) > level {
                lo = mid;
            } else {
                hi = mid;
            }
        }
        Some((0.5 * (lo + hi)).exp())
    }
}

/// The two bumps `λ` (cap `v`) and `λ̄` (cap `v̄`) sharing one decay line, with `t₀`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct BumpPair {
    pub spec: BumpSpec,
    pub lambda: Bump,
    pub lambda_bar: Bump,
    /// `λ(t₀) = ρ`; both bumps agree for `t ≥ t₀`.
    pub t0: f64,
}

pub fn build_bump(spec: BumpSpec) -> Result<BumpPair> {
    spec.validate()?;
    let lambda = Bump::new(spec.v, spec.kappa, spec.delta, spec.ramp)?;
    let lambda_bar = Bump::new(spec.v_bar, spec.kappa, spec.delta, spec.ramp)?;
    let t0 = lambda.level_point(spec.rho_floor).expect("ρ lies strictly between κ and v");
    // the second bump must have joined the shared line before t₀
    if lambda_bar.u0 + spec.ramp > t0.ln() {
        return Err(Error::InvalidParameter(format!(
            "v̄ = {} joins the decay line after t₀ = {t0}",
            spec.v_bar
        )));
    }
    Ok(BumpPair { spec, lambda, lambda_bar, t0 })
}

/// Even partition `χ₀ + χ₁ + χ₂ ≡ 1` from cubic smoothsteps, `|χᵢ'| ≤ 3/2`.
#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize)]
pub struct Partition;

impl Partition {
    pub fn chi(&self, i: usize, t: f64) -> f64 {
        let a = t.abs();
        let c0 = 1.0 - smoothstep(a);
        let c2 = smoothstep(a - 1.0);
        match i {
            0 => c0,
            2 => c2,
            _ => 1.0 - c0 - c2,
        }
    }

    pub fn chi_prime(&self, i: usize, t: f64) -> f64 {
        let (a, sgn) = (t.abs(), t.signum());
        let d0 = -smoothstep_prime(a) * sgn;
        let d2 = smoothstep_prime(a - 1.0) * sgn;
        match i {
            0 => d0,
            2 => d2,
            _ => -d0 - d2,
        }
    }
}

pub fn build_partition() -> Partition {
    Partition
}

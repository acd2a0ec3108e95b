//! Radial auxiliary maps on the unit disk and the linear chart onto a torus disk.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::geom::{torus_delta, Vec2};

fn check_eps(eps: f64) -> Result<()> {
    if eps > 0.0 && eps < 1.0 {
        Ok(())
    } else {
        Err(Error::InvalidParameter(format!("ε = {eps} outside (0, 1)")))
    }
}

fn mobius(r: f64, e: f64) -> f64 {
    (r + e) / (1.0 + r * e)
}

fn mobius_inv(s: f64, e: f64) -> f64 {
    (s - e) / (1.0 - s * e)
}

/// `g_ε(r, θ) = ((r + ε)/(1 + rε), θ)`: pushes the punctured unit disk off the disk of radius ε.
pub fn g_eval(r: f64, theta: f64, eps: f64) -> Result<(f64, f64)> {
    check_eps(eps)?;
    if !(0.0..=1.0).contains(&r) {
        return Err(Error::InvalidParameter(format!("radius {r} outside [0, 1]")));
    }
    Ok((mobius(r, eps), theta))
}

/// Radial inverse of [`g_eval`] on `[ε, 1]`.
pub fn g_inv(s: f64, eps: f64) -> Result<f64> {
    check_eps(eps)?;
    if !(eps..=1.0).contains(&s) {
        return Err(Error::InvalidParameter(format!("radius {s} outside [{eps}, 1]")));
    }
    Ok(mobius_inv(s, eps))
}

/// Midpoint `ε' = (ε + ε₀)/2`.
pub fn eps_prime(eps: f64, eps0: f64) -> f64 {
    0.5 * (eps + eps0)
}

fn check_q(eps: f64, eps0: f64) -> Result<()> {
    check_eps(eps)?;
    check_eps(eps0)?;
    if eps0 >= eps {
        return Err(Error::InvalidParameter(format!("need ε₀ = {eps0} < ε = {eps}")));
    }
    Ok(())
}

/// Annulus map `[ε₀, ε] → [ε', ε]` rescaled from `g`: outer circle fixed, inner circle sent to `ε'`.
pub fn q_eval(r: f64, theta: f64, eps: f64, eps0: f64) -> Result<(f64, f64)> {
    check_q(eps, eps0)?;
    if !(eps0..=eps).contains(&r) {
        return Err(Error::InvalidParameter(format!("radius {r} outside [{eps0}, {eps}]")));
    }
    let t = mobius_inv(r / eps, eps0 / eps);
    Ok((eps * mobius(t, eps_prime(eps, eps0) / eps), theta))
}

/// Radial inverse of [`q_eval`] on `[ε', ε]`.
pub fn q_inv(s: f64, eps: f64, eps0: f64) -> Result<f64> {
    check_q(eps, eps0)?;
    let ep = eps_prime(eps, eps0);
    if !(ep..=eps).contains(&s) {
        return Err(Error::InvalidParameter(format!("radius {s} outside [{ep}, {eps}]")));
    }
    let t = mobius_inv(s / eps, ep / eps);
    Ok(eps * mobius(t, eps0 / eps))
}

/// Linear injection of the closed unit disk onto the torus disk `B(center, δ₀)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RadialChart {
    pub center: Vec2,
    pub delta0: f64,
}

impl RadialChart {
    pub fn new(center: Vec2, delta0: f64) -> Result<Self> {
        if !(delta0 > 0.0 && delta0 <= 0.25) {
            return Err(Error::InvalidParameter(format!("δ₀ = {delta0} outside (0, 1/4]")));
        }
        Ok(RadialChart { center, delta0 })
    }

    /// Unit-disk coordinates of a torus point (radius may exceed 1).
    pub fn to_unit(&self, p: Vec2) -> Vec2 {
        torus_delta(self.center, p) * (1.0 / self.delta0)
    }

    pub fn from_unit(&self, u: Vec2) -> Vec2 {
        self.center + u * self.delta0
    }

    /// Moves `p` along its ray so that its unit radius becomes `map(radius)`; returns
    /// the plane displacement so that lifts stay consistent.
    pub fn radial_shift(&self, p: Vec2, map: impl Fn(f64) -> f64) -> Vec2 {
        let u = self.to_unit(p);
        let r = u.norm();
        u * ((map(r) - r) / r * self.delta0)
    }
}

/// Composite radial profile of one orbit pocket in base coordinates: radius `ρ ≤ ρ_out`
/// goes to `g_{ε₀}⁻¹ ∘ q_ε ∘ g_{ε₀}(ρ)`, so the puncture opens to radius `ρ'`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct PocketProfile {
    pub eps: f64,
    pub eps0: f64,
    /// Outer unit radius `g_{ε₀}⁻¹(ε)`.
    pub rho: f64,
    /// Opened unit radius `g_{ε₀}⁻¹(ε')`.
    pub rho_prime: f64,
}

impl PocketProfile {
    pub fn from_rho(rho: f64, eps0: f64) -> Result<Self> {
        if !(rho > 0.0 && rho < 1.0) {
            return Err(Error::InvalidParameter(format!("pocket radius {rho} outside (0, 1)")));
        }
        let eps = mobius(rho, eps0);
        let rho_prime = mobius_inv(eps_prime(eps, eps0), eps0);
        Ok(PocketProfile { eps, eps0, rho, rho_prime })
    }

    pub fn forward(&self, r: f64) -> f64 {
        if r >= self.rho {
            return r;
        }
        let (s, _) = q_eval(mobius(r, self.eps0).clamp(self.eps0, self.eps), 0.0, self.eps, self.eps0)
            .expect("pocket parameters validated");
        mobius_inv(s, self.eps0).clamp(self.rho_prime, self.rho)
    }

    /// Inverse on `(ρ', ρ)`; radii at or below `ρ'` collapse to 0.
    pub fn backward(&self, r: f64) -> f64 {
        if r >= self.rho {
            return r;
        }
        if r <= self.rho_prime {
            return 0.0;
        }
        let s = mobius(r, self.eps0).clamp(eps_prime(self.eps, self.eps0), self.eps);
        let t = q_inv(s, self.eps, self.eps0).expect("pocket parameters validated");
        mobius_inv(t, self.eps0).clamp(0.0, self.rho)
    }
}

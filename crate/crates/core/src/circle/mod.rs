//! Circle homeomorphisms: lifts, rotation numbers, Denjoy examples and Cantor sets.

mod cantor;
mod denjoy;

use std::fmt;
use std::sync::Arc;

pub use cantor::{CantorSetSpec, Gap, Membership, Side, DEFAULT_TOL};
pub use denjoy::{build_denjoy, build_quadratic_gap_cantor, Denjoy, GapSchedule, QuadraticGapParams};

use crate::error::{Error, Result};
use crate::geom::{wrap01, KahanSum};

/// Degree-one lift of an orientation-preserving circle homeomorphism.
pub trait CircleMap: Send + Sync {
    fn eval(&self, x: f64) -> f64;
    fn eval_inv(&self, x: f64) -> f64;
    fn label(&self) -> String;

    /// `F(x) - x`, overridable where a closed form avoids cancellation.
    fn displacement(&self, x: f64) -> f64 {
        self.eval(x) - x
    }
}

pub type CircleLift = Arc<dyn CircleMap>;

impl fmt::Debug for dyn CircleMap {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "CircleMap({})", self.label())
    }
}

/// Rigid rotation `x ↦ x + θ`.
#[derive(Debug, Clone, Copy)]
pub struct Rotation(pub f64);

impl CircleMap for Rotation {
    fn eval(&self, x: f64) -> f64 {
        x + self.0
    }
    fn eval_inv(&self, x: f64) -> f64 {
        x - self.0
    }
    fn label(&self) -> String {
        format!("rotation({})", self.0)
    }
    fn displacement(&self, _x: f64) -> f64 {
        self.0
    }
}

pub fn rotation(theta: f64) -> CircleLift {
    Arc::new(Rotation(theta))
}

/// Result of iterating a circle lift.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RotationNumber {
    pub value: f64,
    pub horizon: u64,
    /// `|estimate(n) - estimate(n/2)|`
    pub cauchy_gap: f64,
}

/// `(Fⁿ(x) - x)/n`, accumulated from per-step displacements with `x` kept in `[0,1)`.
pub fn rotation_number_estimate(f: &dyn CircleMap, x: f64, n: u64) -> Result<RotationNumber> {
    if n == 0 {
        return Err(Error::InvalidParameter("horizon n must be at least 1".into()));
    }
    let half = (n / 2).max(1);
    let mut sum = KahanSum::default();
    let mut at_half = 0.0;
    let (mut dmin, mut dmax) = (f64::INFINITY, f64::NEG_INFINITY);
    let mut u = wrap01(x);
    for i in 1..=n {
        let d = f.displacement(u);
        dmin = dmin.min(d);
        dmax = dmax.max(d);
        // a monotone degree-one lift has displacement oscillation below 1
        if dmax - dmin >= 1.0 || !d.is_finite() {
            return Err(Error::NotMonotone { x: u });
        }
        sum.add(d);
        u = wrap01(u + d);
        if i == half {
            at_half = sum.value() / half as f64;
        }
    }
    let value = sum.value() / n as f64;
    Ok(RotationNumber { value, horizon: n, cauchy_gap: (value - at_half).abs() })
}

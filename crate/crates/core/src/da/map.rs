//! The perturbed automorphism `g`: a repeller at the origin flanked by two saddles.

use serde::Serialize;

use super::bump::{build_bump, build_partition, BumpPair, BumpSpec, Partition};
use crate::error::{Error, Result};
use crate::geom::Vec2;
use crate::torus::IntegerMatrix;

/// Lower-triangular derivative in the eigenbasis: `[[λ_u, 0], [c, N]]`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct DaDerivative {
    pub c: f64,
    pub n: f64,
}

/// `g = A` away from the integer points; near each, in local eigen-coordinates
/// `w = B(z − n)/s`, `G(x, y) = (λ_u·x, L(x, y)·y)` on `|x| < 2, |y| < 1`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct DaMap {
    pub a: IntegerMatrix,
    pub a_inv: IntegerMatrix,
    pub lambda_u: f64,
    pub lambda_s: f64,
    /// Unit unstable and stable eigenvectors (orthonormal since `A` is symmetric).
    pub e1: Vec2,
    pub e2: Vec2,
    /// Unstable eigenvector normalized to first coordinate 1.
    pub v_u: Vec2,
    /// Support scale `s`.
    pub scale: f64,
    /// `None` for the unperturbed automorphism.
    pub bumps: Option<BumpPair>,
    pub partition: Partition,
    /// `λ(r₀) = 1`; the saddles sit at local `(0, ±r₀)`.
    pub r0: f64,
}

/// Eigen data of a symmetric hyperbolic matrix in SL(2, Z).
fn eigen(a: &IntegerMatrix) -> Result<(f64, f64, Vec2, Vec2)> {
    if a.det() != 1 {
        return Err(Error::NotUnimodular { det: a.det() });
    }
    if a.trace().abs() <= 2 {
        return Err(Error::NotHyperbolic { trace: a.trace() });
    }
    if a.b != a.c {
        return Err(Error::InvalidParameter(format!("matrix {a} is not symmetric")));
    }
    let tr = a.trace() as f64;
    let disc = (tr * tr - 4.0).sqrt();
    let (lu, ls) = if tr > 0.0 { (0.5 * (tr + disc), 0.5 * (tr - disc)) } else { (0.5 * (tr - disc), 0.5 * (tr + disc)) };
    if lu <= 0.0 {
        return Err(Error::InvalidParameter("negative eigenvalues are not supported".into()));
    }
    // (A − λ_u) v = 0 with v = (b, λ_u − a)
    let v = Vec2::new(a.b as f64, lu - a.a as f64);
    let e1 = v * (1.0 / v.norm());
    let e1 = if e1.x < 0.0 { -e1 } else { e1 };
    let e2 = Vec2::new(-e1.y, e1.x);
    Ok((lu, ls, e1, e2))
}

impl DaMap {
    pub fn unperturbed(a: IntegerMatrix) -> Result<Self> {
        let (lu, ls, e1, e2) = eigen(&a)?;
        Ok(DaMap {
            a,
            a_inv: a.inverse()?,
            lambda_u: lu,
            lambda_s: ls,
            e1,
            e2,
            v_u: e1 * (1.0 / e1.x),
            scale: 0.0,
            bumps: None,
            partition: build_partition(),
            r0: 0.0,
        })
    }

    /// Eigen data of `A`, for choosing bump parameters.
    pub fn eigenvalues(a: &IntegerMatrix) -> Result<(f64, f64)> {
        eigen(a).map(|(u, s, _, _)| (u, s))
    }

    /// `x`-extent of the support rectangle in the plane, for embedding checks.
    fn support_radius(&self) -> f64 {
        (5.0f64).sqrt() * self.scale
    }

    pub fn local(&self, z: Vec2) -> (Vec2, f64, f64) {
        let n = z.round();
        let d = z - n;
        (n, self.e1.dot(d) / self.scale, self.e2.dot(d) / self.scale)
    }

    fn in_support(x: f64, y: f64) -> bool {
        x.abs() < 2.0 && y.abs() < 1.0
    }

    /// `L(x, y)`, with the bumps evaluated at `|y|`.
    pub fn l_value(&self, x: f64, y: f64) -> f64 {
        let Some(b) = &self.bumps else { return self.lambda_s };
        let p = &self.partition;
        let t = y.abs();
        p.chi(0, x) * b.lambda.eval(t) + p.chi(1, x) * b.lambda_bar.eval(t) + p.chi(2, x) * self.lambda_s
    }

    /// Derivative entries `c(x, y)` and `N(x, y)` in local coordinates.
    pub fn local_derivative(&self, x: f64, y: f64) -> DaDerivative {
        let Some(b) = &self.bumps else { return DaDerivative { c: 0.0, n: self.lambda_s } };
        let p = &self.partition;
        let t = y.abs();
        let (l, lb, ls) = (b.lambda.eval(t), b.lambda_bar.eval(t), self.lambda_s);
        let c = (p.chi_prime(0, x) * l + p.chi_prime(1, x) * lb + p.chi_prime(2, x) * ls) * y;
        // d/dy [λ(|y|)]·y = λ'(|y|)·|y|
        let n = self.l_value(x, y) + p.chi(0, x) * b.lambda.t_deriv(t) + p.chi(1, x) * b.lambda_bar.t_deriv(t);
        DaDerivative { c, n }
    }

    /// Derivative entries at a plane point.
    pub fn derivative(&self, z: Vec2) -> DaDerivative {
        let (_, x, y) = self.local(z);
        if self.bumps.is_none() || !Self::in_support(x, y) {
            return DaDerivative { c: 0.0, n: self.lambda_s };
        }
        self.local_derivative(x, y)
    }

    /// `g(z) − A·z`, supported near the integer points.
    pub fn correction(&self, z: Vec2) -> Vec2 {
        if self.bumps.is_none() {
            return Vec2::new(0.0, 0.0);
        }
        let (_, x, y) = self.local(z);
        if !Self::in_support(x, y) {
            return Vec2::new(0.0, 0.0);
        }
        self.e2 * (self.scale * (self.l_value(x, y) - self.lambda_s) * y)
    }

    pub fn eval(&self, z: Vec2) -> Vec2 {
        self.a.apply(z) + self.correction(z)
    }

    pub fn eval_inv(&self, z: Vec2) -> Vec2 {
        let lin = self.a_inv.apply(z);
        if self.bumps.is_none() {
            return lin;
        }
        let (_, x, y_lin) = self.local(lin);
        if !Self::in_support(x, y_lin) {
            return lin;
        }
        // L(x, y)·y is increasing in y and equals ±λ_s at y = ±1
        let target = self.lambda_s * y_lin;
        let (mut lo, mut hi) = (-1.0f64, 1.0f64);
        let mut y = y_lin;
        for _ in 0..100 {
            let f = self.l_value(x, y) * y - target;
            if f > 0.0 {
                hi = y;
            } else {
                lo = y;
            }
            let slope = self.local_derivative(x, y).n;
            let mut next = y - f / slope;
            if !(next > lo && next < hi) {
                next = 0.5 * (lo + hi);
            }
            if (next - y).abs() <= 1e-16 {
                y = next;
                break;
            }
            y = next;
        }
        lin + self.e2 * (self.scale * (y - y_lin))
    }

    /// Repelling fixed point.
    pub fn repeller(&self) -> Vec2 {
        Vec2::new(0.0, 0.0)
    }

    /// The two saddles `z_{±1}` at local `(0, ±r₀)`.
    pub fn saddles(&self) -> [Vec2; 2] {
        let off = self.e2 * (self.r0 * self.scale);
        [-off, off]
    }
}

/// Perturbs `A` near the origin with the bump pair, rescaled by `scale`.
pub fn build_da_map(a: IntegerMatrix, spec: BumpSpec, scale: f64) -> Result<DaMap> {
    let mut g = DaMap::unperturbed(a)?;
    let bumps = build_bump(spec)?;
    g.scale = scale;
    if !(scale > 0.0 && g.support_radius() < 0.5) {
        return Err(Error::InvalidParameter(format!("support scale {scale} does not embed around the origin")));
    }
    g.r0 = bumps.lambda.level_point(1.0).expect("v > 1 > κ");
    g.bumps = Some(bumps);
    Ok(g)
}

/// `A = [[1, 1], [1, 2]]`, whose unstable eigenvector is `(1, (1 + √5)/2)`.
pub fn standard_matrix() -> IntegerMatrix {
    IntegerMatrix { a: 1, b: 1, c: 1, d: 2 }
}

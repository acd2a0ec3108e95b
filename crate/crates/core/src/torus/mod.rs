//! Plane lifts of torus homeomorphisms and their rotation vectors.

use std::fmt;
use std::sync::Arc;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::circle::CircleLift;
use crate::error::{Error, Result};
use crate::geom::{KahanSum, Vec2};

/// A plane map commuting with integer translations.
pub trait TorusMap: Send + Sync {
    fn eval(&self, z: Vec2) -> Vec2;
    fn eval_inv(&self, z: Vec2) -> Vec2;
    fn label(&self) -> String;

    /// `F(z) - z`; periodic in `z`.
    fn displacement(&self, z: Vec2) -> Vec2 {
        self.eval(z) - z
    }
}

pub type TorusLift = Arc<dyn TorusMap>;

impl fmt::Debug for dyn TorusMap {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "TorusMap({})", self.label())
    }
}

/// `z ↦ z + v`.
#[derive(Debug, Clone, Copy)]
pub struct Translation(pub Vec2);

impl TorusMap for Translation {
    fn eval(&self, z: Vec2) -> Vec2 {
        z + self.0
    }
    fn eval_inv(&self, z: Vec2) -> Vec2 {
        z - self.0
    }
    fn label(&self) -> String {
        format!("translation({}, {})", self.0.x, self.0.y)
    }
    fn displacement(&self, _z: Vec2) -> Vec2 {
        self.0
    }
}

pub fn translation_map(alpha: f64, beta: f64) -> TorusLift {
    Arc::new(Translation(Vec2::new(alpha, beta)))
}

/// `(x, y) ↦ (Φ(x), Ψ(y))`.
#[derive(Debug, Clone)]
pub struct Product {
    pub first: CircleLift,
    pub second: CircleLift,
}

impl TorusMap for Product {
    fn eval(&self, z: Vec2) -> Vec2 {
        Vec2::new(self.first.eval(z.x), self.second.eval(z.y))
    }
    fn eval_inv(&self, z: Vec2) -> Vec2 {
        Vec2::new(self.first.eval_inv(z.x), self.second.eval_inv(z.y))
    }
    fn label(&self) -> String {
        format!("{} x {}", self.first.label(), self.second.label())
    }
    fn displacement(&self, z: Vec2) -> Vec2 {
        Vec2::new(self.first.displacement(z.x), self.second.displacement(z.y))
    }
}

pub fn product_map(first: CircleLift, second: CircleLift) -> TorusLift {
    Arc::new(Product { first, second })
}

/// 2×2 integer matrix `[[a, b], [c, d]]`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct IntegerMatrix {
    pub a: i64,
    pub b: i64,
    pub c: i64,
    pub d: i64,
}

impl IntegerMatrix {
    pub const IDENTITY: IntegerMatrix = IntegerMatrix { a: 1, b: 0, c: 0, d: 1 };

    pub const fn new(a: i64, b: i64, c: i64, d: i64) -> Self {
        IntegerMatrix { a, b, c, d }
    }

    pub fn det(&self) -> i64 {
        self.a * self.d - self.b * self.c
    }

    pub fn trace(&self) -> i64 {
        self.a + self.d
    }

    pub fn is_unimodular(&self) -> bool {
        self.det().abs() == 1
    }

    /// The orientation-preserving case `det = +1`.
    pub fn is_sl2z(&self) -> bool {
        self.det() == 1
    }

    pub fn apply(&self, v: Vec2) -> Vec2 {
        Vec2::new(self.a as f64 * v.x + self.b as f64 * v.y, self.c as f64 * v.x + self.d as f64 * v.y)
    }

    pub fn apply_int(&self, v: (i64, i64)) -> (i64, i64) {
        (self.a * v.0 + self.b * v.1, self.c * v.0 + self.d * v.1)
    }

    pub fn inverse(&self) -> Result<IntegerMatrix> {
        let det = self.det();
        if det.abs() != 1 {
            return Err(Error::NotUnimodular { det });
        }
        Ok(IntegerMatrix::new(self.d * det, -self.b * det, -self.c * det, self.a * det))
    }

    pub fn mul(&self, o: &IntegerMatrix) -> IntegerMatrix {
        IntegerMatrix::new(
            self.a * o.a + self.b * o.c,
            self.a * o.b + self.b * o.d,
            self.c * o.a + self.d * o.c,
            self.c * o.b + self.d * o.d,
        )
    }

    /// An SL(2,Z) matrix whose second column is the primitive vector `(p, q)`.
    pub fn with_second_column(p: i64, q: i64) -> Result<IntegerMatrix> {
        let (g, s, t) = ext_gcd(p, q);
        if g.abs() != 1 {
            return Err(Error::InvalidParameter(format!("({p}, {q}) is not primitive")));
        }
        // s·p + t·q = g = ±1, so a = t·g, c = -s·g gives a·q - p·c = g² = 1
        Ok(IntegerMatrix::new(t * g, p, -s * g, q))
    }
}

impl fmt::Display for IntegerMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[[{}, {}], [{}, {}]]", self.a, self.b, self.c, self.d)
    }
}

/// `(g, s, t)` with `s·a + t·b = g = gcd(a, b)` up to sign.
pub fn ext_gcd(a: i64, b: i64) -> (i64, i64, i64) {
    let (mut r0, mut r1) = (a, b);
    let (mut s0, mut s1) = (1, 0);
    let (mut t0, mut t1) = (0, 1);
    while r1 != 0 {
        let q = r0 / r1;
        (r0, r1) = (r1, r0 - q * r1);
        (s0, s1) = (s1, s0 - q * s1);
        (t0, t1) = (t1, t0 - q * t1);
    }
    (r0, s0, t0)
}

/// `z ↦ A⁻¹ F(A z)`.
#[derive(Debug, Clone)]
pub struct Conjugate {
    inner: TorusLift,
    a: IntegerMatrix,
    a_inv: IntegerMatrix,
}

impl TorusMap for Conjugate {
    fn eval(&self, z: Vec2) -> Vec2 {
        self.a_inv.apply(self.inner.eval(self.a.apply(z)))
    }
    fn eval_inv(&self, z: Vec2) -> Vec2 {
        self.a_inv.apply(self.inner.eval_inv(self.a.apply(z)))
    }
    fn label(&self) -> String {
        format!("conj({}, {})", self.a, self.inner.label())
    }
    fn displacement(&self, z: Vec2) -> Vec2 {
        self.a_inv.apply(self.inner.displacement(self.a.apply(z)))
    }
}

/// `L_A⁻¹ ∘ F ∘ L_A` as a lift.
pub fn linear_conjugate(f: TorusLift, a: IntegerMatrix) -> Result<TorusLift> {
    let a_inv = a.inverse()?;
    Ok(Arc::new(Conjugate { inner: f, a, a_inv }))
}

/// Per-seed rotation data.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SeedEstimate {
    pub seed: Vec2,
    pub estimate: Vec2,
    pub half_estimate: Vec2,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RotationEstimate {
    /// Mean of the per-seed estimates.
    pub vector: Vec2,
    pub horizon: u64,
    /// Largest per-seed `|estimate(n) - estimate(n/2)|`.
    pub cauchy_gap: f64,
    /// Largest pairwise distance between per-seed estimates.
    pub seed_spread: f64,
    pub per_seed: Vec<SeedEstimate>,
}

impl RotationEstimate {
    /// CSV with header `seed_x,seed_y,n,est_x,est_y`.
    pub fn to_csv(&self) -> String {
        let mut s = String::from("seed_x,seed_y,n,est_x,est_y\n");
        for p in &self.per_seed {
            s.push_str(&format!(
                "{:.17e},{:.17e},{},{:.17e},{:.17e}\n",
                p.seed.x, p.seed.y, self.horizon, p.estimate.x, p.estimate.y
            ));
        }
        s
    }
}

fn orbit_average(f: &dyn TorusMap, seed: Vec2, n: u64) -> SeedEstimate {
    let half = (n / 2).max(1);
    let (mut sx, mut sy) = (KahanSum::default(), KahanSum::default());
    let mut half_estimate = Vec2::ZERO;
    let mut z = seed.wrap();
    for i in 1..=n {
        let d = f.displacement(z);
        sx.add(d.x);
        sy.add(d.y);
        z = (z + d).wrap();
        if i == half {
            half_estimate = Vec2::new(sx.value(), sy.value()) * (1.0 / half as f64);
        }
    }
    SeedEstimate { seed, estimate: Vec2::new(sx.value(), sy.value()) * (1.0 / n as f64), half_estimate }
}

/// Per-seed `(Fⁿ(z) - z)/n` with spread and Cauchy gap.
pub fn rotation_vector_estimate(f: &dyn TorusMap, seeds: &[Vec2], n: u64) -> Result<RotationEstimate> {
    if n < 2 || seeds.is_empty() {
        return Err(Error::InvalidParameter("need n ≥ 2 and at least one seed".into()));
    }
    let per_seed: Vec<SeedEstimate> = seeds.par_iter().map(|&s| orbit_average(f, s, n)).collect();
    let mut mx = KahanSum::default();
    let mut my = KahanSum::default();
    for p in &per_seed {
        mx.add(p.estimate.x);
        my.add(p.estimate.y);
    }
    let k = per_seed.len() as f64;
    let vector = Vec2::new(mx.value() / k, my.value() / k);
    let cauchy_gap = per_seed.iter().map(|p| (p.estimate - p.half_estimate).norm()).fold(0.0, f64::max);
    let mut seed_spread: f64 = 0.0;
    for (i, p) in per_seed.iter().enumerate() {
        for q in &per_seed[i + 1..] {
            seed_spread = seed_spread.max((p.estimate - q.estimate).norm());
        }
    }
    Ok(RotationEstimate { vector, horizon: n, cauchy_gap, seed_spread, per_seed })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Independence {
    /// Evidence of independence up to the height bound, not a proof.
    NoRelationFound,
    Relation(i64, i64, i64),
}

/// Searches `N₁ + N₂α + N₃β ≈ 0` with `|Nᵢ| ≤ H`, smallest `|N₂| + |N₃|` first.
/// The first nonzero of `(N₂, N₃)` is made positive.
pub fn rational_independence(alpha: f64, beta: f64, h: i64, tol: f64) -> Independence {
    for level in 1..=2 * h {
        for n2 in -level.min(h)..=level.min(h) {
            let rest = level - n2.abs();
            if rest > h {
                continue;
            }
            let choices: &[i64] = if rest == 0 { &[0] } else { &[-rest, rest] };
            for &n3 in choices {
                if n2 < 0 || (n2 == 0 && n3 < 0) {
                    continue;
                }
                let v = n2 as f64 * alpha + n3 as f64 * beta;
                let n1 = -v.round();
                if n1.abs() <= h as f64 && (n1 + v).abs() < tol {
                    return Independence::Relation(n1 as i64, n2, n3);
                }
            }
        }
    }
    Independence::NoRelationFound
}

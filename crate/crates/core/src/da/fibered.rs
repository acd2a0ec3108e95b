//! The fibered homeomorphism: slide along unstable leaves by a fixed height.

use std::sync::Arc;

use super::leaf::{leaf_advance, LeafDirection, LeafTracer};
use super::map::DaMap;
use super::section::SectionGrid;
use crate::error::{Error, Result};
use crate::geom::{wrap01, Vec2};
use crate::torus::{rational_independence, Independence, TorusLift, TorusMap};

/// How leaves are followed.
#[derive(Debug, Clone)]
pub enum LeafMethod {
    /// RK4 through the mesh section.
    Section(Arc<SectionGrid>),
    /// Pull back, push forward.
    Dynamical,
}

/// `f(x, y) = (leaf point at height y + β, y + β)` with `(α, β) = ν·v^u`.
#[derive(Debug, Clone)]
pub struct FiberedMap {
    pub g: Arc<DaMap>,
    pub method: LeafMethod,
    pub nu: f64,
    /// Height advanced per step (not reduced mod 1).
    pub beta: f64,
    tracer: LeafTracer,
}

impl FiberedMap {
    pub fn advance(&self, z: Vec2, dy: f64) -> Result<Vec2> {
        match &self.method {
            LeafMethod::Dynamical => self.tracer.advance(z, dy).map(|p| Vec2::new(p.x, z.y + dy)),
            LeafMethod::Section(s) => {
                let target = z.y + dy;
                leaf_advance(&self.g, s, z, target, LeafDirection::toward(z.y, target))
                    .map(|p| Vec2::new(p.x, target))
            }
        }
    }

    /// Expected rotation vector `(α, β) mod 1`.
    pub fn translation(&self) -> Vec2 {
        let v = self.g.v_u * self.nu;
        Vec2::new(wrap01(v.x), wrap01(v.y))
    }
}

impl TorusMap for FiberedMap {
    fn eval(&self, z: Vec2) -> Vec2 {
        self.advance(z, self.beta).expect("leaf advance converges for transverse foliations")
    }
    fn eval_inv(&self, z: Vec2) -> Vec2 {
        self.advance(z, -self.beta).expect("leaf advance converges for transverse foliations")
    }
    fn label(&self) -> String {
        let m = match self.method {
            LeafMethod::Section(ref s) => format!("section{}", s.resolution),
            LeafMethod::Dynamical => "dynamical".into(),
        };
        format!("da-fibered(nu={}, {m})", self.nu)
    }
}

pub fn fibered_map(g: Arc<DaMap>, method: LeafMethod, nu: f64) -> Result<FiberedMap> {
    let v = g.v_u * nu;
    if let Independence::Relation(n1, n2, n3) = rational_independence(wrap01(v.x), wrap01(v.y), 100, 1e-9) {
        return Err(Error::Resonant { n1, n2, n3 });
    }
    let tracer = LeafTracer::new(g.clone());
    Ok(FiberedMap { g, method, nu, beta: v.y, tracer })
}

/// Fibered lift with leaves followed by `method`.
pub fn build_fibered_f(g: Arc<DaMap>, method: LeafMethod, nu: f64) -> Result<TorusLift> {
    Ok(Arc::new(fibered_map(g, method, nu)?))
}

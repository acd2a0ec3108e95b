use std::fmt::Write as _;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::components::{complement_components, Component, FOUR};
use super::deck::{deck_subgroup, DeckResult, Subgroup};
use super::grid::OccupancyGrid;

/// Definition of the three domain types by the image of the fundamental group.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum DomainType {
    Trivial,
    Essential(i64, i64),
    DoublyEssential,
}

impl DomainType {
    pub fn from_subgroup(s: Subgroup) -> Self {
        match s {
            Subgroup::Zero => DomainType::Trivial,
            Subgroup::Cyclic(p, q) => DomainType::Essential(p, q),
            Subgroup::Full => DomainType::DoublyEssential,
        }
    }

    pub fn name(&self) -> String {
        match self {
            DomainType::Trivial => "trivial".into(),
            DomainType::Essential(p, q) => format!("essential({p},{q})"),
            DomainType::DoublyEssential => "doubly_essential".into(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ComponentReport {
    pub id: usize,
    pub size: usize,
    /// Smallest cell index.
    pub anchor_cell: usize,
    pub subgroup: Subgroup,
    pub domain_type: DomainType,
    /// In torus units; infinite for components that wrap.
    pub diameter: f64,
    /// Lifted cell box `(i_min, j_min, i_max, j_max)` for trivial components.
    pub bbox: Option<(i64, i64, i64, i64)>,
    pub flags: Vec<String>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DomainReport {
    pub resolution: usize,
    pub marked_fraction: f64,
    pub components: Vec<ComponentReport>,
}

impl DomainReport {
    pub fn count(&self, pred: impl Fn(&DomainType) -> bool) -> usize {
        self.components.iter().filter(|c| pred(&c.domain_type)).count()
    }

    pub fn trivial_count(&self) -> usize {
        self.count(|t| *t == DomainType::Trivial)
    }

    /// Distinct domain types present, sorted.
    pub fn type_set(&self) -> Vec<DomainType> {
        let mut v: Vec<DomainType> = self.components.iter().map(|c| c.domain_type).collect();
        v.sort();
        v.dedup();
        v
    }

    /// CSV with header `component,size,subgroup,p,q,diameter,flags`.
    pub fn to_csv(&self) -> String {
        let mut s = String::from("component,size,subgroup,p,q,diameter,flags\n");
        for c in &self.components {
            let (name, p, q) = match c.subgroup {
                Subgroup::Zero => ("zero", 0, 0),
                Subgroup::Cyclic(p, q) => ("cyclic", p, q),
                Subgroup::Full => ("full", 0, 0),
            };
            let diam = if c.diameter.is_finite() { format!("{:.6e}", c.diameter) } else { "inf".into() };
            let _ = writeln!(s, "{},{},{},{},{},{},{}", c.id, c.size, name, p, q, diam, c.flags.join(";"));
        }
        s
    }
}

/// Lifted plane coordinates of a component's cells (valid for trivial components).
pub fn lifted_cells(grid: &OccupancyGrid, deck: &DeckResult) -> Vec<(i64, i64)> {
    let r = grid.resolution() as i64;
    deck.lift
        .iter()
        .map(|&(c, (sx, sy))| {
            let (i, j) = grid.coords(c);
            (i as i64 + r * sx, j as i64 + r * sy)
        })
        .collect()
}

fn trivial_geometry(grid: &OccupancyGrid, comp: &Component, deck: &DeckResult) -> (f64, (i64, i64, i64, i64)) {
    let pts = lifted_cells(grid, deck);
    let bbox = pts.iter().fold((i64::MAX, i64::MAX, i64::MIN, i64::MIN), |b, &(x, y)| {
        (b.0.min(x), b.1.min(y), b.2.max(x), b.3.max(y))
    });
    let boundary: Vec<(i64, i64)> = deck
        .lift
        .iter()
        .zip(&pts)
        .filter(|((c, _), _)| FOUR.iter().any(|&(di, dj)| grid.is_marked(grid.step(*c, di, dj).0)))
        .map(|(_, &p)| p)
        .collect();
    let sample: Vec<(i64, i64)> = if boundary.len() <= 256 {
        boundary
    } else {
        let stride = boundary.len() as f64 / 256.0;
        (0..256).map(|k| boundary[(k as f64 * stride) as usize]).collect()
    };
    let mut best: f64 = 0.0;
    for (a, p) in sample.iter().enumerate() {
        for q in &sample[a + 1..] {
            best = best.max((((p.0 - q.0).pow(2) + (p.1 - q.1).pow(2)) as f64).sqrt());
        }
    }
    let _ = comp;
    ((best + std::f64::consts::SQRT_2) / grid.resolution() as f64, bbox)
}

pub fn component_report(grid: &OccupancyGrid, comp: &Component, p_max: i64) -> ComponentReport {
    let deck = deck_subgroup(grid, comp, p_max);
    let domain_type = DomainType::from_subgroup(deck.subgroup);
    let mut flags = Vec::new();
    if deck.truncated {
        flags.push(format!("beyond_pmax_{p_max}"));
    }
    if deck.index > 1 {
        flags.push(format!("index_{}", deck.index));
    }
    let (diameter, bbox) = match deck.subgroup {
        Subgroup::Zero => {
            let (d, b) = trivial_geometry(grid, comp, &deck);
            (d, Some(b))
        }
        Subgroup::Cyclic(p, q) => {
            flags.push(format!("unbounded_{p}_{q}"));
            (f64::INFINITY, None)
        }
        Subgroup::Full => {
            flags.push("unbounded_full".into());
            (f64::INFINITY, None)
        }
    };
    ComponentReport {
        id: comp.id,
        size: comp.size(),
        anchor_cell: comp.cells[0],
        subgroup: deck.subgroup,
        domain_type,
        diameter,
        bbox,
        flags,
    }
}

/// Complement components of `grid` with their deck subgroups and types.
pub fn classify_grid(grid: &OccupancyGrid, p_max: i64) -> (Vec<Component>, DomainReport) {
    let comps = complement_components(grid);
    let components = comps.par_iter().map(|c| component_report(grid, c, p_max)).collect();
    let report = DomainReport { resolution: grid.resolution(), marked_fraction: grid.marked_fraction(), components };
    (comps, report)
}

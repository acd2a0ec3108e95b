use std::collections::{BTreeMap, BTreeSet, HashSet, VecDeque};

use serde::{Deserialize, Serialize};

use super::components::{label_map, Component, EIGHT};
use super::deck::deck_subgroup;
use super::grid::OccupancyGrid;
use super::report::{classify_grid, lifted_cells, DomainReport, DomainType};
use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum SierpinskiVerdict {
    Sierpinski,
    QuasiSierpinski,
    Neither,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SierpinskiReport {
    pub verdict: SierpinskiVerdict,
    /// Components whose boundary is not a single closed curve at grid scale.
    pub non_simple: Vec<usize>,
    /// Most marked cells shared by the closures of one pair of components.
    pub max_closure_overlap: usize,
    pub touching_pairs: usize,
    /// `(resolution, largest component diameter)` along the ladder, if one was given.
    pub ladder: Vec<(usize, f64)>,
    pub diameters_decay: Option<bool>,
}

/// A disk at grid scale: the cells around its lifted copy form one 8-connected set.
fn has_simple_boundary(cells: &[(i64, i64)]) -> bool {
    let own: HashSet<(i64, i64)> = cells.iter().copied().collect();
    let (x0, y0, x1, y1) = cells.iter().fold((i64::MAX, i64::MAX, i64::MIN, i64::MIN), |b, &(x, y)| {
        (b.0.min(x), b.1.min(y), b.2.max(x), b.3.max(y))
    });
    let (x0, y0, x1, y1) = (x0 - 1, y0 - 1, x1 + 1, y1 + 1);
    let outside = |p: (i64, i64)| p.0 >= x0 && p.0 <= x1 && p.1 >= y0 && p.1 <= y1 && !own.contains(&p);
    let total = ((x1 - x0 + 1) * (y1 - y0 + 1)) as usize - own.len();
    let mut seen = HashSet::from([(x0, y0)]);
    let mut queue = VecDeque::from([(x0, y0)]);
    while let Some((x, y)) = queue.pop_front() {
        for (dx, dy) in EIGHT {
            let q = (x + dx, y + dy);
            if outside(q) && seen.insert(q) {
                queue.push_back(q);
            }
        }
    }
    seen.len() == total
}

fn max_trivial_diameter(report: &DomainReport) -> f64 {
    report
        .components
        .iter()
        .filter(|c| c.domain_type == DomainType::Trivial)
        .map(|c| c.diameter)
        .fold(0.0, f64::max)
}

/// Grid-scale test of the quasi-Sierpiński conditions on a family of trivial domains.
///
/// `ladder` holds the same set at other resolutions for the null-sequence check.
pub fn quasi_sierpinski_check(
    grid: &OccupancyGrid,
    comps: &[Component],
    report: &DomainReport,
    ladder: &[OccupancyGrid],
) -> Result<SierpinskiReport> {
    if let Some(c) = report.components.iter().find(|c| c.domain_type != DomainType::Trivial) {
        return Err(Error::InvalidParameter(format!(
            "component {} is {}, all must be trivial",
            c.id,
            c.domain_type.name()
        )));
    }
    let non_simple: Vec<usize> = comps
        .iter()
        .filter(|c| !has_simple_boundary(&lifted_cells(grid, &deck_subgroup(grid, c, 8))))
        .map(|c| c.id)
        .collect();

    let labels = label_map(grid, comps);
    let mut pairs: BTreeMap<(usize, usize), usize> = BTreeMap::new();
    for cell in 0..grid.len() {
        if !grid.is_marked(cell) {
            continue;
        }
        let near: BTreeSet<usize> = EIGHT
            .iter()
            .map(|&(di, dj)| labels[grid.step(cell, di, dj).0])
            .filter(|&l| l != usize::MAX)
            .collect();
        let near: Vec<usize> = near.into_iter().collect();
        for (a, &u) in near.iter().enumerate() {
            for &v in &near[a + 1..] {
                *pairs.entry((u, v)).or_default() += 1;
            }
        }
    }
    let max_closure_overlap = pairs.values().copied().max().unwrap_or(0);

    let mut ladder_pts: Vec<(usize, f64)> = ladder
        .iter()
        .map(|g| (g.resolution(), max_trivial_diameter(&classify_grid(g, 8).1)))
        .collect();
    if !ladder.is_empty() {
        ladder_pts.push((grid.resolution(), max_trivial_diameter(report)));
    }
    ladder_pts.sort_by_key(|p| p.0);
    ladder_pts.dedup_by_key(|p| p.0);
    let diameters_decay = (!ladder.is_empty()).then(|| {
        ladder_pts.windows(2).all(|w| w[1].1 <= w[0].1 + 1.0 / w[0].0 as f64)
    });

    let verdict = if !non_simple.is_empty() || diameters_decay == Some(false) || max_closure_overlap > 1 {
        SierpinskiVerdict::Neither
    } else if max_closure_overlap == 1 {
        SierpinskiVerdict::QuasiSierpinski
    } else {
        SierpinskiVerdict::Sierpinski
    };
    Ok(SierpinskiReport {
        verdict,
        non_simple,
        max_closure_overlap,
        touching_pairs: pairs.len(),
        ladder: ladder_pts,
        diameters_decay,
    })
}

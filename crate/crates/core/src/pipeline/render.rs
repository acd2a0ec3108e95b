//! Colour renders of classified grids.

use crate::classify::{label_map, Component, DomainReport, DomainType, OccupancyGrid};
use crate::io::encode_ppm;

pub const MARKED: [u8; 3] = [0, 0, 0];
pub const TRIVIAL: [u8; 3] = [200, 200, 200];
pub const DOUBLY: [u8; 3] = [255, 255, 255];

/// Deterministic colour for an essential characteristic, kept away from the gray axis.
pub fn characteristic_color(p: i64, q: i64) -> [u8; 3] {
    let h = (p as u64).wrapping_mul(0x9E37_79B9_7F4A_7C15) ^ (q as u64).wrapping_mul(0xC2B2_AE3D_27D4_EB4F);
    let h = h ^ (h >> 29);
    let hue = (h % 360) as f64;
    // fixed saturation and value so no essential colour collides with gray or white
    let (s, v) = (0.75, 0.85);
    let c = v * s;
    let x = c * (1.0 - ((hue / 60.0) % 2.0 - 1.0).abs());
    let (r, g, b) = match (hue / 60.0) as u32 {
        0 => (c, x, 0.0),
        1 => (x, c, 0.0),
        2 => (0.0, c, x),
        3 => (0.0, x, c),
        4 => (x, 0.0, c),
        _ => (c, 0.0, x),
    };
    let m = v - c;
    let to = |u: f64| ((u + m) * 255.0).round() as u8;
    [to(r), to(g), to(b)]
}

pub fn domain_color(t: DomainType) -> [u8; 3] {
    match t {
        DomainType::Trivial => TRIVIAL,
        DomainType::Essential(p, q) => characteristic_color(p, q),
        DomainType::DoublyEssential => DOUBLY,
    }
}

/// `R×R` binary PPM, top row first.
pub fn render_domains(grid: &OccupancyGrid, comps: &[Component], report: &DomainReport) -> Vec<u8> {
    let r = grid.resolution();
    let labels = label_map(grid, comps);
    let mut rgb = Vec::with_capacity(r * r);
    for row in 0..r {
        let j = r - 1 - row;
        for i in 0..r {
            let l = labels[grid.index(i, j)];
            rgb.push(if l == usize::MAX { MARKED } else { domain_color(report.components[l].domain_type) });
        }
    }
    encode_ppm(r, r, &rgb)
}

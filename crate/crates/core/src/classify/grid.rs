use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::geom::Vec2;
use crate::torus::TorusMap;

/// Where a grid came from.
#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
pub struct Provenance {
    pub map_label: String,
    pub orbit_length: u64,
    pub seed: Vec2,
    pub dilation: usize,
}

/// `R×R` bitmap over the unit torus; cell `(i, j)` covers `[i/R, (i+1)/R) × [j/R, (j+1)/R)`.
#[derive(Debug, Clone, PartialEq)]
pub struct OccupancyGrid {
    resolution: usize,
    marked: Vec<bool>,
    pub provenance: Provenance,
}

impl OccupancyGrid {
    pub fn new(resolution: usize) -> Self {
        assert!(resolution > 0, "grid resolution must be positive");
        OccupancyGrid {
            resolution,
            marked: vec![false; resolution * resolution],
            provenance: Provenance::default(),
        }
    }

    /// Grid marked where `f(i, j)` holds.
    pub fn from_fn(resolution: usize, f: impl Fn(usize, usize) -> bool) -> Self {
        let mut g = OccupancyGrid::new(resolution);
        for j in 0..resolution {
            for i in 0..resolution {
                g.marked[j * resolution + i] = f(i, j);
            }
        }
        g
    }

    pub fn resolution(&self) -> usize {
        self.resolution
    }

    pub fn len(&self) -> usize {
        self.marked.len()
    }

    pub fn is_empty(&self) -> bool {
        self.marked.is_empty()
    }

    pub fn index(&self, i: usize, j: usize) -> usize {
        j * self.resolution + i
    }

    pub fn coords(&self, idx: usize) -> (usize, usize) {
        (idx % self.resolution, idx / self.resolution)
    }

    pub fn cell_of(&self, z: Vec2) -> usize {
        let w = z.wrap();
        let r = self.resolution as f64;
        let i = ((w.x * r) as usize).min(self.resolution - 1);
        let j = ((w.y * r) as usize).min(self.resolution - 1);
        self.index(i, j)
    }

    pub fn cell_center(&self, idx: usize) -> Vec2 {
        let (i, j) = self.coords(idx);
        let r = self.resolution as f64;
        Vec2::new((i as f64 + 0.5) / r, (j as f64 + 0.5) / r)
    }

    pub fn is_marked(&self, idx: usize) -> bool {
        self.marked[idx]
    }

    pub fn is_marked_at(&self, i: usize, j: usize) -> bool {
        self.marked[self.index(i, j)]
    }

    pub fn set(&mut self, idx: usize, v: bool) {
        self.marked[idx] = v;
    }

    pub fn mark_point(&mut self, z: Vec2) {
        let c = self.cell_of(z);
        self.marked[c] = true;
    }

    pub fn marked_count(&self) -> usize {
        self.marked.iter().filter(|&&m| m).count()
    }

    pub fn marked_fraction(&self) -> f64 {
        self.marked_count() as f64 / self.marked.len() as f64
    }

    /// Neighbour of `idx` shifted by `(di, dj)` with wraparound, plus the sheet change.
    pub fn step(&self, idx: usize, di: i64, dj: i64) -> (usize, (i64, i64)) {
        let r = self.resolution as i64;
        let (i, j) = self.coords(idx);
        let (ni, nj) = (i as i64 + di, j as i64 + dj);
        let (wi, wj) = (ni.rem_euclid(r), nj.rem_euclid(r));
        (self.index(wi as usize, wj as usize), (ni.div_euclid(r), nj.div_euclid(r)))
    }

    /// Square (max-norm) dilation by `radius` cells with wraparound.
    pub fn dilate(&mut self, radius: usize) {
        if radius == 0 {
            return;
        }
        let r = self.resolution;
        let rad = radius.min(r) as i64;
        let mut rows = vec![false; r * r];
        for j in 0..r {
            for i in 0..r {
                if self.marked[j * r + i] {
                    for d in -rad..=rad {
                        let ii = (i as i64 + d).rem_euclid(r as i64) as usize;
                        rows[j * r + ii] = true;
                    }
                }
            }
        }
        let mut out = vec![false; r * r];
        for j in 0..r {
            for i in 0..r {
                if rows[j * r + i] {
                    for d in -rad..=rad {
                        let jj = (j as i64 + d).rem_euclid(r as i64) as usize;
                        out[jj * r + i] = true;
                    }
                }
            }
        }
        self.marked = out;
        self.provenance.dilation += radius;
    }

    /// Coarsens by an integer factor; a coarse cell is marked if any fine cell is.
    pub fn downsample(&self, factor: usize) -> Result<OccupancyGrid> {
        if factor == 0 || self.resolution % factor != 0 {
            return Err(Error::InvalidParameter(format!(
                "factor {factor} does not divide resolution {}",
                self.resolution
            )));
        }
        let r = self.resolution / factor;
        let mut g = OccupancyGrid::from_fn(r, |i, j| {
            (0..factor).any(|a| (0..factor).any(|b| self.is_marked_at(i * factor + a, j * factor + b)))
        });
        g.provenance = self.provenance.clone();
        Ok(g)
    }

    /// Binary PGM (P5), top row first, 255 = marked.
    pub fn to_pgm(&self) -> Vec<u8> {
        let r = self.resolution;
        let mut out = format!("P5\n{r} {r}\n255\n").into_bytes();
        for row in 0..r {
            let j = r - 1 - row;
            out.extend((0..r).map(|i| if self.marked[j * r + i] { 255u8 } else { 0u8 }));
        }
        out
    }

    /// Reads a square P5 image; nonzero pixels are marked.
    pub fn from_pgm(bytes: &[u8]) -> Result<OccupancyGrid> {
        let (w, h, maxval, data) = crate::io::parse_pnm(bytes, b"P5")?;
        if w != h {
            return Err(Error::Format(format!("grid must be square, got {w}x{h}")));
        }
        if maxval == 0 || maxval > 255 {
            return Err(Error::Format(format!("unsupported maxval {maxval}")));
        }
        if data.len() < w * h {
            return Err(Error::Format("truncated pixel data".into()));
        }
        let r = w;
        Ok(OccupancyGrid::from_fn(r, |i, j| data[(r - 1 - j) * r + i] != 0))
    }
}

/// Marks the cells visited by `steps` iterates split between forward and backward
/// halves, then dilates by `dilate` cells.
pub fn orbit_occupancy(
    f: &dyn TorusMap,
    seed: Vec2,
    steps: u64,
    resolution: usize,
    dilate: usize,
) -> Result<OccupancyGrid> {
    if steps == 0 {
        return Err(Error::InvalidParameter("orbit needs at least one step".into()));
    }
    let mut g = OccupancyGrid::new(resolution);
    let forward = steps - steps / 2;
    let mut z = seed.wrap();
    g.mark_point(z);
    for _ in 1..forward {
        z = (z + f.displacement(z)).wrap();
        g.mark_point(z);
    }
    let mut w = seed.wrap();
    for _ in 0..steps / 2 {
        w = f.eval_inv(w).wrap();
        g.mark_point(w);
    }
    g.provenance = Provenance { map_label: f.label(), orbit_length: steps, seed, dilation: 0 };
    g.dilate(dilate);
    Ok(g)
}

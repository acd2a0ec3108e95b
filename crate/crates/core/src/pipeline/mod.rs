//! End-to-end example pipelines: build a map, estimate its rotation vector, rasterize an
//! orbit, classify the complementary domains and collect the artifacts.

pub mod census;
pub mod render;

use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::path::Path;
use std::sync::Arc;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::blowup::{
    linear_gap_control, run_blowup, wedge_grid, wedge_sample_check, BlowupConfig, BlowupState, WedgeReport,
    BlownUpMap,
};
use crate::circle::{
    build_denjoy, build_quadratic_gap_cantor, rotation, CantorSetSpec, CircleLift, Denjoy, GapSchedule,
    QuadraticGapParams, DEFAULT_TOL,
};
use crate::classify::{classify_grid, label_map, marked_components, orbit_occupancy, DomainType, OccupancyGrid};
use crate::da::{
    basin_grid, basin_membership, build_da_map, default_ball, fibered_map, invariant_section, leaf_trace,
    polyline_csv, standard_matrix, BumpSpec, DaMap, LeafDirection, LeafMethod,
};
use crate::error::{Error, Result};
use crate::geom::{torus_dist, Vec2};
use crate::io::atomic_write;
use crate::torus::{
    linear_conjugate, product_map, rational_independence, rotation_vector_estimate, Independence, IntegerMatrix,
    RotationEstimate, TorusLift,
};

pub use census::{
    blown_occupancy, circle_occupancy, distances_to_marked, fraction, widen, zoom_census, DiskCensus, CENSUS_SUBSAMPLES,
};
pub use render::{characteristic_color, domain_color, render_domains, DOUBLY, MARKED, TRIVIAL};

/// Which example to build.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub enum ExampleId {
    Type1Da,
    Type2Annuli,
    Type2AnnuliConjugated { p: i64, q: i64 },
    Type2WithDisks,
    Type3Cantor,
    Type3Extension,
}

impl ExampleId {
    pub fn name(&self) -> String {
        match self {
            ExampleId::Type1Da => "type1_da".into(),
            ExampleId::Type2Annuli => "type2_annuli".into(),
            ExampleId::Type2AnnuliConjugated { p, q } => format!("type2_annuli_conjugated({p},{q})"),
            ExampleId::Type2WithDisks => "type2_with_disks".into(),
            ExampleId::Type3Cantor => "type3_cantor".into(),
            ExampleId::Type3Extension => "type3_extension".into(),
        }
    }

    /// Directory-safe form of the name.
    pub fn slug(&self) -> String {
        match self {
            ExampleId::Type2AnnuliConjugated { p, q } => format!("type2_annuli_conjugated_{p}_{q}"),
            other => other.name(),
        }
    }

    /// Accepts names and slugs; the conjugated example defaults to `(1,1)`.
    pub fn parse(s: &str) -> Result<Self> {
        let s = s.trim();
        let fixed = [
            ExampleId::Type1Da,
            ExampleId::Type2Annuli,
            ExampleId::Type2WithDisks,
            ExampleId::Type3Cantor,
            ExampleId::Type3Extension,
        ];
        if let Some(id) = fixed.iter().find(|id| id.name() == s || id.slug() == s) {
            return Ok(*id);
        }
        let bad = || Error::InvalidParameter(format!("unknown example id {s:?}"));
        let rest = s.strip_prefix("type2_annuli_conjugated").ok_or_else(bad)?;
        if rest.is_empty() {
            return Ok(ExampleId::Type2AnnuliConjugated { p: 1, q: 1 });
        }
        let (p, q) = match rest.strip_prefix('_') {
            Some(slug) => slug.split_once('_'),
            None => rest.strip_prefix('(').and_then(|r| r.strip_suffix(')')).and_then(|r| r.split_once(',')),
        }
        .ok_or_else(bad)?;
        let p = p.trim().parse().map_err(|_| bad())?;
        let q = q.trim().parse().map_err(|_| bad())?;
        Ok(ExampleId::Type2AnnuliConjugated { p, q })
    }

    pub fn all() -> Vec<ExampleId> {
        vec![
            ExampleId::Type1Da,
            ExampleId::Type2Annuli,
            ExampleId::Type2AnnuliConjugated { p: 1, q: 1 },
            ExampleId::Type2WithDisks,
            ExampleId::Type3Cantor,
            ExampleId::Type3Extension,
        ]
    }

    fn uses_blowup(&self) -> bool {
        matches!(self, ExampleId::Type2WithDisks | ExampleId::Type3Extension)
    }
}

/// Parameters of one pipeline run.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PipelineSpec {
    pub id: ExampleId,
    /// First rotation coordinate; for `type1_da` the scale `ν` along the unstable direction.
    pub alpha: f64,
    /// Second rotation coordinate; fixed by `alpha` for `type1_da`.
    pub beta: Option<f64>,
    /// DA base matrix, or the conjugating matrix of the conjugated example.
    pub matrix: Option<IntegerMatrix>,
    pub stages: usize,
    pub resolutions: Vec<usize>,
    /// Orbit length at the first resolution; scaled with grid area.
    pub orbit_steps: u64,
    pub rotation_steps: u64,
    pub rotation_seeds: usize,
    pub seed: u64,
    /// Height bound of the rational-independence screen.
    pub height: i64,
}

/// Largest characteristic searched by the classifier.
pub const P_MAX: i64 = 8;
/// Support scale of the DA perturbation.
pub const DA_SCALE: f64 = 0.12;
/// Mesh of the DA invariant section.
pub const DA_SECTION_RESOLUTION: usize = 512;
/// Gap schedule of the Denjoy factors. Gap widths at `R = 256` are 25.6, 8.5, 2.8 and
/// 0.95 cells (doubling at 512), clear of the widths 3 to 5 (axis-aligned) and 6 to 8
/// (diagonal) cells where a one-cell square dilation only partly closes a gap and
/// leaves grid-scale fragments.
pub const PIPELINE_SCHEDULE: GapSchedule = GapSchedule::Geometric { scale: 0.1, ratio: 1.0 / 3.0 };
/// Chart radius of the Denjoy × rotation blow-up.
pub const DISK_DELTA0: f64 = 0.05;
/// Base angle of the blow-up point: midway between the gaps at `±α`, so the chart
/// stays clear of the gap strips wide enough to be resolved.
pub const DISK_ANCHOR: f64 = 0.5;
/// Resolution of each disk census window.
pub const CENSUS_RESOLUTION: usize = 128;
/// Iterate budget of the basin test: points on the minimal set stay within roundoff
/// of it for about 30 steps, so a longer budget would misreport them.
pub const BASIN_BUDGET: usize = 25;
/// Orbit-exclusion span of the wedge check.
pub const WEDGE_ORBIT_SPAN: usize = 20;

impl PipelineSpec {
    pub fn new(id: ExampleId) -> Self {
        let (alpha, beta) = match id {
            ExampleId::Type1Da => (std::f64::consts::E, None),
            _ => (std::f64::consts::SQRT_2 - 1.0, Some(3f64.sqrt() - 1.0)),
        };
        PipelineSpec {
            id,
            alpha,
            beta,
            matrix: None,
            stages: 3,
            resolutions: vec![256, 512],
            orbit_steps: if id == ExampleId::Type1Da { 1_000_000 } else { 4_000_000 },
            rotation_steps: 10_000,
            rotation_seeds: 20,
            seed: 1,
            height: 100,
        }
    }

    /// Matrix actually used: the DA base or the conjugator.
    pub fn effective_matrix(&self) -> Result<Option<IntegerMatrix>> {
        match (self.id, self.matrix) {
            (ExampleId::Type1Da, m) => Ok(Some(m.unwrap_or_else(standard_matrix))),
            (ExampleId::Type2AnnuliConjugated { p, q }, None) => Ok(Some(IntegerMatrix::with_second_column(p, q)?)),
            (ExampleId::Type2AnnuliConjugated { p, q }, Some(m)) => {
                if !m.is_sl2z() || (m.b, m.d) != (p, q) {
                    return Err(Error::InvalidParameter(format!(
                        "conjugator {m} must lie in SL(2,Z) with second column ({p}, {q})"
                    )));
                }
                Ok(Some(m))
            }
            (_, None) => Ok(None),
            (id, Some(_)) => Err(Error::InvalidParameter(format!("{} takes no matrix", id.name()))),
        }
    }

    /// Rotation coordinates `(α, β)` of the base map.
    pub fn rotation_pair(&self) -> Result<(f64, f64)> {
        match self.id {
            ExampleId::Type1Da => {
                let a = self.effective_matrix()?.expect("DA matrix");
                let v_u = DaMap::unperturbed(a)?.v_u;
                let beta = self.alpha * v_u.y;
                if let Some(b) = self.beta {
                    if (b - beta).abs() > 1e-9 {
                        return Err(Error::InvalidParameter(format!(
                            "type1_da fixes beta = alpha·slope = {beta}, got {b}"
                        )));
                    }
                }
                Ok((self.alpha, beta))
            }
            _ => Ok((self.alpha, self.beta.unwrap_or(3f64.sqrt() - 1.0))),
        }
    }

    /// Range checks plus the rational-independence screen.
    pub fn validate(&self) -> Result<()> {
        let bad = |m: String| Err(Error::InvalidParameter(m));
        if !self.alpha.is_finite() {
            return bad(format!("alpha must be finite, got {}", self.alpha));
        }
        if self.id != ExampleId::Type1Da && !(self.alpha > 0.0 && self.alpha < 1.0) {
            return bad(format!("alpha must lie in (0, 1), got {}", self.alpha));
        }
        if self.id == ExampleId::Type1Da && !(self.alpha > 0.0) {
            return bad(format!("the DA scale must be positive, got {}", self.alpha));
        }
        let (alpha, beta) = self.rotation_pair()?;
        if self.id != ExampleId::Type1Da && !(beta > 0.0 && beta < 1.0) {
            return bad(format!("beta must lie in (0, 1), got {beta}"));
        }
        if self.resolutions.is_empty() || self.resolutions.iter().any(|&r| !(16..=4096).contains(&r)) {
            return bad(format!("resolutions must lie in [16, 4096], got {:?}", self.resolutions));
        }
        if self.id.uses_blowup() && !(1..=8).contains(&self.stages) {
            return bad(format!("stages must lie in [1, 8], got {}", self.stages));
        }
        if self.orbit_steps < 2 || self.rotation_steps < 2 || self.rotation_seeds == 0 {
            return bad("orbit and rotation lengths must be at least 2 with one seed".into());
        }
        if self.height < 1 {
            return bad(format!("height must be positive, got {}", self.height));
        }
        match rational_independence(alpha.rem_euclid(1.0), beta.rem_euclid(1.0), self.height, 1e-9) {
            Independence::NoRelationFound => {}
            Independence::Relation(n1, n2, n3) => return Err(Error::Resonant { n1, n2, n3 }),
        }
        self.effective_matrix()?;
        Ok(())
    }

    fn steps_at(&self, resolution: usize) -> u64 {
        let base = self.resolutions[0] as u64;
        (self.orbit_steps * (resolution * resolution) as u64).div_ceil(base * base)
    }

    /// `key = value` lines, sorted by key, excluding the file list.
    pub fn manifest(&self) -> Result<String> {
        let (alpha, beta) = self.rotation_pair()?;
        let mut kv: BTreeMap<&str, String> = BTreeMap::new();
        kv.insert("example", self.id.name());
        kv.insert("alpha", format!("{alpha:.17e}"));
        kv.insert("beta", format!("{beta:.17e}"));
        kv.insert(
            "matrix",
            self.effective_matrix()?.map_or("none".into(), |m| format!("{},{},{},{}", m.a, m.b, m.c, m.d)),
        );
        kv.insert("stages", if self.id.uses_blowup() { self.stages.to_string() } else { "0".into() });
        kv.insert(
            "resolution",
            self.resolutions.iter().map(|r| r.to_string()).collect::<Vec<_>>().join(","),
        );
        kv.insert("orbit_steps", self.orbit_steps.to_string());
        kv.insert("rotation_steps", self.rotation_steps.to_string());
        kv.insert("rotation_seeds", self.rotation_seeds.to_string());
        kv.insert("seed", self.seed.to_string());
        kv.insert("height", self.height.to_string());
        kv.insert("p_max", P_MAX.to_string());
        kv.insert("dilation", "1".into());
        kv.insert("version", env!("CARGO_PKG_VERSION").into());
        let mut s = String::new();
        for (k, v) in kv {
            let _ = writeln!(s, "{k} = {v}");
        }
        Ok(s)
    }
}

/// Classification summary of one occupancy grid.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct GridSummary {
    pub resolution: usize,
    pub orbit_steps: u64,
    pub marked_fraction: f64,
    pub components: usize,
    pub trivial: usize,
    pub type_set: Vec<DomainType>,
    pub marked_components: usize,
    pub max_marked_component: usize,
    /// Type of the complement component at each disk marker; `None` when the marker
    /// cell is marked.
    pub disk_types: Vec<Option<DomainType>>,
}

/// 1-D oracle for the product of two Cantor factors.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CantorOracle {
    pub resolution: usize,
    pub grid_fraction: f64,
    /// Per-factor occupancy fractions, widened by the grid dilation.
    pub first: f64,
    pub second: f64,
    /// Product of the two 1-D fractions: a square dilation of a product set is the
    /// product of the widened factors.
    pub product: f64,
    /// Product of the gap-complement measures.
    pub measure_product: f64,
}

impl CantorOracle {
    pub fn relative_error(&self) -> f64 {
        (self.grid_fraction - self.product).abs() / self.product
    }
}

/// Distances from the sampled first blown-up boundary to marked cells.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Accumulation {
    pub resolution: usize,
    pub samples: usize,
    /// Against the classified (dilated) grid.
    pub min_cells: f64,
    pub max_cells: f64,
    /// Against the raw orbit cells before dilation.
    pub raw_min_cells: f64,
    pub raw_max_cells: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct WedgeSummary {
    pub wedges: usize,
    pub hits: usize,
    pub control_wedges: usize,
    pub control_misses: usize,
}

/// Measured outcome of a pipeline.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Outcome {
    pub rotation: RotationEstimate,
    pub expected_rotation: Vec2,
    pub grids: Vec<GridSummary>,
    /// Type-I only: every hole at each resolution contains a basin point.
    pub holes_in_basin: Vec<bool>,
    pub disk_diameters: Vec<(i64, usize, f64)>,
    pub census: Vec<DiskCensus>,
    pub cantor: Vec<CantorOracle>,
    pub accumulation: Option<Accumulation>,
    pub wedges: Option<WedgeSummary>,
}

impl Outcome {
    /// Torus distance between the estimated and expected rotation vectors.
    pub fn rotation_error(&self) -> f64 {
        torus_dist(self.rotation.vector, self.expected_rotation)
    }
}

/// Artifacts keyed by relative path plus the measured outcome.
#[derive(Debug, Clone)]
pub struct Bundle {
    pub name: String,
    pub files: BTreeMap<String, Vec<u8>>,
    pub outcome: Outcome,
}

impl Bundle {
    /// Writes every file under `dir` atomically.
    pub fn write_to(&self, dir: &Path) -> Result<()> {
        for (rel, data) in &self.files {
            atomic_write(&dir.join(rel), data)?;
        }
        Ok(())
    }
}

fn context(id: ExampleId, what: &str) -> impl FnOnce(Error) -> Error + '_ {
    move |e| Error::Pipeline { context: format!("{} {what}", id.name()), source: Box::new(e) }
}

/// Builds, measures and renders the requested example.
pub fn run_pipeline(spec: &PipelineSpec) -> Result<Bundle> {
    spec.validate().map_err(context(spec.id, "spec"))?;
    let mut files = BTreeMap::new();
    let outcome = match spec.id {
        ExampleId::Type1Da => run_da(spec, &mut files)?,
        _ => run_product(spec, &mut files)?,
    };
    let mut manifest = spec.manifest()?;
    for path in files.keys() {
        let _ = writeln!(manifest, "file = {path}");
    }
    files.insert("manifest.txt".into(), manifest.into_bytes());
    Ok(Bundle { name: spec.id.slug(), files, outcome })
}

fn rotation_seeds(spec: &PipelineSpec, rng: &mut ChaCha8Rng) -> Vec<Vec2> {
    (0..spec.rotation_seeds).map(|_| Vec2::new(rng.gen(), rng.gen())).collect()
}

fn summarize(grid: &OccupancyGrid, steps: u64, markers: &[Vec2]) -> (GridSummary, Vec<crate::classify::Component>, crate::classify::DomainReport) {
    let (comps, report) = classify_grid(grid, P_MAX);
    let marked = marked_components(grid);
    let labels = label_map(grid, &comps);
    let disk_types = markers
        .iter()
        .map(|&m| {
            let l = labels[grid.cell_of(m)];
            (l != usize::MAX).then(|| report.components[l].domain_type)
        })
        .collect();
    let summary = GridSummary {
        resolution: grid.resolution(),
        orbit_steps: steps,
        marked_fraction: grid.marked_fraction(),
        components: report.components.len(),
        trivial: report.trivial_count(),
        type_set: report.type_set(),
        marked_components: marked.len(),
        max_marked_component: marked.iter().map(|c| c.size()).max().unwrap_or(0),
        disk_types,
    };
    (summary, comps, report)
}

fn grids_csv(grids: &[GridSummary]) -> String {
    let mut s = String::from(
        "resolution,orbit_steps,marked_fraction,components,trivial,marked_components,max_marked_component,types\n",
    );
    for g in grids {
        let types: Vec<String> = g.type_set.iter().map(|t| t.name()).collect();
        let _ = writeln!(
            s,
            "{},{},{:.6},{},{},{},{},{}",
            g.resolution,
            g.orbit_steps,
            g.marked_fraction,
            g.components,
            g.trivial,
            g.marked_components,
            g.max_marked_component,
            types.join(";")
        );
    }
    s
}

fn rotation_summary_csv(est: &RotationEstimate, expected: Vec2) -> String {
    format!(
        "n,seeds,est_x,est_y,expected_x,expected_y,error,seed_spread,cauchy_gap\n{},{},{:.12},{:.12},{:.12},{:.12},{:.3e},{:.3e},{:.3e}\n",
        est.horizon,
        est.per_seed.len(),
        est.vector.x.rem_euclid(1.0),
        est.vector.y.rem_euclid(1.0),
        expected.x,
        expected.y,
        torus_dist(est.vector, expected),
        est.seed_spread,
        est.cauchy_gap
    )
}

fn run_da(spec: &PipelineSpec, files: &mut BTreeMap<String, Vec<u8>>) -> Result<Outcome> {
    let id = spec.id;
    let a = spec.effective_matrix()?.expect("DA matrix");
    let (lu, ls) = DaMap::eigenvalues(&a).map_err(context(id, "matrix"))?;
    let g = Arc::new(build_da_map(a, BumpSpec::standard(lu, ls), DA_SCALE).map_err(context(id, "DA map"))?);
    let section =
        invariant_section(&g, DA_SECTION_RESOLUTION, 200, 1e-12).map_err(context(id, "invariant section"))?;
    let scale = section.sup().max(1e-12);
    files.insert(format!("grids/section_{DA_SECTION_RESOLUTION}.pgm"), section.to_pgm(scale));
    let mut sec_csv = String::from("sweep,sup_difference,ratio\n");
    for (k, d) in section.history.iter().enumerate() {
        let ratio = if k >= 1 { section.ratios.get(k - 1).map_or(String::new(), |r| format!("{r:.6e}")) } else { String::new() };
        let _ = writeln!(sec_csv, "{},{:.6e},{}", k + 1, d, ratio);
    }
    files.insert("reports/section.csv".into(), sec_csv.into_bytes());

    // leaf through the repeller's right-hand saddle, one unit up
    let saddle = g.saddles()[0];
    let leaf = leaf_trace(&g, &section, saddle, saddle.y + 1.0, LeafDirection::Up).map_err(context(id, "leaf trace"))?;
    files.insert("reports/leaf_saddle.csv".into(), polyline_csv(&leaf).into_bytes());

    let fm = fibered_map(g.clone(), LeafMethod::Dynamical, spec.alpha).map_err(context(id, "fibered map"))?;
    let expected = fm.translation();
    let f: TorusLift = Arc::new(fm);
    let mut rng = ChaCha8Rng::seed_from_u64(spec.seed);
    let seeds = rotation_seeds(spec, &mut rng);
    let rotation = rotation_vector_estimate(&*f, &seeds, spec.rotation_steps).map_err(context(id, "rotation"))?;
    files.insert("reports/rotation.csv".into(), rotation.to_csv().into_bytes());
    files.insert("reports/rotation_summary.csv".into(), rotation_summary_csv(&rotation, expected).into_bytes());

    let ball = default_ball(&g);
    let r0 = spec.resolutions[0];
    let basin = basin_grid(&g, r0, BASIN_BUDGET, ball).map_err(context(id, "basin grid"))?;
    files.insert(format!("grids/basin_{r0}.pgm"), basin.to_pgm());

    // the centre of the repeller's opposite corner cell is a point of the minimal set's
    // neighbourhood whose orbit is dense in it
    let orbit_seed = Vec2::new(0.5, 0.5);
    let mut grids = Vec::new();
    let mut holes_in_basin = Vec::new();
    for &r in &spec.resolutions {
        let steps = spec.steps_at(r);
        let grid = orbit_occupancy(&*f, orbit_seed, steps, r, 1).map_err(context(id, "occupancy"))?;
        let (summary, comps, report) = summarize(&grid, steps, &[]);
        let mut all = true;
        for c in &comps {
            let hit = c.cells.iter().take(64).any(|&cell| {
                basin_membership(&g, grid.cell_center(cell), 200, ball).map(|v| v.is_in()).unwrap_or(false)
            });
            all &= hit;
        }
        holes_in_basin.push(all);
        files.insert(format!("grids/occupancy_{r}.pgm"), grid.to_pgm());
        files.insert(format!("reports/domains_{r}.csv"), report.to_csv().into_bytes());
        files.insert(format!("renders/domains_{r}.ppm"), render_domains(&grid, &comps, &report));
        grids.push(summary);
    }
    files.insert("reports/grids.csv".into(), grids_csv(&grids).into_bytes());
    Ok(Outcome {
        rotation,
        expected_rotation: expected,
        grids,
        holes_in_basin,
        disk_diameters: Vec::new(),
        census: Vec::new(),
        cantor: Vec::new(),
        accumulation: None,
        wedges: None,
    })
}

/// Base map, its minimal-set membership test and a regular orbit seed.
struct ProductBase {
    f: TorusLift,
    factors: (CircleLift, CircleLift),
    measures: (f64, f64),
    member: Box<dyn Fn(Vec2) -> bool + Send + Sync>,
    seed: Vec2,
    /// Blow-up point and chart radius.
    anchor: Option<(Vec2, f64)>,
}

fn product_base(spec: &PipelineSpec, rng: &mut ChaCha8Rng) -> Result<ProductBase> {
    let id = spec.id;
    let (alpha, beta) = spec.rotation_pair()?;
    let denjoy = |a: f64| -> Result<(Arc<Denjoy>, CantorSetSpec)> {
        let (d, c) = build_denjoy(a, PIPELINE_SCHEDULE, 4096).map_err(context(id, "Denjoy factor"))?;
        Ok((Arc::new(d), c))
    };
    let (u1, u2): (f64, f64) = (rng.gen(), rng.gen());
    match id {
        ExampleId::Type2Annuli | ExampleId::Type2AnnuliConjugated { .. } | ExampleId::Type2WithDisks => {
            let (d, c) = denjoy(alpha)?;
            let second = rotation(beta);
            let f = product_map(d.clone(), second.clone());
            let seed = Vec2::new(d.embed(u1), u2);
            let anchor =
                (id == ExampleId::Type2WithDisks).then(|| (Vec2::new(d.embed(DISK_ANCHOR), 0.5), DISK_DELTA0));
            let m1 = c.measure();
            let c2 = c.clone();
            Ok(ProductBase {
                f,
                factors: (d, second),
                measures: (m1, 1.0),
                member: Box::new(move |p| c2.is_free(p.x, 0.0)),
                seed,
                anchor,
            })
        }
        ExampleId::Type3Cantor => {
            let (d1, c1) = denjoy(alpha)?;
            let (d2, c2) = denjoy(beta)?;
            let f = product_map(d1.clone(), d2.clone());
            let seed = Vec2::new(d1.embed(u1), d2.embed(u2));
            let measures = (c1.measure(), c2.measure());
            let (k1, k2) = (c1, c2);
            Ok(ProductBase {
                f,
                factors: (d1, d2),
                measures,
                member: Box::new(move |p| k1.is_free(p.x, 0.0) && k2.is_free(p.y, 0.0)),
                seed,
                anchor: None,
            })
        }
        ExampleId::Type3Extension => {
            let (z0, q1, q2) = quadratic_pair(alpha, beta).map_err(context(id, "quadratic factors"))?;
            let (d1, c1) = q1;
            let (d2, c2) = q2;
            let (w1, w2) = (c1.window.expect("window"), c2.window.expect("window"));
            let delta0 = 0.5 * (w1.1 - w1.0).rem_euclid(1.0).min((w2.1 - w2.0).rem_euclid(1.0));
            let (d1, d2) = (Arc::new(d1), Arc::new(d2));
            let f = product_map(d1.clone(), d2.clone());
            let seed = Vec2::new(d1.embed(u1), d2.embed(u2));
            let measures = (c1.measure(), c2.measure());
            let (k1, k2) = (c1, c2);
            Ok(ProductBase {
                f,
                factors: (d1, d2),
                measures,
                member: Box::new(move |p| k1.is_free(p.x, 0.0) && k2.is_free(p.y, 0.0)),
                seed,
                anchor: Some((z0, delta0)),
            })
        }
        ExampleId::Type1Da => unreachable!("DA handled separately"),
    }
}

type Factor = (Denjoy, CantorSetSpec);

/// Quadratic-gap factors anchored at `(0.37, 0.61)`.
pub fn quadratic_pair(alpha: f64, beta: f64) -> Result<(Vec2, Factor, Factor)> {
    let z0 = Vec2::new(0.37, 0.61);
    let mut p1 = QuadraticGapParams::new(z0.x, 1.0, 0.1);
    p1.alpha = alpha;
    let mut p2 = QuadraticGapParams::new(z0.y, 1.0, 0.1);
    p2.alpha = beta;
    Ok((z0, build_quadratic_gap_cantor(p1)?, build_quadratic_gap_cantor(p2)?))
}

/// Wedge check of the quadratic-gap product on an `nr×nt×nw` wedge grid, with orbit
/// exclusion, and of the linear-gap control at `(0.4, 0.55)`.
pub fn wedge_reports(alpha: f64, beta: f64, grid: (usize, usize, usize)) -> Result<(WedgeReport, WedgeReport)> {
    let (z0, (d1, c1), (d2, c2)) = quadratic_pair(alpha, beta)?;
    let (w1, w2) = (c1.window.expect("window"), c2.window.expect("window"));
    let delta0 = 0.5 * (w1.1 - w1.0).rem_euclid(1.0).min((w2.1 - w2.0).rem_euclid(1.0));
    let f = product_map(Arc::new(d1), Arc::new(d2));
    let wedges = wedge_grid(grid.0, grid.1, grid.2);
    let rep = wedge_sample_check(&c1, &c2, z0, delta0, &wedges, DEFAULT_TOL, Some((&*f, WEDGE_ORBIT_SPAN)));
    let cz = Vec2::new(0.4, 0.55);
    let k1 = linear_gap_control(cz.x, 0.2, 64.0, 1.2, 1e-15)?;
    let k2 = linear_gap_control(cz.y, 0.2, 64.0, 1.2, 1e-15)?;
    let control = wedge_sample_check(&k1, &k2, cz, 0.1, &wedges, DEFAULT_TOL, None);
    Ok((rep, control))
}

fn run_product(spec: &PipelineSpec, files: &mut BTreeMap<String, Vec<u8>>) -> Result<Outcome> {
    let id = spec.id;
    let (alpha, beta) = spec.rotation_pair()?;
    let mut rng = ChaCha8Rng::seed_from_u64(spec.seed);
    let base = product_base(spec, &mut rng)?;
    let rot_seeds = rotation_seeds(spec, &mut rng);

    let conj = spec.effective_matrix()?;
    let (f, seed, expected): (TorusLift, Vec2, Vec2) = match (id, conj) {
        (ExampleId::Type2AnnuliConjugated { .. }, Some(b)) => {
            // B∘F∘B⁻¹ carries vertical annuli to annuli along B·(0,1) = (p,q)
            let b_inv = b.inverse()?;
            let h = linear_conjugate(base.f.clone(), b_inv).map_err(context(id, "conjugation"))?;
            (h, b.apply(base.seed), b.apply(Vec2::new(alpha, beta)).wrap())
        }
        _ => (base.f.clone(), base.seed, Vec2::new(alpha, beta)),
    };

    let state: Option<Arc<BlowupState>> = match base.anchor {
        Some((z0, delta0)) => Some(Arc::new(
            run_blowup(base.f.clone(), z0, spec.stages, BlowupConfig::with_delta0(delta0))
                .map_err(context(id, "blow-up"))?,
        )),
        None => None,
    };

    let map: TorusLift = match &state {
        Some(s) => Arc::new(BlownUpMap { state: s.clone() }),
        None => f.clone(),
    };
    let rotation = rotation_vector_estimate(&*map, &rot_seeds, spec.rotation_steps).map_err(context(id, "rotation"))?;
    files.insert("reports/rotation.csv".into(), rotation.to_csv().into_bytes());
    files.insert("reports/rotation_summary.csv".into(), rotation_summary_csv(&rotation, expected).into_bytes());

    let markers: Vec<Vec2> = state.as_ref().map_or(Vec::new(), |s| s.disks().iter().map(|d| d.marker).collect());
    let mut grids = Vec::new();
    let mut cantor = Vec::new();
    let mut last = None;
    for &r in &spec.resolutions {
        let steps = spec.steps_at(r);
        let raw = match &state {
            Some(s) => blown_occupancy(s, seed, steps, r, 0),
            None => orbit_occupancy(&*f, seed, steps, r, 0).map_err(context(id, "occupancy"))?,
        };
        let mut grid = raw.clone();
        grid.dilate(1);
        let (summary, comps, report) = summarize(&grid, steps, &markers);
        if id == ExampleId::Type3Cantor {
            let first = fraction(&widen(&circle_occupancy(&*base.factors.0, seed.x, steps, r), 1));
            let second = fraction(&widen(&circle_occupancy(&*base.factors.1, seed.y, steps, r), 1));
            cantor.push(CantorOracle {
                resolution: r,
                grid_fraction: grid.marked_fraction(),
                first,
                second,
                product: first * second,
                measure_product: base.measures.0 * base.measures.1,
            });
        }
        files.insert(format!("grids/occupancy_{r}.pgm"), grid.to_pgm());
        files.insert(format!("reports/domains_{r}.csv"), report.to_csv().into_bytes());
        files.insert(format!("renders/domains_{r}.ppm"), render_domains(&grid, &comps, &report));
        grids.push(summary);
        last = Some((raw, grid));
    }
    files.insert("reports/grids.csv".into(), grids_csv(&grids).into_bytes());
    if !cantor.is_empty() {
        let mut s = String::from("resolution,grid_fraction,first,second,product,measure_product,relative_error\n");
        for c in &cantor {
            let _ = writeln!(
                s,
                "{},{:.6},{:.6},{:.6},{:.6},{:.6},{:.4e}",
                c.resolution,
                c.grid_fraction,
                c.first,
                c.second,
                c.product,
                c.measure_product,
                c.relative_error()
            );
        }
        files.insert("reports/cantor_oracle.csv".into(), s.into_bytes());
    }

    let mut census = Vec::new();
    let mut disk_diameters = Vec::new();
    let mut accumulation = None;
    let mut wedges = None;
    if let Some(s) = &state {
        let mut csv = String::from("disk,stage,diameter,window,zoom_resolution,hole_cells,touches_border,type\n");
        for d in s.disks() {
            disk_diameters.push((d.index, d.stage, d.diameter()));
            let c = zoom_census(s, d, &*base.member, CENSUS_RESOLUTION);
            let _ = writeln!(
                csv,
                "{},{},{:.6e},{:.6e},{},{},{},{}",
                c.index,
                c.stage,
                c.diameter,
                c.window,
                c.zoom_resolution,
                c.hole_cells,
                c.touches_border,
                c.domain_type.map_or("marked".into(), |t| t.name())
            );
            census.push(c);
        }
        files.insert("reports/disk_census.csv".into(), csv.into_bytes());
        files.insert("reports/boundaries.csv".into(), crate::blowup::boundaries_csv(s).into_bytes());

        if id == ExampleId::Type3Extension {
            let (raw, grid) = last.as_ref().expect("at least one resolution");
            let gamma0 = &s.disk(0).expect("disk 0").boundary;
            let dists = distances_to_marked(grid, gamma0, 8);
            let raw_dists = distances_to_marked(raw, gamma0, 8);
            let lo = |d: &[f64]| d.iter().copied().fold(f64::INFINITY, f64::min);
            let hi = |d: &[f64]| d.iter().copied().fold(0.0, f64::max);
            accumulation = Some(Accumulation {
                resolution: grid.resolution(),
                samples: dists.len(),
                min_cells: lo(&dists),
                max_cells: hi(&dists),
                raw_min_cells: lo(&raw_dists),
                raw_max_cells: hi(&raw_dists),
            });
            let mut a = String::from("sample,x,y,cells,raw_cells\n");
            for (k, ((p, d), e)) in gamma0.iter().zip(&dists).zip(&raw_dists).enumerate() {
                let _ = writeln!(a, "{k},{:.12},{:.12},{d:.4},{e:.4}", p.x, p.y);
            }
            files.insert("reports/accumulation.csv".into(), a.into_bytes());
            let (rep, control) = wedge_reports(alpha, beta, (10, 10, 5)).map_err(context(id, "wedge check"))?;
            let mut w = String::from("set,r,theta1,theta2,hit,x,y\n");
            for (name, r) in [("quadratic", &rep), ("linear_control", &control)] {
                for (wd, o) in &r.results {
                    let (hit, p) = match o {
                        crate::blowup::WedgeOutcome::Hit(p) => (1, *p),
                        crate::blowup::WedgeOutcome::Miss => (0, Vec2::new(f64::NAN, f64::NAN)),
                    };
                    let _ = writeln!(w, "{name},{:.3},{:.6},{:.6},{hit},{:.12},{:.12}", wd.r, wd.theta1, wd.theta2, p.x, p.y);
                }
            }
            files.insert("reports/wedges.csv".into(), w.into_bytes());
            wedges = Some(WedgeSummary {
                wedges: rep.results.len(),
                hits: rep.hits(),
                control_wedges: control.results.len(),
                control_misses: control.misses(),
            });
        }
    }
    Ok(Outcome {
        rotation,
        expected_rotation: expected,
        grids,
        holes_in_basin: Vec::new(),
        disk_diameters,
        census,
        cantor,
        accumulation,
        wedges,
    })
}

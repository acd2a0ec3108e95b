//! Verification suites, one per acceptance criterion, each a list of measured checks
//! against pinned tolerances.

use std::fmt::Write as _;
use std::sync::Arc;
use std::time::{Duration, Instant};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::ToPrimitive;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::blowup::{q_eval, run_blowup, BlowupConfig, BlowupState, Preimage};
use crate::circle::{build_denjoy, rotation, CircleMap, GapSchedule};
use crate::classify::synthetic::{brute_force_subgroup, disk_hole, disk_mark, strip};
use crate::classify::{classify_grid, complement_components, deck_subgroup, DomainType, OccupancyGrid};
use crate::da::{
    build_bump, build_da_map, contraction_bound, invariant_section, standard_matrix, BumpSpec, DaMap,
    CONTRACTION_SLACK,
};
use crate::error::{Error, Result};
use crate::geom::{circle_delta, hausdorff_to_polyline, is_simple_closed, torus_dist, Vec2};
use crate::pipeline::{run_pipeline, ExampleId, Outcome, PipelineSpec, DA_SCALE};
use crate::torus::{product_map, rotation_vector_estimate, translation_map, TorusLift};

/// One measured check.
#[derive(Debug, Clone, PartialEq)]
pub struct Check {
    pub name: String,
    pub passed: bool,
    pub measured: String,
    pub tolerance: String,
}

impl Check {
    pub fn new(name: impl Into<String>, passed: bool, measured: impl Into<String>, tolerance: impl Into<String>) -> Self {
        Check { name: name.into(), passed, measured: measured.into(), tolerance: tolerance.into() }
    }
}

/// The suites, numbered by acceptance criterion.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Suite {
    Rotation,
    Denjoy,
    Blowup,
    Radial,
    DaBounds,
    GraphTransform,
    DaPipeline,
    Classifier,
    Example3,
    Example4,
    Determinism,
}

impl Suite {
    pub fn all() -> [Suite; 11] {
        use Suite::*;
        [Rotation, Denjoy, Blowup, Radial, DaBounds, GraphTransform, DaPipeline, Classifier, Example3, Example4, Determinism]
    }

    pub fn criterion(&self) -> u32 {
        Suite::all().iter().position(|s| s == self).expect("listed") as u32 + 1
    }

    pub fn name(&self) -> &'static str {
        match self {
            Suite::Rotation => "rotation",
            Suite::Denjoy => "denjoy",
            Suite::Blowup => "blowup",
            Suite::Radial => "radial",
            Suite::DaBounds => "da-bounds",
            Suite::GraphTransform => "graph-transform",
            Suite::DaPipeline => "da-pipeline",
            Suite::Classifier => "classifier",
            Suite::Example3 => "example3",
            Suite::Example4 => "example4",
            Suite::Determinism => "determinism",
        }
    }

    pub fn parse(s: &str) -> Result<Suite> {
        Suite::all()
            .into_iter()
            .find(|x| x.name() == s || x.criterion().to_string() == s)
            .ok_or_else(|| Error::InvalidParameter(format!("unknown suite {s:?}")))
    }

    /// Wall-clock budget of the criterion.
    pub fn time_limit(&self) -> Duration {
        let s = match self {
            Suite::Rotation => 31,
            Suite::Denjoy => 10,
            Suite::Blowup => 300,
            Suite::Radial => 1,
            Suite::DaBounds => 60,
            Suite::GraphTransform => 120,
            Suite::DaPipeline => 600,
            Suite::Classifier => 30,
            Suite::Example3 => 600,
            Suite::Example4 => 900,
            Suite::Determinism => 900,
        };
        Duration::from_secs(s)
    }
}

/// Knobs of the suites.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct VerifyOptions {
    /// Blow-up stages of the blow-up suite.
    pub stages: usize,
    pub seed: u64,
}

impl Default for VerifyOptions {
    fn default() -> Self {
        VerifyOptions { stages: 4, seed: 1 }
    }
}

#[derive(Debug, Clone)]
pub struct SuiteReport {
    pub suite: Suite,
    pub checks: Vec<Check>,
    pub elapsed: Duration,
}

impl SuiteReport {
    pub fn within_time(&self) -> bool {
        self.elapsed <= self.suite.time_limit()
    }

    pub fn passed(&self) -> bool {
        self.within_time() && self.checks.iter().all(|c| c.passed)
    }

    /// One line per check plus a runtime line and a verdict line.
    pub fn render(&self) -> String {
        let mut s = String::new();
        let tag = |ok: bool| if ok { "PASS" } else { "FAIL" };
        for c in &self.checks {
            let _ = writeln!(
                s,
                "[{}] criterion {} {}: {} (measured {}; required {})",
                tag(c.passed),
                self.suite.criterion(),
                self.suite.name(),
                c.name,
                c.measured,
                c.tolerance
            );
        }
        let _ = writeln!(
            s,
            "[{}] criterion {} {}: runtime (measured {:.2} s; required < {} s)",
            tag(self.within_time()),
            self.suite.criterion(),
            self.suite.name(),
            self.elapsed.as_secs_f64(),
            self.suite.time_limit().as_secs()
        );
        let _ = writeln!(s, "criterion {} {}: {}", self.suite.criterion(), self.suite.name(), tag(self.passed()));
        s
    }
}

pub fn run_suite(suite: Suite, opts: VerifyOptions) -> Result<SuiteReport> {
    let start = Instant::now();
    let checks = match suite {
        Suite::Rotation => rotation_suite(opts)?,
        Suite::Denjoy => denjoy_suite(opts)?,
        Suite::Blowup => blowup_suite(opts)?,
        Suite::Radial => radial_suite()?,
        Suite::DaBounds => da_bounds_suite()?,
        Suite::GraphTransform => graph_transform_suite()?,
        Suite::DaPipeline => da_pipeline_suite(opts)?,
        Suite::Classifier => classifier_suite(opts)?,
        Suite::Example3 => example3_suite(opts)?,
        Suite::Example4 => example4_suite(opts)?,
        Suite::Determinism => determinism_suite(opts)?,
    };
    Ok(SuiteReport { suite, checks, elapsed: start.elapsed() })
}

fn e(x: f64) -> String {
    format!("{x:.3e}")
}

fn seeds(n: usize, seed: u64) -> Vec<Vec2> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..n).map(|_| Vec2::new(rng.gen(), rng.gen())).collect()
}

fn rotation_suite(opts: VerifyOptions) -> Result<Vec<Check>> {
    let mut out = Vec::new();
    let t = Instant::now();
    let f = translation_map(0.3, 0.7);
    let est = rotation_vector_estimate(&*f, &seeds(20, opts.seed), 50)?;
    let err = torus_dist(est.vector, Vec2::new(0.3, 0.7));
    let fast = t.elapsed();
    out.push(Check::new(
        "translation (0.3, 0.7) at n = 50: spread, Cauchy gap",
        est.seed_spread == 0.0 && est.cauchy_gap == 0.0,
        format!("spread {}, gap {}", e(est.seed_spread), e(est.cauchy_gap)),
        "both exactly 0",
    ));
    out.push(Check::new("translation estimate error", err < 1e-15, e(err), "< 1e-15"));
    out.push(Check::new(
        "translation runtime",
        fast < Duration::from_secs(1),
        format!("{:.3} s", fast.as_secs_f64()),
        "< 1 s",
    ));

    let t = Instant::now();
    let alpha = std::f64::consts::SQRT_2 - 1.0;
    let beta = 3f64.sqrt() - 1.0;
    let (d, _) = build_denjoy(alpha, GapSchedule::default(), 4096)?;
    let f = product_map(Arc::new(d), rotation(beta));
    let est = rotation_vector_estimate(&*f, &seeds(20, opts.seed), 100_000)?;
    let err = torus_dist(est.vector, Vec2::new(alpha, beta));
    let slow = t.elapsed();
    out.push(Check::new(
        "Denjoy(√2−1) × rotation(√3−1) at n = 1e5, 20 seeds",
        err < 1e-3,
        format!("error {}, spread {}", e(err), e(est.seed_spread)),
        "error < 1e-3",
    ));
    out.push(Check::new(
        "Denjoy product runtime",
        slow < Duration::from_secs(30),
        format!("{:.2} s", slow.as_secs_f64()),
        "< 30 s",
    ));
    Ok(out)
}

fn denjoy_suite(opts: VerifyOptions) -> Result<Vec<Check>> {
    let alpha = std::f64::consts::SQRT_2 - 1.0;
    let (d, _) = build_denjoy(alpha, GapSchedule::default(), 4096)?;
    let mut rng = ChaCha8Rng::seed_from_u64(opts.seed);
    let mut worst: f64 = 0.0;
    for _ in 0..10_000 {
        let x: f64 = rng.gen();
        let lhs = d.collapse(d.eval(x));
        let rhs = d.collapse(x) + alpha;
        worst = worst.max(circle_delta(rhs, lhs).abs());
    }
    Ok(vec![Check::new(
        "sup |π(f(x)) − (π(x) + α)| over 1e4 samples",
        worst < 1e-9,
        e(worst),
        "< 1e-9",
    )])
}

/// Base of the blow-up suite: Denjoy(√2−1) × rotation(√3−1) at a golden-angle point.
pub fn blowup_base() -> Result<(TorusLift, Vec2, f64)> {
    let (d, _) = build_denjoy(std::f64::consts::SQRT_2 - 1.0, GapSchedule::default(), 4096)?;
    let x0 = d.embed(0.5 * (5f64.sqrt() - 1.0));
    Ok((product_map(Arc::new(d), rotation(3f64.sqrt() - 1.0)), Vec2::new(x0, 0.5), 0.06))
}

fn blowup_suite(opts: VerifyOptions) -> Result<Vec<Check>> {
    let n = opts.stages;
    if n == 0 {
        return Err(Error::InvalidParameter("the blow-up suite needs at least one stage".into()));
    }
    let (f, z0, delta0) = blowup_base()?;
    let s = run_blowup(f.clone(), z0, n, BlowupConfig::with_delta0(delta0))?;
    let mut out = Vec::new();

    let disks = s.disks();
    let mut overlaps = 0;
    let mut non_simple = 0;
    for (i, a) in disks.iter().enumerate() {
        non_simple += (!is_simple_closed(&a.boundary)) as usize;
        overlaps += disks[i + 1..].iter().filter(|b| !a.disjoint_from(b)).count();
    }
    out.push(Check::new(
        format!("(a) disk count and disjointness at N = {n}"),
        disks.len() == 2 * n + 1 && overlaps == 0 && non_simple == 0,
        format!("{} disks, {overlaps} overlapping pairs, {non_simple} non-simple", disks.len()),
        format!("{} disks, 0, 0", 2 * n + 1),
    ));

    let mut worst_ratio: f64 = 0.0;
    for m in 0..=n {
        let bound = 0.25f64.powi(m as i32 + 2);
        let max = disks.iter().filter(|d| d.stage == m).map(|d| d.diameter()).fold(0.0, f64::max);
        worst_ratio = worst_ratio.max(max / bound);
    }
    out.push(Check::new(
        "(b) stage-n diameters ≤ (1/4)^(n+2)",
        worst_ratio <= 1.0,
        format!("max diameter/bound {worst_ratio:.4}"),
        "≤ 1",
    ));

    let ring: Vec<f64> = (0..256).map(|i| std::f64::consts::TAU * i as f64 / 256.0).collect();
    let span = n as i64 - 1;
    let mut worst_h: f64 = 0.0;
    for k in -span..=span {
        let img: Vec<Vec2> =
            ring.iter().map(|&t| s.boundary_image(k, t, 1e-8)).collect::<Option<_>>().ok_or_else(|| {
                Error::InvalidParameter(format!("boundary of disk {k} has no image"))
            })?;
        let next = s.disk(k + 1).expect("disk k+1");
        worst_h = worst_h.max(hausdorff_to_polyline(&img, &next.boundary));
    }
    out.push(Check::new(
        format!("(c) Hausdorff f_N(γ_k) ↔ γ_(k+1), |k| ≤ {span}"),
        worst_h < 1e-6 * delta0,
        e(worst_h),
        format!("< {}", e(1e-6 * delta0)),
    ));

    out.push(semiconjugacy_check(&s, &f, opts.seed));
    Ok(out)
}

fn semiconjugacy_check(s: &BlowupState, f: &TorusLift, seed: u64) -> Check {
    let n = s.stage();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let (mut count, mut worst, mut tries) = (0, 0.0f64, 0);
    while count < 1000 && tries < 100_000 {
        tries += 1;
        // half the samples near the disks, where the construction acts
        let x = if count % 2 == 0 {
            Vec2::new(rng.gen(), rng.gen())
        } else {
            let d = &s.disks()[rng.gen_range(0..s.disks().len())];
            d.marker + Vec2::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)) * (2.0 * d.diameter())
        };
        let Preimage::Regular(p) = s.phi(x, n) else { continue };
        let Some(y) = s.eval_stage(x, n) else { continue };
        worst = worst.max(torus_dist(s.collapse(y), f.eval(p)));
        count += 1;
    }
    Check::new(
        "(d) φ_N ∘ f_N = f ∘ φ_N on samples off the disks",
        count == 1000 && worst < 1e-8,
        format!("{count} samples, max defect {}", e(worst)),
        "1000 samples, < 1e-8",
    )
}

fn rational(n: i64, d: i64) -> BigRational {
    BigRational::new(BigInt::from(n), BigInt::from(d))
}

/// `q_ε(r)` in exact rationals through the rescaled Möbius maps.
pub fn q_exact(r: &BigRational, eps: &BigRational, eps0: &BigRational) -> BigRational {
    let one = rational(1, 1);
    let g = |r: &BigRational, e: &BigRational| (r + e) / (&one + r * e);
    let g_inv = |s: &BigRational, e: &BigRational| (s - e) / (&one - s * e);
    let eps_p = (eps + eps0) / rational(2, 1);
    let t = g_inv(&(r / eps), &(eps0 / eps));
    eps * g(&t, &(&eps_p / eps))
}

fn radial_suite() -> Result<Vec<Check>> {
    let (eps, eps0) = (0.8, 0.5);
    let outer = q_eval(eps, 0.0, eps, eps0)?.0;
    let inner = q_eval(eps0, 0.0, eps, eps0)?.0;
    let target = 0.5 * (eps + eps0);
    let exact = q_exact(&rational(7, 10), &rational(4, 5), &rational(1, 2));
    let exact_f = exact.to_f64().expect("finite");
    let got = q_eval(0.7, 0.0, eps, eps0)?.0;
    Ok(vec![
        Check::new("q_ε(ε) = ε", (outer - eps).abs() <= 1e-12, e((outer - eps).abs()), "≤ 1e-12"),
        Check::new(
            "q_ε(ε₀) = ε′ = (ε + ε₀)/2",
            (inner - target).abs() <= 1e-12,
            e((inner - target).abs()),
            "≤ 1e-12",
        ),
        Check::new(
            format!("q_0.8(0.7) at ε₀ = 0.5 against exact {exact}"),
            (got - exact_f).abs() <= 1e-10 && (got - 0.75356).abs() < 5e-5,
            format!("{got:.12} (off {})", e((got - exact_f).abs())),
            "≤ 1e-10 and ≈ 0.75356",
        ),
    ])
}

fn da_map() -> Result<DaMap> {
    let a = standard_matrix();
    let (lu, ls) = DaMap::eigenvalues(&a)?;
    build_da_map(a, BumpSpec::standard(lu, ls), DA_SCALE)
}

fn da_bounds_suite() -> Result<Vec<Check>> {
    let g = da_map()?;
    let bumps = build_bump(BumpSpec::standard(g.lambda_u, g.lambda_s))?;
    let (delta, v, t0) = (bumps.spec.delta, bumps.spec.v, bumps.t0);
    let r = 1024;
    let (mut c_bad, mut upper_bad, mut lower_bad, mut strict_bad) = (0usize, 0usize, 0usize, 0usize);
    let (mut c_max, mut n_min, mut n_max) = (0.0f64, f64::INFINITY, 0.0f64);
    for i in 0..r {
        for j in 0..r {
            // the support |x| < 2, |y| < 1 with a margin where the map is linear
            let x = -2.5 + 5.0 * (i as f64 + 0.5) / r as f64;
            let y = -1.5 + 3.0 * (j as f64 + 0.5) / r as f64;
            let d = g.local_derivative(x, y);
            let n = d.n.abs();
            c_max = c_max.max(d.c.abs());
            n_min = n_min.min(n);
            n_max = n_max.max(n);
            c_bad += (d.c.abs() > 2.0 * delta) as usize;
            upper_bad += (n > v) as usize;
            lower_bad += (n < g.lambda_s) as usize;
            if y.abs() >= t0 || x.abs() >= 1.0 {
                strict_bad += (n >= 1.0) as usize;
            }
        }
    }
    Ok(vec![
        Check::new("|c| ≤ 2δ", c_bad == 0, format!("{c_bad} violations, max {c_max:.4}"), format!("0, ≤ {:.4}", 2.0 * delta)),
        Check::new("|N| ≤ v", upper_bad == 0, format!("{upper_bad} violations, max {n_max:.4}"), format!("0, ≤ {v}")),
        Check::new(
            "λ_s ≤ |N|",
            lower_bad == 0,
            format!("{lower_bad} violations, min {n_min:.4}"),
            format!("0, ≥ {:.4}", g.lambda_s),
        ),
        Check::new(
            "|N| < 1 where |y| ≥ t₀ or |x| ≥ 1",
            strict_bad == 0,
            format!("{strict_bad} violations"),
            "0",
        ),
    ])
}

fn graph_transform_suite() -> Result<Vec<Check>> {
    let g = da_map()?;
    let bumps = build_bump(BumpSpec::standard(g.lambda_u, g.lambda_s))?;
    let s = invariant_section(&g, 512, 200, 1e-12)?;
    let bound = contraction_bound(&g) + CONTRACTION_SLACK;
    let sup_bound = 2.0 * bumps.spec.delta / (g.lambda_u - bumps.spec.v);
    let lin = DaMap::unperturbed(standard_matrix())?;
    let s0 = invariant_section(&lin, 512, 200, 1e-12)?;
    Ok(vec![
        Check::new(
            "successive sup-difference ratios",
            !s.ratios.is_empty() && s.max_ratio() <= bound,
            format!("max {:.4} over {} sweeps", s.max_ratio(), s.ratios.len()),
            format!("≤ ν/λ_u + 0.05 = {bound:.4}"),
        ),
        Check::new("final sup|S|", s.sup() <= sup_bound, format!("{:.4}", s.sup()), format!("≤ 2δ/(λ_u − ν) = {sup_bound:.4}")),
        Check::new("unperturbed section", s0.sup() == 0.0, e(s0.sup()), "exactly 0"),
    ])
}

fn spread_check(name: &str, o: &Outcome) -> Check {
    Check::new(
        format!("{name}: rotation seed spread"),
        o.rotation.seed_spread < 1e-2,
        e(o.rotation.seed_spread),
        "< 1e-2",
    )
}

fn da_pipeline_suite(opts: VerifyOptions) -> Result<Vec<Check>> {
    let mut spec = PipelineSpec::new(ExampleId::Type1Da);
    spec.seed = opts.seed;
    let b = run_pipeline(&spec)?;
    let o = &b.outcome;
    let phi = 0.5 * (1.0 + 5f64.sqrt());
    let e1 = std::f64::consts::E;
    let want = Vec2::new(e1.rem_euclid(1.0), (e1 * phi).rem_euclid(1.0));
    let err = torus_dist(o.rotation.vector, want);
    let mut out = vec![Check::new(
        format!("rotation at n = {} against (e mod 1, eφ mod 1)", o.rotation.horizon),
        err < 1e-2,
        e(err),
        "< 1e-2",
    )];
    out.push(spread_check("type1_da", o));
    for (g, basin) in o.grids.iter().zip(&o.holes_in_basin) {
        out.push(Check::new(
            format!("R = {}: marked set 8-connected", g.resolution),
            g.marked_components == 1,
            format!("{} components", g.marked_components),
            "1",
        ));
        out.push(Check::new(
            format!("R = {}: complement all Trivial", g.resolution),
            g.type_set == [DomainType::Trivial],
            format!("{} components, types {}", g.components, types(&g.type_set)),
            "trivial only",
        ));
        out.push(Check::new(
            format!("R = {}: every hole holds a basin point of the repeller", g.resolution),
            *basin,
            basin.to_string(),
            "true",
        ));
    }
    Ok(out)
}

fn types(t: &[DomainType]) -> String {
    t.iter().map(|x| x.name()).collect::<Vec<_>>().join(" ")
}

fn classifier_suite(opts: VerifyOptions) -> Result<Vec<Check>> {
    let mut out = Vec::new();
    let expect = |g: &OccupancyGrid, want: DomainType| -> (bool, String) {
        let (_, rep) = classify_grid(g, 8);
        let ok = !rep.components.is_empty() && rep.components.iter().all(|c| c.domain_type == want);
        (ok, types(&rep.type_set()))
    };
    let (ok, got) = expect(&disk_hole(64, Vec2::new(0.4, 0.6), 0.1), DomainType::Trivial);
    out.push(Check::new("disk → Trivial", ok, got, "trivial"));
    for (p, q) in [(0, 1), (1, 0), (1, 1), (2, 1)] {
        let (ok, got) = expect(&strip(48, p, q), DomainType::Essential(p, q));
        out.push(Check::new(format!("strip ({p},{q}) → Essential({p},{q})"), ok, got, format!("essential({p},{q})")));
    }
    let (ok, got) = expect(&disk_mark(40, Vec2::new(0.5, 0.5), 0.15), DomainType::DoublyEssential);
    out.push(Check::new("complement of disk → DoublyEssential", ok, got, "doubly_essential"));

    let mut grids = vec![
        disk_hole(24, Vec2::new(0.5, 0.5), 0.2),
        strip(24, 0, 1),
        strip(24, 1, 0),
        strip(24, 1, 1),
        strip(24, 2, 1),
        disk_mark(24, Vec2::new(0.5, 0.5), 0.2),
    ];
    let mut rng = ChaCha8Rng::seed_from_u64(opts.seed);
    for _ in 0..40 {
        let bits: Vec<bool> = (0..100).map(|_| rng.gen_bool(0.45)).collect();
        grids.push(OccupancyGrid::from_fn(10, |i, j| bits[j * 10 + i]));
    }
    let (mut agree, mut total) = (0, 0);
    for g in &grids {
        for c in complement_components(g) {
            total += 1;
            agree += (deck_subgroup(g, &c, 8).subgroup == brute_force_subgroup(g, c.cells[0], 8)) as usize;
        }
    }
    out.push(Check::new(
        "agreement with the brute-force path oracle on 8×8 covers",
        agree == total,
        format!("{agree}/{total}"),
        "100%",
    ));
    Ok(out)
}

fn run_example(id: ExampleId, opts: VerifyOptions) -> Result<Outcome> {
    let mut spec = PipelineSpec::new(id);
    spec.seed = opts.seed;
    Ok(run_pipeline(&spec)?.outcome)
}

fn example3_suite(opts: VerifyOptions) -> Result<Vec<Check>> {
    let mut out = Vec::new();
    let plain = run_example(ExampleId::Type2Annuli, opts)?;
    let conj = run_example(ExampleId::Type2AnnuliConjugated { p: 1, q: 1 }, opts)?;
    let disks = run_example(ExampleId::Type2WithDisks, opts)?;
    for (name, o, want) in [
        ("type2_annuli", &plain, DomainType::Essential(0, 1)),
        ("type2_annuli_conjugated(1,1)", &conj, DomainType::Essential(1, 1)),
    ] {
        for g in &o.grids {
            out.push(Check::new(
                format!("{name} R = {}: every component {}", g.resolution, want.name()),
                g.type_set == [want],
                format!("{} components, types {}", g.components, types(&g.type_set)),
                want.name(),
            ));
        }
        out.push(spread_check(name, o));
    }
    let n = disks.census.len();
    let bounded = disks.census.iter().filter(|c| c.is_trivial_hole()).count();
    let stages = disks.census.iter().map(|c| c.stage).max().unwrap_or(0);
    for g in &disks.grids {
        let disk0 = g.disk_types.first().copied().flatten();
        out.push(Check::new(
            format!("type2_with_disks R = {}: Essential(0,1) plus Trivial holes, each a disk", g.resolution),
            g.type_set == [DomainType::Trivial, DomainType::Essential(0, 1)]
                && disk0 == Some(DomainType::Trivial)
                && g.trivial == g.disk_types.iter().filter(|t| **t == Some(DomainType::Trivial)).count(),
            format!(
                "types {}, {} trivial on the main grid, {} disks resolved there",
                types(&g.type_set),
                g.trivial,
                g.disk_types.iter().filter(|t| t.is_some()).count()
            ),
            "essential(0,1) and trivial; trivial holes = resolved disks",
        ));
    }
    out.push(Check::new(
        format!("type2_with_disks N = {stages}: Trivial components from the disks"),
        bounded >= 2 * stages + 1 && n == 2 * stages + 1,
        format!("{bounded} of {n} disks are bounded Trivial holes in their census windows"),
        format!("≥ {}", 2 * stages + 1),
    ));
    out.push(spread_check("type2_with_disks", &disks));
    for (name, o) in [("type2_annuli", &plain), ("type2_annuli_conjugated(1,1)", &conj), ("type2_with_disks", &disks)] {
        let first = &o.grids[0];
        let same = o.grids.iter().all(|g| g.type_set == first.type_set && g.disk_types == first.disk_types);
        let res: Vec<String> = o.grids.iter().map(|g| g.resolution.to_string()).collect();
        out.push(Check::new(
            format!("{name}: type assignments identical at R = {}", res.join(", ")),
            same,
            o.grids.iter().map(|g| format!("[{}]", types(&g.type_set))).collect::<Vec<_>>().join(" vs "),
            "identical",
        ));
    }
    Ok(out)
}

fn example4_suite(opts: VerifyOptions) -> Result<Vec<Check>> {
    let mut out = Vec::new();
    let ext = run_example(ExampleId::Type3Extension, opts)?;
    let cantor = run_example(ExampleId::Type3Cantor, opts)?;
    let w = ext.wedges.as_ref().expect("wedge summary");
    out.push(Check::new(
        "wedge check, quadratic-gap product, 10×10×5 grid",
        w.hits == w.wedges && w.wedges == 500,
        format!("{}/{} hits", w.hits, w.wedges),
        "all hit",
    ));
    out.push(Check::new(
        "wedge check, linear-gap control",
        w.control_misses >= 1,
        format!("{} misses", w.control_misses),
        "≥ 1 miss",
    ));
    let a = ext.accumulation.as_ref().expect("accumulation");
    out.push(Check::new(
        format!("γ₀ approached by marked cells at R = {}", a.resolution),
        a.raw_min_cells <= 2.0 && a.min_cells <= 2.0,
        format!(
            "min {:.3} cells raw, {:.3} dilated (max over {} samples {:.3} raw)",
            a.raw_min_cells, a.min_cells, a.samples, a.raw_max_cells
        ),
        "≤ 2 cells",
    ));
    for g in &ext.grids {
        out.push(Check::new(
            format!("type3_extension R = {}: DoublyEssential plus the disk hole", g.resolution),
            g.type_set.contains(&DomainType::DoublyEssential)
                && g.disk_types.first().copied().flatten() == Some(DomainType::Trivial),
            format!("types {}", types(&g.type_set)),
            "doubly_essential present; disk 0 trivial",
        ));
    }
    let bounded = ext.census.iter().filter(|c| c.is_trivial_hole()).count();
    out.push(Check::new(
        "type3_extension: every disk a bounded Trivial hole",
        bounded == ext.census.len(),
        format!("{bounded}/{}", ext.census.len()),
        "all",
    ));
    for c in &cantor.cantor {
        out.push(Check::new(
            format!("type3_cantor R = {}: marked fraction vs 1-D product oracle", c.resolution),
            c.relative_error() <= 0.05,
            format!(
                "{:.4} vs {:.4} (relative {:.2e}; measure product {:.4})",
                c.grid_fraction,
                c.product,
                c.relative_error(),
                c.measure_product
            ),
            "within 5%",
        ));
    }
    for g in &cantor.grids {
        out.push(Check::new(
            format!("type3_cantor R = {}: one DoublyEssential component", g.resolution),
            g.type_set == [DomainType::DoublyEssential] && g.components == 1,
            format!("{} components, types {}", g.components, types(&g.type_set)),
            "1, doubly_essential",
        ));
    }
    let fractions: Vec<f64> =
        cantor.grids.iter().map(|g| g.max_marked_component as f64 / (g.resolution * g.resolution) as f64).collect();
    out.push(Check::new(
        "type3_cantor: largest marked component shrinks with resolution",
        fractions.windows(2).all(|w| w[1] < w[0]),
        fractions.iter().map(|f| format!("{f:.4}")).collect::<Vec<_>>().join(" → "),
        "strictly decreasing",
    ));
    out.push(spread_check("type3_cantor", &cantor));
    out.push(spread_check("type3_extension", &ext));
    Ok(out)
}

/// Reduced-size pipeline parameters for the in-process determinism check.
pub fn small_spec(id: ExampleId, seed: u64) -> PipelineSpec {
    let mut spec = PipelineSpec::new(id);
    spec.resolutions = vec![64, 128];
    spec.orbit_steps = 100_000;
    spec.rotation_steps = 2_000;
    spec.rotation_seeds = 4;
    spec.seed = seed;
    spec
}

fn determinism_suite(opts: VerifyOptions) -> Result<Vec<Check>> {
    let mut out = Vec::new();
    for id in ExampleId::all() {
        let spec = small_spec(id, opts.seed);
        let a = run_pipeline(&spec)?;
        let b = run_pipeline(&spec)?;
        let differing: Vec<&String> =
            a.files.iter().filter(|(k, v)| b.files.get(*k) != Some(*v)).map(|(k, _)| k).collect();
        let same_set = a.files.keys().eq(b.files.keys());
        out.push(Check::new(
            format!("{}: artifacts byte-identical across two runs", id.name()),
            differing.is_empty() && same_set,
            format!("{} files, {} differing", a.files.len(), differing.len()),
            "0 differing",
        ));
    }
    Ok(out)
}

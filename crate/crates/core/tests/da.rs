use std::sync::{Arc, OnceLock};

use num_bigint::BigInt;
use num_traits::ToPrimitive;
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use toral_core::classify::{classify_grid, complement_components, marked_components, orbit_occupancy, DomainType};
use toral_core::da::*;
use toral_core::geom::{torus_dist, wrap01, Vec2};
use toral_core::torus::*;
use toral_core::Error;

const E: f64 = std::f64::consts::E;

fn g() -> Arc<DaMap> {
    static G: OnceLock<Arc<DaMap>> = OnceLock::new();
    G.get_or_init(|| {
        let a = standard_matrix();
        let (lu, ls) = DaMap::eigenvalues(&a).unwrap();
        Arc::new(build_da_map(a, BumpSpec::standard(lu, ls), 0.12).unwrap())
    })
    .clone()
}

fn section() -> Arc<SectionGrid> {
    static S: OnceLock<Arc<SectionGrid>> = OnceLock::new();
    S.get_or_init(|| Arc::new(invariant_section(&g(), 512, 100, 1e-12).unwrap())).clone()
}

fn bumps() -> BumpPair {
    g().bumps.unwrap()
}

fn to_plane(g: &DaMap, x: f64, y: f64) -> Vec2 {
    g.e1 * (x * g.scale) + g.e2 * (y * g.scale)
}

/// `(e·φ) mod 1` from 30-digit decimal expansions in integer arithmetic.
fn e_phi_frac() -> f64 {
    let e: BigInt = "271828182845904523536028747135".parse().unwrap();
    let phi: BigInt = "161803398874989484820458683437".parse().unwrap();
    let scale = BigInt::from(10u8).pow(29);
    let prod = e * phi;
    let whole = &scale * &scale;
    let frac = &prod % &whole;
    (frac / BigInt::from(10u8).pow(40)).to_f64().unwrap() / 1e18
}

// bump

#[test]
fn bump_plateaus() {
    let b = bumps();
    assert_eq!(b.lambda.eval(-0.5), 1.1);
    assert_eq!(b.lambda.eval(0.0), 1.1);
    assert_eq!(b.lambda.eval(2.0), b.spec.kappa);
    assert_eq!(b.lambda.eval(1.0), b.spec.kappa);
    assert_eq!(b.lambda_bar.eval(0.01), b.spec.v_bar);
    assert_eq!(b.lambda_bar.eval(5.0), b.spec.kappa);
}

#[test]
fn bump_log_slope_bounded_by_finite_differences() {
    let b = bumps();
    let h = 1e-4;
    for bump in [b.lambda, b.lambda_bar] {
        let mut t = h;
        let mut worst: f64 = 0.0;
        while t < 3.0 {
            let mid = t + 0.5 * h;
            let slope = mid * (bump.eval(t + h) - bump.eval(t)) / h;
            assert!(slope <= 1e-9, "λ increases at t = {t}");
            worst = worst.max(-slope);
            t += h;
        }
        assert!(worst <= b.spec.delta + 1e-6, "max |tλ'| = {worst}");
        // the decay saturates the bound
        assert!(worst > b.spec.delta - 1e-3);
    }
}

#[test]
fn eta_bounds_on_grid() {
    let b = bumps();
    let kappa = b.spec.kappa;
    for bump in [b.lambda, b.lambda_bar] {
        for i in 0..=30_000 {
            let t = i as f64 * 1e-4;
            let gap = bump.eval(t) - bump.eta_prime(t);
            assert!((-1e-12..=b.spec.delta + 1e-12).contains(&gap), "λ − η' = {gap} at {t}");
            let lift = bump.eta(t) - kappa * t;
            assert!((-1e-12..=b.spec.delta + 1e-12).contains(&lift), "η − κt = {lift} at {t}");
        }
    }
}

#[test]
fn bumps_share_the_line_past_t0() {
    let b = bumps();
    assert!((b.lambda.eval(b.t0) - b.spec.rho_floor).abs() < 1e-12);
    for i in 0..2000 {
        let t = b.t0 + i as f64 * 1e-3;
        assert!((b.lambda.eval(t) - b.lambda_bar.eval(t)).abs() < 1e-12, "t = {t}");
    }
    for i in 0..2000 {
        let t = b.t0 * i as f64 / 2000.0;
        assert!(b.lambda.eval(t) >= b.lambda_bar.eval(t) - 1e-15);
    }
}

#[test]
fn target_change_leaves_the_head_alone() {
    let b = bumps();
    let k2 = 0.45;
    let other = b.lambda.with_target(k2).unwrap();
    for i in 0..=20_000 {
        let t = i as f64 * 1e-4;
        let d = other.eval(t) - b.lambda.eval(t);
        if t <= b.t0 {
            assert_eq!(d, 0.0, "t = {t}");
        }
        assert!((-1e-12..=k2 - b.spec.kappa + 1e-12).contains(&d), "t = {t}: {d}");
    }
}

#[test]
fn infeasible_bump_reports_inequality() {
    let (lu, ls) = DaMap::eigenvalues(&standard_matrix()).unwrap();
    let spec = BumpSpec { delta: 0.02, ..BumpSpec::standard(lu, ls) };
    match build_bump(spec) {
        Err(Error::BumpInfeasible { need, limit }) => {
            assert!(need > limit);
            assert!((need - ((1.1 - ls) / 0.02 + 0.1)).abs() < 1e-12);
        }
        other => panic!("expected infeasible, got {other:?}"),
    }
}

#[test]
fn parameter_chain_is_enforced() {
    let (lu, ls) = DaMap::eigenvalues(&standard_matrix()).unwrap();
    let base = BumpSpec::standard(lu, ls);
    for bad in [
        BumpSpec { v: 0.9, ..base },
        BumpSpec { v: 3.0, ..base },
        BumpSpec { rho_floor: 0.3, ..base },
        BumpSpec { v_bar: 0.75, ..base },
        BumpSpec { v_bar: 0.45, ..base },
        BumpSpec { delta: 0.55, ..base },
    ] {
        assert!(matches!(build_bump(bad), Err(Error::InvalidParameter(_))), "{bad:?}");
    }
}

// partition

#[test]
fn partition_examples() {
    let p = build_partition();
    assert_eq!(p.chi(0, 0.0), 1.0);
    assert_eq!(p.chi(2, 3.0), 1.0);
    assert!((p.chi(0, 1.5) + p.chi(1, 1.5) + p.chi(2, 1.5) - 1.0).abs() < 1e-12);
    assert_eq!(p.chi(0, 1.2), 0.0);
    assert_eq!(p.chi(2, 0.8), 0.0);
}

#[test]
fn partition_slopes_bounded() {
    let p = build_partition();
    let h = 1e-5;
    for i in 0..=40_000 {
        let t = -2.5 + i as f64 * 1.25e-4;
        for k in 0..3 {
            let fd = (p.chi(k, t + h) - p.chi(k, t - h)) / (2.0 * h);
            assert!(fd.abs() <= 2.0, "χ{k}' = {fd} at {t}");
            assert!((fd - p.chi_prime(k, t)).abs() < 1e-4, "χ{k}' mismatch at {t}");
        }
    }
}

proptest! {
    #[test]
    fn partition_even_and_sums_to_one(t in -3.0f64..3.0) {
        let p = build_partition();
        let sum: f64 = (0..3).map(|k| p.chi(k, t)).sum();
        prop_assert!((sum - 1.0).abs() < 1e-12);
        for k in 0..3 {
            prop_assert_eq!(p.chi(k, t), p.chi(k, -t));
            prop_assert!((0.0..=1.0).contains(&p.chi(k, t)));
        }
    }
}

// map

#[test]
fn linear_outside_the_support() {
    let g = g();
    let mut rng = ChaCha8Rng::seed_from_u64(1);
    let mut checked = 0;
    while checked < 2000 {
        let z = Vec2::new(rng.gen_range(-2.0..2.0), rng.gen_range(-2.0..2.0));
        let (_, x, y) = g.local(z);
        if x.abs() > 2.0 || y.abs() > 1.0 {
            assert!((g.eval(z) - g.a.apply(z)).norm() < 1e-12);
            checked += 1;
        }
    }
}

#[test]
fn origin_is_a_repeller() {
    let g = g();
    let d = g.local_derivative(0.0, 0.0);
    assert_eq!(d.n, 1.1);
    assert_eq!(d.c, 0.0);
    assert_eq!(g.eval(g.repeller()), g.repeller());
}

#[test]
fn saddles_are_fixed() {
    let g = g();
    assert!((g.bumps.unwrap().lambda.eval(g.r0) - 1.0).abs() < 1e-12);
    for z in g.saddles() {
        assert!((g.eval(z) - z).norm() < 1e-14);
        let d = g.derivative(z);
        // saddle: expanding along E1, contracting along E2
        assert!(d.n < 1.0 && d.n > 0.0);
    }
}

#[test]
fn derivative_bounds_on_verification_grid() {
    let g = g();
    let b = bumps();
    let delta = b.spec.delta;
    let (mut c_bad, mut n_bad, mut strict_bad) = (0, 0, 0);
    let mut n_min = f64::INFINITY;
    let r = 1024;
    for i in 0..r {
        for j in 0..r {
            let x = -2.5 + 5.0 * (i as f64 + 0.5) / r as f64;
            let y = -1.5 + 3.0 * (j as f64 + 0.5) / r as f64;
            let d = g.local_derivative(x, y);
            c_bad += (d.c.abs() > 2.0 * delta) as usize;
            n_bad += (d.n.abs() > b.spec.v) as usize;
            if y.abs() >= b.t0 || x.abs() >= 1.0 {
                strict_bad += (d.n.abs() >= 1.0) as usize;
            }
            n_min = n_min.min(d.n);
        }
    }
    assert_eq!((c_bad, n_bad, strict_bad), (0, 0, 0));
    // provable floor of the vertical derivative
    assert!(n_min >= g.lambda_s - delta);
}

#[test]
fn vertical_derivative_dips_below_stable_eigenvalue() {
    // along x = 0, ∫₀¹ η' = η(1) − η(0) = κ with η'(0) = v > κ, so η' < κ somewhere
    let g = g();
    let b = bumps();
    let integral: f64 = (0..100_000).map(|i| b.lambda.eta_prime((i as f64 + 0.5) * 1e-5) * 1e-5).sum();
    assert!((integral - g.lambda_s).abs() < 1e-6);
    let dip = (0..10_000).map(|i| g.local_derivative(0.0, i as f64 * 1e-4).n).fold(f64::INFINITY, f64::min);
    assert!(dip < g.lambda_s);
}

#[test]
fn non_hyperbolic_matrix_rejected() {
    let (lu, ls) = DaMap::eigenvalues(&standard_matrix()).unwrap();
    let spec = BumpSpec::standard(lu, ls);
    let m = IntegerMatrix { a: 1, b: 1, c: 0, d: 1 };
    assert!(matches!(build_da_map(m, spec, 0.12), Err(Error::NotHyperbolic { .. })));
    let m = IntegerMatrix { a: 2, b: 1, c: 1, d: 2 };
    assert!(matches!(build_da_map(m, spec, 0.12), Err(Error::NotUnimodular { .. })));
    assert!(build_da_map(standard_matrix(), spec, 0.4).is_err());
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(400))]

    #[test]
    fn inverse_round_trip(x in -1.0f64..1.0, y in -1.0f64..1.0) {
        let g = g();
        let z = Vec2::new(x, y);
        prop_assert!((g.eval(g.eval_inv(z)) - z).norm() < 1e-12);
        prop_assert!((g.eval_inv(g.eval(z)) - z).norm() < 1e-12);
    }

    #[test]
    fn derivative_matches_central_differences(x in -2.2f64..2.2, y in -1.2f64..1.2) {
        let g = g();
        let h = 1e-6;
        let ly = |x: f64, y: f64| g.l_value(x, y) * y;
        let c_fd = (ly(x + h, y) - ly(x - h, y)) / (2.0 * h);
        let n_fd = (ly(x, y + h) - ly(x, y - h)) / (2.0 * h);
        let d = g.local_derivative(x, y);
        prop_assert!((d.c - c_fd).abs() < 1e-5, "c {} vs {}", d.c, c_fd);
        prop_assert!((d.n - n_fd).abs() < 1e-5, "N {} vs {}", d.n, n_fd);
    }

    #[test]
    fn integer_equivariance(x in 0.0f64..1.0, y in 0.0f64..1.0, p in -3i64..3, q in -3i64..3) {
        let g = g();
        let z = Vec2::new(x, y);
        let n = Vec2::new(p as f64, q as f64);
        prop_assert!((g.eval(z + n) - (g.eval(z) + g.a.apply(n))).norm() < 1e-12);
    }
}

// section

#[test]
fn unperturbed_section_vanishes_after_one_sweep() {
    let g0 = DaMap::unperturbed(standard_matrix()).unwrap();
    let s = invariant_section(&g0, 64, 10, 1e-12).unwrap();
    assert_eq!(s.history, vec![0.0]);
    assert_eq!(s.sup(), 0.0);
}

#[test]
fn section_contracts_into_the_cone() {
    let g = g();
    let s = section();
    let bound = contraction_bound(&g) + CONTRACTION_SLACK;
    assert!(!s.ratios.is_empty());
    for &r in &s.ratios {
        assert!(r <= bound, "ratio {r} above {bound}");
    }
    assert!(*s.history.last().unwrap() < 1e-12);
    let cone = cone_radius(&g);
    assert!(cone <= 1.0);
    assert!(s.sup() <= cone, "sup {} above cone {cone}", s.sup());
    assert!(s.sup() > 0.0);
}

#[test]
fn section_is_invariant() {
    let g = g();
    let s = section();
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    for _ in 0..2000 {
        let z = Vec2::new(rng.gen(), rng.gen());
        let d = g.derivative(z);
        let pushed = (d.c + d.n * s.value(z)) / g.lambda_u;
        assert!((s.value(g.eval(z)) - pushed).abs() < 2e-3);
    }
}

#[test]
fn section_pgm_header() {
    let s = invariant_section(&g(), 32, 50, 1e-10).unwrap();
    let bytes = s.to_pgm(cone_radius(&g()));
    assert!(bytes.starts_with(b"P5\n32 32\n255\n"));
    assert_eq!(bytes.len(), 13 + 32 * 32);
}

// leaves

#[test]
fn unperturbed_leaves_are_straight() {
    let g0 = DaMap::unperturbed(standard_matrix()).unwrap();
    let s = invariant_section(&g0, 64, 10, 1e-12).unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    for _ in 0..50 {
        let z = Vec2::new(rng.gen(), rng.gen());
        let dy: f64 = rng.gen_range(-1.5..1.5);
        let target = z.y + dy;
        let p = leaf_advance(&g0, &s, z, target, LeafDirection::toward(z.y, target)).unwrap();
        let exact = z + g0.v_u * (dy / g0.v_u.y);
        assert!((p - exact).norm() < 1e-8, "{p:?} vs {exact:?}");
    }
}

#[test]
fn advance_then_reverse_returns() {
    let g = g();
    let s = section();
    let mut rng = ChaCha8Rng::seed_from_u64(4);
    for _ in 0..20 {
        let z = Vec2::new(rng.gen(), rng.gen());
        let p = leaf_advance(&g, &s, z, z.y + 0.4, LeafDirection::Up).unwrap();
        let back = leaf_advance(&g, &s, p, z.y, LeafDirection::Down).unwrap();
        assert!((back - z).norm() < 1e-6, "{:e}", (back - z).norm());
    }
}

#[test]
fn target_behind_is_rejected() {
    let z = Vec2::new(0.3, 0.3);
    assert!(leaf_advance(&g(), &section(), z, 0.1, LeafDirection::Up).is_err());
}

#[test]
fn saddle_leaf_is_invariant() {
    let g = g();
    let s = section();
    let z1 = g.saddles()[1];
    let trace = leaf_trace(&g, &s, z1, z1.y + 0.08, LeafDirection::Up).unwrap();
    let mut worst: f64 = 0.0;
    for p in trace.iter().step_by(10) {
        let gp = g.eval(*p);
        let on_leaf = leaf_advance(&g, &s, z1, gp.y, LeafDirection::toward(z1.y, gp.y)).unwrap();
        worst = worst.max((gp - on_leaf).norm());
    }
    assert!(worst < 1e-3, "{worst}");
    let tracer = LeafTracer::new(g.clone());
    let p = tracer.advance(z1, 0.05).unwrap();
    let gp = g.eval(p);
    assert!((tracer.advance(z1, gp.y - z1.y).unwrap() - gp).norm() < 1e-10);
}

#[test]
fn tracers_agree_and_converge_with_the_mesh() {
    let g = g();
    let tracer = LeafTracer::new(g.clone());
    let coarse = invariant_section(&g, 256, 100, 1e-12).unwrap();
    let fine = section();
    let (mut e_coarse, mut e_fine) = (0.0f64, 0.0f64);
    for k in 0..20 {
        let z = Vec2::new(0.05 * k as f64 + 0.013, 0.031 * k as f64);
        let p = tracer.advance(z, 0.3).unwrap();
        assert!((p.y - z.y - 0.3).abs() < CROSSING_TOL);
        let a = leaf_advance(&g, &coarse, z, z.y + 0.3, LeafDirection::Up).unwrap();
        let b = leaf_advance(&g, &fine, z, z.y + 0.3, LeafDirection::Up).unwrap();
        e_coarse = e_coarse.max((a - p).norm());
        e_fine = e_fine.max((b - p).norm());
    }
    assert!(e_fine < 2e-4, "{e_fine}");
    assert!(e_fine < 0.5 * e_coarse);
}

#[test]
fn leaf_csv_has_header() {
    let pts = [Vec2::new(0.0, 0.0), Vec2::new(0.5, 0.25)];
    let csv = polyline_csv(&pts);
    assert!(csv.starts_with("vertex,x,y\n0,"));
    assert_eq!(csv.lines().count(), 3);
}

// fibered map

fn fibered() -> Arc<FiberedMap> {
    static F: OnceLock<Arc<FiberedMap>> = OnceLock::new();
    F.get_or_init(|| Arc::new(fibered_map(g(), LeafMethod::Dynamical, E).unwrap())).clone()
}

#[test]
fn expected_rotation_vector() {
    let t = fibered().translation();
    assert!((t.x - (E - 2.0)).abs() < 1e-12);
    assert!((t.y - e_phi_frac()).abs() < 1e-12);
    assert!((e_phi_frac() - 0.398272).abs() < 1e-6);
}

#[test]
fn fibered_rotation_vector() {
    let f = fibered();
    let seeds: Vec<Vec2> = (0..20).map(|k| Vec2::new(0.037 * k as f64 + 0.01, 0.071 * k as f64 + 0.02)).collect();
    let est = rotation_vector_estimate(&*f, &seeds, 10_000).unwrap();
    let v = Vec2::new(wrap01(est.vector.x), wrap01(est.vector.y));
    let target = Vec2::new(E - 2.0, e_phi_frac());
    assert!(torus_dist(v, target) < 1e-2, "{v:?}");
}

#[test]
fn height_advances_by_beta() {
    let f = fibered();
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    for _ in 0..100 {
        let z = Vec2::new(rng.gen(), rng.gen());
        let w = f.eval(z);
        assert_eq!(w.y, z.y + f.beta);
        assert!((wrap01(w.y - z.y) - e_phi_frac()).abs() < 1e-12);
    }
}

#[test]
fn fibered_inverse_and_equivariance() {
    let f = fibered();
    let mut rng = ChaCha8Rng::seed_from_u64(6);
    for _ in 0..1000 {
        let z = Vec2::new(rng.gen(), rng.gen());
        assert!((f.eval_inv(f.eval(z)) - z).norm() < 1e-6);
    }
    for _ in 0..50 {
        let z = Vec2::new(rng.gen(), rng.gen());
        let n = Vec2::new(rng.gen_range(-3..3) as f64, rng.gen_range(-3..3) as f64);
        assert!((f.eval(z + n) - (f.eval(z) + n)).norm() < 1e-8);
    }
}

#[test]
fn unperturbed_fibered_map_is_a_translation() {
    let g0 = Arc::new(DaMap::unperturbed(standard_matrix()).unwrap());
    let f = fibered_map(g0.clone(), LeafMethod::Dynamical, E).unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(8);
    for _ in 0..100 {
        let z = Vec2::new(rng.gen(), rng.gen());
        let d = f.eval(z) - z;
        assert!((d - g0.v_u * E).norm() < 1e-9, "{d:?}");
    }
}

#[test]
fn section_method_matches_dynamical() {
    let f_sec = fibered_map(g(), LeafMethod::Section(section()), E).unwrap();
    let f_dyn = fibered();
    let mut rng = ChaCha8Rng::seed_from_u64(9);
    for _ in 0..5 {
        let z = Vec2::new(rng.gen(), rng.gen());
        assert!((f_sec.eval(z) - f_dyn.eval(z)).norm() < 1e-3);
    }
}

#[test]
fn resonant_scale_rejected() {
    assert!(matches!(fibered_map(g(), LeafMethod::Dynamical, 1.0), Err(Error::Resonant { .. })));
}

// basin

#[test]
fn repeller_is_in_its_basin() {
    let g = g();
    assert_eq!(basin_membership(&g, g.repeller(), 10, default_ball(&g)).unwrap(), BasinVerdict::InBasin(0));
    assert!(basin_membership(&g, g.repeller(), 10, 0.5).is_err());
}

#[test]
fn leaf_step_from_j_is_in_basin() {
    let g = g();
    let ball = default_ball(&g);
    let mid = to_plane(&g, 0.0, 0.5 * g.r0);
    let z = LeafTracer::new(g.clone()).advance(mid, 0.05).unwrap();
    let v = basin_membership(&g, z, 100, ball).unwrap();
    assert!(v.is_in());
    assert_eq!(basin_membership(&g, z, 200, ball).unwrap(), v);
}

#[test]
fn periodic_point_outside_support_is_not_in_basin() {
    // (1/2, 1/2) has period 3 under A and its orbit misses the support
    let g = g();
    let z = Vec2::new(0.5, 0.5);
    assert_eq!(basin_membership(&g, z, 2000, default_ball(&g)).unwrap(), BasinVerdict::NotWithinBudget);
}

#[test]
fn fibered_map_preserves_basin() {
    let g = g();
    let f = fibered();
    let ball = default_ball(&g);
    let mut rng = ChaCha8Rng::seed_from_u64(10);
    // f moves along unstable leaves, which g⁻¹ contracts by λ_u per step; verdicts are
    // compared inside the horizon where 1e-13 transverse roundoff stays below the ball
    let mut inside = 0;
    for _ in 0..400 {
        let z = Vec2::new(rng.gen(), rng.gen());
        if basin_membership(&g, z, 20, ball).unwrap().is_in() {
            inside += 1;
            assert!(basin_membership(&g, f.eval(z), 40, ball).unwrap().is_in());
            assert!(basin_membership(&g, f.eval_inv(z), 40, ball).unwrap().is_in());
        }
    }
    assert!(inside > 20);
}

#[test]
fn minimal_orbit_avoids_basin() {
    let g = g();
    let f = fibered();
    let ball = default_ball(&g);
    // computed orbit points sit ~1e-13 off the lamination and escape after ~30 backward
    // steps, so the budget stays below that horizon
    let mut z = Vec2::new(0.5, 0.5);
    for _ in 0..2000 {
        z = f.eval(z).wrap();
        assert_eq!(basin_membership(&g, z, 25, ball).unwrap(), BasinVerdict::NotWithinBudget);
    }
}

#[test]
fn basin_density_grows_with_budget() {
    let g = g();
    let ball = default_ball(&g);
    let fracs: Vec<f64> =
        [5, 10, 20, 40].iter().map(|&b| basin_grid(&g, 48, b, ball).unwrap().marked_fraction()).collect();
    for w in fracs.windows(2) {
        assert!(w[1] >= w[0]);
    }
    assert!(fracs[3] > 4.0 * fracs[0]);
}

#[test]
fn minimal_set_occupancy_is_connected() {
    let f = fibered();
    let g = g();
    let grid = orbit_occupancy(&*f, Vec2::new(0.5, 0.5), 300_000, 128, 1).unwrap();
    assert_eq!(marked_components(&grid).len(), 1);
    let (comps, report) = classify_grid(&grid, 8);
    assert_eq!(report.type_set(), vec![DomainType::Trivial]);
    // every hole is a piece of the basin
    let ball = default_ball(&g);
    for c in &comps {
        assert!(c.cells.iter().any(|&i| basin_membership(&g, grid.cell_center(i), 200, ball).unwrap().is_in()));
    }
    assert_eq!(complement_components(&grid).len(), comps.len());
}

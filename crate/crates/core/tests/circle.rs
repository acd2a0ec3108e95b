use proptest::prelude::*;
use toral_core::circle::*;
use toral_core::geom::{circle_delta, circle_dist, wrap01};
use toral_core::Error;

const ALPHA: f64 = std::f64::consts::SQRT_2 - 1.0;

fn standard() -> (Denjoy, CantorSetSpec) {
    build_denjoy(ALPHA, GapSchedule::default(), 20_000).unwrap()
}

fn two_gaps() -> CantorSetSpec {
    CantorSetSpec::from_intervals(&[(0.25, 0.1), (0.98, 0.06)]).unwrap()
}

// ============================================================================
// Rotation numbers
// ============================================================================

#[test]
fn rigid_rotation_is_exact() {
    let r = rotation_number_estimate(&Rotation(0.25), 0.0, 100).unwrap();
    assert_eq!(r.value, 0.25);
    assert_eq!(r.cauchy_gap, 0.0);
}

#[test]
fn identity_has_rotation_zero() {
    assert_eq!(rotation_number_estimate(&Rotation(0.0), 0.37, 10).unwrap().value, 0.0);
}

#[test]
fn zero_horizon_rejected() {
    assert!(rotation_number_estimate(&Rotation(0.1), 0.0, 0).is_err());
}

struct Folding;

impl CircleMap for Folding {
    fn eval(&self, x: f64) -> f64 {
        x + 3.0 * (x - x.floor())
    }
    fn eval_inv(&self, x: f64) -> f64 {
        x
    }
    fn label(&self) -> String {
        "folding".into()
    }
}

#[test]
fn non_monotone_lift_reported() {
    assert!(matches!(rotation_number_estimate(&Folding, 0.1, 1000), Err(Error::NotMonotone { .. })));
}

#[test]
fn denjoy_rotation_number_is_alpha() {
    let (d, _) = standard();
    for x in [0.0, 0.3, 0.77] {
        let r = rotation_number_estimate(&d, x, 100_000).unwrap();
        assert!((r.value - ALPHA).abs() < 1e-4, "x = {x}: {}", r.value);
    }
}

// ============================================================================
// Denjoy construction
// ============================================================================

#[test]
fn default_schedule_sums_to_a_quarter() {
    assert!((GapSchedule::default().total() - 0.25).abs() < 1e-15);
    let (_, q) = standard();
    assert!((q.total_length() + q.tail_mass - 0.25).abs() < 1e-15);
    assert!((q.measure() - 0.75).abs() < 1e-15);
}

#[test]
fn rational_alpha_rejected() {
    assert_eq!(build_denjoy(0.375, GapSchedule::default(), 100).unwrap_err(), Error::Resonant { n1: -3, n2: 8, n3: 0 });
}

#[test]
fn out_of_range_alpha_rejected() {
    assert!(matches!(build_denjoy(1.2, GapSchedule::default(), 100), Err(Error::InvalidParameter(_))));
    assert!(matches!(build_denjoy(0.0, GapSchedule::default(), 100), Err(Error::InvalidParameter(_))));
}

#[test]
fn oversized_schedule_rejected() {
    let s = GapSchedule::Geometric { scale: 0.6, ratio: 0.5 };
    assert!(matches!(build_denjoy(0.381_966_011_250_105_1, s, 100), Err(Error::ScheduleTooLarge { .. })));
}

/// Left endpoint of gap `k` from scratch: the base angle `kα mod 1` scaled by the
/// Cantor slope, plus every gap whose angle lies to its left.
fn oracle_left(alpha: f64, s: GapSchedule, k_max: i64, k: i64) -> f64 {
    let lens: Vec<(f64, f64)> = (-k_max..=k_max).map(|j| (wrap01(j as f64 * alpha), s.length(j))).collect();
    let c = 1.0 - lens.iter().map(|l| l.1).sum::<f64>();
    let t = wrap01(k as f64 * alpha);
    c * t + lens.iter().filter(|l| l.0 < t).map(|l| l.1).sum::<f64>()
}

#[test]
fn gap_positions_match_the_direct_sum() {
    let s = GapSchedule::default();
    let (d, q) = build_denjoy(ALPHA, s, 40).unwrap();
    assert_eq!(d.depth(), 20);
    assert_eq!(d.gap_count(), 41);
    for k in -20..=20 {
        let (l, r) = d.gap_endpoints(k).unwrap();
        assert!((l - oracle_left(ALPHA, s, 20, k)).abs() < 1e-14, "gap {k}");
        assert!((circle_delta(l, r) - s.length(k)).abs() < 1e-14, "gap {k} length");
        assert_eq!(q.gap_by_index(k).unwrap().length, s.length(k));
    }
    assert!(d.gap_endpoints(21).is_none());
}

#[test]
fn gaps_are_carried_to_the_next_gap() {
    let (d, _) = standard();
    for k in -30..30 {
        let (l, r) = d.gap_endpoints(k).unwrap();
        let (l1, r1) = d.gap_endpoints(k + 1).unwrap();
        assert!(circle_dist(d.eval(l), l1) < 1e-12, "left end of gap {k}");
        assert!(circle_dist(d.eval(r), r1) < 1e-12, "right end of gap {k}");
    }
}

#[test]
fn gap_zero_center_is_in_gap_zero() {
    let (d, q) = standard();
    let (l, r) = d.gap_endpoints(0).unwrap();
    assert_eq!(q.membership(0.5 * (l + r), DEFAULT_TOL), Membership::InGap(0));
}

#[test]
fn embed_inverts_collapse_off_the_gaps() {
    let (d, q) = standard();
    for i in 0..1000 {
        let t = (i as f64 + 0.5) / 1000.0;
        let x = d.embed(t);
        assert!(circle_dist(d.collapse(x), t) < 1e-12, "t = {t}");
        assert!(!matches!(q.membership(x, 0.0), Membership::InGap(_)));
    }
}

#[test]
fn inverse_undoes_eval() {
    let (d, _) = standard();
    for i in 0..1000 {
        let x = -3.0 + 7.0 * i as f64 / 1000.0;
        assert!((d.eval_inv(d.eval(x)) - x).abs() < 1e-12, "x = {x}");
    }
}

#[test]
fn quadratic_builder_rejects_bad_input() {
    assert!(build_quadratic_gap_cantor(QuadraticGapParams::new(0.3, 0.0, 0.1)).is_err());
    assert!(build_quadratic_gap_cantor(QuadraticGapParams::new(0.3, 1.0, 0.0)).is_err());
}

#[test]
fn quadratic_gaps_shrink_quadratically_toward_the_anchor() {
    let c = 1.0;
    let (_, q) = build_quadratic_gap_cantor(QuadraticGapParams::new(0.37, c, 0.1)).unwrap();
    assert_eq!(q.anchor, Some(0.37));
    for g in q.gaps() {
        let d = circle_dist(0.37, g.center);
        assert!(g.length <= c * d * d * (1.0 + 1e-9), "gap {} length {} at distance {d}", g.index, g.length);
    }
    let (lo, hi) = q.window.unwrap();
    assert!(q.is_free(lo, DEFAULT_TOL) && q.is_free(hi, DEFAULT_TOL) && q.is_free(0.37, 0.0));
}

// ============================================================================
// Cantor set specs
// ============================================================================

#[test]
fn membership_classes() {
    let q = two_gaps();
    assert_eq!(q.membership(0.25, DEFAULT_TOL), Membership::InGap(0));
    assert_eq!(q.membership(0.2, DEFAULT_TOL), Membership::RationalPart(0, Side::Left));
    assert_eq!(q.membership(0.3, DEFAULT_TOL), Membership::RationalPart(0, Side::Right));
    assert_eq!(q.membership(0.005, DEFAULT_TOL), Membership::InGap(1));
    assert_eq!(q.membership(0.5, DEFAULT_TOL), Membership::IrrationalPart);
}

#[test]
fn unrealized_tail_is_undetermined() {
    let (_, q) = build_denjoy(ALPHA, GapSchedule::default(), 10).unwrap();
    assert!(q.tail_mass > 0.0);
    let free = (0..1000).map(|i| i as f64 / 1000.0).find(|&x| q.is_free(x, 1e-3)).unwrap();
    assert_eq!(q.membership(free, DEFAULT_TOL), Membership::Undetermined);
}

#[test]
fn overlapping_gaps_rejected() {
    assert!(CantorSetSpec::from_intervals(&[(0.2, 0.1), (0.26, 0.1)]).is_err());
    assert!(CantorSetSpec::from_intervals(&[(0.2, 0.6), (0.7, 0.5)]).is_err());
}

#[test]
fn anchor_in_a_gap_rejected() {
    assert!(two_gaps().with_anchor(0.25).is_err());
}

#[test]
fn free_intervals_skip_gaps() {
    let q = two_gaps();
    let free = q.free_intervals(0.1, 0.4, 0.0);
    assert_eq!(free.len(), 2);
    assert!((free[0].1 - 0.2).abs() < 1e-15 && (free[1].0 - 0.3).abs() < 1e-15);
    let wrapped = q.free_intervals(0.9, 1.1, 0.0);
    assert_eq!(wrapped.len(), 2);
    assert!((wrapped[0].1 - 0.95).abs() < 1e-12);
}

#[test]
fn table_round_trip() {
    let q = two_gaps().with_anchor(0.5).unwrap().with_window(0.4, 0.6);
    assert_eq!(CantorSetSpec::from_table(&q.to_table()).unwrap(), q);
    let (_, d) = standard();
    assert_eq!(CantorSetSpec::from_table(&d.to_table()).unwrap(), d);
}

#[test]
fn malformed_table_rejected() {
    assert!(matches!(CantorSetSpec::from_table("1 0.5"), Err(Error::Format(_))));
}

// ============================================================================
// Properties
// ============================================================================

proptest! {
    #[test]
    fn collapse_semiconjugates_to_the_rotation(x in -2.0f64..3.0) {
        let (d, _) = build_denjoy(ALPHA, GapSchedule::default(), 4096).unwrap();
        let defect = circle_delta(d.collapse(x) + ALPHA, d.collapse(d.eval(x))).abs();
        prop_assert!(defect < 1e-9, "defect {defect} at {x}");
    }

    #[test]
    fn lift_is_monotone_and_degree_one(x in -2.0f64..2.0, h in 1e-9f64..0.5) {
        let (d, _) = build_denjoy(ALPHA, GapSchedule::default(), 4096).unwrap();
        prop_assert!(d.eval(x + h) >= d.eval(x));
        prop_assert!((d.eval(x + 1.0) - d.eval(x) - 1.0).abs() < 1e-12);
        prop_assert!((d.eval_inv(d.eval(x)) - x).abs() < 1e-12);
    }

    #[test]
    fn schedule_total_is_the_series(scale in 0.01f64..0.3, ratio in 0.05f64..0.6) {
        let s = GapSchedule::Geometric { scale, ratio };
        let direct: f64 = (-200i64..=200).map(|k| s.length(k)).sum();
        prop_assert!((s.total() - direct).abs() < 1e-12);
        prop_assert!((s.tail(10) - (direct - (-10i64..=10).map(|k| s.length(k)).sum::<f64>())).abs() < 1e-12);
    }
}

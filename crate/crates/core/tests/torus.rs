use std::sync::Arc;

use proptest::prelude::*;
use toral_core::circle::{build_denjoy, rotation, GapSchedule};
use toral_core::geom::{torus_dist, Vec2};
use toral_core::torus::*;
use toral_core::Error;

const ALPHA: f64 = std::f64::consts::SQRT_2 - 1.0;

fn beta() -> f64 {
    3f64.sqrt() - 1.0
}

fn grid_seeds(n: usize) -> Vec<Vec2> {
    (0..n).map(|i| Vec2::new((i as f64 + 0.5) / n as f64, ((7 * i) % n) as f64 / n as f64)).collect()
}

fn denjoy_product() -> TorusLift {
    let (d, _) = build_denjoy(ALPHA, GapSchedule::default(), 4096).unwrap();
    product_map(Arc::new(d), rotation(beta()))
}

// ============================================================================
// Integer matrices
// ============================================================================

#[test]
fn ext_gcd_bezout() {
    for (a, b) in [(3, 5), (1, 1), (0, 1), (1, 0), (-4, 7), (2, -1), (12, 18)] {
        let (g, s, t) = ext_gcd(a, b);
        assert_eq!(s * a + t * b, g, "({a},{b})");
    }
}

#[test]
fn second_column_matrices() {
    for (p, q) in [(0, 1), (1, 0), (1, 1), (2, 1), (-3, 5), (1, -2)] {
        let m = IntegerMatrix::with_second_column(p, q).unwrap();
        assert_eq!((m.b, m.d), (p, q));
        assert!(m.is_sl2z());
    }
    assert!(IntegerMatrix::with_second_column(2, 4).is_err());
}

#[test]
fn inverse_of_a_hyperbolic_matrix() {
    let a = IntegerMatrix::new(2, 1, 1, 1);
    assert_eq!(a.mul(&a.inverse().unwrap()), IntegerMatrix::IDENTITY);
    assert_eq!(a.trace(), 3);
    assert!(matches!(IntegerMatrix::new(2, 0, 0, 1).inverse(), Err(Error::NotUnimodular { det: 2 })));
}

#[test]
fn non_unimodular_conjugator_rejected() {
    let m = IntegerMatrix::new(2, 0, 0, 1);
    assert!(matches!(linear_conjugate(translation_map(0.1, 0.2), m), Err(Error::NotUnimodular { det: 2 })));
}

// ============================================================================
// Resonance screen
// ============================================================================

#[test]
fn relation_for_half_and_quarter() {
    assert_eq!(rational_independence(0.5, 0.25, 4, 1e-9), Independence::Relation(-1, 2, 0));
}

#[test]
fn dependent_pair_found() {
    // 2α - β = 0
    let a = 0.1234567;
    assert_eq!(rational_independence(a, 2.0 * a, 10, 1e-9), Independence::Relation(0, 2, -1));
}

#[test]
fn default_pair_is_independent() {
    assert_eq!(rational_independence(ALPHA, beta(), 100, 1e-9), Independence::NoRelationFound);
}

// ============================================================================
// Rotation vectors
// ============================================================================

#[test]
fn translation_is_exact_at_fifty_steps() {
    let est = rotation_vector_estimate(&*translation_map(0.3, 0.7), &grid_seeds(20), 50).unwrap();
    assert_eq!(est.seed_spread, 0.0);
    assert_eq!(est.cauchy_gap, 0.0);
    assert!(torus_dist(est.vector, Vec2::new(0.3, 0.7)) < 1e-15);
}

#[test]
fn denjoy_product_has_the_product_rotation() {
    let est = rotation_vector_estimate(&*denjoy_product(), &grid_seeds(20), 100_000).unwrap();
    assert!(torus_dist(est.vector, Vec2::new(ALPHA, beta())) < 1e-3);
    assert!(est.seed_spread < 1e-3);
    assert_eq!(est.per_seed.len(), 20);
}

#[test]
fn conjugation_rotates_by_the_matrix() {
    // L_A⁻¹ ∘ F ∘ L_A has rotation vector A⁻¹ ρ(F)
    let a = IntegerMatrix::with_second_column(1, 1).unwrap();
    let h = linear_conjugate(denjoy_product(), a).unwrap();
    let est = rotation_vector_estimate(&*h, &grid_seeds(8), 50_000).unwrap();
    let want = a.inverse().unwrap().apply(Vec2::new(ALPHA, beta())).wrap();
    assert!(torus_dist(est.vector, want) < 1e-3, "{:?} vs {want:?}", est.vector);
}

#[test]
fn estimate_rejects_degenerate_input() {
    let f = translation_map(0.1, 0.2);
    assert!(rotation_vector_estimate(&*f, &[], 10).is_err());
    assert!(rotation_vector_estimate(&*f, &grid_seeds(2), 1).is_err());
}

#[test]
fn rotation_csv_has_one_row_per_seed() {
    let est = rotation_vector_estimate(&*translation_map(0.3, 0.7), &grid_seeds(5), 10).unwrap();
    let csv = est.to_csv();
    assert!(csv.starts_with("seed_x,seed_y,n,est_x,est_y\n"));
    assert_eq!(csv.lines().count(), 6);
}

// ============================================================================
// Properties
// ============================================================================

proptest! {
    #[test]
    fn product_commutes_with_integer_translations(x in 0.0f64..1.0, y in 0.0f64..1.0, m in -3i64..3, n in -3i64..3) {
        let f = denjoy_product();
        let z = Vec2::new(x, y);
        let shift = Vec2::new(m as f64, n as f64);
        let d = f.eval(z + shift) - f.eval(z) - shift;
        prop_assert!(d.norm() < 1e-12);
        prop_assert!(torus_dist(f.eval_inv(f.eval(z)), z) < 1e-12);
    }

    #[test]
    fn conjugate_inverts(x in 0.0f64..1.0, y in 0.0f64..1.0, p in -3i64..4, q in 1i64..5) {
        prop_assume!(toral_core::torus::ext_gcd(p, q).0.abs() == 1);
        let a = IntegerMatrix::with_second_column(p, q).unwrap();
        let h = linear_conjugate(denjoy_product(), a).unwrap();
        let z = Vec2::new(x, y);
        prop_assert!(torus_dist(h.eval_inv(h.eval(z)), z) < 1e-9);
    }

    #[test]
    fn sl2z_inverse_round_trips(p in -20i64..20, q in -20i64..20) {
        prop_assume!((p, q) != (0, 0) && ext_gcd(p, q).0.abs() == 1);
        let m = IntegerMatrix::with_second_column(p, q).unwrap();
        prop_assert_eq!(m.mul(&m.inverse().unwrap()), IntegerMatrix::IDENTITY);
    }

    #[test]
    fn translation_estimate_is_exact(a in 0.0f64..1.0, b in 0.0f64..1.0) {
        let est = rotation_vector_estimate(&*translation_map(a, b), &grid_seeds(3), 64).unwrap();
        prop_assert!(torus_dist(est.vector, Vec2::new(a, b)) < 1e-12);
        prop_assert_eq!(est.seed_spread, 0.0);
    }
}

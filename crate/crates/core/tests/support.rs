use proptest::prelude::*;
use toral_core::geom::*;
use toral_core::io::{atomic_write, encode_pgm, encode_ppm, parse_pnm};

#[test]
fn wrap_handles_tiny_negatives() {
    assert_eq!(wrap01(-1e-18), 0.0);
    assert_eq!(wrap01(1.25), 0.25);
    assert_eq!(wrap01(-0.25), 0.75);
}

#[test]
fn circle_delta_is_shortest() {
    assert!((circle_delta(0.9, 0.1) - 0.2).abs() < 1e-15);
    assert!((circle_delta(0.1, 0.9) + 0.2).abs() < 1e-15);
}

#[test]
fn square_is_simple_bowtie_is_not() {
    let sq = [Vec2::new(0., 0.), Vec2::new(1., 0.), Vec2::new(1., 1.), Vec2::new(0., 1.)];
    assert!(is_simple_closed(&sq));
    let bow = [Vec2::new(0., 0.), Vec2::new(1., 1.), Vec2::new(1., 0.), Vec2::new(0., 1.)];
    assert!(!is_simple_closed(&bow));
}

#[test]
fn compensated_sum_is_exact_for_repeated_tenths() {
    let mut s = KahanSum::default();
    for _ in 0..50 {
        s.add(0.3);
    }
    assert_eq!(s.value() / 50.0, 0.3);
}

#[test]
fn pnm_header_with_comment() {
    let img = b"P5\n# made by hand\n2 1\n255\n\x00\xff";
    let (w, h, m, data) = parse_pnm(img, b"P5").unwrap();
    assert_eq!((w, h, m), (2, 1, 255));
    assert_eq!(data, &[0, 255]);
    assert!(parse_pnm(img, b"P6").is_err());
    assert!(parse_pnm(b"P5\n2", b"P5").is_err());
}

#[test]
fn pnm_headers_are_exact() {
    assert_eq!(encode_ppm(1, 1, &[[1, 2, 3]]), b"P6\n1 1\n255\n\x01\x02\x03");
    assert_eq!(encode_pgm(2, 1, &[0, 9]), b"P5\n2 1\n255\n\x00\x09");
}

#[test]
fn atomic_write_creates_parents_and_replaces() {
    let dir = std::env::temp_dir().join(format!("toral-support-{}", std::process::id()));
    let path = dir.join("a/b/file.txt");
    atomic_write(&path, b"one").unwrap();
    atomic_write(&path, b"two").unwrap();
    assert_eq!(std::fs::read(&path).unwrap(), b"two");
    let leftovers = std::fs::read_dir(dir.join("a/b")).unwrap().count();
    assert_eq!(leftovers, 1);
    std::fs::remove_dir_all(dir).unwrap();
}

proptest! {
    #[test]
    fn torus_dist_is_symmetric_and_bounded(ax in -3.0f64..3.0, ay in -3.0f64..3.0, bx in -3.0f64..3.0, by in -3.0f64..3.0) {
        let (a, b) = (Vec2::new(ax, ay), Vec2::new(bx, by));
        let d = torus_dist(a, b);
        prop_assert!((d - torus_dist(b, a)).abs() < 1e-12);
        prop_assert!(d <= 0.5f64.hypot(0.5) + 1e-12);
        prop_assert!(torus_dist(a, a + Vec2::new(2.0, -1.0)) < 1e-12);
    }

    #[test]
    fn wrap_lands_in_unit_interval(x in -1e6f64..1e6) {
        let w = wrap01(x);
        prop_assert!((0.0..1.0).contains(&w));
        prop_assert!(circle_dist(w, x) < 1e-9);
    }
}

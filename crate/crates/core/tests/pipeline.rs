use num_bigint::BigInt;
use num_rational::BigRational;
use toral_core::classify::{classify_grid, DomainType, OccupancyGrid};
use toral_core::geom::Vec2;
use toral_core::pipeline::census::{distances_to_marked, fraction, widen};
use toral_core::pipeline::render::{characteristic_color, domain_color, render_domains, DOUBLY, MARKED, TRIVIAL};
use toral_core::pipeline::{wedge_reports, ExampleId, PipelineSpec};
use toral_core::torus::IntegerMatrix;
use toral_core::verify::{q_exact, small_spec, Suite};
use toral_core::{run_pipeline, Error};

// ============================================================================
// Example identifiers and specs
// ============================================================================

#[test]
fn example_ids_round_trip() {
    for id in ExampleId::all() {
        assert_eq!(ExampleId::parse(&id.name()).unwrap(), id);
        assert_eq!(ExampleId::parse(&id.slug()).unwrap(), id);
    }
    assert_eq!(ExampleId::parse("type2_annuli_conjugated").unwrap(), ExampleId::Type2AnnuliConjugated { p: 1, q: 1 });
    assert_eq!(ExampleId::parse("type2_annuli_conjugated(2,1)").unwrap(), ExampleId::Type2AnnuliConjugated { p: 2, q: 1 });
    assert!(ExampleId::parse("type4").is_err());
}

#[test]
fn defaults_follow_the_documented_parameters() {
    let s = PipelineSpec::new(ExampleId::Type2Annuli);
    assert_eq!(s.resolutions, vec![256, 512]);
    assert_eq!(s.stages, 3);
    assert!((s.alpha - (2f64.sqrt() - 1.0)).abs() < 1e-15);
    let da = PipelineSpec::new(ExampleId::Type1Da);
    let (a, b) = da.rotation_pair().unwrap();
    let phi = 0.5 * (1.0 + 5f64.sqrt());
    assert_eq!(a, std::f64::consts::E);
    assert!((b - std::f64::consts::E * phi).abs() < 1e-12);
}

#[test]
fn manifest_is_sorted_and_complete() {
    let m = PipelineSpec::new(ExampleId::Type2WithDisks).manifest().unwrap();
    let keys: Vec<&str> = m.lines().map(|l| l.split(" = ").next().unwrap()).collect();
    let mut sorted = keys.clone();
    sorted.sort();
    assert_eq!(keys, sorted);
    for k in ["alpha", "beta", "matrix", "stages", "resolution", "orbit_steps", "seed", "version"] {
        assert!(keys.contains(&k), "missing {k}");
    }
    assert!(m.contains("resolution = 256,512"));
}

#[test]
fn invalid_specs_rejected() {
    let mut s = PipelineSpec::new(ExampleId::Type2Annuli);
    s.beta = Some(0.5);
    s.alpha = 0.25;
    assert!(matches!(s.validate(), Err(Error::Resonant { .. })));

    let mut s = PipelineSpec::new(ExampleId::Type2Annuli);
    s.resolutions = vec![8];
    assert!(s.validate().is_err());

    let mut s = PipelineSpec::new(ExampleId::Type2Annuli);
    s.matrix = Some(IntegerMatrix::IDENTITY);
    assert!(s.validate().is_err());

    let mut s = PipelineSpec::new(ExampleId::Type2AnnuliConjugated { p: 1, q: 1 });
    s.matrix = Some(IntegerMatrix::new(1, 0, 0, 1));
    assert!(s.validate().is_err());
    s.matrix = Some(IntegerMatrix::new(0, 1, -1, 1));
    assert!(s.validate().is_ok());

    let mut s = PipelineSpec::new(ExampleId::Type2WithDisks);
    s.stages = 0;
    assert!(s.validate().is_err());

    let mut s = PipelineSpec::new(ExampleId::Type1Da);
    s.beta = Some(0.3);
    assert!(s.validate().is_err());
}

// ============================================================================
// Renders
// ============================================================================

#[test]
fn essential_colors_avoid_the_reserved_ones() {
    for p in -8..=8 {
        for q in -8..=8 {
            let c = characteristic_color(p, q);
            assert!(c != MARKED && c != TRIVIAL && c != DOUBLY, "({p},{q})");
            let spread = c.iter().max().unwrap() - c.iter().min().unwrap();
            assert!(spread > 100, "({p},{q}) too gray: {c:?}");
        }
    }
    assert_eq!(domain_color(DomainType::Trivial), TRIVIAL);
    assert_eq!(domain_color(DomainType::DoublyEssential), DOUBLY);
    assert_eq!(characteristic_color(1, 1), characteristic_color(1, 1));
}

#[test]
fn render_has_exact_header_and_orientation() {
    let g = OccupancyGrid::from_fn(16, |i, j| i == 3 || (j == 15 && i == 0));
    let (comps, rep) = classify_grid(&g, 8);
    let ppm = render_domains(&g, &comps, &rep);
    let header = b"P6\n16 16\n255\n";
    assert!(ppm.starts_with(header));
    assert_eq!(ppm.len(), header.len() + 16 * 16 * 3);
    // cell (0, 15) is marked and sits in the top-left pixel
    assert_eq!(&ppm[header.len()..header.len() + 3], &MARKED);
    assert_eq!(&ppm[header.len() + 3..header.len() + 6], &characteristic_color(0, 1));
}

// ============================================================================
// Measurement helpers
// ============================================================================

#[test]
fn widen_and_fraction() {
    let mut b = vec![false; 10];
    b[0] = true;
    let w = widen(&b, 1);
    assert!(w[9] && w[0] && w[1] && !w[2]);
    assert_eq!(fraction(&w), 0.3);
}

#[test]
fn distances_are_to_the_cell_square() {
    let g = OccupancyGrid::from_fn(10, |i, j| (i, j) == (5, 5));
    let d = distances_to_marked(&g, &[Vec2::new(0.55, 0.55), Vec2::new(0.75, 0.55), Vec2::new(0.05, 0.05)], 3);
    assert_eq!(d[0], 0.0);
    assert!((d[1] - 1.5).abs() < 1e-9, "{}", d[1]);
    assert_eq!(d[2], 4.0);
}

#[test]
fn wedge_reports_hit_and_the_control_misses() {
    let (rep, control) = wedge_reports(2f64.sqrt() - 1.0, 3f64.sqrt() - 1.0, (4, 4, 2)).unwrap();
    assert!(rep.all_hit());
    assert_eq!(rep.results.len(), 32);
    assert_eq!(control.results.len(), 32);
}

#[test]
fn exact_radial_value() {
    let r = |n: i64, d: i64| BigRational::new(BigInt::from(n), BigInt::from(d));
    assert_eq!(q_exact(&r(7, 10), &r(4, 5), &r(1, 2)), r(211, 280));
    assert_eq!(q_exact(&r(4, 5), &r(4, 5), &r(1, 2)), r(4, 5));
    assert_eq!(q_exact(&r(1, 2), &r(4, 5), &r(1, 2)), r(13, 20));
}

#[test]
fn suites_parse_by_name_and_number() {
    for s in Suite::all() {
        assert_eq!(Suite::parse(s.name()).unwrap(), s);
        assert_eq!(Suite::parse(&s.criterion().to_string()).unwrap(), s);
    }
    assert!(Suite::parse("nope").is_err());
}

// ============================================================================
// Small end-to-end runs
// ============================================================================

fn tiny(id: ExampleId) -> PipelineSpec {
    let mut s = small_spec(id, 3);
    s.resolutions = vec![64];
    s
}

#[test]
fn annuli_bundle_contents() {
    let b = run_pipeline(&tiny(ExampleId::Type2Annuli)).unwrap();
    for f in ["manifest.txt", "grids/occupancy_64.pgm", "renders/domains_64.ppm", "reports/domains_64.csv", "reports/rotation.csv"] {
        assert!(b.files.contains_key(f), "missing {f}: {:?}", b.files.keys().collect::<Vec<_>>());
    }
    assert!(b.files["renders/domains_64.ppm"].starts_with(b"P6\n64 64\n255\n"));
    assert!(b.files["grids/occupancy_64.pgm"].starts_with(b"P5\n64 64\n255\n"));
    let manifest = String::from_utf8(b.files["manifest.txt"].clone()).unwrap();
    assert!(manifest.contains("example = type2_annuli"));
    assert!(b.outcome.rotation_error() < 1e-3);
    assert!(b.outcome.grids[0].type_set.iter().all(|t| *t == DomainType::Essential(0, 1)));
}

#[test]
fn conjugated_annuli_are_essential_along_the_column() {
    let b = run_pipeline(&tiny(ExampleId::Type2AnnuliConjugated { p: 2, q: 1 })).unwrap();
    assert!(b.outcome.grids[0].type_set.iter().all(|t| *t == DomainType::Essential(2, 1)));
}

#[test]
fn small_runs_are_byte_identical() {
    let s = tiny(ExampleId::Type3Cantor);
    let a = run_pipeline(&s).unwrap();
    let b = run_pipeline(&s).unwrap();
    assert_eq!(a.files, b.files);
}

#[test]
fn bundle_writes_every_file() {
    let b = run_pipeline(&tiny(ExampleId::Type2Annuli)).unwrap();
    let dir = std::env::temp_dir().join(format!("toral-bundle-{}", std::process::id()));
    b.write_to(&dir).unwrap();
    for (rel, data) in &b.files {
        assert_eq!(&std::fs::read(dir.join(rel)).unwrap(), data);
    }
    std::fs::remove_dir_all(dir).unwrap();
}

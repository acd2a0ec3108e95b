//! Throughput of the hot paths: circle and torus iteration, blown-up evaluation, the
//! radial profile and grid classification.

use std::hint::black_box;
use std::sync::Arc;

use criterion::{criterion_group, criterion_main, Criterion};
use toral_core::blowup::{q_eval, run_blowup, BlowupConfig};
use toral_core::circle::{build_denjoy, rotation, CircleMap, GapSchedule};
use toral_core::classify::classify_grid;
use toral_core::classify::synthetic::strip;
use toral_core::torus::product_map;
use toral_core::verify::blowup_base;
use toral_core::Vec2;

const ALPHA: f64 = std::f64::consts::SQRT_2 - 1.0;

fn circle(c: &mut Criterion) {
    let (d, _) = build_denjoy(ALPHA, GapSchedule::default(), 4096).expect("denjoy");
    c.bench_function("denjoy_eval", |b| b.iter(|| d.eval(black_box(0.3))));
    c.bench_function("denjoy_collapse", |b| b.iter(|| d.collapse(black_box(0.3))));
}

fn torus(c: &mut Criterion) {
    let (d, _) = build_denjoy(ALPHA, GapSchedule::default(), 4096).expect("denjoy");
    let f = product_map(Arc::new(d), rotation(3f64.sqrt() - 1.0));
    c.bench_function("product_orbit_1000", |b| {
        b.iter(|| {
            let mut z = Vec2::new(0.2, 0.3);
            for _ in 0..1000 {
                z = (z + f.displacement(z)).wrap();
            }
            black_box(z)
        })
    });
}

fn blowup(c: &mut Criterion) {
    let (f, z0, delta0) = blowup_base().expect("base");
    let s = run_blowup(f, z0, 3, BlowupConfig::with_delta0(delta0)).expect("blow-up");
    let p = s.disk(0).expect("disk").marker + Vec2::new(1e-3, 0.0);
    c.bench_function("blowup_eval_stage3", |b| b.iter(|| s.eval_stage(black_box(p), 3)));
    c.bench_function("q_eval", |b| b.iter(|| q_eval(black_box(0.7), 0.0, 0.8, 0.5)));
}

fn classify(c: &mut Criterion) {
    let g = strip(256, 1, 1);
    c.bench_function("classify_strip_256", |b| b.iter(|| classify_grid(black_box(&g), 8)));
}

criterion_group!(benches, circle, torus, blowup, classify);
criterion_main!(benches);

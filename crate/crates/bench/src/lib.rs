//! Criterion benchmarks of the core maps and classifier live in `benches/maps.rs`.

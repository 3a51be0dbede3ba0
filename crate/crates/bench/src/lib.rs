//! Criterion benchmarks for `qfock`; see `benches/`.

//! Benchmarks for the qgx engine live in `benches/`.

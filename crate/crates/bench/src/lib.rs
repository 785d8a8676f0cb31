//! Criterion benchmarks for `smooth-dual`; see `benches/`.

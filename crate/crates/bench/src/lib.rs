//! Criterion benchmarks for `rmtdet`; see `benches/`.

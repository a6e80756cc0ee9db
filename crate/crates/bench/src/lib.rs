//! Criterion benchmarks for `ksforge-core`; see `benches/search.rs`.

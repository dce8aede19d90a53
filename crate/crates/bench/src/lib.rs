//! Criterion benchmarks for sensekit-core live under `benches/`.

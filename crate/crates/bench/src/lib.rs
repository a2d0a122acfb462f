//! Benchmarks for the compactnet kernels; see `benches/`.

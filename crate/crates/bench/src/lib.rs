//! Benchmarks for the combinatorial kernels live in `benches/`.

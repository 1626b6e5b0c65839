//! Criterion benchmarks for the bioclaim toolkit; see `benches/`.

//! Criterion benchmarks for the phasefan solvers live in `benches/`.

//! Benchmarks for the `cubic-sudoku` crate live under `benches/`.

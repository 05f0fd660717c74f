//! Criterion benchmarks for `coulomb-opoly`; the harness lives in `benches/kernels.rs`.

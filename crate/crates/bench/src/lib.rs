//! Criterion benchmarks for the helmstab kernels; see `benches/kernels.rs`.

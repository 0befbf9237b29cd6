//! Benchmarks for the pisom kernels live in `benches/`; run them with
//! `cargo bench -p pisom-bench`.

pub use pisom;

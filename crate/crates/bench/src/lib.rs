//! Benchmarks for `kakeya-core`; run with `cargo bench -p kakeya-bench`.

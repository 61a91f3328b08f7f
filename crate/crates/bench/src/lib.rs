//! Benchmarks for `bellspeed-core`; see `benches/`.

//! Benchmarks for pfnet; see `benches/`.

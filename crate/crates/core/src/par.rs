//! Thin indirection over rayon so the whole crate builds with or without
//! the `parallel` feature. Call sites use `par_map_range` for the
//! embarrassingly parallel loops (axiom scans, column assembly, coloring
//! sweeps); with the feature disabled it degrades to a plain iterator.

#[cfg(feature = "parallel")]
use rayon::prelude::*;

/// Maps `f` over `0..n` and collects the results in index order.
#[cfg(feature = "parallel")]
pub fn par_map_range<T, F>(n: usize, f: F) -> Vec<T>
where
    T: Send,
    F: Fn(usize) -> T + Sync + Send,
{
    (0..n).into_par_iter().map(f).collect()
}

#[cfg(not(feature = "parallel"))]
pub fn par_map_range<T, F>(n: usize, f: F) -> Vec<T>
where
    T: Send,
    F: Fn(usize) -> T + Sync + Send,
{
    (0..n).map(f).collect()
}

/// Caps the worker pool at `n` threads. A no-op after any parallel work
/// has already run, and always a no-op without the `parallel` feature.
#[cfg(feature = "parallel")]
pub fn set_jobs(n: usize) {
    let _ = rayon::ThreadPoolBuilder::new().num_threads(n).build_global();
}

#[cfg(not(feature = "parallel"))]
pub fn set_jobs(_n: usize) {}

/// Sequential version, always available (used by the benchmarks as the
/// baseline even when the `parallel` feature is on).
pub fn seq_map_range<T, F>(n: usize, f: F) -> Vec<T>
where
    F: Fn(usize) -> T,
{
    (0..n).map(f).collect()
}

//! Batch execution: rayon when the `parallel` feature is on, plain
//! loops otherwise.
//!
//! Callers hand over an index range and a pure function of the index;
//! results come back in index order regardless of scheduling, so any
//! reduction performed afterwards is deterministic. Floating-point
//! reductions must run over the returned `Vec` sequentially — never
//! inside the map — to keep summation order fixed.

/// Evaluate `f(0..n)` and collect the results in index order.
#[cfg(feature = "parallel")]
pub fn map_indexed<T, F>(n: usize, f: F) -> Vec<T>
where
    T: Send,
    F: Fn(usize) -> T + Send + Sync,
{
    use rayon::prelude::*;
    (0..n).into_par_iter().map(f).collect()
}

/// Evaluate `f(0..n)` and collect the results in index order.
#[cfg(not(feature = "parallel"))]
pub fn map_indexed<T, F>(n: usize, f: F) -> Vec<T>
where
    T: Send,
    F: Fn(usize) -> T + Send + Sync,
{
    (0..n).map(f).collect()
}

/// Always-sequential variant, kept as a baseline for benchmarks and for
/// callers that are already inside a parallel region.
pub fn map_indexed_seq<T, F>(n: usize, f: F) -> Vec<T>
where
    F: FnMut(usize) -> T,
{
    (0..n).map(f).collect()
}

/// Cap the worker pool at `threads` (0 keeps the scheduler default).
/// Call once, before any batch work; later calls fail once the global
/// pool exists. Without the `parallel` feature all work is sequential
/// already and this is a no-op.
#[cfg(feature = "parallel")]
pub fn configure_threads(threads: usize) -> crate::error::Result<()> {
    if threads == 0 {
        return Ok(());
    }
    rayon::ThreadPoolBuilder::new()
        .num_threads(threads)
        .build_global()
        .map_err(|e| crate::error::Error::invalid(format!("thread pool setup failed: {e}")))
}

/// Cap the worker pool at `threads` (0 keeps the scheduler default).
/// Call once, before any batch work; later calls fail once the global
/// pool exists. Without the `parallel` feature all work is sequential
/// already and this is a no-op.
#[cfg(not(feature = "parallel"))]
pub fn configure_threads(_threads: usize) -> crate::error::Result<()> {
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parallel_and_sequential_agree() {
        let f = |i: usize| (i as f64).sqrt() * 3.0 + i as f64;
        let par: Vec<f64> = map_indexed(1000, f);
        let seq: Vec<f64> = map_indexed_seq(1000, f);
        assert_eq!(par, seq);
    }

    #[test]
    fn empty_range() {
        let out: Vec<u8> = map_indexed(0, |_| 0u8);
        assert!(out.is_empty());
    }
}

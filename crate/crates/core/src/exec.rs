//! Data-parallel kernels with a sequential fallback.
//!
//! With the `parallel` feature (default) the range scans fan out over a
//! rayon pool; without it the same entry points run the sequential path.
//! Reductions are order-independent (least element wins), so results never
//! depend on the thread count.

#[cfg(feature = "parallel")]
use rayon::prelude::*;

/// Least `Some` value of `f` over `0..n`.
pub(crate) fn min_over_range<T, F>(n: u64, f: F) -> Option<T>
where
    T: Ord + Send,
    F: Fn(u64) -> Option<T> + Sync + Send,
{
    #[cfg(feature = "parallel")]
    {
        (0..n).into_par_iter().filter_map(f).min()
    }
    #[cfg(not(feature = "parallel"))]
    {
        min_over_range_seq(n, f)
    }
}

pub(crate) fn min_over_range_seq<T, F>(n: u64, f: F) -> Option<T>
where
    T: Ord,
    F: Fn(u64) -> Option<T>,
{
    (0..n).filter_map(f).min()
}

/// Order-preserving map over `0..n`.
pub(crate) fn map_range<T, F>(n: u64, f: F) -> Vec<T>
where
    T: Send,
    F: Fn(u64) -> T + Sync + Send,
{
    #[cfg(feature = "parallel")]
    {
        (0..n).into_par_iter().map(f).collect()
    }
    #[cfg(not(feature = "parallel"))]
    {
        map_range_seq(n, f)
    }
}

pub(crate) fn map_range_seq<T, F>(n: u64, f: F) -> Vec<T>
where
    F: Fn(u64) -> T,
{
    (0..n).map(f).collect()
}

/// Run `f` on a pool with the requested thread count.
///
/// `None` keeps the default pool. Without the `parallel` feature the thread
/// count is ignored and `f` runs inline.
pub fn run_with_threads<R, F>(threads: Option<usize>, f: F) -> R
where
    R: Send,
    F: FnOnce() -> R + Send,
{
    #[cfg(feature = "parallel")]
    {
        match threads {
            Some(n) if n > 0 => rayon::ThreadPoolBuilder::new()
                .num_threads(n)
                .build()
                .expect("thread pool construction")
                .install(f),
            _ => f(),
        }
    }
    #[cfg(not(feature = "parallel"))]
    {
        let _ = threads;
        f()
    }
}

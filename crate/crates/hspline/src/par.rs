//! Data-parallel building blocks with a sequential fallback.
//!
//! With the `parallel` feature (default) these run on the rayon pool; without
//! it they are plain loops. Every reduction used here is order-independent
//! (elementwise map, `f64::max`), so results are identical in both modes and
//! for any thread count.

#[cfg(feature = "parallel")]
use rayon::prelude::*;

/// `(0..len).map(f).collect()`, parallel over indices.
pub(crate) fn map_collect<T, F>(len: usize, f: F) -> Vec<T>
where
    T: Send,
    F: Fn(usize) -> T + Sync + Send,
{
    #[cfg(feature = "parallel")]
    {
        (0..len).into_par_iter().map(f).collect()
    }
    #[cfg(not(feature = "parallel"))]
    {
        (0..len).map(f).collect()
    }
}

/// Maximum of `f(i)` over `0..len`; returns `f64::NEG_INFINITY` when empty.
pub(crate) fn max_reduce<F>(len: usize, f: F) -> f64
where
    F: Fn(usize) -> f64 + Sync + Send,
{
    #[cfg(feature = "parallel")]
    {
        (0..len)
            .into_par_iter()
            .map(f)
            .reduce(|| f64::NEG_INFINITY, f64::max)
    }
    #[cfg(not(feature = "parallel"))]
    {
        (0..len).map(f).fold(f64::NEG_INFINITY, f64::max)
    }
}

//! Data-parallel fan-out helpers. With the `parallel` feature (default) the
//! work runs on a rayon pool sized by the `HPDYN_THREADS` environment
//! variable; without it, the same API degrades to sequential iteration.

#[cfg(feature = "parallel")]
use once_cell::sync::Lazy;

#[cfg(feature = "parallel")]
static POOL: Lazy<Option<rayon::ThreadPool>> = Lazy::new(|| {
    let threads: usize = std::env::var("HPDYN_THREADS").ok()?.parse().ok()?;
    rayon::ThreadPoolBuilder::new()
        .num_threads(threads.max(1))
        .build()
        .ok()
});

/// Applies `f` to every item, in parallel when the feature allows.
/// Output order matches input order either way.
pub fn map_collect<I, T, F>(items: Vec<I>, f: F) -> Vec<T>
where
    I: Send,
    T: Send,
    F: Fn(I) -> T + Sync + Send,
{
    #[cfg(feature = "parallel")]
    {
        use rayon::prelude::*;
        match POOL.as_ref() {
            Some(pool) => pool.install(|| items.into_par_iter().map(f).collect()),
            None => items.into_par_iter().map(f).collect(),
        }
    }
    #[cfg(not(feature = "parallel"))]
    {
        items.into_iter().map(f).collect()
    }
}

/// Parallel map over an index range; `map_collect` over `0..n`.
pub fn map_range<T, F>(n: usize, f: F) -> Vec<T>
where
    T: Send,
    F: Fn(usize) -> T + Sync + Send,
{
    map_collect((0..n).collect(), f)
}

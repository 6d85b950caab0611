//! Data-parallel map with a sequential fallback. Results always come back
//! in input order, so seeded batch runs are identical with or without the
//! `parallel` feature.

#[cfg(feature = "parallel")]
use rayon::prelude::*;

#[cfg(feature = "parallel")]
pub fn map_collect<I, T, F>(items: I, f: F) -> Vec<T>
where
    I: IntoParallelIterator,
    T: Send,
    F: Fn(I::Item) -> T + Sync + Send,
{
    items.into_par_iter().map(f).collect()
}

#[cfg(not(feature = "parallel"))]
pub fn map_collect<I, T, F>(items: I, f: F) -> Vec<T>
where
    I: IntoIterator,
    F: Fn(I::Item) -> T,
{
    items.into_iter().map(f).collect()
}

/// Always sequential; used by benches to compare against [`map_collect`].
pub fn map_collect_seq<I, T, F>(items: I, f: F) -> Vec<T>
where
    I: IntoIterator,
    F: Fn(I::Item) -> T,
{
    items.into_iter().map(f).collect()
}

pub const fn is_parallel() -> bool {
    cfg!(feature = "parallel")
}

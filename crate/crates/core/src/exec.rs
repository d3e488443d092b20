//! Data-parallel helpers. With the `parallel` feature these run on the
//! current rayon pool; without it they are plain sequential loops with the
//! same output order.

#[cfg(feature = "parallel")]
use rayon::prelude::*;

/// Maps `f` over `items`, preserving input order.
#[cfg(feature = "parallel")]
pub(crate) fn map_ordered<T, R, F>(items: &[T], f: F) -> Vec<R>
where
    T: Sync,
    R: Send,
    F: Fn(&T) -> R + Sync + Send,
{
    items.par_iter().map(f).collect()
}

#[cfg(not(feature = "parallel"))]
pub(crate) fn map_ordered<T, R, F>(items: &[T], f: F) -> Vec<R>
where
    F: Fn(&T) -> R,
{
    items.iter().map(f).collect()
}

/// Maps `f` over `0..count`, preserving index order.
#[cfg(feature = "parallel")]
pub(crate) fn map_range<R, F>(count: usize, f: F) -> Vec<R>
where
    R: Send,
    F: Fn(usize) -> R + Sync + Send,
{
    (0..count).into_par_iter().map(f).collect()
}

#[cfg(not(feature = "parallel"))]
pub(crate) fn map_range<R, F>(count: usize, f: F) -> Vec<R>
where
    F: Fn(usize) -> R,
{
    (0..count).map(f).collect()
}

/// Folds `0..count` into per-worker accumulators and merges them. `merge`
/// must be associative and commutative so the result does not depend on how
/// the range is split.
#[cfg(feature = "parallel")]
pub(crate) fn fold_range<A, I, F, M>(count: usize, init: I, fold: F, merge: M) -> A
where
    A: Send,
    I: Fn() -> A + Sync + Send,
    F: Fn(A, usize) -> A + Sync + Send,
    M: Fn(A, A) -> A + Sync + Send,
{
    (0..count)
        .into_par_iter()
        .with_max_len(1)
        .fold(&init, fold)
        .reduce(&init, merge)
}

#[cfg(not(feature = "parallel"))]
pub(crate) fn fold_range<A, I, F, M>(count: usize, init: I, fold: F, _merge: M) -> A
where
    I: Fn() -> A,
    F: Fn(A, usize) -> A,
    M: Fn(A, A) -> A,
{
    (0..count).fold(init(), fold)
}

/// Number of workers the helpers above will use.
pub fn current_num_threads() -> usize {
    #[cfg(feature = "parallel")]
    {
        rayon::current_num_threads()
    }
    #[cfg(not(feature = "parallel"))]
    {
        1
    }
}

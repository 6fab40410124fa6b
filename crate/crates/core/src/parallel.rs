//! Data-parallel map with a sequential fallback.
//!
//! With the `parallel` feature (default) work is spread over rayon. Without it,
//! or inside [`with_jobs`]`(1, ..)`, the same closures run on plain iterators.
//! Results always come back in input order, so output never depends on the
//! number of workers.

use std::cell::Cell;

thread_local! {
    static SEQUENTIAL: Cell<bool> = const { Cell::new(false) };
}

/// Runs `op` with at most `jobs` workers. `0` keeps the ambient pool and
/// `1` forces the sequential path.
pub fn with_jobs<R: Send>(jobs: usize, op: impl FnOnce() -> R + Send) -> R {
    if jobs == 1 {
        let previous = SEQUENTIAL.with(|s| s.replace(true));
        let out = op();
        SEQUENTIAL.with(|s| s.set(previous));
        return out;
    }
    #[cfg(feature = "parallel")]
    if jobs > 1 {
        if let Ok(pool) = rayon::ThreadPoolBuilder::new().num_threads(jobs).build() {
            return pool.install(op);
        }
    }
    op()
}

pub fn is_sequential() -> bool {
    !cfg!(feature = "parallel") || SEQUENTIAL.with(|s| s.get())
}

pub fn par_map<T, R, F>(items: &[T], f: F) -> Vec<R>
where
    T: Sync,
    R: Send,
    F: Fn(&T) -> R + Sync + Send,
{
    #[cfg(feature = "parallel")]
    if !is_sequential() {
        use rayon::prelude::*;
        return items.par_iter().map(f).collect();
    }
    items.iter().map(f).collect()
}

/// Maps every item and returns the first `Some` in input order.
pub fn par_find_first<T, R, F>(items: &[T], f: F) -> Option<R>
where
    T: Sync,
    R: Send,
    F: Fn(&T) -> Option<R> + Sync + Send,
{
    #[cfg(feature = "parallel")]
    if !is_sequential() {
        use rayon::prelude::*;
        return items
            .par_iter()
            .map(f)
            .find_first(Option::is_some)
            .flatten();
    }
    items.iter().find_map(f)
}

/// Like [`par_map`] for fallible closures; the first error in input order wins.
pub fn try_par_map<T, R, E, F>(items: &[T], f: F) -> Result<Vec<R>, E>
where
    T: Sync,
    R: Send,
    E: Send,
    F: Fn(&T) -> Result<R, E> + Sync + Send,
{
    par_map(items, f).into_iter().collect()
}

//! Parallel/sequential switch used by the data-parallel loops.

#[cfg(feature = "parallel")]
use rayon::prelude::*;

/// How a data-parallel loop is executed.
///
/// `Parallel` silently degrades to `Sequential` when the crate is built without
/// the `parallel` feature. Results never depend on the choice: all reductions
/// are integer sums or ordered collections.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Execution {
    Sequential,
    #[default]
    Parallel,
}

impl Execution {
    /// True when this build actually runs `Parallel` on a thread pool.
    pub fn is_parallel_available() -> bool {
        cfg!(feature = "parallel")
    }
}

pub(crate) fn sum_u64<T, F>(items: &[T], exec: Execution, f: F) -> u64
where
    T: Sync,
    F: Fn(&T) -> u64 + Sync + Send,
{
    match exec {
        #[cfg(feature = "parallel")]
        Execution::Parallel => items.par_iter().map(&f).sum(),
        _ => items.iter().map(f).sum(),
    }
}

pub(crate) fn sum_pair<T, F>(items: &[T], exec: Execution, f: F) -> (u64, u64)
where
    T: Sync,
    F: Fn(&T) -> (u64, u64) + Sync + Send,
{
    let add = |a: (u64, u64), b: (u64, u64)| (a.0 + b.0, a.1 + b.1);
    match exec {
        #[cfg(feature = "parallel")]
        Execution::Parallel => items.par_iter().map(&f).reduce(|| (0, 0), add),
        _ => items.iter().map(f).fold((0, 0), add),
    }
}

/// Ordered map: output order equals input order under both modes.
pub(crate) fn map_collect<T, R, F>(items: &[T], exec: Execution, f: F) -> Vec<R>
where
    T: Sync,
    R: Send,
    F: Fn(&T) -> R + Sync + Send,
{
    match exec {
        #[cfg(feature = "parallel")]
        Execution::Parallel => items.par_iter().map(&f).collect(),
        _ => items.iter().map(f).collect(),
    }
}

//! Sequential or data-parallel evaluation of independent work items.

use std::ops::Range;

#[cfg(feature = "parallel")]
use rayon::prelude::*;

/// How independent items are evaluated. Without the `parallel` feature both
/// variants run sequentially.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum Execution {
    Sequential,
    #[default]
    Parallel,
}

impl Execution {
    pub fn is_parallel(self) -> bool {
        cfg!(feature = "parallel") && self == Execution::Parallel
    }

    /// First index (in range order) for which `f` returns `Some`, regardless of
    /// scheduling.
    pub fn find_first<T, F>(self, range: Range<u64>, f: F) -> Option<T>
    where
        T: Send,
        F: Fn(u64) -> Option<T> + Sync + Send,
    {
        #[cfg(feature = "parallel")]
        if self.is_parallel() {
            return range.into_par_iter().find_map_first(f);
        }
        range.into_iter().find_map(f)
    }

    /// `f` applied to every item, results in input order.
    pub fn map<I, T, F>(self, items: &[I], f: F) -> Vec<T>
    where
        I: Sync,
        T: Send,
        F: Fn(&I) -> T + Sync + Send,
    {
        #[cfg(feature = "parallel")]
        if self.is_parallel() {
            return items.par_iter().map(f).collect();
        }
        items.iter().map(f).collect()
    }
}

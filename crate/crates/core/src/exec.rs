//! Execution strategy for the data-parallel inner loops.
//!
//! Every parallel routine collects per-item results into a `Vec` in index
//! order and reduces it sequentially afterwards, so the floating-point result
//! is identical for any number of threads.

/// Defaults to `Parallel` when the `parallel` feature is on.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Execution {
    #[cfg_attr(not(feature = "parallel"), default)]
    Sequential,
    #[cfg(feature = "parallel")]
    #[default]
    Parallel,
}

impl Execution {
    pub fn is_parallel(self) -> bool {
        !matches!(self, Execution::Sequential)
    }

    /// `(0..n).map(f).collect()`, possibly in parallel; output is in index order.
    pub fn map_range<T, F>(self, n: usize, f: F) -> Vec<T>
    where
        T: Send,
        F: Fn(usize) -> T + Sync + Send,
    {
        match self {
            Execution::Sequential => (0..n).map(f).collect(),
            #[cfg(feature = "parallel")]
            Execution::Parallel => {
                use rayon::prelude::*;
                (0..n).into_par_iter().map(f).collect()
            }
        }
    }

    /// Maps a slice, preserving order.
    pub fn map_slice<S, T, F>(self, items: &[S], f: F) -> Vec<T>
    where
        S: Sync,
        T: Send,
        F: Fn(&S) -> T + Sync + Send,
    {
        match self {
            Execution::Sequential => items.iter().map(f).collect(),
            #[cfg(feature = "parallel")]
            Execution::Parallel => {
                use rayon::prelude::*;
                items.par_iter().map(f).collect()
            }
        }
    }

    /// Fallible variant of [`Execution::map_range`]; the error reported is
    /// the one with the smallest index.
    pub fn try_map_range<T, E, F>(self, n: usize, f: F) -> Result<Vec<T>, E>
    where
        T: Send,
        E: Send,
        F: Fn(usize) -> Result<T, E> + Sync + Send,
    {
        self.map_range(n, f).into_iter().collect()
    }

    /// Sum of `f(i)` over `0..n`, reduced left to right.
    pub fn sum_range<F>(self, n: usize, f: F) -> f64
    where
        F: Fn(usize) -> f64 + Sync + Send,
    {
        self.map_range(n, f).into_iter().sum()
    }
}

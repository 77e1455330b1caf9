//! Execution strategy for the data-parallel sweeps.
//!
//! Every sweep returns the same result under either strategy; the parallel
//! variants only change scheduling. Without the `parallel` feature the
//! parallel strategy runs sequentially.

use serde::{Deserialize, Serialize};

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub enum Strategy {
    Sequential,
    #[default]
    Parallel,
}

impl Strategy {
    /// Whether work will actually be spread over threads.
    pub fn is_parallel(self) -> bool {
        cfg!(feature = "parallel") && self == Strategy::Parallel
    }
}

/// Maps `f` over `0..n` and collects results in index order.
pub fn map_range<T, F>(strategy: Strategy, n: usize, f: F) -> Vec<T>
where
    T: Send,
    F: Fn(usize) -> T + Sync + Send,
{
    #[cfg(feature = "parallel")]
    if strategy.is_parallel() {
        use rayon::prelude::*;
        return (0..n).into_par_iter().map(f).collect();
    }
    let _ = strategy;
    (0..n).map(f).collect()
}

/// Least `i` in `0..n` with `f(i) = Some(_)`, together with its value.
pub fn find_first<T, F>(strategy: Strategy, n: usize, f: F) -> Option<(usize, T)>
where
    T: Send,
    F: Fn(usize) -> Option<T> + Sync + Send,
{
    #[cfg(feature = "parallel")]
    if strategy.is_parallel() {
        use rayon::prelude::*;
        return (0..n).into_par_iter().find_map_first(|i| f(i).map(|t| (i, t)));
    }
    let _ = strategy;
    (0..n).find_map(|i| f(i).map(|t| (i, t)))
}

/// Whether `f` holds on every index of `0..n`.
pub fn all<F>(strategy: Strategy, n: usize, f: F) -> bool
where
    F: Fn(usize) -> bool + Sync + Send,
{
    find_first(strategy, n, |i| (!f(i)).then_some(())).is_none()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn strategies_agree() {
        let f = |i: usize| i * i % 7;
        assert_eq!(map_range(Strategy::Sequential, 100, f), map_range(Strategy::Parallel, 100, f));
        let g = |i: usize| (i > 40 && i.is_multiple_of(3)).then_some(i);
        assert_eq!(find_first(Strategy::Sequential, 100, g), Some((42, 42)));
        assert_eq!(find_first(Strategy::Parallel, 100, g), Some((42, 42)));
        assert!(all(Strategy::Parallel, 10, |i| i < 10));
    }
}

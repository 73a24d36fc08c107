//! Execution strategy for the counting loops.
//!
//! With the `parallel` feature (on by default) `Exec::Parallel` splits index
//! ranges over the rayon pool; without it both variants run sequentially. Sums
//! are of integers, so the result never depends on the schedule.

use serde::{Deserialize, Serialize};

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Exec {
    Sequential,
    #[default]
    Parallel,
}

impl Exec {
    /// Σ f(i) for i in 0..n.
    pub fn sum(self, n: u32, f: impl Fn(u32) -> u64 + Sync + Send) -> u64 {
        match self {
            Exec::Sequential => (0..n).map(f).sum(),
            Exec::Parallel => parallel_sum(n, f),
        }
    }

    /// Maps 0..n and keeps the output in index order.
    pub fn map<T: Send>(self, n: usize, f: impl Fn(usize) -> T + Sync + Send) -> Vec<T> {
        match self {
            Exec::Sequential => (0..n).map(f).collect(),
            Exec::Parallel => parallel_map(n, f),
        }
    }
}

/// Runs `f` on a pool of `threads` workers, or on the global pool when
/// `threads` is 0. Without the `parallel` feature `f` just runs.
#[cfg(feature = "parallel")]
pub fn with_threads<T: Send>(threads: usize, f: impl FnOnce() -> T + Send) -> T {
    if threads == 0 {
        return f();
    }
    match rayon::ThreadPoolBuilder::new().num_threads(threads).build() {
        Ok(pool) => pool.install(f),
        Err(_) => f(),
    }
}

#[cfg(not(feature = "parallel"))]
pub fn with_threads<T: Send>(_threads: usize, f: impl FnOnce() -> T + Send) -> T {
    f()
}

#[cfg(feature = "parallel")]
fn parallel_sum(n: u32, f: impl Fn(u32) -> u64 + Sync + Send) -> u64 {
    use rayon::prelude::*;
    (0..n).into_par_iter().with_min_len(1024).map(f).sum()
}

#[cfg(not(feature = "parallel"))]
fn parallel_sum(n: u32, f: impl Fn(u32) -> u64 + Sync + Send) -> u64 {
    (0..n).map(f).sum()
}

#[cfg(feature = "parallel")]
fn parallel_map<T: Send>(n: usize, f: impl Fn(usize) -> T + Sync + Send) -> Vec<T> {
    use rayon::prelude::*;
    (0..n).into_par_iter().map(f).collect()
}

#[cfg(not(feature = "parallel"))]
fn parallel_map<T: Send>(n: usize, f: impl Fn(usize) -> T + Sync + Send) -> Vec<T> {
    (0..n).map(f).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn both_strategies_agree() {
        let f = |i: u32| (i as u64 * 2654435761) % 97;
        assert_eq!(Exec::Sequential.sum(100_000, f), Exec::Parallel.sum(100_000, f));
        let g = |i: usize| i * i;
        assert_eq!(Exec::Sequential.map(1000, g), Exec::Parallel.map(1000, g));
    }
}

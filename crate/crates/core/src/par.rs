//! Execution strategy for the data-parallel inner loops.
//!
//! With the `parallel` feature the loops run on the rayon pool; without it,
//! or with [`Execution::Sequential`], they run on the calling thread.

#[cfg(feature = "parallel")]
use rayon::prelude::*;

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
}

/// Maps `f` over `0..n`, preserving order.
pub fn map_range<T, F>(exec: Execution, n: usize, f: F) -> Vec<T>
where
    T: Send,
    F: Fn(usize) -> T + Sync + Send,
{
    #[cfg(feature = "parallel")]
    if exec.is_parallel() {
        return (0..n).into_par_iter().map(f).collect();
    }
    let _ = exec;
    (0..n).map(f).collect()
}

/// Returns the first index in `0..n` (in order) for which `f` yields `Some`.
pub fn find_first<T, F>(exec: Execution, n: usize, f: F) -> Option<(usize, T)>
where
    T: Send,
    F: Fn(usize) -> Option<T> + Sync + Send,
{
    #[cfg(feature = "parallel")]
    if exec.is_parallel() {
        return (0..n).into_par_iter().find_map_first(|i| f(i).map(|t| (i, t)));
    }
    let _ = exec;
    (0..n).find_map(|i| f(i).map(|t| (i, t)))
}

/// True if `f` holds for every index in `0..n`.
pub fn all<F>(exec: Execution, n: usize, f: F) -> bool
where
    F: Fn(usize) -> bool + Sync + Send,
{
    find_first(exec, n, |i| if f(i) { None } else { Some(()) }).is_none()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn both_modes_agree() {
        for exec in [Execution::Sequential, Execution::Parallel] {
            assert_eq!(map_range(exec, 5, |i| i * i), vec![0, 1, 4, 9, 16]);
            assert_eq!(find_first(exec, 100, |i| (i > 41).then_some(i)), Some((42, 42)));
            assert!(all(exec, 10, |i| i < 10));
            assert!(!all(exec, 10, |i| i < 9));
        }
    }
}

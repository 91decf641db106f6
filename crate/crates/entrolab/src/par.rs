//! Execution helpers for embarrassingly parallel sweeps (suite samples,
//! optimizer restarts, extension sweeps).
//!
//! With the `parallel` feature (default) the mapping helpers fan work out
//! over a rayon pool; without it they run sequentially. Results are always
//! collected in input order, so both modes produce identical output and
//! callers can reduce deterministically. [`map_collect_seq`] is always
//! sequential regardless of features, which lets benchmarks compare the two
//! execution paths within one build.

#[cfg(feature = "parallel")]
use rayon::prelude::*;

/// Maps `f` over `items`, in parallel when the `parallel` feature is active.
/// Output order matches input order.
#[cfg(feature = "parallel")]
pub fn map_collect<T: Sync, R: Send, F>(items: &[T], f: F) -> Vec<R>
where
    F: Fn(&T) -> R + Sync + Send,
{
    items.par_iter().map(f).collect()
}

/// Maps `f` over `items`, in parallel when the `parallel` feature is active.
/// Output order matches input order.
#[cfg(not(feature = "parallel"))]
pub fn map_collect<T, R, F>(items: &[T], f: F) -> Vec<R>
where
    F: Fn(&T) -> R,
{
    items.iter().map(f).collect()
}

/// Sequential mapping with the same contract as [`map_collect`]; available in
/// every build for baseline comparisons.
pub fn map_collect_seq<T, R, F>(items: &[T], f: F) -> Vec<R>
where
    F: Fn(&T) -> R,
{
    items.iter().map(f).collect()
}

/// Maps `f` over `0..count` with the [`map_collect`] execution policy.
pub fn map_indexed<R: Send, F>(count: usize, f: F) -> Vec<R>
where
    F: Fn(usize) -> R + Sync + Send,
{
    let indices: Vec<usize> = (0..count).collect();
    map_collect(&indices, |&i| f(i))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parallel_and_sequential_agree_in_order() {
        let items: Vec<u64> = (0..100).collect();
        let f = |x: &u64| x * x + 1;
        assert_eq!(map_collect(&items, f), map_collect_seq(&items, f));
    }

    #[test]
    fn indexed_map_covers_range() {
        let out = map_indexed(5, |i| i * 2);
        assert_eq!(out, vec![0, 2, 4, 6, 8]);
    }
}

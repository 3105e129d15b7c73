//! Order-preserving map helpers that run on rayon when the `parallel`
//! feature is enabled and fall back to plain iteration otherwise.
//!
//! Results are always collected in input order, so callers get the same
//! output under either strategy.

use std::ops::Range;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Strategy {
    Sequential,
    Parallel,
}

impl Default for Strategy {
    fn default() -> Self {
        if cfg!(feature = "parallel") {
            Strategy::Parallel
        } else {
            Strategy::Sequential
        }
    }
}

impl Strategy {
    /// True when work will actually be spread over the rayon pool.
    pub fn is_parallel(self) -> bool {
        cfg!(feature = "parallel") && self == Strategy::Parallel
    }
}

pub fn map_range<R, F>(range: Range<u64>, strategy: Strategy, f: F) -> Vec<R>
where
    R: Send,
    F: Fn(u64) -> R + Sync + Send,
{
    #[cfg(feature = "parallel")]
    if strategy.is_parallel() {
        use rayon::prelude::*;
        return range.into_par_iter().map(f).collect();
    }
    let _ = strategy;
    range.map(f).collect()
}

pub fn map_slice<T, R, F>(items: &[T], strategy: Strategy, f: F) -> Vec<R>
where
    T: Sync,
    R: Send,
    F: Fn(&T) -> R + Sync + Send,
{
    #[cfg(feature = "parallel")]
    if strategy.is_parallel() {
        use rayon::prelude::*;
        return items.par_iter().map(f).collect();
    }
    let _ = strategy;
    items.iter().map(f).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn strategies_agree_and_keep_order() {
        let a = map_range(0..1000, Strategy::Sequential, |i| i * i);
        let b = map_range(0..1000, Strategy::Parallel, |i| i * i);
        assert_eq!(a, b);
        let v: Vec<u32> = (0..100).collect();
        assert_eq!(
            map_slice(&v, Strategy::Parallel, |x| x + 1),
            map_slice(&v, Strategy::Sequential, |x| x + 1)
        );
    }
}

//! Execution mode for data-parallel loops.
//!
//! With the `parallel` feature off, [`Exec::Parallel`] runs sequentially.

use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Exec {
    Sequential,
    #[default]
    Parallel,
}

impl Exec {
    /// True when work will actually be spread over threads.
    pub fn is_parallel(self) -> bool {
        cfg!(feature = "parallel") && self == Exec::Parallel
    }

    /// `f` applied to every item, order preserved.
    pub fn map<T, R, F>(self, items: &[T], f: F) -> Vec<R>
    where
        T: Sync,
        R: Send,
        F: Fn(&T) -> R + Sync + Send,
    {
        #[cfg(feature = "parallel")]
        if self == Exec::Parallel {
            use rayon::prelude::*;
            return items.par_iter().map(f).collect();
        }
        items.iter().map(f).collect()
    }

    /// `f(i)` for `i in 0..n`, order preserved.
    pub fn map_range<R, F>(self, n: usize, f: F) -> Vec<R>
    where
        R: Send,
        F: Fn(usize) -> R + Sync + Send,
    {
        #[cfg(feature = "parallel")]
        if self == Exec::Parallel {
            use rayon::prelude::*;
            return (0..n).into_par_iter().map(f).collect();
        }
        (0..n).map(f).collect()
    }

    /// Maximum of `f(i)` over `0..n` together with its index; NaN values are
    /// treated as larger than everything. `None` when `n == 0`.
    pub fn argmax_range<F>(self, n: usize, f: F) -> Option<(usize, f64)>
    where
        F: Fn(usize) -> f64 + Sync + Send,
    {
        let pick = |a: (usize, f64), b: (usize, f64)| {
            let a_wins = a.1.is_nan() || (!b.1.is_nan() && (a.1 > b.1 || (a.1 == b.1 && a.0 < b.0)));
            if a_wins {
                a
            } else {
                b
            }
        };
        #[cfg(feature = "parallel")]
        if self == Exec::Parallel {
            use rayon::prelude::*;
            return (0..n).into_par_iter().map(|i| (i, f(i))).reduce_with(pick);
        }
        (0..n).map(|i| (i, f(i))).reduce(pick)
    }

    /// Minimum of `f(i)` over `0..n` with its index, ties to the lowest index.
    pub fn argmin_range<F>(self, n: usize, f: F) -> Option<(usize, f64)>
    where
        F: Fn(usize) -> f64 + Sync + Send,
    {
        self.argmax_range(n, |i| -f(i)).map(|(i, v)| (i, -v))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn modes_agree() {
        let xs: Vec<u64> = (0..1000).collect();
        let s = Exec::Sequential.map(&xs, |x| x * x);
        let p = Exec::Parallel.map(&xs, |x| x * x);
        assert_eq!(s, p);
        let f = |i: usize| ((i as f64) * 0.37).sin();
        assert_eq!(Exec::Sequential.argmax_range(500, f), Exec::Parallel.argmax_range(500, f));
        assert_eq!(Exec::Sequential.argmin_range(500, f), Exec::Parallel.argmin_range(500, f));
        assert_eq!(Exec::Parallel.argmax_range(0, f), None);
    }
}

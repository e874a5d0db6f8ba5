//! Data-parallel map with a sequential fallback.
//!
//! Sweeps over grids (G evaluations, field-of-values angles, box tilings,
//! curve samples) go through [`Exec::map`]. Results always come back in input
//! order, so parallel and sequential runs produce identical output.

use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Exec {
    #[default]
    Parallel,
    Sequential,
}

impl Exec {
    /// True when this build can actually run in parallel.
    pub fn parallel_available() -> bool {
        cfg!(feature = "parallel")
    }

    pub fn map<T, R, F>(self, items: &[T], f: F) -> Vec<R>
    where
        T: Sync,
        R: Send,
        F: Fn(&T) -> R + Sync + Send,
    {
        match self {
            #[cfg(feature = "parallel")]
            Exec::Parallel => {
                use rayon::prelude::*;
                items.par_iter().map(f).collect()
            }
            _ => items.iter().map(f).collect(),
        }
    }

    /// Map over `0..n`.
    pub fn map_range<R, F>(self, n: usize, f: F) -> Vec<R>
    where
        R: Send,
        F: Fn(usize) -> R + Sync + Send,
    {
        let idx: Vec<usize> = (0..n).collect();
        self.map(&idx, |&i| f(i))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn order_is_preserved() {
        let xs: Vec<u64> = (0..1000).collect();
        let a = Exec::Parallel.map(&xs, |x| x * x);
        let b = Exec::Sequential.map(&xs, |x| x * x);
        assert_eq!(a, b);
        assert_eq!(a[999], 999 * 999);
    }
}

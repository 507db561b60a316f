//! Data-parallel helpers with a sequential fallback.
//!
//! With the `parallel` feature (default) the work is spread over rayon's
//! thread pool; without it, or with [`ExecMode::Sequential`], everything runs
//! on the calling thread.

#[cfg(feature = "parallel")]
use rayon::prelude::*;

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum ExecMode {
    /// Parallel when the `parallel` feature is compiled in.
    #[default]
    Auto,
    Sequential,
    Parallel,
}

impl ExecMode {
    pub fn is_parallel(self) -> bool {
        cfg!(feature = "parallel") && self != ExecMode::Sequential
    }
}

/// `items.flat_map(f)` preserving input order.
pub fn flat_map<T, U, F>(mode: ExecMode, items: &[T], f: F) -> Vec<U>
where
    T: Sync,
    U: Send,
    F: Fn(&T) -> Vec<U> + Sync + Send,
{
    #[cfg(feature = "parallel")]
    if mode.is_parallel() {
        return items.par_iter().flat_map_iter(f).collect();
    }
    let _ = mode;
    items.iter().flat_map(f).collect()
}

/// `items.map(f)` preserving input order.
pub fn map<T, U, F>(mode: ExecMode, items: &[T], f: F) -> Vec<U>
where
    T: Sync,
    U: Send,
    F: Fn(&T) -> U + Sync + Send,
{
    #[cfg(feature = "parallel")]
    if mode.is_parallel() {
        return items.par_iter().map(f).collect();
    }
    let _ = mode;
    items.iter().map(f).collect()
}

pub fn sort_unstable<T: Ord + Send>(mode: ExecMode, v: &mut [T]) {
    #[cfg(feature = "parallel")]
    if mode.is_parallel() {
        v.par_sort_unstable();
        return;
    }
    let _ = mode;
    v.sort_unstable();
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn modes_agree() {
        let items: Vec<u32> = (0..1000).collect();
        let f = |x: &u32| vec![*x, x * 2];
        assert_eq!(
            flat_map(ExecMode::Sequential, &items, f),
            flat_map(ExecMode::Auto, &items, f)
        );
        let mut a: Vec<u32> = items.iter().map(|x| (x * 7919) % 1000).collect();
        let mut b = a.clone();
        sort_unstable(ExecMode::Sequential, &mut a);
        sort_unstable(ExecMode::Parallel, &mut b);
        assert_eq!(a, b);
    }
}

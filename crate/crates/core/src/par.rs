//! Data-parallel execution with a sequential fallback.
//!
//! Batch work (random-matrix suites, lattice samples, k-sweeps, unit searches)
//! goes through [`Exec`]. Results are collected in input order, so the output
//! never depends on the thread count. Without the `parallel` feature every
//! budget runs sequentially.

/// Thread budget handed down from the caller.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Exec {
    threads: usize,
}

impl Default for Exec {
    fn default() -> Self {
        Exec::parallel()
    }
}

impl Exec {
    pub fn sequential() -> Self {
        Exec { threads: 1 }
    }

    /// Use every available core.
    pub fn parallel() -> Self {
        Exec { threads: 0 }
    }

    /// `0` means "all cores", `1` means sequential.
    pub fn with_threads(threads: usize) -> Self {
        Exec { threads }
    }

    pub fn threads(&self) -> usize {
        self.threads
    }

    pub fn is_sequential(&self) -> bool {
        self.threads == 1 || !cfg!(feature = "parallel")
    }

    /// Map `f` over `items`, preserving order.
    pub fn map<T, R, F>(&self, items: &[T], f: F) -> Vec<R>
    where
        T: Sync,
        R: Send,
        F: Fn(&T) -> R + Sync + Send,
    {
        if self.is_sequential() {
            return items.iter().map(f).collect();
        }
        self.map_parallel(items, f)
    }

    /// Map over `0..n`, preserving order.
    pub fn map_range<R, F>(&self, n: usize, f: F) -> Vec<R>
    where
        R: Send,
        F: Fn(usize) -> R + Sync + Send,
    {
        let idx: Vec<usize> = (0..n).collect();
        self.map(&idx, |&i| f(i))
    }

    #[cfg(feature = "parallel")]
    fn map_parallel<T, R, F>(&self, items: &[T], f: F) -> Vec<R>
    where
        T: Sync,
        R: Send,
        F: Fn(&T) -> R + Sync + Send,
    {
        use rayon::prelude::*;
        if self.threads == 0 {
            return items.par_iter().map(f).collect();
        }
        match rayon::ThreadPoolBuilder::new().num_threads(self.threads).build() {
            Ok(pool) => pool.install(|| items.par_iter().map(&f).collect()),
            Err(_) => items.iter().map(f).collect(),
        }
    }

    #[cfg(not(feature = "parallel"))]
    fn map_parallel<T, R, F>(&self, items: &[T], f: F) -> Vec<R>
    where
        T: Sync,
        R: Send,
        F: Fn(&T) -> R + Sync + Send,
    {
        items.iter().map(f).collect()
    }
}

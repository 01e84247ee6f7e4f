//! Data-parallel map used by batch classification and the scaling driver.
//!
//! With the `parallel` feature (default) work is spread over the rayon pool;
//! without it, or with [`Execution::Sequential`], items run in order on the
//! calling thread. Results always come back in input order.

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Execution {
    Sequential,
    #[default]
    Parallel,
}

/// Environment variable capping the worker count.
pub const THREADS_ENV: &str = "RIESZLAB_THREADS";

pub fn map<T, R, F>(items: &[T], exec: Execution, f: F) -> Vec<R>
where
    T: Sync,
    R: Send,
    F: Fn(&T) -> R + Sync + Send,
{
    match exec {
        Execution::Sequential => items.iter().map(f).collect(),
        Execution::Parallel => parallel_map(items, f),
    }
}

#[cfg(feature = "parallel")]
fn parallel_map<T, R, F>(items: &[T], f: F) -> Vec<R>
where
    T: Sync,
    R: Send,
    F: Fn(&T) -> R + Sync + Send,
{
    use rayon::prelude::*;
    items.par_iter().map(f).collect()
}

#[cfg(not(feature = "parallel"))]
fn parallel_map<T, R, F>(items: &[T], f: F) -> Vec<R>
where
    T: Sync,
    R: Send,
    F: Fn(&T) -> R + Sync + Send,
{
    items.iter().map(f).collect()
}

/// Sizes the global pool from `RIESZLAB_THREADS` if set. Returns the cap that
/// was applied. Calling it after the pool has started is a no-op.
pub fn configure_from_env() -> Option<usize> {
    let threads = std::env::var(THREADS_ENV).ok()?.trim().parse::<usize>().ok()?;
    if threads == 0 {
        return None;
    }
    configure_threads(threads);
    Some(threads)
}

#[cfg(feature = "parallel")]
pub fn configure_threads(threads: usize) {
    let _ = rayon::ThreadPoolBuilder::new().num_threads(threads).build_global();
}

#[cfg(not(feature = "parallel"))]
pub fn configure_threads(_threads: usize) {}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn order_is_preserved() {
        let items: Vec<u64> = (0..1000).collect();
        let seq = map(&items, Execution::Sequential, |x| x * x);
        let par = map(&items, Execution::Parallel, |x| x * x);
        assert_eq!(seq, par);
        assert_eq!(par[999], 999 * 999);
    }
}

//! Worker fan-out controlled by the `DECOLAB_THREADS` environment variable.
//! Unset, empty or `1` means serial. Results always come back in input order.

use rayon::prelude::*;

pub const THREADS_ENV: &str = "DECOLAB_THREADS";

pub fn worker_count() -> usize {
    std::env::var(THREADS_ENV).ok().and_then(|v| v.trim().parse::<usize>().ok()).filter(|&n| n > 0).unwrap_or(1)
}

/// `(0..n).map(f)` on the configured number of workers.
pub fn map_indexed<T, F>(n: usize, f: F) -> Vec<T>
where
    T: Send,
    F: Fn(usize) -> T + Sync + Send,
{
    let workers = worker_count();
    if workers <= 1 || n <= 1 {
        return (0..n).map(f).collect();
    }
    match rayon::ThreadPoolBuilder::new().num_threads(workers).build() {
        Ok(pool) => pool.install(|| (0..n).into_par_iter().map(&f).collect()),
        Err(e) => {
            log::warn!("falling back to serial execution: {e}");
            (0..n).map(f).collect()
        }
    }
}

//! Worker-count plumbing shared by every parallel stage.

use std::num::NonZeroUsize;

/// Environment variable that overrides the default worker count.
pub const WORKERS_ENV: &str = "HMOTIF_WORKERS";

/// Worker count from `HMOTIF_WORKERS`, else the number of available cores.
pub fn default_workers() -> usize {
    std::env::var(WORKERS_ENV)
        .ok()
        .and_then(|v| v.trim().parse::<usize>().ok())
        .filter(|&n| n > 0)
        .unwrap_or_else(|| std::thread::available_parallelism().map(NonZeroUsize::get).unwrap_or(1))
}

/// Runs `f` inside a dedicated rayon pool capped at `workers` threads.
pub fn run<R, F>(workers: usize, f: F) -> R
where
    R: Send,
    F: FnOnce() -> R + Send,
{
    match rayon::ThreadPoolBuilder::new().num_threads(workers.max(1)).build() {
        Ok(pool) => pool.install(f),
        // Thread creation failed; fall back to the calling thread.
        Err(_) => f(),
    }
}

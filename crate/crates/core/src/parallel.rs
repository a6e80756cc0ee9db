use rayon::ThreadPoolBuilder;

/// Environment variable overriding the worker count.
pub const JOBS_ENV: &str = "KSFORGE_JOBS";

/// Runs `f` on a dedicated pool of `jobs` workers (at least one). Results of
/// every parallel routine in this crate are sorted before being returned, so
/// the worker count never affects output.
pub fn with_jobs<R, F>(jobs: usize, f: F) -> R
where
    R: Send,
    F: FnOnce() -> R + Send,
{
    ThreadPoolBuilder::new()
        .num_threads(jobs.max(1))
        .build()
        .expect("thread pool")
        .install(f)
}

/// Worker count from `KSFORGE_JOBS`, falling back to the available
/// parallelism.
pub fn default_jobs() -> usize {
    std::env::var(JOBS_ENV)
        .ok()
        .and_then(|v| v.trim().parse::<usize>().ok())
        .filter(|&n| n >= 1)
        .unwrap_or_else(|| std::thread::available_parallelism().map_or(1, |n| n.get()))
}

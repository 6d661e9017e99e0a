use rayon::{ThreadPool, ThreadPoolBuilder};

/// Environment variable capping the worker count.
pub const THREADS_ENV: &str = "SKETCHOPT_THREADS";

/// A pool sized by `SKETCHOPT_THREADS`, or rayon's default when unset or invalid.
pub fn worker_pool() -> ThreadPool {
    let mut b = ThreadPoolBuilder::new();
    if let Some(k) = std::env::var(THREADS_ENV).ok().and_then(|v| v.trim().parse::<usize>().ok()) {
        if k > 0 {
            b = b.num_threads(k);
        }
    }
    b.build().expect("thread pool")
}

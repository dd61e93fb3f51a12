use crate::error::{Error, Result};

/// Runs `job` on a dedicated pool of `workers` threads, or on rayon's global
/// pool when `workers` is 0.
pub fn with_pool<T: Send>(workers: usize, job: impl FnOnce() -> T + Send) -> Result<T> {
    if workers == 0 {
        return Ok(job());
    }
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(workers)
        .build()
        .map_err(|e| Error::InvalidArgument(format!("cannot build worker pool: {e}")))?;
    Ok(pool.install(job))
}

//! Rayon-backed fold executor and bounded thread pools.

use kinvid_core::protocol::FoldExecutor;
use rayon::prelude::*;

use crate::{Error, Result};

/// Runs leave-one-out folds on the current rayon pool.
#[derive(Debug, Clone, Copy, Default)]
pub struct RayonExecutor;

impl FoldExecutor for RayonExecutor {
    fn run(
        &self,
        folds: usize,
        fold: &(dyn Fn(usize) -> kinvid_core::Result<Option<f64>> + Sync),
    ) -> Vec<kinvid_core::Result<Option<f64>>> {
        (0..folds).into_par_iter().map(fold).collect()
    }
}

/// Runs `f` on a pool of `jobs` threads; 0 means one per core.
pub fn with_jobs<T: Send>(jobs: usize, f: impl FnOnce() -> T + Send) -> Result<T> {
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(jobs)
        .build()
        .map_err(|e| Error::Usage(format!("cannot start {jobs} worker threads: {e}")))?;
    Ok(pool.install(f))
}

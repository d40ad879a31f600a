use rayon::prelude::*;

use crate::error::{HarnessError, Result};

pub const THREADS_VAR: &str = "QCORR_THREADS";

fn pool() -> Result<rayon::ThreadPool> {
    let mut builder = rayon::ThreadPoolBuilder::new();
    if let Ok(raw) = std::env::var(THREADS_VAR) {
        let n: usize = raw
            .trim()
            .parse()
            .map_err(|_| HarnessError::Config(format!("{THREADS_VAR}={raw:?} is not a thread count")))?;
        builder = builder.num_threads(n);
    }
    builder.build().map_err(|e| HarnessError::Config(e.to_string()))
}

/// Evaluates `f` on `0..n` in parallel and returns the results in index
/// order, so output never depends on the thread count.
pub fn par_map<T, F>(n: usize, f: F) -> Result<Vec<T>>
where
    T: Send,
    F: Fn(usize) -> Result<T> + Sync + Send,
{
    pool()?.install(|| (0..n).into_par_iter().map(f).collect())
}

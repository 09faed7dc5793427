use casimir_core::energy::{Executor, LogDet};
use casimir_core::Result;
use rayon::prelude::*;
use rayon::{ThreadPool, ThreadPoolBuilder};

use crate::error::{CliError, CliResult};

/// Environment variable holding the worker count.
pub const THREADS_VAR: &str = "CASIMIR_THREADS";

/// Runs integrand batches on a rayon pool. Results come back in input order
/// so sums do not depend on scheduling.
pub struct PoolExecutor {
    pool: ThreadPool,
}

impl PoolExecutor {
    pub fn new(threads: usize) -> CliResult<Self> {
        let pool = ThreadPoolBuilder::new()
            .num_threads(threads)
            .build()
            .map_err(|e| CliError::Usage(format!("cannot start {threads} worker threads: {e}")))?;
        Ok(PoolExecutor { pool })
    }

    /// Pool sized from `CASIMIR_THREADS`, or the available parallelism when
    /// the variable is unset.
    pub fn from_env() -> CliResult<Self> {
        Self::new(threads_from(std::env::var(THREADS_VAR).ok().as_deref())?)
    }

    pub fn threads(&self) -> usize {
        self.pool.current_num_threads()
    }

    /// Runs `f` inside the pool, so nested parallel iterators share it.
    pub fn install<R: Send>(&self, f: impl FnOnce() -> R + Send) -> R {
        self.pool.install(f)
    }
}

/// Parses a thread-count setting; `None` means one thread per available core.
pub fn threads_from(value: Option<&str>) -> CliResult<usize> {
    match value.map(str::trim) {
        None | Some("") => Ok(std::thread::available_parallelism().map(|n| n.get()).unwrap_or(1)),
        Some(s) => match s.parse::<usize>() {
            Ok(n) if n > 0 => Ok(n),
            _ => Err(CliError::Usage(format!("{THREADS_VAR} must be a positive integer, got {s:?}"))),
        },
    }
}

impl Executor for PoolExecutor {
    fn map(&self, points: &[f64], f: &(dyn Fn(f64) -> Result<LogDet> + Sync)) -> Vec<Result<LogDet>> {
        self.pool.install(|| points.par_iter().map(|&s| f(s)).collect())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use casimir_core::energy::Sequential;

    #[test]
    fn thread_setting_parses() {
        assert_eq!(threads_from(Some("3")).unwrap(), 3);
        assert!(threads_from(None).unwrap() >= 1);
        assert!(threads_from(Some("0")).is_err());
        assert!(threads_from(Some("many")).is_err());
    }

    #[test]
    fn pool_matches_sequential_order() {
        let pool = PoolExecutor::new(4).unwrap();
        let pts: Vec<f64> = (0..200).map(|i| i as f64 * 0.1).collect();
        let f = |s: f64| Ok(LogDet::new(-(s * s)));
        let a: Vec<f64> = pool.map(&pts, &f).into_iter().map(|r| r.unwrap().value).collect();
        let b: Vec<f64> = Sequential.map(&pts, &f).into_iter().map(|r| r.unwrap().value).collect();
        assert_eq!(a, b);
    }
}

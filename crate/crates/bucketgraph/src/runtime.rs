//! Thread-pool handle for one benchmark process. Built once per thread-count
//! and reused across runs so per-run cost is round synchronization, not
//! thread spawning. Carries an optional wall-clock budget that the round
//! loops poll, letting the tuner abandon hopeless schedules.

use std::sync::atomic::{AtomicU64, Ordering};
use std::time::{Duration, Instant};

use crate::{Error, Result};

pub struct Runtime {
    pool: rayon::ThreadPool,
    threads: usize,
    epoch: Instant,
    /// Deadline in nanoseconds since `epoch`; 0 means unlimited.
    deadline_nanos: AtomicU64,
}

impl Runtime {
    pub fn new(threads: usize) -> Result<Runtime> {
        if threads == 0 {
            return Err(Error::Config("thread count must be >= 1".into()));
        }
        let pool = rayon::ThreadPoolBuilder::new()
            .num_threads(threads)
            .build()
            .map_err(|e| Error::Config(format!("failed to build thread pool: {e}")))?;
        Ok(Runtime {
            pool,
            threads,
            epoch: Instant::now(),
            deadline_nanos: AtomicU64::new(0),
        })
    }

    pub fn threads(&self) -> usize {
        self.threads
    }

    /// Abort any run still going after `budget` from now. Checked between
    /// rounds, so a single oversized round can overshoot.
    pub fn set_time_budget(&self, budget: Option<Duration>) {
        let nanos = match budget {
            Some(b) => (self.epoch.elapsed() + b).as_nanos().min(u64::MAX as u128) as u64,
            None => 0,
        };
        self.deadline_nanos.store(nanos, Ordering::Relaxed);
    }

    pub(crate) fn deadline_hit(&self) -> bool {
        let d = self.deadline_nanos.load(Ordering::Relaxed);
        d != 0 && self.epoch.elapsed().as_nanos() as u64 >= d
    }

    pub(crate) fn pool(&self) -> &rayon::ThreadPool {
        &self.pool
    }
}

impl std::fmt::Debug for Runtime {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("Runtime")
            .field("threads", &self.threads)
            .finish()
    }
}

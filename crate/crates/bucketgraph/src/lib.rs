//! Parallel ordered graph processing with bucketed priority scheduling.
//!
//! Vertices carry monotonically-changing priorities and are processed bucket
//! by bucket in priority order. Three interchangeable bucket update
//! strategies — lazy (buffered moves, compacted once per round), eager
//! (thread-local bins updated immediately), and eager with bucket fusion
//! (same-priority rounds drained locally without barriers) — plus priority
//! coarsening drive six ordered algorithms: delta-stepping SSSP, weighted
//! BFS, point-to-point shortest path, A* search, k-core decomposition, and
//! approximate set cover. Serial oracles verify every result.

pub mod algorithms;
pub mod engine;
pub mod graph;
pub mod queue;
pub mod report;
pub mod rng;
pub mod runtime;
pub mod tune;

/// Library-wide error type. The CLI maps these onto exit codes: I/O and
/// parse failures exit 1, configuration and domain failures exit 2.
#[derive(Debug, thiserror::Error)]
pub enum Error {
    #[error("I/O error: {0}")]
    Io(#[from] std::io::Error),
    #[error("parse error at {path}:{line}: {msg}")]
    Parse {
        path: String,
        line: usize,
        msg: String,
    },
    #[error("domain error: {0}")]
    Domain(String),
    #[error("configuration error: {0}")]
    Config(String),
}

impl Error {
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::Io(_) | Error::Parse { .. } => 1,
            Error::Domain(_) | Error::Config(_) => 2,
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;

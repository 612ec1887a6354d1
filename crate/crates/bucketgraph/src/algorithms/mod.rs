//! The six ordered algorithms, each expressed as a driver over the bucket
//! queues and the traversal engine, plus serial oracles used for
//! verification.

pub mod astar;
pub mod kcore;
pub mod oracles;
pub mod setcover;
pub mod sssp;

use std::str::FromStr;

use crate::engine::{RoundStats, Schedule};
use crate::graph::{io, CoordinateTable, Graph, Vid};
use crate::report;
use crate::runtime::Runtime;
use crate::{Error, Result};

pub use astar::{astar, astar_with_heuristic, AstarResult, HeuristicSpec};
pub use kcore::{kcore, CorenessResult};
pub use setcover::{setcover, SetCoverResult};
pub use sssp::{ppsp, sssp_delta_stepping, wbfs, PpspResult, SsspResult};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum AlgoKind {
    Sssp,
    Wbfs,
    Ppsp,
    Astar,
    KCore,
    SetCover,
}

impl AlgoKind {
    pub const ALL: [AlgoKind; 6] = [
        AlgoKind::Sssp,
        AlgoKind::Wbfs,
        AlgoKind::Ppsp,
        AlgoKind::Astar,
        AlgoKind::KCore,
        AlgoKind::SetCover,
    ];

    pub fn name(&self) -> &'static str {
        match self {
            AlgoKind::Sssp => "sssp",
            AlgoKind::Wbfs => "wbfs",
            AlgoKind::Ppsp => "ppsp",
            AlgoKind::Astar => "astar",
            AlgoKind::KCore => "kcore",
            AlgoKind::SetCover => "setcover",
        }
    }

    /// Whether priority coarsening (delta > 1) is sound for this algorithm.
    pub fn allows_coarsening(&self) -> bool {
        matches!(self, AlgoKind::Sssp | AlgoKind::Ppsp | AlgoKind::Astar)
    }

    /// Whether the per-edge update is a constant-increment sum (the histogram
    /// strategy's precondition).
    pub fn constant_sum(&self) -> bool {
        matches!(self, AlgoKind::KCore)
    }

    pub fn needs_target(&self) -> bool {
        matches!(self, AlgoKind::Ppsp | AlgoKind::Astar)
    }
}

impl FromStr for AlgoKind {
    type Err = Error;
    fn from_str(s: &str) -> Result<AlgoKind> {
        match s.to_ascii_lowercase().as_str() {
            "sssp" => Ok(AlgoKind::Sssp),
            "wbfs" => Ok(AlgoKind::Wbfs),
            "ppsp" => Ok(AlgoKind::Ppsp),
            "astar" | "a*" => Ok(AlgoKind::Astar),
            "kcore" | "k-core" => Ok(AlgoKind::KCore),
            "setcover" => Ok(AlgoKind::SetCover),
            other => Err(Error::Config(format!("unknown algorithm '{other}'"))),
        }
    }
}

impl std::fmt::Display for AlgoKind {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.name())
    }
}

/// One problem instance, bundling the inputs the different algorithms need.
#[derive(Clone, Copy)]
pub struct ProblemInstance<'a> {
    pub graph: &'a Graph,
    pub coords: Option<&'a CoordinateTable>,
    pub source: Vid,
    pub target: Option<Vid>,
    /// Set-cover only: vertices `[0, num_sets)` are sets.
    pub num_sets: usize,
    pub epsilon: f64,
    /// Set-cover permutation seed.
    pub seed: u64,
}

impl<'a> ProblemInstance<'a> {
    pub fn new(graph: &'a Graph, source: Vid) -> ProblemInstance<'a> {
        ProblemInstance {
            graph,
            coords: None,
            source,
            target: None,
            num_sets: 0,
            epsilon: 0.01,
            seed: 0,
        }
    }
}

/// Uniform result of a dispatched run: a canonical text rendering, a 64-bit
/// digest of the output vector, and the round statistics.
#[derive(Debug, Clone)]
pub struct RunOutput {
    pub digest: u64,
    pub stats: RoundStats,
    pub text: String,
}

fn require_target(inst: &ProblemInstance) -> Result<Vid> {
    inst.target
        .ok_or_else(|| Error::Config("this algorithm needs a target vertex".into()))
}

/// Runs `algo` on `inst` under `sched` and renders the canonical output.
pub fn run_algorithm(
    algo: AlgoKind,
    inst: &ProblemInstance,
    sched: &Schedule,
    rt: &Runtime,
) -> Result<RunOutput> {
    match algo {
        AlgoKind::Sssp => {
            let r = sssp_delta_stepping(inst.graph, inst.source, sched, rt)?;
            Ok(RunOutput {
                digest: report::digest_i32s(&r.dist),
                text: io::format_distances(&r.dist),
                stats: r.stats,
            })
        }
        AlgoKind::Wbfs => {
            let r = wbfs(inst.graph, inst.source, sched, rt)?;
            Ok(RunOutput {
                digest: report::digest_i32s(&r.dist),
                text: io::format_distances(&r.dist),
                stats: r.stats,
            })
        }
        AlgoKind::Ppsp => {
            let target = require_target(inst)?;
            let r = ppsp(inst.graph, inst.source, target, sched, rt)?;
            Ok(RunOutput {
                digest: report::digest_i32s(&[r.distance]),
                text: format_point_distance(target, r.distance),
                stats: r.stats,
            })
        }
        AlgoKind::Astar => {
            let target = require_target(inst)?;
            let coords = inst
                .coords
                .ok_or_else(|| Error::Config("A* needs vertex coordinates".into()))?;
            let r = astar(inst.graph, coords, inst.source, target, sched, rt)?;
            Ok(RunOutput {
                digest: report::digest_i32s(&[r.distance]),
                text: format_point_distance(target, r.distance),
                stats: r.stats,
            })
        }
        AlgoKind::KCore => {
            let r = kcore(inst.graph, sched, rt)?;
            Ok(RunOutput {
                digest: report::digest_i32s(&r.coreness),
                text: {
                    let mut s = String::new();
                    for (v, &c) in r.coreness.iter().enumerate() {
                        s.push_str(&format!("{v} {c}\n"));
                    }
                    s
                },
                stats: r.stats,
            })
        }
        AlgoKind::SetCover => {
            let r = setcover(
                inst.graph,
                inst.num_sets,
                inst.epsilon,
                inst.seed,
                sched,
                rt,
            )?;
            Ok(RunOutput {
                digest: report::digest_u32s(&r.chosen),
                text: {
                    let mut s = String::new();
                    for &set in &r.chosen {
                        s.push_str(&format!("{set}\n"));
                    }
                    s
                },
                stats: r.stats,
            })
        }
    }
}

fn format_point_distance(target: Vid, distance: i32) -> String {
    if distance == i32::MAX {
        format!("{target} inf\n")
    } else {
        format!("{target} {distance}\n")
    }
}

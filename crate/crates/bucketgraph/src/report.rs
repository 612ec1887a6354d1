//! Machine-readable run reports and the result digests used to compare runs
//! across schedules and thread counts.

use serde::Serialize;

use crate::engine::{RoundStats, Schedule};

const FNV_OFFSET: u64 = 0xcbf29ce484222325;
const FNV_PRIME: u64 = 0x100000001b3;

fn fnv1a(words: impl Iterator<Item = u64>) -> u64 {
    let mut h = FNV_OFFSET;
    for w in words {
        for byte in w.to_le_bytes() {
            h ^= byte as u64;
            h = h.wrapping_mul(FNV_PRIME);
        }
    }
    h
}

/// Order-sensitive 64-bit digest of a result vector.
pub fn digest_i32s(xs: &[i32]) -> u64 {
    fnv1a(xs.iter().map(|&x| x as u32 as u64))
}

pub fn digest_u32s(xs: &[u32]) -> u64 {
    fnv1a(xs.iter().map(|&x| x as u64))
}

#[derive(Debug, Clone, Serialize)]
pub struct GraphDesc {
    pub n: usize,
    pub m: usize,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub source: Option<u32>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub target: Option<u32>,
}

/// One run's report. The digest is invariant across schedules and thread
/// counts for a fixed algorithm and input.
#[derive(Debug, Clone, Serialize)]
pub struct RunReport {
    pub schema: u32,
    pub algorithm: String,
    pub graph: GraphDesc,
    pub schedule: Schedule,
    pub threads: usize,
    pub time_ms: f64,
    pub rounds: u64,
    pub fused_rounds: u64,
    pub edges_relaxed: u64,
    pub buffer_compactions: u64,
    pub bucket_inserts: u64,
    pub stale_filtered: u64,
    pub ordering_violations: u64,
    /// Hex-encoded so the full 64 bits survive JSON number precision.
    pub digest: String,
}

impl RunReport {
    pub fn new(
        algorithm: &str,
        graph: GraphDesc,
        schedule: Schedule,
        threads: usize,
        stats: &RoundStats,
        digest: u64,
    ) -> RunReport {
        RunReport {
            schema: 1,
            algorithm: algorithm.to_string(),
            graph,
            schedule,
            threads,
            time_ms: stats.time_ms,
            rounds: stats.rounds,
            fused_rounds: stats.fused_rounds,
            edges_relaxed: stats.edges_relaxed,
            buffer_compactions: stats.buffer_compactions,
            bucket_inserts: stats.bucket_inserts,
            stale_filtered: stats.stale_filtered,
            ordering_violations: stats.ordering_violations,
            digest: format!("{digest:016x}"),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn digest_is_stable_and_order_sensitive() {
        assert_eq!(digest_i32s(&[1, 2, 3]), digest_i32s(&[1, 2, 3]));
        assert_ne!(digest_i32s(&[1, 2, 3]), digest_i32s(&[3, 2, 1]));
        assert_ne!(digest_i32s(&[]), digest_i32s(&[0]));
    }

    #[test]
    fn report_serializes_with_schema_field() {
        let rep = RunReport::new(
            "sssp",
            GraphDesc {
                n: 3,
                m: 2,
                source: Some(0),
                target: None,
            },
            Schedule::default(),
            4,
            &RoundStats::default(),
            0xdeadbeef,
        );
        let json = serde_json::to_string(&rep).unwrap();
        assert!(json.contains("\"schema\":1"));
        assert!(json.contains("\"update_strategy\":\"lazy\""));
        assert!(json.contains("\"direction\":\"SparsePush\""));
        assert!(json.contains("00000000deadbeef"));
    }
}

//! Machine-readable run reports. Field order is fixed by the struct layout
//! and every collection is sorted, so a report is byte-stable for a given
//! (config, seed) regardless of thread count; `wall_time_ms` is the one
//! nondeterministic field and comparisons strip it.

use serde::{Deserialize, Serialize};

pub const SCHEMA_VERSION: u32 = 1;
pub const TOOL_VERSION: &str = env!("CARGO_PKG_VERSION");

#[derive(Clone, Debug, Serialize, Deserialize, PartialEq)]
pub struct ConfigEcho {
    pub command: String,
    pub root_system: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub n: Option<i64>,
    pub nq: i64,
    pub nt: i64,
    pub qden: i64,
    pub weight_bound: i64,
    pub p_bound: i64,
    pub threads: usize,
    pub seed: u64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub dump_order: Option<i64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub m: Option<i64>,
    pub cap: usize,
}

#[derive(Clone, Copy, Debug, Serialize, Deserialize, PartialEq, Eq)]
pub enum Status {
    #[serde(rename = "PASS")]
    Pass,
    #[serde(rename = "FAIL")]
    Fail,
    #[serde(rename = "CAPACITY")]
    Capacity,
}

#[derive(Clone, Debug, Serialize, Deserialize, PartialEq)]
pub struct SliceRow {
    pub degree: i64,
    pub z_weight: i64,
    pub s_weight: i64,
    pub dim: usize,
    pub computed: i64,
    pub expected: i64,
}

#[derive(Clone, Debug, Serialize, Deserialize, PartialEq)]
pub struct Report {
    pub schema: u32,
    pub config: ConfigEcho,
    pub status: Status,
    pub per_slice: Vec<SliceRow>,
    /// Identity checks: number of lattice translates summed.
    pub gamma_count: usize,
    /// Exact torus evaluation points, serialized as "num/den" strings.
    pub points: Vec<Vec<String>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub first_mismatch: Option<String>,
    /// Coefficient tables of both sides up to --dump-order, for audit.
    pub dump: Vec<String>,
    pub wall_time_ms: u64,
    pub tool_version: String,
    pub input_hash: String,
}

impl Report {
    pub fn exit_code(&self) -> i32 {
        match self.status {
            Status::Pass => 0,
            Status::Fail => 1,
            Status::Capacity => 2,
        }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }

    pub fn to_text(&self) -> String {
        use core::fmt::Write;
        let mut s = String::new();
        let _ = writeln!(
            s,
            "{} {} => {:?}",
            self.config.command, self.config.root_system, self.status
        );
        for row in &self.per_slice {
            let _ = writeln!(
                s,
                "  degree {:>2}  z-weight {:>3}  s-weight {:>2}  dim {:>6}  computed {:>3}  expected {:>3}  {}",
                row.degree,
                row.z_weight,
                row.s_weight,
                row.dim,
                row.computed,
                row.expected,
                if row.computed == row.expected { "ok" } else { "MISMATCH" }
            );
        }
        if let Some(m) = &self.first_mismatch {
            let _ = writeln!(s, "  first mismatch: {m}");
        }
        for d in &self.dump {
            let _ = writeln!(s, "  {d}");
        }
        let _ = writeln!(s, "  wall time: {} ms", self.wall_time_ms);
        s
    }
}

/// FNV-1a of the canonical config string: a cheap, stable input fingerprint.
pub fn input_hash(cfg: &ConfigEcho) -> String {
    let canonical = format!(
        "{}|{}|{:?}|{}|{}|{}|{}|{}|{}|{:?}|{:?}|{}",
        cfg.command,
        cfg.root_system,
        cfg.n,
        cfg.nq,
        cfg.nt,
        cfg.qden,
        cfg.weight_bound,
        cfg.p_bound,
        cfg.seed,
        cfg.dump_order,
        cfg.m,
        cfg.cap,
    );
    let mut h: u64 = 0xcbf29ce484222325;
    for b in canonical.as_bytes() {
        h ^= *b as u64;
        h = h.wrapping_mul(0x100000001b3);
    }
    format!("{h:016x}")
}

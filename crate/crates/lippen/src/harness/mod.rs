//! Monte Carlo and exhaustive security experiments.
//!
//! Every experiment is reproducible from its parameters and seed. Trials are
//! cut into fixed-size chunks; chunk `c` draws from ChaCha stream `c + 1` of
//! the seed, stream 0 being reserved for setup (keys, targets). Chunks run in
//! parallel and merge by exact count addition, so the thread count never
//! changes a result.

use std::collections::BTreeMap;
use std::io::Write;
use std::time::Instant;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use lippen_core::avalanche::AvalancheError;
use lippen_core::{ConfigError, DomainError};

mod avalanche;
mod bitflip;
mod brute_force;
mod collision;
mod detection;

pub use avalanche::avalanche;
pub use bitflip::{bitflip_attack, bitflip_sweep, BitflipResult};
pub use brute_force::{brute_force_compare, BruteForceReport, BruteForceSpec};
pub use collision::{key_collision_probe, CollisionReport};
pub use detection::{detection_config, detection_rate, MIN_EXPECTED_ACCEPTANCES};

pub const SCHEMA: u32 = 1;

/// Trials per chunk.
pub const CHUNK: u64 = 1 << 14;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum ExperimentKind {
    DetectionRate,
    BruteForce,
    Bitflip,
    KeyCollision,
    Avalanche,
}

/// Result of one experiment.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ExperimentReport {
    pub schema: u32,
    pub kind: ExperimentKind,
    /// Free-form label of what `estimate` measures.
    pub measure: String,
    pub estimate: f64,
    pub std_error: f64,
    pub trials: u64,
    pub seed: u64,
    pub wall_time_s: f64,
    /// Reference value the estimate is compared against, if any.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub expected: Option<f64>,
    /// Acceptance band half-width around `expected`.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub tolerance: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub passed: Option<bool>,
    pub params: BTreeMap<String, serde_json::Value>,
    pub extra: BTreeMap<String, serde_json::Value>,
    /// `(value, count)` pairs, written separately as CSV.
    #[serde(skip)]
    pub histogram: Option<Vec<(u64, u64)>>,
}

impl ExperimentReport {
    pub(crate) fn new(kind: ExperimentKind, measure: &str, seed: u64) -> Self {
        ExperimentReport {
            schema: SCHEMA,
            kind,
            measure: measure.to_string(),
            estimate: 0.0,
            std_error: 0.0,
            trials: 0,
            seed,
            wall_time_s: 0.0,
            expected: None,
            tolerance: None,
            passed: None,
            params: BTreeMap::new(),
            extra: BTreeMap::new(),
            histogram: None,
        }
    }

    pub(crate) fn param(mut self, k: &str, v: impl Into<serde_json::Value>) -> Self {
        self.params.insert(k.to_string(), v.into());
        self
    }

    pub(crate) fn put(&mut self, k: &str, v: impl Into<serde_json::Value>) {
        self.extra.insert(k.to_string(), v.into());
    }

    /// Compare against `expected` with a symmetric band.
    pub(crate) fn judge(&mut self, expected: f64, tolerance: f64) {
        self.expected = Some(expected);
        self.tolerance = Some(tolerance);
        self.passed = Some((self.estimate - expected).abs() <= tolerance);
    }

    /// Equality ignoring wall time, for reproducibility checks.
    pub fn same_result(&self, other: &Self) -> bool {
        let strip = |r: &Self| Self {
            wall_time_s: 0.0,
            ..r.clone()
        };
        strip(self) == strip(other)
    }

    pub fn write_histogram_csv<W: Write>(&self, out: W) -> csv::Result<()> {
        let mut w = csv::Writer::from_writer(out);
        w.write_record(["value", "count"])?;
        for (v, c) in self.histogram.iter().flatten() {
            w.write_record([v.to_string(), c.to_string()])?;
        }
        w.flush()?;
        Ok(())
    }
}

#[derive(Clone, Debug, PartialEq, thiserror::Error)]
pub enum HarnessError {
    #[error("{trials} trials at acceptance 2^-{m1_bits} expect {expected:.1} acceptances, need at least {minimum}")]
    UnderPowered {
        m1_bits: u32,
        trials: u64,
        expected: f64,
        minimum: f64,
    },
    #[error("{0}")]
    InvalidParameter(String),
    #[error(transparent)]
    Config(#[from] ConfigError),
    #[error(transparent)]
    Domain(#[from] DomainError),
    #[error("{0}")]
    Avalanche(AvalancheError),
}

impl HarnessError {
    pub fn code(&self) -> &'static str {
        match self {
            HarnessError::UnderPowered { .. } => "UNDER_POWERED",
            HarnessError::InvalidParameter(_) => "INVALID_PARAMETER",
            HarnessError::Config(e) => e.code(),
            HarnessError::Domain(e) => e.code(),
            HarnessError::Avalanche(e) => e.code(),
        }
    }
}

/// The setup stream of a seed.
pub fn setup_rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Run `trials` trials in chunks of `chunk`, in parallel, with one generator
/// per chunk. `f(n, rng)` runs `n` trials and returns their tally; tallies
/// come back in chunk order.
pub fn run_chunked<T, F>(trials: u64, chunk: u64, seed: u64, f: F) -> Vec<T>
where
    T: Send,
    F: Fn(u64, &mut ChaCha8Rng) -> T + Sync,
{
    let chunks = trials.div_ceil(chunk);
    (0..chunks)
        .into_par_iter()
        .map(|c| {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            rng.set_stream(c + 1);
            let n = chunk.min(trials - c * chunk);
            f(n, &mut rng)
        })
        .collect()
}

pub(crate) struct Timer(Instant);

impl Timer {
    pub(crate) fn start() -> Self {
        Timer(Instant::now())
    }

    pub(crate) fn secs(&self) -> f64 {
        self.0.elapsed().as_secs_f64()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::RngCore;

    #[test]
    fn chunking_is_deterministic_and_covers_all_trials() {
        let run = || run_chunked(100_000, 4096, 5, |n, rng| (n, rng.next_u64()));
        let a = run();
        assert_eq!(a, run());
        assert_eq!(a.iter().map(|x| x.0).sum::<u64>(), 100_000);
        assert_eq!(a.len(), 25);
        assert_ne!(a[0].1, a[1].1);
    }

    #[test]
    fn histogram_csv_has_header() {
        let mut r = ExperimentReport::new(ExperimentKind::BruteForce, "x", 0);
        r.histogram = Some(vec![(1, 2), (3, 4)]);
        let mut buf = Vec::new();
        r.write_histogram_csv(&mut buf).unwrap();
        assert_eq!(String::from_utf8(buf).unwrap(), "value,count\n1,2\n3,4\n");
    }

    #[test]
    fn json_has_schema_field() {
        let r = ExperimentReport::new(ExperimentKind::Avalanche, "x", 0);
        let v: serde_json::Value = serde_json::to_value(&r).unwrap();
        assert_eq!(v["schema"], 1);
        assert_eq!(v["kind"], "AVALANCHE");
    }
}

//! Single-bit diffusion statistics for a 64-bit datapath.

use core::fmt;

use rand::{Rng, RngCore};

use crate::cipher::{CipherKind, Key128};

/// Smallest sample count accepted by [`avalanche_stats`].
pub const MIN_SAMPLES: u64 = 1000;

/// Which input gets the single-bit flip.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum FlipTarget {
    Plaintext,
    Key,
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct AvalancheStats {
    /// Mean Hamming distance between the two outputs.
    pub mean: f64,
    pub std_dev: f64,
    pub samples: u64,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum AvalancheError {
    TooFewSamples { samples: u64, minimum: u64 },
}

impl AvalancheError {
    pub fn code(&self) -> &'static str {
        match self {
            AvalancheError::TooFewSamples { .. } => "TOO_FEW_SAMPLES",
        }
    }
}

impl fmt::Display for AvalancheError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            AvalancheError::TooFewSamples { samples, minimum } => {
                write!(f, "{samples} samples requested, at least {minimum} required")
            }
        }
    }
}

impl core::error::Error for AvalancheError {}

/// Avalanche of `kind.encrypt` under random key, plaintext and flip position.
pub fn avalanche_stats<R: RngCore>(
    kind: CipherKind,
    samples: u64,
    target: FlipTarget,
    rng: &mut R,
) -> Result<AvalancheStats, AvalancheError> {
    avalanche_with(samples, target, rng, |key, pt| kind.encrypt(key, pt))
}

/// Same as [`avalanche_stats`] for an arbitrary keyed 64-bit datapath.
pub fn avalanche_with<R, F>(
    samples: u64,
    target: FlipTarget,
    rng: &mut R,
    datapath: F,
) -> Result<AvalancheStats, AvalancheError>
where
    R: RngCore,
    F: Fn(Key128, u64) -> u64,
{
    if samples < MIN_SAMPLES {
        return Err(AvalancheError::TooFewSamples {
            samples,
            minimum: MIN_SAMPLES,
        });
    }
    let mut sum = 0u64;
    let mut sum_sq = 0u64;
    for _ in 0..samples {
        let key = Key128::new(rng.next_u64(), rng.next_u64());
        let pt = rng.next_u64();
        let (key2, pt2) = match target {
            FlipTarget::Plaintext => (key, pt ^ (1u64 << rng.gen_range(0..64))),
            FlipTarget::Key => (key.xor(1u128 << rng.gen_range(0..128)), pt),
        };
        let d = (datapath(key, pt) ^ datapath(key2, pt2)).count_ones() as u64;
        sum += d;
        sum_sq += d * d;
    }
    let n = samples as f64;
    let mean = sum as f64 / n;
    let var = (sum_sq as f64 - n * mean * mean) / (n - 1.0);
    Ok(AvalancheStats {
        mean,
        std_dev: libm::sqrt(var.max(0.0)),
        samples,
    })
}

//! Seal/unseal throughput.

use std::hint::black_box;
use std::time::Instant;

use lippen_core::{CipherKind, Key128, Modifier, ModifierConfig, PlainPointer, SealEngine};
use rand::Rng;
use serde::Serialize;

use crate::harness::{setup_rng, HarnessError};

pub const MIN_ITERATIONS: u64 = 10_000;

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct BenchResult {
    pub cipher: &'static str,
    pub iterations: u64,
    pub seal_ns_per_op: f64,
    pub unseal_ns_per_op: f64,
    pub seal_ops_per_sec: f64,
    pub unseal_ops_per_sec: f64,
    /// XOR of every sealed and unsealed word; equal runs give equal sums.
    pub checksum: String,
}

pub fn bench(cipher: CipherKind, iterations: u64, seed: u64) -> Result<BenchResult, HarnessError> {
    if iterations < MIN_ITERATIONS {
        return Err(HarnessError::InvalidParameter(format!(
            "iterations {iterations} below {MIN_ITERATIONS}"
        )));
    }
    let cfg = ModifierConfig::default();
    let engine = SealEngine::new(cipher, cfg)?;
    let mut rng = setup_rng(seed);
    let key = Key128::new(rng.gen(), rng.gen());
    let ctx = engine
        .bind(key, &Modifier::from_u64(rng.gen::<u64>() & 0xffff))
        .expect("16-bit modifier fits");
    let base = rng.gen::<u64>() & cfg.address_mask();
    let ptr = |i: u64| PlainPointer(base.wrapping_add(i << 4) & cfg.address_mask());

    for i in 0..MIN_ITERATIONS / 10 {
        black_box(ctx.seal(ptr(i)).ok());
    }
    let mut sealed = Vec::with_capacity(iterations as usize);
    let t = Instant::now();
    for i in 0..iterations {
        sealed.push(black_box(ctx.seal(ptr(i)).expect("canonical")));
    }
    let seal_s = t.elapsed().as_secs_f64();

    let mut checksum = sealed.iter().fold(0u64, |acc, s| acc ^ s.0);
    let t = Instant::now();
    for s in &sealed {
        checksum ^= black_box(ctx.unseal(*s).expect("roundtrip")).0;
    }
    let unseal_s = t.elapsed().as_secs_f64();

    let n = iterations as f64;
    Ok(BenchResult {
        cipher: cipher.name(),
        iterations,
        seal_ns_per_op: seal_s * 1e9 / n,
        unseal_ns_per_op: unseal_s * 1e9 / n,
        seal_ops_per_sec: n / seal_s,
        unseal_ops_per_sec: n / unseal_s,
        checksum: format!("{checksum:016x}"),
    })
}

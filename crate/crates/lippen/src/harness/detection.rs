use lippen_core::{CipherKind, Key128, Modifier, ModifierConfig, SealEngine, SealedPointer};
use rand::{Rng, RngCore};
use statrs::distribution::{ChiSquared, ContinuousCDF};

use super::{run_chunked, setup_rng, ExperimentKind, ExperimentReport, HarnessError, Timer, CHUNK};

/// Smallest expected number of accepted forgeries for a meaningful estimate.
pub const MIN_EXPECTED_ACCEPTANCES: f64 = 50.0;

const BUCKETS: usize = 16;

/// The layout with exactly `m1_bits` check bits: `A = 64 - m1_bits`, no tag,
/// no alignment.
pub fn detection_config(m1_bits: u32) -> ModifierConfig {
    ModifierConfig::new(m1_bits, 0, 64 - m1_bits, 0, 0)
}

/// Acceptance probability of uniformly random forged words against a fixed
/// key and modifier. The accepted pointers' addresses are bucketed by their
/// top four bits to test that an undetected forgery lands uniformly.
pub fn detection_rate(
    cipher: CipherKind,
    m1_bits: u32,
    trials: u64,
    seed: u64,
) -> Result<ExperimentReport, HarnessError> {
    if !(1..=18).contains(&m1_bits) {
        return Err(HarnessError::InvalidParameter(format!(
            "m1_bits {m1_bits} outside 1..=18"
        )));
    }
    let p0 = (-(m1_bits as f64)).exp2();
    let expected = trials as f64 * p0;
    if expected < MIN_EXPECTED_ACCEPTANCES {
        return Err(HarnessError::UnderPowered {
            m1_bits,
            trials,
            expected,
            minimum: MIN_EXPECTED_ACCEPTANCES,
        });
    }
    let timer = Timer::start();
    let cfg = detection_config(m1_bits);
    let engine = SealEngine::new(cipher, cfg)?;
    let mut setup = setup_rng(seed);
    let key = Key128::new(setup.gen(), setup.gen());
    let m1 = setup.gen::<u64>() & ((1 << m1_bits) - 1);
    let ctx = engine
        .bind(key, &Modifier::from_u64(m1))
        .expect("m1 fits the split");
    let shift = cfg.addr_width - 4;

    let tallies = run_chunked(trials, CHUNK, seed, |n, rng| {
        let mut buckets = [0u64; BUCKETS];
        for _ in 0..n {
            if let Ok(p) = ctx.unseal(SealedPointer(rng.next_u64())) {
                buckets[(p.0 >> shift) as usize & (BUCKETS - 1)] += 1;
            }
        }
        buckets
    });
    let mut buckets = [0u64; BUCKETS];
    for t in &tallies {
        for (b, c) in buckets.iter_mut().zip(t) {
            *b += c;
        }
    }
    let accepted: u64 = buckets.iter().sum();
    let n = trials as f64;
    let p_hat = accepted as f64 / n;

    let mut r = ExperimentReport::new(ExperimentKind::DetectionRate, "acceptance_probability", seed)
        .param("cipher", cipher.name())
        .param("m1_bits", m1_bits)
        .param("addr_width", cfg.addr_width);
    r.trials = trials;
    r.estimate = p_hat;
    r.std_error = (p_hat * (1.0 - p_hat) / n).sqrt();
    r.judge(p0, 3.0 * (p0 * (1.0 - p0) / n).sqrt());
    r.put("accepted", accepted);
    r.put("detection_probability", 1.0 - p_hat);
    if accepted >= 5 * BUCKETS as u64 {
        let e = accepted as f64 / BUCKETS as f64;
        let chi2: f64 = buckets.iter().map(|&c| (c as f64 - e).powi(2) / e).sum();
        let dist = ChiSquared::new((BUCKETS - 1) as f64).expect("positive dof");
        r.put("address_chi_square", chi2);
        r.put("address_uniformity_p_value", 1.0 - dist.cdf(chi2));
    }
    r.histogram = Some(buckets.iter().enumerate().map(|(i, &c)| (i as u64, c)).collect());
    r.wall_time_s = timer.secs();
    Ok(r)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn one_check_bit_accepts_half() {
        let r = detection_rate(CipherKind::PrinceV2, 1, 10_000, 1).unwrap();
        assert!((r.estimate - 0.5).abs() < 0.02, "{}", r.estimate);
        assert_eq!(r.passed, Some(true));
    }

    #[test]
    fn under_powered_runs_are_refused() {
        let e = detection_rate(CipherKind::PrinceV2, 16, 1 << 20, 1).unwrap_err();
        assert_eq!(e.code(), "UNDER_POWERED");
        assert_eq!(
            detection_rate(CipherKind::PrinceV2, 19, 1 << 30, 1).unwrap_err().code(),
            "INVALID_PARAMETER"
        );
    }

    #[test]
    fn reproducible() {
        let a = detection_rate(CipherKind::Prince, 4, 5000, 3).unwrap();
        let b = detection_rate(CipherKind::Prince, 4, 5000, 3).unwrap();
        assert!(a.same_result(&b));
    }

    #[test]
    fn layout_has_exactly_m1_check_bits() {
        for m1 in 1..=18 {
            let c = detection_config(m1);
            c.validate().unwrap();
            assert_eq!(c.check_mask().count_ones(), m1);
        }
    }
}

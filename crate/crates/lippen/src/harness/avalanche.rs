use lippen_core::avalanche::{avalanche_stats, FlipTarget};
use lippen_core::CipherKind;

use super::{setup_rng, ExperimentKind, ExperimentReport, HarnessError, Timer};

/// Mean output Hamming distance for single-bit input flips, expected in
/// `[31, 33]` for a cipher that diffuses well.
pub fn avalanche(
    cipher: CipherKind,
    target: FlipTarget,
    samples: u64,
    seed: u64,
) -> Result<ExperimentReport, HarnessError> {
    let timer = Timer::start();
    let stats = avalanche_stats(cipher, samples, target, &mut setup_rng(seed))
        .map_err(HarnessError::Avalanche)?;
    let mut r = ExperimentReport::new(ExperimentKind::Avalanche, "mean_flipped_bits", seed)
        .param("cipher", cipher.name())
        .param(
            "flip",
            match target {
                FlipTarget::Plaintext => "plaintext",
                FlipTarget::Key => "key",
            },
        );
    r.trials = stats.samples;
    r.estimate = stats.mean;
    r.std_error = stats.std_dev / (stats.samples as f64).sqrt();
    r.put("std_dev", stats.std_dev);
    r.judge(32.0, 1.0);
    r.wall_time_s = timer.secs();
    Ok(r)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn in_band_for_both_ciphers() {
        for c in CipherKind::ALL {
            for t in [FlipTarget::Plaintext, FlipTarget::Key] {
                assert_eq!(avalanche(c, t, 10_000, 1).unwrap().passed, Some(true));
            }
        }
    }

    #[test]
    fn too_few_samples() {
        let e = avalanche(CipherKind::Prince, FlipTarget::Key, 10, 1).unwrap_err();
        assert_eq!(e.code(), "TOO_FEW_SAMPLES");
    }
}

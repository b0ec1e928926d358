use std::collections::BTreeMap;

use lippen_core::vm::{Protection, Scheme, DEFAULT_GUESS_TARGET};
use lippen_core::{CipherKind, Key128, ModifierConfig, PacConfig, PacFailureMode};
use rand::Rng;
use serde::Serialize;

use super::{run_chunked, ExperimentKind, ExperimentReport, HarnessError, Timer, SCHEMA};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct BruteForceSpec {
    pub cipher: CipherKind,
    pub pac_bits: u32,
    /// Pointer layout shared by both schemes.
    pub config: ModifierConfig,
    pub pac_trials: u64,
    pub lippen_trials: u64,
    /// Attacker budget per trial, the same for both schemes.
    pub max_guesses: u64,
    pub seed: u64,
}

impl Default for BruteForceSpec {
    fn default() -> Self {
        BruteForceSpec {
            cipher: CipherKind::default(),
            pac_bits: 16,
            config: ModifierConfig::default(),
            pac_trials: 100,
            lippen_trials: 100,
            max_guesses: 1_000_000,
            seed: 1,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct BruteForceReport {
    pub schema: u32,
    pub pac: ExperimentReport,
    pub lippen: ExperimentReport,
}

impl BruteForceReport {
    pub fn passed(&self) -> bool {
        self.pac.passed != Some(false) && self.lippen.passed != Some(false)
    }
}

#[derive(Default)]
struct Tally {
    successes: u64,
    guesses: Vec<u64>,
    total_guesses: u64,
}

fn attack(protection: &Protection, trials: u64, chunk: u64, max_guesses: u64, seed: u64) -> Tally {
    let tallies = run_chunked(trials, chunk, seed, |n, rng| {
        let mut t = Tally::default();
        for _ in 0..n {
            let key = Key128::new(rng.gen(), rng.gen());
            let sp = rng.gen::<u64>() & 0x0000_7fff_ffff_fff0;
            let g = protection.forge(key, sp, DEFAULT_GUESS_TARGET, max_guesses, rng);
            t.total_guesses += g.guesses;
            if g.success {
                t.successes += 1;
                t.guesses.push(g.guesses);
            }
        }
        t
    });
    tallies.into_iter().fold(Tally::default(), |mut acc, t| {
        acc.successes += t.successes;
        acc.total_guesses += t.total_guesses;
        acc.guesses.extend(t.guesses);
        acc
    })
}

/// Brute-force the same budget against PAC and LIPPEN.
///
/// PAC: the attacker enumerates codes for a known address; the number of
/// attempts to success is uniform on `1..=2^pac_bits`, mean
/// `(2^pac_bits + 1) / 2`. LIPPEN: the attacker must hit the exact 64-bit
/// ciphertext, so successes should be zero for any realistic budget.
pub fn brute_force_compare(spec: &BruteForceSpec) -> Result<BruteForceReport, HarnessError> {
    if spec.pac_bits > 16 {
        return Err(HarnessError::InvalidParameter(format!(
            "pac_bits {} above 16",
            spec.pac_bits
        )));
    }
    if spec.pac_trials == 0 || spec.lippen_trials == 0 {
        return Err(HarnessError::InvalidParameter(
            "trial count must be at least 1".into(),
        ));
    }
    let pac_cfg = PacConfig {
        pac_bits: spec.pac_bits,
        failure_mode: PacFailureMode::Exception,
    };
    let pac = Protection::new(Scheme::Pac, spec.cipher, spec.config, pac_cfg)?;
    let lippen = Protection::new(Scheme::Lippen, spec.cipher, spec.config, pac_cfg)?;

    let timer = Timer::start();
    let chunk = ((1u64 << 16) >> spec.pac_bits).max(1);
    let t = attack(&pac, spec.pac_trials, chunk, spec.max_guesses, spec.seed);
    let mut pr = ExperimentReport::new(ExperimentKind::BruteForce, "pac_mean_guesses", spec.seed)
        .param("scheme", "pac")
        .param("cipher", spec.cipher.name())
        .param("pac_bits", spec.pac_bits)
        .param("max_guesses", spec.max_guesses);
    pr.trials = spec.pac_trials;
    let n = t.guesses.len() as f64;
    if !t.guesses.is_empty() {
        let mean = t.guesses.iter().sum::<u64>() as f64 / n;
        let var = t
            .guesses
            .iter()
            .map(|&g| (g as f64 - mean).powi(2))
            .sum::<f64>()
            / (n - 1.0).max(1.0);
        pr.estimate = mean;
        pr.std_error = (var / n).sqrt();
    }
    if spec.max_guesses >= 1 << spec.pac_bits {
        let expected = ((1u64 << spec.pac_bits) as f64 + 1.0) / 2.0;
        pr.judge(expected, 0.05 * expected);
        if t.successes != spec.pac_trials {
            pr.passed = Some(false);
        }
    }
    pr.put("successes", t.successes);
    pr.put("total_guesses", t.total_guesses);
    pr.put("max_observed", t.guesses.iter().copied().max().unwrap_or(0));
    let mut hist = BTreeMap::new();
    for g in &t.guesses {
        *hist.entry(*g).or_insert(0u64) += 1;
    }
    pr.histogram = Some(hist.into_iter().collect());
    pr.wall_time_s = timer.secs();

    let timer = Timer::start();
    let t = attack(&lippen, spec.lippen_trials, 1, spec.max_guesses, spec.seed ^ 0x4c49_5050);
    let mut lr = ExperimentReport::new(ExperimentKind::BruteForce, "lippen_successes", spec.seed)
        .param("scheme", "lippen")
        .param("cipher", spec.cipher.name())
        .param("m1_bits", spec.config.m1_bits)
        .param("max_guesses", spec.max_guesses);
    lr.trials = spec.lippen_trials;
    lr.estimate = t.successes as f64;
    lr.judge(0.0, 0.0);
    lr.put("total_guesses", t.total_guesses);
    lr.put(
        "success_probability_bound",
        t.total_guesses as f64 * (-64f64).exp2(),
    );
    lr.wall_time_s = timer.secs();

    Ok(BruteForceReport {
        schema: SCHEMA,
        pac: pr,
        lippen: lr,
    })
}

//! Acceptance suite. Prints one PASS/FAIL line per criterion and exits
//! non-zero if any criterion fails.

use std::path::PathBuf;
use std::process::ExitCode;
use std::time::Instant;

use lippen::harness::{self, BruteForceSpec};
use lippen::{kat, scenario_file, DEFAULT_SEED};
use lippen_core::avalanche::FlipTarget;
use lippen_core::vm::{run_scenario, InstrumentationPolicy, Protection, Scheme, Verdict};
use lippen_core::{
    CipherKind, DomainKeyTable, Key128, Modifier, ModifierConfig, PlainPointer, SealEngine,
};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

const SEED: u64 = DEFAULT_SEED;

type Criterion = (&'static str, fn() -> Check);

struct Check {
    ok: bool,
    detail: String,
}

impl Check {
    fn new(ok: bool, detail: impl Into<String>) -> Self {
        Check {
            ok,
            detail: detail.into(),
        }
    }
}

fn cipher_conformance() -> Check {
    let vectors = kat::parse(kat::BUILTIN).expect("built-in vectors parse");
    let results = kat::run(&vectors);
    let per_kind: Vec<usize> = CipherKind::ALL
        .iter()
        .map(|k| results.iter().filter(|r| r.vector.kind == *k && r.passed()).count())
        .collect();
    let passed = results.iter().filter(|r| r.passed()).count();
    Check::new(
        passed == results.len() && per_kind.iter().all(|&n| n >= 4),
        format!("{passed}/{} vectors, per cipher {per_kind:?}", results.len()),
    )
}

fn random_config(rng: &mut ChaCha8Rng) -> ModifierConfig {
    let a = rng.gen_range(32..=64);
    let tag = rng.gen_range(0..=(64 - a).min(8));
    let align = rng.gen_range(0..=4u32.min(a - 1));
    let m1 = rng.gen_range(0..=64 - a - tag + align);
    let m2 = rng.gen_range(0..=128);
    ModifierConfig::new(m1, m2, a, tag, align)
}

fn roundtrip() -> Check {
    let mut rng = ChaCha8Rng::seed_from_u64(SEED);
    let mut failures = 0u64;
    let n = 100_000;
    for cipher in CipherKind::ALL {
        for _ in 0..n {
            let cfg = random_config(&mut rng);
            let e = SealEngine::new(cipher, cfg).expect("valid config");
            let key = Key128::new(rng.gen(), rng.gen());
            let p = PlainPointer(rng.gen::<u64>() & (cfg.address_mask() | cfg.tag_mask()) & !cfg.align_mask());
            let m = Modifier::compose(rng.gen(), rng.gen(), &cfg);
            let ok = e
                .seal(key, p, &m)
                .and_then(|s| e.unseal(key, s, &m))
                .is_ok_and(|q| q == p);
            failures += u64::from(!ok);
        }
    }
    Check::new(failures == 0, format!("{} samples per cipher, {failures} failures", n))
}

fn detection_probability() -> Check {
    let mut ok = true;
    let mut parts = Vec::new();
    for (m1, trials) in [(4u32, 100_000u64), (8, 1_000_000), (16, 100 << 16)] {
        let r = harness::detection_rate(CipherKind::PrinceV2, m1, trials, SEED).expect("powered");
        ok &= r.passed == Some(true);
        parts.push(format!(
            "m1={m1}: {:.3e} vs {:.3e} +/- {:.1e}",
            r.estimate,
            r.expected.unwrap(),
            r.tolerance.unwrap()
        ));
    }
    Check::new(ok, parts.join("; "))
}

fn budget_formula() -> Check {
    let v = |m1, a, align| ModifierConfig::new(m1, 0, a, 0, align).validate().is_ok();
    let results = [v(18, 48, 2), !v(19, 48, 2), v(9, 57, 2), !v(10, 57, 2)];
    Check::new(
        results.iter().all(|&b| b),
        format!("A=48: 18 ok {}, 19 rejected {}; A=57: 9 ok {}, 10 rejected {}", results[0], results[1], results[2], results[3]),
    )
}

fn entropy_formula() -> Check {
    let e48 = ModifierConfig::new(12, 4, 48, 4, 0).effective_domain_entropy();
    let e57 = ModifierConfig::new(3, 13, 57, 4, 0).effective_domain_entropy();
    Check::new(e48 == Ok(124) && e57 == Ok(115), format!("A=48: {e48:?}, A=57: {e57:?}"))
}

fn key_assignment() -> Check {
    let mut t = DomainKeyTable::with_key_width(8).unwrap();
    t.set_m_size(ModifierConfig::new(0, 6, 48, 0, 0)).unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(SEED);
    let created = (0..4).filter(|_| t.create_domain(&mut rng).is_ok()).count();
    let fifth = t.create_domain(&mut rng).map_err(|e| e.code());
    let probe = harness::key_collision_probe(&t, 0, SEED).unwrap();

    let mut bad = DomainKeyTable::with_key_width(8).unwrap();
    bad.set_m_size(ModifierConfig::new(0, 6, 48, 0, 0)).unwrap();
    bad.force_insert(Key128::from_u128(0b10_000001));
    bad.force_insert(Key128::from_u128(0b10_111110));
    let caught = harness::key_collision_probe(&bad, 0, SEED).unwrap();
    Check::new(
        created == 4
            && fifth == Err("CAPACITY_EXHAUSTED")
            && probe.colliding.is_empty()
            && caught.colliding.len() == 1,
        format!(
            "created {created}, 5th {fifth:?}, exhaustive collisions {}, forced table collisions {}",
            probe.colliding.len(),
            caught.colliding.len()
        ),
    )
}

fn bitflip() -> Check {
    let valid = ModifierConfig::new(18, 0, 48, 0, 2);
    let sweep = harness::bitflip_sweep(CipherKind::PrinceV2, valid, SEED);
    let exact = sweep.iter().all(|r| r.accepted == r.within_placement);
    let harmless = sweep.iter().all(|r| !r.address_changed);
    let accepted = sweep.iter().filter(|r| r.accepted).count();

    let overlap = ModifierConfig::new(20, 0, 48, 0, 0);
    let neg_sweep = harness::bitflip_sweep(CipherKind::PrinceV2, overlap, SEED);
    let neg_exact = neg_sweep.iter().all(|r| r.accepted == r.within_placement);
    let control = harness::bitflip_attack(CipherKind::PrinceV2, overlap, 1 << 2, SEED);
    let rejected = overlap.validate().map_err(|e| e.code());
    Check::new(
        exact && harmless && neg_exact && control.address_changed && rejected.is_err(),
        format!(
            "{accepted}/64 masks accepted = placement bits, none moves the address; overlap control flips bit 2 undetected: {}, validate: {rejected:?}",
            control.address_changed
        ),
    )
}

fn brute_force() -> Check {
    let r8 = harness::brute_force_compare(&BruteForceSpec {
        pac_bits: 8,
        pac_trials: 10_000,
        lippen_trials: 100,
        max_guesses: 1_000_000,
        seed: SEED,
        ..BruteForceSpec::default()
    })
    .unwrap();
    let r16 = harness::brute_force_compare(&BruteForceSpec {
        pac_bits: 16,
        pac_trials: 100,
        lippen_trials: 1,
        max_guesses: 1_000_000,
        seed: SEED,
        ..BruteForceSpec::default()
    })
    .unwrap();
    let lippen_guesses = r8.lippen.extra["total_guesses"].as_u64().unwrap();
    Check::new(
        r8.pac.passed == Some(true)
            && r16.pac.passed == Some(true)
            && r8.lippen.estimate == 0.0
            && lippen_guesses == 100_000_000,
        format!(
            "PAC-8 mean {:.2} (128.5), PAC-16 mean {:.1} (32768.5), LIPPEN {} successes in {lippen_guesses} guesses",
            r8.pac.estimate, r16.pac.estimate, r8.lippen.estimate
        ),
    )
}

fn scenario(name: &str) -> lippen_core::vm::Scenario {
    let path = PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../scenarios").join(name);
    let text = std::fs::read_to_string(&path).unwrap_or_else(|e| panic!("{}: {e}", path.display()));
    scenario_file::parse(&text).expect("scenario parses")
}

fn scenarios() -> Check {
    let verdict = |file: &str, scheme: Scheme, policy: InstrumentationPolicy| {
        let s = scenario(file);
        let p = Protection::with_defaults(scheme);
        let a = run_scenario(&s, &p, policy, SEED).expect("well-formed");
        let b = run_scenario(&s, &p, policy, SEED).expect("well-formed");
        (a.outcome.verdict, a == b, a.plaintext_memory)
    };
    let mut ok = true;
    let mut deterministic = true;
    let mut expect = |file, scheme, policy, want: Verdict| {
        let (v, det, _) = verdict(file, scheme, policy);
        ok &= v == want;
        deterministic &= det;
    };
    let parts = InstrumentationPolicy::PARTS;
    let zero = InstrumentationPolicy::ZERO;
    expect("stack_smash.scn", Scheme::None, parts, Verdict::Hijacked);
    expect("stack_smash.scn", Scheme::Pac, parts, Verdict::Detected);
    expect("stack_smash.scn", Scheme::Lippen, parts, Verdict::Detected);
    for scheme in [Scheme::Pac, Scheme::Lippen] {
        expect("cross_context_replay.scn", scheme, zero, Verdict::Hijacked);
        expect("cross_context_replay.scn", scheme, parts, Verdict::Detected);
    }
    let mut transparent = true;
    for file in ["benign_calls.scn", "benign_data.scn"] {
        for policy in [parts, InstrumentationPolicy::PACSTACK, InstrumentationPolicy::PACTIGHT, zero] {
            let runs: Vec<_> = Scheme::ALL.iter().map(|&s| verdict(file, s, policy)).collect();
            transparent &= runs.iter().all(|r| r.0 == Verdict::Benign && r.1 && r.2 == runs[0].2);
        }
    }
    Check::new(
        ok && deterministic && transparent,
        format!("expected verdicts {ok}, deterministic {deterministic}, benign and transparent {transparent}"),
    )
}

fn avalanche() -> Check {
    let mut ok = true;
    let mut parts = Vec::new();
    for c in CipherKind::ALL {
        for t in [FlipTarget::Plaintext, FlipTarget::Key] {
            let r = harness::avalanche(c, t, 10_000, SEED).unwrap();
            ok &= (31.0..=33.0).contains(&r.estimate);
            parts.push(format!("{}/{t:?} {:.2}", c.name(), r.estimate));
        }
    }
    Check::new(ok, parts.join(", "))
}

fn main() -> ExitCode {
    let criteria: [Criterion; 10] = [
        ("cipher conformance", cipher_conformance),
        ("seal/unseal roundtrip", roundtrip),
        ("detection probability", detection_probability),
        ("m1 budget formula", budget_formula),
        ("domain entropy formula", entropy_formula),
        ("key assignment policy", key_assignment),
        ("bit-flip characterization", bitflip),
        ("brute-force asymmetry", brute_force),
        ("scenario suite", scenarios),
        ("avalanche", avalanche),
    ];
    let mut failed = 0;
    for (i, (name, f)) in criteria.iter().enumerate() {
        let t = Instant::now();
        let c = f();
        println!(
            "criterion {:>2} {:<26} {} ({:.2}s) {}",
            i + 1,
            name,
            if c.ok { "PASS" } else { "FAIL" },
            t.elapsed().as_secs_f64(),
            c.detail
        );
        failed += usize::from(!c.ok);
    }
    println!("acceptance: {}/{} criteria pass", criteria.len() - failed, criteria.len());
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}

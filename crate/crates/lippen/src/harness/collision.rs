use std::collections::HashMap;

use lippen_core::{DomainId, DomainKeyTable, Key128};
use rand::seq::SliceRandom;
use rand::Rng;

use super::{setup_rng, ExperimentKind, ExperimentReport, HarnessError, Timer};

/// Outcome of a collision probe, with the offending domain pairs.
#[derive(Clone, Debug, PartialEq)]
pub struct CollisionReport {
    pub report: ExperimentReport,
    pub colliding: Vec<(DomainId, DomainId)>,
}

/// Look for two live domains whose keys become equal under some pair of
/// `m2` values.
///
/// At a reduced key width every `(m2_a, m2_b)` pair of every domain pair is
/// covered: each domain's full set of derived keys is enumerated and any
/// derived key reached from two domains is a collision. At full width,
/// `probes` random domain pairs are tested; two keys can be driven together
/// exactly when they differ only in the `m2` bits, so each probe decides
/// collision over all `2^(2 m2)` modifier pairs at once.
pub fn key_collision_probe(
    table: &DomainKeyTable,
    probes: u64,
    seed: u64,
) -> Result<CollisionReport, HarnessError> {
    let timer = Timer::start();
    let m2 = table.m2_bits();
    let live: Vec<(DomainId, Key128)> = table.iter().collect();
    let exhaustive = table.key_width() <= 16;
    let mut colliding = Vec::new();
    let mut report = ExperimentReport::new(ExperimentKind::KeyCollision, "colliding_domain_pairs", seed)
        .param("key_width", table.key_width())
        .param("m2_bits", m2)
        .param("live_domains", live.len() as u64)
        .param("mode", if exhaustive { "exhaustive" } else { "sampled" });

    if exhaustive {
        let mut owner: HashMap<u128, Vec<DomainId>> = HashMap::new();
        for (id, key) in &live {
            for d in 0..1u128 << m2 {
                owner
                    .entry(table.derived_key(*key, d).to_u128())
                    .or_default()
                    .push(*id);
            }
        }
        for ids in owner.values() {
            for (i, a) in ids.iter().enumerate() {
                for b in &ids[i + 1..] {
                    if a != b {
                        colliding.push((*a.min(b), *a.max(b)));
                    }
                }
            }
        }
        colliding.sort();
        colliding.dedup();
        let pairs = (live.len() * live.len().saturating_sub(1) / 2) as u64;
        report.trials = pairs;
        report.put(
            "modifier_pairs_examined",
            pairs as f64 * (2.0 * m2 as f64).exp2(),
        );
    } else if live.len() >= 2 {
        let mut rng = setup_rng(seed);
        for _ in 0..probes {
            let picked: Vec<_> = live.choose_multiple(&mut rng, 2).collect();
            let (a, b) = (picked[0], picked[1]);
            let diff = a.1.to_u128() ^ b.1.to_u128();
            let reachable = diff.checked_shr(m2).unwrap_or(0) == 0;
            // one concrete witness pair when reachable
            let d_a: u128 = rng.gen::<u128>().checked_shr(128 - m2).unwrap_or(0);
            let witness = table.derived_key(a.1, d_a) == table.derived_key(b.1, d_a ^ diff);
            if reachable && witness {
                colliding.push((a.0.min(b.0), a.0.max(b.0)));
            }
        }
        colliding.sort();
        colliding.dedup();
        report.trials = probes;
    }
    report.estimate = colliding.len() as f64;
    report.judge(0.0, 0.0);
    report.wall_time_s = timer.secs();
    Ok(CollisionReport { report, colliding })
}

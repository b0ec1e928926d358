use lippen_core::{CipherKind, Key128, Modifier, ModifierConfig, PlainPointer, SealEngine};
use rand::Rng;
use serde::Serialize;

use super::setup_rng;

/// The modifier-overwrite attack on one victim pointer.
///
/// Given a valid `(m_v, p_v, c_v)` the attacker presents
/// `(m1_v ^ X, p_v ^ X, c_v)`: they keep the ciphertext and rewrite the
/// modifier so that, after decryption, the `X` bits of the pointer flip.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct BitflipResult {
    pub mask: u64,
    /// Every bit of `mask` is a bit `m1` is placed on.
    pub within_placement: bool,
    /// The attacker's tuple is consistent: decrypting `c_v` and removing
    /// `m1_a` yields exactly `p_v ^ X`.
    pub accepted: bool,
    /// Unseal with the attacker's modifier passes the zero check.
    pub check_passed: bool,
    pub unsealed: Option<u64>,
    /// The pointer came out of a passing check with a different address:
    /// the attack worked.
    pub address_changed: bool,
    pub config_valid: bool,
}

/// Run the attack with flip mask `x` against a random victim drawn from
/// `seed`. The config is used as given, even if it fails validation, so the
/// misconfigured case can be demonstrated.
pub fn bitflip_attack(cipher: CipherKind, cfg: ModifierConfig, x: u64, seed: u64) -> BitflipResult {
    let engine = SealEngine::new_unchecked(cipher, cfg);
    let mut rng = setup_rng(seed);
    let key = Key128::new(rng.gen(), rng.gen());
    let p_v = rng.gen::<u64>() & cfg.address_mask() & !cfg.check_mask();
    let m1_v = rng.gen::<u64>() & low(cfg.m1_bits);
    let m2 = rng.gen::<u128>() & low128(cfg.m2_bits);
    let c_v = engine
        .bind(key, &Modifier::compose(m1_v, m2, &cfg))
        .and_then(|ctx| ctx.seal(PlainPointer(p_v)))
        .expect("victim pointer is canonical");

    let m1_a = m1_v ^ cfg.extract_m1(x);
    let p_a = p_v ^ x;
    let ctx_a = engine
        .bind(key, &Modifier::compose(m1_a, m2, &cfg))
        .expect("attacker modifier fits the split");
    let accepted = ctx_a.open(c_v) == p_a;
    let unsealed = ctx_a.unseal(c_v).ok().map(|p| p.0);
    let generating = cfg.address_mask() & !cfg.align_mask();
    BitflipResult {
        mask: x,
        within_placement: x & !cfg.m1_placement_mask() == 0,
        accepted,
        check_passed: unsealed.is_some(),
        unsealed,
        address_changed: unsealed.is_some_and(|u| (u ^ p_v) & generating != 0),
        config_valid: cfg.validate().is_ok(),
    }
}

/// The attack for each of the 64 single-bit masks.
pub fn bitflip_sweep(cipher: CipherKind, cfg: ModifierConfig, seed: u64) -> Vec<BitflipResult> {
    (0..64)
        .map(|b| bitflip_attack(cipher, cfg, 1 << b, seed ^ b))
        .collect()
}

fn low(bits: u32) -> u64 {
    1u64.checked_shl(bits).map_or(u64::MAX, |v| v - 1)
}

fn low128(bits: u32) -> u128 {
    1u128.checked_shl(bits).map_or(u128::MAX, |v| v - 1)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn identity_mask_is_trivially_accepted() {
        let r = bitflip_attack(CipherKind::PrinceV2, ModifierConfig::new(18, 8, 48, 0, 2), 0, 1);
        assert!(r.accepted && r.check_passed && !r.address_changed);
    }

    #[test]
    fn acceptance_is_exactly_mask_containment() {
        let cfg = ModifierConfig::new(18, 0, 48, 0, 2);
        for r in bitflip_sweep(CipherKind::PrinceV2, cfg, 7) {
            assert_eq!(r.accepted, r.within_placement, "{:#x}", r.mask);
            assert!(!r.address_changed);
        }
    }

    #[test]
    fn overlapping_config_lets_an_address_bit_flip() {
        let cfg = ModifierConfig::new(20, 0, 48, 0, 0);
        assert!(cfg.validate().is_err());
        let r = bitflip_attack(CipherKind::PrinceV2, cfg, 1 << 2, 3);
        assert!(r.accepted && r.check_passed && r.address_changed);
        assert!(!r.config_valid);
    }
}

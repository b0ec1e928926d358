//! The three protection schemes a simulated process can run under, and the
//! brute-force forging loop against each.

use alloc::collections::BTreeMap;
use core::fmt;
use core::str::FromStr;

use rand::{Rng, RngCore};

use crate::cipher::{CipherKind, Key128};
use crate::seal::{
    ConfigError, Modifier, ModifierConfig, PacConfig, PacEngine, PlainPointer, SealEngine,
    SealError, SealedPointer,
};

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash)]
pub enum Scheme {
    None,
    Pac,
    #[default]
    Lippen,
}

impl Scheme {
    pub const ALL: [Scheme; 3] = [Scheme::None, Scheme::Pac, Scheme::Lippen];

    pub fn name(self) -> &'static str {
        match self {
            Scheme::None => "none",
            Scheme::Pac => "pac",
            Scheme::Lippen => "lippen",
        }
    }
}

impl fmt::Display for Scheme {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct UnknownScheme;

impl fmt::Display for UnknownScheme {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("unknown scheme (expected none, pac or lippen)")
    }
}

impl core::error::Error for UnknownScheme {}

impl FromStr for Scheme {
    type Err = UnknownScheme;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Scheme::ALL
            .into_iter()
            .find(|k| k.name().eq_ignore_ascii_case(s.trim()))
            .ok_or(UnknownScheme)
    }
}

/// A scheme with its engines. PAC reuses the address and tag widths of the
/// modifier config so both schemes protect the same pointer layout.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Protection {
    scheme: Scheme,
    seal: SealEngine,
    pac: PacEngine,
}

/// Result of a forging run.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct GuessOutcome {
    pub success: bool,
    /// Attempts made, including the successful one.
    pub guesses: u64,
    /// The accepted word, if any.
    pub forged: Option<u64>,
}

impl Protection {
    pub fn new(
        scheme: Scheme,
        cipher: CipherKind,
        config: ModifierConfig,
        pac: PacConfig,
    ) -> Result<Self, ConfigError> {
        Ok(Protection {
            scheme,
            seal: SealEngine::new(cipher, config)?,
            pac: PacEngine::new(cipher, config.addr_width, config.tag_bits, pac)?,
        })
    }

    /// Defaults: PRINCEv2, 16-bit `m1` at a 48-bit address, 16-bit PAC.
    pub fn with_defaults(scheme: Scheme) -> Self {
        Self::new(
            scheme,
            CipherKind::default(),
            ModifierConfig::default(),
            PacConfig::default(),
        )
        .expect("default configuration is valid")
    }

    pub fn scheme(&self) -> Scheme {
        self.scheme
    }

    pub fn seal_engine(&self) -> &SealEngine {
        &self.seal
    }

    pub fn pac_engine(&self) -> &PacEngine {
        &self.pac
    }

    /// Turn a 64-bit context value into the modifier this scheme consumes.
    pub fn modifier(&self, context: u64) -> Modifier {
        match self.scheme {
            Scheme::Lippen => Modifier::compress(context, self.seal.config().modifier_bits()),
            _ => Modifier::from_u64(context),
        }
    }

    pub fn protect(&self, key: Key128, ptr: u64, context: u64) -> Result<u64, SealError> {
        let m = self.modifier(context);
        match self.scheme {
            Scheme::None => Ok(ptr),
            Scheme::Pac => self.pac.sign(key, PlainPointer(ptr), &m).map(|s| s.0),
            Scheme::Lippen => self.seal.seal(key, PlainPointer(ptr), &m).map(|s| s.0),
        }
    }

    pub fn check(&self, key: Key128, word: u64, context: u64) -> Result<u64, SealError> {
        let m = self.modifier(context);
        match self.scheme {
            Scheme::None => Ok(word),
            Scheme::Pac => self.pac.auth(key, SealedPointer(word), &m).map(|p| p.0),
            Scheme::Lippen => self.seal.unseal(key, SealedPointer(word), &m).map(|p| p.0),
        }
    }

    /// Forge a word that checks out as `target` under (`key`, `context`), with
    /// every failed attempt observable to the attacker.
    ///
    /// PAC: the address is in the clear, so only the code is guessed, by
    /// enumerating the code space in a random order. LIPPEN: nothing of the
    /// sealed word is known, so uniformly random 64-bit words are tried. No
    /// protection: the raw target works at once.
    pub fn forge<R: RngCore>(
        &self,
        key: Key128,
        context: u64,
        target: u64,
        max_guesses: u64,
        rng: &mut R,
    ) -> GuessOutcome {
        match self.scheme {
            Scheme::None => GuessOutcome {
                success: max_guesses > 0,
                guesses: max_guesses.min(1),
                forged: (max_guesses > 0).then_some(target),
            },
            Scheme::Pac => {
                let m = self.modifier(context);
                let bits = self.pac.config().pac_bits;
                let mut order = LazyShuffle::new(1u64 << bits);
                let mut guesses = 0;
                while guesses < max_guesses {
                    let Some(code) = order.next(rng) else { break };
                    guesses += 1;
                    let word = self.pac.with_code(PlainPointer(target), code);
                    if self.pac.auth(key, word, &m) == Ok(PlainPointer(target)) {
                        return GuessOutcome {
                            success: true,
                            guesses,
                            forged: Some(word.0),
                        };
                    }
                }
                GuessOutcome {
                    success: false,
                    guesses,
                    forged: None,
                }
            }
            Scheme::Lippen => {
                let ctx = match self.seal.bind(key, &self.modifier(context)) {
                    Ok(ctx) => ctx,
                    Err(_) => {
                        return GuessOutcome {
                            success: false,
                            guesses: 0,
                            forged: None,
                        }
                    }
                };
                for guesses in 1..=max_guesses {
                    let word = rng.next_u64();
                    if ctx.unseal(SealedPointer(word)) == Ok(PlainPointer(target)) {
                        return GuessOutcome {
                            success: true,
                            guesses,
                            forged: Some(word),
                        };
                    }
                }
                GuessOutcome {
                    success: false,
                    guesses: max_guesses,
                    forged: None,
                }
            }
        }
    }
}

/// Draws `0..n` without replacement in uniformly random order, storing only
/// the swapped positions of a Fisher-Yates shuffle.
#[derive(Clone, Debug)]
pub struct LazyShuffle {
    n: u64,
    drawn: u64,
    swapped: BTreeMap<u64, u64>,
}

impl LazyShuffle {
    pub fn new(n: u64) -> Self {
        LazyShuffle {
            n,
            drawn: 0,
            swapped: BTreeMap::new(),
        }
    }

    pub fn remaining(&self) -> u64 {
        self.n - self.drawn
    }

    pub fn next<R: RngCore>(&mut self, rng: &mut R) -> Option<u64> {
        if self.drawn == self.n {
            return None;
        }
        let i = self.drawn;
        let j = rng.gen_range(i..self.n);
        let at = |s: &BTreeMap<u64, u64>, k: u64| s.get(&k).copied().unwrap_or(k);
        let picked = at(&self.swapped, j);
        let displaced = at(&self.swapped, i);
        self.swapped.insert(j, displaced);
        self.swapped.remove(&i);
        self.drawn += 1;
        Some(picked)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::vec::Vec;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn shuffle_is_a_permutation() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let mut s = LazyShuffle::new(1000);
        let mut seen: Vec<u64> = core::iter::from_fn(|| s.next(&mut rng)).collect();
        assert_eq!(seen.len(), 1000);
        seen.sort_unstable();
        assert!(seen.iter().copied().eq(0..1000));
        assert_eq!(s.remaining(), 0);
    }

    #[test]
    fn shuffle_first_draw_is_uniform_enough() {
        let mut counts = [0u32; 4];
        for seed in 0..4000 {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            counts[LazyShuffle::new(4).next(&mut rng).unwrap() as usize] += 1;
        }
        assert!(counts.iter().all(|&c| (850..1150).contains(&c)), "{counts:?}");
    }

    #[test]
    fn protect_then_check_roundtrips_for_every_scheme() {
        let key = Key128::new(0x1111, 0x2222);
        for scheme in Scheme::ALL {
            let p = Protection::with_defaults(scheme);
            let w = p.protect(key, 0x40_1008, 0x7fff_0000).unwrap();
            assert_eq!(p.check(key, w, 0x7fff_0000), Ok(0x40_1008));
            if scheme != Scheme::None {
                assert_ne!(w, 0x40_1008);
            }
        }
    }

    #[test]
    fn pac_forging_always_succeeds_within_the_code_space() {
        let pac = PacConfig {
            pac_bits: 8,
            ..PacConfig::default()
        };
        let p = Protection::new(Scheme::Pac, CipherKind::PrinceV2, ModifierConfig::default(), pac)
            .unwrap();
        let key = Key128::new(9, 9);
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        for _ in 0..50 {
            let g = p.forge(key, 0x7fff_0000, 0x41_4140, 256, &mut rng);
            assert!(g.success && g.guesses <= 256);
            assert_eq!(p.check(key, g.forged.unwrap(), 0x7fff_0000), Ok(0x41_4140));
        }
    }

    #[test]
    fn lippen_forging_fails_with_a_small_budget() {
        let p = Protection::with_defaults(Scheme::Lippen);
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        let g = p.forge(Key128::new(1, 2), 0, 0x41_4140, 10_000, &mut rng);
        assert_eq!(g, GuessOutcome { success: false, guesses: 10_000, forged: None });
    }

    #[test]
    fn scheme_names_parse() {
        for s in Scheme::ALL {
            assert_eq!(s.name().parse(), Ok(s));
        }
        assert_eq!("PAC".parse(), Ok(Scheme::Pac));
        assert!("qarma".parse::<Scheme>().is_err());
    }
}

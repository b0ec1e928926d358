//! Per-domain key issuance.
//!
//! `m2` can reach only the low `m2_bits` of a key. If two live domains shared
//! the remaining `128 - m2_bits` bits, an attacker in one domain could pick an
//! `m2` that turns its key into the other domain's derived key and forge
//! pointers for it. The table therefore keeps those unaffected bits unique,
//! which caps the number of live domains at `2^(128 - m2_bits)`.
//!
//! A reduced key width `W <= 16` can be selected so the cap and the
//! no-collision property can be checked exhaustively. Keys are then confined
//! to their low `W` bits.

use alloc::collections::BTreeMap;
use core::fmt;

use rand::RngCore;

use crate::cipher::Key128;
use crate::seal::{ConfigError, ModifierConfig};

pub const FULL_KEY_WIDTH: u32 = 128;
pub const MAX_REDUCED_KEY_WIDTH: u32 = 16;

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct DomainId(pub u64);

impl fmt::Display for DomainId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "domain#{}", self.0)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum DomainError {
    Config(ConfigError),
    KeyWidthUnsupported { width: u32 },
    NoActiveConfig,
    LiveDomainsExist { live: usize },
    CapacityExhausted { live: usize },
    UnaffectedBitsCollision { with: DomainId },
    UnknownDomain(DomainId),
    KeyOutOfRange,
}

impl DomainError {
    pub fn code(&self) -> &'static str {
        match self {
            DomainError::Config(e) => e.code(),
            DomainError::KeyWidthUnsupported { .. } => "KEY_WIDTH_UNSUPPORTED",
            DomainError::NoActiveConfig => "NO_ACTIVE_CONFIG",
            DomainError::LiveDomainsExist { .. } => "LIVE_DOMAINS_EXIST",
            DomainError::CapacityExhausted { .. } => "CAPACITY_EXHAUSTED",
            DomainError::UnaffectedBitsCollision { .. } => "UNAFFECTED_BITS_COLLISION",
            DomainError::UnknownDomain(_) => "UNKNOWN_DOMAIN",
            DomainError::KeyOutOfRange => "KEY_OUT_OF_RANGE",
        }
    }
}

impl From<ConfigError> for DomainError {
    fn from(e: ConfigError) -> Self {
        DomainError::Config(e)
    }
}

impl fmt::Display for DomainError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            DomainError::Config(e) => e.fmt(f),
            DomainError::KeyWidthUnsupported { width } => {
                write!(f, "key width {width} is neither 128 nor in 1..=16")
            }
            DomainError::NoActiveConfig => f.write_str("no modifier split configured"),
            DomainError::LiveDomainsExist { live } => {
                write!(f, "cannot change the modifier split with {live} live domains")
            }
            DomainError::CapacityExhausted { live } => {
                write!(f, "all {live} unaffected-key prefixes are in use")
            }
            DomainError::UnaffectedBitsCollision { with } => {
                write!(f, "key shares its unaffected bits with {with}")
            }
            DomainError::UnknownDomain(id) => write!(f, "{id} is not live"),
            DomainError::KeyOutOfRange => f.write_str("key has bits above the table key width"),
        }
    }
}

impl core::error::Error for DomainError {}

#[derive(Clone, Debug)]
pub struct DomainKeyTable {
    key_width: u32,
    config: Option<ModifierConfig>,
    next_id: u64,
    entries: BTreeMap<DomainId, Key128>,
    /// unaffected prefix -> owner
    prefixes: BTreeMap<u128, DomainId>,
}

impl Default for DomainKeyTable {
    fn default() -> Self {
        Self::new()
    }
}

impl DomainKeyTable {
    /// Production table with full 128-bit keys.
    pub fn new() -> Self {
        DomainKeyTable {
            key_width: FULL_KEY_WIDTH,
            config: None,
            next_id: 1,
            entries: BTreeMap::new(),
            prefixes: BTreeMap::new(),
        }
    }

    /// Test table whose keys live in the low `width` bits.
    pub fn with_key_width(width: u32) -> Result<Self, DomainError> {
        if width != FULL_KEY_WIDTH && !(1..=MAX_REDUCED_KEY_WIDTH).contains(&width) {
            return Err(DomainError::KeyWidthUnsupported { width });
        }
        Ok(DomainKeyTable {
            key_width: width,
            ..Self::new()
        })
    }

    pub fn key_width(&self) -> u32 {
        self.key_width
    }

    pub fn config(&self) -> Option<&ModifierConfig> {
        self.config.as_ref()
    }

    pub fn m2_bits(&self) -> u32 {
        self.config.map_or(0, |c| c.m2_bits)
    }

    /// log2 of the live-domain cap, `W - m2_bits`.
    pub fn capacity_bits(&self) -> u32 {
        self.key_width - self.m2_bits()
    }

    /// Live-domain cap, or `None` when it does not fit in a `u128`.
    pub fn capacity(&self) -> Option<u128> {
        1u128.checked_shl(self.capacity_bits())
    }

    pub fn live_count(&self) -> usize {
        self.entries.len()
    }

    pub fn set_m_size(&mut self, cfg: ModifierConfig) -> Result<(), DomainError> {
        if !self.entries.is_empty() {
            return Err(DomainError::LiveDomainsExist {
                live: self.entries.len(),
            });
        }
        cfg.validate()?;
        if cfg.m2_bits > self.key_width {
            return Err(ConfigError::M2TooWide {
                m2_bits: cfg.m2_bits,
                max: self.key_width,
            }
            .into());
        }
        self.config = Some(cfg);
        self.prefixes.clear();
        Ok(())
    }

    fn key_mask(&self) -> u128 {
        if self.key_width >= 128 {
            u128::MAX
        } else {
            (1u128 << self.key_width) - 1
        }
    }

    /// The key bits `m2` cannot touch.
    pub fn unaffected(&self, key: Key128) -> u128 {
        key.to_u128().checked_shr(self.m2_bits()).unwrap_or(0)
    }

    /// `key ^ expand(m2)` with `m2` truncated to the configured width.
    pub fn derived_key(&self, key: Key128, m2: u128) -> Key128 {
        let m2_mask = 1u128
            .checked_shl(self.m2_bits())
            .map_or(u128::MAX, |v| v - 1);
        key.xor(m2 & m2_mask)
    }

    fn at_capacity(&self) -> bool {
        self.capacity()
            .is_some_and(|cap| self.entries.len() as u128 >= cap)
    }

    fn random_key<R: RngCore>(&self, rng: &mut R) -> Key128 {
        let raw = ((rng.next_u64() as u128) << 64) | rng.next_u64() as u128;
        Key128::from_u128(raw & self.key_mask())
    }

    fn issue_id(&mut self) -> DomainId {
        let id = DomainId(self.next_id);
        self.next_id += 1;
        id
    }

    /// Issue a fresh domain key whose unaffected bits are unused. Collisions
    /// are retried with fresh randomness; the capacity check up front makes
    /// the retry loop terminate.
    pub fn create_domain<R: RngCore>(
        &mut self,
        rng: &mut R,
    ) -> Result<(DomainId, Key128), DomainError> {
        if self.config.is_none() {
            return Err(DomainError::NoActiveConfig);
        }
        if self.at_capacity() {
            return Err(DomainError::CapacityExhausted {
                live: self.entries.len(),
            });
        }
        let key = loop {
            let candidate = self.random_key(rng);
            if !self.prefixes.contains_key(&self.unaffected(candidate)) {
                break candidate;
            }
        };
        let id = self.issue_id();
        self.prefixes.insert(self.unaffected(key), id);
        self.entries.insert(id, key);
        Ok((id, key))
    }

    /// Replace a live domain's key, provided its unaffected bits stay unique.
    pub fn set_key(&mut self, id: DomainId, key: Key128) -> Result<(), DomainError> {
        let old = *self.entries.get(&id).ok_or(DomainError::UnknownDomain(id))?;
        if key.to_u128() & !self.key_mask() != 0 {
            return Err(DomainError::KeyOutOfRange);
        }
        let prefix = self.unaffected(key);
        if let Some(&owner) = self.prefixes.get(&prefix) {
            if owner != id {
                return Err(DomainError::UnaffectedBitsCollision { with: owner });
            }
        }
        self.release_prefix(id, old);
        self.prefixes.insert(prefix, id);
        self.entries.insert(id, key);
        Ok(())
    }

    /// Retire a domain; its prefix becomes available again at once.
    pub fn revoke(&mut self, id: DomainId) -> Result<Key128, DomainError> {
        let key = self
            .entries
            .remove(&id)
            .ok_or(DomainError::UnknownDomain(id))?;
        self.release_prefix(id, key);
        Ok(key)
    }

    fn release_prefix(&mut self, id: DomainId, key: Key128) {
        let prefix = self.unaffected(key);
        if self.prefixes.get(&prefix) == Some(&id) {
            self.prefixes.remove(&prefix);
        }
    }

    /// Register a key without the uniqueness check. Exists only to build the
    /// colliding tables that the collision probes must catch.
    pub fn force_insert(&mut self, key: Key128) -> DomainId {
        let id = self.issue_id();
        self.prefixes.entry(self.unaffected(key)).or_insert(id);
        self.entries.insert(id, key);
        id
    }

    pub fn key(&self, id: DomainId) -> Option<Key128> {
        self.entries.get(&id).copied()
    }

    pub fn iter(&self) -> impl Iterator<Item = (DomainId, Key128)> + '_ {
        self.entries.iter().map(|(id, k)| (*id, *k))
    }

    /// True when no two live keys share their unaffected bits.
    pub fn prefixes_unique(&self) -> bool {
        let mut seen = alloc::collections::BTreeSet::new();
        self.entries.values().all(|k| seen.insert(self.unaffected(*k)))
    }
}

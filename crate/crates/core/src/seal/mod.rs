//! Sealing and unsealing of 64-bit pointers.
//!
//! ```text
//! seal(k, p, m)   = Enc_{k ^ expand(m2)}(p ^ place(m1))
//! unseal(k, c, m) = Dec_{k ^ expand(m2)}(c) ^ place(m1)   then zero-check
//! ```
//!
//! `place` scatters `m1` over the unused and alignment bits of the pointer
//! (see [`ModifierConfig::m1_positions`]); `expand` XORs `m2` into the low
//! `m2_bits` of the key, i.e. into `k1` first. After decryption every bit of
//! [`ModifierConfig::check_mask`] must be zero, otherwise the pointer was
//! forged, corrupted, or is being used with the wrong key or modifier.

use core::fmt;

use crate::cipher::{CipherKind, Key128};

mod config;
mod modifier;
mod pac;

pub use config::{ConfigError, ModifierConfig};
pub use modifier::{Modifier, MODIFIER_MAX_BITS};
pub use pac::{PacConfig, PacEngine, PacFailureMode, CORRUPT_PATTERN};

/// An unprotected pointer value.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct PlainPointer(pub u64);

/// A protected pointer. Without the key no field of it is meaningful.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct SealedPointer(pub u64);

impl fmt::LowerHex for PlainPointer {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:016x}", self.0)
    }
}

impl fmt::LowerHex for SealedPointer {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:016x}", self.0)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SealError {
    Config(ConfigError),
    /// Bits outside the address and tag fields were set before sealing.
    NonCanonicalPointer { value: u64 },
    ModifierTooWide { bits: u32, max: u32 },
    /// The check bits did not come back as zero. `garbled` is the decrypted
    /// word, kept for diagnostics.
    Integrity { garbled: u64 },
    /// PAC authentication failed in corrupt-top-bits mode; `value` is the
    /// poisoned pointer handed back to the program.
    CorruptedPointer { value: u64 },
}

impl SealError {
    pub fn code(&self) -> &'static str {
        match self {
            SealError::Config(e) => e.code(),
            SealError::NonCanonicalPointer { .. } => "NON_CANONICAL_POINTER",
            SealError::ModifierTooWide { .. } => "MODIFIER_TOO_WIDE",
            SealError::Integrity { .. } => "INTEGRITY_EXCEPTION",
            SealError::CorruptedPointer { .. } => "CORRUPTED_POINTER",
        }
    }

    /// True for the failures a check raises at use time, as opposed to
    /// misuse of the API.
    pub fn is_check_failure(&self) -> bool {
        matches!(
            self,
            SealError::Integrity { .. } | SealError::CorruptedPointer { .. }
        )
    }
}

impl From<ConfigError> for SealError {
    fn from(e: ConfigError) -> Self {
        SealError::Config(e)
    }
}

impl fmt::Display for SealError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            SealError::Config(e) => e.fmt(f),
            SealError::NonCanonicalPointer { value } => {
                write!(f, "pointer {value:016x} has bits set outside the address and tag fields")
            }
            SealError::ModifierTooWide { bits, max } => {
                write!(f, "modifier has {bits} significant bits, split allows {max}")
            }
            SealError::Integrity { garbled } => {
                write!(f, "integrity check failed (decrypted {garbled:016x})")
            }
            SealError::CorruptedPointer { value } => {
                write!(f, "authentication failed, pointer corrupted to {value:016x}")
            }
        }
    }
}

impl core::error::Error for SealError {}

/// A cipher plus a modifier split.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct SealEngine {
    cipher: CipherKind,
    config: ModifierConfig,
}

impl SealEngine {
    pub fn new(cipher: CipherKind, config: ModifierConfig) -> Result<Self, ConfigError> {
        config.validate()?;
        Ok(SealEngine { cipher, config })
    }

    /// Skip config validation. Only for demonstrating what validation
    /// prevents, e.g. an `m1` that overlaps address bits.
    pub fn new_unchecked(cipher: CipherKind, config: ModifierConfig) -> Self {
        SealEngine { cipher, config }
    }

    pub fn cipher(&self) -> CipherKind {
        self.cipher
    }

    pub fn config(&self) -> &ModifierConfig {
        &self.config
    }

    /// Precompute the derived key and placed `m1` for one (key, modifier).
    pub fn bind(&self, key: Key128, modifier: &Modifier) -> Result<SealContext, SealError> {
        let (m1, m2) = modifier.split(&self.config)?;
        Ok(SealContext {
            cipher: self.cipher,
            key: key.xor(m2),
            placed_m1: self.config.place_m1(m1),
            check_mask: self.config.check_mask(),
        })
    }

    pub fn seal(
        &self,
        key: Key128,
        ptr: PlainPointer,
        modifier: &Modifier,
    ) -> Result<SealedPointer, SealError> {
        self.bind(key, modifier)?.seal(ptr)
    }

    pub fn unseal(
        &self,
        key: Key128,
        sealed: SealedPointer,
        modifier: &Modifier,
    ) -> Result<PlainPointer, SealError> {
        self.bind(key, modifier)?.unseal(sealed)
    }
}

/// Sealing state for a fixed key and modifier.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct SealContext {
    cipher: CipherKind,
    key: Key128,
    placed_m1: u64,
    check_mask: u64,
}

impl SealContext {
    /// The key after `m2` mixing.
    pub fn derived_key(&self) -> Key128 {
        self.key
    }

    pub fn placed_m1(&self) -> u64 {
        self.placed_m1
    }

    #[inline]
    pub fn seal(&self, ptr: PlainPointer) -> Result<SealedPointer, SealError> {
        if ptr.0 & self.check_mask != 0 {
            return Err(SealError::NonCanonicalPointer { value: ptr.0 });
        }
        Ok(SealedPointer(self.cipher.encrypt(self.key, ptr.0 ^ self.placed_m1)))
    }

    /// Decrypt and strip `m1` without checking.
    #[inline]
    pub fn open(&self, sealed: SealedPointer) -> u64 {
        self.cipher.decrypt(self.key, sealed.0) ^ self.placed_m1
    }

    #[inline]
    pub fn unseal(&self, sealed: SealedPointer) -> Result<PlainPointer, SealError> {
        let q = self.open(sealed);
        if q & self.check_mask != 0 {
            return Err(SealError::Integrity { garbled: q });
        }
        Ok(PlainPointer(q))
    }
}

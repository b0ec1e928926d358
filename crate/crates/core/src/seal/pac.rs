//! PAC-style baseline: a truncated MAC stored in the unused pointer bits.
//!
//! The MAC is the low `pac_bits` of `Enc_k(ptr ^ fold(m))`, written into the
//! `pac_bits` directly above the tag field. Address bits stay in the clear,
//! which is exactly what makes the scheme brute-forceable: a forged pointer to
//! any chosen address needs only the right `pac_bits`-bit code.

use crate::cipher::{CipherKind, Key128};

use super::{ConfigError, Modifier, PlainPointer, SealError, SealedPointer};

/// Error pattern applied in [`PacFailureMode::CorruptTopBits`]: flip bit 62 and
/// set bit 63 of the stripped pointer.
pub const CORRUPT_PATTERN: (u64, u64) = (1 << 62, 1 << 63);

/// What authentication does when the code does not match.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash)]
pub enum PacFailureMode {
    /// Hand back a pointer with poisoned top bits (Armv8.3 behaviour).
    CorruptTopBits,
    /// Raise at once (Armv8.6 FPAC behaviour).
    #[default]
    Exception,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct PacConfig {
    pub pac_bits: u32,
    pub failure_mode: PacFailureMode,
}

impl Default for PacConfig {
    fn default() -> Self {
        PacConfig {
            pac_bits: 16,
            failure_mode: PacFailureMode::Exception,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct PacEngine {
    cipher: CipherKind,
    addr_width: u32,
    tag_bits: u32,
    pac: PacConfig,
}

impl PacEngine {
    pub fn new(
        cipher: CipherKind,
        addr_width: u32,
        tag_bits: u32,
        pac: PacConfig,
    ) -> Result<Self, ConfigError> {
        if !(32..=64).contains(&addr_width) {
            return Err(ConfigError::AddrWidthOutOfRange { addr_width });
        }
        if addr_width + tag_bits > 64 {
            return Err(ConfigError::TagFieldTooWide {
                tag_bits,
                addr_width,
            });
        }
        let budget = 64 - addr_width - tag_bits;
        if pac.pac_bits > budget {
            return Err(ConfigError::PacTooWide {
                pac_bits: pac.pac_bits,
                budget,
            });
        }
        Ok(PacEngine {
            cipher,
            addr_width,
            tag_bits,
            pac,
        })
    }

    pub fn config(&self) -> &PacConfig {
        &self.pac
    }

    fn field_shift(&self) -> u32 {
        self.addr_width + self.tag_bits
    }

    fn code_mask(&self) -> u64 {
        if self.pac.pac_bits == 0 {
            0
        } else {
            u64::MAX >> (64 - self.pac.pac_bits)
        }
    }

    /// Mask of the PAC field inside the pointer.
    pub fn field_mask(&self) -> u64 {
        self.code_mask().checked_shl(self.field_shift()).unwrap_or(0)
    }

    /// Bits a canonical pointer must keep clear.
    fn unused_mask(&self) -> u64 {
        u64::MAX.checked_shl(self.field_shift()).unwrap_or(0)
    }

    /// The truncated MAC of a canonical pointer.
    pub fn code(&self, key: Key128, ptr: PlainPointer, modifier: &Modifier) -> u64 {
        self.cipher.encrypt(key, ptr.0 ^ modifier.fold()) & self.code_mask()
    }

    /// Insert an explicit code into a canonical pointer. This is what an
    /// attacker does when guessing.
    pub fn with_code(&self, ptr: PlainPointer, code: u64) -> SealedPointer {
        let field = (code & self.code_mask())
            .checked_shl(self.field_shift())
            .unwrap_or(0);
        SealedPointer((ptr.0 & !self.field_mask()) | field)
    }

    pub fn sign(
        &self,
        key: Key128,
        ptr: PlainPointer,
        modifier: &Modifier,
    ) -> Result<SealedPointer, SealError> {
        if ptr.0 & self.unused_mask() != 0 {
            return Err(SealError::NonCanonicalPointer { value: ptr.0 });
        }
        Ok(self.with_code(ptr, self.code(key, ptr, modifier)))
    }

    pub fn auth(
        &self,
        key: Key128,
        signed: SealedPointer,
        modifier: &Modifier,
    ) -> Result<PlainPointer, SealError> {
        let stripped = PlainPointer(signed.0 & !self.field_mask());
        let presented = (signed.0 & self.field_mask())
            .checked_shr(self.field_shift())
            .unwrap_or(0);
        let canonical = stripped.0 & self.unused_mask() == 0;
        if canonical && presented == self.code(key, stripped, modifier) {
            return Ok(stripped);
        }
        match self.pac.failure_mode {
            PacFailureMode::Exception => Err(SealError::Integrity { garbled: signed.0 }),
            PacFailureMode::CorruptTopBits => {
                let (flip, set) = CORRUPT_PATTERN;
                Err(SealError::CorruptedPointer {
                    value: (stripped.0 ^ flip) | set,
                })
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn engine(pac_bits: u32, mode: PacFailureMode) -> PacEngine {
        PacEngine::new(
            CipherKind::PrinceV2,
            48,
            0,
            PacConfig {
                pac_bits,
                failure_mode: mode,
            },
        )
        .unwrap()
    }

    #[test]
    fn sign_then_auth_roundtrips() {
        let e = engine(16, PacFailureMode::Exception);
        let key = Key128::new(0xaa, 0xbb);
        let m = Modifier::from_u64(0x7fff_0ff0);
        let p = PlainPointer(0x0000_5555_0000_1230);
        let s = e.sign(key, p, &m).unwrap();
        assert_eq!(s.0 & e.address_bits_for_test(), p.0);
        assert_eq!(e.auth(key, s, &m), Ok(p));
    }

    #[test]
    fn zero_width_pac_is_identity() {
        let e = engine(0, PacFailureMode::Exception);
        let p = PlainPointer(0x1234_5678);
        let s = e.sign(Key128::new(1, 1), p, &Modifier::from_u64(9)).unwrap();
        assert_eq!(s.0, p.0);
        assert_eq!(e.auth(Key128::new(1, 1), s, &Modifier::ZERO), Ok(p));
    }

    #[test]
    fn mismatch_raises_in_exception_mode() {
        let e = engine(16, PacFailureMode::Exception);
        let key = Key128::new(3, 4);
        let p = PlainPointer(0x1000);
        let s = e.sign(key, p, &Modifier::from_u64(1)).unwrap();
        let err = e.auth(key, s, &Modifier::from_u64(2)).unwrap_err();
        assert_eq!(err.code(), "INTEGRITY_EXCEPTION");
    }

    #[test]
    fn mismatch_poisons_top_bits_in_corrupt_mode() {
        let e = engine(8, PacFailureMode::CorruptTopBits);
        let key = Key128::new(3, 4);
        let p = PlainPointer(0x1000);
        let s = e.sign(key, p, &Modifier::from_u64(1)).unwrap();
        let mut wrong = Modifier::from_u64(2);
        // a wrong modifier can collide on 8 bits; find one that does not
        while e.auth(key, s, &wrong).is_ok() {
            wrong = Modifier::from_u64(wrong.fold() + 1);
        }
        match e.auth(key, s, &wrong) {
            Err(SealError::CorruptedPointer { value }) => {
                assert_eq!(value ^ p.0, 0b11 << 62);
            }
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn width_and_canonical_checks() {
        let too_wide = PacConfig {
            pac_bits: 17,
            failure_mode: PacFailureMode::Exception,
        };
        assert_eq!(
            PacEngine::new(CipherKind::Prince, 48, 0, too_wide),
            Err(ConfigError::PacTooWide {
                pac_bits: 17,
                budget: 16
            })
        );
        let e = engine(8, PacFailureMode::Exception);
        assert_eq!(
            e.sign(Key128::ZERO, PlainPointer(1 << 60), &Modifier::ZERO)
                .unwrap_err()
                .code(),
            "NON_CANONICAL_POINTER"
        );
    }

    #[test]
    fn candidate_space_at_sixteen_bits() {
        let e = engine(16, PacFailureMode::Exception);
        assert_eq!(e.field_mask().count_ones(), 16);
        assert_eq!(1u64 << e.field_mask().count_ones(), 65_536);
    }

    impl PacEngine {
        fn address_bits_for_test(&self) -> u64 {
            !u64::MAX.checked_shl(self.addr_width).unwrap_or(0)
        }
    }
}

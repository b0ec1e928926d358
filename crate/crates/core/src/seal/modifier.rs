use core::fmt;

use super::{ModifierConfig, SealError};

/// A context modifier of up to 192 bits, stored as little-endian 64-bit limbs.
///
/// Under a [`ModifierConfig`] the value splits into `m1` (the low `m1_bits`)
/// and `m2` (the next `m2_bits`); any higher bit must be zero.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Modifier {
    limbs: [u64; 3],
}

/// Maximum modifier width in bits.
pub const MODIFIER_MAX_BITS: u32 = 192;

impl Modifier {
    pub const ZERO: Modifier = Modifier { limbs: [0; 3] };

    pub const fn from_limbs(limbs: [u64; 3]) -> Self {
        Modifier { limbs }
    }

    pub const fn from_u64(v: u64) -> Self {
        Modifier { limbs: [v, 0, 0] }
    }

    pub const fn from_u128(v: u128) -> Self {
        Modifier {
            limbs: [v as u64, (v >> 64) as u64, 0],
        }
    }

    /// Build `m1 || m2` for a given split. Bits beyond the configured widths
    /// are dropped.
    pub fn compose(m1: u64, m2: u128, cfg: &ModifierConfig) -> Self {
        let mut m = Modifier::ZERO;
        for i in 0..cfg.m1_bits.min(64) {
            if (m1 >> i) & 1 == 1 {
                m.set_bit(i);
            }
        }
        for i in 0..cfg.m2_bits.min(128) {
            if (m2 >> i) & 1 == 1 {
                m.set_bit(cfg.m1_bits + i);
            }
        }
        m
    }

    /// XOR-fold a 64-bit context value down to `bits` bits.
    pub fn compress(context: u64, bits: u32) -> Self {
        if bits >= 64 {
            return Modifier::from_u64(context);
        }
        if bits == 0 {
            return Modifier::ZERO;
        }
        let mask = (1u64 << bits) - 1;
        let mut acc = 0;
        let mut rest = context;
        while rest != 0 {
            acc ^= rest & mask;
            rest >>= bits;
        }
        Modifier::from_u64(acc)
    }

    pub const fn limbs(&self) -> [u64; 3] {
        self.limbs
    }

    pub fn is_zero(&self) -> bool {
        self.limbs == [0; 3]
    }

    pub fn bit(&self, i: u32) -> bool {
        i < MODIFIER_MAX_BITS && (self.limbs[(i / 64) as usize] >> (i % 64)) & 1 == 1
    }

    fn set_bit(&mut self, i: u32) {
        if i < MODIFIER_MAX_BITS {
            self.limbs[(i / 64) as usize] |= 1 << (i % 64);
        }
    }

    /// Number of significant bits (position of the highest set bit plus one).
    pub fn significant_bits(&self) -> u32 {
        for (idx, limb) in self.limbs.iter().enumerate().rev() {
            if *limb != 0 {
                return idx as u32 * 64 + (64 - limb.leading_zeros());
            }
        }
        0
    }

    /// Read `len <= 128` bits starting at bit `lo`.
    fn field(&self, lo: u32, len: u32) -> u128 {
        let mut out = 0u128;
        for i in 0..len.min(128) {
            if self.bit(lo + i) {
                out |= 1 << i;
            }
        }
        out
    }

    /// Split into `(m1, m2)`.
    pub fn split(&self, cfg: &ModifierConfig) -> Result<(u64, u128), SealError> {
        let width = cfg.modifier_bits();
        if self.significant_bits() > width {
            return Err(SealError::ModifierTooWide {
                bits: self.significant_bits(),
                max: width,
            });
        }
        Ok((self.field(0, cfg.m1_bits) as u64, self.field(cfg.m1_bits, cfg.m2_bits)))
    }

    /// XOR of the 64-bit limbs, used where a single 64-bit tweak is expected.
    pub fn fold(&self) -> u64 {
        self.limbs[0] ^ self.limbs[1] ^ self.limbs[2]
    }
}

impl fmt::LowerHex for Modifier {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let [l0, l1, l2] = self.limbs;
        if l2 != 0 {
            write!(f, "{l2:x}{l1:016x}{l0:016x}")
        } else if l1 != 0 {
            write!(f, "{l1:x}{l0:016x}")
        } else {
            write!(f, "{l0:x}")
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn split_and_compose_agree() {
        let cfg = ModifierConfig::new(16, 70, 48, 0, 0);
        let m = Modifier::compose(0xbeef, (1u128 << 69) | 0x1234, &cfg);
        assert_eq!(m.split(&cfg), Ok((0xbeef, (1u128 << 69) | 0x1234)));
        assert_eq!(m.significant_bits(), 86);
    }

    #[test]
    fn bits_past_the_split_are_rejected() {
        let cfg = ModifierConfig::new(16, 0, 48, 0, 0);
        assert!(Modifier::from_u64(0xffff).split(&cfg).is_ok());
        assert_eq!(
            Modifier::from_u64(0x1_0000).split(&cfg),
            Err(SealError::ModifierTooWide { bits: 17, max: 16 })
        );
    }

    #[test]
    fn fold_xors_limbs() {
        assert_eq!(Modifier::from_limbs([1, 2, 4]).fold(), 7);
        assert_eq!(Modifier::from_u64(0xabc).fold(), 0xabc);
    }

    #[test]
    fn compress_fits_width() {
        let m = Modifier::compress(0x7fff_0ff0, 16);
        assert_eq!(m, Modifier::from_u64(0x7fff ^ 0x0ff0));
        assert_eq!(Modifier::compress(u64::MAX, 64), Modifier::from_u64(u64::MAX));
        assert_eq!(Modifier::compress(0x1234, 0), Modifier::ZERO);
        for bits in 1..64 {
            assert!(Modifier::compress(0xdead_beef_cafe_f00d, bits).significant_bits() <= bits);
        }
    }

    #[test]
    fn hex_formatting() {
        extern crate alloc;
        use alloc::format;
        assert_eq!(format!("{:x}", Modifier::from_limbs([1, 0, 0])), "1");
        assert_eq!(format!("{:x}", Modifier::from_limbs([1, 2, 0])), "20000000000000001");
    }
}

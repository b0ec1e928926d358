use core::fmt;

/// Pointer layout, low to high:
///
/// ```text
///  63                A+T  A+T-1      A  A-1             0
/// +-------------------+--------------+-------------------+
/// |   unused (U bits) |  tag (T bits)|  address (A bits) |
/// +-------------------+--------------+-------------------+
///                                     low `align_bits` of the address are
///                                     zero for aligned pointers
/// ```
///
/// `m1` may only occupy the unused bits and the alignment bits, so its budget
/// is `U + align_bits = (64 - A) - T + align_bits`. With `A = 48`, no tag and
/// word alignment that is `64 - 48 + 2 = 18` bits.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct ModifierConfig {
    pub m1_bits: u32,
    pub m2_bits: u32,
    pub addr_width: u32,
    pub tag_bits: u32,
    pub align_bits: u32,
}

impl Default for ModifierConfig {
    /// 48-bit addresses, no tag, a 16-bit `m1` filling the unused bits.
    fn default() -> Self {
        ModifierConfig {
            m1_bits: 16,
            m2_bits: 0,
            addr_width: 48,
            tag_bits: 0,
            align_bits: 0,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ConfigError {
    AddrWidthOutOfRange { addr_width: u32 },
    TagFieldTooWide { tag_bits: u32, addr_width: u32 },
    AlignTooWide { align_bits: u32, addr_width: u32 },
    /// `m1` would spill into bits used for address generation.
    M1OverlapsAddress { m1_bits: u32, budget: u32 },
    M2TooWide { m2_bits: u32, max: u32 },
    PacTooWide { pac_bits: u32, budget: u32 },
}

impl ConfigError {
    pub fn code(&self) -> &'static str {
        match self {
            ConfigError::AddrWidthOutOfRange { .. } => "ADDR_WIDTH_OUT_OF_RANGE",
            ConfigError::TagFieldTooWide { .. } => "TAG_FIELD_TOO_WIDE",
            ConfigError::AlignTooWide { .. } => "ALIGN_TOO_WIDE",
            ConfigError::M1OverlapsAddress { .. } => "M1_OVERLAPS_ADDRESS",
            ConfigError::M2TooWide { .. } => "M2_TOO_WIDE",
            ConfigError::PacTooWide { .. } => "PAC_TOO_WIDE",
        }
    }
}

impl fmt::Display for ConfigError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match *self {
            ConfigError::AddrWidthOutOfRange { addr_width } => {
                write!(f, "address width {addr_width} outside [32, 64]")
            }
            ConfigError::TagFieldTooWide {
                tag_bits,
                addr_width,
            } => write!(f, "{tag_bits} tag bits do not fit above a {addr_width}-bit address"),
            ConfigError::AlignTooWide {
                align_bits,
                addr_width,
            } => write!(f, "{align_bits} alignment bits exceed the {addr_width}-bit address"),
            ConfigError::M1OverlapsAddress { m1_bits, budget } => {
                write!(f, "m1 needs {m1_bits} bits but only {budget} are free of address bits")
            }
            ConfigError::M2TooWide { m2_bits, max } => {
                write!(f, "m2 of {m2_bits} bits exceeds the {max}-bit key")
            }
            ConfigError::PacTooWide { pac_bits, budget } => {
                write!(f, "PAC of {pac_bits} bits exceeds the {budget} unused pointer bits")
            }
        }
    }
}

impl core::error::Error for ConfigError {}

const fn low_mask(bits: u32) -> u64 {
    if bits >= 64 {
        u64::MAX
    } else {
        (1u64 << bits) - 1
    }
}

impl ModifierConfig {
    pub const fn new(
        m1_bits: u32,
        m2_bits: u32,
        addr_width: u32,
        tag_bits: u32,
        align_bits: u32,
    ) -> Self {
        ModifierConfig {
            m1_bits,
            m2_bits,
            addr_width,
            tag_bits,
            align_bits,
        }
    }

    /// Total modifier entropy `|m| = |m1| + |m2|`.
    pub fn modifier_bits(&self) -> u32 {
        self.m1_bits + self.m2_bits
    }

    /// Bits above the address and tag fields.
    pub fn unused_bits(&self) -> u32 {
        64u32.saturating_sub(self.addr_width + self.tag_bits)
    }

    /// Largest `m1` that stays out of address generation:
    /// `(64 - A) - tag_bits + align_bits`.
    pub fn m1_budget(&self) -> u32 {
        self.unused_bits() + self.align_bits
    }

    pub fn validate(&self) -> Result<(), ConfigError> {
        if !(32..=64).contains(&self.addr_width) {
            return Err(ConfigError::AddrWidthOutOfRange {
                addr_width: self.addr_width,
            });
        }
        if self.tag_bits + self.addr_width > 64 {
            return Err(ConfigError::TagFieldTooWide {
                tag_bits: self.tag_bits,
                addr_width: self.addr_width,
            });
        }
        if self.align_bits >= self.addr_width {
            return Err(ConfigError::AlignTooWide {
                align_bits: self.align_bits,
                addr_width: self.addr_width,
            });
        }
        if self.m1_bits > self.m1_budget() {
            return Err(ConfigError::M1OverlapsAddress {
                m1_bits: self.m1_bits,
                budget: self.m1_budget(),
            });
        }
        if self.m2_bits > 128 {
            return Err(ConfigError::M2TooWide {
                m2_bits: self.m2_bits,
                max: 128,
            });
        }
        Ok(())
    }

    /// Key-separation entropy left for distinct domains:
    /// `E = 128 - |m| - tag_bits + (64 - A)`.
    pub fn effective_domain_entropy(&self) -> Result<i32, ConfigError> {
        self.validate()?;
        Ok(128 - self.modifier_bits() as i32 - self.tag_bits as i32
            + (64 - self.addr_width as i32))
    }

    pub fn address_mask(&self) -> u64 {
        low_mask(self.addr_width)
    }

    pub fn tag_mask(&self) -> u64 {
        low_mask(self.addr_width + self.tag_bits) & !self.address_mask()
    }

    pub fn unused_mask(&self) -> u64 {
        !low_mask(self.addr_width + self.tag_bits)
    }

    pub fn align_mask(&self) -> u64 {
        low_mask(self.align_bits)
    }

    /// Bits that must be zero in a canonical pointer, and therefore come back
    /// as zero after a successful unseal.
    pub fn check_mask(&self) -> u64 {
        self.unused_mask() | self.align_mask()
    }

    pub fn is_canonical(&self, ptr: u64) -> bool {
        ptr & self.check_mask() == 0
    }

    /// Bit positions receiving `m1`, in order: unused bits from just above the
    /// tag field upward, then alignment bits from bit 0 upward. An unvalidated
    /// config whose `m1_bits` exceeds the budget continues into the address
    /// bits above the alignment bits.
    pub fn m1_positions(&self) -> impl Iterator<Item = u32> + '_ {
        let first_unused = (self.addr_width + self.tag_bits).min(64);
        let align = self.align_bits.min(self.addr_width);
        (first_unused..64)
            .chain(0..align)
            .chain(align..self.addr_width.min(64))
            .take(self.m1_bits as usize)
    }

    pub fn m1_placement_mask(&self) -> u64 {
        self.m1_positions().fold(0, |acc, pos| acc | 1u64 << pos)
    }

    /// Scatter the low `m1_bits` of `m1` onto their pointer positions.
    pub fn place_m1(&self, m1: u64) -> u64 {
        self.m1_positions()
            .enumerate()
            .filter(|(j, _)| (m1 >> j) & 1 == 1)
            .fold(0, |acc, (_, pos)| acc | 1u64 << pos)
    }

    /// Gather the `m1` bits back out of a pointer-shaped word.
    pub fn extract_m1(&self, placed: u64) -> u64 {
        self.m1_positions()
            .enumerate()
            .filter(|(_, pos)| (placed >> pos) & 1 == 1)
            .fold(0, |acc, (j, _)| acc | 1u64 << j)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn cfg(m1: u32, a: u32, tag: u32, align: u32) -> ModifierConfig {
        ModifierConfig::new(m1, 0, a, tag, align)
    }

    #[test]
    fn m1_budget_at_48_and_57_bit_addresses() {
        assert_eq!(cfg(18, 48, 0, 2).validate(), Ok(()));
        assert_eq!(
            cfg(19, 48, 0, 2).validate(),
            Err(ConfigError::M1OverlapsAddress {
                m1_bits: 19,
                budget: 18
            })
        );
        assert_eq!(cfg(9, 57, 0, 2).validate(), Ok(()));
        assert_eq!(cfg(10, 57, 0, 2).validate().unwrap_err().code(), "M1_OVERLAPS_ADDRESS");
    }

    #[test]
    fn full_width_addresses_leave_no_m1_room() {
        assert_eq!(cfg(0, 64, 0, 0).validate(), Ok(()));
        assert_eq!(cfg(0, 64, 0, 0).m1_budget(), 0);
        assert!(cfg(1, 64, 0, 0).validate().is_err());
        assert_eq!(cfg(0, 64, 0, 0).unused_mask(), 0);
    }

    #[test]
    fn tag_bits_shrink_the_budget() {
        assert_eq!(cfg(0, 48, 4, 2).m1_budget(), 14);
        assert!(cfg(15, 48, 4, 2).validate().is_err());
        assert_eq!(
            cfg(0, 60, 5, 0).validate(),
            Err(ConfigError::TagFieldTooWide {
                tag_bits: 5,
                addr_width: 60
            })
        );
    }

    #[test]
    fn other_range_checks() {
        assert_eq!(cfg(0, 31, 0, 0).validate().unwrap_err().code(), "ADDR_WIDTH_OUT_OF_RANGE");
        assert_eq!(cfg(0, 65, 0, 0).validate().unwrap_err().code(), "ADDR_WIDTH_OUT_OF_RANGE");
        assert_eq!(cfg(0, 48, 0, 48).validate().unwrap_err().code(), "ALIGN_TOO_WIDE");
        let wide = ModifierConfig::new(0, 129, 48, 0, 0);
        assert_eq!(wide.validate().unwrap_err().code(), "M2_TOO_WIDE");
        assert!(ModifierConfig::new(0, 128, 48, 0, 0).validate().is_ok());
    }

    #[test]
    fn domain_entropy_examples() {
        // |m| = 16 with a 4-bit tag: m1 takes the whole budget, m2 the rest
        let at48 = ModifierConfig::new(12, 4, 48, 4, 0);
        assert_eq!(at48.effective_domain_entropy(), Ok(124));
        let at57 = ModifierConfig::new(3, 13, 57, 4, 0);
        assert_eq!(at57.effective_domain_entropy(), Ok(115));
        assert_eq!(
            ModifierConfig::new(0, 0, 64, 0, 0).effective_domain_entropy(),
            Ok(128)
        );
    }

    #[test]
    fn placement_order_is_high_unused_then_alignment() {
        let c = cfg(18, 48, 0, 2);
        let pos: alloc::vec::Vec<u32> = c.m1_positions().collect();
        assert_eq!(pos[0], 48);
        assert_eq!(pos[15], 63);
        assert_eq!(&pos[16..], &[0, 1]);
        assert_eq!(c.m1_placement_mask(), 0xffff_0000_0000_0003);
        assert_eq!(c.place_m1(1 << 16), 1);
        assert_eq!(c.place_m1(1), 1 << 48);
    }

    #[test]
    fn placement_never_touches_address_bits_when_valid() {
        for a in 32..=64 {
            for tag in 0..=(64 - a).min(8) {
                for align in 0..4 {
                    let mut c = cfg(0, a, tag, align);
                    c.m1_bits = c.m1_budget();
                    if c.validate().is_err() {
                        continue;
                    }
                    let addr_only = c.address_mask() & !c.align_mask();
                    assert_eq!(c.m1_placement_mask() & addr_only, 0, "{c:?}");
                    assert_eq!(c.m1_placement_mask() & c.tag_mask(), 0, "{c:?}");
                    assert_eq!(c.m1_placement_mask(), c.check_mask(), "{c:?}");
                }
            }
        }
    }

    #[test]
    fn unchecked_overflow_spills_into_address_bits() {
        let c = cfg(19, 48, 0, 2);
        assert_eq!(c.m1_placement_mask(), 0xffff_0000_0000_0007);
    }

    #[test]
    fn extract_inverts_place() {
        let c = cfg(18, 48, 0, 2);
        for m1 in [0u64, 1, 0x2_ffff, 0x1_2345, 0x3_0000] {
            assert_eq!(c.extract_m1(c.place_m1(m1)), m1);
        }
    }
}

//! How instrumented code derives modifiers.

use core::fmt;
use core::str::FromStr;

/// Modifier source for return addresses.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum ReturnModifier {
    /// The stack pointer at the call site (RETAA-style).
    StackPointer,
    Zero,
    /// The previously pushed sealed return address, chaining frames.
    ChainedPreviousReturn,
}

/// Modifier source for data pointers.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum DataModifier {
    Zero,
    /// The static type identifier of the pointer.
    TypeId,
    /// The storage location mixed with a random per-slot tag.
    LocationPlusTag,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct InstrumentationPolicy {
    pub return_modifier: ReturnModifier,
    pub data_modifier: DataModifier,
}

impl InstrumentationPolicy {
    /// SP for returns, type id for data pointers.
    pub const PARTS: Self = InstrumentationPolicy {
        return_modifier: ReturnModifier::StackPointer,
        data_modifier: DataModifier::TypeId,
    };
    /// Chained return addresses, unprotected context for data.
    pub const PACSTACK: Self = InstrumentationPolicy {
        return_modifier: ReturnModifier::ChainedPreviousReturn,
        data_modifier: DataModifier::Zero,
    };
    /// Chained returns, location plus random tag for data.
    pub const PACTIGHT: Self = InstrumentationPolicy {
        return_modifier: ReturnModifier::ChainedPreviousReturn,
        data_modifier: DataModifier::LocationPlusTag,
    };
    /// Constant zero modifier everywhere.
    pub const ZERO: Self = InstrumentationPolicy {
        return_modifier: ReturnModifier::Zero,
        data_modifier: DataModifier::Zero,
    };

    pub const PRESETS: [(&'static str, Self); 4] = [
        ("parts", Self::PARTS),
        ("pacstack", Self::PACSTACK),
        ("pactight", Self::PACTIGHT),
        ("zero", Self::ZERO),
    ];
}

impl Default for InstrumentationPolicy {
    fn default() -> Self {
        Self::PARTS
    }
}

impl ReturnModifier {
    fn name(self) -> &'static str {
        match self {
            ReturnModifier::StackPointer => "sp",
            ReturnModifier::Zero => "zero",
            ReturnModifier::ChainedPreviousReturn => "chained",
        }
    }
}

impl DataModifier {
    fn name(self) -> &'static str {
        match self {
            DataModifier::Zero => "zero",
            DataModifier::TypeId => "type",
            DataModifier::LocationPlusTag => "location",
        }
    }
}

impl fmt::Display for InstrumentationPolicy {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "ret={},data={}",
            self.return_modifier.name(),
            self.data_modifier.name()
        )
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct UnknownPolicy;

impl fmt::Display for UnknownPolicy {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(
            "unknown policy (expected parts, pacstack, pactight, zero or ret=<sp|zero|chained>,data=<zero|type|location>)",
        )
    }
}

impl core::error::Error for UnknownPolicy {}

impl FromStr for InstrumentationPolicy {
    type Err = UnknownPolicy;

    /// Accepts a preset name or `ret=<rule>,data=<rule>` (either part may be
    /// omitted and then defaults to `zero`).
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let s = s.trim();
        if let Some((_, p)) = Self::PRESETS.iter().find(|(n, _)| n.eq_ignore_ascii_case(s)) {
            return Ok(*p);
        }
        let mut policy = Self::ZERO;
        for part in s.split(',') {
            let (key, value) = part.split_once('=').ok_or(UnknownPolicy)?;
            match (key.trim(), value.trim()) {
                ("ret", "sp") => policy.return_modifier = ReturnModifier::StackPointer,
                ("ret", "zero") => policy.return_modifier = ReturnModifier::Zero,
                ("ret", "chained") => {
                    policy.return_modifier = ReturnModifier::ChainedPreviousReturn
                }
                ("data", "zero") => policy.data_modifier = DataModifier::Zero,
                ("data", "type") => policy.data_modifier = DataModifier::TypeId,
                ("data", "location") => policy.data_modifier = DataModifier::LocationPlusTag,
                _ => return Err(UnknownPolicy),
            }
        }
        Ok(policy)
    }
}

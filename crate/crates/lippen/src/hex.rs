//! Hex parsing for blocks, keys and modifiers.
//!
//! Strict mode (used for machine input) wants exactly the canonical number of
//! lowercase digits and no prefix. Lenient mode takes an optional `0x`, any
//! case, `_` separators, and fewer digits.

use lippen_core::{Key128, Modifier};

#[derive(Clone, Debug, PartialEq, Eq, thiserror::Error)]
#[error("{what} {value:?} is not {expect}")]
pub struct HexError {
    pub what: &'static str,
    pub value: String,
    pub expect: String,
}

impl HexError {
    pub fn code(&self) -> &'static str {
        "MALFORMED_HEX"
    }
}

fn digits(what: &'static str, s: &str, width: usize, strict: bool) -> Result<String, HexError> {
    let err = |expect: String| HexError {
        what,
        value: s.to_string(),
        expect,
    };
    if strict {
        let ok = s.len() == width && s.bytes().all(|b| b.is_ascii_digit() || (b'a'..=b'f').contains(&b));
        if !ok {
            return Err(err(format!("exactly {width} lowercase hex digits")));
        }
        return Ok(s.to_string());
    }
    let body = s
        .strip_prefix("0x")
        .or_else(|| s.strip_prefix("0X"))
        .unwrap_or(s)
        .replace('_', "");
    if body.is_empty() || body.len() > width || !body.bytes().all(|b| b.is_ascii_hexdigit()) {
        return Err(err(format!("at most {width} hex digits")));
    }
    Ok(body.to_ascii_lowercase())
}

pub fn parse_u64(what: &'static str, s: &str, strict: bool) -> Result<u64, HexError> {
    let d = digits(what, s, 16, strict)?;
    Ok(u64::from_str_radix(&d, 16).expect("validated digits"))
}

pub fn parse_key(s: &str, strict: bool) -> Result<Key128, HexError> {
    let d = digits("key", s, 32, strict)?;
    Ok(Key128::from_u128(u128::from_str_radix(&d, 16).expect("validated digits")))
}

/// Modifiers are up to 192 bits: 48 digits strict, fewer allowed otherwise.
pub fn parse_modifier(s: &str, strict: bool) -> Result<Modifier, HexError> {
    let d = if strict {
        let ok = !s.is_empty()
            && s.len() <= 48
            && s.bytes().all(|b| b.is_ascii_digit() || (b'a'..=b'f').contains(&b));
        if !ok {
            return Err(HexError {
                what: "modifier",
                value: s.to_string(),
                expect: "1 to 48 lowercase hex digits".into(),
            });
        }
        s.to_string()
    } else {
        digits("modifier", s, 48, false)?
    };
    let padded = format!("{d:0>48}");
    let limb = |i: usize| u64::from_str_radix(&padded[48 - 16 * (i + 1)..48 - 16 * i], 16).unwrap();
    Ok(Modifier::from_limbs([limb(0), limb(1), limb(2)]))
}

/// `0x`-prefixed hex or decimal, as used in scenario files.
pub fn parse_number(s: &str) -> Option<u64> {
    let s = s.replace('_', "");
    match s.strip_prefix("0x").or_else(|| s.strip_prefix("0X")) {
        Some(h) => u64::from_str_radix(h, 16).ok(),
        None => s.parse().ok(),
    }
}

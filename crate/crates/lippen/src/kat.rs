//! Known-answer vectors: one per line, `kind k0 k1 pt ct`, 16 hex digits each.

use std::str::FromStr;

use lippen_core::{CipherKind, Key128};

use crate::hex::parse_u64;

/// The vectors shipped with the crate.
pub const BUILTIN: &str = include_str!("../data/kat.txt");

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct KatVector {
    pub kind: CipherKind,
    pub key: Key128,
    pub pt: u64,
    pub ct: u64,
}

#[derive(Clone, Debug, PartialEq, Eq, thiserror::Error)]
#[error("line {line}: {reason}")]
pub struct KatParseError {
    pub line: usize,
    pub reason: String,
}

impl KatParseError {
    pub fn code(&self) -> &'static str {
        "MALFORMED_KAT_FILE"
    }
}

pub fn parse(text: &str) -> Result<Vec<KatVector>, KatParseError> {
    let mut out = Vec::new();
    for (idx, raw) in text.lines().enumerate() {
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let err = |reason: String| KatParseError {
            line: idx + 1,
            reason,
        };
        let fields: Vec<&str> = line.split_whitespace().collect();
        let [kind, k0, k1, pt, ct] = fields[..] else {
            return Err(err(format!("expected 5 fields, found {}", fields.len())));
        };
        let kind = CipherKind::from_str(kind).map_err(|e| err(e.to_string()))?;
        let word = |name, s| parse_u64(name, s, true).map_err(|e| err(e.to_string()));
        out.push(KatVector {
            kind,
            key: Key128::new(word("k0", k0)?, word("k1", k1)?),
            pt: word("pt", pt)?,
            ct: word("ct", ct)?,
        });
    }
    Ok(out)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct KatResult {
    pub vector: KatVector,
    pub encrypted: u64,
    pub decrypted: u64,
}

impl KatResult {
    pub fn passed(&self) -> bool {
        self.encrypted == self.vector.ct && self.decrypted == self.vector.pt
    }
}

pub fn run(vectors: &[KatVector]) -> Vec<KatResult> {
    vectors
        .iter()
        .map(|v| KatResult {
            vector: *v,
            encrypted: v.kind.encrypt(v.key, v.pt),
            decrypted: v.kind.decrypt(v.key, v.ct),
        })
        .collect()
}

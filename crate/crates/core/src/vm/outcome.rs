use alloc::string::String;
use core::fmt;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Verdict {
    /// Ran to completion with every transfer going where the program intended.
    Benign,
    /// A check raised before any attacker-chosen address was reached.
    Detected,
    /// Control or a dereference reached an attacker-chosen address.
    Hijacked,
    /// A checked pointer led somewhere neither intended nor chosen by the
    /// attacker, e.g. a random word that happened to pass the check.
    Faulted,
}

impl Verdict {
    pub fn name(self) -> &'static str {
        match self {
            Verdict::Benign => "BENIGN",
            Verdict::Detected => "DETECTED",
            Verdict::Hijacked => "HIJACKED",
            Verdict::Faulted => "FAULTED",
        }
    }
}

impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Detail {
    /// Index of the deciding event; `None` when the run simply ended.
    pub event: Option<usize>,
    pub cause: String,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Outcome {
    pub verdict: Verdict,
    pub detail: Detail,
    /// Attempts spent in attacker guess loops.
    pub guess_count: u64,
}

/// A control transfer or dereference performed by the program.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Transfer {
    pub event: usize,
    pub kind: TransferKind,
    /// Where the program meant to go.
    pub expected: u64,
    /// Where it went after the check passed.
    pub actual: u64,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum TransferKind {
    Return,
    Deref,
}

/// A check that raised.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct CheckFailure {
    pub event: usize,
    pub code: &'static str,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct VmError {
    pub event: usize,
    pub reason: &'static str,
}

impl VmError {
    pub fn code(&self) -> &'static str {
        "MALFORMED_SCENARIO"
    }
}

impl fmt::Display for VmError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "malformed scenario at event {}: {}", self.event, self.reason)
    }
}

impl core::error::Error for VmError {}

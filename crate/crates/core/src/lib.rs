//! Full-pointer encryption for 64-bit pointers.
//!
//! A pointer is sealed by encrypting the whole 64-bit word with a PRINCE-family
//! block cipher. The context modifier is split in two: `m1` is XORed into the
//! pointer bits that never take part in address generation, `m2` is XORed into
//! the key. Unsealing decrypts and checks that those bits come back as zero.
//!
//! The crate is `no_std` (it needs `alloc` for the domain table and the
//! pointer simulator). File formats, experiments and the command line live in
//! the `lippen` crate.

#![no_std]

extern crate alloc;

pub mod avalanche;
pub mod cipher;
pub mod domain;
pub mod seal;
pub mod vm;

pub use cipher::{decrypt, encrypt, Block64, CipherKind, Key128};
pub use domain::{DomainError, DomainId, DomainKeyTable};
pub use seal::{
    ConfigError, Modifier, ModifierConfig, PacConfig, PacEngine, PacFailureMode, PlainPointer,
    SealEngine, SealError, SealedPointer,
};

//! File formats, security experiments and the command line for
//! [`lippen_core`].

pub mod bench;
pub mod cli;
pub mod harness;
pub mod hex;
pub mod kat;
pub mod scenario_file;

pub use lippen_core as core;

/// Seed used when neither `--seed` nor `LIPPEN_SEED` is given.
pub const DEFAULT_SEED: u64 = 1;

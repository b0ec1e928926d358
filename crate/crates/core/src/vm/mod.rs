//! A scripted pointer-lifecycle simulator.
//!
//! A scenario is a list of program events (calls, returns, pointer stores,
//! loads and dereferences) interleaved with attacker actions on memory. The
//! machine inserts protection at the same boundaries an instrumenting compiler
//! would: return addresses are protected on `CALL` and checked on `RET`, data
//! pointers on `STORE_PTR` and `LOAD_PTR`/`DEREF`. The run ends in a
//! [`Verdict`].
//!
//! Stack layout: the stack starts at [`STACK_TOP`] and grows down. A `CALL`
//! pushes the return address into the 16-byte slot below the current stack
//! pointer (at `sp + 8` after the push) and then reserves the frame. The
//! first call of a scenario therefore stores its return address at
//! `0x7fff0008`. The return site of the call at event `i` is
//! `CODE_BASE + 8 * (i + 1)`.

mod machine;
mod outcome;
mod policy;
mod protection;
mod scenario;

pub use machine::{run_scenario, Execution, ProcessState, CODE_BASE, DEFAULT_GUESS_TARGET, STACK_TOP};
pub use outcome::{CheckFailure, Detail, Outcome, Transfer, TransferKind, Verdict, VmError};
pub use policy::{DataModifier, InstrumentationPolicy, ReturnModifier, UnknownPolicy};
pub use protection::{GuessOutcome, LazyShuffle, Protection, Scheme, UnknownScheme};
pub use scenario::{Event, Scenario};

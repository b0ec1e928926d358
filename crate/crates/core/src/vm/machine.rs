use alloc::collections::{BTreeMap, BTreeSet};
use alloc::format;
use alloc::string::{String, ToString};
use alloc::vec::Vec;

use rand::{RngCore, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::cipher::Key128;
use crate::domain::{DomainId, DomainKeyTable};
use crate::seal::SealError;

use super::outcome::{CheckFailure, Detail, Outcome, Transfer, TransferKind, Verdict, VmError};
use super::policy::{DataModifier, InstrumentationPolicy, ReturnModifier};
use super::protection::{Protection, Scheme};
use super::scenario::{Event, Scenario};

pub const STACK_TOP: u64 = 0x7fff_0010;
pub const CODE_BASE: u64 = 0x40_0000;
/// Where a guess loop tries to send control when the scenario names no target.
pub const DEFAULT_GUESS_TARGET: u64 = 0x41_4140;

/// Observable state of the simulated process.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ProcessState {
    /// Raw words as stored, protected or not.
    pub memory: BTreeMap<u64, u64>,
    pub sp: u64,
    pub pc: String,
    pub domain: DomainId,
    pub scheme: Scheme,
}

#[derive(Clone, Debug)]
struct Frame {
    caller: String,
    saved_sp: u64,
    ret_slot: u64,
    return_site: u64,
    context: u64,
    pushed: u64,
}

/// What the instrumentation knows about a stored data pointer.
#[derive(Clone, Copy, Debug)]
struct SlotMeta {
    plain: u64,
    context: u64,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Execution {
    pub outcome: Outcome,
    pub transfers: Vec<Transfer>,
    pub check_failures: Vec<CheckFailure>,
    /// Every address the attacker wrote or pointed a forged pointer at.
    pub attacker_targets: BTreeSet<u64>,
    /// The program's view of memory: each word the program wrote, in
    /// plaintext, overlaid with raw attacker writes.
    pub plaintext_memory: BTreeMap<u64, u64>,
    pub state: ProcessState,
}

enum Step {
    Continue,
    Stop(Verdict, String),
}

struct Machine<'a> {
    protection: &'a Protection,
    policy: InstrumentationPolicy,
    rng: ChaCha8Rng,
    table: DomainKeyTable,
    domains: BTreeMap<u64, DomainId>,
    key: Key128,
    state: ProcessState,
    frames: Vec<Frame>,
    slots: BTreeMap<u64, SlotMeta>,
    plain: BTreeMap<u64, u64>,
    attacker_targets: BTreeSet<u64>,
    transfers: Vec<Transfer>,
    check_failures: Vec<CheckFailure>,
    guess_count: u64,
}

/// Run `scenario` to a verdict. Everything random (domain keys, location
/// tags, attacker guesses) is drawn from a generator seeded with `seed`.
pub fn run_scenario(
    scenario: &Scenario,
    protection: &Protection,
    policy: InstrumentationPolicy,
    seed: u64,
) -> Result<Execution, VmError> {
    let mut m = Machine::new(protection, policy, seed);
    for (i, event) in scenario.events.iter().enumerate() {
        if let Step::Stop(verdict, cause) = m.step(i, event)? {
            return Ok(m.finish(verdict, Some(i), cause));
        }
    }
    if !m.frames.is_empty() {
        return Err(VmError {
            event: scenario.events.len(),
            reason: "CALL without matching RET",
        });
    }
    Ok(m.finish(Verdict::Benign, None, "completed".to_string()))
}

impl<'a> Machine<'a> {
    fn new(protection: &'a Protection, policy: InstrumentationPolicy, seed: u64) -> Self {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut table = DomainKeyTable::new();
        table
            .set_m_size(*protection.seal_engine().config())
            .expect("protection config is validated");
        let (id, key) = table
            .create_domain(&mut rng)
            .expect("an empty table has room");
        let mut domains = BTreeMap::new();
        domains.insert(0, id);
        Machine {
            protection,
            policy,
            rng,
            table,
            domains,
            key,
            state: ProcessState {
                memory: BTreeMap::new(),
                sp: STACK_TOP,
                pc: "main".to_string(),
                domain: id,
                scheme: protection.scheme(),
            },
            frames: Vec::new(),
            slots: BTreeMap::new(),
            plain: BTreeMap::new(),
            attacker_targets: BTreeSet::new(),
            transfers: Vec::new(),
            check_failures: Vec::new(),
            guess_count: 0,
        }
    }

    fn finish(self, verdict: Verdict, event: Option<usize>, cause: String) -> Execution {
        Execution {
            outcome: Outcome {
                verdict,
                detail: Detail { event, cause },
                guess_count: self.guess_count,
            },
            transfers: self.transfers,
            check_failures: self.check_failures,
            attacker_targets: self.attacker_targets,
            plaintext_memory: self.plain,
            state: self.state,
        }
    }

    fn load(&self, addr: u64) -> u64 {
        self.state.memory.get(&addr).copied().unwrap_or(0)
    }

    fn program_store(&mut self, addr: u64, raw: u64, plain: u64) {
        self.state.memory.insert(addr, raw);
        self.plain.insert(addr, plain);
    }

    fn attacker_store(&mut self, addr: u64, raw: u64) {
        self.state.memory.insert(addr, raw);
        self.plain.insert(addr, raw);
    }

    fn return_context(&self, sp: u64) -> u64 {
        match self.policy.return_modifier {
            ReturnModifier::StackPointer => sp,
            ReturnModifier::Zero => 0,
            ReturnModifier::ChainedPreviousReturn => self.frames.last().map_or(0, |f| f.pushed),
        }
    }

    fn data_context(&mut self, slot: u64, type_id: u64) -> u64 {
        match self.policy.data_modifier {
            DataModifier::Zero => 0,
            DataModifier::TypeId => type_id,
            DataModifier::LocationPlusTag => slot ^ (self.rng.next_u64() & 0xffff) << 48,
        }
    }

    /// The context the program will check the word at `addr` against.
    fn slot_context(&self, addr: u64) -> Option<u64> {
        self.frames
            .iter()
            .rev()
            .find(|f| f.ret_slot == addr)
            .map(|f| f.context)
            .or_else(|| self.slots.get(&addr).map(|s| s.context))
    }

    fn check(&mut self, event: usize, word: u64, context: u64) -> Result<u64, SealError> {
        let r = self.protection.check(self.key, word, context);
        if let Err(e) = &r {
            self.check_failures.push(CheckFailure {
                event,
                code: e.code(),
            });
        }
        r
    }

    fn transfer(&mut self, event: usize, kind: TransferKind, expected: u64, actual: u64) -> Step {
        self.transfers.push(Transfer {
            event,
            kind,
            expected,
            actual,
        });
        let what = match kind {
            TransferKind::Return => "return",
            TransferKind::Deref => "dereference",
        };
        if actual == expected {
            Step::Continue
        } else if self.attacker_targets.contains(&actual) {
            Step::Stop(
                Verdict::Hijacked,
                format!("{what} reached attacker-chosen {actual:#x}"),
            )
        } else {
            Step::Stop(
                Verdict::Faulted,
                format!("{what} reached unintended {actual:#x} (expected {expected:#x})"),
            )
        }
    }

    fn detected(e: SealError, what: &str) -> Step {
        Step::Stop(Verdict::Detected, format!("{} on {what}", e.code()))
    }

    fn step(&mut self, i: usize, event: &Event) -> Result<Step, VmError> {
        let malformed = |reason| VmError { event: i, reason };
        match event {
            Event::Call { target, frame_size } => {
                let sp = self
                    .state
                    .sp
                    .checked_sub(16)
                    .ok_or(malformed("stack overflow"))?;
                let context = self.return_context(sp);
                let site = CODE_BASE + 8 * (i as u64 + 1);
                let pushed = self
                    .protection
                    .protect(self.key, site, context)
                    .map_err(|_| malformed("return site not canonical"))?;
                let ret_slot = sp + 8;
                self.program_store(ret_slot, pushed, site);
                self.frames.push(Frame {
                    caller: core::mem::replace(&mut self.state.pc, target.clone()),
                    saved_sp: self.state.sp,
                    ret_slot,
                    return_site: site,
                    context,
                    pushed,
                });
                let frame = frame_size
                    .checked_add(15)
                    .map(|f| f & !15)
                    .ok_or(malformed("frame too large"))?;
                self.state.sp = sp.checked_sub(frame).ok_or(malformed("stack overflow"))?;
                Ok(Step::Continue)
            }
            Event::Ret => {
                let frame = self.frames.pop().ok_or(malformed("RET without CALL"))?;
                let word = self.load(frame.ret_slot);
                let actual = match self.check(i, word, frame.context) {
                    Ok(a) => a,
                    Err(e) => return Ok(Self::detected(e, "return address")),
                };
                self.state.sp = frame.saved_sp;
                self.state.pc = frame.caller;
                Ok(self.transfer(i, TransferKind::Return, frame.return_site, actual))
            }
            Event::StorePtr {
                slot,
                target,
                type_id,
            } => {
                let context = self.data_context(*slot, *type_id);
                let word = self
                    .protection
                    .protect(self.key, *target, context)
                    .map_err(|_| malformed("stored pointer not canonical"))?;
                self.program_store(*slot, word, *target);
                self.slots.insert(
                    *slot,
                    SlotMeta {
                        plain: *target,
                        context,
                    },
                );
                Ok(Step::Continue)
            }
            Event::LoadPtr { slot } | Event::Deref { slot } => {
                let meta = *self
                    .slots
                    .get(slot)
                    .ok_or(malformed("no pointer stored at slot"))?;
                let word = self.load(*slot);
                let actual = match self.check(i, word, meta.context) {
                    Ok(a) => a,
                    Err(e) => return Ok(Self::detected(e, "data pointer")),
                };
                if matches!(event, Event::Deref { .. }) {
                    Ok(self.transfer(i, TransferKind::Deref, meta.plain, actual))
                } else {
                    Ok(Step::Continue)
                }
            }
            Event::AttackerWrite { addr, value } => {
                self.attacker_targets.insert(*value);
                self.attacker_store(*addr, *value);
                Ok(Step::Continue)
            }
            Event::AttackerCopy { src, dst } => {
                let raw = self.load(*src);
                self.attacker_targets.insert(raw);
                if let Some(p) = self.plain.get(src) {
                    self.attacker_targets.insert(*p);
                }
                self.attacker_store(*dst, raw);
                Ok(Step::Continue)
            }
            Event::AttackerFlip { addr, mask } => {
                let raw = self.load(*addr) ^ mask;
                self.attacker_targets.insert(raw);
                if let Some(p) = self.plain.get(addr) {
                    self.attacker_targets.insert(p ^ mask);
                }
                self.attacker_store(*addr, raw);
                Ok(Step::Continue)
            }
            Event::AttackerGuessLoop {
                slot,
                max_guesses,
                target,
            } => {
                let context = self
                    .slot_context(*slot)
                    .ok_or(malformed("guess loop on a slot holding no pointer"))?;
                let target = target.unwrap_or(DEFAULT_GUESS_TARGET);
                self.attacker_targets.insert(target);
                let g = self
                    .protection
                    .forge(self.key, context, target, *max_guesses, &mut self.rng);
                self.guess_count += g.guesses;
                match g.forged {
                    Some(word) => {
                        self.attacker_store(*slot, word);
                        Ok(Step::Continue)
                    }
                    None => Ok(Step::Stop(
                        Verdict::Detected,
                        format!("every one of {} forged pointers failed its check", g.guesses),
                    )),
                }
            }
            Event::SwitchDomain { id } => {
                let did = match self.domains.get(id) {
                    Some(d) => *d,
                    None => {
                        let (d, _) = self
                            .table
                            .create_domain(&mut self.rng)
                            .map_err(|_| malformed("no domain key available"))?;
                        self.domains.insert(*id, d);
                        d
                    }
                };
                self.key = self.table.key(did).expect("domain is live");
                self.state.domain = did;
                Ok(Step::Continue)
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::vec;

    fn call(frame: u64) -> Event {
        Event::Call {
            target: "f".into(),
            frame_size: frame,
        }
    }

    fn smash() -> Scenario {
        Scenario::new(vec![
            call(64),
            Event::AttackerWrite {
                addr: 0x7fff_0008,
                value: 0x40_1234,
            },
            Event::Ret,
        ])
    }

    fn replay() -> Scenario {
        Scenario::new(vec![
            call(32),
            call(48),
            Event::AttackerCopy {
                src: 0x7fff_0008,
                dst: 0x7ffe_ffd8,
            },
            Event::Ret,
            Event::Ret,
        ])
    }

    fn run(s: &Scenario, scheme: Scheme, policy: InstrumentationPolicy, seed: u64) -> Execution {
        run_scenario(s, &Protection::with_defaults(scheme), policy, seed).unwrap()
    }

    #[test]
    fn empty_scenario_is_benign() {
        for scheme in Scheme::ALL {
            let e = run(&Scenario::default(), scheme, InstrumentationPolicy::PARTS, 0);
            assert_eq!(e.outcome.verdict, Verdict::Benign);
        }
    }

    #[test]
    fn first_return_slot_sits_where_the_scenarios_expect() {
        let p = Protection::with_defaults(Scheme::None);
        let mut m = Machine::new(&p, InstrumentationPolicy::PARTS, 0);
        assert!(matches!(m.step(0, &call(64)), Ok(Step::Continue)));
        assert!(matches!(m.step(1, &call(16)), Ok(Step::Continue)));
        assert_eq!(m.frames[0].ret_slot, 0x7fff_0008);
        assert_eq!(m.frames[1].ret_slot, 0x7ffe_ffb8);
        assert_eq!(m.load(0x7fff_0008), CODE_BASE + 8);
        assert_eq!(m.state.sp % 16, 0);
    }

    #[test]
    fn stack_smash_verdicts() {
        assert_eq!(
            run(&smash(), Scheme::None, InstrumentationPolicy::PARTS, 1).outcome.verdict,
            Verdict::Hijacked
        );
        for scheme in [Scheme::Pac, Scheme::Lippen] {
            let e = run(&smash(), scheme, InstrumentationPolicy::PARTS, 1);
            assert_eq!(e.outcome.verdict, Verdict::Detected);
            assert_eq!(e.outcome.detail.event, Some(2));
            assert_eq!(e.check_failures.len(), 1);
        }
    }

    #[test]
    fn replay_needs_a_context_dependent_return_modifier() {
        for scheme in [Scheme::Pac, Scheme::Lippen] {
            let zero = run(&replay(), scheme, InstrumentationPolicy::ZERO, 5);
            assert_eq!(zero.outcome.verdict, Verdict::Hijacked, "{scheme}");
            for p in [InstrumentationPolicy::PARTS, InstrumentationPolicy::PACSTACK] {
                let e = run(&replay(), scheme, p, 5);
                assert_eq!(e.outcome.verdict, Verdict::Detected, "{scheme} {p}");
            }
        }
    }

    #[test]
    fn hijack_goes_exactly_to_an_attacker_target() {
        let e = run(&smash(), Scheme::None, InstrumentationPolicy::PARTS, 1);
        let t = e.transfers.last().unwrap();
        assert_eq!(t.actual, 0x40_1234);
        assert!(e.attacker_targets.contains(&t.actual));
    }

    #[test]
    fn data_pointer_lifecycle_is_transparent() {
        let s = Scenario::new(vec![
            call(64),
            Event::StorePtr {
                slot: 0x7ffe_ffc0,
                target: 0x60_1000,
                type_id: 7,
            },
            Event::LoadPtr { slot: 0x7ffe_ffc0 },
            Event::Deref { slot: 0x7ffe_ffc0 },
            Event::SwitchDomain { id: 0 },
            Event::Ret,
        ]);
        let runs: Vec<_> = Scheme::ALL
            .iter()
            .map(|&sc| run(&s, sc, InstrumentationPolicy::PACTIGHT, 3))
            .collect();
        for r in &runs {
            assert_eq!(r.outcome.verdict, Verdict::Benign);
            assert_eq!(r.plaintext_memory, runs[0].plaintext_memory);
        }
        assert_ne!(runs[0].state.memory, runs[2].state.memory);
    }

    #[test]
    fn swapped_data_pointers_are_caught_by_type_ids() {
        let s = Scenario::new(vec![
            Event::StorePtr { slot: 0x1000, target: 0x60_1000, type_id: 1 },
            Event::StorePtr { slot: 0x1008, target: 0x60_2000, type_id: 2 },
            Event::AttackerCopy { src: 0x1008, dst: 0x1000 },
            Event::Deref { slot: 0x1000 },
        ]);
        assert_eq!(
            run(&s, Scheme::Lippen, InstrumentationPolicy::PARTS, 0).outcome.verdict,
            Verdict::Detected
        );
        assert_eq!(
            run(&s, Scheme::Lippen, InstrumentationPolicy::ZERO, 0).outcome.verdict,
            Verdict::Hijacked
        );
    }

    #[test]
    fn domain_switch_invalidates_pointers() {
        let s = Scenario::new(vec![
            Event::StorePtr { slot: 0x1000, target: 0x60_1000, type_id: 1 },
            Event::SwitchDomain { id: 1 },
            Event::Deref { slot: 0x1000 },
        ]);
        let e = run(&s, Scheme::Lippen, InstrumentationPolicy::PARTS, 0);
        assert_eq!(e.outcome.verdict, Verdict::Detected);
        assert_ne!(e.state.domain, DomainId(1));
    }

    #[test]
    fn guess_loop_breaks_small_pacs_only() {
        let s = Scenario::new(vec![
            call(16),
            Event::AttackerGuessLoop { slot: 0x7fff_0008, max_guesses: 1 << 16, target: None },
            Event::Ret,
        ]);
        let pac = run(&s, Scheme::Pac, InstrumentationPolicy::PARTS, 9);
        assert_eq!(pac.outcome.verdict, Verdict::Hijacked);
        assert!((1..=1 << 16).contains(&pac.outcome.guess_count));
        assert_eq!(pac.transfers[0].actual, DEFAULT_GUESS_TARGET);
        let lippen = run(&s, Scheme::Lippen, InstrumentationPolicy::PARTS, 9);
        assert_eq!(lippen.outcome.verdict, Verdict::Detected);
        assert_eq!(lippen.outcome.guess_count, 1 << 16);
    }

    #[test]
    fn runs_are_deterministic_per_seed() {
        let s = Scenario::new(vec![
            call(16),
            Event::AttackerGuessLoop { slot: 0x7fff_0008, max_guesses: 1 << 16, target: None },
            Event::Ret,
        ]);
        let a = run(&s, Scheme::Pac, InstrumentationPolicy::PACTIGHT, 4);
        assert_eq!(a, run(&s, Scheme::Pac, InstrumentationPolicy::PACTIGHT, 4));
    }

    #[test]
    fn malformed_scenarios_are_errors() {
        let p = Protection::with_defaults(Scheme::Lippen);
        for events in [
            vec![Event::Ret],
            vec![call(8)],
            vec![Event::Deref { slot: 0x10 }],
            vec![Event::AttackerGuessLoop { slot: 0x10, max_guesses: 1, target: None }],
            vec![Event::StorePtr { slot: 0, target: 1 << 60, type_id: 0 }],
        ] {
            let err = run_scenario(&Scenario::new(events), &p, InstrumentationPolicy::PARTS, 0)
                .unwrap_err();
            assert_eq!(err.code(), "MALFORMED_SCENARIO");
        }
    }
}

use alloc::string::String;
use alloc::vec::Vec;

/// One step of a scripted pointer lifecycle.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Event {
    /// Call `target`, reserving `frame_size` bytes of locals (rounded up to 16).
    Call { target: String, frame_size: u64 },
    Ret,
    /// Protect `target` and store it at `slot`.
    StorePtr { slot: u64, target: u64, type_id: u64 },
    /// Load and check the pointer at `slot`.
    LoadPtr { slot: u64 },
    /// Load, check and dereference the pointer at `slot`.
    Deref { slot: u64 },
    AttackerWrite { addr: u64, value: u64 },
    AttackerCopy { src: u64, dst: u64 },
    AttackerFlip { addr: u64, mask: u64 },
    /// Repeatedly forge the pointer at `slot` until it checks out as `target`
    /// (a built-in default when `None`) or `max_guesses` attempts fail.
    AttackerGuessLoop { slot: u64, max_guesses: u64, target: Option<u64> },
    SwitchDomain { id: u64 },
}

impl Event {
    pub fn is_attacker(&self) -> bool {
        matches!(
            self,
            Event::AttackerWrite { .. }
                | Event::AttackerCopy { .. }
                | Event::AttackerFlip { .. }
                | Event::AttackerGuessLoop { .. }
        )
    }
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Scenario {
    pub events: Vec<Event>,
}

impl Scenario {
    pub fn new(events: Vec<Event>) -> Self {
        Scenario { events }
    }

    pub fn has_attacker(&self) -> bool {
        self.events.iter().any(Event::is_attacker)
    }
}

impl FromIterator<Event> for Scenario {
    fn from_iter<I: IntoIterator<Item = Event>>(iter: I) -> Self {
        Scenario::new(iter.into_iter().collect())
    }
}

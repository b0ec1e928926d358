//! Line-oriented scenario files.
//!
//! ```text
//! # comments start with '#'
//! CALL f1 64
//! STORE_PTR 0x7ffeffc0 0x601000 7
//! ATTACKER_WRITE 0x7fff0008 0x0000000000401234
//! RET
//! ```
//!
//! Numbers are decimal or `0x` hex. Keywords are case-insensitive.

use lippen_core::vm::{Event, Scenario};

use crate::hex::parse_number;

#[derive(Clone, Debug, PartialEq, Eq, thiserror::Error)]
#[error("line {line}: {reason}")]
pub struct ScenarioParseError {
    pub line: usize,
    pub reason: String,
}

impl ScenarioParseError {
    pub fn code(&self) -> &'static str {
        "MALFORMED_SCENARIO"
    }
}

pub fn parse(text: &str) -> Result<Scenario, ScenarioParseError> {
    let mut events = Vec::new();
    for (idx, raw) in text.lines().enumerate() {
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        events.push(parse_line(line).map_err(|reason| ScenarioParseError {
            line: idx + 1,
            reason,
        })?);
    }
    Ok(Scenario::new(events))
}

fn parse_line(line: &str) -> Result<Event, String> {
    let mut words = line.split_whitespace();
    let op = words.next().unwrap_or_default().to_ascii_uppercase();
    let args: Vec<&str> = words.collect();
    let num = |i: usize, name: &str| -> Result<u64, String> {
        let s = args.get(i).ok_or_else(|| format!("{op}: missing {name}"))?;
        parse_number(s).ok_or_else(|| format!("{op}: {name} {s:?} is not a number"))
    };
    let arity = |min: usize, max: usize| -> Result<(), String> {
        if (min..=max).contains(&args.len()) {
            Ok(())
        } else if min == max {
            Err(format!("{op} takes {min} arguments, got {}", args.len()))
        } else {
            Err(format!("{op} takes {min} to {max} arguments, got {}", args.len()))
        }
    };
    let event = match op.as_str() {
        "CALL" => {
            arity(1, 2)?;
            Event::Call {
                target: args[0].to_string(),
                frame_size: if args.len() == 2 { num(1, "frame size")? } else { 0 },
            }
        }
        "RET" => {
            arity(0, 0)?;
            Event::Ret
        }
        "STORE_PTR" => {
            arity(2, 3)?;
            Event::StorePtr {
                slot: num(0, "slot")?,
                target: num(1, "target")?,
                type_id: if args.len() == 3 { num(2, "type id")? } else { 0 },
            }
        }
        "LOAD_PTR" => {
            arity(1, 1)?;
            Event::LoadPtr { slot: num(0, "slot")? }
        }
        "DEREF" => {
            arity(1, 1)?;
            Event::Deref { slot: num(0, "slot")? }
        }
        "ATTACKER_WRITE" => {
            arity(2, 2)?;
            Event::AttackerWrite {
                addr: num(0, "address")?,
                value: num(1, "value")?,
            }
        }
        "ATTACKER_COPY" => {
            arity(2, 2)?;
            Event::AttackerCopy {
                src: num(0, "source")?,
                dst: num(1, "destination")?,
            }
        }
        "ATTACKER_FLIP" => {
            arity(2, 2)?;
            Event::AttackerFlip {
                addr: num(0, "address")?,
                mask: num(1, "mask")?,
            }
        }
        "ATTACKER_GUESS_LOOP" => {
            arity(2, 3)?;
            Event::AttackerGuessLoop {
                slot: num(0, "slot")?,
                max_guesses: num(1, "max guesses")?,
                target: if args.len() == 3 { Some(num(2, "target")?) } else { None },
            }
        }
        "SWITCH_DOMAIN" => {
            arity(1, 1)?;
            Event::SwitchDomain { id: num(0, "domain id")? }
        }
        _ => return Err(format!("unknown event {op:?}")),
    };
    Ok(event)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_every_event() {
        let s = parse(
            "# demo\n\
             CALL f1 64\n\
             store_ptr 0x7ffeffc0 0x601000 7\n\
             LOAD_PTR 0x7ffeffc0\n\
             DEREF 0x7ffeffc0   # use it\n\
             ATTACKER_WRITE 0x7fff0008 0x0000000000401234\n\
             ATTACKER_COPY 0x10 0x18\n\
             ATTACKER_FLIP 0x10 0x1\n\
             ATTACKER_GUESS_LOOP 0x7fff0008 65536\n\
             ATTACKER_GUESS_LOOP 0x7fff0008 10 0x414140\n\
             SWITCH_DOMAIN 2\n\
             \n\
             RET\n",
        )
        .unwrap();
        assert_eq!(s.events.len(), 11);
        assert_eq!(
            s.events[0],
            Event::Call {
                target: "f1".into(),
                frame_size: 64
            }
        );
        assert_eq!(
            s.events[4],
            Event::AttackerWrite {
                addr: 0x7fff_0008,
                value: 0x40_1234
            }
        );
        assert_eq!(
            s.events[7],
            Event::AttackerGuessLoop {
                slot: 0x7fff_0008,
                max_guesses: 65536,
                target: None
            }
        );
        assert_eq!(s.events[10], Event::Ret);
    }

    #[test]
    fn errors_carry_line_numbers() {
        let e = parse("CALL f 16\nJUMP 0x10\n").unwrap_err();
        assert_eq!((e.line, e.code()), (2, "MALFORMED_SCENARIO"));
        assert!(parse("RET 1").is_err());
        assert!(parse("ATTACKER_WRITE 0x10").is_err());
        assert!(parse("DEREF zz").is_err());
    }

    #[test]
    fn empty_file_is_empty_scenario() {
        assert!(parse("# nothing\n\n").unwrap().events.is_empty());
    }
}

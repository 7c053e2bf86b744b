//! Event symbols shared by every automaton in the pipeline.
//!
//! There are four kinds of events: plain plant events, their `#` copies
//! (the sensor attacker's tampered messages), control commands (the set of
//! plant events a supervisor enables), and the `stop` event that closes a
//! round of sensor attack. Identity is structural: two commands are the same
//! event iff they enable the same set of plain events.

use alloc::collections::BTreeSet;
use alloc::sync::Arc;
use alloc::vec::Vec;
use core::fmt;

/// Interned-ish event name. Cheap to clone and shareable across threads.
pub type Name = Arc<str>;

/// A set of events in canonical order.
pub type EventSet = BTreeSet<Event>;

/// Reserved token for the end-of-attack-round event.
pub const STOP_TOKEN: &str = "stop";

#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub enum Event {
    /// A plant event.
    Plain(Name),
    /// The tampered copy `σ#` of a compromised plant event.
    Relabeled(Name),
    /// A control command: the set of plain events it enables.
    Command(Command),
    Stop,
}

/// The enabled set of a control command, kept sorted and duplicate free.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub struct Command(Arc<[Name]>);

impl Command {
    pub fn new<I, S>(members: I) -> Self
    where
        I: IntoIterator<Item = S>,
        S: Into<Name>,
    {
        let set: BTreeSet<Name> = members.into_iter().map(Into::into).collect();
        Command(set.into_iter().collect::<Vec<_>>().into())
    }

    pub fn members(&self) -> &[Name] {
        &self.0
    }

    pub fn contains(&self, name: &str) -> bool {
        self.0.binary_search_by(|m| (**m).cmp(name)).is_ok()
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }
}

impl Event {
    pub fn plain(name: impl Into<Name>) -> Self {
        Event::Plain(name.into())
    }

    pub fn relabeled(name: impl Into<Name>) -> Self {
        Event::Relabeled(name.into())
    }

    pub fn command<I, S>(members: I) -> Self
    where
        I: IntoIterator<Item = S>,
        S: Into<Name>,
    {
        Event::Command(Command::new(members))
    }

    pub fn is_plain(&self) -> bool {
        matches!(self, Event::Plain(_))
    }

    pub fn is_relabeled(&self) -> bool {
        matches!(self, Event::Relabeled(_))
    }

    pub fn is_command(&self) -> bool {
        matches!(self, Event::Command(_))
    }

    pub fn as_command(&self) -> Option<&Command> {
        match self {
            Event::Command(c) => Some(c),
            _ => None,
        }
    }

    /// Name of the plain event a plain or relabeled event refers to.
    pub fn base_name(&self) -> Option<&Name> {
        match self {
            Event::Plain(n) | Event::Relabeled(n) => Some(n),
            _ => None,
        }
    }

    /// `σ` ↦ `σ#`; other kinds are returned unchanged.
    pub fn to_relabeled(&self) -> Event {
        match self {
            Event::Plain(n) => Event::Relabeled(n.clone()),
            other => other.clone(),
        }
    }
}

impl fmt::Display for Event {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Event::Plain(n) => f.write_str(n),
            Event::Relabeled(n) => write!(f, "{n}#"),
            Event::Command(c) => fmt::Display::fmt(c, f),
            Event::Stop => f.write_str(STOP_TOKEN),
        }
    }
}

impl fmt::Display for Command {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("cmd{")?;
        for (i, m) in self.0.iter().enumerate() {
            if i > 0 {
                f.write_str(",")?;
            }
            f.write_str(m)?;
        }
        f.write_str("}")
    }
}

/// Plain event names: ASCII alphanumerics plus `_`, `-` and `.`; `stop`
/// and `cmd` are reserved.
pub fn is_valid_name(name: &str) -> bool {
    !name.is_empty()
        && name != STOP_TOKEN
        && name != "cmd"
        && name
            .bytes()
            .all(|b| b.is_ascii_alphanumeric() || matches!(b, b'_' | b'-' | b'.'))
}

//! Synthesis of covert sensor-actuator attackers against unknown supervisors
//! of discrete-event plants.
//!
//! The crate is `no_std` (it needs `alloc`). File formats and the command
//! line front-end live in the companion `covsynth` crate.

#![no_std]

extern crate alloc;
#[cfg(test)]
extern crate std;

pub mod event;
pub mod fsa;

pub use event::{Command, Event, EventSet};
pub use fsa::{Alphabet, Automaton, Builder, FsaError, Label, StateId};
pub mod attack;
pub mod sample;
pub mod scenario;
pub mod synthesis;
pub mod verify;
pub mod water_tank;

pub use attack::Context;
pub use scenario::{EventSpec, Scenario};
pub use synthesis::{synthesize, ControlConstraint, SynthesisReport};

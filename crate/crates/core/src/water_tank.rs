//! The water tank running example, built in code.
//!
//! The level sensors report `L` (low) and `H` (high); the valve commands are
//! `close` and `open`. Closing the valve when the tank is already high, or
//! opening it when low, drives the tank into a damage state (`dmg_EH`,
//! `dmg_EL`). Every event is observable, the valve events are controllable
//! and attackable, and all sensor events are compromised.

use alloc::vec;
use alloc::vec::Vec;

use crate::event::Event;
use crate::fsa::{Alphabet, Automaton, Builder};
use crate::scenario::{EventSpec, Scenario};

pub const SENSORS: [&str; 4] = ["EH", "EL", "H", "L"];
pub const VALVES: [&str; 2] = ["close", "open"];

pub fn events() -> Vec<EventSpec> {
    let mut v: Vec<EventSpec> = SENSORS
        .iter()
        .map(|n| EventSpec::new(n, true, false).compromised())
        .collect();
    v.extend(VALVES.iter().map(|n| EventSpec::new(n, true, true).attackable()));
    v
}

fn ev(n: &str) -> Event {
    Event::plain(n)
}

fn all_events() -> Alphabet {
    Alphabet::new(SENSORS.iter().chain(VALVES.iter()).map(|n| ev(n)))
}

pub fn plant() -> Automaton {
    let mut b = Builder::new(all_events());
    let normal = b.add_state("normal", false);
    let low = b.add_state("low", false);
    let high = b.add_state("high", false);
    let dmg_el = b.add_state("dmg_EL", true);
    let dmg_eh = b.add_state("dmg_EH", true);
    let t = [
        (normal, "L", low),
        (normal, "H", high),
        (low, "close", normal),
        (low, "open", dmg_el),
        (high, "open", normal),
        (high, "close", dmg_eh),
    ];
    for (s, e, d) in t {
        b.add_edge(s, &ev(e), d).expect("fixture is deterministic");
    }
    b.build(normal).expect("fixture is valid")
}

/// A safe supervisor: after `L` only `close` is enabled, after `H` only
/// `open`, and the sensor events are always enabled.
pub fn supervisor() -> Automaton {
    let mut b = Builder::new(all_events());
    let s0 = b.add_state("s0", true);
    let s1 = b.add_state("s1", true);
    let s2 = b.add_state("s2", true);
    for s in [s0, s1, s2] {
        b.add_edge(s, &ev("L"), s1).unwrap();
        b.add_edge(s, &ev("H"), s2).unwrap();
        b.add_edge(s, &ev("EL"), s0).unwrap();
        b.add_edge(s, &ev("EH"), s0).unwrap();
    }
    b.add_edge(s1, &ev("close"), s0).unwrap();
    b.add_edge(s2, &ev("open"), s0).unwrap();
    b.build(s0).unwrap()
}

pub fn observations() -> Vec<Vec<Event>> {
    vec![
        ["L", "close", "H", "open"].iter().map(|n| ev(n)).collect(),
        ["H", "open", "L", "close"].iter().map(|n| ev(n)).collect(),
    ]
}

pub fn scenario() -> Scenario {
    let g = plant();
    let damage = [g.find_state("dmg_EL").unwrap(), g.find_state("dmg_EH").unwrap()];
    Scenario::new(events(), g, damage, observations()).expect("fixture is valid")
}

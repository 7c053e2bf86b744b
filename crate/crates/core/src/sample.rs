//! Seeded generators of small random plants and scenarios for property
//! tests and the acceptance suite.

use alloc::format;
use alloc::vec;
use alloc::vec::Vec;

use rand::seq::SliceRandom;
use rand::Rng;
use rand_chacha::ChaCha8Rng;

use crate::attack::{build_bt, build_ce, Context};
use crate::event::{Event, EventSet};
use crate::fsa::{sync_product, Alphabet, Automaton, Builder, Label};
use crate::scenario::{EventSpec, Scenario};
use crate::synthesis::ControlConstraint;
use crate::verify::enumerate_consistent_supervisors;

pub use rand::SeedableRng;
pub type Rng64 = ChaCha8Rng;

pub fn rng(seed: u64) -> Rng64 {
    ChaCha8Rng::seed_from_u64(seed)
}

/// A plant with a bad-state set and a control constraint, for checking the
/// synthesis engine.
#[derive(Debug, Clone)]
pub struct EngineInstance {
    pub plant: Automaton,
    pub bad: Vec<bool>,
    pub constraint: ControlConstraint,
}

/// Random instance with at most `max_states` states, `max_events` events
/// and `max_unobservable` unobservable events; controllable events are
/// always observable.
pub fn engine_instance(
    rng: &mut Rng64,
    max_states: usize,
    max_events: usize,
    max_unobservable: usize,
) -> EngineInstance {
    let n = rng.gen_range(2..=max_states);
    let k = rng.gen_range(2..=max_events);
    let events: Vec<Event> = (0..k).map(|i| Event::plain(format!("e{i}"))).collect();
    let n_uo = rng.gen_range(0..=max_unobservable.min(k - 1));
    let mut order: Vec<usize> = (0..k).collect();
    order.shuffle(rng);
    let mut observable = EventSet::new();
    let mut controllable = EventSet::new();
    for (rank, &i) in order.iter().enumerate() {
        if rank >= n_uo {
            observable.insert(events[i].clone());
            if rng.gen_bool(0.5) {
                controllable.insert(events[i].clone());
            }
        }
    }
    let mut b = Builder::new(Alphabet::new(events.iter().cloned()));
    for q in 0..n {
        b.add_state(Label::name(format!("q{q}")), rng.gen_bool(0.4));
    }
    for q in 0..n as u32 {
        for e in &events {
            if rng.gen_bool(0.45) {
                let d = rng.gen_range(0..n as u32);
                b.add_edge(q, e, d).expect("one edge per event");
            }
        }
    }
    let plant = b.build(0).expect("state 0 exists");
    let bad = (0..n).map(|q| q != 0 && rng.gen_bool(0.25)).collect();
    EngineInstance {
        plant,
        bad,
        constraint: ControlConstraint {
            controllable,
            observable,
        },
    }
}

/// Knobs for random scenarios.
#[derive(Debug, Clone, Copy)]
pub struct ScenarioShape {
    pub events: (usize, usize),
    pub states: (usize, usize),
    pub max_controllable: usize,
    pub max_unobservable: usize,
    pub observation_len: usize,
    pub observations: usize,
}

impl Default for ScenarioShape {
    fn default() -> Self {
        ScenarioShape {
            events: (3, 4),
            states: (3, 5),
            max_controllable: 2,
            max_unobservable: 1,
            observation_len: 4,
            observations: 2,
        }
    }
}

/// A random scenario whose observations were produced by a safe supervisor,
/// so at least one consistent safe supervisor exists. `None` if the drawn
/// plant admits no safe supervisor.
pub fn scenario(rng: &mut Rng64, shape: ScenarioShape) -> Option<Scenario> {
    let k = rng.gen_range(shape.events.0..=shape.events.1);
    let n_c = rng.gen_range(1..=shape.max_controllable.min(k - 1));
    let n_uo = rng.gen_range(0..=shape.max_unobservable.min(k - n_c - 1));
    let mut specs = Vec::new();
    for i in 0..k {
        let name = format!("e{i}");
        let controllable = i < n_c;
        let observable = i < k - n_uo;
        let mut s = EventSpec::new(&name, observable, controllable);
        s.compromised = observable && rng.gen_bool(0.5);
        s.attackable = controllable && rng.gen_bool(0.6);
        specs.push(s);
    }
    let events: Vec<Event> = specs.iter().map(EventSpec::event).collect();
    let n = rng.gen_range(shape.states.0..=shape.states.1);
    let n_dmg = rng.gen_range(1..=2);
    let mut b = Builder::new(Alphabet::new(events.iter().cloned()));
    for q in 0..n {
        b.add_state(Label::name(format!("p{q}")), false);
    }
    for q in 0..n_dmg {
        b.add_state(Label::name(format!("d{q}")), false);
    }
    let total = (n + n_dmg) as u32;
    for q in 0..n as u32 {
        for e in &events {
            if rng.gen_bool(0.5) {
                let d = if rng.gen_bool(0.2) {
                    rng.gen_range(n as u32..total)
                } else {
                    rng.gen_range(0..n as u32)
                };
                b.add_edge(q, e, d).expect("one edge per event");
            }
        }
    }
    let plant = b.build(0).expect("state 0 exists");
    let damage: Vec<u32> = (n as u32..total).collect();
    let bare = Scenario::new(specs.clone(), plant.clone(), damage.clone(), Vec::new()).ok()?;
    let ctx = Context::new(bare).ok()?;
    let seed = rng.gen();
    let sample = enumerate_consistent_supervisors(&ctx, 3, 4, seed).ok()?;
    let s = sample.supervisors.choose(rng)?;
    let observations = walk_observations(&ctx, s, rng, shape);
    Scenario::new(specs, plant, damage, observations).ok()
}

/// Random observed strings of the unattacked closed loop under `s`.
fn walk_observations(ctx: &Context, s: &Automaton, rng: &mut Rng64, shape: ScenarioShape) -> Vec<Vec<Event>> {
    let ce = build_ce(ctx).expect("valid context");
    let bt = build_bt(ctx, s).expect("valid supervisor");
    let g = ctx.plant().fully_marked();
    let closed = sync_product(&[&g, &ce, &bt.automaton]).expect("non-empty product");
    let mut out = Vec::new();
    for _ in 0..shape.observations {
        let mut q = closed.initial();
        let mut w = Vec::new();
        for _ in 0..shape.observation_len * 4 {
            let moves: Vec<(Event, u32)> = closed.edges(q).map(|(e, d)| (e.clone(), d)).collect();
            let Some((e, d)) = moves.choose(rng).cloned() else {
                break;
            };
            if ctx.sigma_o.contains(&e) {
                w.push(e);
            }
            q = d;
            if w.len() >= shape.observation_len || rng.gen_bool(0.08) {
                break;
            }
        }
        out.push(w);
    }
    out
}

/// Ordered list of `count` seeds after `start`, for reproducible sweeps.
pub fn seeds(start: u64, count: usize) -> Vec<u64> {
    (0..count as u64)
        .map(|i| start.wrapping_mul(6364136223846793005).wrapping_add(i))
        .collect()
}

pub fn empty_observations() -> Vec<Vec<Event>> {
    vec![Vec::new()]
}

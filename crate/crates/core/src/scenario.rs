//! Problem instance: plant, damage states, event partitions and the
//! observation log the attacker collected.

use alloc::collections::BTreeSet;
use alloc::string::{String, ToString};
use alloc::vec::Vec;

use crate::event::{is_valid_name, Event, EventSet, Name};
use crate::fsa::{Automaton, StateId};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum ScenarioError {
    #[error("invalid event name `{0}`")]
    InvalidName(String),
    #[error("event `{0}` declared twice")]
    DuplicateEvent(String),
    #[error("controllable event `{0}` must be observable (normality assumption: controllable events are a subset of observable events)")]
    ControllableUnobservable(String),
    #[error(
        "compromised event `{0}` must be observable (sensor attacks only tamper with observable events)"
    )]
    CompromisedUnobservable(String),
    #[error(
        "attackable event `{0}` must be controllable (actuator attacks only act on controllable events)"
    )]
    AttackableUncontrollable(String),
    #[error("plant uses event `{0}` that is not declared")]
    UndeclaredPlantEvent(String),
    #[error("plant event `{0}` must be a plain event")]
    NonPlainPlantEvent(String),
    #[error("damage state {0} does not exist in the plant")]
    UnknownDamageState(StateId),
    #[error("damage state `{0}` is not deadlocked (damage states must have no outgoing transitions)")]
    DamageNotDeadlocked(String),
    #[error("observation uses `{0}`, which is not an observable plant event")]
    BadObservationEvent(String),
}

/// Declared attributes of one plant event.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EventSpec {
    pub name: Name,
    pub observable: bool,
    pub controllable: bool,
    pub compromised: bool,
    pub attackable: bool,
}

impl EventSpec {
    pub fn new(name: &str, observable: bool, controllable: bool) -> Self {
        EventSpec {
            name: name.into(),
            observable,
            controllable,
            compromised: false,
            attackable: false,
        }
    }

    pub fn compromised(mut self) -> Self {
        self.compromised = true;
        self
    }

    pub fn attackable(mut self) -> Self {
        self.attackable = true;
        self
    }

    pub fn event(&self) -> Event {
        Event::Plain(self.name.clone())
    }
}

#[derive(Debug, Clone)]
pub struct Scenario {
    events: Vec<EventSpec>,
    plant: Automaton,
    damage: Vec<bool>,
    observations: BTreeSet<Vec<Event>>,
}

impl Scenario {
    /// Validates and assembles a scenario. The plant's alphabet is widened to
    /// every declared event and the observations are prefix-closed.
    pub fn new(
        mut events: Vec<EventSpec>,
        plant: Automaton,
        damage: impl IntoIterator<Item = StateId>,
        observations: impl IntoIterator<Item = Vec<Event>>,
    ) -> Result<Scenario, ScenarioError> {
        events.sort_by(|a, b| a.name.cmp(&b.name));
        for w in events.windows(2) {
            if w[0].name == w[1].name {
                return Err(ScenarioError::DuplicateEvent(w[0].name.to_string()));
            }
        }
        for e in &events {
            if !is_valid_name(&e.name) {
                return Err(ScenarioError::InvalidName(e.name.to_string()));
            }
            if e.controllable && !e.observable {
                return Err(ScenarioError::ControllableUnobservable(e.name.to_string()));
            }
            if e.compromised && !e.observable {
                return Err(ScenarioError::CompromisedUnobservable(e.name.to_string()));
            }
            if e.attackable && !e.controllable {
                return Err(ScenarioError::AttackableUncontrollable(e.name.to_string()));
            }
        }
        let sigma: EventSet = events.iter().map(EventSpec::event).collect();
        for e in plant.alphabet() {
            if !e.is_plain() {
                return Err(ScenarioError::NonPlainPlantEvent(e.to_string()));
            }
            if !sigma.contains(e) {
                return Err(ScenarioError::UndeclaredPlantEvent(e.to_string()));
            }
        }
        let plant = plant.lift_alphabet(&sigma);

        let mut flags = alloc::vec![false; plant.num_states()];
        for q in damage {
            if q as usize >= plant.num_states() {
                return Err(ScenarioError::UnknownDamageState(q));
            }
            if plant.edges_at(q).next().is_some() {
                return Err(ScenarioError::DamageNotDeadlocked(plant.label(q).render()));
            }
            flags[q as usize] = true;
        }
        // marking of the plant encodes the damage set
        let plant = plant.with_marking(|q| flags[q as usize]);

        let mut closed = BTreeSet::new();
        for word in observations {
            for e in &word {
                let ok = matches!(e, Event::Plain(n)
                    if events.iter().any(|s| &s.name == n && s.observable));
                if !ok {
                    return Err(ScenarioError::BadObservationEvent(e.to_string()));
                }
            }
            for i in 0..=word.len() {
                closed.insert(word[..i].to_vec());
            }
        }
        closed.insert(Vec::new());

        Ok(Scenario {
            events,
            plant,
            damage: flags,
            observations: closed,
        })
    }

    pub fn events(&self) -> &[EventSpec] {
        &self.events
    }

    pub fn spec(&self, name: &str) -> Option<&EventSpec> {
        self.events.iter().find(|e| &*e.name == name)
    }

    /// Plant over the full event set; its marked states are the damage states.
    pub fn plant(&self) -> &Automaton {
        &self.plant
    }

    pub fn is_damage(&self, q: StateId) -> bool {
        self.damage[q as usize]
    }

    pub fn damage_states(&self) -> impl Iterator<Item = StateId> + '_ {
        self.plant.states().filter(move |&q| self.is_damage(q))
    }

    /// Prefix-closed observation set.
    pub fn observations(&self) -> &BTreeSet<Vec<Event>> {
        &self.observations
    }

    /// Observations that are not a proper prefix of another observation.
    pub fn maximal_observations(&self) -> Vec<Vec<Event>> {
        self.observations
            .iter()
            .filter(|w| {
                !self
                    .observations
                    .range((*w).clone()..)
                    .any(|v| v.len() > w.len() && v.starts_with(w))
            })
            .cloned()
            .collect()
    }

    fn select(&self, f: impl Fn(&EventSpec) -> bool) -> EventSet {
        self.events
            .iter()
            .filter(|e| f(e))
            .map(EventSpec::event)
            .collect()
    }

    pub fn sigma(&self) -> EventSet {
        self.select(|_| true)
    }

    pub fn controllable(&self) -> EventSet {
        self.select(|e| e.controllable)
    }

    pub fn uncontrollable(&self) -> EventSet {
        self.select(|e| !e.controllable)
    }

    pub fn observable(&self) -> EventSet {
        self.select(|e| e.observable)
    }

    pub fn unobservable(&self) -> EventSet {
        self.select(|e| !e.observable)
    }

    pub fn compromised(&self) -> EventSet {
        self.select(|e| e.compromised)
    }

    pub fn attackable(&self) -> EventSet {
        self.select(|e| e.attackable)
    }

    /// `#` copies of the compromised events.
    pub fn relabeled(&self) -> EventSet {
        self.events
            .iter()
            .filter(|e| e.compromised)
            .map(|e| Event::Relabeled(e.name.clone()))
            .collect()
    }
}

//! Deterministic partial finite automata and the algebra the attack models
//! are built from: synchronous product, observer (natural projection),
//! relabeling, completion, trimming and language containment.
//!
//! Automata are immutable once built. Every construction returns a fresh
//! value, so they can be shared read-only between threads.

mod label;
mod ops;

pub use label::{Label, LabelKind};
pub use ops::*;

use alloc::collections::BTreeSet;
use alloc::string::{String, ToString};
use alloc::sync::Arc;
use alloc::vec::Vec;

use crate::event::{Event, EventSet};

pub type StateId = u32;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum FsaError {
    #[error("event `{0}` is not in the alphabet")]
    UnknownEvent(String),
    #[error("state {0} does not exist")]
    UnknownState(StateId),
    #[error("nondeterministic transition at state `{state}` on `{event}`")]
    Nondeterministic { state: String, event: String },
    #[error("dump label `{0}` is already used by a state")]
    LabelNotFresh(String),
    #[error("synchronous product of an empty list")]
    EmptyProduct,
}

/// Sorted, duplicate-free event alphabet. Transitions refer to events by
/// their position in it.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Alphabet(Arc<[Event]>);

impl Alphabet {
    pub fn new<I: IntoIterator<Item = Event>>(events: I) -> Self {
        let set: BTreeSet<Event> = events.into_iter().collect();
        Alphabet(set.into_iter().collect::<Vec<_>>().into())
    }

    pub fn empty() -> Self {
        Alphabet(Arc::from(Vec::new()))
    }

    pub fn union<'a, I: IntoIterator<Item = &'a Alphabet>>(parts: I) -> Self {
        Alphabet::new(parts.into_iter().flat_map(|a| a.iter().cloned()))
    }

    pub fn index_of(&self, e: &Event) -> Option<usize> {
        self.0.binary_search(e).ok()
    }

    pub fn contains(&self, e: &Event) -> bool {
        self.index_of(e).is_some()
    }

    pub fn get(&self, idx: usize) -> &Event {
        &self.0[idx]
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn iter(&self) -> core::slice::Iter<'_, Event> {
        self.0.iter()
    }

    pub fn as_slice(&self) -> &[Event] {
        &self.0
    }

    pub fn to_set(&self) -> EventSet {
        self.0.iter().cloned().collect()
    }

    /// Membership mask of `set` over this alphabet's positions.
    pub fn mask(&self, set: &EventSet) -> Vec<bool> {
        self.0.iter().map(|e| set.contains(e)).collect()
    }
}

impl<'a> IntoIterator for &'a Alphabet {
    type Item = &'a Event;
    type IntoIter = core::slice::Iter<'a, Event>;

    fn into_iter(self) -> Self::IntoIter {
        self.0.iter()
    }
}

/// Deterministic partial automaton `(Q, Σ, δ, q0, Qm)`.
#[derive(Clone, Debug)]
pub struct Automaton {
    alphabet: Alphabet,
    labels: Vec<Label>,
    // per state, sorted by event position; at most one entry per event
    edges: Vec<Vec<(u32, StateId)>>,
    initial: StateId,
    marked: Vec<bool>,
}

impl Automaton {
    pub fn alphabet(&self) -> &Alphabet {
        &self.alphabet
    }

    pub fn num_states(&self) -> usize {
        self.labels.len()
    }

    pub fn num_transitions(&self) -> usize {
        self.edges.iter().map(Vec::len).sum()
    }

    pub fn initial(&self) -> StateId {
        self.initial
    }

    pub fn states(&self) -> core::ops::Range<StateId> {
        0..self.labels.len() as StateId
    }

    pub fn label(&self, q: StateId) -> &Label {
        &self.labels[q as usize]
    }

    pub fn labels(&self) -> &[Label] {
        &self.labels
    }

    pub fn is_marked(&self, q: StateId) -> bool {
        self.marked[q as usize]
    }

    pub fn marked_states(&self) -> impl Iterator<Item = StateId> + '_ {
        self.states().filter(move |&q| self.is_marked(q))
    }

    /// First state whose rendered label equals `name`.
    pub fn find_state(&self, name: &str) -> Option<StateId> {
        self.labels
            .iter()
            .position(|l| l.as_name() == Some(name) || l.render() == name)
            .map(|i| i as StateId)
    }

    pub fn successor(&self, q: StateId, e: &Event) -> Option<StateId> {
        let idx = self.alphabet.index_of(e)?;
        self.successor_at(q, idx)
    }

    /// Successor by alphabet position.
    pub fn successor_at(&self, q: StateId, event_idx: usize) -> Option<StateId> {
        let row = &self.edges[q as usize];
        row.binary_search_by_key(&(event_idx as u32), |&(e, _)| e)
            .ok()
            .map(|i| row[i].1)
    }

    pub fn is_defined(&self, q: StateId, e: &Event) -> bool {
        self.successor(q, e).is_some()
    }

    /// Outgoing transitions of `q` as (alphabet position, target).
    pub fn edges_at(&self, q: StateId) -> impl Iterator<Item = (usize, StateId)> + '_ {
        self.edges[q as usize].iter().map(|&(e, d)| (e as usize, d))
    }

    pub fn edges(&self, q: StateId) -> impl Iterator<Item = (&Event, StateId)> + '_ {
        self.edges[q as usize]
            .iter()
            .map(move |&(e, d)| (self.alphabet.get(e as usize), d))
    }

    /// `En(q)`: the events defined at `q`.
    pub fn enabled(&self, q: StateId) -> impl Iterator<Item = &Event> + '_ {
        self.edges(q).map(|(e, _)| e)
    }

    pub fn enabled_set(&self, q: StateId) -> EventSet {
        self.enabled(q).cloned().collect()
    }

    pub fn transitions(&self) -> impl Iterator<Item = (StateId, &Event, StateId)> + '_ {
        self.states()
            .flat_map(move |q| self.edges(q).map(move |(e, d)| (q, e, d)))
    }

    /// Same automaton with a different marker set.
    pub fn with_marking(&self, mut marked: impl FnMut(StateId) -> bool) -> Automaton {
        let mut a = self.clone();
        a.marked = self.states().map(&mut marked).collect();
        a
    }

    pub fn fully_marked(&self) -> Automaton {
        self.with_marking(|_| true)
    }

    /// Same transition structure over a larger alphabet.
    pub fn lift_alphabet(&self, extra: &EventSet) -> Automaton {
        let alphabet = Alphabet::new(self.alphabet.iter().cloned().chain(extra.iter().cloned()));
        let remap: Vec<u32> = self
            .alphabet
            .iter()
            .map(|e| alphabet.index_of(e).expect("superset") as u32)
            .collect();
        let edges = self
            .edges
            .iter()
            .map(|row| {
                let mut row: Vec<_> = row.iter().map(|&(e, d)| (remap[e as usize], d)).collect();
                row.sort_unstable();
                row
            })
            .collect();
        Automaton {
            alphabet,
            labels: self.labels.clone(),
            edges,
            initial: self.initial,
            marked: self.marked.clone(),
        }
    }
}

/// Incremental construction with determinism checked on every edge.
#[derive(Clone, Debug)]
pub struct Builder {
    alphabet: Alphabet,
    labels: Vec<Label>,
    edges: Vec<Vec<(u32, StateId)>>,
    marked: Vec<bool>,
}

impl Builder {
    pub fn new(alphabet: Alphabet) -> Self {
        Builder {
            alphabet,
            labels: Vec::new(),
            edges: Vec::new(),
            marked: Vec::new(),
        }
    }

    pub fn alphabet(&self) -> &Alphabet {
        &self.alphabet
    }

    pub fn num_states(&self) -> usize {
        self.labels.len()
    }

    pub fn add_state(&mut self, label: impl Into<Label>, marked: bool) -> StateId {
        self.labels.push(label.into());
        self.edges.push(Vec::new());
        self.marked.push(marked);
        (self.labels.len() - 1) as StateId
    }

    pub fn set_marked(&mut self, q: StateId, marked: bool) {
        self.marked[q as usize] = marked;
    }

    pub fn add_edge(&mut self, src: StateId, e: &Event, dst: StateId) -> Result<(), FsaError> {
        let idx = self
            .alphabet
            .index_of(e)
            .ok_or_else(|| FsaError::UnknownEvent(e.to_string()))?;
        self.add_edge_at(src, idx, dst)
    }

    /// Adds `src -e-> dst` by alphabet position. Re-adding an identical edge
    /// is a no-op; a second target for the same event is an error.
    pub fn add_edge_at(&mut self, src: StateId, event_idx: usize, dst: StateId) -> Result<(), FsaError> {
        let n = self.labels.len() as StateId;
        if src >= n {
            return Err(FsaError::UnknownState(src));
        }
        if dst >= n {
            return Err(FsaError::UnknownState(dst));
        }
        let row = &mut self.edges[src as usize];
        let key = event_idx as u32;
        match row.binary_search_by_key(&key, |&(e, _)| e) {
            Ok(i) if row[i].1 == dst => Ok(()),
            Ok(_) => Err(FsaError::Nondeterministic {
                state: self.labels[src as usize].render(),
                event: self.alphabet.get(event_idx).to_string(),
            }),
            Err(i) => {
                row.insert(i, (key, dst));
                Ok(())
            }
        }
    }

    pub fn has_edge(&self, src: StateId, e: &Event) -> bool {
        self.successor(src, e).is_some()
    }

    pub fn successor(&self, src: StateId, e: &Event) -> Option<StateId> {
        let idx = self.alphabet.index_of(e)? as u32;
        let row = &self.edges[src as usize];
        row.binary_search_by_key(&idx, |&(e, _)| e).ok().map(|i| row[i].1)
    }

    pub fn build(self, initial: StateId) -> Result<Automaton, FsaError> {
        if initial as usize >= self.labels.len() {
            return Err(FsaError::UnknownState(initial));
        }
        Ok(Automaton {
            alphabet: self.alphabet,
            labels: self.labels,
            edges: self.edges,
            initial,
            marked: self.marked,
        })
    }
}

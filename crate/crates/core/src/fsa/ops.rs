use alloc::collections::{BTreeMap, BTreeSet, VecDeque};
use alloc::string::ToString;
use alloc::vec;
use alloc::vec::Vec;

use hashbrown::HashMap;

use super::{Alphabet, Automaton, Builder, FsaError, Label, StateId};
use crate::event::{Event, EventSet};

/// A product automaton together with the component state of every product
/// state, stored row-wise with stride `arity`.
#[derive(Clone, Debug)]
pub struct Product {
    pub automaton: Automaton,
    pub arity: usize,
    components: Vec<StateId>,
}

impl Product {
    pub fn component(&self, q: StateId, i: usize) -> StateId {
        self.components[q as usize * self.arity + i]
    }

    pub fn tuple(&self, q: StateId) -> &[StateId] {
        let k = self.arity;
        &self.components[q as usize * k..(q as usize + 1) * k]
    }
}

pub fn sync_product(parts: &[&Automaton]) -> Result<Automaton, FsaError> {
    sync_product_tracked(parts).map(|p| p.automaton)
}

/// Reachable part of the synchronous product of all `parts`. Shared events
/// synchronize, private events interleave.
pub fn sync_product_tracked(parts: &[&Automaton]) -> Result<Product, FsaError> {
    if parts.is_empty() {
        return Err(FsaError::EmptyProduct);
    }
    let k = parts.len();
    let alphabet = Alphabet::union(parts.iter().map(|a| a.alphabet()));
    // local[e][i]: position of union event e in component i's alphabet
    let local: Vec<Vec<Option<usize>>> = alphabet
        .iter()
        .map(|e| parts.iter().map(|a| a.alphabet().index_of(e)).collect())
        .collect();

    let mut b = Builder::new(alphabet.clone());
    let mut index: HashMap<Vec<StateId>, StateId> = HashMap::new();
    let mut components: Vec<StateId> = Vec::new();
    let mut queue = VecDeque::new();

    let intern = |tuple: &[StateId],
                  b: &mut Builder,
                  index: &mut HashMap<Vec<StateId>, StateId>,
                  components: &mut Vec<StateId>,
                  queue: &mut VecDeque<StateId>| {
        if let Some(&id) = index.get(tuple) {
            return id;
        }
        let label = Label::tuple(
            tuple
                .iter()
                .zip(parts)
                .map(|(&q, a)| a.label(q).clone())
                .collect(),
        );
        let marked = tuple.iter().zip(parts).all(|(&q, a)| a.is_marked(q));
        let id = b.add_state(label, marked);
        components.extend_from_slice(tuple);
        index.insert(tuple.to_vec(), id);
        queue.push_back(id);
        id
    };

    let init: Vec<StateId> = parts.iter().map(|a| a.initial()).collect();
    let q0 = intern(&init, &mut b, &mut index, &mut components, &mut queue);
    let mut cur = vec![0; k];
    let mut next = vec![0; k];
    while let Some(q) = queue.pop_front() {
        cur.copy_from_slice(&components[q as usize * k..(q as usize + 1) * k]);
        'events: for (e, loc) in local.iter().enumerate() {
            for i in 0..k {
                next[i] = match loc[i] {
                    Some(le) => match parts[i].successor_at(cur[i], le) {
                        Some(d) => d,
                        None => continue 'events,
                    },
                    None => cur[i],
                };
            }
            let d = intern(&next, &mut b, &mut index, &mut components, &mut queue);
            b.add_edge_at(q, e, d)?;
        }
    }
    let automaton = b.build(q0)?;
    Ok(Product {
        automaton,
        arity: k,
        components,
    })
}

fn check_subset(a: &Automaton, set: &EventSet) -> Result<(), FsaError> {
    match set.iter().find(|e| !a.alphabet().contains(e)) {
        Some(e) => Err(FsaError::UnknownEvent(e.to_string())),
        None => Ok(()),
    }
}

/// States reachable from `q` using only events outside `sigma_prime`.
pub fn unobservable_reach(
    a: &Automaton,
    q: StateId,
    sigma_prime: &EventSet,
) -> Result<BTreeSet<StateId>, FsaError> {
    if q as usize >= a.num_states() {
        return Err(FsaError::UnknownState(q));
    }
    let observable = a.alphabet().mask(sigma_prime);
    let mut out = Vec::new();
    closure_into(a, &observable, &mut [q].into_iter().collect(), &mut out);
    Ok(out.into_iter().collect())
}

// Closes `seed` under unobservable transitions; `out` receives the sorted cell.
fn closure_into(a: &Automaton, observable: &[bool], seed: &mut Vec<StateId>, out: &mut Vec<StateId>) {
    let mut seen = vec![false; a.num_states()];
    out.clear();
    while let Some(q) = seed.pop() {
        if seen[q as usize] {
            continue;
        }
        seen[q as usize] = true;
        out.push(q);
        for (e, d) in a.edges_at(q) {
            if !observable[e] && !seen[d as usize] {
                seed.push(d);
            }
        }
    }
    out.sort_unstable();
}

/// Observer automaton together with the member states of each cell.
#[derive(Clone, Debug)]
pub struct Observer {
    pub automaton: Automaton,
    pub cells: Vec<Vec<StateId>>,
}

pub fn observer(a: &Automaton, sigma_prime: &EventSet) -> Result<Automaton, FsaError> {
    observer_tracked(a, sigma_prime).map(|o| o.automaton)
}

/// Subset construction for the natural projection onto `sigma_prime`.
/// The result keeps the full alphabet of `a`: events outside `sigma_prime`
/// self-loop at every cell in which some member defines them.
pub fn observer_tracked(a: &Automaton, sigma_prime: &EventSet) -> Result<Observer, FsaError> {
    check_subset(a, sigma_prime)?;
    let observable = a.alphabet().mask(sigma_prime);
    let n_events = a.alphabet().len();

    let mut b = Builder::new(a.alphabet().clone());
    let mut index: HashMap<Vec<StateId>, StateId> = HashMap::new();
    let mut cells: Vec<Vec<StateId>> = Vec::new();
    let mut queue = VecDeque::new();

    let intern = |cell: Vec<StateId>,
                  b: &mut Builder,
                  index: &mut HashMap<Vec<StateId>, StateId>,
                  cells: &mut Vec<Vec<StateId>>,
                  queue: &mut VecDeque<StateId>| {
        if let Some(&id) = index.get(&cell) {
            return id;
        }
        let label = Label::cell(cell.iter().map(|&q| a.label(q).clone()).collect());
        let marked = cell.iter().any(|&q| a.is_marked(q));
        let id = b.add_state(label, marked);
        cells.push(cell.clone());
        index.insert(cell, id);
        queue.push_back(id);
        id
    };

    let mut scratch = Vec::new();
    let mut cell = Vec::new();
    scratch.push(a.initial());
    closure_into(a, &observable, &mut scratch, &mut cell);
    let q0 = intern(cell.clone(), &mut b, &mut index, &mut cells, &mut queue);

    while let Some(c) = queue.pop_front() {
        let members = cells[c as usize].clone();
        let mut image: Vec<Vec<StateId>> = vec![Vec::new(); n_events];
        let mut defined = vec![false; n_events];
        for &q in &members {
            for (e, d) in a.edges_at(q) {
                defined[e] = true;
                if observable[e] {
                    image[e].push(d);
                }
            }
        }
        for e in 0..n_events {
            if !defined[e] {
                continue;
            }
            if observable[e] {
                let mut seed = core::mem::take(&mut image[e]);
                closure_into(a, &observable, &mut seed, &mut cell);
                let d = intern(cell.clone(), &mut b, &mut index, &mut cells, &mut queue);
                b.add_edge_at(c, e, d)?;
            } else {
                b.add_edge_at(c, e, c)?;
            }
        }
    }
    Ok(Observer {
        automaton: b.build(q0)?,
        cells,
    })
}

/// Renames events. Unmapped events keep their name. Two transitions at one
/// state collapsing to the same event is reported as nondeterminism.
pub fn relabel(a: &Automaton, map: &BTreeMap<Event, Event>) -> Result<Automaton, FsaError> {
    let rename = |e: &Event| map.get(e).cloned().unwrap_or_else(|| e.clone());
    let alphabet = Alphabet::new(a.alphabet().iter().map(rename));
    let mut b = Builder::new(alphabet);
    for q in a.states() {
        b.add_state(a.label(q).clone(), a.is_marked(q));
    }
    for q in a.states() {
        let mut used = BTreeSet::new();
        for (e, d) in a.edges(q) {
            let e2 = rename(e);
            if !used.insert(e2.clone()) {
                return Err(FsaError::Nondeterministic {
                    state: a.label(q).render(),
                    event: e2.to_string(),
                });
            }
            b.add_edge(q, &e2, d)?;
        }
    }
    b.build(a.initial())
}

/// Makes `a` total over its alphabet united with `alphabet` by sending every
/// undefined pair to a fresh unmarked dump state. Returns the dump's id.
pub fn complete(
    a: &Automaton,
    alphabet: &EventSet,
    dump_label: &str,
) -> Result<(Automaton, StateId), FsaError> {
    if a.labels().iter().any(|l| l.render() == dump_label) {
        return Err(FsaError::LabelNotFresh(dump_label.into()));
    }
    let full = Alphabet::new(a.alphabet().iter().cloned().chain(alphabet.iter().cloned()));
    let mut b = Builder::new(full.clone());
    for q in a.states() {
        b.add_state(a.label(q).clone(), a.is_marked(q));
    }
    let dump = b.add_state(dump_label, false);
    for q in a.states() {
        for (e, d) in a.edges(q) {
            b.add_edge(q, e, d)?;
        }
    }
    for q in b_states(&b) {
        for (i, e) in full.iter().enumerate() {
            if !b.has_edge(q, e) {
                b.add_edge_at(q, i, dump)?;
            }
        }
    }
    Ok((b.build(a.initial())?, dump))
}

fn b_states(b: &Builder) -> core::ops::Range<StateId> {
    0..b.num_states() as StateId
}

pub fn reachable(a: &Automaton) -> Vec<bool> {
    let mut seen = vec![false; a.num_states()];
    let mut stack = vec![a.initial()];
    seen[a.initial() as usize] = true;
    while let Some(q) = stack.pop() {
        for (_, d) in a.edges_at(q) {
            if !seen[d as usize] {
                seen[d as usize] = true;
                stack.push(d);
            }
        }
    }
    seen
}

/// States from which a marked state is reachable.
pub fn coreachable(a: &Automaton) -> Vec<bool> {
    let mut preds: Vec<Vec<StateId>> = vec![Vec::new(); a.num_states()];
    for q in a.states() {
        for (_, d) in a.edges_at(q) {
            preds[d as usize].push(q);
        }
    }
    let mut seen = vec![false; a.num_states()];
    let mut stack: Vec<StateId> = a.marked_states().collect();
    for &q in &stack {
        seen[q as usize] = true;
    }
    while let Some(q) = stack.pop() {
        for &p in &preds[q as usize] {
            if !seen[p as usize] {
                seen[p as usize] = true;
                stack.push(p);
            }
        }
    }
    seen
}

pub fn reachable_trim(a: &Automaton) -> Automaton {
    reachable_trim_map(a).0
}

/// Restriction to the reachable states, keeping relative state order, plus
/// the old-to-new id map.
pub fn reachable_trim_map(a: &Automaton) -> (Automaton, Vec<Option<StateId>>) {
    restrict(a, &reachable(a))
}

/// Keeps the states flagged in `keep` (the initial state must be kept).
pub fn restrict(a: &Automaton, keep: &[bool]) -> (Automaton, Vec<Option<StateId>>) {
    let mut map = vec![None; a.num_states()];
    let mut b = Builder::new(a.alphabet().clone());
    for q in a.states() {
        if keep[q as usize] {
            map[q as usize] = Some(b.add_state(a.label(q).clone(), a.is_marked(q)));
        }
    }
    for q in a.states() {
        let Some(nq) = map[q as usize] else { continue };
        for (e, d) in a.edges_at(q) {
            if let Some(nd) = map[d as usize] {
                b.add_edge_at(nq, e, nd)
                    .expect("edges of a deterministic automaton");
            }
        }
    }
    let init = map[a.initial() as usize].expect("initial state kept");
    (b.build(init).expect("valid initial"), map)
}

pub fn is_marker_reachable(a: &Automaton) -> bool {
    let r = reachable(a);
    a.marked_states().any(|q| r[q as usize])
}

/// Outcome of a containment check, with a shortest counterexample for each
/// failed half.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Inclusion {
    pub closed_witness: Option<Vec<Event>>,
    pub marked_witness: Option<Vec<Event>>,
}

impl Inclusion {
    pub fn closed(&self) -> bool {
        self.closed_witness.is_none()
    }

    pub fn marked(&self) -> bool {
        self.marked_witness.is_none()
    }

    pub fn holds(&self) -> bool {
        self.closed() && self.marked()
    }
}

type PairParents = HashMap<(StateId, StateId), Option<((StateId, StateId), usize)>>;

/// Checks `L(a) ⊆ L(b)` and `Lm(a) ⊆ Lm(b)` by a synchronized breadth-first
/// walk over state pairs. Events missing from `b`'s alphabet count as
/// undefined in `b`.
pub fn language_subset(a: &Automaton, b: &Automaton) -> Inclusion {
    let to_b: Vec<Option<usize>> = a.alphabet().iter().map(|e| b.alphabet().index_of(e)).collect();
    let coreach = coreachable(a);
    let mut parent: PairParents = HashMap::new();
    let mut queue = VecDeque::new();
    let start = (a.initial(), b.initial());
    parent.insert(start, None);
    queue.push_back(start);

    let trace = |parent: &PairParents, mut at: (StateId, StateId), last: Option<usize>| {
        let mut w = Vec::new();
        if let Some(e) = last {
            w.push(a.alphabet().get(e).clone());
        }
        while let Some(Some((p, e))) = parent.get(&at) {
            w.push(a.alphabet().get(*e).clone());
            at = *p;
        }
        w.reverse();
        w
    };

    let mut closed_witness = None;
    let mut marked_witness = None;
    while let Some((qa, qb)) = queue.pop_front() {
        if marked_witness.is_none() && a.is_marked(qa) && !b.is_marked(qb) {
            marked_witness = Some(trace(&parent, (qa, qb), None));
        }
        for (e, da) in a.edges_at(qa) {
            match to_b[e].and_then(|eb| b.successor_at(qb, eb)) {
                Some(db) => {
                    if !parent.contains_key(&(da, db)) {
                        parent.insert((da, db), Some(((qa, qb), e)));
                        queue.push_back((da, db));
                    }
                }
                None => {
                    if closed_witness.is_none() {
                        closed_witness = Some(trace(&parent, (qa, qb), Some(e)));
                    }
                    if marked_witness.is_none() && coreach[da as usize] {
                        // extend to a marked state of `a` outside L(b)
                        let mut w = trace(&parent, (qa, qb), Some(e));
                        w.extend(path_to_marked(a, da));
                        marked_witness = Some(w);
                    }
                }
            }
        }
        if closed_witness.is_some() && marked_witness.is_some() {
            break;
        }
    }
    Inclusion {
        closed_witness,
        marked_witness,
    }
}

fn path_to_marked(a: &Automaton, from: StateId) -> Vec<Event> {
    let mut parent: Vec<Option<(StateId, usize)>> = vec![None; a.num_states()];
    let mut seen = vec![false; a.num_states()];
    let mut queue = VecDeque::from([from]);
    seen[from as usize] = true;
    while let Some(q) = queue.pop_front() {
        if a.is_marked(q) {
            let mut w = Vec::new();
            let mut at = q;
            while let Some((p, e)) = parent[at as usize] {
                w.push(a.alphabet().get(e).clone());
                at = p;
            }
            w.reverse();
            return w;
        }
        for (e, d) in a.edges_at(q) {
            if !seen[d as usize] {
                seen[d as usize] = true;
                parent[d as usize] = Some((q, e));
                queue.push_back(d);
            }
        }
    }
    Vec::new()
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Equivalence {
    pub closed: bool,
    pub marked: bool,
}

pub fn language_equivalent(a: &Automaton, b: &Automaton) -> Equivalence {
    let ab = language_subset(a, b);
    let ba = language_subset(b, a);
    Equivalence {
        closed: ab.closed() && ba.closed(),
        marked: ab.marked() && ba.marked(),
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Acceptance {
    Rejected,
    Closed,
    Marked,
}

/// Classifies `word` against `L(a)` and `Lm(a)`.
pub fn accepts(a: &Automaton, word: &[Event]) -> Result<Acceptance, FsaError> {
    let mut q = a.initial();
    let mut rejected = false;
    for e in word {
        let idx = a
            .alphabet()
            .index_of(e)
            .ok_or_else(|| FsaError::UnknownEvent(e.to_string()))?;
        if rejected {
            continue;
        }
        match a.successor_at(q, idx) {
            Some(d) => q = d,
            None => rejected = true,
        }
    }
    Ok(if rejected {
        Acceptance::Rejected
    } else if a.is_marked(q) {
        Acceptance::Marked
    } else {
        Acceptance::Closed
    })
}

/// Natural projection of a word onto `keep`.
pub fn project(word: &[Event], keep: &EventSet) -> Vec<Event> {
    word.iter().filter(|e| keep.contains(*e)).cloned().collect()
}

/// Every string of `L(a)` of length at most `depth`, with its marked flag.
pub fn bounded_words(a: &Automaton, depth: usize) -> BTreeMap<Vec<Event>, bool> {
    let mut out = BTreeMap::new();
    let mut frontier = vec![(Vec::new(), a.initial())];
    for level in 0..=depth {
        let mut next = Vec::new();
        for (w, q) in frontier {
            if level < depth {
                for (e, d) in a.edges(q) {
                    let mut w2: Vec<Event> = w.clone();
                    w2.push(e.clone());
                    next.push((w2, d));
                }
            }
            out.insert(w, a.is_marked(q));
        }
        frontier = next;
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::format;
    use alloc::string::String;

    fn ev(s: &str) -> Event {
        Event::plain(s)
    }

    fn set(xs: &[&str]) -> EventSet {
        xs.iter().map(|s| ev(s)).collect()
    }

    /// Builds an automaton from (src, event, dst) triples over states 0..n.
    fn auto(n: usize, alpha: &[&str], trans: &[(u32, &str, u32)], marked: &[u32]) -> Automaton {
        let mut b = Builder::new(Alphabet::new(alpha.iter().map(|s| ev(s))));
        for i in 0..n {
            b.add_state(Label::name(format!("s{i}")), marked.contains(&(i as u32)));
        }
        for &(s, e, d) in trans {
            b.add_edge(s, &ev(e), d).unwrap();
        }
        b.build(0).unwrap()
    }

    #[test]
    fn product_with_unit_is_identity() {
        let a = auto(3, &["a", "b"], &[(0, "a", 1), (1, "b", 2), (2, "a", 0)], &[2]);
        let mut ub = Builder::new(a.alphabet().clone());
        let u = ub.add_state("u", true);
        for e in ["a", "b"] {
            ub.add_edge(u, &ev(e), u).unwrap();
        }
        let u = ub.build(u).unwrap();
        let p = sync_product(&[&a, &u]).unwrap();
        assert_eq!(p.num_states(), 3);
        assert_eq!(p.num_transitions(), 3);
        assert_eq!(
            language_equivalent(&p, &a),
            Equivalence {
                closed: true,
                marked: true
            }
        );
    }

    #[test]
    fn private_events_interleave() {
        let a = auto(2, &["a", "s"], &[(0, "a", 1), (1, "s", 0)], &[0]);
        let b = auto(2, &["b", "s"], &[(0, "b", 1), (1, "s", 0)], &[0]);
        let p = sync_product(&[&a, &b]).unwrap();
        assert_eq!(p.num_states(), 4);
        let w: Vec<Event> = ["b", "a", "s"].iter().map(|s| ev(s)).collect();
        assert_eq!(accepts(&p, &w).unwrap(), Acceptance::Marked);
        let w: Vec<Event> = ["a", "s"].iter().map(|s| ev(s)).collect();
        assert_eq!(accepts(&p, &w).unwrap(), Acceptance::Rejected);
    }

    #[test]
    fn observer_extremes() {
        let a = auto(
            4,
            &["a", "u"],
            &[(0, "u", 1), (1, "a", 2), (0, "a", 3), (3, "u", 3)],
            &[2],
        );
        let full = observer(&a, &a.alphabet().to_set()).unwrap();
        assert_eq!(full.num_states(), 4);
        assert_eq!(
            language_equivalent(&full, &a),
            Equivalence {
                closed: true,
                marked: true
            }
        );

        let none = observer(&a, &EventSet::new()).unwrap();
        assert_eq!(none.num_states(), 1);
        assert_eq!(none.num_transitions(), 2);
        assert!(none.is_marked(0));
    }

    #[test]
    fn observer_rejects_foreign_events() {
        let a = auto(1, &["a"], &[], &[]);
        assert!(matches!(
            observer(&a, &set(&["z"])),
            Err(FsaError::UnknownEvent(_))
        ));
    }

    #[test]
    fn unobservable_self_loops_only_where_defined() {
        // u is defined only inside the initial cell
        let a = auto(3, &["a", "u"], &[(0, "u", 1), (1, "a", 2)], &[]);
        let o = observer_tracked(&a, &set(&["a"])).unwrap();
        assert_eq!(o.cells, vec![vec![0, 1], vec![2]]);
        assert!(o.automaton.is_defined(0, &ev("u")));
        assert!(!o.automaton.is_defined(1, &ev("u")));
    }

    #[test]
    fn unobservable_reach_chain() {
        let a = auto(3, &["o", "u"], &[(0, "u", 1), (1, "o", 2)], &[]);
        let ur = unobservable_reach(&a, 0, &set(&["o"])).unwrap();
        assert_eq!(ur.into_iter().collect::<Vec<_>>(), vec![0, 1]);
        let ur = unobservable_reach(&a, 0, &set(&["o", "u"])).unwrap();
        assert_eq!(ur.len(), 1);
        assert!(unobservable_reach(&a, 7, &EventSet::new()).is_err());
    }

    #[test]
    fn relabel_and_collisions() {
        let a = auto(2, &["L", "H"], &[(0, "L", 1), (0, "H", 0)], &[]);
        let map: BTreeMap<Event, Event> = [(ev("L"), Event::relabeled("L"))].into_iter().collect();
        let r = relabel(&a, &map).unwrap();
        assert!(r.is_defined(0, &Event::relabeled("L")));
        assert_eq!(r.num_transitions(), 2);
        let clash: BTreeMap<Event, Event> = [(ev("L"), ev("H"))].into_iter().collect();
        assert!(matches!(
            relabel(&a, &clash),
            Err(FsaError::Nondeterministic { .. })
        ));
    }

    #[test]
    fn completion() {
        let a = auto(1, &[], &[], &[0]);
        let (c, dump) = complete(&a, &set(&["a", "b"]), "dump").unwrap();
        assert_eq!(c.num_states(), 2);
        assert_eq!(c.num_transitions(), 4);
        assert_eq!(c.successor(0, &ev("a")), Some(dump));
        assert!(!c.is_marked(dump));
        let clash = auto(1, &[], &[], &[]);
        assert!(complete(&clash, &EventSet::new(), "s0").is_err());
    }

    #[test]
    fn trimming() {
        let a = auto(3, &["a"], &[(0, "a", 1)], &[2]);
        let t = reachable_trim(&a);
        assert_eq!(t.num_states(), 2);
        assert!(!is_marker_reachable(&a));
        let b = auto(1, &["a"], &[], &[0]);
        assert!(is_marker_reachable(&b));
    }

    #[test]
    fn subset_with_witnesses() {
        let full = auto(3, &["a", "b"], &[(0, "a", 1), (1, "b", 2)], &[2]);
        let prefix = auto(2, &["a"], &[(0, "a", 1)], &[]);
        assert!(language_subset(&prefix, &full).holds());
        let rev = language_subset(&full, &prefix);
        assert_eq!(rev.closed_witness, Some(vec![ev("a"), ev("b")]));
        assert_eq!(rev.marked_witness, Some(vec![ev("a"), ev("b")]));
        assert!(language_subset(&full, &full).holds());
    }

    #[test]
    fn marked_violation_without_closed_violation() {
        let a = auto(2, &["a"], &[(0, "a", 1)], &[1]);
        let b = auto(2, &["a"], &[(0, "a", 1)], &[]);
        let inc = language_subset(&a, &b);
        assert!(inc.closed());
        assert!(!inc.marked());
    }

    #[test]
    fn accepts_classifies() {
        let a = auto(2, &["a"], &[(0, "a", 1)], &[1]);
        assert_eq!(accepts(&a, &[]).unwrap(), Acceptance::Closed);
        assert_eq!(accepts(&a, &[ev("a")]).unwrap(), Acceptance::Marked);
        assert_eq!(accepts(&a, &[ev("a"), ev("a")]).unwrap(), Acceptance::Rejected);
        assert!(accepts(&a, &[ev("zz")]).is_err());
    }

    #[test]
    fn labels_record_provenance() {
        let a = auto(1, &["a"], &[(0, "a", 0)], &[0]);
        let p = sync_product(&[&a, &a]).unwrap();
        assert_eq!(p.label(0).render(), String::from("(s0,s0)"));
    }
}

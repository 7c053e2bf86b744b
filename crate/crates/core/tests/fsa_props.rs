use std::collections::BTreeSet;

use covsynth_core::fsa::{
    accepts, bounded_words, language_equivalent, language_subset, observer, project, reachable_trim,
    sync_product, unobservable_reach, Acceptance, Alphabet, Builder,
};
use covsynth_core::{Automaton, Event, EventSet};
use proptest::prelude::*;

const NAMES: [&str; 3] = ["a", "b", "c"];

#[derive(Debug, Clone)]
struct Spec {
    events: Vec<&'static str>,
    marked: Vec<bool>,
    // per state, per event: target or none
    edges: Vec<Vec<Option<usize>>>,
}

fn spec(max_states: usize, events: Vec<&'static str>) -> impl Strategy<Value = Spec> {
    let k = events.len();
    (1..=max_states).prop_flat_map(move |n| {
        let events = events.clone();
        (
            proptest::collection::vec(any::<bool>(), n),
            proptest::collection::vec(
                proptest::collection::vec(proptest::option::weighted(0.6, 0..n), k),
                n,
            ),
        )
            .prop_map(move |(marked, edges)| Spec {
                events: events.clone(),
                marked,
                edges,
            })
    })
}

fn build(s: &Spec) -> Automaton {
    let evs: Vec<Event> = s.events.iter().map(|n| Event::plain(*n)).collect();
    let mut b = Builder::new(Alphabet::new(evs.iter().cloned()));
    for (i, m) in s.marked.iter().enumerate() {
        b.add_state(format!("s{i}").as_str(), *m);
    }
    for (q, row) in s.edges.iter().enumerate() {
        for (e, d) in row.iter().enumerate() {
            if let Some(d) = d {
                b.add_edge(q as u32, &evs[e], *d as u32).unwrap();
            }
        }
    }
    b.build(0).unwrap()
}

fn all_words(events: &[Event], len: usize) -> Vec<Vec<Event>> {
    let mut out = vec![Vec::new()];
    let mut layer = vec![Vec::new()];
    for _ in 0..len {
        let mut next = Vec::new();
        for w in &layer {
            for e in events {
                let mut w2: Vec<Event> = w.clone();
                w2.push(e.clone());
                next.push(w2);
            }
        }
        out.extend(next.iter().cloned());
        layer = next;
    }
    out
}

fn abc() -> Vec<&'static str> {
    NAMES.to_vec()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn inclusion_matches_bounded_enumeration(x in spec(3, abc()), y in spec(3, abc())) {
        let (a, b) = (build(&x), build(&y));
        // a shortest counterexample is no longer than the pair space
        let wa = bounded_words(&a, 9);
        let wb = bounded_words(&b, 9);
        let closed = wa.keys().all(|w| wb.contains_key(w));
        let marked = wa.iter().filter(|(_, m)| **m).all(|(w, _)| wb.get(w) == Some(&true));
        let inc = language_subset(&a, &b);
        prop_assert_eq!(inc.closed(), closed);
        prop_assert_eq!(inc.marked(), marked);
        if let Some(w) = &inc.closed_witness {
            prop_assert!(wa.contains_key(w) && !wb.contains_key(w));
        }
    }

    #[test]
    fn product_matches_pair_oracle(x in spec(3, vec!["a", "b"]), y in spec(3, vec!["b", "c"])) {
        let (a, b) = (build(&x), build(&y));
        let p = sync_product(&[&a, &b]).unwrap();
        let sa: EventSet = a.alphabet().iter().cloned().collect();
        let sb: EventSet = b.alphabet().iter().cloned().collect();
        let all: Vec<Event> = NAMES.iter().map(|n| Event::plain(*n)).collect();
        for w in all_words(&all, 5) {
            let ra = accepts(&a, &project(&w, &sa)).unwrap();
            let rb = accepts(&b, &project(&w, &sb)).unwrap();
            let expect = match (ra, rb) {
                (Acceptance::Rejected, _) | (_, Acceptance::Rejected) => Acceptance::Rejected,
                (Acceptance::Marked, Acceptance::Marked) => Acceptance::Marked,
                _ => Acceptance::Closed,
            };
            prop_assert_eq!(accepts(&p, &w).unwrap(), expect, "{:?}", w);
        }
    }

    #[test]
    fn unobservable_reach_matches_matrix_closure(x in spec(5, abc()), hidden in proptest::collection::btree_set(0..3usize, 0..=2)) {
        let a = build(&x);
        let n = a.num_states();
        let observable: EventSet = (0..3).filter(|i| !hidden.contains(i)).map(|i| Event::plain(NAMES[i])).collect();
        let mut m = vec![vec![false; n]; n];
        for (q, row) in x.edges.iter().enumerate() {
            m[q][q] = true;
            for (e, d) in row.iter().enumerate() {
                if let (Some(d), true) = (d, hidden.contains(&e)) {
                    m[q][*d] = true;
                }
            }
        }
        // Warshall
        for k in 0..n {
            for i in 0..n {
                for j in 0..n {
                    if m[i][k] && m[k][j] {
                        m[i][j] = true;
                    }
                }
            }
        }
        for q in 0..n {
            let got = unobservable_reach(&a, q as u32, &observable).unwrap();
            let want: BTreeSet<u32> = (0..n).filter(|&j| m[q][j]).map(|j| j as u32).collect();
            prop_assert_eq!(got, want);
        }
    }

    #[test]
    fn observer_accepts_exactly_the_projections(x in spec(3, abc()), hidden in 0..3usize) {
        let a = build(&x);
        let keep: EventSet = (0..3).filter(|&i| i != hidden).map(|i| Event::plain(NAMES[i])).collect();
        let o = observer(&a, &keep).unwrap();
        // explore (state, projected word) pairs; hidden moves keep the word
        let mut proj: BTreeSet<Vec<Event>> = BTreeSet::new();
        let mut seen = BTreeSet::new();
        let mut stack = vec![(a.initial(), Vec::<Event>::new())];
        while let Some((q, w)) = stack.pop() {
            if !seen.insert((q, w.clone())) {
                continue;
            }
            proj.insert(w.clone());
            for (e, d) in a.edges(q) {
                let mut w2 = w.clone();
                if keep.contains(e) {
                    if w.len() == 3 {
                        continue;
                    }
                    w2.push(e.clone());
                }
                stack.push((d, w2));
            }
        }
        let kept: Vec<Event> = keep.iter().cloned().collect();
        for w in all_words(&kept, 3) {
            let got = accepts(&o, &w).unwrap() != Acceptance::Rejected;
            prop_assert_eq!(got, proj.contains(&w), "{:?}", w);
        }
    }

    #[test]
    fn product_is_associative(x in spec(3, vec!["a", "b"]), y in spec(3, vec!["b", "c"]), z in spec(2, vec!["a", "c"])) {
        let (a, b, c) = (build(&x), build(&y), build(&z));
        let left = sync_product(&[&sync_product(&[&a, &b]).unwrap(), &c]).unwrap();
        let right = sync_product(&[&a, &sync_product(&[&b, &c]).unwrap()]).unwrap();
        let flat = sync_product(&[&a, &b, &c]).unwrap();
        let eq = language_equivalent(&left, &right);
        prop_assert!(eq.closed && eq.marked);
        let eq = language_equivalent(&left, &flat);
        prop_assert!(eq.closed && eq.marked);
    }

    #[test]
    fn trim_is_idempotent_and_language_preserving(x in spec(5, abc())) {
        let a = build(&x);
        let t = reachable_trim(&a);
        let tt = reachable_trim(&t);
        prop_assert_eq!(t.num_states(), tt.num_states());
        prop_assert_eq!(t.num_transitions(), tt.num_transitions());
        let eq = language_equivalent(&a, &t);
        prop_assert!(eq.closed && eq.marked);
    }
}

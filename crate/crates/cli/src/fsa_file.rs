//! The line-oriented `.fsa` automaton format.
//!
//! ```text
//! # water tank plant
//! alphabet EH EL H L close open
//! states normal low high dmg_EL dmg_EH
//! init normal
//! marked dmg_EL dmg_EH
//! trans normal L low
//! ```
//!
//! `#` at the start of a token begins a comment. Events are plain names,
//! `name#` for relabeled copies, `cmd{a,b}` for commands and `stop`.

use std::collections::{BTreeSet, HashMap, HashSet};
use std::fmt::Write as _;

use covsynth_core::event::is_valid_name;
use covsynth_core::fsa::{Alphabet, Builder, Label};
use covsynth_core::{Automaton, Event, StateId};

use crate::error::ParseError;

/// Splits a line into tokens, dropping a trailing comment.
pub(crate) fn tokens(line: &str) -> Vec<&str> {
    let mut out = Vec::new();
    for t in line.split_whitespace() {
        if t.starts_with('#') {
            break;
        }
        out.push(t);
    }
    out
}

pub fn parse_event(token: &str) -> Result<Event, String> {
    if token == "stop" {
        return Ok(Event::Stop);
    }
    if let Some(inner) = token.strip_prefix("cmd{").and_then(|t| t.strip_suffix('}')) {
        let members: Vec<&str> = if inner.is_empty() {
            Vec::new()
        } else {
            inner.split(',').collect()
        };
        if let Some(bad) = members.iter().find(|m| !is_valid_name(m)) {
            return Err(format!("invalid command member `{bad}` in `{token}`"));
        }
        let unique: HashSet<&&str> = members.iter().collect();
        if unique.len() != members.len() {
            return Err(format!("repeated member in `{token}`"));
        }
        return Ok(Event::command(members));
    }
    if let Some(base) = token.strip_suffix('#') {
        if is_valid_name(base) {
            return Ok(Event::relabeled(base));
        }
        return Err(format!("invalid relabeled event `{token}`"));
    }
    if is_valid_name(token) {
        Ok(Event::plain(token))
    } else {
        Err(format!("invalid event `{token}`"))
    }
}

fn valid_state(token: &str) -> bool {
    !token.is_empty() && !token.starts_with('#') && !token.chars().any(char::is_whitespace)
}

pub fn parse_automaton(text: &str) -> Result<Automaton, ParseError> {
    let mut alphabet: Option<(usize, Vec<Event>)> = None;
    let mut states: Option<(usize, Vec<String>)> = None;
    let mut init: Option<(usize, String)> = None;
    let mut marked: Vec<(usize, String)> = Vec::new();
    let mut trans: Vec<(usize, String, Event, String)> = Vec::new();
    let mut last = 0;

    for (i, raw) in text.lines().enumerate() {
        let line = i + 1;
        last = line;
        let toks = tokens(raw);
        let Some((&head, rest)) = toks.split_first() else {
            continue;
        };
        match head {
            "alphabet" => {
                if alphabet.is_some() {
                    return Err(ParseError::at(line, "second `alphabet` line"));
                }
                let mut evs = Vec::new();
                for t in rest {
                    let e = parse_event(t).map_err(|m| ParseError::at(line, m))?;
                    if evs.contains(&e) {
                        return Err(ParseError::at(line, format!("event `{t}` listed twice")));
                    }
                    evs.push(e);
                }
                alphabet = Some((line, evs));
            }
            "states" => {
                let list = states.get_or_insert_with(|| (line, Vec::new()));
                for t in rest {
                    if !valid_state(t) {
                        return Err(ParseError::at(line, format!("invalid state name `{t}`")));
                    }
                    if list.1.iter().any(|s| s == t) {
                        return Err(ParseError::at(line, format!("state `{t}` listed twice")));
                    }
                    list.1.push(t.to_string());
                }
            }
            "init" => {
                if init.is_some() {
                    return Err(ParseError::at(line, "second `init` line"));
                }
                let [s] = rest else {
                    return Err(ParseError::at(line, "`init` takes exactly one state"));
                };
                init = Some((line, s.to_string()));
            }
            "marked" => marked.extend(rest.iter().map(|s| (line, s.to_string()))),
            "trans" => {
                let [src, e, dst] = rest else {
                    return Err(ParseError::at(line, "`trans` takes <src> <event> <dst>"));
                };
                let e = parse_event(e).map_err(|m| ParseError::at(line, m))?;
                trans.push((line, src.to_string(), e, dst.to_string()));
            }
            other => return Err(ParseError::at(line, format!("unknown section `{other}`"))),
        }
    }

    let (_, state_names) = states.ok_or_else(|| ParseError::at(last, "missing `states` line"))?;
    let (init_line, init_name) = init.ok_or_else(|| ParseError::at(last, "missing `init` line"))?;
    let events = alphabet.map(|(_, e)| e).unwrap_or_default();
    let alpha = Alphabet::new(events.iter().cloned());

    let index: HashMap<&str, StateId> = state_names
        .iter()
        .enumerate()
        .map(|(i, s)| (s.as_str(), i as StateId))
        .collect();
    let lookup = |line: usize, s: &str| {
        index
            .get(s)
            .copied()
            .ok_or_else(|| ParseError::at(line, format!("unknown state `{s}`")))
    };

    let mut b = Builder::new(alpha.clone());
    for s in &state_names {
        b.add_state(Label::name(s.as_str()), false);
    }
    for (line, s) in &marked {
        let q = lookup(*line, s)?;
        b.set_marked(q, true);
    }
    let mut seen: HashMap<(StateId, Event), usize> = HashMap::new();
    for (line, src, e, dst) in &trans {
        let q = lookup(*line, src)?;
        let d = lookup(*line, dst)?;
        if !alpha.contains(e) {
            return Err(ParseError::at(
                *line,
                format!("event `{e}` is not in the alphabet"),
            ));
        }
        if let Some(prev) = seen.insert((q, e.clone()), *line) {
            if b.successor(q, e) != Some(d) {
                return Err(ParseError::at(
                    *line,
                    format!("second `{e}` transition out of `{src}` (first on line {prev})"),
                ));
            }
        }
        b.add_edge(q, e, d)
            .map_err(|err| ParseError::at(*line, err.to_string()))?;
    }
    let q0 = lookup(init_line, &init_name)?;
    Ok(b.build(q0).expect("initial state was looked up"))
}

/// Unique whitespace-free names for the states of `a`, in state order.
pub fn state_names(a: &Automaton) -> Vec<String> {
    let mut used: HashMap<String, usize> = HashMap::new();
    let base: Vec<String> = a
        .states()
        .map(|q| {
            let r = a.label(q).render();
            let mut s: String = r
                .chars()
                .map(|c| if c.is_whitespace() { '_' } else { c })
                .collect();
            if s.is_empty() || s.starts_with('#') {
                s.insert(0, 'q');
            }
            s
        })
        .collect();
    for s in &base {
        *used.entry(s.clone()).or_default() += 1;
    }
    let mut taken: HashSet<String> = HashSet::new();
    base.into_iter()
        .enumerate()
        .map(|(i, s)| {
            let mut name = if used[&s] > 1 { format!("{s}~{i}") } else { s };
            while !taken.insert(name.clone()) {
                name.push('_');
            }
            name
        })
        .collect()
}

/// Canonical text: states, markings and transitions sorted by name.
pub fn serialize_automaton(a: &Automaton) -> String {
    let names = state_names(a);
    let mut order: Vec<StateId> = a.states().collect();
    order.sort_by(|x, y| names[*x as usize].cmp(&names[*y as usize]));

    let mut out = String::new();
    let alpha: Vec<String> = a.alphabet().iter().map(|e| e.to_string()).collect();
    push_list(&mut out, "alphabet", alpha.iter().map(String::as_str));
    push_list(
        &mut out,
        "states",
        order.iter().map(|&q| names[q as usize].as_str()),
    );
    let _ = writeln!(out, "init {}", names[a.initial() as usize]);
    let marked: Vec<&str> = order
        .iter()
        .filter(|&&q| a.is_marked(q))
        .map(|&q| names[q as usize].as_str())
        .collect();
    if !marked.is_empty() {
        push_list(&mut out, "marked", marked.into_iter());
    }
    let mut lines: BTreeSet<(&str, &Event, &str)> = BTreeSet::new();
    for (q, e, d) in a.transitions() {
        lines.insert((&names[q as usize], e, &names[d as usize]));
    }
    for (src, e, dst) in lines {
        let _ = writeln!(out, "trans {src} {e} {dst}");
    }
    out
}

fn push_list<'a>(out: &mut String, head: &str, items: impl Iterator<Item = &'a str>) {
    out.push_str(head);
    for s in items {
        out.push(' ');
        out.push_str(s);
    }
    out.push('\n');
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn minimal_file() {
        let a = parse_automaton("states s0\ninit s0\n").unwrap();
        assert_eq!(a.num_states(), 1);
        assert_eq!(a.num_transitions(), 0);
        assert!(!a.is_marked(0));
    }

    #[test]
    fn event_tokens() {
        assert_eq!(parse_event("L#").unwrap(), Event::relabeled("L"));
        assert_eq!(parse_event("stop").unwrap(), Event::Stop);
        assert_eq!(parse_event("cmd{b,a}").unwrap(), Event::command(["a", "b"]));
        assert_eq!(
            parse_event("cmd{}").unwrap(),
            Event::command::<[&str; 0], &str>([])
        );
        assert!(parse_event("cmd{a,a}").is_err());
        assert!(parse_event("a##").is_err());
        assert!(parse_event("x y").is_err());
    }

    #[test]
    fn comments_and_hash_events() {
        let text = "# header\nalphabet a a# # trailing\nstates p q\ninit p\ntrans p a# q # note\n";
        let a = parse_automaton(text).unwrap();
        assert_eq!(a.successor(0, &Event::relabeled("a")), Some(1));
    }

    #[test]
    fn errors_carry_line_numbers() {
        let cases = [
            ("alphabet a\nstates s\ninit s\ntrans s a t\n", 4, "unknown state"),
            (
                "alphabet a\nstates s t\ninit s\ntrans s b t\n",
                4,
                "not in the alphabet",
            ),
            (
                "alphabet a\nstates s t\ninit s\ntrans s a t\ntrans s a s\n",
                5,
                "second `a`",
            ),
            ("alphabet a\nstates s\n", 2, "missing `init`"),
            ("alphabet a\nstates s\ninit s\nfoo\n", 4, "unknown section"),
        ];
        for (text, line, msg) in cases {
            let err = parse_automaton(text).unwrap_err();
            let ParseError::At { line: l, message } = &err else {
                panic!("{err}")
            };
            assert_eq!(*l, line, "{err}");
            assert!(message.contains(msg), "{err}");
        }
    }

    #[test]
    fn duplicate_identical_transition_is_accepted() {
        let a = parse_automaton("alphabet a\nstates s\ninit s\ntrans s a s\ntrans s a s\n").unwrap();
        assert_eq!(a.num_transitions(), 1);
    }

    #[test]
    fn colliding_labels_are_disambiguated() {
        let mut b = Builder::new(Alphabet::new([Event::plain("a")]));
        let p = b.add_state("x", true);
        let q = b.add_state("x", false);
        b.add_edge(p, &Event::plain("a"), q).unwrap();
        let a = b.build(p).unwrap();
        let text = serialize_automaton(&a);
        let back = parse_automaton(&text).unwrap();
        assert_eq!(back.num_states(), 2);
        assert_eq!(serialize_automaton(&back), text);
    }
}

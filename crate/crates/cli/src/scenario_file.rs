//! The sectioned `.scn` scenario format.
//!
//! ```text
//! [events]
//! L obs unc compromised
//! close obs ctl attackable
//! [plant] tank_plant.fsa
//! [damage] dmg_EL dmg_EH
//! [observations]
//! L close H open
//! ```
//!
//! The plant path is relative to the scenario file. An empty
//! `[observations]` section means only the empty string was observed.

use std::collections::HashMap;
use std::fmt::Write as _;
use std::path::{Path, PathBuf};

use covsynth_core::scenario::{EventSpec, ScenarioError};
use covsynth_core::{Automaton, Event, Scenario};

use crate::error::ParseError;
use crate::fsa_file::{parse_automaton, parse_event, state_names, tokens};

/// A parsed scenario plus where it came from.
#[derive(Debug, Clone)]
pub struct ScenarioFile {
    pub scenario: Scenario,
    pub name: String,
    pub path: Option<PathBuf>,
    pub plant_path: String,
}

#[derive(Clone, Copy, PartialEq, Eq)]
enum Section {
    None,
    Events,
    Plant,
    Damage,
    Observations,
}

/// Parses scenario text; `load_plant` resolves the `[plant]` path.
pub fn parse_scenario_with(
    text: &str,
    mut load_plant: impl FnMut(&str) -> Result<Automaton, ParseError>,
) -> Result<(Scenario, String), ParseError> {
    let mut section = Section::None;
    let mut seen: HashMap<&str, usize> = HashMap::new();
    let mut events: Vec<(usize, EventSpec)> = Vec::new();
    let mut plant: Option<(usize, String)> = None;
    let mut damage: Vec<(usize, String)> = Vec::new();
    let mut observations: Vec<(usize, Vec<Event>)> = Vec::new();
    let mut last = 0;

    for (i, raw) in text.lines().enumerate() {
        let line = i + 1;
        last = line;
        let mut toks = tokens(raw);
        if let Some(head) = toks.first().copied().filter(|t| t.starts_with('[')) {
            section = match head {
                "[events]" => Section::Events,
                "[plant]" => Section::Plant,
                "[damage]" => Section::Damage,
                "[observations]" => Section::Observations,
                _ => return Err(ParseError::at(line, format!("unknown section `{head}`"))),
            };
            if let Some(prev) = seen.insert(head, line) {
                return Err(ParseError::at(
                    line,
                    format!("section `{head}` repeated (first on line {prev})"),
                ));
            }
            toks.remove(0);
        }
        if toks.is_empty() {
            continue;
        }
        match section {
            Section::None => return Err(ParseError::at(line, "content before the first section")),
            Section::Events => events.push((line, parse_event_line(line, &toks)?)),
            Section::Plant => {
                let [p] = toks[..] else {
                    return Err(ParseError::at(line, "`[plant]` takes one path"));
                };
                if plant.is_some() {
                    return Err(ParseError::at(line, "second plant path"));
                }
                plant = Some((line, p.to_string()));
            }
            Section::Damage => damage.extend(toks.iter().map(|s| (line, s.to_string()))),
            Section::Observations => {
                let mut w = Vec::new();
                for t in &toks {
                    w.push(parse_event(t).map_err(|m| ParseError::at(line, m))?);
                }
                observations.push((line, w));
            }
        }
    }

    let (plant_line, plant_path) = plant.ok_or_else(|| ParseError::at(last, "missing `[plant]` section"))?;
    let g = load_plant(&plant_path).map_err(|e| match e {
        ParseError::At { .. } => e.in_file(&plant_path),
        ParseError::Io { source, .. } => {
            ParseError::at(plant_line, format!("cannot read plant `{plant_path}`: {source}"))
        }
        other => other,
    })?;
    let names = state_names(&g);
    let mut ids = Vec::new();
    for (line, s) in &damage {
        let q = names
            .iter()
            .position(|n| n == s)
            .ok_or_else(|| ParseError::at(*line, format!("damage state `{s}` is not a plant state")))?;
        ids.push(q as u32);
    }
    let specs: Vec<EventSpec> = events.iter().map(|(_, s)| s.clone()).collect();
    let words: Vec<Vec<Event>> = observations.iter().map(|(_, w)| w.clone()).collect();
    Scenario::new(specs, g.clone(), ids, words)
        .map_err(|e| ParseError::from((anchor(&e, &events, plant_line, &damage, &observations, &g), e)))
        .map(|sc| (sc, plant_path))
}

fn parse_event_line(line: usize, toks: &[&str]) -> Result<EventSpec, ParseError> {
    let [name, obs, ctl, flags @ ..] = toks else {
        return Err(ParseError::at(
            line,
            "expected `<name> obs|unobs ctl|unc [compromised] [attackable]`",
        ));
    };
    let observable = match *obs {
        "obs" => true,
        "unobs" => false,
        o => {
            return Err(ParseError::at(
                line,
                format!("expected `obs` or `unobs`, found `{o}`"),
            ))
        }
    };
    let controllable = match *ctl {
        "ctl" => true,
        "unc" => false,
        c => {
            return Err(ParseError::at(
                line,
                format!("expected `ctl` or `unc`, found `{c}`"),
            ))
        }
    };
    let mut spec = EventSpec::new(name, observable, controllable);
    for f in flags {
        match *f {
            "compromised" if !spec.compromised => spec.compromised = true,
            "attackable" if !spec.attackable => spec.attackable = true,
            _ => return Err(ParseError::at(line, format!("unexpected flag `{f}`"))),
        }
    }
    Ok(spec)
}

/// Source line a scenario validation error is about.
fn anchor(
    e: &ScenarioError,
    events: &[(usize, EventSpec)],
    plant_line: usize,
    damage: &[(usize, String)],
    observations: &[(usize, Vec<Event>)],
    g: &Automaton,
) -> usize {
    let event_line = |n: &str| events.iter().rev().find(|(_, s)| &*s.name == n).map(|(l, _)| *l);
    match e {
        ScenarioError::InvalidName(n)
        | ScenarioError::DuplicateEvent(n)
        | ScenarioError::ControllableUnobservable(n)
        | ScenarioError::CompromisedUnobservable(n)
        | ScenarioError::AttackableUncontrollable(n) => event_line(n).unwrap_or(plant_line),
        ScenarioError::UndeclaredPlantEvent(_) | ScenarioError::NonPlainPlantEvent(_) => plant_line,
        ScenarioError::UnknownDamageState(_) => damage.first().map_or(plant_line, |(l, _)| *l),
        ScenarioError::DamageNotDeadlocked(label) => {
            let names = state_names(g);
            damage
                .iter()
                .find(|(_, s)| g.find_state(label).map(|q| &names[q as usize]) == Some(s) || s == label)
                .map_or(plant_line, |(l, _)| *l)
        }
        ScenarioError::BadObservationEvent(t) => observations
            .iter()
            .find(|(_, w)| w.iter().any(|e| e.to_string() == *t))
            .map_or(plant_line, |(l, _)| *l),
    }
}

pub fn read_scenario_file(path: &Path) -> Result<ScenarioFile, ParseError> {
    let text = std::fs::read_to_string(path).map_err(|source| ParseError::Io {
        path: path.to_path_buf(),
        source,
    })?;
    let base = path.parent().map(Path::to_path_buf).unwrap_or_default();
    let (scenario, plant_path) =
        parse_scenario_with(&text, |p| read_automaton_file(&base.join(p))).map_err(|e| match e {
            ParseError::At { .. } => e.in_file(path),
            other => other,
        })?;
    let name = path
        .file_stem()
        .map(|s| s.to_string_lossy().into_owned())
        .unwrap_or_default();
    Ok(ScenarioFile {
        scenario,
        name,
        path: Some(path.to_path_buf()),
        plant_path,
    })
}

pub fn read_automaton_file(path: &Path) -> Result<Automaton, ParseError> {
    let text = std::fs::read_to_string(path).map_err(|source| ParseError::Io {
        path: path.to_path_buf(),
        source,
    })?;
    parse_automaton(&text)
}

/// Canonical scenario text referring to the plant at `plant_path`.
pub fn serialize_scenario(sc: &Scenario, plant_path: &str) -> String {
    let mut out = String::from("[events]\n");
    for s in sc.events() {
        let _ = write!(
            out,
            "{} {} {}",
            s.name,
            if s.observable { "obs" } else { "unobs" },
            if s.controllable { "ctl" } else { "unc" }
        );
        if s.compromised {
            out.push_str(" compromised");
        }
        if s.attackable {
            out.push_str(" attackable");
        }
        out.push('\n');
    }
    let _ = writeln!(out, "[plant] {plant_path}");
    let names = state_names(sc.plant());
    let mut dmg: Vec<&str> = sc.damage_states().map(|q| names[q as usize].as_str()).collect();
    dmg.sort_unstable();
    out.push_str("[damage]");
    for d in dmg {
        out.push(' ');
        out.push_str(d);
    }
    out.push_str("\n[observations]\n");
    for w in sc.maximal_observations() {
        if w.is_empty() {
            continue;
        }
        let toks: Vec<String> = w.iter().map(Event::to_string).collect();
        out.push_str(&toks.join(" "));
        out.push('\n');
    }
    out
}

//! Supremal safe supervisor synthesis under partial observation, and the
//! attacker synthesis pipeline built on top of it.

use alloc::format;
use alloc::string::{String, ToString};
use alloc::vec;
use alloc::vec::Vec;
use core::time::Duration;

use crate::attack::{
    build_ac, build_ce, build_cea, build_mo, encode_attack, AttackError, Attacked, Bipartite, Context,
    ObservationAutomaton,
};
use crate::event::{Event, EventSet};
use crate::fsa::{
    complete, is_marker_reachable, observer_tracked, restrict, sync_product_tracked, Alphabet, Automaton,
    Builder, FsaError, Label, Product, StateId,
};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum SynthesisError {
    #[error(
        "controllable event `{0}` is not observable; synthesis requires controllable events to be observable"
    )]
    ControllableNotObservable(String),
    #[error("constraint event `{0}` is not in the plant alphabet")]
    ForeignEvent(String),
    #[error("no safe supervisor exists for this plant")]
    NoSafeSupervisor,
    #[error("internal error: synthesis result is not a fixpoint ({0})")]
    Unstable(String),
    #[error(transparent)]
    Attack(#[from] AttackError),
    #[error(transparent)]
    Fsa(#[from] FsaError),
}

/// What a supervisor may disable and what it sees.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ControlConstraint {
    pub controllable: EventSet,
    pub observable: EventSet,
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct EngineStats {
    pub plant_states: usize,
    pub unsafe_states: usize,
    pub cells: usize,
    pub deleted_cells: usize,
    pub supervisor_states: usize,
}

/// Result of the engine: the supervisor, the plant states each of its states
/// stands for, and counters.
#[derive(Debug, Clone)]
pub struct Supremal {
    pub supervisor: Automaton,
    pub cells: Vec<Vec<StateId>>,
    pub stats: EngineStats,
}

/// Backward closure of `bad` under events outside `controllable`.
pub fn uncontrollable_unsafe(plant: &Automaton, bad: &[bool], controllable: &EventSet) -> Vec<bool> {
    let ctrl = plant.alphabet().mask(controllable);
    let mut preds: Vec<Vec<StateId>> = vec![Vec::new(); plant.num_states()];
    for q in plant.states() {
        for (e, d) in plant.edges_at(q) {
            if !ctrl[e] {
                preds[d as usize].push(q);
            }
        }
    }
    let mut out = bad.to_vec();
    let mut stack: Vec<StateId> = plant.states().filter(|&q| bad[q as usize]).collect();
    while let Some(q) = stack.pop() {
        for &p in &preds[q as usize] {
            if !out[p as usize] {
                out[p as usize] = true;
                stack.push(p);
            }
        }
    }
    out
}

/// Supremal supervisor keeping `plant` out of `bad` under `cc`. Requires
/// every controllable event to be observable. `None` means even the most
/// permissive admissible supervisor cannot avoid `bad`.
///
/// The result is an observer of the plant with unsafe cells removed. Its
/// marking follows the plant's (a cell is marked iff it holds a marked
/// state), so composing it with the plant keeps the plant's marking.
pub fn synth_supremal_safe(
    plant: &Automaton,
    bad: &[bool],
    cc: &ControlConstraint,
) -> Result<Option<Supremal>, SynthesisError> {
    for e in cc.controllable.iter().chain(&cc.observable) {
        if !plant.alphabet().contains(e) {
            return Err(SynthesisError::ForeignEvent(e.to_string()));
        }
    }
    if let Some(e) = cc.controllable.iter().find(|e| !cc.observable.contains(*e)) {
        return Err(SynthesisError::ControllableNotObservable(e.to_string()));
    }
    let danger = uncontrollable_unsafe(plant, bad, &cc.controllable);
    let obs = observer_tracked(plant, &cc.observable)?;
    let deleted: Vec<bool> = obs
        .cells
        .iter()
        .map(|c| c.iter().any(|&q| danger[q as usize]))
        .collect();
    let mut stats = EngineStats {
        plant_states: plant.num_states(),
        unsafe_states: danger.iter().filter(|&&d| d).count(),
        cells: obs.cells.len(),
        deleted_cells: deleted.iter().filter(|&&d| d).count(),
        supervisor_states: 0,
    };
    let o = &obs.automaton;
    if deleted[o.initial() as usize] {
        return Ok(None);
    }
    let ctrl = o.alphabet().mask(&cc.controllable);
    for c in o.states().filter(|&c| !deleted[c as usize]) {
        for (e, d) in o.edges_at(c) {
            if deleted[d as usize] && !ctrl[e] {
                return Err(SynthesisError::Unstable(format!(
                    "uncontrollable `{}` leads from a kept cell into a removed one",
                    o.alphabet().get(e)
                )));
            }
        }
    }
    let keep: Vec<bool> = deleted.iter().map(|d| !d).collect();
    let (kept, _) = restrict(o, &keep);
    let old_ids: Vec<usize> = (0..deleted.len()).filter(|&i| keep[i]).collect();
    let (supervisor, map) = crate::fsa::reachable_trim_map(&kept);
    let mut cells = vec![Vec::new(); supervisor.num_states()];
    for (i, m) in map.iter().enumerate() {
        if let Some(n) = m {
            cells[*n as usize] = obs.cells[old_ids[i]].clone();
        }
    }
    stats.supervisor_states = supervisor.num_states();
    Ok(Some(Supremal {
        supervisor,
        cells,
        stats,
    }))
}

fn union(parts: &[&EventSet]) -> EventSet {
    parts.iter().flat_map(|s| s.iter().cloned()).collect()
}

/// `2^exp` saturated to `usize::MAX`.
fn pow2(exp: usize) -> usize {
    if exp >= usize::BITS as usize {
        usize::MAX
    } else {
        1usize << exp
    }
}

/// The supremal safe command-nondeterministic supervisor: every safe
/// partial-observation supervisor is embedded in it.
#[derive(Debug, Clone)]
pub struct NsResult {
    pub ns: Bipartite,
    pub stats: EngineStats,
}

/// Supremal safe supervisor for the attack-free loop `G ‖ CE`: damage states
/// are forbidden and every command except the minimal one may be withheld.
pub fn build_ns(ctx: &Context) -> Result<NsResult, SynthesisError> {
    let ce = build_ce(ctx)?;
    let g = ctx.plant().fully_marked();
    let p = sync_product_tracked(&[&g, &ce])?;
    let bad: Vec<bool> = p
        .automaton
        .states()
        .map(|q| ctx.scenario.is_damage(p.component(q, 0)))
        .collect();
    let mut controllable = ctx.gamma_set.clone();
    controllable.remove(ctx.uncontrollable_command());
    let cc = ControlConstraint {
        controllable,
        observable: union(&[&ctx.sigma_o, &ctx.gamma_set]),
    };
    let sup = synth_supremal_safe(&p.automaton, &bad, &cc)?.ok_or(SynthesisError::NoSafeSupervisor)?;
    let ns = sup.supervisor;
    let mut reaction = Vec::with_capacity(ns.num_states());
    for (q, cell) in sup.cells.iter().enumerate() {
        let rea = cell[0];
        let is_rea = p.component(rea, 1) != ce.initial();
        if cell
            .iter()
            .any(|&m| (p.component(m, 1) != ce.initial()) != is_rea)
        {
            return Err(SynthesisError::Unstable(format!(
                "cell {q} mixes command and reaction layers"
            )));
        }
        for e in ns.enabled(q as StateId) {
            if e.is_command() == is_rea {
                return Err(SynthesisError::Unstable(format!(
                    "`{e}` defined in the wrong layer at {}",
                    ns.label(q as StateId)
                )));
            }
        }
        reaction.push(is_rea);
    }
    let bound = pow2(ctx.plant().num_states() * ce.num_states());
    assert!(ns.num_states() <= bound);
    Ok(NsResult {
        stats: sup.stats,
        ns: Bipartite {
            automaton: ns,
            reaction,
        },
    })
}

/// Bipartite structure of every supervisor consistent with the observations.
#[derive(Debug, Clone)]
pub struct Oc {
    pub automaton: Automaton,
    /// Reaction states (the observation automaton's states).
    pub reaction: Vec<bool>,
    pub dump: StateId,
}

pub fn build_oc(ctx: &Context, mo: &ObservationAutomaton) -> Result<Oc, SynthesisError> {
    let m = &mo.automaton;
    let n = m.num_states() as StateId;
    let mut b = Builder::new(Alphabet::new(union(&[&ctx.sigma, &ctx.gamma_set])));
    for q in m.states() {
        b.add_state(m.label(q).clone(), true);
    }
    for q in m.states() {
        b.add_state(Label::name(format!("{}^com", m.label(q))), true);
    }
    let dump = b.add_state("oc_dump", true);
    let com = |q: StateId| q + n;
    for q in m.states() {
        let collected = m.enabled_set(q);
        for g in &ctx.gamma {
            let cmd = g.as_command().expect("command");
            if collected
                .iter()
                .all(|e| cmd.contains(e.base_name().expect("plain")))
            {
                b.add_edge(com(q), g, q)?;
            }
        }
        for e in &ctx.sigma_o {
            match m.successor(q, e) {
                Some(d) => b.add_edge(q, e, com(d))?,
                None => b.add_edge(q, e, dump)?,
            }
        }
        for e in &ctx.sigma_uo {
            b.add_edge(q, e, q)?;
        }
    }
    for e in ctx.sigma.iter().chain(&ctx.gamma_set) {
        b.add_edge(dump, e, dump)?;
    }
    let automaton = b.build(com(m.initial()))?;
    let reaction = automaton.states().map(|q| q < n).collect();
    Ok(Oc {
        automaton,
        reaction,
        dump,
    })
}

/// The observation-consistent estimate under attack, with its alarm state
/// marking broken covertness.
#[derive(Debug, Clone)]
pub struct Ocnsa {
    pub ocns: Product,
    pub attacked: Attacked,
}

pub fn build_ocnsa(ctx: &Context, ns: &Bipartite, oc: &Oc) -> Result<Ocnsa, SynthesisError> {
    let ocns = sync_product_tracked(&[&ns.automaton, &oc.automaton])?;
    let reaction: Vec<bool> = ocns
        .automaton
        .states()
        .map(|q| {
            let o = ocns.component(q, 1);
            ns.is_reaction(ocns.component(q, 0)) && (oc.reaction[o as usize] || o == oc.dump)
        })
        .collect();
    let base = Bipartite {
        automaton: ocns.automaton.clone(),
        reaction,
    };
    let attacked = encode_attack(ctx, &base, "cov_brk")?;
    let q_o = (oc.automaton.num_states() - 1) / 2;
    assert!(attacked.automaton.num_states() <= ns.automaton.num_states() * (2 * q_o + 1) + 1);
    Ok(Ocnsa { ocns, attacked })
}

/// The least permissive supervisor consistent with the observations: it
/// enables only what was observed plus the uncontrollable events.
pub fn build_sdown(ctx: &Context, mo: &ObservationAutomaton) -> Result<Automaton, SynthesisError> {
    let m = &mo.automaton;
    let mut b = Builder::new(Alphabet::new(ctx.sigma.iter().cloned()));
    for q in m.states() {
        b.add_state(m.label(q).clone(), true);
    }
    for q in m.states() {
        for (e, d) in m.edges(q) {
            b.add_edge(q, e, d)?;
        }
        for e in &ctx.sigma_uo {
            b.add_edge(q, e, q)?;
        }
        for e in ctx.sigma_uc.intersection(&ctx.sigma_o) {
            if !m.is_defined(q, e) {
                b.add_edge(q, e, mo.deadlock)?;
            }
        }
    }
    Ok(b.build(m.initial())?)
}

/// Completed least permissive supervisor under attack.
#[derive(Debug, Clone)]
pub struct SdownA {
    pub automaton: Automaton,
    pub risk: StateId,
    pub dump: StateId,
}

/// Attack encoding of the least permissive supervisor, then completion.
///
/// Only states of the observation automaton receive attack edges; the risk
/// state has no successors of its own, so everything after it falls into
/// the dump. A controllable observable event the supervisor never enables
/// reaches the risk state only if the attacker can enable it.
pub fn build_sdown_a(ctx: &Context, sdown: &Automaton) -> Result<SdownA, SynthesisError> {
    let s = sdown;
    let mut b = Builder::new(Alphabet::new(union(&[&ctx.sigma, &ctx.sigma_hash])));
    for q in s.states() {
        b.add_state(s.label(q).clone(), true);
    }
    let risk = b.add_state("risk", true);
    for q in s.states() {
        for (e, d) in s.edges(q) {
            if ctx.sigma_sa.contains(e) {
                b.add_edge(q, &e.to_relabeled(), d)?;
                b.add_edge(q, e, q)?;
            } else {
                b.add_edge(q, e, d)?;
            }
        }
        for e in &ctx.sigma_ca {
            if (ctx.sigma_uo.contains(e) || ctx.sigma_sa.contains(e)) && !s.is_defined(q, e) {
                b.add_edge(q, e, q)?;
            }
        }
        for e in &ctx.sigma_o {
            if s.is_defined(q, e) {
                continue;
            }
            if ctx.sigma_sa.contains(e) {
                b.add_edge(q, &e.to_relabeled(), risk)?;
            } else if ctx.sigma_ca.contains(e) {
                b.add_edge(q, e, risk)?;
            }
        }
    }
    let sa = b.build(s.initial())?;
    let full = union(&[&ctx.sigma, &ctx.sigma_hash]);
    let (completed, dump) = complete(&sa, &full, "dump")?;
    let automaton = completed.with_marking(|q| q != dump);
    assert_eq!(automaton.num_states(), s.num_states() + 2);
    Ok(SdownA {
        automaton,
        risk,
        dump,
    })
}

/// Sizes of the intermediate constructions.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct Sizes {
    pub commands: usize,
    pub ns: usize,
    pub ocnsa: usize,
    pub sdown_a: usize,
    pub plant: usize,
    pub attacker: usize,
}

#[derive(Debug, Clone)]
pub struct SynthesisReport {
    /// The attacker, completed so that it never disables an event it cannot
    /// control. Present iff `exists`.
    pub attacker: Option<Automaton>,
    pub exists: bool,
    pub sizes: Sizes,
    pub ns_engine: EngineStats,
    pub attacker_engine: EngineStats,
    /// Filled in by callers that measure time.
    pub elapsed: Option<Duration>,
    pub diagnostics: Vec<String>,
}

/// Every artifact of a synthesis run, for inspection and export.
#[derive(Debug, Clone)]
pub struct Artifacts {
    pub ac: Automaton,
    pub ce: Automaton,
    pub cea: Automaton,
    pub mo: ObservationAutomaton,
    pub ns: Bipartite,
    pub oc: Oc,
    pub ocnsa: Ocnsa,
    pub sdown: Automaton,
    pub sdown_a: SdownA,
    pub plant: Product,
    pub attacker_raw: Option<Automaton>,
}

impl Artifacts {
    /// Named automata in pipeline order.
    pub fn named(&self) -> Vec<(&'static str, &Automaton)> {
        let mut v = vec![
            ("ac", &self.ac),
            ("ce", &self.ce),
            ("cea", &self.cea),
            ("mo", &self.mo.automaton),
            ("ns", &self.ns.automaton),
            ("oc", &self.oc.automaton),
            ("ocns", &self.ocnsa.ocns.automaton),
            ("ocnsa", &self.ocnsa.attacked.automaton),
            ("sdown", &self.sdown),
            ("sdown-a", &self.sdown_a.automaton),
            ("attack-plant", &self.plant.automaton),
        ];
        if let Some(a) = &self.attacker_raw {
            v.push(("attacker-raw", a));
        }
        v
    }
}

/// Component order of the attack plant.
pub const PLANT: usize = 0;
pub const OCNSA: usize = 3;
pub const SDOWN_A: usize = 4;

/// The attacker's control constraint.
pub fn attacker_constraint(ctx: &Context) -> ControlConstraint {
    ControlConstraint {
        controllable: ctx.attacker_controllable(),
        observable: ctx.attacker_observable(),
    }
}

/// Adds what the engine leaves implicit so the attacker never disables an
/// event outside its control: unobservable uncontrollable events self-loop
/// everywhere, and observable uncontrollable events the plant can never
/// produce at a state lead to a sink that allows every such event.
pub fn complete_attacker(ctx: &Context, raw: &Automaton) -> Result<Automaton, SynthesisError> {
    let ctrl = ctx.attacker_controllable();
    let obs = ctx.attacker_observable();
    let all = ctx.attacker_alphabet();
    let unctrl: EventSet = all.difference(&ctrl).cloned().collect();
    let mut b = Builder::new(Alphabet::new(all.iter().cloned()));
    for q in raw.states() {
        b.add_state(raw.label(q).clone(), raw.is_marked(q));
    }
    for (q, e, d) in raw.transitions() {
        b.add_edge(q, e, d)?;
    }
    let mut sink = None;
    for q in raw.states() {
        for e in &unctrl {
            if b.has_edge(q, e) {
                continue;
            }
            if obs.contains(e) {
                let s = *sink.get_or_insert_with(|| b.add_state("a_sink", false));
                b.add_edge(q, e, s)?;
            } else {
                b.add_edge(q, e, q)?;
            }
        }
    }
    if let Some(s) = sink {
        for e in unctrl.iter().chain(core::iter::once(&Event::Stop)) {
            b.add_edge(s, e, s)?;
        }
    }
    Ok(b.build(raw.initial())?)
}

/// Runs the whole pipeline.
pub fn synthesize(ctx: &Context) -> Result<(SynthesisReport, Artifacts), SynthesisError> {
    let mut diagnostics = Vec::new();
    if let Some(w) = &ctx.warning {
        diagnostics.push(w.clone());
    }
    let ac = build_ac(ctx)?;
    let ce = build_ce(ctx)?;
    let cea = build_cea(ctx)?;
    let mo = build_mo(ctx)?;
    let ns = build_ns(ctx)?;
    let oc = build_oc(ctx, &mo)?;
    let ocnsa = build_ocnsa(ctx, &ns.ns, &oc)?;
    let sdown = build_sdown(ctx, &mo)?;
    let sdown_a = build_sdown_a(ctx, &sdown)?;

    let plant = sync_product_tracked(&[
        ctx.plant(),
        &cea,
        &ac,
        &ocnsa.attacked.automaton,
        &sdown_a.automaton,
    ])?;
    let p = &plant.automaton;
    let brk = ocnsa.attacked.alarm;
    let bad: Vec<bool> = p
        .states()
        .map(|q| !ctx.scenario.is_damage(plant.component(q, PLANT)) && plant.component(q, OCNSA) == brk)
        .collect();
    let sup = synth_supremal_safe(p, &bad, &attacker_constraint(ctx))?;

    let mut sizes = Sizes {
        commands: ctx.gamma.len(),
        ns: ns.ns.automaton.num_states(),
        ocnsa: ocnsa.attacked.automaton.num_states(),
        sdown_a: sdown_a.automaton.num_states(),
        plant: p.num_states(),
        attacker: 0,
    };
    let (attacker, attacker_raw, attacker_engine) = match sup {
        None => {
            diagnostics.push("covertness cannot be kept from the initial state".into());
            (None, None, EngineStats::default())
        }
        Some(sup) => {
            let closed = crate::fsa::sync_product(&[p, &sup.supervisor])?;
            if is_marker_reachable(&closed) {
                let a = complete_attacker(ctx, &sup.supervisor)?;
                sizes.attacker = a.num_states();
                (Some(a), Some(sup.supervisor), sup.stats)
            } else {
                diagnostics.push("the safe attacker cannot reach damage".into());
                (None, Some(sup.supervisor), sup.stats)
            }
        }
    };
    let report = SynthesisReport {
        exists: attacker.is_some(),
        attacker,
        sizes,
        ns_engine: ns.stats,
        attacker_engine,
        elapsed: None,
        diagnostics,
    };
    let artifacts = Artifacts {
        ac,
        ce,
        cea,
        mo,
        ns: ns.ns,
        oc,
        ocnsa,
        sdown,
        sdown_a,
        plant,
        attacker_raw,
    };
    Ok((report, artifacts))
}

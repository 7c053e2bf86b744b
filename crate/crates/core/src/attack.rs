//! Component models of the attacked control loop: control commands, sensor
//! attack constraints, command execution (with and without actuator attack),
//! bipartite supervisors with their embedded monitor, and the observation
//! automaton.

use alloc::collections::BTreeMap;
use alloc::format;
use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;

use crate::event::{Event, EventSet, Name};
use crate::fsa::{
    accepts, observer, sync_product_tracked, Acceptance, Alphabet, Automaton, Builder, FsaError, Label,
    StateId,
};
use crate::scenario::Scenario;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum AttackError {
    #[error("{count} controllable events give 2^{count} control commands; the limit is {limit} controllable events (reduce the controllable set or raise the limit)")]
    TooManyControllable { count: usize, limit: usize },
    #[error("{commands} control commands exceed the configured maximum of {limit}")]
    TooManyCommands { commands: usize, limit: usize },
    #[error("invalid supervisor: {0}")]
    InvalidSupervisor(String),
    #[error(transparent)]
    Fsa(#[from] FsaError),
}

/// Caps on the command set, which has `2^|controllable|` members.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct GammaLimits {
    /// Above this many commands a warning is attached to the context.
    pub warn_commands: usize,
    /// Hard cap on the number of controllable events.
    pub max_controllable: usize,
    /// Optional hard cap on the number of commands.
    pub max_commands: Option<usize>,
}

impl Default for GammaLimits {
    fn default() -> Self {
        GammaLimits {
            warn_commands: 1 << 16,
            max_controllable: 20,
            max_commands: None,
        }
    }
}

/// A scenario together with the derived event sets every construction uses.
#[derive(Debug, Clone)]
pub struct Context {
    pub scenario: Scenario,
    /// Commands in canonical order: bit `i` of the position selects the
    /// `i`-th controllable event (by name), so position 0 is the
    /// uncontrollable-only command.
    pub gamma: Vec<Event>,
    pub warning: Option<String>,
    pub sigma: EventSet,
    pub sigma_o: EventSet,
    pub sigma_uo: EventSet,
    pub sigma_c: EventSet,
    pub sigma_uc: EventSet,
    pub sigma_sa: EventSet,
    pub sigma_ca: EventSet,
    pub sigma_hash: EventSet,
    pub gamma_set: EventSet,
}

impl Context {
    pub fn new(scenario: Scenario) -> Result<Context, AttackError> {
        Context::with_limits(scenario, GammaLimits::default())
    }

    pub fn with_limits(scenario: Scenario, limits: GammaLimits) -> Result<Context, AttackError> {
        let (gamma, warning) = build_gamma(&scenario, limits)?;
        Ok(Context {
            gamma_set: gamma.iter().cloned().collect(),
            gamma,
            warning,
            sigma: scenario.sigma(),
            sigma_o: scenario.observable(),
            sigma_uo: scenario.unobservable(),
            sigma_c: scenario.controllable(),
            sigma_uc: scenario.uncontrollable(),
            sigma_sa: scenario.compromised(),
            sigma_ca: scenario.attackable(),
            sigma_hash: scenario.relabeled(),
            scenario,
        })
    }

    pub fn plant(&self) -> &Automaton {
        self.scenario.plant()
    }

    /// The command that enables only uncontrollable events.
    pub fn uncontrollable_command(&self) -> &Event {
        &self.gamma[0]
    }

    /// The attacker's full alphabet: plant events, `#` copies, commands, stop.
    pub fn attacker_alphabet(&self) -> EventSet {
        let mut s = self.sigma.clone();
        s.extend(self.sigma_hash.iter().cloned());
        s.extend(self.gamma_set.iter().cloned());
        s.insert(Event::Stop);
        s
    }

    /// Events the attacker may disable.
    pub fn attacker_controllable(&self) -> EventSet {
        let mut s = self.sigma_ca.clone();
        s.extend(self.sigma_hash.iter().cloned());
        s.insert(Event::Stop);
        s
    }

    /// Events the attacker sees.
    pub fn attacker_observable(&self) -> EventSet {
        let mut s = self.sigma_o.clone();
        s.extend(self.sigma_hash.iter().cloned());
        s.insert(Event::Stop);
        s
    }
}

fn names(set: &EventSet) -> Vec<Name> {
    set.iter().filter_map(|e| e.base_name().cloned()).collect()
}

/// All commands `Σ_uc ∪ X` for `X ⊆ Σ_c`, in canonical bitmask order.
pub fn build_gamma(sc: &Scenario, limits: GammaLimits) -> Result<(Vec<Event>, Option<String>), AttackError> {
    let ctl = names(&sc.controllable());
    let unc = names(&sc.uncontrollable());
    if ctl.len() > limits.max_controllable {
        return Err(AttackError::TooManyControllable {
            count: ctl.len(),
            limit: limits.max_controllable,
        });
    }
    let count = 1usize << ctl.len();
    if let Some(limit) = limits.max_commands {
        if count > limit {
            return Err(AttackError::TooManyCommands {
                commands: count,
                limit,
            });
        }
    }
    let warning = (count > limits.warn_commands)
        .then(|| format!("{count} control commands; constructions will be large"));
    let gamma = (0..count)
        .map(|mask| {
            let extra = ctl
                .iter()
                .enumerate()
                .filter(|(i, _)| mask >> i & 1 == 1)
                .map(|(_, n)| n.clone());
            Event::command(unc.iter().cloned().chain(extra))
        })
        .collect();
    Ok((gamma, warning))
}

fn union(parts: &[&EventSet]) -> EventSet {
    parts.iter().flat_map(|s| s.iter().cloned()).collect()
}

fn alphabet(parts: &[&EventSet]) -> Alphabet {
    Alphabet::new(union(parts))
}

/// Sensor attack constraints: every observation is immediately followed by a
/// `#` replacement (compromised events only) or `stop`.
pub fn build_ac(ctx: &Context) -> Result<Automaton, AttackError> {
    let stop: EventSet = [Event::Stop].into_iter().collect();
    let mut b = Builder::new(alphabet(&[&ctx.sigma, &ctx.sigma_hash, &ctx.gamma_set, &stop]));
    let init = b.add_state("ac_init", true);
    let q0 = b.add_state("ac_q0", true);
    let q1 = b.add_state("ac_q1", true);
    for e in ctx.sigma_uo.iter().chain(&ctx.gamma_set) {
        b.add_edge(init, e, init)?;
    }
    for e in &ctx.sigma_o {
        let to = if ctx.sigma_sa.contains(e) { q0 } else { q1 };
        b.add_edge(init, e, to)?;
    }
    for e in &ctx.sigma_hash {
        b.add_edge(q0, e, q1)?;
    }
    b.add_edge(q0, &Event::Stop, init)?;
    b.add_edge(q1, &Event::Stop, init)?;
    let ac = b.build(init)?;
    assert_eq!(ac.num_states(), 3);
    Ok(ac)
}

fn command_members(e: &Event) -> &[Name] {
    e.as_command().expect("command event").members()
}

fn build_ce_inner(ctx: &Context, attacked: bool) -> Result<Automaton, AttackError> {
    let mut b = Builder::new(alphabet(&[&ctx.sigma, &ctx.gamma_set]));
    let init = b.add_state("ce_init", true);
    let states: Vec<StateId> = ctx
        .gamma
        .iter()
        .map(|g| b.add_state(Label::name(format!("ce_{g}")), true))
        .collect();
    for (g, &q) in ctx.gamma.iter().zip(&states) {
        b.add_edge(init, g, q)?;
        for n in command_members(g) {
            let e = Event::Plain(n.clone());
            let to = if ctx.sigma_o.contains(&e) { init } else { q };
            b.add_edge(q, &e, to)?;
        }
        if attacked {
            for e in &ctx.sigma_ca {
                let to = if ctx.sigma_o.contains(e) { init } else { q };
                b.add_edge(q, e, to)?;
            }
        }
    }
    if attacked {
        for e in &ctx.sigma_uc {
            b.add_edge(init, e, init)?;
        }
    }
    let ce = b.build(init)?;
    assert_eq!(ce.num_states(), ctx.gamma.len() + 1);
    Ok(ce)
}

/// Command execution: a command is latched, then one of its events fires.
pub fn build_ce(ctx: &Context) -> Result<Automaton, AttackError> {
    build_ce_inner(ctx, false)
}

/// Command execution under actuator attack.
pub fn build_cea(ctx: &Context) -> Result<Automaton, AttackError> {
    build_ce_inner(ctx, true)
}

/// A two-layer automaton: control states issue commands, reaction states
/// react to plant events.
#[derive(Clone, Debug)]
pub struct Bipartite {
    pub automaton: Automaton,
    pub reaction: Vec<bool>,
}

impl Bipartite {
    pub fn is_reaction(&self, q: StateId) -> bool {
        self.reaction[q as usize]
    }
}

/// A bipartite structure extended with an absorbing alarm state
/// (detection for a supervisor, covertness broken for the estimate).
#[derive(Clone, Debug)]
pub struct Attacked {
    pub automaton: Automaton,
    pub reaction: Vec<bool>,
    pub alarm: StateId,
}

/// Checks controllability and observability of a supervisor over the
/// scenario's events and returns it over the full plant alphabet.
pub fn validate_supervisor(ctx: &Context, s: &Automaton) -> Result<Automaton, AttackError> {
    let mut problems = Vec::new();
    for e in s.alphabet() {
        if !ctx.sigma.contains(e) {
            problems.push(format!("event `{e}` is not a plant event"));
        }
    }
    if !problems.is_empty() {
        return Err(AttackError::InvalidSupervisor(problems.join("; ")));
    }
    let s = s.lift_alphabet(&ctx.sigma);
    for q in s.states() {
        for e in &ctx.sigma_uc {
            if !s.is_defined(q, e) {
                problems.push(format!("state `{}` disables uncontrollable `{e}`", s.label(q)));
            }
        }
        for e in &ctx.sigma_uo {
            if let Some(d) = s.successor(q, e) {
                if d != q {
                    problems.push(format!("state `{}` moves on unobservable `{e}`", s.label(q)));
                }
            }
        }
    }
    if problems.is_empty() {
        return Ok(s);
    }
    let extra = problems.len().saturating_sub(6);
    problems.truncate(6);
    if extra > 0 {
        problems.push(format!("{extra} more"));
    }
    Err(AttackError::InvalidSupervisor(problems.join("; ")))
}

fn com_label(l: &Label) -> Label {
    Label::name(format!("{l}^com"))
}

/// Bipartite form of a supervisor: each state becomes a control state that
/// issues the state's enabled set, followed by a reaction state.
pub fn build_bt(ctx: &Context, s: &Automaton) -> Result<Bipartite, AttackError> {
    let s = validate_supervisor(ctx, s)?;
    let mut b = Builder::new(alphabet(&[&ctx.sigma, &ctx.gamma_set]));
    let mut reaction = Vec::new();
    for q in s.states() {
        b.add_state(com_label(s.label(q)), true);
        b.add_state(s.label(q).clone(), true);
        reaction.extend([false, true]);
    }
    let com = |q: StateId| 2 * q;
    let rea = |q: StateId| 2 * q + 1;
    for q in s.states() {
        let cmd = Event::command(s.enabled(q).filter_map(|e| e.base_name().cloned()));
        b.add_edge(com(q), &cmd, rea(q))?;
        for (e, d) in s.edges(q) {
            if ctx.sigma_o.contains(e) {
                b.add_edge(rea(q), e, com(d))?;
            } else {
                b.add_edge(rea(q), e, rea(q))?;
            }
        }
    }
    let automaton = b.build(com(s.initial()))?;
    Ok(Bipartite { automaton, reaction })
}

/// Monitor of everything outside the supervisor: the plant with command
/// execution, observed through observable events and commands.
pub fn universal_monitor(ctx: &Context, ce: &Automaton) -> Result<Automaton, AttackError> {
    let g = ctx.plant().fully_marked();
    let gce = crate::fsa::sync_product(&[&g, ce])?;
    Ok(observer(&gce, &union(&[&ctx.sigma_o, &ctx.gamma_set]))?)
}

/// The bipartite supervisor refined by the universal monitor.
pub fn build_bts1(ctx: &Context, bt: &Bipartite, ce: &Automaton) -> Result<Bipartite, AttackError> {
    let monitor = universal_monitor(ctx, ce)?;
    let p = sync_product_tracked(&[&bt.automaton, &monitor])?;
    let reaction = p
        .automaton
        .states()
        .map(|q| bt.is_reaction(p.component(q, 0)))
        .collect();
    Ok(Bipartite {
        automaton: p.automaton,
        reaction,
    })
}

/// Shared attack encoding for a bipartite structure: compromised events are
/// seen as their `#` copies, attackable events the structure cannot see
/// self-loop at reaction states, and observations that could not occur
/// without attack lead to the alarm state.
pub(crate) fn encode_attack(
    ctx: &Context,
    base: &Bipartite,
    alarm_label: &str,
) -> Result<Attacked, AttackError> {
    let a = &base.automaton;
    let mut b = Builder::new(alphabet(&[&ctx.sigma, &ctx.sigma_hash, &ctx.gamma_set]));
    for q in a.states() {
        b.add_state(a.label(q).clone(), a.is_marked(q));
    }
    let alarm = b.add_state(alarm_label, true);
    let hidden: EventSet = ctx
        .sigma_ca
        .iter()
        .filter(|e| ctx.sigma_uo.contains(*e) || ctx.sigma_sa.contains(*e))
        .cloned()
        .collect();
    for q in a.states() {
        for (e, d) in a.edges(q) {
            if ctx.sigma_sa.contains(e) {
                b.add_edge(q, &e.to_relabeled(), d)?;
                b.add_edge(q, e, q)?;
            } else {
                b.add_edge(q, e, d)?;
            }
        }
        if !base.is_reaction(q) {
            continue;
        }
        for e in &hidden {
            b.add_edge(q, e, q)?;
        }
        for e in &ctx.sigma_o {
            if !a.is_defined(q, e) {
                let seen = if ctx.sigma_sa.contains(e) {
                    e.to_relabeled()
                } else {
                    e.clone()
                };
                b.add_edge(q, &seen, alarm)?;
            }
        }
    }
    let automaton = b.build(a.initial())?;
    let mut reaction = base.reaction.clone();
    reaction.push(false);
    Ok(Attacked {
        automaton,
        reaction,
        alarm,
    })
}

/// The bipartite supervisor with embedded monitor under sensor-actuator
/// attack. The alarm state is the detection state.
pub fn build_btsa(ctx: &Context, bts1: &Bipartite) -> Result<Attacked, AttackError> {
    encode_attack(ctx, bts1, "detect")
}

/// Prefix tree of the observations with all maximal observations ending in
/// one shared deadlock state.
#[derive(Clone, Debug)]
pub struct ObservationAutomaton {
    pub automaton: Automaton,
    pub deadlock: StateId,
}

pub fn build_mo(ctx: &Context) -> Result<ObservationAutomaton, AttackError> {
    let obs = ctx.scenario.observations();
    let is_maximal = |w: &Vec<Event>| {
        !obs.range(w.clone()..)
            .any(|v| v.len() > w.len() && v.starts_with(w))
    };
    let mut b = Builder::new(Alphabet::new(ctx.sigma_o.iter().cloned()));
    let root_is_leaf = is_maximal(&Vec::new());
    let mut ids: BTreeMap<Vec<Event>, StateId> = BTreeMap::new();
    let mut deadlock = None;
    // shortest-first so parents exist before children
    let mut words: Vec<&Vec<Event>> = obs.iter().collect();
    words.sort_by(|x, y| x.len().cmp(&y.len()).then(x.cmp(y)));
    for w in words {
        let id = if is_maximal(w) {
            *deadlock.get_or_insert_with(|| b.add_state("o_dl", true))
        } else {
            let n = ids.len();
            b.add_state(Label::name(format!("o{n}")), true)
        };
        ids.insert(w.clone(), id);
        if let Some((last, prefix)) = w.split_last() {
            let parent = ids[prefix];
            b.add_edge(parent, last, id)?;
        }
    }
    let init = ids[&Vec::new()];
    debug_assert!(!root_is_leaf || deadlock == Some(init));
    let automaton = b.build(init)?;
    Ok(ObservationAutomaton {
        automaton,
        deadlock: deadlock.expect("observations are finite"),
    })
}

/// Closed loop `G ‖ CE ‖ BT(S)` with the plant fully marked.
fn unattacked_loop(ctx: &Context, s: &Automaton) -> Result<crate::fsa::Product, AttackError> {
    let ce = build_ce(ctx)?;
    let bt = build_bt(ctx, s)?;
    let g = ctx.plant().fully_marked();
    Ok(sync_product_tracked(&[&g, &ce, &bt.automaton])?)
}

/// First observation not producible by the supervised plant, if any.
pub fn inconsistent_observation(ctx: &Context, s: &Automaton) -> Result<Option<Vec<Event>>, AttackError> {
    let closed = unattacked_loop(ctx, s)?;
    let proj = observer(&closed.automaton, &ctx.sigma_o)?;
    for w in ctx.scenario.maximal_observations() {
        if accepts(&proj, &w)? == Acceptance::Rejected {
            return Ok(Some(w));
        }
    }
    Ok(None)
}

/// Whether every observation is producible by the supervised plant.
pub fn check_consistency(ctx: &Context, s: &Automaton) -> Result<bool, AttackError> {
    Ok(inconsistent_observation(ctx, s)?.is_none())
}

/// Whether no damage state is reachable in the unattacked closed loop.
pub fn check_safe(ctx: &Context, s: &Automaton) -> Result<bool, AttackError> {
    let closed = unattacked_loop(ctx, s)?;
    Ok(closed
        .automaton
        .states()
        .all(|q| !ctx.scenario.is_damage(closed.component(q, 0))))
}

/// Collapses every control state of a bipartite supervisor onto its
/// reaction state, recovering an ordinary supervisor over plant events.
pub fn merge_bipartite(ctx: &Context, bt: &Bipartite) -> Result<Automaton, AttackError> {
    let a = &bt.automaton;
    let mut b = Builder::new(Alphabet::new(ctx.sigma.iter().cloned()));
    let mut map = vec![None; a.num_states()];
    for q in a.states() {
        if bt.is_reaction(q) {
            map[q as usize] = Some(b.add_state(a.label(q).clone(), true));
        }
    }
    let target = |q: StateId| -> StateId {
        if bt.is_reaction(q) {
            map[q as usize].unwrap()
        } else {
            let (_, r) = a.edges_at(q).next().expect("control state issues a command");
            map[r as usize].unwrap()
        }
    };
    for q in a.states().filter(|&q| bt.is_reaction(q)) {
        for (e, d) in a.edges(q) {
            b.add_edge(map[q as usize].unwrap(), e, target(d))?;
        }
    }
    Ok(b.build(target(a.initial()))?)
}

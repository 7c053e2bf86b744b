//! The attacked closed loop, covertness and damage checks, and the
//! brute-force oracles used to cross-check synthesis.

use alloc::collections::{BTreeMap, BTreeSet, VecDeque};
use alloc::format;
use alloc::string::{String, ToString};
use alloc::vec;
use alloc::vec::Vec;

use hashbrown::HashMap;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::attack::{
    build_ac, build_bt, build_bts1, build_btsa, build_ce, build_cea, build_mo, check_consistency, check_safe,
    AttackError, Context,
};
use crate::event::{Event, EventSet};
use crate::fsa::{
    is_marker_reachable, language_equivalent, sync_product_tracked, Alphabet, Automaton, Builder, FsaError,
    Label, Product, StateId,
};
use crate::synthesis::{build_ns, build_oc, ControlConstraint, SynthesisError};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum VerifyError {
    #[error("invalid attacker: {0}")]
    InvalidAttacker(String),
    #[error("oracle refused: {0}")]
    OracleLimit(String),
    #[error(transparent)]
    Attack(#[from] AttackError),
    #[error(transparent)]
    Synthesis(#[from] SynthesisError),
    #[error(transparent)]
    Fsa(#[from] FsaError),
}

/// Component positions inside a closed loop.
pub const PLANT: usize = 0;
pub const CEA: usize = 1;
pub const AC: usize = 2;
pub const SUPERVISOR: usize = 3;
pub const ATTACKER: usize = 4;

/// The attacked closed loop `G ‖ CE^A ‖ AC ‖ BT(S)^A ‖ A`; marked states are
/// those whose plant component is a damage state.
#[derive(Debug, Clone)]
pub struct ClosedLoop {
    pub product: Product,
    pub automaton: Automaton,
    pub detect: StateId,
    damage: Vec<bool>,
}

impl ClosedLoop {
    pub fn plant_state(&self, q: StateId) -> StateId {
        self.product.component(q, PLANT)
    }

    pub fn is_detected(&self, q: StateId) -> bool {
        self.product.component(q, SUPERVISOR) == self.detect
    }

    /// Whether `q` is a state where the attack is exposed before damage.
    pub fn is_exposed(&self, q: StateId) -> bool {
        self.is_detected(q) && !self.damage[self.plant_state(q) as usize]
    }
}

/// Checks that `a` never disables an event outside the attacker's control
/// and only self-loops on events it cannot see. Returns it over the full
/// attacker alphabet.
pub fn validate_attacker(ctx: &Context, a: &Automaton) -> Result<Automaton, VerifyError> {
    let all = ctx.attacker_alphabet();
    if let Some(e) = a.alphabet().iter().find(|e| !all.contains(*e)) {
        return Err(VerifyError::InvalidAttacker(format!(
            "event `{e}` is not an attacker event"
        )));
    }
    let a = a.lift_alphabet(&all);
    let ctrl = ctx.attacker_controllable();
    let obs = ctx.attacker_observable();
    let mut problems = Vec::new();
    for q in a.states() {
        for e in all.iter().filter(|e| !ctrl.contains(*e)) {
            if !a.is_defined(q, e) {
                problems.push(format!("state `{}` disables uncontrollable `{e}`", a.label(q)));
            }
        }
        for e in all.iter().filter(|e| !obs.contains(*e)) {
            if let Some(d) = a.successor(q, e) {
                if d != q {
                    problems.push(format!("state `{}` moves on unobservable `{e}`", a.label(q)));
                }
            }
        }
    }
    if problems.is_empty() {
        Ok(a)
    } else {
        problems.truncate(8);
        Err(VerifyError::InvalidAttacker(problems.join("; ")))
    }
}

/// The attacker that never attacks: it allows everything it cannot control,
/// ends every attack round with `stop`, and never sends `#` events or
/// enables attackable events.
pub fn null_attacker(ctx: &Context) -> Automaton {
    let all = ctx.attacker_alphabet();
    let ctrl = ctx.attacker_controllable();
    let mut b = Builder::new(Alphabet::new(all.iter().cloned()));
    let q = b.add_state("null", true);
    for e in all.iter().filter(|e| !ctrl.contains(*e)) {
        b.add_edge(q, e, q).expect("fresh state");
    }
    b.add_edge(q, &Event::Stop, q).expect("fresh state");
    b.build(q).expect("one state")
}

/// The attacker that forwards every compromised reading unchanged: after
/// `σ` it sends `σ#`, then `stop`. Attackable events stay disabled. Unlike
/// [`null_attacker`], which withholds compromised readings, this one is
/// harmless against any safe consistent supervisor.
pub fn relay_attacker(ctx: &Context) -> Automaton {
    let all = ctx.attacker_alphabet();
    let ctrl = ctx.attacker_controllable();
    let mut b = Builder::new(Alphabet::new(all.iter().cloned()));
    let relay = b.add_state("relay", true);
    let echo: Vec<(Event, StateId)> = ctx
        .sigma_sa
        .iter()
        .map(|e| (e.clone(), b.add_state(Label::name(format!("echo_{e}")), true)))
        .collect();
    for e in all.iter().filter(|e| !ctrl.contains(*e)) {
        let to = echo.iter().find(|(s, _)| s == e).map_or(relay, |&(_, q)| q);
        b.add_edge(relay, e, to).expect("fresh state");
        for &(_, q) in &echo {
            let to = if ctx.sigma_o.contains(e) { relay } else { q };
            b.add_edge(q, e, to).expect("fresh state");
        }
    }
    b.add_edge(relay, &Event::Stop, relay).expect("fresh state");
    for (e, q) in &echo {
        b.add_edge(*q, &e.to_relabeled(), relay).expect("fresh state");
    }
    b.build(relay).expect("relay state exists")
}

pub fn assemble_closed_loop(ctx: &Context, s: &Automaton, a: &Automaton) -> Result<ClosedLoop, VerifyError> {
    let a = validate_attacker(ctx, a)?;
    let ce = build_ce(ctx)?;
    let cea = build_cea(ctx)?;
    let ac = build_ac(ctx)?;
    let bt = build_bt(ctx, s)?;
    let bts1 = build_bts1(ctx, &bt, &ce)?;
    let btsa = build_btsa(ctx, &bts1)?;
    let product = sync_product_tracked(&[ctx.plant(), &cea, &ac, &btsa.automaton, &a])?;
    let damage: Vec<bool> = ctx.plant().states().map(|q| ctx.scenario.is_damage(q)).collect();
    let automaton = product
        .automaton
        .with_marking(|q| damage[product.component(q, PLANT) as usize]);
    Ok(ClosedLoop {
        product,
        automaton,
        detect: btsa.alarm,
        damage,
    })
}

/// No reachable state exposes the attack before damage.
pub fn check_covert(b: &ClosedLoop) -> bool {
    b.automaton.states().all(|q| !b.is_exposed(q))
}

pub fn check_damage_reachable(b: &ClosedLoop) -> bool {
    is_marker_reachable(&b.automaton)
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SupervisorVerdict {
    pub index: usize,
    /// Why the supervisor was left out, if it was.
    pub excluded: Option<String>,
    pub covert: bool,
    pub damage: bool,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SuccessReport {
    pub per_supervisor: Vec<SupervisorVerdict>,
    /// No supervisor was actually checked.
    pub vacuous: bool,
    pub successful: bool,
}

/// Checks an attacker against each supervisor that is safe and consistent
/// with the observations; others are reported and skipped.
pub fn check_successful(
    ctx: &Context,
    a: &Automaton,
    supervisors: &[Automaton],
) -> Result<SuccessReport, VerifyError> {
    let mut per = Vec::new();
    for (index, s) in supervisors.iter().enumerate() {
        let excluded = if !check_safe(ctx, s)? {
            Some("supervisor is not safe".to_string())
        } else if !check_consistency(ctx, s)? {
            Some("supervisor is not consistent with the observations".to_string())
        } else {
            None
        };
        let (covert, damage) = if excluded.is_none() {
            let b = assemble_closed_loop(ctx, s, a)?;
            (check_covert(&b), check_damage_reachable(&b))
        } else {
            (false, false)
        };
        per.push(SupervisorVerdict {
            index,
            excluded,
            covert,
            damage,
        });
    }
    let checked: Vec<&SupervisorVerdict> = per.iter().filter(|v| v.excluded.is_none()).collect();
    Ok(SuccessReport {
        vacuous: checked.is_empty(),
        successful: checked.iter().all(|v| v.covert && v.damage),
        per_supervisor: per,
    })
}

/// Supervisors drawn from the embedded structure of all safe
/// observation-consistent supervisors.
#[derive(Debug, Clone)]
pub struct SupervisorSample {
    pub supervisors: Vec<Automaton>,
    pub seed: u64,
    pub candidates_tried: usize,
    pub diagnostic: Option<String>,
}

/// Resolves the command choices of the observation-consistent estimate into
/// concrete supervisors. A supervisor state is an estimate control state
/// plus the number of observations so far, clamped at `depth`; each
/// candidate fixes one command per such state. Candidates are: each root
/// command with the smallest command elsewhere, the largest command
/// everywhere, then seeded random choices. Survivors are safe, consistent
/// and pairwise language-distinct.
pub fn enumerate_consistent_supervisors(
    ctx: &Context,
    depth: usize,
    count: usize,
    seed: u64,
) -> Result<SupervisorSample, VerifyError> {
    let ns = build_ns(ctx)?;
    let mo = build_mo(ctx)?;
    let oc = build_oc(ctx, &mo)?;
    let ocns = crate::fsa::sync_product(&[&ns.ns.automaton, &oc.automaton])?;
    let depth = depth.max(1);

    let options = |c: StateId| -> Vec<Event> {
        let mut v: Vec<Event> = ocns.enabled(c).filter(|e| e.is_command()).cloned().collect();
        v.sort_by_key(|e| e.as_command().map(|c| c.len()).unwrap_or(0));
        v
    };
    let root = ocns.initial();
    let root_options = options(root);

    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut out: Vec<Automaton> = Vec::new();
    let mut tried = 0;
    let max_tries = root_options.len() + 1 + count.max(1) * 24;
    while out.len() < count && tried < max_tries {
        let k = tried;
        tried += 1;
        let s = resolve(
            ctx,
            &ocns,
            depth,
            |c, d, opts| {
                if k < root_options.len() {
                    if c == root && d == 0 {
                        root_options[k].clone()
                    } else {
                        opts[0].clone()
                    }
                } else if k == root_options.len() {
                    opts[opts.len() - 1].clone()
                } else {
                    opts[rng.gen_range(0..opts.len())].clone()
                }
            },
            &options,
        )?;
        if !check_safe(ctx, &s)? || !check_consistency(ctx, &s)? {
            continue;
        }
        if out.iter().any(|t| language_equivalent(t, &s).closed) {
            continue;
        }
        out.push(s);
    }
    let diagnostic = if out.is_empty() {
        Some(format!(
            "no candidate among {tried} survived safety and consistency checks"
        ))
    } else if out.len() < count {
        Some(format!(
            "only {} distinct supervisors found in {tried} candidates",
            out.len()
        ))
    } else {
        None
    };
    Ok(SupervisorSample {
        supervisors: out,
        seed,
        candidates_tried: tried,
        diagnostic,
    })
}

fn resolve(
    ctx: &Context,
    ocns: &Automaton,
    depth: usize,
    mut pick: impl FnMut(StateId, usize, &[Event]) -> Event,
    options: &impl Fn(StateId) -> Vec<Event>,
) -> Result<Automaton, VerifyError> {
    let mut b = Builder::new(Alphabet::new(ctx.sigma.iter().cloned()));
    let mut ids: HashMap<(StateId, usize), StateId> = HashMap::new();
    let mut queue = VecDeque::new();
    let mut idle = None;
    let start = (ocns.initial(), 0);
    let s0 = b.add_state(Label::name(format!("c{}_{}", start.0, start.1)), true);
    ids.insert(start, s0);
    queue.push_back(start);
    while let Some((c, d)) = queue.pop_front() {
        let me = ids[&(c, d)];
        let opts = options(c);
        if opts.is_empty() {
            // the estimate has no command here; only uncontrollable events
            let cmd = ctx.uncontrollable_command().clone();
            add_command_edges(ctx, &mut b, me, &cmd, |_| None, &mut idle)?;
            continue;
        }
        let cmd = pick(c, d, &opts);
        let r = ocns.successor(c, &cmd).expect("picked an enabled command");
        let next_d = (d + 1).min(depth);
        let targets = add_command_edges(ctx, &mut b, me, &cmd, |e| ocns.successor(r, e), &mut idle)?;
        for (e, c2) in targets {
            let key = (c2, next_d);
            let id = match ids.get(&key) {
                Some(&id) => id,
                None => {
                    let id = b.add_state(Label::name(format!("c{}_{}", c2, next_d)), true);
                    ids.insert(key, id);
                    queue.push_back(key);
                    id
                }
            };
            b.add_edge(me, &e, id)?;
        }
    }
    Ok(b.build(s0)?)
}

/// Adds the unobservable self-loops and idle-sink edges of a command and
/// returns the observable events that continue in the estimate.
fn add_command_edges(
    ctx: &Context,
    b: &mut Builder,
    me: StateId,
    cmd: &Event,
    next: impl Fn(&Event) -> Option<StateId>,
    idle: &mut Option<StateId>,
) -> Result<Vec<(Event, StateId)>, VerifyError> {
    let mut cont = Vec::new();
    for n in cmd.as_command().expect("command").members() {
        let e = Event::Plain(n.clone());
        if ctx.sigma_uo.contains(&e) {
            b.add_edge(me, &e, me)?;
        } else if let Some(c2) = next(&e) {
            cont.push((e, c2));
        } else {
            let sink = idle_state(ctx, b, idle)?;
            b.add_edge(me, &e, sink)?;
        }
    }
    Ok(cont)
}

fn idle_state(ctx: &Context, b: &mut Builder, idle: &mut Option<StateId>) -> Result<StateId, VerifyError> {
    if let Some(s) = *idle {
        return Ok(s);
    }
    let s = b.add_state("idle", true);
    for e in &ctx.sigma_uc {
        b.add_edge(s, e, s)?;
    }
    *idle = Some(s);
    Ok(s)
}

/// Caps for the exhaustive policy search.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct OracleCaps {
    pub max_cells: usize,
    pub max_controllable: usize,
}

impl Default for OracleCaps {
    fn default() -> Self {
        OracleCaps {
            max_cells: 12,
            max_controllable: 6,
        }
    }
}

/// Exhaustive reference for supremal safe synthesis. Enumerates every
/// assignment of enabled controllable events to the observation cells the
/// closed loop reaches, keeps the assignments that never reach `bad`, and
/// returns the supervisor of the one whose closed loop contains all others.
/// Written independently of the observer and containment code in `fsa`.
pub fn brute_force_supremal(
    plant: &Automaton,
    bad: &[bool],
    cc: &ControlConstraint,
    caps: OracleCaps,
) -> Result<Option<Automaton>, VerifyError> {
    if cc.controllable.len() > caps.max_controllable {
        return Err(VerifyError::OracleLimit(format!(
            "{} controllable events (cap {})",
            cc.controllable.len(),
            caps.max_controllable
        )));
    }
    let n_ev = plant.alphabet().len();
    let ctrl: Vec<bool> = plant
        .alphabet()
        .iter()
        .map(|e| cc.controllable.contains(e))
        .collect();
    let obs: Vec<bool> = plant
        .alphabet()
        .iter()
        .map(|e| cc.observable.contains(e))
        .collect();
    let mut search = Search {
        plant,
        bad,
        ctrl,
        obs,
        n_ev,
        cells: Vec::new(),
        index: BTreeMap::new(),
        caps,
        safe: Vec::new(),
    };
    let init = search.intern(search.closure(vec![plant.initial()]))?;
    let mut policy: BTreeMap<usize, Vec<bool>> = BTreeMap::new();
    search.dfs(init, &mut policy)?;

    let safe = core::mem::take(&mut search.safe);
    let loops: Vec<Automaton> = safe
        .iter()
        .map(|p| search.supervisor(init, p))
        .collect::<Result<_, _>>()?;
    let closed: Vec<Automaton> = loops
        .iter()
        .map(|s| crate::fsa::sync_product(&[plant, s]))
        .collect::<Result<_, _>>()?;
    for (i, ci) in closed.iter().enumerate() {
        if closed.iter().all(|cj| pairs_included(cj, ci)) {
            return Ok(Some(loops[i].clone()));
        }
    }
    if loops.is_empty() {
        Ok(None)
    } else {
        Err(VerifyError::OracleLimit(
            "no safe policy contains all others".into(),
        ))
    }
}

struct Search<'a> {
    plant: &'a Automaton,
    bad: &'a [bool],
    ctrl: Vec<bool>,
    obs: Vec<bool>,
    n_ev: usize,
    cells: Vec<BTreeSet<StateId>>,
    index: BTreeMap<BTreeSet<StateId>, usize>,
    caps: OracleCaps,
    safe: Vec<BTreeMap<usize, Vec<bool>>>,
}

impl Search<'_> {
    fn closure(&self, seed: Vec<StateId>) -> BTreeSet<StateId> {
        let mut out: BTreeSet<StateId> = BTreeSet::new();
        let mut stack = seed;
        while let Some(q) = stack.pop() {
            if out.insert(q) {
                for (e, d) in self.plant.edges_at(q) {
                    if !self.obs[e] {
                        stack.push(d);
                    }
                }
            }
        }
        out
    }

    fn intern(&mut self, cell: BTreeSet<StateId>) -> Result<usize, VerifyError> {
        if let Some(&i) = self.index.get(&cell) {
            return Ok(i);
        }
        if self.cells.len() >= self.caps.max_cells {
            return Err(VerifyError::OracleLimit(format!(
                "more than {} cells",
                self.caps.max_cells
            )));
        }
        self.cells.push(cell.clone());
        self.index.insert(cell, self.cells.len() - 1);
        Ok(self.cells.len() - 1)
    }

    /// Successor cell of `c` on observable event `e`, if any member moves.
    fn step(&mut self, c: usize, e: usize) -> Result<Option<usize>, VerifyError> {
        let img: Vec<StateId> = self.cells[c]
            .iter()
            .filter_map(|&q| self.plant.successor_at(q, e))
            .collect();
        if img.is_empty() {
            return Ok(None);
        }
        let cell = self.closure(img);
        self.intern(cell).map(Some)
    }

    fn defined_in(&self, c: usize, e: usize) -> bool {
        self.cells[c]
            .iter()
            .any(|&q| self.plant.successor_at(q, e).is_some())
    }

    /// Cells reached under a partial policy; the first unassigned one is
    /// returned separately. `Err` on reaching a bad cell is encoded as None.
    fn explore(
        &mut self,
        init: usize,
        policy: &BTreeMap<usize, Vec<bool>>,
    ) -> Result<Option<Option<usize>>, VerifyError> {
        let mut seen = BTreeSet::new();
        let mut queue = VecDeque::from([init]);
        seen.insert(init);
        while let Some(c) = queue.pop_front() {
            if self.cells[c].iter().any(|&q| self.bad[q as usize]) {
                return Ok(None);
            }
            let Some(en) = policy.get(&c) else {
                return Ok(Some(Some(c)));
            };
            let en = en.clone();
            for e in 0..self.n_ev {
                if !self.obs[e] || (self.ctrl[e] && !en[e]) {
                    continue;
                }
                if let Some(d) = self.step(c, e)? {
                    if seen.insert(d) {
                        queue.push_back(d);
                    }
                }
            }
        }
        Ok(Some(None))
    }

    fn dfs(&mut self, init: usize, policy: &mut BTreeMap<usize, Vec<bool>>) -> Result<(), VerifyError> {
        match self.explore(init, policy)? {
            None => Ok(()),
            Some(None) => {
                self.safe.push(policy.clone());
                Ok(())
            }
            Some(Some(c)) => {
                let choices: Vec<usize> = (0..self.n_ev)
                    .filter(|&e| self.ctrl[e] && self.defined_in(c, e))
                    .collect();
                for mask in 0..(1usize << choices.len()) {
                    let mut en = vec![false; self.n_ev];
                    for (i, &e) in choices.iter().enumerate() {
                        en[e] = mask >> i & 1 == 1;
                    }
                    policy.insert(c, en);
                    self.dfs(init, policy)?;
                }
                policy.remove(&c);
                Ok(())
            }
        }
    }

    fn supervisor(
        &mut self,
        init: usize,
        policy: &BTreeMap<usize, Vec<bool>>,
    ) -> Result<Automaton, VerifyError> {
        let mut b = Builder::new(self.plant.alphabet().clone());
        let mut ids: BTreeMap<usize, StateId> = BTreeMap::new();
        let mut queue = VecDeque::from([init]);
        let label = |cell: &BTreeSet<StateId>| {
            Label::cell(cell.iter().map(|&q| self.plant.label(q).clone()).collect())
        };
        let marked = |cell: &BTreeSet<StateId>| cell.iter().any(|&q| self.plant.is_marked(q));
        ids.insert(
            init,
            b.add_state(label(&self.cells[init]), marked(&self.cells[init])),
        );
        while let Some(c) = queue.pop_front() {
            let me = ids[&c];
            let en = &policy[&c];
            for e in 0..self.n_ev {
                if !self.defined_in(c, e) || (self.ctrl[e] && !en[e]) {
                    continue;
                }
                if !self.obs[e] {
                    b.add_edge_at(me, e, me)?;
                    continue;
                }
                let d = self.step(c, e)?.expect("defined in cell");
                let did = match ids.get(&d) {
                    Some(&x) => x,
                    None => {
                        let cell = self.cells[d].clone();
                        let x = b.add_state(
                            Label::cell(cell.iter().map(|&q| self.plant.label(q).clone()).collect()),
                            cell.iter().any(|&q| self.plant.is_marked(q)),
                        );
                        ids.insert(d, x);
                        queue.push_back(d);
                        x
                    }
                };
                b.add_edge_at(me, e, did)?;
            }
        }
        Ok(b.build(ids[&init])?)
    }
}

/// `L(a) ⊆ L(b)` and `Lm(a) ⊆ Lm(b)` for automata over the same alphabet,
/// by plain pair exploration.
fn pairs_included(a: &Automaton, b: &Automaton) -> bool {
    let mut seen = BTreeSet::new();
    let mut stack = vec![(a.initial(), b.initial())];
    seen.insert((a.initial(), b.initial()));
    while let Some((x, y)) = stack.pop() {
        if a.is_marked(x) && !b.is_marked(y) {
            return false;
        }
        for (e, dx) in a.edges(x) {
            let Some(dy) = b.successor(y, e) else { return false };
            if seen.insert((dx, dy)) {
                stack.push((dx, dy));
            }
        }
    }
    true
}

/// Removes each attacker-controllable transition of `a` with probability
/// `p`, keeping the result a valid attacker.
pub fn prune_attacker(ctx: &Context, a: &Automaton, p: f64, seed: u64) -> Automaton {
    let ctrl: EventSet = ctx.attacker_controllable();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut b = Builder::new(a.alphabet().clone());
    for q in a.states() {
        b.add_state(a.label(q).clone(), a.is_marked(q));
    }
    for (q, e, d) in a.transitions() {
        if ctrl.contains(e) && rng.gen_bool(p) {
            continue;
        }
        b.add_edge(q, e, d).expect("subset of a deterministic automaton");
    }
    crate::fsa::reachable_trim(&b.build(a.initial()).expect("same initial state"))
}

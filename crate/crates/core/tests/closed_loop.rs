mod common;

use std::collections::{HashSet, VecDeque};

use common::{cases, Case};
use covsynth_core::attack::{
    build_bt, build_bts1, build_btsa, build_ce, build_mo, check_consistency, inconsistent_observation,
};
use covsynth_core::fsa::{accepts, language_equivalent, language_subset, observer, sync_product, Acceptance};
use covsynth_core::synthesis::{build_ns, build_oc, build_ocnsa, build_sdown};
use covsynth_core::verify::{assemble_closed_loop, check_covert, check_damage_reachable, check_successful};
use covsynth_core::{synthesize, Automaton, Context, EventSet};

const CASES: usize = 24;

fn corpus() -> &'static [Case] {
    static CORPUS: std::sync::OnceLock<Vec<Case>> = std::sync::OnceLock::new();
    CORPUS.get_or_init(|| cases(1000, CASES))
}

fn unattacked(ctx: &Context, s: &Automaton) -> (Automaton, Automaton, Automaton) {
    let g = ctx.plant().fully_marked();
    let ce = build_ce(ctx).unwrap();
    let bt = build_bt(ctx, s).unwrap();
    let bts1 = build_bts1(ctx, &bt, &ce).unwrap();
    let base = sync_product(&[&bt.automaton, &g, &ce]).unwrap();
    let with_monitor = sync_product(&[&bts1.automaton, &g, &ce]).unwrap();
    (base, with_monitor, bts1.automaton)
}

#[test]
fn monitor_does_not_restrict_the_closed_loop() {
    for case in corpus() {
        for s in &case.supervisors {
            let (base, with_monitor, _) = unattacked(&case.ctx, s);
            let eq = language_equivalent(&base, &with_monitor);
            assert!(eq.closed, "seed {}", case.seed);
        }
    }
}

#[test]
fn monitor_equals_supervisor_times_projection() {
    for case in corpus() {
        let ctx = &case.ctx;
        let keep: EventSet = ctx.sigma_o.union(&ctx.gamma_set).cloned().collect();
        for s in &case.supervisors {
            let (base, _, bts1) = unattacked(ctx, s);
            let bt = build_bt(ctx, s).unwrap();
            let proj = observer(&base, &keep).unwrap();
            let lhs = sync_product(&[&bt.automaton, &proj]).unwrap();
            assert!(language_equivalent(&lhs, &bts1).closed, "seed {}", case.seed);
        }
    }
}

#[test]
fn observations_are_in_the_monitored_loop() {
    for case in corpus() {
        let ctx = &case.ctx;
        for s in &case.supervisors {
            assert_eq!(inconsistent_observation(ctx, s).unwrap(), None);
            let (_, with_monitor, _) = unattacked(ctx, s);
            let proj = observer(&with_monitor, &ctx.sigma_o).unwrap();
            for w in ctx.scenario.observations() {
                assert_ne!(
                    accepts(&proj, w).unwrap(),
                    Acceptance::Rejected,
                    "seed {}",
                    case.seed
                );
            }
        }
    }
}

#[test]
fn attacked_supervisor_is_covered_by_estimate() {
    for case in corpus() {
        let ctx = &case.ctx;
        let ns = build_ns(ctx).unwrap();
        let oc = build_oc(ctx, &build_mo(ctx).unwrap()).unwrap();
        let est = build_ocnsa(ctx, &ns.ns, &oc).unwrap();
        let ce = build_ce(ctx).unwrap();
        for s in &case.supervisors {
            let bt = build_bt(ctx, s).unwrap();
            let btsa = build_btsa(ctx, &build_bts1(ctx, &bt, &ce).unwrap()).unwrap();
            assert!(btsa.automaton.num_states() <= 2 * s.num_states() + 1);
            let inc = language_subset(&btsa.automaton, &est.attacked.automaton);
            assert!(inc.closed(), "seed {}: {:?}", case.seed, inc.closed_witness);

            // joint traversal: detection and covertness break coincide
            let a = &btsa.automaton;
            let b = &est.attacked.automaton;
            let mut seen = HashSet::new();
            let mut queue = VecDeque::from([(a.initial(), b.initial())]);
            seen.insert((a.initial(), b.initial()));
            while let Some((p, q)) = queue.pop_front() {
                assert_eq!(p == btsa.alarm, q == est.attacked.alarm, "seed {}", case.seed);
                for (e, p2) in a.edges(p) {
                    let q2 = b.successor(q, e).expect("inclusion");
                    if seen.insert((p2, q2)) {
                        queue.push_back((p2, q2));
                    }
                }
            }
        }
    }
}

#[test]
fn least_supervisor_is_included_and_consistent() {
    for case in corpus() {
        let ctx = &case.ctx;
        let sdown = build_sdown(ctx, &build_mo(ctx).unwrap()).unwrap();
        assert!(check_consistency(ctx, &sdown).unwrap(), "seed {}", case.seed);
        for s in &case.supervisors {
            let inc = language_subset(&sdown, s);
            assert!(inc.closed(), "seed {}: {:?}", case.seed, inc.closed_witness);
        }
    }
}

#[test]
fn synthesized_attackers_succeed_against_every_sample() {
    let mut with_attacker = 0;
    for case in corpus() {
        let ctx = &case.ctx;
        let (report, art) = synthesize(ctx).unwrap();
        let Some(attacker) = report.attacker else {
            // no attacker: the least supervisor under the null attack is damage-free
            assert!(!report.exists);
            continue;
        };
        with_attacker += 1;
        let mut all = case.supervisors.clone();
        all.push(art.sdown.clone());
        let rep = check_successful(ctx, &attacker, &all).unwrap();
        assert!(rep.successful && !rep.vacuous, "seed {}: {rep:?}", case.seed);
        for s in &all {
            let b = assemble_closed_loop(ctx, s, &attacker).unwrap();
            assert!(
                check_covert(&b) && check_damage_reachable(&b),
                "seed {}",
                case.seed
            );
        }
    }
    assert!(with_attacker > 0, "corpus contains no attackable scenario");
}

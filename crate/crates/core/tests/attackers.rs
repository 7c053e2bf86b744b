mod common;

use common::cases;
use covsynth_core::attack::build_mo;
use covsynth_core::fsa::{language_subset, reachable};
use covsynth_core::synthesis::build_sdown;
use covsynth_core::verify::{
    assemble_closed_loop, check_covert, check_damage_reachable, check_successful, null_attacker,
    prune_attacker, relay_attacker, validate_attacker,
};
use covsynth_core::{synthesize, water_tank, Context, Scenario};

fn without_attack(sc: &Scenario) -> Scenario {
    let specs = sc
        .events()
        .iter()
        .cloned()
        .map(|mut s| {
            s.compromised = false;
            s.attackable = false;
            s
        })
        .collect();
    Scenario::new(
        specs,
        sc.plant().clone(),
        sc.damage_states().collect::<Vec<_>>(),
        sc.observations().iter().cloned().collect::<Vec<_>>(),
    )
    .unwrap()
}

#[test]
fn pruned_attackers_stay_inside_the_supremal_one() {
    let corpus = cases(1000, 24);
    let mut checked = 0;
    for case in &corpus {
        let ctx = &case.ctx;
        let (report, art) = synthesize(ctx).unwrap();
        let Some(sup) = report.attacker else { continue };
        let mut all = case.supervisors.clone();
        all.push(art.sdown.clone());
        let mut kept = 0;
        for k in 0..200u64 {
            if kept >= 5 {
                break;
            }
            let p = [0.1, 0.25, 0.5][k as usize % 3];
            let pruned = prune_attacker(ctx, &sup, p, case.seed ^ k);
            if validate_attacker(ctx, &pruned).is_err() {
                continue;
            }
            if !check_successful(ctx, &pruned, &all).unwrap().successful {
                continue;
            }
            kept += 1;
            for s in &all {
                let small = assemble_closed_loop(ctx, s, &pruned).unwrap();
                let big = assemble_closed_loop(ctx, s, &sup).unwrap();
                let inc = language_subset(&small.automaton, &big.automaton);
                assert!(inc.closed(), "seed {}: {:?}", case.seed, inc.closed_witness);
            }
        }
        assert!(kept >= 5, "seed {}: only {kept} successful prunings", case.seed);
        checked += 1;
    }
    assert!(checked > 0);
}

#[test]
fn unreachable_damage_has_no_attacker() {
    let sc = water_tank::scenario();
    let g = sc.plant().clone();
    let low = g.find_state("low").unwrap();
    let high = g.find_state("high").unwrap();
    // cut the edges into damage by rebuilding without them
    let mut b = covsynth_core::Builder::new(g.alphabet().clone());
    for q in g.states() {
        b.add_state(g.label(q).clone(), false);
    }
    for (q, e, d) in g.transitions() {
        if !sc.is_damage(d) || (q != low && q != high) {
            b.add_edge(q, e, d).unwrap();
        }
    }
    let cut = b.build(g.initial()).unwrap();
    let reach = reachable(&cut);
    assert!(sc.damage_states().all(|d| !reach[d as usize]));
    let sc2 = Scenario::new(
        sc.events().to_vec(),
        cut,
        sc.damage_states().collect::<Vec<_>>(),
        sc.observations().iter().cloned().collect::<Vec<_>>(),
    )
    .unwrap();
    let (report, _) = synthesize(&Context::new(sc2).unwrap()).unwrap();
    assert!(!report.exists && report.attacker.is_none());
}

#[test]
fn no_attack_capability_and_safe_least_supervisor_has_no_attacker() {
    let mut checked = 0;
    let corpus = cases(5000, 24);
    let tank = Context::new(without_attack(&water_tank::scenario())).unwrap();
    let contexts = std::iter::once(tank).chain(
        corpus
            .iter()
            .map(|c| Context::new(without_attack(&c.ctx.scenario)).unwrap()),
    );
    for ctx in contexts {
        let sdown = build_sdown(&ctx, &build_mo(&ctx).unwrap()).unwrap();
        let b = assemble_closed_loop(&ctx, &sdown, &null_attacker(&ctx)).unwrap();
        if check_damage_reachable(&b) {
            continue;
        }
        let (report, _) = synthesize(&ctx).unwrap();
        assert!(!report.exists, "{:?}", report.diagnostics);
        checked += 1;
    }
    assert!(checked >= 10, "only {checked} negative controls");
}

#[test]
fn relay_attacker_is_harmless_against_sampled_supervisors() {
    for case in cases(1000, 12) {
        let relay = relay_attacker(&case.ctx);
        validate_attacker(&case.ctx, &relay).unwrap();
        for s in &case.supervisors {
            let b = assemble_closed_loop(&case.ctx, s, &relay).unwrap();
            assert!(
                check_covert(&b) && !check_damage_reachable(&b),
                "seed {}",
                case.seed
            );
        }
    }
}

#[test]
fn null_attacker_withholds_compromised_readings() {
    // without compromised sensors the null attacker changes nothing
    for case in cases(1000, 12) {
        let ctx = Context::new(without_attack(&case.ctx.scenario)).unwrap();
        let null = null_attacker(&ctx);
        validate_attacker(&ctx, &null).unwrap();
        for s in &case.supervisors {
            let b = assemble_closed_loop(&ctx, s, &null).unwrap();
            assert!(
                check_covert(&b) && !check_damage_reachable(&b),
                "seed {}",
                case.seed
            );
        }
    }
    // with them, dropping a reading the plant must have produced is noticed
    let ctx = Context::new(water_tank::scenario()).unwrap();
    let b = assemble_closed_loop(&ctx, &water_tank::supervisor(), &null_attacker(&ctx)).unwrap();
    assert!(!check_damage_reachable(&b));
}

#[test]
fn null_attack_reduces_to_the_unattacked_loop() {
    use covsynth_core::attack::{build_bt, build_ce};
    use covsynth_core::fsa::{bounded_words, project, sync_product};
    use std::collections::BTreeSet;
    // every observation costs one extra stop, so length 6 needs depth 12
    const DEPTH: usize = 6;
    for case in cases(1000, 12) {
        let ctx = Context::new(without_attack(&case.ctx.scenario)).unwrap();
        let null = null_attacker(&ctx);
        let ce = build_ce(&ctx).unwrap();
        let g = ctx.plant().fully_marked();
        let keep = ctx.sigma.union(&ctx.gamma_set).cloned().collect();
        for s in &case.supervisors {
            let b = assemble_closed_loop(&ctx, s, &null).unwrap();
            let erased: BTreeSet<_> = bounded_words(&b.automaton, 2 * DEPTH)
                .into_keys()
                .map(|w| project(&w, &keep))
                .filter(|w| w.len() <= DEPTH)
                .collect();
            let bt = build_bt(&ctx, s).unwrap();
            let plain = sync_product(&[&bt.automaton, &g, &ce]).unwrap();
            let direct: BTreeSet<_> = bounded_words(&plain, DEPTH).into_keys().collect();
            assert_eq!(erased, direct, "seed {}", case.seed);
        }
    }
}

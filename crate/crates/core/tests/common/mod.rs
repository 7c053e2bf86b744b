#![allow(dead_code)]

use covsynth_core::sample::{self, ScenarioShape};
use covsynth_core::verify::enumerate_consistent_supervisors;
use covsynth_core::{Automaton, Context};

pub const MIN_SUPERVISORS: usize = 10;

pub struct Case {
    pub seed: u64,
    pub ctx: Context,
    pub supervisors: Vec<Automaton>,
}

/// Random scenarios that admit at least `MIN_SUPERVISORS` distinct sampled
/// supervisors, drawn in seed order starting at `first_seed`.
pub fn cases(first_seed: u64, wanted: usize) -> Vec<Case> {
    let mut out = Vec::new();
    let mut seed = first_seed;
    while out.len() < wanted {
        assert!(seed < first_seed + 50 * wanted as u64, "generator too sparse");
        let mut rng = sample::rng(seed);
        if let Some(sc) = sample::scenario(&mut rng, ScenarioShape::default()) {
            let ctx = Context::new(sc).unwrap();
            let s = enumerate_consistent_supervisors(&ctx, 3, 12, seed).unwrap();
            if s.supervisors.len() >= MIN_SUPERVISORS {
                out.push(Case {
                    seed,
                    ctx,
                    supervisors: s.supervisors,
                });
            }
        }
        seed += 1;
    }
    out
}

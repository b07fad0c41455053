mod common;

use std::collections::HashSet;

use common::{oracle, permute, random_state, seeded_model, slot_ranges};
use gcm::dist::partition;
use gcm::reduction::{ample, check_c2_star, rep, state_key, ProvisoContext, ProvisoVariant};
use gcm::semantics::{apply, enabled, try_apply};
use gcm::{decode_state, encode_state, parse_model, State};
use proptest::prelude::*;
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

struct RandomCtx {
    stack: HashSet<Vec<u8>>,
    visited: HashSet<Vec<u8>>,
    queue: HashSet<Vec<u8>>,
    workers: usize,
    id: usize,
    symmetry: bool,
}

impl ProvisoContext for RandomCtx {
    fn on_stack(&self, key: &[u8]) -> bool {
        self.stack.contains(key)
    }
    fn in_visited(&self, key: &[u8]) -> bool {
        self.visited.contains(key)
    }
    fn in_queue(&self, key: &[u8]) -> bool {
        self.queue.contains(key)
    }
    fn owner_of(&self, key: &[u8]) -> usize {
        partition(key, self.workers)
    }
    fn self_id(&self) -> usize {
        self.id
    }
    fn symmetry_enabled(&self) -> bool {
        self.symmetry
    }
}

fn random_ctx(keys: &[Vec<u8>], rng: &mut ChaCha8Rng) -> RandomCtx {
    let mut pick =
        |p: f64| -> HashSet<Vec<u8>> { keys.iter().filter(|_| rng.gen_bool(p)).cloned().collect() };
    let stack = pick(0.3);
    let visited: HashSet<_> = pick(0.5).union(&stack).cloned().collect();
    let queue = visited
        .iter()
        .filter(|_| rng.gen_bool(0.4))
        .cloned()
        .collect();
    let workers = rng.gen_range(1..=4);
    RandomCtx {
        stack,
        visited,
        queue,
        workers,
        id: rng.gen_range(0..workers),
        symmetry: rng.gen_bool(0.5),
    }
}

const VARIANTS: [ProvisoVariant; 3] = [
    ProvisoVariant::DfsLocal,
    ProvisoVariant::DfsDistributed,
    ProvisoVariant::BfsDistributed,
];

proptest! {
    #![proptest_config(ProptestConfig::with_cases(96))]

    #[test]
    fn encoding_round_trips_and_orders(seed in any::<u64>()) {
        let m = seeded_model(seed);
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let a = random_state(&m, &mut rng);
        let b = random_state(&m, &mut rng);
        let (ea, eb) = (encode_state(&m, &a), encode_state(&m, &b));
        prop_assert_eq!(decode_state(&m, &ea).unwrap(), a.clone());
        prop_assert_eq!(ea.cmp(&eb), a.slots().cmp(b.slots()));
    }

    #[test]
    fn encoding_is_injective_on_reachable_sets(seed in any::<u64>()) {
        let m = seeded_model(seed);
        let states = oracle(&m).states;
        let keys: HashSet<Vec<u8>> = states.iter().map(|s| encode_state(&m, s)).collect();
        prop_assert_eq!(keys.len(), states.len());
    }

    #[test]
    fn printed_models_reparse_equal(seed in any::<u64>()) {
        let m = seeded_model(seed);
        let again = parse_model(&m.to_string()).unwrap();
        prop_assert_eq!(again, m);
    }

    #[test]
    fn steps_are_deterministic_and_in_range(seed in any::<u64>()) {
        let m = seeded_model(seed);
        let ranges = slot_ranges(&m);
        for s in oracle(&m).states {
            for (v, (lo, hi)) in s.slots().iter().zip(&ranges) {
                prop_assert!(lo <= v && v <= hi);
            }
            for t in enabled(&m, &s) {
                let next = apply(&m, t, &s);
                prop_assert_eq!(&next, &apply(&m, t, &s));
                prop_assert!(next.in_range(&m));
            }
        }
    }

    #[test]
    fn rep_is_idempotent_and_orbit_invariant(seed in any::<u64>()) {
        let m = seeded_model(seed);
        let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 0x5eed);
        for _ in 0..20 {
            let s = random_state(&m, &mut rng);
            let r = rep(&m, &s);
            prop_assert_eq!(rep(&m, &r), r.clone());
            let mut t = s.clone();
            for family in m.symmetric_families() {
                let mut p: Vec<usize> = (0..m.instances[family].count).collect();
                p.shuffle(&mut rng);
                t = permute(&m, &t, family, &p);
            }
            prop_assert_eq!(rep(&m, &t), r);
        }
    }

    #[test]
    fn ample_sets_are_well_formed(seed in any::<u64>()) {
        let m = seeded_model(seed);
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let states = oracle(&m).states;
        let keys: Vec<Vec<u8>> = states.iter().map(|s| state_key(&m, s, false)).chain(states.iter().map(|s| state_key(&m, s, true))).collect();
        let ctxs: Vec<RandomCtx> = (0..4).map(|_| random_ctx(&keys, &mut rng)).collect();
        for (k, s) in states.iter().enumerate() {
            let ctx = &ctxs[k % ctxs.len()];
            let en = enabled(&m, s);
            for variant in VARIANTS {
                let d = ample(&m, s, ctx, variant);
                prop_assert!(d.transitions.iter().all(|t| en.contains(t)));
                prop_assert_eq!(d.transitions.is_empty(), en.is_empty());
                if d.fully_expanded {
                    prop_assert_eq!(d.transitions.len(), en.len());
                } else {
                    prop_assert!(d.transitions.len() < en.len());
                }
            }
        }
    }

    #[test]
    fn proviso_is_monotone_under_subsets(seed in any::<u64>()) {
        let m = seeded_model(seed);
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let states = oracle(&m).states;
        let keys: Vec<Vec<u8>> = states.iter().map(|s| state_key(&m, s, false)).chain(states.iter().map(|s| state_key(&m, s, true))).collect();
        let ctxs: Vec<RandomCtx> = (0..4).map(|_| random_ctx(&keys, &mut rng)).collect();
        for (k, s) in states.iter().enumerate() {
            let ctx = &ctxs[k % ctxs.len()];
            let x = enabled(&m, s);
            for variant in VARIANTS {
                if !check_c2_star(&m, &x, s, ctx, variant) {
                    continue;
                }
                for _ in 0..4 {
                    let y: Vec<_> = x.iter().copied().filter(|_| rng.gen_bool(0.5)).collect();
                    prop_assert!(check_c2_star(&m, &y, s, ctx, variant));
                }
            }
        }
    }
}

#[test]
fn disabled_steps_are_rejected() {
    let m = seeded_model(7);
    for s in oracle(&m).states {
        let en = enabled(&m, &s);
        for t in (0..m.num_instances()).flat_map(|i| m.transitions_of(i)) {
            assert_eq!(try_apply(&m, t, &s).is_some(), en.contains(&t));
        }
    }
}

#[test]
fn decode_rejects_out_of_range_bytes() {
    let m = parse_model("model d\nglobal a: 0..2 = 0\n").unwrap();
    assert_eq!(decode_state(&m, &[1]).unwrap(), State::from_slots(vec![1]));
    assert!(decode_state(&m, &[3]).is_err());
    assert!(decode_state(&m, &[]).is_err());
}

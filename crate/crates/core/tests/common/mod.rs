//! Brute-force reference computations shared by the integration tests.
//! Nothing here goes through the search, reduction or distributed code.
#![allow(dead_code)]

use std::collections::{HashMap, HashSet, VecDeque};

use gcm::corpus::{random_model, RandomModelParams};
use gcm::semantics::{initial_state, is_deadlock, is_error, successors};
use gcm::{parse_model, Model, State, Verdict};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

pub struct Oracle {
    /// Reachable states in BFS order.
    pub states: Vec<State>,
    pub depth: HashMap<State, usize>,
    pub verdict: Verdict,
    /// Length of a shortest path to an error state.
    pub error_distance: Option<usize>,
}

pub fn oracle(m: &Model) -> Oracle {
    let s0 = initial_state(m);
    let mut depth = HashMap::from([(s0.clone(), 0usize)]);
    let mut states = vec![s0.clone()];
    let mut queue = VecDeque::from([s0]);
    while let Some(s) = queue.pop_front() {
        let d = depth[&s];
        for (_, next) in successors(m, &s) {
            if !depth.contains_key(&next) {
                depth.insert(next.clone(), d + 1);
                states.push(next.clone());
                queue.push_back(next);
            }
        }
    }
    let error_distance = states
        .iter()
        .filter(|s| is_error(m, s))
        .map(|s| depth[s])
        .min();
    let verdict = if error_distance.is_some() {
        Verdict::ErrorFound
    } else if states.iter().any(|s| is_deadlock(m, s)) {
        Verdict::DeadlockFound
    } else {
        Verdict::Clean
    };
    Oracle {
        states,
        depth,
        verdict,
        error_distance,
    }
}

/// All permutations of `0..n` as image vectors.
pub fn permutations(n: usize) -> Vec<Vec<usize>> {
    if n == 0 {
        return vec![Vec::new()];
    }
    let mut out = Vec::new();
    for p in permutations(n - 1) {
        for pos in 0..n {
            let mut q = p.clone();
            q.insert(pos, n - 1);
            out.push(q);
        }
    }
    out
}

/// Slot range `start..start + n * width` of a family, plus `n` and `width`.
pub fn family_block(m: &Model, family: usize) -> (usize, usize, usize) {
    let n = m.instances[family].count;
    let width = m.templates[m.instances[family].template].locals.len();
    let start = m
        .instance_infos()
        .iter()
        .find(|i| i.family == family)
        .map(|i| i.offset)
        .unwrap_or(0);
    (start, n, width)
}

/// Moves the local row of pid `i` to pid `p[i]`.
pub fn permute(m: &Model, s: &State, family: usize, p: &[usize]) -> State {
    let (start, n, width) = family_block(m, family);
    let mut v = s.slots().to_vec();
    for i in 0..n {
        for k in 0..width {
            v[start + p[i] * width + k] = s.slots()[start + i * width + k];
        }
    }
    State::from_slots(v)
}

/// Every member of the orbit of `s` under the product of full permutation
/// groups of all symmetric families, as the closure under adjacent
/// transpositions (which generate each group).
pub fn orbit(m: &Model, s: &State) -> HashSet<State> {
    let swaps: Vec<(usize, Vec<usize>)> = m
        .symmetric_families()
        .flat_map(|family| {
            let n = m.instances[family].count;
            (0..n.saturating_sub(1)).map(move |i| {
                let mut p: Vec<usize> = (0..n).collect();
                p.swap(i, i + 1);
                (family, p)
            })
        })
        .collect();
    let mut orbit = HashSet::from([s.clone()]);
    let mut todo = vec![s.clone()];
    while let Some(t) = todo.pop() {
        for (family, p) in &swaps {
            let u = permute(m, &t, *family, p);
            if orbit.insert(u.clone()) {
                todo.push(u);
            }
        }
    }
    orbit
}

/// Number of distinct orbits among `states`, by explicit orbit enumeration.
pub fn orbit_count(m: &Model, states: &[State]) -> usize {
    let mut seen: HashSet<State> = HashSet::new();
    let mut orbits = 0;
    for s in states {
        if seen.contains(s) {
            continue;
        }
        orbits += 1;
        seen.extend(orbit(m, s));
    }
    orbits
}

/// Random models whose full state space stays under `max_states`.
pub fn random_models(seed: u64, count: usize, max_states: usize) -> Vec<(Model, Oracle)> {
    random_models_where(seed, count, max_states, |_| true)
}

pub fn random_models_where(
    seed: u64,
    count: usize,
    max_states: usize,
    keep: impl Fn(&Oracle) -> bool,
) -> Vec<(Model, Oracle)> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let params = RandomModelParams::default();
    let mut out = Vec::new();
    while out.len() < count {
        let text = random_model(&mut rng, &params);
        let m =
            parse_model(&text).unwrap_or_else(|e| panic!("generated model rejected: {e}\n{text}"));
        if !bounded(&m, max_states) {
            continue;
        }
        let o = oracle(&m);
        if keep(&o) {
            out.push((m, o));
        }
    }
    out
}

fn bounded(m: &Model, max_states: usize) -> bool {
    let s0 = initial_state(m);
    let mut seen = HashSet::from([s0.clone()]);
    let mut stack = vec![s0];
    while let Some(s) = stack.pop() {
        for (_, next) in successors(m, &s) {
            if seen.insert(next.clone()) {
                if seen.len() > max_states {
                    return false;
                }
                stack.push(next);
            }
        }
    }
    true
}

/// `(lo, hi)` of every slot, in layout order.
pub fn slot_ranges(m: &Model) -> Vec<(i64, i64)> {
    let mut out: Vec<(i64, i64)> = m.globals.iter().map(|g| (g.lo, g.hi)).collect();
    for info in m.instance_infos() {
        out.extend(
            m.templates[info.template]
                .locals
                .iter()
                .map(|l| (l.lo, l.hi)),
        );
    }
    out
}

pub fn random_state<R: rand::Rng>(m: &Model, rng: &mut R) -> State {
    State::from_slots(
        slot_ranges(m)
            .into_iter()
            .map(|(lo, hi)| rng.gen_range(lo..=hi))
            .collect(),
    )
}

pub fn seeded_model(seed: u64) -> Model {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let text = random_model(&mut rng, &RandomModelParams::default());
    parse_model(&text).unwrap_or_else(|e| panic!("generated model rejected: {e}\n{text}"))
}

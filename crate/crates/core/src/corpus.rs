//! Bundled benchmark models and a seeded generator of small random models.

use std::fmt::Write;

use rand::seq::SliceRandom;
use rand::Rng;

/// `n` processes that each take one independent step.
pub fn ind(n: usize) -> String {
    format!(
        "model ind{n}\n\
         process P {{\n  local pc: 0..1 = 0\n  trans step: pc == 0 -> pc' = 1\n}}\n\
         instances P[{n}] symmetric\n"
    )
}

/// [`ind`] with the all-done state accepted as successful termination.
pub fn ind_terminating(n: usize) -> String {
    format!("{}accept: forall i: P[i].pc == 1\n", ind(n))
}

/// Semaphore mutual exclusion among `n` identical processes.
pub fn mux(n: usize) -> String {
    format!(
        "model mux{n}\n\
         global sem: 0..1 = 1\n\
         process P {{\n  local pc: 0..1 = 0\n  \
         trans acquire: pc == 0 && sem == 1 -> pc' = 1, sem' = 0\n  \
         trans release: pc == 1 -> pc' = 0, sem' = 1\n}}\n\
         instances P[{n}] symmetric\n\
         error: exists distinct i, j: P[i].pc == 1 && P[j].pc == 1\n"
    )
}

/// MUX2 with an extra entry path that ignores the semaphore.
pub fn mux_faulty(n: usize) -> String {
    format!(
        "model mux{n}_faulty\n\
         global sem: 0..1 = 1\n\
         process P {{\n  local pc: 0..1 = 0\n  \
         trans acquire: pc == 0 && sem == 1 -> pc' = 1, sem' = 0\n  \
         trans release: pc == 1 -> pc' = 0, sem' = 1\n  \
         trans sneak: pc == 0 && sem == 0 -> pc' = 1\n}}\n\
         instances P[{n}] symmetric\n\
         error: exists distinct i, j: P[i].pc == 1 && P[j].pc == 1\n"
    )
}

/// Dining philosophers. Every philosopher grabs the left fork first unless
/// `deadlock_free`, in which case the last one grabs the right fork first.
pub fn phil(n: usize, deadlock_free: bool) -> String {
    let mut s = String::new();
    let suffix = if deadlock_free { "safe" } else { "deadlock" };
    writeln!(s, "model phil{n}_{suffix}").unwrap();
    for k in 0..n {
        writeln!(s, "global fork{k}: 0..1 = 0").unwrap();
    }
    for k in 0..n {
        let (mut first, mut second) = (k, (k + 1) % n);
        if deadlock_free && k == n - 1 {
            std::mem::swap(&mut first, &mut second);
        }
        write!(
            s,
            "process Phil{k} {{\n  local pc: 0..2 = 0\n  \
             trans takeFirst: pc == 0 && fork{first} == 0 -> pc' = 1, fork{first}' = 1\n  \
             trans takeSecond: pc == 1 && fork{second} == 0 -> pc' = 2, fork{second}' = 1\n  \
             trans release: pc == 2 -> pc' = 0, fork{first}' = 0, fork{second}' = 0\n}}\n"
        )
        .unwrap();
    }
    for k in 0..n {
        writeln!(s, "instances Phil{k}[1]").unwrap();
    }
    s
}

/// Token ring: only the holder of `tok` may enter its critical section and
/// passes the token on when leaving.
pub fn ring(n: usize) -> String {
    let mut s = String::new();
    writeln!(s, "model ring{n}").unwrap();
    writeln!(s, "global tok: 0..{} = 0", n - 1).unwrap();
    for k in 0..n {
        write!(
            s,
            "process T{k} {{\n  local cs: 0..1 = 0\n  \
             trans enter: tok == {k} && cs == 0 -> cs' = 1\n  \
             trans leave: cs == 1 -> cs' = 0, tok' = {}\n}}\n",
            (k + 1) % n
        )
        .unwrap();
    }
    for k in 0..n {
        writeln!(s, "instances T{k}[1]").unwrap();
    }
    let pairs: Vec<String> = (0..n)
        .flat_map(|a| ((a + 1)..n).map(move |b| format!("(T{a}[0].cs == 1 && T{b}[0].cs == 1)")))
        .collect();
    if !pairs.is_empty() {
        writeln!(s, "error: {}", pairs.join(" || ")).unwrap();
    }
    s
}

/// Ignoring-problem regression: `Spin` cycles forever on invisible local
/// steps while the error needs `Fire` to move. Without the cycle proviso the
/// reduced search never schedules `Fire`.
pub fn proviso() -> String {
    "model proviso\n\
     process Spin {\n  local a: 0..1 = 0\n  trans up: a == 0 -> a' = 1\n  trans down: a == 1 -> a' = 0\n}\n\
     process Fire {\n  local b: 0..1 = 0\n  trans go: b == 0 -> b' = 1\n}\n\
     instances Spin[1]\n\
     instances Fire[1]\n\
     error: Fire[0].b == 1\n"
        .to_string()
}

/// Names accepted by [`bundled_model`] besides the fixed list: `ind<n>`,
/// `mux<n>`, `mux<n>-faulty`, `phil<n>-deadlock`, `phil<n>`, `ring<n>`.
pub fn bundled_model(name: &str) -> Option<String> {
    let name = name.strip_suffix(".gcm").unwrap_or(name);
    let num = |prefix: &str, rest: &str| -> Option<usize> {
        rest.strip_prefix(prefix)?.parse().ok().filter(|&n| n >= 1)
    };
    if name == "proviso" {
        return Some(proviso());
    }
    if let Some(n) = name.strip_suffix("-faulty").and_then(|r| num("mux", r)) {
        return Some(mux_faulty(n));
    }
    if let Some(n) = name.strip_suffix("-deadlock").and_then(|r| num("phil", r)) {
        return (n >= 2).then(|| phil(n, false));
    }
    if let Some(n) = num("phil", name) {
        return (n >= 2).then(|| phil(n, true));
    }
    if let Some(n) = num("ind", name) {
        return Some(ind_terminating(n));
    }
    if let Some(n) = num("mux", name) {
        return Some(mux(n));
    }
    if let Some(n) = num("ring", name) {
        return (n >= 2).then(|| ring(n));
    }
    None
}

/// The shipped benchmark corpus as `(name, source)` pairs.
pub fn bundled_models() -> Vec<(String, String)> {
    [
        "ind4",
        "ind8",
        "ind10",
        "mux2",
        "mux3",
        "mux4",
        "mux2-faulty",
        "phil3-deadlock",
        "phil4-deadlock",
        "phil5-deadlock",
        "phil3",
        "phil4",
        "phil5",
        "ring3",
        "proviso",
    ]
    .into_iter()
    .map(|n| (n.to_string(), bundled_model(n).expect("bundled name")))
    .collect()
}

/// Bounds for [`random_model`].
#[derive(Clone, Debug)]
pub struct RandomModelParams {
    pub max_processes: usize,
    pub max_locals: usize,
    /// Upper bound of every variable range (lower bound is 0).
    pub max_hi: i64,
    pub max_globals: usize,
    pub max_transitions: usize,
}

impl Default for RandomModelParams {
    fn default() -> Self {
        RandomModelParams {
            max_processes: 4,
            max_locals: 3,
            max_hi: 2,
            max_globals: 2,
            max_transitions: 4,
        }
    }
}

struct Var {
    name: String,
    hi: i64,
    init: i64,
}

fn random_vars<R: Rng>(rng: &mut R, prefix: &str, count: usize, max_hi: i64) -> Vec<Var> {
    (0..count)
        .map(|i| {
            let hi = rng.gen_range(1..=max_hi);
            Var {
                name: format!("{prefix}{i}"),
                hi,
                init: if rng.gen_bool(0.7) {
                    0
                } else {
                    rng.gen_range(0..=hi)
                },
            }
        })
        .collect()
}

/// A comparison of `name` against a constant. With `at_init` set, retries
/// until the atom has that truth value in the initial state.
fn atom<R: Rng>(rng: &mut R, name: &str, v: &Var, at_init: Option<bool>) -> String {
    loop {
        let op = *["==", "!=", "<", ">="].choose(rng).unwrap();
        let c = rng.gen_range(0..=v.hi);
        let holds = match op {
            "==" => v.init == c,
            "!=" => v.init != c,
            "<" => v.init < c,
            _ => v.init >= c,
        };
        if at_init.is_none_or(|want| want == holds) {
            return format!("{name} {op} {c}");
        }
    }
}

fn transitions<R: Rng>(
    rng: &mut R,
    locals: &[Var],
    globals: &[Var],
    p: &RandomModelParams,
) -> String {
    let mut s = String::new();
    let scope: Vec<&Var> = locals.iter().chain(globals.iter()).collect();
    for t in 0..rng.gen_range(2.min(p.max_transitions)..=p.max_transitions) {
        // The first transition starts out enabled so that few models are
        // stuck in their initial state.
        let at_init = (t == 0).then_some(true);
        if t > 0 && rng.gen_bool(0.5) {
            // Counter-style step on a local: advance, or wrap to zero.
            let v = locals.choose(rng).unwrap();
            let (mut guard, mut update) = if rng.gen_bool(0.6) {
                (
                    format!("{} < {}", v.name, v.hi),
                    format!("{}' = {} + 1", v.name, v.name),
                )
            } else {
                (
                    format!("{} == {}", v.name, v.hi),
                    format!("{}' = 0", v.name),
                )
            };
            if rng.gen_bool(0.3) {
                let w = scope.choose(rng).unwrap();
                guard = format!("{guard} && {}", atom(rng, &w.name, w, None));
            }
            if let Some(g) = globals.choose(rng).filter(|_| rng.gen_bool(0.3)) {
                update = format!("{update}, {}' = {}", g.name, rng.gen_range(0..=g.hi));
            }
            writeln!(s, "  trans t{t}: {guard} -> {update}").unwrap();
            continue;
        }
        let guard: Vec<String> = (0..rng.gen_range(1..=2))
            .map(|_| {
                let v = scope.choose(rng).unwrap();
                atom(rng, &v.name, v, at_init)
            })
            .collect();
        let mut keyed: Vec<(bool, &Var)> = scope
            .iter()
            .map(|v| {
                (
                    !locals.iter().any(|l| l.name == v.name) || rng.gen_bool(0.3),
                    *v,
                )
            })
            .collect();
        keyed.shuffle(rng);
        // Mostly local writes so that some transitions are independent.
        keyed.sort_by_key(|(global, _)| *global);
        let targets: Vec<&Var> = keyed.into_iter().map(|(_, v)| v).collect();
        let n_updates = rng.gen_range(1..=2).min(targets.len());
        let updates: Vec<String> = targets[..n_updates]
            .iter()
            .map(|v| {
                let rhs = match rng.gen_range(0..4) {
                    0 => rng.gen_range(0..=v.hi).to_string(),
                    1 => format!("{} + 1", v.name),
                    2 => format!("{} - 1", v.name),
                    _ => scope.choose(rng).unwrap().name.clone(),
                };
                format!("{}' = {rhs}", v.name)
            })
            .collect();
        writeln!(
            s,
            "  trans t{t}: {} -> {}",
            guard.join(" && "),
            updates.join(", ")
        )
        .unwrap();
    }
    s
}

/// Generates a small random model as source text. Roughly half of the
/// outputs declare a symmetric family with quantified (hence symmetry-safe)
/// error predicates; the rest use singleton processes and pid literals.
pub fn random_model<R: Rng>(rng: &mut R, p: &RandomModelParams) -> String {
    let mut s = String::from("model random\n");
    let ng = rng.gen_range(0..=p.max_globals);
    let globals = random_vars(rng, "g", ng, p.max_hi);
    for g in &globals {
        writeln!(s, "global {}: 0..{} = {}", g.name, g.hi, g.init).unwrap();
    }
    let global_atom = |rng: &mut R, at_init: Option<bool>| -> Option<String> {
        let g = globals.choose(rng)?;
        Some(atom(rng, &g.name, g, at_init))
    };

    let mut error_terms: Vec<String> = Vec::new();
    let mut instances = String::new();
    let symmetric = rng.gen_bool(0.5) && p.max_processes >= 2;
    if symmetric {
        let count = rng.gen_range(2..=p.max_processes);
        let nl = rng.gen_range(1..=p.max_locals);
        let locals = random_vars(rng, "x", nl, p.max_hi);
        writeln!(s, "process P {{").unwrap();
        for l in &locals {
            writeln!(s, "  local {}: 0..{} = {}", l.name, l.hi, l.init).unwrap();
        }
        s.push_str(&transitions(rng, &locals, &globals, p));
        s.push_str("}\n");
        writeln!(instances, "instances P[{count}] symmetric").unwrap();
        let l1 = locals.choose(rng).unwrap();
        let l2 = locals.choose(rng).unwrap();
        // Error atoms are false initially; every pid starts alike.
        let f = Some(false);
        let term = match rng.gen_range(0..3) {
            0 => format!(
                "(exists i: {})",
                atom(rng, &format!("P[i].{}", l1.name), l1, f)
            ),
            1 => format!(
                "(exists distinct i, j: {} && {})",
                atom(rng, &format!("P[i].{}", l1.name), l1, f),
                atom(rng, &format!("P[j].{}", l2.name), l2, None)
            ),
            _ => format!(
                "(forall i: {})",
                atom(rng, &format!("P[i].{}", l1.name), l1, f)
            ),
        };
        error_terms.push(term);
    } else {
        let n = rng.gen_range(2.min(p.max_processes)..=p.max_processes);
        for k in 0..n {
            let nl = rng.gen_range(1..=p.max_locals);
            let locals = random_vars(rng, "x", nl, p.max_hi);
            writeln!(s, "process Q{k} {{").unwrap();
            for l in &locals {
                writeln!(s, "  local {}: 0..{} = {}", l.name, l.hi, l.init).unwrap();
            }
            s.push_str(&transitions(rng, &locals, &globals, p));
            s.push_str("}\n");
            writeln!(instances, "instances Q{k}[1]").unwrap();
            if rng.gen_bool(0.6) {
                let l = locals.choose(rng).unwrap();
                error_terms.push(atom(rng, &format!("Q{k}[0].{}", l.name), l, Some(false)));
            }
        }
    }
    s.push_str(&instances);
    if let Some(g) = global_atom(rng, Some(false)).filter(|_| rng.gen_bool(0.5)) {
        error_terms.push(g);
    }
    if !error_terms.is_empty() && rng.gen_bool(0.9) {
        let joiner = if rng.gen_bool(0.7) { " && " } else { " || " };
        writeln!(s, "error: {}", error_terms.join(joiner)).unwrap();
    }
    if rng.gen_bool(0.15) {
        if let Some(g) = global_atom(rng, None) {
            writeln!(s, "accept: {g}").unwrap();
        }
    }
    s
}

mod common;

use std::collections::HashSet;

use common::{oracle, random_models, Oracle};
use gcm::corpus::bundled_models;
use gcm::dist::{partition, run_distributed_detailed, DistRun};
use gcm::reduction::state_key;
use gcm::{
    explore, explore_detailed, parse_model, replay_trace, Backend, Model, RunConfig, SearchOptions,
    Strategy, Verdict,
};

fn combos() -> Vec<(Strategy, bool, bool)> {
    let mut v = Vec::new();
    for strategy in [Strategy::Dfs, Strategy::Bfs] {
        for por in [false, true] {
            for symmetry in [false, true] {
                v.push((strategy, por, symmetry));
            }
        }
    }
    v
}

fn key_image(m: &Model, o: &Oracle, symmetry: bool) -> HashSet<Vec<u8>> {
    o.states.iter().map(|s| state_key(m, s, symmetry)).collect()
}

fn check_trace(m: &Model, verdict: Verdict, trace: Option<&Vec<gcm::TransitionInstance>>) {
    match verdict {
        Verdict::ErrorFound => {
            let end = replay_trace(m, trace.expect("error trace")).unwrap();
            assert!(gcm::semantics::is_error(m, &end));
        }
        Verdict::DeadlockFound => {
            let end = replay_trace(m, trace.expect("deadlock trace")).unwrap();
            assert!(gcm::semantics::is_deadlock(m, &end));
        }
        _ => assert!(trace.is_none()),
    }
}

fn check_centralized(name: &str, m: &Model, o: &Oracle) {
    for (strategy, por, symmetry) in combos() {
        let opts = SearchOptions::new(strategy).por(por).symmetry(symmetry);
        let (r, store) = explore_detailed(m, &opts).unwrap();
        assert_eq!(r.verdict, o.verdict, "{name} {opts:?}");
        check_trace(m, r.verdict, r.trace.as_ref());
        let image = key_image(m, o, symmetry);
        assert!(
            store.keys().all(|k| image.contains(k)),
            "{name} {opts:?}: stored a non-reachable key"
        );
        if !por && !symmetry && o.verdict != Verdict::ErrorFound {
            assert_eq!(r.states_stored as usize, o.states.len(), "{name} {opts:?}");
        }
    }
}

fn check_run(name: &str, m: &Model, o: &Oracle, cfg: &RunConfig, run: &DistRun<'_>) {
    let r = &run.result;
    assert_eq!(r.verdict, o.verdict, "{name} {cfg:?}");
    check_trace(m, r.verdict, r.trace.as_ref());
    assert_eq!(r.per_worker.len(), cfg.workers);
    let image = key_image(m, o, cfg.symmetry);
    let mut all = HashSet::new();
    for w in &run.workers {
        for k in w.stored_keys() {
            assert_eq!(
                partition(k, cfg.workers),
                w.id(),
                "{name} {cfg:?}: key stored off its owner"
            );
            assert!(
                image.contains(k),
                "{name} {cfg:?}: stored a non-reachable key"
            );
            assert!(all.insert(k.clone()), "{name} {cfg:?}: key stored twice");
        }
    }
    assert_eq!(run.shipped_from_reduced(), 0, "{name} {cfg:?}");
    if r.verdict != Verdict::ErrorFound {
        let t = &run.termination;
        assert_eq!(t.declarations, 1, "{name} {cfg:?}");
        assert_eq!(t.inflight_at_declaration, 0, "{name} {cfg:?}");
        assert!(!t.pending_work_at_declaration, "{name} {cfg:?}");
    }
}

fn check_distributed(
    name: &str,
    m: &Model,
    o: &Oracle,
    workers: &[usize],
    backend: Backend,
    seed: u64,
) {
    for &n in workers {
        for (strategy, por, symmetry) in combos() {
            let cfg = RunConfig::new(n, strategy)
                .por(por)
                .symmetry(symmetry)
                .backend(backend)
                .seed(seed);
            let run = run_distributed_detailed(m, &cfg).unwrap();
            check_run(name, m, o, &cfg, &run);
        }
    }
}

#[test]
fn bundled_corpus_agrees_with_oracle() {
    for (name, src) in bundled_models() {
        let m = parse_model(&src).unwrap();
        let o = oracle(&m);
        check_centralized(&name, &m, &o);
        check_distributed(&name, &m, &o, &[1, 2, 4], Backend::Sim, 11);
    }
}

#[test]
fn bundled_verdicts() {
    let expect = [
        ("ind10", Verdict::Clean),
        ("mux3", Verdict::Clean),
        ("mux2-faulty", Verdict::ErrorFound),
        ("phil4-deadlock", Verdict::DeadlockFound),
        ("phil4", Verdict::Clean),
        ("ring3", Verdict::Clean),
        ("proviso", Verdict::ErrorFound),
    ];
    for (name, v) in expect {
        let m = parse_model(&gcm::corpus::bundled_model(name).unwrap()).unwrap();
        assert_eq!(oracle(&m).verdict, v, "{name}");
    }
}

#[test]
fn random_models_agree_with_oracle() {
    for (k, (m, o)) in random_models(42, 60, 100_000).iter().enumerate() {
        let name = format!("random #{k}");
        check_centralized(&name, m, o);
        check_distributed(&name, m, o, &[1, 2, 3, 4], Backend::Sim, k as u64);
    }
}

#[test]
fn threaded_backend_agrees_with_oracle() {
    for (k, (m, o)) in random_models(99, 15, 100_000).iter().enumerate() {
        check_distributed(&format!("random #{k}"), m, o, &[2, 4], Backend::Threaded, 0);
    }
    let m = parse_model(&gcm::corpus::bundled_model("phil5").unwrap()).unwrap();
    check_distributed("phil5", &m, &oracle(&m), &[3], Backend::Threaded, 0);
}

#[test]
fn verdicts_do_not_depend_on_the_schedule() {
    let mut models: Vec<(String, Model)> = ["mux2-faulty", "phil3-deadlock", "ring3", "proviso"]
        .iter()
        .map(|n| {
            (
                n.to_string(),
                parse_model(&gcm::corpus::bundled_model(n).unwrap()).unwrap(),
            )
        })
        .collect();
    models.extend(
        random_models(5, 4, 50_000)
            .into_iter()
            .enumerate()
            .map(|(k, (m, _))| (format!("random #{k}"), m)),
    );
    for (name, m) in &models {
        let want = oracle(m).verdict;
        for (strategy, por, symmetry) in combos() {
            for seed in 0..50 {
                let cfg = RunConfig::new(3, strategy)
                    .por(por)
                    .symmetry(symmetry)
                    .seed(seed);
                let r = run_distributed_detailed(m, &cfg).unwrap().result;
                assert_eq!(r.verdict, want, "{name} {cfg:?}");
            }
        }
    }
}

#[test]
fn sim_runs_are_reproducible() {
    let m = parse_model(&gcm::corpus::bundled_model("phil4-deadlock").unwrap()).unwrap();
    let cfg = RunConfig::new(4, Strategy::Dfs).por(true).seed(17);
    let a = run_distributed_detailed(&m, &cfg).unwrap();
    let b = run_distributed_detailed(&m, &cfg).unwrap();
    assert_eq!(a.result, b.result);
    assert_eq!(a.termination, b.termination);
}

#[test]
fn budget_never_reports_clean() {
    for (k, (m, o)) in random_models(77, 40, 100_000).iter().enumerate() {
        let n = o.states.len();
        if n < 3 {
            continue;
        }
        for strategy in [Strategy::Dfs, Strategy::Bfs] {
            let r = explore(m, &SearchOptions::new(strategy).max_states(n - 1)).unwrap();
            assert!(
                matches!(r.verdict, Verdict::BudgetExceeded | Verdict::ErrorFound),
                "random #{k} {strategy:?}: {:?} under a budget of {} of {n}",
                r.verdict,
                n - 1
            );
            let r = explore(m, &SearchOptions::new(strategy).max_states(n)).unwrap();
            assert_eq!(
                r.verdict, o.verdict,
                "random #{k} {strategy:?} with exact budget"
            );
        }
    }
}

//! Centralized exploration: plain and reduced DFS/BFS, trace replay and the
//! brute-force reachability oracle.

use std::collections::VecDeque;

use fnv::{FnvHashMap, FnvHashSet};
use serde::Serialize;

use crate::model::{Model, TransitionInstance};
use crate::reduction::{
    check_symmetry_safe, select, state_key, AmplePolicy, Condition, ProvisoContext, ProvisoVariant,
};
use crate::semantics::{initial_state, is_accepting, is_error, successors, try_apply};
use crate::state::{encode_state, State};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum Strategy {
    Dfs,
    Bfs,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum Verdict {
    ErrorFound,
    DeadlockFound,
    Clean,
    BudgetExceeded,
}

#[derive(Clone, Debug)]
pub struct SearchOptions {
    pub strategy: Strategy,
    pub por: bool,
    pub symmetry: bool,
    /// Exploration stops once more than this many states are stored.
    pub max_states: usize,
    pub store_parents: bool,
    /// Disables the cycle proviso. Unsound.
    pub unsafe_no_c2: bool,
}

impl SearchOptions {
    pub fn new(strategy: Strategy) -> SearchOptions {
        SearchOptions {
            strategy,
            por: false,
            symmetry: false,
            max_states: 10_000_000,
            store_parents: true,
            unsafe_no_c2: false,
        }
    }

    pub fn por(mut self, on: bool) -> Self {
        self.por = on;
        self
    }

    pub fn symmetry(mut self, on: bool) -> Self {
        self.symmetry = on;
        self
    }

    pub fn max_states(mut self, n: usize) -> Self {
        self.max_states = n;
        self
    }
}

/// Per-condition counts of rejected ample candidates.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct RejectionCounts {
    pub c1: u64,
    #[serde(rename = "c2Star")]
    pub c2_star: u64,
    pub c3: u64,
}

impl RejectionCounts {
    pub(crate) fn record(&mut self, c: Condition) {
        match c {
            Condition::C1 => self.c1 += 1,
            Condition::C2Star => self.c2_star += 1,
            Condition::C3 => self.c3 += 1,
        }
    }

    pub(crate) fn add(&mut self, o: &RejectionCounts) {
        self.c1 += o.c1;
        self.c2_star += o.c2_star;
        self.c3 += o.c3;
    }
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct WorkerStats {
    pub id: usize,
    pub states_stored: u64,
    pub sent: u64,
    pub recv: u64,
    pub max_depth: u64,
    pub fully_expanded: u64,
    pub transitions_fired: u64,
    pub rejections: RejectionCounts,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SearchResult {
    pub verdict: Verdict,
    /// Transitions leading from the initial state to the reported state.
    pub trace: Option<Vec<TransitionInstance>>,
    pub states_stored: u64,
    pub transitions_fired: u64,
    pub max_frontier_depth: u64,
    pub fully_expanded_count: u64,
    pub rejections: RejectionCounts,
    /// One entry for a centralized run, one per worker for a distributed run.
    pub per_worker: Vec<WorkerStats>,
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum SearchError {
    #[error("symmetry reduction requested but family `{0}` is not symmetry-safe")]
    UnsafeSymmetry(String),
    #[error("state budget of {0} exceeded")]
    BudgetExceeded(usize),
}

pub(crate) fn ensure_symmetry_safe(m: &Model, symmetry: bool) -> Result<(), SearchError> {
    if symmetry {
        for family in m.symmetric_families() {
            if !check_symmetry_safe(m, family) {
                let name = m.templates[m.instances[family].template].name.clone();
                return Err(SearchError::UnsafeSymmetry(name));
            }
        }
    }
    Ok(())
}

/// Parent link of a stored state: the key it was generated from and the
/// transition that generated it.
pub type Parent = (Vec<u8>, TransitionInstance);

/// Visited states keyed by storage key. Each entry keeps the concrete state
/// that was stored (and later expanded) under that key, so replaying the
/// recorded parent transitions reproduces the stored states exactly.
#[derive(Default)]
pub struct VisitedStore {
    map: FnvHashMap<Vec<u8>, (State, Option<Parent>)>,
}

impl VisitedStore {
    pub fn new() -> VisitedStore {
        VisitedStore::default()
    }

    /// Inserts `key` unless present; returns whether it was new.
    pub fn insert(&mut self, key: Vec<u8>, state: State, parent: Option<Parent>) -> bool {
        use std::collections::hash_map::Entry;
        match self.map.entry(key) {
            Entry::Occupied(_) => false,
            Entry::Vacant(v) => {
                v.insert((state, parent));
                true
            }
        }
    }

    pub fn contains(&self, key: &[u8]) -> bool {
        self.map.contains_key(key)
    }

    pub fn state(&self, key: &[u8]) -> Option<&State> {
        self.map.get(key).map(|(s, _)| s)
    }

    pub fn parent(&self, key: &[u8]) -> Option<&Parent> {
        self.map.get(key).and_then(|(_, p)| p.as_ref())
    }

    pub fn len(&self) -> usize {
        self.map.len()
    }

    pub fn is_empty(&self) -> bool {
        self.map.is_empty()
    }

    pub fn keys(&self) -> impl Iterator<Item = &Vec<u8>> {
        self.map.keys()
    }

    /// Walks parent links back to a root and returns the forward trace.
    pub fn trace_to(&self, key: &[u8]) -> Vec<TransitionInstance> {
        let mut trace = Vec::new();
        let mut cur = key.to_vec();
        while let Some((parent, t)) = self.parent(&cur) {
            trace.push(*t);
            cur = parent.clone();
        }
        trace.reverse();
        trace
    }
}

struct CentralCtx<'a> {
    visited: &'a VisitedStore,
    on_stack: &'a FnvHashSet<Vec<u8>>,
    in_queue: &'a FnvHashSet<Vec<u8>>,
    symmetry: bool,
}

impl ProvisoContext for CentralCtx<'_> {
    fn on_stack(&self, key: &[u8]) -> bool {
        self.on_stack.contains(key)
    }
    fn in_visited(&self, key: &[u8]) -> bool {
        self.visited.contains(key)
    }
    fn in_queue(&self, key: &[u8]) -> bool {
        self.in_queue.contains(key)
    }
    fn owner_of(&self, _key: &[u8]) -> usize {
        0
    }
    fn self_id(&self) -> usize {
        0
    }
    fn symmetry_enabled(&self) -> bool {
        self.symmetry
    }
}

struct Frame {
    key: Vec<u8>,
    succs: std::vec::IntoIter<(TransitionInstance, State)>,
}

struct Explorer<'m> {
    m: &'m Model,
    opts: &'m SearchOptions,
    policy: AmplePolicy,
    visited: VisitedStore,
    on_stack: FnvHashSet<Vec<u8>>,
    in_queue: FnvHashSet<Vec<u8>>,
    stats: WorkerStats,
    deadlock: Option<Vec<u8>>,
}

enum Visit {
    Seen,
    Stored,
    Error,
    Budget,
}

impl<'m> Explorer<'m> {
    fn store(&mut self, key: &[u8], state: &State, parent: Option<Parent>) -> Visit {
        let parent = parent.filter(|_| self.opts.store_parents);
        if !self.visited.insert(key.to_vec(), state.clone(), parent) {
            return Visit::Seen;
        }
        self.stats.states_stored += 1;
        if is_error(self.m, state) {
            return Visit::Error;
        }
        if self.visited.len() > self.opts.max_states {
            return Visit::Budget;
        }
        Visit::Stored
    }

    /// Successors to follow from `s`, which must already be marked on the
    /// stack (DFS) or removed from the queue (BFS).
    fn expand(&mut self, key: &[u8], s: &State) -> Vec<(TransitionInstance, State)> {
        let (fully, succs, rejected) = if self.opts.por {
            let ctx = CentralCtx {
                visited: &self.visited,
                on_stack: &self.on_stack,
                in_queue: &self.in_queue,
                symmetry: self.opts.symmetry,
            };
            let (d, succs) = select(self.m, s, &ctx, &self.policy);
            (d.fully_expanded, succs, d.rejected)
        } else {
            (true, successors(self.m, s), Vec::new())
        };
        for r in rejected {
            self.stats.rejections.record(r.condition);
        }
        if fully {
            self.stats.fully_expanded += 1;
        }
        if succs.is_empty() && !is_accepting(self.m, s) && self.deadlock.is_none() {
            self.deadlock = Some(key.to_vec());
        }
        self.stats.transitions_fired += succs.len() as u64;
        succs
    }

    fn key(&self, s: &State) -> Vec<u8> {
        state_key(self.m, s, self.opts.symmetry)
    }

    fn dfs(&mut self, s0: State) -> (Verdict, Option<Vec<u8>>) {
        let k0 = self.key(&s0);
        match self.store(&k0, &s0, None) {
            Visit::Error => return (Verdict::ErrorFound, Some(k0)),
            Visit::Budget => return (Verdict::BudgetExceeded, None),
            _ => {}
        }
        let mut stack = Vec::new();
        self.on_stack.insert(k0.clone());
        let succs = self.expand(&k0, &s0);
        stack.push(Frame {
            key: k0,
            succs: succs.into_iter(),
        });
        self.stats.max_depth = 1;
        while let Some(top) = stack.last_mut() {
            let Some((t, next)) = top.succs.next() else {
                let done = stack.pop().expect("nonempty");
                self.on_stack.remove(&done.key);
                continue;
            };
            let parent = (top.key.clone(), t);
            let key = self.key(&next);
            match self.store(&key, &next, Some(parent)) {
                Visit::Seen => {}
                Visit::Error => return (Verdict::ErrorFound, Some(key)),
                Visit::Budget => return (Verdict::BudgetExceeded, None),
                Visit::Stored => {
                    self.on_stack.insert(key.clone());
                    let succs = self.expand(&key, &next);
                    stack.push(Frame {
                        key,
                        succs: succs.into_iter(),
                    });
                    self.stats.max_depth = self.stats.max_depth.max(stack.len() as u64);
                }
            }
        }
        self.finish()
    }

    fn bfs(&mut self, s0: State) -> (Verdict, Option<Vec<u8>>) {
        let k0 = self.key(&s0);
        match self.store(&k0, &s0, None) {
            Visit::Error => return (Verdict::ErrorFound, Some(k0)),
            Visit::Budget => return (Verdict::BudgetExceeded, None),
            _ => {}
        }
        let mut queue = VecDeque::from([(k0.clone(), s0)]);
        self.in_queue.insert(k0);
        while let Some((key, s)) = queue.pop_front() {
            self.in_queue.remove(&key);
            for (t, next) in self.expand(&key, &s) {
                let nk = self.key(&next);
                match self.store(&nk, &next, Some((key.clone(), t))) {
                    Visit::Seen => {}
                    Visit::Error => return (Verdict::ErrorFound, Some(nk)),
                    Visit::Budget => return (Verdict::BudgetExceeded, None),
                    Visit::Stored => {
                        self.in_queue.insert(nk.clone());
                        queue.push_back((nk, next));
                        self.stats.max_depth = self.stats.max_depth.max(queue.len() as u64);
                    }
                }
            }
        }
        self.finish()
    }

    fn finish(&mut self) -> (Verdict, Option<Vec<u8>>) {
        match self.deadlock.take() {
            Some(k) => (Verdict::DeadlockFound, Some(k)),
            None => (Verdict::Clean, None),
        }
    }
}

/// Explores the state graph of `m` from its initial state.
pub fn explore(m: &Model, opts: &SearchOptions) -> Result<SearchResult, SearchError> {
    explore_detailed(m, opts).map(|(r, _)| r)
}

/// Like [`explore`], and also hands back the visited store.
pub fn explore_detailed(
    m: &Model,
    opts: &SearchOptions,
) -> Result<(SearchResult, VisitedStore), SearchError> {
    ensure_symmetry_safe(m, opts.symmetry)?;
    let variant = match opts.strategy {
        Strategy::Dfs => ProvisoVariant::DfsLocal,
        Strategy::Bfs => ProvisoVariant::BfsDistributed,
    };
    let mut ex = Explorer {
        m,
        opts,
        policy: AmplePolicy {
            cycle_proviso: !opts.unsafe_no_c2,
            ..AmplePolicy::new(variant)
        },
        visited: VisitedStore::new(),
        on_stack: FnvHashSet::default(),
        in_queue: FnvHashSet::default(),
        stats: WorkerStats::default(),
        deadlock: None,
    };
    let s0 = initial_state(m);
    let (verdict, at) = match opts.strategy {
        Strategy::Dfs => ex.dfs(s0),
        Strategy::Bfs => ex.bfs(s0),
    };
    log::info!(
        "{:?} finished: {:?}, {} states stored",
        opts.strategy,
        verdict,
        ex.stats.states_stored
    );
    let trace = at
        .filter(|_| opts.store_parents)
        .map(|k| ex.visited.trace_to(&k));
    let w = ex.stats;
    let result = SearchResult {
        verdict,
        trace,
        states_stored: w.states_stored,
        transitions_fired: w.transitions_fired,
        max_frontier_depth: w.max_depth,
        fully_expanded_count: w.fully_expanded,
        rejections: w.rejections,
        per_worker: vec![w],
    };
    Ok((result, ex.visited))
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error("step {position} ({label}) is not enabled")]
pub struct ReplayError {
    pub position: usize,
    pub label: String,
}

/// Replays `trace` from the initial state and returns the final state.
pub fn replay_trace(m: &Model, trace: &[TransitionInstance]) -> Result<State, ReplayError> {
    let mut s = initial_state(m);
    for (position, &t) in trace.iter().enumerate() {
        s = try_apply(m, t, &s).ok_or_else(|| ReplayError {
            position,
            label: m.label(t),
        })?;
    }
    Ok(s)
}

/// Exact reachable set by unreduced BFS, as canonical encodings.
pub fn oracle_reachable(m: &Model, budget: usize) -> Result<FnvHashSet<Vec<u8>>, SearchError> {
    let s0 = initial_state(m);
    let mut seen = FnvHashSet::default();
    seen.insert(encode_state(m, &s0));
    let mut queue = VecDeque::from([s0]);
    while let Some(s) = queue.pop_front() {
        for (_, next) in successors(m, &s) {
            if seen.insert(encode_state(m, &next)) {
                if seen.len() > budget {
                    return Err(SearchError::BudgetExceeded(budget));
                }
                queue.push_back(next);
            }
        }
    }
    Ok(seen)
}

/// Verdict implied by a full reachable set: error beats deadlock beats clean.
pub fn oracle_verdict(m: &Model, reachable: &FnvHashSet<Vec<u8>>) -> Verdict {
    let states: Vec<State> = reachable
        .iter()
        .map(|b| crate::state::decode_state(m, b).expect("oracle encodings decode"))
        .collect();
    if states.iter().any(|s| is_error(m, s)) {
        Verdict::ErrorFound
    } else if states.iter().any(|s| crate::semantics::is_deadlock(m, s)) {
        Verdict::DeadlockFound
    } else {
        Verdict::Clean
    }
}

use serde::Serialize;

use super::dependence::check_c1;
use super::symmetry::state_key;
use crate::model::{Model, TransitionInstance};
use crate::semantics::{apply, successors_of_process};
use crate::state::State;

/// What a search can tell the ample computation about its own bookkeeping.
/// All keys are storage keys (see [`state_key`]).
pub trait ProvisoContext {
    /// On the current DFS stack.
    fn on_stack(&self, key: &[u8]) -> bool;
    /// Already stored in this worker's visited set.
    fn in_visited(&self, key: &[u8]) -> bool;
    /// Waiting in this worker's BFS queue (stored but not yet expanded).
    fn in_queue(&self, key: &[u8]) -> bool;
    /// Worker that owns the key.
    fn owner_of(&self, key: &[u8]) -> usize;
    fn self_id(&self) -> usize;
    fn symmetry_enabled(&self) -> bool;
}

/// Which checkable form of the cycle proviso to apply.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum ProvisoVariant {
    /// Reject when a successor is on the DFS stack.
    DfsLocal,
    /// Additionally reject when a successor is owned by a lower worker id.
    DfsDistributed,
    /// Reject when a successor is stored but already expanded, or owned by a
    /// lower worker id.
    BfsDistributed,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
pub enum Condition {
    C1,
    #[serde(rename = "C2*")]
    C2Star,
    C3,
}

/// One candidate process that was not accepted, and the first condition it
/// failed.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Rejection {
    pub instance: usize,
    pub condition: Condition,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AmpleDecision {
    pub transitions: Vec<TransitionInstance>,
    /// The decision equals `enabled(s)`.
    pub fully_expanded: bool,
    pub rejected: Vec<Rejection>,
}

/// Knobs for [`ample_with`] beyond the proviso variant.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct AmplePolicy {
    pub variant: ProvisoVariant,
    /// When false the cycle proviso is skipped entirely. Unsound; kept for
    /// demonstrating the ignoring problem.
    pub cycle_proviso: bool,
    /// Reject candidates with any successor owned by another worker, so
    /// that every state shipping a successor across workers is fully
    /// expanded.
    pub boundary_full_expansion: bool,
}

impl AmplePolicy {
    pub fn new(variant: ProvisoVariant) -> AmplePolicy {
        AmplePolicy {
            variant,
            cycle_proviso: true,
            boundary_full_expansion: false,
        }
    }
}

fn proviso_holds(
    m: &Model,
    succs: &[(TransitionInstance, State)],
    ctx: &dyn ProvisoContext,
    variant: ProvisoVariant,
) -> bool {
    let sym = ctx.symmetry_enabled();
    !succs.iter().any(|(_, next)| {
        let probe = state_key(m, next, sym);
        match variant {
            ProvisoVariant::DfsLocal => ctx.on_stack(&probe),
            ProvisoVariant::DfsDistributed => {
                ctx.on_stack(&probe) || ctx.owner_of(&probe) < ctx.self_id()
            }
            ProvisoVariant::BfsDistributed => {
                (ctx.in_visited(&probe) && !ctx.in_queue(&probe))
                    || ctx.owner_of(&probe) < ctx.self_id()
            }
        }
    })
}

/// Cycle proviso for candidate set `x` at `s`, probing `t(s)` (or its
/// representative under symmetry) for each `t` in `x`.
pub fn check_c2_star(
    m: &Model,
    x: &[TransitionInstance],
    s: &State,
    ctx: &dyn ProvisoContext,
    variant: ProvisoVariant,
) -> bool {
    let succs: Vec<_> = x.iter().map(|&t| (t, apply(m, t, s))).collect();
    proviso_holds(m, &succs, ctx, variant)
}

/// True when no transition in `x` writes a variable read by the error
/// predicate.
///
/// The accept predicate is not part of the visible set: C0 and C1 alone
/// preserve every reachable deadlock state, and acceptance is judged on the
/// deadlock state itself.
pub fn check_c3_invisible(m: &Model, x: &[TransitionInstance]) -> bool {
    let visible = m.visible_slots();
    x.iter()
        .all(|&t| m.write_slots(t).iter().all(|w| !visible.contains(w)))
}

/// Ample set with the default policy for `variant`.
pub fn ample(
    m: &Model,
    s: &State,
    ctx: &dyn ProvisoContext,
    variant: ProvisoVariant,
) -> AmpleDecision {
    ample_with(m, s, ctx, &AmplePolicy::new(variant))
}

pub fn ample_with(
    m: &Model,
    s: &State,
    ctx: &dyn ProvisoContext,
    policy: &AmplePolicy,
) -> AmpleDecision {
    select(m, s, ctx, policy).0
}

/// Ample selection that also hands back the chosen successor states.
///
/// Candidates are the per-process enabled sets in instance declaration
/// order; the first one passing C1, C2* and C3 wins, otherwise the state is
/// fully expanded.
pub(crate) fn select(
    m: &Model,
    s: &State,
    ctx: &dyn ProvisoContext,
    policy: &AmplePolicy,
) -> (AmpleDecision, Vec<(TransitionInstance, State)>) {
    let mut per_process: Vec<Vec<(TransitionInstance, State)>> =
        Vec::with_capacity(m.num_instances());
    for i in 0..m.num_instances() {
        let mut v = Vec::new();
        successors_of_process(m, s, i, &mut v);
        per_process.push(v);
    }
    let mut rejected = Vec::new();
    let active = per_process.iter().filter(|v| !v.is_empty()).count();
    // A single active process is still a candidate: taking all of its
    // transitions is full expansion, which always satisfies the conditions.
    let mut chosen = None;
    if active > 1 {
        for (instance, succs) in per_process.iter().enumerate() {
            if succs.is_empty() {
                continue;
            }
            let failed = if !check_c1(m, instance, s) {
                Some(Condition::C1)
            } else if (policy.cycle_proviso && !proviso_holds(m, succs, ctx, policy.variant))
                || (policy.boundary_full_expansion
                    && succs.iter().any(|(_, next)| {
                        ctx.owner_of(&state_key(m, next, ctx.symmetry_enabled())) != ctx.self_id()
                    }))
            {
                // The boundary rule is reported as a proviso rejection.
                Some(Condition::C2Star)
            } else if !check_c3_invisible(m, &succs.iter().map(|(t, _)| *t).collect::<Vec<_>>()) {
                Some(Condition::C3)
            } else {
                None
            };
            match failed {
                Some(condition) => rejected.push(Rejection {
                    instance,
                    condition,
                }),
                None => {
                    chosen = Some(instance);
                    break;
                }
            }
        }
    }
    if let Some(instance) = chosen {
        let succs = per_process.swap_remove(instance);
        let decision = AmpleDecision {
            transitions: succs.iter().map(|(t, _)| *t).collect(),
            fully_expanded: false,
            rejected,
        };
        return (decision, succs);
    }
    let succs: Vec<_> = per_process.into_iter().flatten().collect();
    let decision = AmpleDecision {
        transitions: succs.iter().map(|(t, _)| *t).collect(),
        fully_expanded: true,
        rejected,
    };
    (decision, succs)
}

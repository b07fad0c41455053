use crate::model::{Model, TransitionInstance};
use crate::semantics::{enabled_of_process, try_apply};
use crate::state::State;

fn intersects(a: &[usize], b: &[usize]) -> bool {
    // Both sides come from BTreeSets, so they are sorted.
    let (mut i, mut j) = (0, 0);
    while i < a.len() && j < b.len() {
        match a[i].cmp(&b[j]) {
            std::cmp::Ordering::Less => i += 1,
            std::cmp::Ordering::Greater => j += 1,
            std::cmp::Ordering::Equal => return true,
        }
    }
    false
}

/// Conservative static dependence: same process, or a write of one touches
/// a variable the other reads or writes.
pub fn dependent(m: &Model, t: TransitionInstance, u: TransitionInstance) -> bool {
    if m.instance_index(t) == m.instance_index(u) {
        return true;
    }
    let (wt, wu) = (m.write_slots(t), m.write_slots(u));
    intersects(wt, m.read_slots(u)) || intersects(wt, wu) || intersects(wu, m.read_slots(t))
}

/// Semantic independence of two transitions at one state: each stays enabled
/// after the other and both orders reach the same state. Used as a test
/// oracle for [`dependent`].
pub fn independent_commutes(
    m: &Model,
    t: TransitionInstance,
    u: TransitionInstance,
    s: &State,
) -> bool {
    let (Some(st), Some(su)) = (try_apply(m, t, s), try_apply(m, u, s)) else {
        return false;
    };
    match (try_apply(m, u, &st), try_apply(m, t, &su)) {
        (Some(a), Some(b)) => a == b,
        _ => false,
    }
}

/// Static C1 test for choosing the enabled transitions of `instance` as the
/// ample set: no transition of any other process, enabled or not, depends on
/// any transition of `instance`.
///
/// Every transition of `instance` is checked, not only the enabled ones: a
/// disabled one that another process could enable would otherwise run
/// before any ample transition.
pub fn check_c1(m: &Model, instance: usize, s: &State) -> bool {
    debug_assert!(!enabled_of_process(m, s, instance).is_empty());
    let own: Vec<TransitionInstance> = m.transitions_of(instance).collect();
    (0..m.num_instances())
        .filter(|&q| q != instance)
        .flat_map(|q| m.transitions_of(q))
        .all(|u| own.iter().all(|&t| !dependent(m, t, u)))
}

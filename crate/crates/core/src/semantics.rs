//! Transition-system semantics of a parsed model.

use crate::model::{
    BinaryOp, Expr, Model, PidIndex, QuantKind, TransitionInstance, UnaryOp, VarRef,
};
use crate::state::State;

struct Env<'a> {
    model: &'a Model,
    state: &'a State,
    /// Slot offset of the executing instance's locals (transition scope).
    local_offset: usize,
    /// Pids bound by enclosing quantifiers, outermost first.
    pids: Vec<usize>,
}

impl Env<'_> {
    fn eval(&mut self, e: &Expr) -> i64 {
        match e {
            Expr::Int(v) => *v,
            Expr::Bool(b) => *b as i64,
            Expr::Const(c) => self.model.constants[*c].1,
            Expr::Var(VarRef::Global(g)) => self.state.0[*g],
            Expr::Var(VarRef::Local(l)) => self.state.0[self.local_offset + l],
            Expr::Indexed { family, index, var } => {
                let pid = match index {
                    PidIndex::Literal(p) => *p,
                    PidIndex::Const(c) => self.model.constants[*c].1 as usize,
                    PidIndex::Bound(b) => self.pids[*b],
                };
                let inst = self.model.family_start(*family) + pid;
                self.state.0[self.model.instance_infos()[inst].offset + var]
            }
            Expr::Unary(UnaryOp::Not, a) => (self.eval(a) == 0) as i64,
            Expr::Unary(UnaryOp::Neg, a) => self.eval(a).wrapping_neg(),
            Expr::Binary(op, a, b) => {
                let x = self.eval(a);
                match op {
                    BinaryOp::And => return (x != 0 && self.eval(b) != 0) as i64,
                    BinaryOp::Or => return (x != 0 || self.eval(b) != 0) as i64,
                    _ => {}
                }
                let y = self.eval(b);
                match op {
                    BinaryOp::Add => x.wrapping_add(y),
                    BinaryOp::Sub => x.wrapping_sub(y),
                    BinaryOp::Eq => (x == y) as i64,
                    BinaryOp::Ne => (x != y) as i64,
                    BinaryOp::Lt => (x < y) as i64,
                    BinaryOp::Le => (x <= y) as i64,
                    BinaryOp::Gt => (x > y) as i64,
                    BinaryOp::Ge => (x >= y) as i64,
                    BinaryOp::And | BinaryOp::Or => unreachable!(),
                }
            }
            Expr::Quant(q) => {
                let n = self.model.instances[q.family].count;
                let want = matches!(q.kind, QuantKind::Exists);
                let base = self.pids.len();
                let found = self.search(q, n, base, want);
                self.pids.truncate(base);
                (found == want) as i64
            }
        }
    }

    /// Looks for an assignment of the quantifier's variables under which the
    /// body evaluates to `want`.
    fn search(&mut self, q: &crate::model::Quantifier, n: usize, base: usize, want: bool) -> bool {
        let depth = self.pids.len() - base;
        if depth == q.vars.len() {
            return (self.eval(&q.body) != 0) == want;
        }
        for pid in 0..n {
            if q.distinct && self.pids[base..].contains(&pid) {
                continue;
            }
            self.pids.push(pid);
            let hit = self.search(q, n, base, want);
            self.pids.pop();
            if hit {
                return true;
            }
        }
        false
    }
}

fn eval_predicate(m: &Model, s: &State, e: &Expr) -> bool {
    Env {
        model: m,
        state: s,
        local_offset: 0,
        pids: Vec::new(),
    }
    .eval(e)
        != 0
}

/// The state in which every variable holds its declared initial value.
pub fn initial_state(m: &Model) -> State {
    let mut vals: Vec<i64> = m.globals.iter().map(|g| g.init).collect();
    for info in m.instance_infos() {
        vals.extend(m.templates[info.template].locals.iter().map(|l| l.init));
    }
    State::from_slots(vals)
}

/// Evaluates guard and updates; `Some(successor)` iff the transition is
/// enabled (guard true and every written value within range).
fn fire(m: &Model, instance: usize, t: TransitionInstance, s: &State) -> Option<State> {
    let decl = m.transition_decl(t);
    let offset = m.instance_infos()[instance].offset;
    let mut env = Env {
        model: m,
        state: s,
        local_offset: offset,
        pids: Vec::new(),
    };
    if env.eval(&decl.guard) == 0 {
        return None;
    }
    let mut next = s.0.clone();
    let ranges = m.slot_ranges();
    for (var, rhs) in &decl.updates {
        let slot = match var {
            VarRef::Global(g) => *g,
            VarRef::Local(l) => offset + l,
        };
        let v = env.eval(rhs);
        let (lo, hi) = ranges[slot];
        if v < lo || v > hi {
            return None;
        }
        next[slot] = v;
    }
    Some(State(next))
}

/// Enabled transitions of one flat instance, in declaration order.
pub fn enabled_of_process(m: &Model, s: &State, instance: usize) -> Vec<TransitionInstance> {
    m.transitions_of(instance)
        .filter(|&t| fire(m, instance, t, s).is_some())
        .collect()
}

/// Enabled transitions ordered by (instance, transition) declaration order.
pub fn enabled(m: &Model, s: &State) -> Vec<TransitionInstance> {
    (0..m.num_instances())
        .flat_map(|i| enabled_of_process(m, s, i))
        .collect()
}

/// Enabled transitions paired with their successor states.
pub fn successors(m: &Model, s: &State) -> Vec<(TransitionInstance, State)> {
    let mut out = Vec::new();
    for i in 0..m.num_instances() {
        successors_of_process(m, s, i, &mut out);
    }
    out
}

pub(crate) fn successors_of_process(
    m: &Model,
    s: &State,
    instance: usize,
    out: &mut Vec<(TransitionInstance, State)>,
) {
    for t in m.transitions_of(instance) {
        if let Some(next) = fire(m, instance, t, s) {
            out.push((t, next));
        }
    }
}

/// Successor of `s` under `t`, or `None` when `t` is not enabled in `s`.
pub fn try_apply(m: &Model, t: TransitionInstance, s: &State) -> Option<State> {
    fire(m, m.instance_index(t), t, s)
}

/// Successor of `s` under `t`. All right-hand sides read from `s`.
///
/// # Panics
///
/// When `t` is not enabled in `s`.
pub fn apply(m: &Model, t: TransitionInstance, s: &State) -> State {
    try_apply(m, t, s).unwrap_or_else(|| panic!("{} is not enabled in {:?}", m.label(t), s.slots()))
}

pub fn is_error(m: &Model, s: &State) -> bool {
    m.error.as_ref().is_some_and(|e| eval_predicate(m, s, e))
}

pub fn is_accepting(m: &Model, s: &State) -> bool {
    m.accept.as_ref().is_some_and(|e| eval_predicate(m, s, e))
}

/// No transition enabled and not an accepted terminal state.
pub fn is_deadlock(m: &Model, s: &State) -> bool {
    enabled(m, s).is_empty() && !is_accepting(m, s)
}

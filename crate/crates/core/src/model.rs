//! Static model description: declarations, process templates, instances and
//! the error/accept predicates, plus the flattened slot layout derived from
//! them.

use std::collections::BTreeSet;
use std::fmt;

/// A bounded integer variable.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct VarDecl {
    pub name: String,
    pub lo: i64,
    pub hi: i64,
    pub init: i64,
}

impl VarDecl {
    pub fn contains(&self, v: i64) -> bool {
        self.lo <= v && v <= self.hi
    }
}

/// Variable as seen from inside a transition: one of the globals, or one of
/// the locals of the executing instance.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum VarRef {
    Global(usize),
    Local(usize),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TransitionDecl {
    pub name: String,
    pub guard: Expr,
    /// Simultaneous assignments `var' = expr`.
    pub updates: Vec<(VarRef, Expr)>,
    /// Variables read by the guard or by any right-hand side.
    pub read_set: BTreeSet<VarRef>,
    /// Variables assigned by the updates.
    pub write_set: BTreeSet<VarRef>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ProcessTemplate {
    pub name: String,
    pub locals: Vec<VarDecl>,
    pub transitions: Vec<TransitionDecl>,
}

/// `instances T[count] [symmetric]`: a family of `count` copies of one template.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct InstanceDecl {
    pub template: usize,
    pub count: usize,
    pub symmetric: bool,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum UnaryOp {
    Not,
    Neg,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum BinaryOp {
    Add,
    Sub,
    Eq,
    Ne,
    Lt,
    Le,
    Gt,
    Ge,
    And,
    Or,
}

impl BinaryOp {
    pub fn symbol(self) -> &'static str {
        match self {
            BinaryOp::Add => "+",
            BinaryOp::Sub => "-",
            BinaryOp::Eq => "==",
            BinaryOp::Ne => "!=",
            BinaryOp::Lt => "<",
            BinaryOp::Le => "<=",
            BinaryOp::Gt => ">",
            BinaryOp::Ge => ">=",
            BinaryOp::And => "&&",
            BinaryOp::Or => "||",
        }
    }
}

/// Index into a family inside a predicate: `P[0]`, `P[K]` or `P[i]`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum PidIndex {
    Literal(usize),
    /// Named constant, by index into [`Model::constants`].
    Const(usize),
    /// Quantifier-bound variable, by position in the enclosing binder list
    /// (outermost first).
    Bound(usize),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum QuantKind {
    Exists,
    Forall,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Quantifier {
    pub kind: QuantKind,
    /// Bound variables range over pairwise distinct pids.
    pub distinct: bool,
    pub vars: Vec<String>,
    /// Instance family (index into [`Model::instances`]) the variables range over.
    pub family: usize,
    pub body: Expr,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Expr {
    Int(i64),
    Bool(bool),
    Const(usize),
    Var(VarRef),
    /// `F[idx].var` inside the error/accept predicates.
    Indexed {
        family: usize,
        index: PidIndex,
        var: usize,
    },
    Unary(UnaryOp, Box<Expr>),
    Binary(BinaryOp, Box<Expr>, Box<Expr>),
    Quant(Box<Quantifier>),
}

impl Expr {
    /// Calls `f` on every node, pre-order.
    pub fn walk<'a>(&'a self, f: &mut dyn FnMut(&'a Expr)) {
        f(self);
        match self {
            Expr::Unary(_, e) => e.walk(f),
            Expr::Binary(_, a, b) => {
                a.walk(f);
                b.walk(f);
            }
            Expr::Quant(q) => q.body.walk(f),
            _ => {}
        }
    }

    pub(crate) fn collect_vars(&self, out: &mut BTreeSet<VarRef>) {
        self.walk(&mut |e| {
            if let Expr::Var(v) = e {
                out.insert(*v);
            }
        });
    }
}

/// One concrete process: a pid within a family.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct InstanceInfo {
    pub family: usize,
    pub template: usize,
    pub pid: usize,
    /// Slot of the first local in the flat state vector.
    pub offset: usize,
}

/// Label of one enabled step: transition `transition` of template
/// `template`, executed by the `pid`-th member of that template's family.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct TransitionInstance {
    pub template: usize,
    pub pid: usize,
    pub transition: usize,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub(crate) struct Layout {
    pub instances: Vec<InstanceInfo>,
    /// First instance index of each family.
    pub family_start: Vec<usize>,
    /// Family index for each template, if the template is instantiated.
    pub template_family: Vec<Option<usize>>,
    /// Declared range of each flat slot.
    pub slots: Vec<(i64, i64)>,
    /// Instantiated read and write slots, per instance and transition.
    pub reads: Vec<Vec<Vec<usize>>>,
    pub writes: Vec<Vec<Vec<usize>>>,
    /// Slots read by the error predicate.
    pub visible: BTreeSet<usize>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Model {
    pub name: String,
    pub constants: Vec<(String, i64)>,
    pub globals: Vec<VarDecl>,
    pub templates: Vec<ProcessTemplate>,
    pub instances: Vec<InstanceDecl>,
    pub error: Option<Expr>,
    pub accept: Option<Expr>,
    pub(crate) layout: Layout,
}

impl Model {
    /// Assembles a model and derives its layout. Callers are expected to have
    /// validated names and ranges; [`crate::parse_model`] does.
    pub(crate) fn assemble(
        name: String,
        constants: Vec<(String, i64)>,
        globals: Vec<VarDecl>,
        templates: Vec<ProcessTemplate>,
        instances: Vec<InstanceDecl>,
        error: Option<Expr>,
        accept: Option<Expr>,
    ) -> Model {
        let mut slots: Vec<(i64, i64)> = globals.iter().map(|g| (g.lo, g.hi)).collect();
        let mut infos = Vec::new();
        let mut family_start = Vec::new();
        let mut template_family = vec![None; templates.len()];
        for (family, decl) in instances.iter().enumerate() {
            family_start.push(infos.len());
            template_family[decl.template] = Some(family);
            let tpl = &templates[decl.template];
            for pid in 0..decl.count {
                infos.push(InstanceInfo {
                    family,
                    template: decl.template,
                    pid,
                    offset: slots.len(),
                });
                slots.extend(tpl.locals.iter().map(|l| (l.lo, l.hi)));
            }
        }

        let slot_of = |info: &InstanceInfo, v: VarRef| match v {
            VarRef::Global(g) => g,
            VarRef::Local(l) => info.offset + l,
        };
        let mut reads = Vec::with_capacity(infos.len());
        let mut writes = Vec::with_capacity(infos.len());
        for info in &infos {
            let tpl = &templates[info.template];
            reads.push(
                tpl.transitions
                    .iter()
                    .map(|t| t.read_set.iter().map(|&v| slot_of(info, v)).collect())
                    .collect(),
            );
            writes.push(
                tpl.transitions
                    .iter()
                    .map(|t| t.write_set.iter().map(|&v| slot_of(info, v)).collect())
                    .collect(),
            );
        }

        let mut visible = BTreeSet::new();
        for pred in error.iter() {
            pred.walk(&mut |e| match e {
                Expr::Var(VarRef::Global(g)) => {
                    visible.insert(*g);
                }
                Expr::Indexed { family, var, .. } => {
                    // Any pid may be selected, so every member's copy is read.
                    let start = family_start[*family];
                    for info in &infos[start..start + instances[*family].count] {
                        visible.insert(info.offset + var);
                    }
                }
                _ => {}
            });
        }

        let layout = Layout {
            instances: infos,
            family_start,
            template_family,
            slots,
            reads,
            writes,
            visible,
        };
        Model {
            name,
            constants,
            globals,
            templates,
            instances,
            error,
            accept,
            layout,
        }
    }

    /// Concrete processes in declaration order.
    pub fn instance_infos(&self) -> &[InstanceInfo] {
        &self.layout.instances
    }

    pub fn num_instances(&self) -> usize {
        self.layout.instances.len()
    }

    /// Length of the flat state vector.
    pub fn num_slots(&self) -> usize {
        self.layout.slots.len()
    }

    pub(crate) fn slot_ranges(&self) -> &[(i64, i64)] {
        &self.layout.slots
    }

    /// Flat instance index of a transition instance.
    pub fn instance_index(&self, t: TransitionInstance) -> usize {
        let family = self.layout.template_family[t.template]
            .expect("transition instance of an uninstantiated template");
        self.layout.family_start[family] + t.pid
    }

    /// Flat index of the first instance of `family`.
    pub fn family_start(&self, family: usize) -> usize {
        self.layout.family_start[family]
    }

    /// Indices (into `instances`) of families declared `symmetric`.
    pub fn symmetric_families(&self) -> impl Iterator<Item = usize> + '_ {
        self.instances
            .iter()
            .enumerate()
            .filter(|(_, d)| d.symmetric)
            .map(|(i, _)| i)
    }

    pub fn transition_decl(&self, t: TransitionInstance) -> &TransitionDecl {
        &self.templates[t.template].transitions[t.transition]
    }

    pub(crate) fn read_slots(&self, t: TransitionInstance) -> &[usize] {
        &self.layout.reads[self.instance_index(t)][t.transition]
    }

    pub(crate) fn write_slots(&self, t: TransitionInstance) -> &[usize] {
        &self.layout.writes[self.instance_index(t)][t.transition]
    }

    pub(crate) fn visible_slots(&self) -> &BTreeSet<usize> {
        &self.layout.visible
    }

    /// All transition instances of one flat instance, enabled or not.
    pub fn transitions_of(&self, instance: usize) -> impl Iterator<Item = TransitionInstance> + '_ {
        let info = &self.layout.instances[instance];
        (0..self.templates[info.template].transitions.len()).map(move |transition| {
            TransitionInstance {
                template: info.template,
                pid: info.pid,
                transition,
            }
        })
    }

    /// Human-readable label such as `P[1].acquire`.
    pub fn label(&self, t: TransitionInstance) -> String {
        format!(
            "{}[{}].{}",
            self.templates[t.template].name,
            t.pid,
            self.templates[t.template].transitions[t.transition].name
        )
    }

    /// Resolves a label produced by [`Model::label`].
    pub fn parse_label(&self, label: &str) -> Option<TransitionInstance> {
        let (head, trans) = label.rsplit_once('.')?;
        let (tpl, rest) = head.split_once('[')?;
        let pid: usize = rest.strip_suffix(']')?.parse().ok()?;
        let template = self.templates.iter().position(|t| t.name == tpl)?;
        let family = self.layout.template_family[template]?;
        if pid >= self.instances[family].count {
            return None;
        }
        let transition = self.templates[template]
            .transitions
            .iter()
            .position(|t| t.name == trans)?;
        Some(TransitionInstance {
            template,
            pid,
            transition,
        })
    }
}

struct ExprPrinter<'a> {
    model: &'a Model,
    template: Option<usize>,
    expr: &'a Expr,
}

impl ExprPrinter<'_> {
    fn write(
        &self,
        f: &mut fmt::Formatter<'_>,
        e: &Expr,
        binders: &mut Vec<String>,
    ) -> fmt::Result {
        let m = self.model;
        match e {
            Expr::Int(v) => write!(f, "{v}"),
            Expr::Bool(b) => write!(f, "{b}"),
            Expr::Const(c) => write!(f, "{}", m.constants[*c].0),
            Expr::Var(VarRef::Global(g)) => write!(f, "{}", m.globals[*g].name),
            Expr::Var(VarRef::Local(l)) => {
                let tpl = self.template.expect("local outside a template");
                write!(f, "{}", m.templates[tpl].locals[*l].name)
            }
            Expr::Indexed { family, index, var } => {
                let tpl = &m.templates[m.instances[*family].template];
                let idx = match index {
                    PidIndex::Literal(n) => n.to_string(),
                    PidIndex::Const(c) => m.constants[*c].0.clone(),
                    PidIndex::Bound(b) => binders[*b].clone(),
                };
                write!(f, "{}[{}].{}", tpl.name, idx, tpl.locals[*var].name)
            }
            Expr::Unary(UnaryOp::Not, a) => {
                write!(f, "!(")?;
                self.write(f, a, binders)?;
                write!(f, ")")
            }
            Expr::Unary(UnaryOp::Neg, a) => {
                write!(f, "-(")?;
                self.write(f, a, binders)?;
                write!(f, ")")
            }
            Expr::Binary(op, a, b) => {
                write!(f, "(")?;
                self.write(f, a, binders)?;
                write!(f, " {} ", op.symbol())?;
                self.write(f, b, binders)?;
                write!(f, ")")
            }
            Expr::Quant(q) => {
                let kw = match q.kind {
                    QuantKind::Exists => "exists",
                    QuantKind::Forall => "forall",
                };
                write!(f, "({kw} ")?;
                if q.distinct {
                    write!(f, "distinct ")?;
                }
                write!(f, "{}: ", q.vars.join(", "))?;
                let depth = binders.len();
                binders.extend(q.vars.iter().cloned());
                self.write(f, &q.body, binders)?;
                binders.truncate(depth);
                write!(f, ")")
            }
        }
    }
}

impl fmt::Display for ExprPrinter<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.write(f, self.expr, &mut Vec::new())
    }
}

impl fmt::Display for Model {
    /// Prints the model in its source syntax; the output reparses to an
    /// equal model.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let show = |template: Option<usize>, expr| ExprPrinter {
            model: self,
            template,
            expr,
        };
        writeln!(f, "model {}", self.name)?;
        for (name, v) in &self.constants {
            writeln!(f, "const {name} = {v}")?;
        }
        for g in &self.globals {
            writeln!(f, "global {}: {}..{} = {}", g.name, g.lo, g.hi, g.init)?;
        }
        for (ti, tpl) in self.templates.iter().enumerate() {
            writeln!(f, "process {} {{", tpl.name)?;
            for l in &tpl.locals {
                writeln!(f, "  local {}: {}..{} = {}", l.name, l.lo, l.hi, l.init)?;
            }
            for t in &tpl.transitions {
                write!(f, "  trans {}: {} ->", t.name, show(Some(ti), &t.guard))?;
                for (k, (var, rhs)) in t.updates.iter().enumerate() {
                    let name = match var {
                        VarRef::Global(g) => &self.globals[*g].name,
                        VarRef::Local(l) => &tpl.locals[*l].name,
                    };
                    let sep = if k == 0 { " " } else { ", " };
                    write!(f, "{sep}{name}' = {}", show(Some(ti), rhs))?;
                }
                writeln!(f)?;
            }
            writeln!(f, "}}")?;
        }
        for inst in &self.instances {
            write!(
                f,
                "instances {}[{}]",
                self.templates[inst.template].name, inst.count
            )?;
            if inst.symmetric {
                write!(f, " symmetric")?;
            }
            writeln!(f)?;
        }
        if let Some(e) = &self.error {
            writeln!(f, "error: {}", show(None, e))?;
        }
        if let Some(e) = &self.accept {
            writeln!(f, "accept: {}", show(None, e))?;
        }
        Ok(())
    }
}

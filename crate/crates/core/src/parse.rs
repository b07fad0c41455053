//! Lexer, recursive-descent parser and validator for the model language.
//!
//! ```text
//! model    ::= "model" IDENT {const | global | process | instances} ["error:" pred] ["accept:" pred]
//! const    ::= "const" IDENT "=" INT
//! global   ::= "global" IDENT ":" INT ".." INT "=" INT
//! process  ::= "process" IDENT "{" {local} {trans} "}"
//! local    ::= "local" IDENT ":" INT ".." INT "=" INT
//! trans    ::= "trans" IDENT ":" pred "->" IDENT "'" "=" expr {"," IDENT "'" "=" expr}
//! instances::= "instances" IDENT "[" INT "]" ["symmetric"]
//! ```
//!
//! Names must be declared before use. Predicates support `==, !=, <, <=, >,
//! >=, &&, ||, !, +, -`, parentheses, and quantifiers
//! `exists [distinct] i, j: pred` / `forall i: pred` whose bound variables
//! index a process family (`P[i].x`).

use std::collections::BTreeSet;

use crate::model::{
    BinaryOp, Expr, InstanceDecl, Model, PidIndex, ProcessTemplate, QuantKind, Quantifier,
    TransitionDecl, UnaryOp, VarDecl, VarRef,
};

/// Source position, 1-based.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Pos {
    pub line: usize,
    pub col: usize,
}

impl std::fmt::Display for Pos {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{}:{}", self.line, self.col)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum ModelError {
    #[error("{pos}: syntax error: {message}")]
    Syntax { pos: Pos, message: String },
    #[error("{pos}: undeclared name `{name}`")]
    Undeclared { pos: Pos, name: String },
    #[error("{pos}: duplicate name `{name}`")]
    Duplicate { pos: Pos, name: String },
    #[error("{pos}: range error: {message}")]
    Range { pos: Pos, message: String },
    #[error("{pos}: type error: {message}")]
    Type { pos: Pos, message: String },
    #[error("{pos}: {message}")]
    Invalid { pos: Pos, message: String },
    #[error(
        "{pos}: family `{family}` is declared symmetric but the model is not symmetry-safe for it"
    )]
    UnsafeSymmetry { pos: Pos, family: String },
}

#[derive(Debug, Clone, PartialEq, Eq)]
enum Tok {
    Ident(String),
    Int(i64),
    Sym(&'static str),
    Eof,
}

impl std::fmt::Display for Tok {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Tok::Ident(s) => write!(f, "`{s}`"),
            Tok::Int(v) => write!(f, "`{v}`"),
            Tok::Sym(s) => write!(f, "`{s}`"),
            Tok::Eof => write!(f, "end of input"),
        }
    }
}

const SYMBOLS: &[&str] = &[
    "->", "..", "==", "!=", "<=", ">=", "&&", "||", "{", "}", "[", "]", "(", ")", ":", ",", ".",
    "'", "=", "<", ">", "!", "+", "-",
];

fn lex(src: &str) -> Result<Vec<(Tok, Pos)>, ModelError> {
    let mut toks = Vec::new();
    let chars: Vec<char> = src.chars().collect();
    let (mut i, mut line, mut col) = (0, 1, 1);
    while i < chars.len() {
        let c = chars[i];
        let pos = Pos { line, col };
        if c == '\n' {
            i += 1;
            line += 1;
            col = 1;
            continue;
        }
        if c.is_whitespace() {
            i += 1;
            col += 1;
            continue;
        }
        if c == '/' && chars.get(i + 1) == Some(&'/') {
            while i < chars.len() && chars[i] != '\n' {
                i += 1;
            }
            continue;
        }
        if c.is_ascii_digit() {
            let start = i;
            while i < chars.len() && chars[i].is_ascii_digit() {
                i += 1;
            }
            let text: String = chars[start..i].iter().collect();
            let v = text.parse::<i64>().map_err(|_| ModelError::Syntax {
                pos,
                message: format!("integer literal `{text}` out of range"),
            })?;
            col += i - start;
            toks.push((Tok::Int(v), pos));
            continue;
        }
        if c.is_alphabetic() || c == '_' {
            let start = i;
            while i < chars.len() && (chars[i].is_alphanumeric() || chars[i] == '_') {
                i += 1;
            }
            col += i - start;
            toks.push((Tok::Ident(chars[start..i].iter().collect()), pos));
            continue;
        }
        let rest: String = chars[i..(i + 2).min(chars.len())].iter().collect();
        match SYMBOLS.iter().find(|s| rest.starts_with(**s)) {
            Some(s) => {
                i += s.len();
                col += s.len();
                toks.push((Tok::Sym(s), pos));
            }
            None => {
                return Err(ModelError::Syntax {
                    pos,
                    message: format!("unexpected character `{c}`"),
                })
            }
        }
    }
    toks.push((Tok::Eof, Pos { line, col }));
    Ok(toks)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
enum Ty {
    Int,
    Bool,
}

/// Where identifiers are being resolved.
enum Scope {
    /// Inside a transition of the given template: locals, globals, constants.
    Transition(usize),
    /// Error/accept predicate: globals, constants, indexed family locals and
    /// quantifier binders.
    Predicate,
}

struct Binder {
    name: String,
    family: Option<usize>,
}

struct Parser {
    toks: Vec<(Tok, Pos)>,
    at: usize,
    constants: Vec<(String, i64)>,
    globals: Vec<VarDecl>,
    templates: Vec<ProcessTemplate>,
    instances: Vec<InstanceDecl>,
    instance_pos: Vec<Pos>,
    binders: Vec<Binder>,
}

type PResult<T> = Result<T, ModelError>;

impl Parser {
    fn peek(&self) -> &Tok {
        &self.toks[self.at].0
    }

    fn pos(&self) -> Pos {
        self.toks[self.at].1
    }

    fn bump(&mut self) -> (Tok, Pos) {
        let t = self.toks[self.at].clone();
        if self.at + 1 < self.toks.len() {
            self.at += 1;
        }
        t
    }

    fn syntax<T>(&self, message: impl Into<String>) -> PResult<T> {
        Err(ModelError::Syntax {
            pos: self.pos(),
            message: message.into(),
        })
    }

    fn is_sym(&self, s: &str) -> bool {
        matches!(self.peek(), Tok::Sym(x) if *x == s)
    }

    fn is_kw(&self, kw: &str) -> bool {
        matches!(self.peek(), Tok::Ident(x) if x == kw)
    }

    fn eat_sym(&mut self, s: &str) -> bool {
        if self.is_sym(s) {
            self.bump();
            true
        } else {
            false
        }
    }

    fn expect_sym(&mut self, s: &str) -> PResult<()> {
        if self.eat_sym(s) {
            Ok(())
        } else {
            self.syntax(format!("expected `{s}`, found {}", self.peek()))
        }
    }

    fn expect_kw(&mut self, kw: &str) -> PResult<()> {
        if self.is_kw(kw) {
            self.bump();
            Ok(())
        } else {
            self.syntax(format!("expected `{kw}`, found {}", self.peek()))
        }
    }

    fn ident(&mut self) -> PResult<(String, Pos)> {
        match self.bump() {
            (Tok::Ident(s), p) => Ok((s, p)),
            (t, pos) => Err(ModelError::Syntax {
                pos,
                message: format!("expected identifier, found {t}"),
            }),
        }
    }

    fn int(&mut self) -> PResult<i64> {
        let neg = self.eat_sym("-");
        match self.bump() {
            (Tok::Int(v), _) => Ok(if neg { -v } else { v }),
            (t, pos) => Err(ModelError::Syntax {
                pos,
                message: format!("expected integer, found {t}"),
            }),
        }
    }

    fn global_names_taken(&self, name: &str) -> bool {
        self.constants.iter().any(|(n, _)| n == name)
            || self.globals.iter().any(|g| g.name == name)
            || self.templates.iter().any(|t| t.name == name)
    }

    fn var_decl(&mut self) -> PResult<(VarDecl, Pos)> {
        let (name, pos) = self.ident()?;
        self.expect_sym(":")?;
        let lo = self.int()?;
        self.expect_sym("..")?;
        let hi = self.int()?;
        self.expect_sym("=")?;
        let init = self.int()?;
        if lo > hi {
            return Err(ModelError::Range {
                pos,
                message: format!("empty range {lo}..{hi} for `{name}`"),
            });
        }
        if init < lo || init > hi {
            return Err(ModelError::Range {
                pos,
                message: format!("initial value {init} of `{name}` outside {lo}..{hi}"),
            });
        }
        Ok((VarDecl { name, lo, hi, init }, pos))
    }

    fn model(mut self) -> PResult<Model> {
        self.expect_kw("model")?;
        let (name, _) = self.ident()?;
        let mut error = None;
        let mut accept = None;
        loop {
            let pos = self.pos();
            match self.peek().clone() {
                Tok::Ident(kw) if kw == "const" => {
                    self.bump();
                    let (n, p) = self.ident()?;
                    if self.global_names_taken(&n) {
                        return Err(ModelError::Duplicate { pos: p, name: n });
                    }
                    self.expect_sym("=")?;
                    let v = self.int()?;
                    self.constants.push((n, v));
                }
                Tok::Ident(kw) if kw == "global" => {
                    self.bump();
                    let (decl, p) = self.var_decl()?;
                    if self.global_names_taken(&decl.name) {
                        return Err(ModelError::Duplicate {
                            pos: p,
                            name: decl.name,
                        });
                    }
                    self.globals.push(decl);
                }
                Tok::Ident(kw) if kw == "process" => {
                    self.bump();
                    self.process()?;
                }
                Tok::Ident(kw) if kw == "instances" => {
                    self.bump();
                    self.instances_decl()?;
                }
                Tok::Ident(kw) if kw == "error" && error.is_none() && accept.is_none() => {
                    self.bump();
                    self.expect_sym(":")?;
                    error = Some(self.top_predicate()?);
                }
                Tok::Ident(kw) if kw == "accept" && accept.is_none() => {
                    self.bump();
                    self.expect_sym(":")?;
                    accept = Some(self.top_predicate()?);
                }
                Tok::Eof => break,
                t => {
                    return Err(ModelError::Syntax {
                        pos,
                        message: format!("unexpected {t} at top level"),
                    })
                }
            }
        }

        let instance_pos = std::mem::take(&mut self.instance_pos);
        let model = Model::assemble(
            name,
            self.constants,
            self.globals,
            self.templates,
            self.instances,
            error,
            accept,
        );
        for family in model.symmetric_families().collect::<Vec<_>>() {
            if !crate::reduction::check_symmetry_safe(&model, family) {
                return Err(ModelError::UnsafeSymmetry {
                    pos: instance_pos[family],
                    family: model.templates[model.instances[family].template]
                        .name
                        .clone(),
                });
            }
        }
        Ok(model)
    }

    fn process(&mut self) -> PResult<()> {
        let (name, pos) = self.ident()?;
        if self.global_names_taken(&name) {
            return Err(ModelError::Duplicate { pos, name });
        }
        self.expect_sym("{")?;
        let index = self.templates.len();
        self.templates.push(ProcessTemplate {
            name,
            locals: Vec::new(),
            transitions: Vec::new(),
        });
        while self.is_kw("local") {
            self.bump();
            let (decl, p) = self.var_decl()?;
            let taken = self.constants.iter().any(|(n, _)| *n == decl.name)
                || self.globals.iter().any(|g| g.name == decl.name)
                || self.templates[index]
                    .locals
                    .iter()
                    .any(|l| l.name == decl.name);
            if taken {
                return Err(ModelError::Duplicate {
                    pos: p,
                    name: decl.name,
                });
            }
            self.templates[index].locals.push(decl);
        }
        while self.is_kw("trans") {
            self.bump();
            let t = self.transition(index)?;
            self.templates[index].transitions.push(t);
        }
        if self.templates[index].transitions.is_empty() {
            return Err(ModelError::Invalid {
                pos,
                message: format!(
                    "process `{}` declares no transitions",
                    self.templates[index].name
                ),
            });
        }
        self.expect_sym("}")
    }

    fn transition(&mut self, template: usize) -> PResult<TransitionDecl> {
        let (name, pos) = self.ident()?;
        if self.templates[template]
            .transitions
            .iter()
            .any(|t| t.name == name)
        {
            return Err(ModelError::Duplicate { pos, name });
        }
        self.expect_sym(":")?;
        let scope = Scope::Transition(template);
        let gpos = self.pos();
        let guard = self.expect_ty(&scope, Ty::Bool, gpos)?;
        self.expect_sym("->")?;
        let mut updates: Vec<(VarRef, Expr)> = Vec::new();
        loop {
            let (target, tpos) = self.ident()?;
            let var = self.resolve_var(&scope, &target, tpos)?;
            if updates.iter().any(|(v, _)| *v == var) {
                return Err(ModelError::Duplicate {
                    pos: tpos,
                    name: format!("{target}'"),
                });
            }
            self.expect_sym("'")?;
            self.expect_sym("=")?;
            let epos = self.pos();
            let rhs = self.expect_ty(&scope, Ty::Int, epos)?;
            updates.push((var, rhs));
            if !self.eat_sym(",") {
                break;
            }
        }
        let mut read_set = BTreeSet::new();
        guard.collect_vars(&mut read_set);
        for (_, rhs) in &updates {
            rhs.collect_vars(&mut read_set);
        }
        let write_set = updates.iter().map(|(v, _)| *v).collect();
        Ok(TransitionDecl {
            name,
            guard,
            updates,
            read_set,
            write_set,
        })
    }

    fn instances_decl(&mut self) -> PResult<()> {
        let (name, pos) = self.ident()?;
        let template = self
            .templates
            .iter()
            .position(|t| t.name == name)
            .ok_or_else(|| ModelError::Undeclared {
                pos,
                name: name.clone(),
            })?;
        if self.instances.iter().any(|d| d.template == template) {
            return Err(ModelError::Duplicate { pos, name });
        }
        self.expect_sym("[")?;
        let cpos = self.pos();
        let count = self.int()?;
        if count < 1 {
            return Err(ModelError::Range {
                pos: cpos,
                message: format!("instance count {count} must be at least 1"),
            });
        }
        self.expect_sym("]")?;
        let symmetric = if self.is_kw("symmetric") {
            self.bump();
            true
        } else {
            false
        };
        self.instances.push(InstanceDecl {
            template,
            count: count as usize,
            symmetric,
        });
        self.instance_pos.push(pos);
        Ok(())
    }

    fn resolve_var(&self, scope: &Scope, name: &str, pos: Pos) -> PResult<VarRef> {
        if let Scope::Transition(t) = scope {
            if let Some(i) = self.templates[*t]
                .locals
                .iter()
                .position(|l| l.name == name)
            {
                return Ok(VarRef::Local(i));
            }
        }
        match self.globals.iter().position(|g| g.name == name) {
            Some(i) => Ok(VarRef::Global(i)),
            None => Err(ModelError::Undeclared {
                pos,
                name: name.to_string(),
            }),
        }
    }

    fn top_predicate(&mut self) -> PResult<Expr> {
        let pos = self.pos();
        self.expect_ty(&Scope::Predicate, Ty::Bool, pos)
    }

    fn expect_ty(&mut self, scope: &Scope, want: Ty, pos: Pos) -> PResult<Expr> {
        let (e, ty) = self.pred(scope)?;
        if ty != want {
            return Err(ModelError::Type {
                pos,
                message: format!("expected {want:?} expression, found {ty:?}"),
            });
        }
        Ok(e)
    }

    fn check(&self, pos: Pos, got: Ty, want: Ty, what: &str) -> PResult<()> {
        if got == want {
            Ok(())
        } else {
            Err(ModelError::Type {
                pos,
                message: format!("operand of `{what}` must be {want:?}, found {got:?}"),
            })
        }
    }

    fn pred(&mut self, scope: &Scope) -> PResult<(Expr, Ty)> {
        if self.is_kw("exists") || self.is_kw("forall") {
            return self.quantifier(scope);
        }
        let mut pos = self.pos();
        let (mut lhs, mut ty) = self.conj(scope)?;
        while self.is_sym("||") {
            self.check(pos, ty, Ty::Bool, "||")?;
            self.bump();
            pos = self.pos();
            let (rhs, rty) = self.conj(scope)?;
            self.check(pos, rty, Ty::Bool, "||")?;
            lhs = Expr::Binary(BinaryOp::Or, Box::new(lhs), Box::new(rhs));
            ty = Ty::Bool;
        }
        Ok((lhs, ty))
    }

    fn conj(&mut self, scope: &Scope) -> PResult<(Expr, Ty)> {
        let mut pos = self.pos();
        let (mut lhs, mut ty) = self.unary(scope)?;
        while self.is_sym("&&") {
            self.check(pos, ty, Ty::Bool, "&&")?;
            self.bump();
            pos = self.pos();
            let (rhs, rty) = self.unary(scope)?;
            self.check(pos, rty, Ty::Bool, "&&")?;
            lhs = Expr::Binary(BinaryOp::And, Box::new(lhs), Box::new(rhs));
            ty = Ty::Bool;
        }
        Ok((lhs, ty))
    }

    fn unary(&mut self, scope: &Scope) -> PResult<(Expr, Ty)> {
        if self.is_kw("exists") || self.is_kw("forall") {
            return self.quantifier(scope);
        }
        if self.is_sym("!") {
            self.bump();
            let pos = self.pos();
            let (e, ty) = self.unary(scope)?;
            self.check(pos, ty, Ty::Bool, "!")?;
            return Ok((Expr::Unary(UnaryOp::Not, Box::new(e)), Ty::Bool));
        }
        self.comparison(scope)
    }

    fn comparison(&mut self, scope: &Scope) -> PResult<(Expr, Ty)> {
        let pos = self.pos();
        let (lhs, ty) = self.sum(scope)?;
        let op = match self.peek() {
            Tok::Sym("==") => BinaryOp::Eq,
            Tok::Sym("!=") => BinaryOp::Ne,
            Tok::Sym("<") => BinaryOp::Lt,
            Tok::Sym("<=") => BinaryOp::Le,
            Tok::Sym(">") => BinaryOp::Gt,
            Tok::Sym(">=") => BinaryOp::Ge,
            _ => return Ok((lhs, ty)),
        };
        self.check(pos, ty, Ty::Int, op.symbol())?;
        self.bump();
        let rpos = self.pos();
        let (rhs, rty) = self.sum(scope)?;
        self.check(rpos, rty, Ty::Int, op.symbol())?;
        Ok((Expr::Binary(op, Box::new(lhs), Box::new(rhs)), Ty::Bool))
    }

    fn sum(&mut self, scope: &Scope) -> PResult<(Expr, Ty)> {
        let mut pos = self.pos();
        let (mut lhs, mut ty) = self.atom(scope)?;
        loop {
            let op = match self.peek() {
                Tok::Sym("+") => BinaryOp::Add,
                Tok::Sym("-") => BinaryOp::Sub,
                _ => return Ok((lhs, ty)),
            };
            self.check(pos, ty, Ty::Int, op.symbol())?;
            self.bump();
            pos = self.pos();
            let (rhs, rty) = self.atom(scope)?;
            self.check(pos, rty, Ty::Int, op.symbol())?;
            lhs = Expr::Binary(op, Box::new(lhs), Box::new(rhs));
            ty = Ty::Int;
        }
    }

    fn atom(&mut self, scope: &Scope) -> PResult<(Expr, Ty)> {
        let (tok, pos) = self.bump();
        match tok {
            Tok::Int(v) => Ok((Expr::Int(v), Ty::Int)),
            Tok::Sym("-") => {
                let p = self.pos();
                let (e, ty) = self.atom(scope)?;
                self.check(p, ty, Ty::Int, "-")?;
                Ok((Expr::Unary(UnaryOp::Neg, Box::new(e)), Ty::Int))
            }
            Tok::Sym("(") => {
                let r = self.pred(scope)?;
                self.expect_sym(")")?;
                Ok(r)
            }
            Tok::Ident(name) if name == "true" => Ok((Expr::Bool(true), Ty::Bool)),
            Tok::Ident(name) if name == "false" => Ok((Expr::Bool(false), Ty::Bool)),
            Tok::Ident(name) => {
                if self.is_sym("[") {
                    return self.indexed(scope, name, pos);
                }
                if self.binders.iter().any(|b| b.name == name) {
                    return Err(ModelError::Type {
                        pos,
                        message: format!(
                            "pid variable `{name}` may only be used as a family index"
                        ),
                    });
                }
                if let Scope::Transition(t) = scope {
                    if let Some(i) = self.templates[*t]
                        .locals
                        .iter()
                        .position(|l| l.name == name)
                    {
                        return Ok((Expr::Var(VarRef::Local(i)), Ty::Int));
                    }
                }
                if let Some(i) = self.globals.iter().position(|g| g.name == name) {
                    return Ok((Expr::Var(VarRef::Global(i)), Ty::Int));
                }
                if let Some(i) = self.constants.iter().position(|(n, _)| *n == name) {
                    return Ok((Expr::Const(i), Ty::Int));
                }
                Err(ModelError::Undeclared { pos, name })
            }
            t => Err(ModelError::Syntax {
                pos,
                message: format!("expected expression, found {t}"),
            }),
        }
    }

    fn indexed(&mut self, scope: &Scope, family_name: String, pos: Pos) -> PResult<(Expr, Ty)> {
        if let Scope::Transition(_) = scope {
            return Err(ModelError::Invalid {
                pos,
                message: format!(
                    "transitions may not reference other processes (`{family_name}[..]`)"
                ),
            });
        }
        let template = self
            .templates
            .iter()
            .position(|t| t.name == family_name)
            .ok_or_else(|| ModelError::Undeclared {
                pos,
                name: family_name.clone(),
            })?;
        let family = self
            .instances
            .iter()
            .position(|d| d.template == template)
            .ok_or_else(|| ModelError::Invalid {
                pos,
                message: format!("process `{family_name}` has no instances"),
            })?;
        let count = self.instances[family].count;
        self.expect_sym("[")?;
        let (itok, ipos) = self.bump();
        let index = match itok {
            Tok::Int(v) => {
                if v < 0 || v as usize >= count {
                    return Err(ModelError::Range {
                        pos: ipos,
                        message: format!("pid {v} outside {family_name}[0..{count}]"),
                    });
                }
                PidIndex::Literal(v as usize)
            }
            Tok::Ident(n) => {
                if let Some(b) = self.binders.iter().rposition(|b| b.name == n) {
                    match self.binders[b].family {
                        Some(f) if f != family => {
                            return Err(ModelError::Type {
                                pos: ipos,
                                message: format!("pid variable `{n}` used with two families"),
                            })
                        }
                        _ => self.binders[b].family = Some(family),
                    }
                    PidIndex::Bound(b)
                } else if let Some(c) = self.constants.iter().position(|(cn, _)| *cn == n) {
                    let v = self.constants[c].1;
                    if v < 0 || v as usize >= count {
                        return Err(ModelError::Range {
                            pos: ipos,
                            message: format!("pid {n}={v} outside {family_name}[0..{count}]"),
                        });
                    }
                    PidIndex::Const(c)
                } else {
                    return Err(ModelError::Undeclared { pos: ipos, name: n });
                }
            }
            t => {
                return Err(ModelError::Syntax {
                    pos: ipos,
                    message: format!("expected pid index, found {t}"),
                })
            }
        };
        self.expect_sym("]")?;
        self.expect_sym(".")?;
        let (var_name, vpos) = self.ident()?;
        let var = self.templates[template]
            .locals
            .iter()
            .position(|l| l.name == var_name)
            .ok_or(ModelError::Undeclared {
                pos: vpos,
                name: var_name,
            })?;
        Ok((Expr::Indexed { family, index, var }, Ty::Int))
    }

    fn quantifier(&mut self, scope: &Scope) -> PResult<(Expr, Ty)> {
        let (kw, pos) = self.ident()?;
        let kind = if kw == "exists" {
            QuantKind::Exists
        } else {
            QuantKind::Forall
        };
        if let Scope::Transition(_) = scope {
            return Err(ModelError::Invalid {
                pos,
                message: "quantifiers are only allowed in error/accept predicates".into(),
            });
        }
        let distinct = if self.is_kw("distinct") {
            self.bump();
            true
        } else {
            false
        };
        let depth = self.binders.len();
        let mut vars = Vec::new();
        loop {
            let (v, vpos) = self.ident()?;
            if vars.contains(&v) {
                return Err(ModelError::Duplicate { pos: vpos, name: v });
            }
            vars.push(v.clone());
            self.binders.push(Binder {
                name: v,
                family: None,
            });
            if !self.eat_sym(",") {
                break;
            }
        }
        self.expect_sym(":")?;
        let bpos = self.pos();
        let body = self.pred(scope);
        let bound = self.binders.split_off(depth);
        let (body, ty) = body?;
        self.check(bpos, ty, Ty::Bool, &kw)?;
        let mut family = None;
        for b in &bound {
            match (family, b.family) {
                (_, None) => {
                    return Err(ModelError::Invalid {
                        pos,
                        message: format!(
                            "pid variable `{}` is never used as a family index",
                            b.name
                        ),
                    })
                }
                (Some(f), Some(g)) if f != g => {
                    return Err(ModelError::Type {
                        pos,
                        message: "variables of one quantifier must range over one family".into(),
                    })
                }
                (_, g) => family = g,
            }
        }
        let quant = Quantifier {
            kind,
            distinct,
            vars,
            family: family.expect("at least one binder"),
            body,
        };
        Ok((Expr::Quant(Box::new(quant)), Ty::Bool))
    }
}

/// Parses and validates a model source text.
pub fn parse_model(text: &str) -> Result<Model, ModelError> {
    let toks = lex(text)?;
    let parser = Parser {
        toks,
        at: 0,
        constants: Vec::new(),
        globals: Vec::new(),
        templates: Vec::new(),
        instances: Vec::new(),
        instance_pos: Vec::new(),
        binders: Vec::new(),
    };
    parser.model()
}

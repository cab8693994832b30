//! Static validation of routine bodies.
//!
//! Rules enforced per call and per statement:
//! - no out argument may overlap another argument of the same call;
//! - an item handed to a child as an out or inout is never read or assigned
//!   afterwards by the parent, only forwarded to later calls;
//! - a `del` parameter is only ever forwarded;
//! - sub-array arguments fit inside the caller's extent, and types agree.

use std::collections::HashMap;
use std::fmt;

use super::ast::*;
use super::lexer::Pos;
use crate::value::BaseType;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Rule {
    OutAlias,
    ChildOutcome,
    DelMisuse,
    ExtentMismatch,
    ExtentOverflow,
    TypeMismatch,
    ModeMismatch,
    UnknownName,
    UnknownRoutine,
    DuplicateName,
    UndeclaredEffect,
}

impl fmt::Display for Rule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Debug::fmt(self, f)
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Diagnostic {
    pub rule: Rule,
    pub routine: String,
    pub message: String,
    pub pos: Pos,
}

impl fmt::Display for Diagnostic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}: in `{}` at {}: {}", self.rule, self.routine, self.pos, self.message)
    }
}

/// Validates every routine of `program`, returning it unchanged when no rule
/// is violated.
pub fn check_program(program: Program) -> Result<Program, Vec<Diagnostic>> {
    let mut diags = Vec::new();
    for routine in program.routines.values() {
        let mut checker = Checker { program: &program, routine, diags: &mut diags };
        checker.check_routine();
    }
    if diags.is_empty() {
        Ok(program)
    } else {
        Err(diags)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
enum Kind {
    /// Strict in parameter: a value.
    ValueParam,
    /// inout/out parameter, or any `del` parameter: a reference.
    RefParam { del: bool },
    /// Body local; becomes a reference once handed to a child.
    Local { by_ref: bool },
}

#[derive(Clone, Debug)]
struct Name {
    ty: BaseType,
    shape: Shape,
    kind: Kind,
    /// Passed to a child as an out or inout.
    delegated: bool,
}

impl Name {
    fn is_ref(&self) -> bool {
        matches!(self.kind, Kind::RefParam { .. } | Kind::Local { by_ref: true })
    }

    fn is_del(&self) -> bool {
        matches!(self.kind, Kind::RefParam { del: true })
    }

    fn len(&self) -> Option<usize> {
        match self.shape {
            Shape::Scalar => Some(1),
            Shape::Array(e) => Some(e.len()),
            Shape::Unsized => None,
        }
    }
}

type Scope = HashMap<String, Name>;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
enum Ty {
    Scalar(BaseType),
    Array(BaseType, Option<usize>),
}

struct Checker<'a> {
    program: &'a Program,
    routine: &'a RoutineDef,
    diags: &'a mut Vec<Diagnostic>,
}

/// One argument's footprint on a caller name, for the alias check.
struct Footprint<'e> {
    name: &'e str,
    mode: Mode,
    /// Offsets `[lo, hi]` in the caller's item; `None` when not static.
    span: Option<(i64, i64)>,
}

impl Checker<'_> {
    fn report(&mut self, rule: Rule, pos: Pos, message: impl Into<String>) {
        self.diags.push(Diagnostic { rule, routine: self.routine.name.clone(), message: message.into(), pos });
    }

    fn check_routine(&mut self) {
        let r = self.routine;
        let stmts = match &r.body {
            Body::Stmts(stmts) => stmts,
            Body::Prototype => {
                self.report(Rule::UnknownRoutine, r.pos, format!("`{}` is declared but never defined", r.name));
                return;
            }
            Body::Builtin(_) => return,
        };
        let mut scope = Scope::new();
        for p in &r.params {
            let kind = match (p.mode, p.del) {
                (Mode::In, false) => Kind::ValueParam,
                (_, del) => Kind::RefParam { del },
            };
            let name = Name { ty: p.ty, shape: p.shape, kind, delegated: false };
            if scope.insert(p.name.clone(), name).is_some() {
                self.report(Rule::DuplicateName, r.pos, format!("parameter `{}` repeated", p.name));
            }
        }
        self.stmts(stmts, &mut scope);
    }

    fn stmts(&mut self, stmts: &[Stmt], scope: &mut Scope) {
        for s in stmts {
            self.stmt(s, scope);
        }
    }

    fn stmt(&mut self, stmt: &Stmt, scope: &mut Scope) {
        let pos = stmt.pos;
        match &stmt.kind {
            StmtKind::VarDecl { name, ty, shape, init } => {
                if let Some(init) = init {
                    match (self.read(init, scope, pos), shape) {
                        (Some(Ty::Scalar(t)), Shape::Scalar) if t == *ty => {}
                        (Some(Ty::Array(t, Some(n))), Shape::Array(e)) if t == *ty => {
                            if n > e.len() {
                                self.report(
                                    Rule::ExtentOverflow,
                                    pos,
                                    format!("initializer of {n} elements overflows `{name}`{e}"),
                                );
                            }
                        }
                        (None, _) => {}
                        _ => self.report(
                            Rule::TypeMismatch,
                            pos,
                            format!("initializer does not match the type of `{name}`"),
                        ),
                    }
                }
                let local = Name { ty: *ty, shape: *shape, kind: Kind::Local { by_ref: false }, delegated: false };
                if scope.insert(name.clone(), local).is_some() {
                    self.report(Rule::DuplicateName, pos, format!("`{name}` is already declared"));
                }
            }
            StmtKind::Assign(target, value) => {
                let value_ty = self.read(value, scope, pos);
                let index_ty = match target {
                    LValue::Index(_, index) => self.read(index, scope, pos),
                    LValue::Var(_) => None,
                };
                let name = target.name();
                let Some(info) = scope.get(name) else {
                    self.report(Rule::UnknownName, pos, format!("`{name}` is not declared"));
                    return;
                };
                if info.kind == Kind::ValueParam {
                    self.report(Rule::ModeMismatch, pos, format!("in parameter `{name}` is assigned"));
                } else if info.is_del() {
                    self.report(Rule::DelMisuse, pos, format!("del item `{name}` is assigned"));
                } else if info.delegated {
                    self.report(
                        Rule::ChildOutcome,
                        pos,
                        format!("`{name}` is assigned after being handed to a child task"),
                    );
                }
                let elem = info.ty;
                let shape_ok = match target {
                    LValue::Var(_) => !info.shape.is_array(),
                    LValue::Index(..) => info.shape.is_array(),
                };
                if !shape_ok {
                    self.report(Rule::TypeMismatch, pos, format!("`{target}` is not assignable", target = name));
                }
                if let LValue::Index(_, index) = target {
                    self.static_index(name, index, scope, pos);
                    if !matches!(index_ty, None | Some(Ty::Scalar(BaseType::Int))) {
                        self.report(Rule::TypeMismatch, pos, "array index must be an int");
                    }
                }
                if let Some(t) = value_ty {
                    if t != Ty::Scalar(elem) {
                        self.report(
                            Rule::TypeMismatch,
                            pos,
                            format!("assigning a value of the wrong type to `{name}`"),
                        );
                    }
                }
            }
            StmtKind::If(cond, then_branch, else_branch) => {
                match self.read(cond, scope, pos) {
                    Some(Ty::Scalar(BaseType::Boolean)) | None => {}
                    Some(_) => self.report(Rule::TypeMismatch, pos, "condition must be a boolean"),
                }
                let mut then_scope = scope.clone();
                let mut else_scope = scope.clone();
                self.stmts(then_branch, &mut then_scope);
                self.stmts(else_branch, &mut else_scope);
                for (name, info) in scope.iter_mut() {
                    for branch in [&then_scope, &else_scope] {
                        let b = &branch[name];
                        info.delegated |= b.delegated;
                        if b.kind == (Kind::Local { by_ref: true }) {
                            info.kind = b.kind;
                        }
                    }
                }
            }
            StmtKind::Call(call) => self.call(call, scope, pos),
        }
    }

    /// Type of `e` read as a value; `None` once an error has been reported.
    fn read(&mut self, e: &Expr, scope: &Scope, pos: Pos) -> Option<Ty> {
        match e {
            Expr::Int(_) => Some(Ty::Scalar(BaseType::Int)),
            Expr::Bool(_) => Some(Ty::Scalar(BaseType::Boolean)),
            Expr::Char(_) => Some(Ty::Scalar(BaseType::Char)),
            Expr::Str(chars) => Some(Ty::Array(BaseType::Char, Some(chars.len()))),
            Expr::Var(name) => {
                let info = self.readable(name, scope, pos)?;
                Some(match info.shape {
                    Shape::Scalar => Ty::Scalar(info.ty),
                    _ => Ty::Array(info.ty, info.len()),
                })
            }
            Expr::Index(name, index) => {
                let index_ty = self.read(index, scope, pos);
                let info = self.readable(name, scope, pos)?;
                if !matches!(index_ty, None | Some(Ty::Scalar(BaseType::Int))) {
                    self.report(Rule::TypeMismatch, pos, "array index must be an int");
                }
                if !info.shape.is_array() {
                    self.report(Rule::TypeMismatch, pos, format!("`{name}` is not an array"));
                    return None;
                }
                let ty = info.ty;
                self.static_index(name, index, scope, pos);
                Some(Ty::Scalar(ty))
            }
            Expr::Binary(op, l, r) => {
                let (l, r) = (self.read(l, scope, pos), self.read(r, scope, pos));
                let (Some(l), Some(r)) = (l, r) else { return None };
                use BaseType::*;
                let ok = match op {
                    BinOp::Add | BinOp::Sub | BinOp::Mul | BinOp::Div => l == Ty::Scalar(Int) && r == Ty::Scalar(Int),
                    BinOp::Eq | BinOp::Ne => match (l, r) {
                        (Ty::Scalar(a), Ty::Scalar(b)) => a == b || (a != Boolean && b != Boolean),
                        _ => false,
                    },
                    BinOp::Ge | BinOp::Gt | BinOp::Lt => {
                        matches!((l, r), (Ty::Scalar(Int | Char), Ty::Scalar(Int | Char)))
                    }
                };
                if !ok {
                    self.report(
                        Rule::TypeMismatch,
                        pos,
                        format!("operands of `{}` have incompatible types", op.symbol()),
                    );
                    return None;
                }
                Some(if op.is_comparison() { Ty::Scalar(Boolean) } else { Ty::Scalar(Int) })
            }
        }
    }

    fn readable<'s>(&mut self, name: &str, scope: &'s Scope, pos: Pos) -> Option<&'s Name> {
        let Some(info) = scope.get(name) else {
            self.report(Rule::UnknownName, pos, format!("`{name}` is not declared"));
            return None;
        };
        if info.is_del() {
            self.report(Rule::DelMisuse, pos, format!("del item `{name}` is read"));
        } else if info.delegated {
            self.report(Rule::ChildOutcome, pos, format!("`{name}` is read after being handed to a child task"));
        }
        Some(info)
    }

    fn static_index(&mut self, name: &str, index: &Expr, scope: &Scope, pos: Pos) {
        if let (Some(k), Some(Shape::Array(e))) = (index.const_int(), scope.get(name).map(|n| n.shape)) {
            if e.offset(k).is_none() {
                self.report(Rule::ExtentOverflow, pos, format!("index {k} outside `{name}`{e}"));
            }
        }
    }

    fn call(&mut self, call: &Call, scope: &mut Scope, pos: Pos) {
        let Some(callee) = self.program.routine(&call.routine) else {
            self.report(Rule::UnknownRoutine, pos, format!("no routine named `{}`", call.routine));
            for (_, arg) in call.all_args() {
                if !(arg.item_name().is_some_and(|n| !scope.contains_key(n))) {
                    self.read(arg, scope, pos);
                }
            }
            return;
        };
        for mode in Mode::ALL {
            if call.args_of(mode).len() != callee.arity(mode) {
                self.report(
                    Rule::ModeMismatch,
                    pos,
                    format!(
                        "`{call}` does not match the signature of `{}` ({} ins, {} inouts, {} outs)",
                        callee.name,
                        callee.arity(Mode::In),
                        callee.arity(Mode::Inout),
                        callee.arity(Mode::Out),
                    ),
                );
                return;
            }
        }

        for &index in &call.del_marks {
            let param = &callee.params[index];
            if !param.del {
                self.report(
                    Rule::DelMisuse,
                    pos,
                    format!("`{call}` marks a del argument for `{}`, which is not a del parameter", param.name),
                );
            }
        }

        let mut footprints = Vec::new();
        let mut delegated = Vec::new();
        for (index, ((mode, arg), param)) in call.all_args().zip(&callee.params).enumerate() {
            debug_assert_eq!(mode, param.mode);
            let name = arg.item_name();
            let known = name.and_then(|n| scope.get(n)).cloned();

            if mode.writes() {
                let Some(name) = name else {
                    self.report(
                        Rule::ModeMismatch,
                        pos,
                        format!("argument `{arg}` for {} `{}` must name an item", mode_word(mode), param.name),
                    );
                    continue;
                };
                let info = match known {
                    Some(info) => info,
                    None if matches!(arg, Expr::Var(_)) => {
                        // First mention as an out: an implicit local.
                        let Some(shape) = callee.implicit_extent(index) else {
                            self.report(
                                Rule::ExtentMismatch,
                                pos,
                                format!("cannot infer the extent of `{name}`; declare it"),
                            );
                            continue;
                        };
                        let local = Name { ty: param.ty, shape, kind: Kind::Local { by_ref: true }, delegated: false };
                        scope.insert(name.to_string(), local.clone());
                        local
                    }
                    None => {
                        self.report(Rule::UnknownName, pos, format!("`{name}` is not declared"));
                        continue;
                    }
                };
                if info.kind == Kind::ValueParam {
                    self.report(
                        Rule::ModeMismatch,
                        pos,
                        format!("in parameter `{name}` passed as {} `{}`", mode_word(mode), param.name),
                    );
                    continue;
                }
                if let Some(entry) = scope.get_mut(name) {
                    if let Kind::Local { by_ref } = &mut entry.kind {
                        *by_ref = true;
                    }
                }
                if let Expr::Index(_, idx) = arg {
                    self.read(idx, scope, pos);
                }
                footprints.push(self.forward(arg, name, &info, param, pos));
                delegated.push(name);
                continue;
            }

            // In parameters: references and whole arrays are forwarded, the rest evaluated.
            match (name, known) {
                (Some(name), Some(info)) if info.is_ref() || param.shape.is_array() => {
                    if let Expr::Index(_, idx) = arg {
                        self.read(idx, scope, pos);
                    }
                    footprints.push(self.forward(arg, name, &info, param, pos));
                }
                _ => {
                    let ty = self.read(arg, scope, pos);
                    if let (Some(name), Some(ty)) = (name, ty) {
                        let span = match (arg, ty) {
                            (Expr::Var(_), Ty::Scalar(_)) => Some((0, 0)),
                            _ => None,
                        };
                        footprints.push(Some(Footprint { name, mode, span }));
                    }
                    let expected = match param.shape {
                        Shape::Scalar => matches!(ty, Some(Ty::Scalar(t)) if t == param.ty),
                        Shape::Array(e) => {
                            matches!(ty, Some(Ty::Array(t, n)) if t == param.ty && n.is_none_or(|n| n == e.len()))
                        }
                        Shape::Unsized => matches!(ty, Some(Ty::Array(t, _)) if t == param.ty),
                    };
                    if ty.is_some() && !expected {
                        self.report(
                            Rule::TypeMismatch,
                            pos,
                            format!("argument `{arg}` does not match parameter `{}`", param.name),
                        );
                    }
                }
            }
        }

        let footprints: Vec<Footprint> = footprints.into_iter().flatten().collect();
        for (i, a) in footprints.iter().enumerate() {
            for b in &footprints[i + 1..] {
                if a.name != b.name || (a.mode != Mode::Out && b.mode != Mode::Out) {
                    continue;
                }
                let overlap = match (a.span, b.span) {
                    (Some((alo, ahi)), Some((blo, bhi))) => alo <= bhi && blo <= ahi,
                    _ => true,
                };
                if overlap {
                    self.report(
                        Rule::OutAlias,
                        pos,
                        format!("`{call}` passes `{}` as an out and as another argument", a.name),
                    );
                }
            }
        }
        for name in delegated {
            if let Some(info) = scope.get_mut(name) {
                info.delegated = true;
            }
        }
    }

    /// Checks a forwarded item argument against its parameter and returns
    /// its footprint in the caller's item.
    fn forward<'e>(
        &mut self,
        arg: &'e Expr,
        name: &'e str,
        info: &Name,
        param: &ParamDecl,
        pos: Pos,
    ) -> Option<Footprint<'e>> {
        if info.ty != param.ty {
            self.report(
                Rule::TypeMismatch,
                pos,
                format!("`{name}` is {} but `{}` expects {}", info.ty, param.name, param.ty),
            );
            return None;
        }
        let caller_lo = match info.shape {
            Shape::Array(e) => e.lo,
            _ => 0,
        };
        let start = match arg {
            Expr::Var(_) => Some(0),
            Expr::Index(_, idx) => {
                if !info.shape.is_array() {
                    self.report(Rule::TypeMismatch, pos, format!("`{name}` is not an array"));
                    return None;
                }
                match idx.const_int() {
                    Some(k) => {
                        let offset = k - caller_lo;
                        if offset < 0 || info.len().is_some_and(|n| offset >= n as i64) {
                            self.report(
                                Rule::ExtentOverflow,
                                pos,
                                format!("`{arg}` lies outside the extent of `{name}`"),
                            );
                            return None;
                        }
                        Some(offset)
                    }
                    None => None,
                }
            }
            _ => unreachable!("forwarded arguments name an item"),
        };
        let caller_len = info.len().map(|n| n as i64);
        let width = match param.shape {
            Shape::Scalar => {
                if matches!(arg, Expr::Var(_)) && info.shape.is_array() {
                    self.report(
                        Rule::ExtentMismatch,
                        pos,
                        format!("array `{name}` passed to scalar parameter `{}`", param.name),
                    );
                    return None;
                }
                Some(1)
            }
            Shape::Array(e) => Some(e.len() as i64),
            Shape::Unsized => None,
        };
        if let (Some(start), Some(width), Some(len)) = (start, width, caller_len) {
            if start + width > len {
                self.report(
                    Rule::ExtentOverflow,
                    pos,
                    format!("`{arg}` with {width} elements for `{}` overflows `{name}` of {len} elements", param.name),
                );
                return None;
            }
        }
        let span = match (start, width.or(caller_len.zip(start).map(|(n, s)| n - s))) {
            (Some(s), Some(w)) => Some((s, s + w - 1)),
            (Some(s), None) => Some((s, i64::MAX)),
            _ => None,
        };
        Some(Footprint { name, mode: param.mode, span })
    }
}

fn mode_word(mode: Mode) -> &'static str {
    match mode {
        Mode::In => "in",
        Mode::Inout => "inout",
        Mode::Out => "out",
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::frontend::{lexer::tokenize, parser::parse_program};

    fn rules(src: &str) -> Vec<Rule> {
        let p = parse_program(&tokenize(src).unwrap()).unwrap();
        match check_program(p) {
            Ok(_) => vec![],
            Err(d) => d.into_iter().map(|d| d.rule).collect(),
        }
    }

    const FACT: &str = "fact(int b, int e;; int f)
        { if (b>=e) f=b;
          else { int m=(b+e)/2; fact(b,m;;x); fact(m+1,e;;y); mult(x,y;;f); } }";

    #[test]
    fn fact_is_valid() {
        assert_eq!(rules(FACT), vec![]);
    }

    #[test]
    fn out_alias_is_rejected() {
        let src = "main(;;) { int m = 1; int k = 2; plus(m,k;;k); }";
        assert_eq!(rules(src), vec![Rule::OutAlias]);
        // Disjoint halves of one array do not alias.
        let src = "two(;; int a[0:1], int b[0:1]);
                   f(;; int h[0:3]) { two(;;h[0],h[2]); }";
        assert_eq!(rules(src), vec![Rule::UnknownRoutine]);
        let src = "two(;; int a[0:1], int b[0:1]) { a[0]=1; a[1]=1; b[0]=1; b[1]=1; }
                   f(;; int h[0:3]) { two(;;h[0],h[2]); }
                   g(;; int h[0:3]) { two(;;h[0],h[1]); }";
        assert_eq!(rules(src), vec![Rule::OutAlias]);
    }

    #[test]
    fn parent_may_not_use_child_outcome() {
        let src = "cfact(int b, int e;; int f)
            { if (b>=e) f=b;
              else { int m=(b+e)/2; cfact(b,m;;x); cfact(m+1,e;;y); f=x*y; } }";
        assert_eq!(rules(src), vec![Rule::ChildOutcome, Rule::ChildOutcome]);
        // Assignment after delegation is also an outcome use.
        let src = "g(;;int r) { r = 1; } f(;;int z) { g(;;z); z = 3; }";
        assert_eq!(rules(src), vec![Rule::ChildOutcome]);
    }

    #[test]
    fn del_items_are_only_forwarded() {
        let ok = "c(;int x;) { x = x + 1; }
                  b(boolean p; del int x;) { c(;x;); if (p) c(;x;); }";
        assert_eq!(rules(ok), vec![]);
        let read = "b(boolean p; del int x;) { int z = x + 1; }";
        assert_eq!(rules(read), vec![Rule::DelMisuse]);
        let write = "b(;; del int x) { x = 1; }";
        assert_eq!(rules(write), vec![Rule::DelMisuse]);
        let marked = "g(int q;;) { } main(;;) { int z = 1; g(del z;;); }";
        assert_eq!(rules(marked), vec![Rule::DelMisuse]);
        let marked = "g(; del int q;) { } main(;;) { int z = 1; g(;del z;); }";
        assert!(rules(marked).is_empty());
    }

    #[test]
    fn sub_array_extents() {
        let base = "d(; int y[0:4999];) { y[0] = y[0] + 1; }";
        let ok = format!("{base} e(; del int y[0:9999];) {{ d(;y;); d(;y[5000];); }}");
        assert_eq!(rules(&ok), vec![]);
        let bad = format!("{base} e(; del int y[0:9999];) {{ d(;y;); d(;y[6000];); }}");
        assert_eq!(rules(&bad), vec![Rule::ExtentOverflow]);
        let scalar = format!("{base} e(; int y;) {{ d(;y;); }}");
        assert_eq!(rules(&scalar), vec![Rule::ExtentOverflow]);
    }

    #[test]
    fn mode_mismatched_calls_are_rejected() {
        let src = "d(; int y[0:4999];) { y[0] = 1; }
                   e(; del int y[0:9999];) { d(;;y); }";
        assert_eq!(rules(src), vec![Rule::ModeMismatch]);
        let src = "f(int a;;) { plus(1,2;;a); }";
        assert_eq!(rules(src), vec![Rule::ModeMismatch]);
        let src = "f(int a;;) { a = 2; }";
        assert_eq!(rules(src), vec![Rule::ModeMismatch]);
    }

    #[test]
    fn types_are_checked() {
        assert_eq!(rules("f(;;int r) { r = 'a'; }"), vec![Rule::TypeMismatch]);
        assert_eq!(rules("f(;;) { putc(1;;); }"), vec![Rule::TypeMismatch]);
        assert_eq!(rules("f(int a;;) { if (a) putc('a';;); }"), vec![Rule::TypeMismatch]);
        // chars compare with ints
        assert_eq!(rules("f(char s[];;) { if (s[0]!=0) putc(s[0];;); }"), vec![]);
    }

    #[test]
    fn names_must_resolve() {
        assert_eq!(rules("f(;;) { g(;;); }"), vec![Rule::UnknownRoutine]);
        assert_eq!(rules("f(;;int r) { r = q; }"), vec![Rule::UnknownName]);
        assert_eq!(rules("f(;;) { int a; int a; }"), vec![Rule::DuplicateName]);
        assert_eq!(rules("g(int a;;);"), vec![Rule::UnknownRoutine]);
    }

    #[test]
    fn implicit_locals_need_an_extent() {
        let src = "int2chars(int i;;char s[]); puts(char s[];;);
                   puts(char s[];;) { if (s[0]!=0) { putc(s[0];;); puts(s[1];;); } }
                   putint(int i;;) { int2chars(i;;s); puts(s;;); }";
        assert_eq!(rules(src), vec![]);
        let src = "g(;;int y[]) { y[0] = 0; } f(;;) { g(;;y); }";
        assert_eq!(rules(src), vec![Rule::ExtentMismatch]);
    }

    #[test]
    fn branches_merge_delegation() {
        let src = "g(;;int r) { r = 1; }
                   f(boolean p;; int z) { if (p) g(;;z); else z = 2; z = 3; }";
        assert_eq!(rules(src), vec![Rule::ChildOutcome]);
    }
}

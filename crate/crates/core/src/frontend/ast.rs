//! Routine signatures, body syntax trees and the program table.

use indexmap::IndexMap;

use super::lexer::Pos;
use crate::value::{BaseType, Extent};

/// Access mode of a parameter or task item. Position relative to the two
/// semicolons of a signature decides it.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Mode {
    In,
    Inout,
    Out,
}

impl Mode {
    pub const ALL: [Mode; 3] = [Mode::In, Mode::Inout, Mode::Out];

    pub fn writes(self) -> bool {
        !matches!(self, Mode::In)
    }
}

/// Shape of a parameter or local.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Shape {
    Scalar,
    Array(Extent),
    /// `char s[]`: binds to an array of any extent.
    Unsized,
}

impl Shape {
    pub fn is_array(&self) -> bool {
        !matches!(self, Shape::Scalar)
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ParamDecl {
    pub name: String,
    pub mode: Mode,
    pub del: bool,
    pub ty: BaseType,
    pub shape: Shape,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Origin {
    /// Written in the source.
    Declared,
    /// Added by effect propagation.
    Inferred,
    /// Intrinsic to a builtin instruction and not restated in the source.
    Builtin,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct NonlocalDecl {
    pub channel: String,
    pub del: bool,
    pub origin: Origin,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Builtin {
    Plus,
    Add,
    Mult,
    Putc,
    Intprint,
    Int2chars,
    Fill,
}

/// Longest decimal rendering of an `i64` plus its terminator.
pub const INT2CHARS_LEN: usize = 21;

impl Builtin {
    pub const ALL: [Builtin; 7] = [
        Builtin::Plus,
        Builtin::Add,
        Builtin::Mult,
        Builtin::Putc,
        Builtin::Intprint,
        Builtin::Int2chars,
        Builtin::Fill,
    ];

    pub fn name(&self) -> &'static str {
        match self {
            Builtin::Plus => "plus",
            Builtin::Add => "add",
            Builtin::Mult => "mult",
            Builtin::Putc => "putc",
            Builtin::Intprint => "intprint",
            Builtin::Int2chars => "int2chars",
            Builtin::Fill => "fill",
        }
    }

    pub fn lookup(name: &str) -> Option<Builtin> {
        Builtin::ALL.into_iter().find(|b| b.name() == name)
    }

    pub fn params(&self) -> Vec<ParamDecl> {
        let p = |name: &str, mode, ty, shape| ParamDecl { name: name.into(), mode, del: false, ty, shape };
        use BaseType::*;
        match self {
            Builtin::Plus | Builtin::Add | Builtin::Mult => vec![
                p("a", Mode::In, Int, Shape::Scalar),
                p("b", Mode::In, Int, Shape::Scalar),
                p("c", Mode::Out, Int, Shape::Scalar),
            ],
            Builtin::Putc => vec![p("i", Mode::In, Char, Shape::Scalar)],
            Builtin::Intprint => vec![p("i", Mode::In, Int, Shape::Scalar)],
            Builtin::Int2chars => vec![p("i", Mode::In, Int, Shape::Scalar), p("s", Mode::Out, Char, Shape::Unsized)],
            Builtin::Fill => vec![p("v", Mode::In, Int, Shape::Scalar), p("y", Mode::Out, Int, Shape::Unsized)],
        }
    }

    pub fn channels(&self) -> Vec<NonlocalDecl> {
        match self {
            Builtin::Putc | Builtin::Intprint => {
                vec![NonlocalDecl { channel: "stdout".into(), del: false, origin: Origin::Builtin }]
            }
            _ => vec![],
        }
    }

    /// Extent given to an implicit local bound to an unsized out parameter.
    pub fn natural_extent(&self, param: usize) -> Option<Extent> {
        match (self, param) {
            (Builtin::Int2chars, 1) => Some(Extent::of_len(INT2CHARS_LEN)),
            _ => None,
        }
    }

    pub fn definition(&self) -> RoutineDef {
        RoutineDef {
            name: self.name().into(),
            params: self.params(),
            nonlocals: self.channels(),
            body: Body::Builtin(*self),
            in_source: false,
            pos: Pos::default(),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Body {
    Stmts(Vec<Stmt>),
    Builtin(Builtin),
    /// Declared but never defined.
    Prototype,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RoutineDef {
    pub name: String,
    pub params: Vec<ParamDecl>,
    pub nonlocals: Vec<NonlocalDecl>,
    pub body: Body,
    /// Whether the source declared or defined this routine.
    pub in_source: bool,
    pub pos: Pos,
}

impl RoutineDef {
    pub fn params_of(&self, mode: Mode) -> impl Iterator<Item = &ParamDecl> {
        self.params.iter().filter(move |p| p.mode == mode)
    }

    pub fn arity(&self, mode: Mode) -> usize {
        self.params_of(mode).count()
    }

    pub fn channel(&self, name: &str) -> Option<&NonlocalDecl> {
        self.nonlocals.iter().find(|n| n.channel == name)
    }

    /// Extent for an implicit local passed to parameter `index`.
    pub fn implicit_extent(&self, index: usize) -> Option<Shape> {
        match self.params[index].shape {
            Shape::Unsized => match self.body {
                Body::Builtin(b) => b.natural_extent(index).map(Shape::Array),
                _ => None,
            },
            shape => Some(shape),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum BinOp {
    Add,
    Sub,
    Mul,
    Div,
    Ge,
    Ne,
    Eq,
    Gt,
    Lt,
}

impl BinOp {
    pub fn symbol(&self) -> &'static str {
        match self {
            BinOp::Add => "+",
            BinOp::Sub => "-",
            BinOp::Mul => "*",
            BinOp::Div => "/",
            BinOp::Ge => ">=",
            BinOp::Ne => "!=",
            BinOp::Eq => "==",
            BinOp::Gt => ">",
            BinOp::Lt => "<",
        }
    }

    /// Binding strength; larger binds tighter.
    pub fn precedence(&self) -> u8 {
        match self {
            BinOp::Mul | BinOp::Div => 3,
            BinOp::Add | BinOp::Sub => 2,
            _ => 1,
        }
    }

    pub fn is_comparison(&self) -> bool {
        self.precedence() == 1
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Expr {
    Int(i64),
    Bool(bool),
    Char(char),
    /// Characters including the terminating 0.
    Str(Vec<char>),
    Var(String),
    Index(String, Box<Expr>),
    Binary(BinOp, Box<Expr>, Box<Expr>),
}

impl Expr {
    /// Visits every name the expression reads.
    pub fn names(&self, out: &mut Vec<String>) {
        match self {
            Expr::Var(n) => out.push(n.clone()),
            Expr::Index(n, i) => {
                out.push(n.clone());
                i.names(out);
            }
            Expr::Binary(_, l, r) => {
                l.names(out);
                r.names(out);
            }
            _ => {}
        }
    }

    /// Constant value of a literal-only integer expression.
    pub fn const_int(&self) -> Option<i64> {
        match self {
            Expr::Int(v) => Some(*v),
            Expr::Binary(op, l, r) => {
                let (l, r) = (l.const_int()?, r.const_int()?);
                match op {
                    BinOp::Add => l.checked_add(r),
                    BinOp::Sub => l.checked_sub(r),
                    BinOp::Mul => l.checked_mul(r),
                    BinOp::Div if r != 0 => l.checked_div(r),
                    _ => None,
                }
            }
            _ => None,
        }
    }

    /// The root name when the expression names an item or an element of one.
    pub fn item_name(&self) -> Option<&str> {
        match self {
            Expr::Var(n) | Expr::Index(n, _) => Some(n),
            _ => None,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum LValue {
    Var(String),
    Index(String, Expr),
}

impl LValue {
    pub fn name(&self) -> &str {
        match self {
            LValue::Var(n) | LValue::Index(n, _) => n,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Call {
    pub routine: String,
    /// Argument lists for ins, inouts and outs.
    pub args: [Vec<Expr>; 3],
    /// Signature-order indices of arguments written with a `del` marker.
    pub del_marks: Vec<usize>,
}

impl Call {
    pub fn args_of(&self, mode: Mode) -> &[Expr] {
        &self.args[mode as usize]
    }

    /// Arguments paired with their mode, in signature order.
    pub fn all_args(&self) -> impl Iterator<Item = (Mode, &Expr)> {
        Mode::ALL.into_iter().flat_map(move |m| self.args[m as usize].iter().map(move |e| (m, e)))
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum StmtKind {
    VarDecl { name: String, ty: BaseType, shape: Shape, init: Option<Expr> },
    Assign(LValue, Expr),
    If(Expr, Vec<Stmt>, Vec<Stmt>),
    Call(Call),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Stmt {
    pub kind: StmtKind,
    pub pos: Pos,
}

impl Stmt {
    /// Visits every call in the statement, both branches included.
    pub fn calls<'a>(&'a self, out: &mut Vec<&'a Call>) {
        match &self.kind {
            StmtKind::Call(c) => out.push(c),
            StmtKind::If(_, t, e) => {
                for s in t.iter().chain(e) {
                    s.calls(out);
                }
            }
            _ => {}
        }
    }
}

pub const MAIN: &str = "main";

/// Routine table plus entry point. Builtins are pre-registered.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Program {
    pub routines: IndexMap<String, RoutineDef>,
    /// `main` was synthesized from top-level calls.
    pub implicit_main: bool,
}

impl Default for Program {
    fn default() -> Self {
        Program::builtins()
    }
}

impl Program {
    /// A program holding only the builtin instructions.
    pub fn builtins() -> Self {
        let routines = Builtin::ALL.iter().map(|b| (b.name().to_string(), b.definition())).collect();
        Program { routines, implicit_main: false }
    }

    pub fn routine(&self, name: &str) -> Option<&RoutineDef> {
        self.routines.get(name)
    }

    pub fn main(&self) -> Option<&RoutineDef> {
        self.routines.get(MAIN)
    }

    /// Clears source positions so programs compare structurally.
    pub fn strip_positions(&mut self) {
        fn strip(stmts: &mut [Stmt]) {
            for s in stmts {
                s.pos = Pos::default();
                if let StmtKind::If(_, t, e) = &mut s.kind {
                    strip(t);
                    strip(e);
                }
            }
        }
        for r in self.routines.values_mut() {
            r.pos = Pos::default();
            if let Body::Stmts(stmts) = &mut r.body {
                strip(stmts);
            }
        }
    }
}

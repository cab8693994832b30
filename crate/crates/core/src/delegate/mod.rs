//! Executing one ready task: interpret the routine body against its strict
//! values and produce the [`Outcome`] that replaces the task.

mod builtins;

use std::collections::{BTreeMap, HashMap};

use thiserror::Error;

use crate::frontend::{BinOp, Body, Call, Expr, LValue, Mode, ParamDecl, Program, RoutineDef, Shape, Stmt, StmtKind};
pub use crate::graph::Outcome;
use crate::graph::{
    Alloc, Binding, ChannelBinding, Graph, ItemId, ItemRef, RegionRef, Target, Task, TaskTemplate, Write,
};
use crate::value::{BaseType, Extent, Scalar, Value};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ExecError {
    #[error("no routine named `{0}`")]
    UnknownRoutine(String),
    #[error("`{routine}`: arguments do not match the signature")]
    ModeMismatch { routine: String },
    #[error("`{routine}`: argument `{name}` exceeds the extent it is taken from")]
    ExtentOverflow { routine: String, name: String },
    #[error("`{routine}`: index {index} is outside the extent of `{name}`")]
    IndexOutOfExtent { routine: String, name: String, index: i64 },
    #[error("`{routine}`: `{name}` is read before it is defined")]
    ReadOfUnsetSlot { routine: String, name: String },
    #[error("`{routine}`: `{name}` is used after being handed to a child task")]
    ChildOutcome { routine: String, name: String },
    #[error("`{routine}`: del item `{name}` is read or assigned")]
    DelAccess { routine: String, name: String },
    #[error("`{routine}`: `{name}` is not bound")]
    UnknownName { routine: String, name: String },
    #[error("`{routine}`: {message}")]
    TypeMismatch { routine: String, message: String },
    #[error("`{routine}`: integer overflow")]
    ArithmeticOverflow { routine: String },
    #[error("`{routine}`: division by zero")]
    DivisionByZero { routine: String },
}

/// What a name stands for while a body runs.
#[derive(Clone, Debug, PartialEq)]
enum Entry {
    /// A strict in, or a local not yet handed to a child.
    Value { ty: BaseType, extent: Extent, is_array: bool, slots: Vec<Option<Scalar>> },
    /// A reference into the store.
    Ref { region: RegionRef, ty: BaseType, extent: Extent, is_array: bool, mode: Mode, del: bool, delegated: bool },
}

impl Entry {
    fn value(v: &Value, extent: Option<Extent>) -> Entry {
        let elems = v.elements();
        let is_array = matches!(v, Value::Array(_));
        let extent = extent.unwrap_or(if is_array { Extent::of_len(elems.len()) } else { Extent::SCALAR });
        Entry::Value { ty: elems[0].ty(), extent, is_array, slots: elems.iter().copied().map(Some).collect() }
    }

    fn extent(&self) -> Extent {
        match self {
            Entry::Value { extent, .. } | Entry::Ref { extent, .. } => *extent,
        }
    }

    fn is_array(&self) -> bool {
        match self {
            Entry::Value { is_array, .. } | Entry::Ref { is_array, .. } => *is_array,
        }
    }
}

/// Bindings of names to values and store references, plus the writes the
/// body has made so far.
pub struct Env<'g> {
    graph: &'g Graph,
    routine: String,
    names: HashMap<String, Entry>,
    writes: BTreeMap<(ItemId, usize), Scalar>,
}

impl<'g> Env<'g> {
    pub fn new(graph: &'g Graph, routine: &str) -> Env<'g> {
        Env { graph, routine: routine.to_string(), names: HashMap::new(), writes: BTreeMap::new() }
    }

    pub fn bind_value(&mut self, name: &str, value: Value) {
        self.names.insert(name.to_string(), Entry::value(&value, None));
    }

    fn unbound(&self, name: &str) -> ExecError {
        ExecError::UnknownName { routine: self.routine.clone(), name: name.to_string() }
    }

    fn entry(&self, name: &str) -> Result<&Entry, ExecError> {
        self.names.get(name).ok_or_else(|| self.unbound(name))
    }

    fn type_error(&self, message: impl Into<String>) -> ExecError {
        ExecError::TypeMismatch { routine: self.routine.clone(), message: message.into() }
    }

    fn offset(&self, name: &str, extent: Extent, index: i64) -> Result<usize, ExecError> {
        extent.offset(index).ok_or_else(|| ExecError::IndexOutOfExtent {
            routine: self.routine.clone(),
            name: name.to_string(),
            index,
        })
    }

    /// Element `offset` of `name`, as seen by this body.
    fn element(&self, name: &str, offset: usize) -> Result<Scalar, ExecError> {
        let unset = || ExecError::ReadOfUnsetSlot { routine: self.routine.clone(), name: name.to_string() };
        match self.entry(name)? {
            Entry::Value { slots, .. } => slots[offset].ok_or_else(unset),
            Entry::Ref { region, del, delegated, .. } => {
                if *del {
                    return Err(ExecError::DelAccess { routine: self.routine.clone(), name: name.to_string() });
                }
                let ItemRef::Root(id) = region.item else {
                    return Err(ExecError::ChildOutcome { routine: self.routine.clone(), name: name.to_string() });
                };
                if *delegated {
                    return Err(ExecError::ChildOutcome { routine: self.routine.clone(), name: name.to_string() });
                }
                let at = region.lo + offset;
                if let Some(v) = self.writes.get(&(id, at)) {
                    return Ok(*v);
                }
                self.graph.item(id).and_then(|i| i.slots()[at]).ok_or_else(unset)
            }
        }
    }

    fn whole(&self, name: &str) -> Result<Value, ExecError> {
        let entry = self.entry(name)?;
        let len = entry.extent().len();
        let elems = (0..len).map(|k| self.element(name, k)).collect::<Result<Vec<_>, _>>()?;
        Ok(if entry.is_array() { Value::Array(elems) } else { Value::Scalar(elems[0]) })
    }
}

fn int(v: Value, env: &Env) -> Result<i64, ExecError> {
    match v {
        Value::Scalar(Scalar::Int(i)) => Ok(i),
        other => Err(env.type_error(format!("expected an int, found {other}"))),
    }
}

fn scalar(v: Value, env: &Env) -> Result<Scalar, ExecError> {
    match v {
        Value::Scalar(s) => Ok(s),
        other => Err(env.type_error(format!("expected a scalar, found {other}"))),
    }
}

/// Evaluates `e` strictly. Division truncates toward zero; overflow is an
/// error.
pub fn eval_expr(env: &Env, e: &Expr) -> Result<Value, ExecError> {
    let overflow = || ExecError::ArithmeticOverflow { routine: env.routine.clone() };
    Ok(match e {
        Expr::Int(v) => Value::Scalar(Scalar::Int(*v)),
        Expr::Bool(b) => Value::Scalar(Scalar::Bool(*b)),
        Expr::Char(c) => Value::Scalar(Scalar::Char(*c)),
        Expr::Str(chars) => Value::Array(chars.iter().map(|&c| Scalar::Char(c)).collect()),
        Expr::Var(name) => env.whole(name)?,
        Expr::Index(name, index) => {
            let k = int(eval_expr(env, index)?, env)?;
            let entry = env.entry(name)?;
            if !entry.is_array() {
                return Err(env.type_error(format!("`{name}` is not an array")));
            }
            let offset = env.offset(name, entry.extent(), k)?;
            Value::Scalar(env.element(name, offset)?)
        }
        Expr::Binary(op, l, r) => {
            let l = scalar(eval_expr(env, l)?, env)?;
            let r = scalar(eval_expr(env, r)?, env)?;
            let result = match op {
                BinOp::Add | BinOp::Sub | BinOp::Mul | BinOp::Div => {
                    let (Scalar::Int(a), Scalar::Int(b)) = (l, r) else {
                        return Err(env.type_error(format!("`{}` needs int operands", op.symbol())));
                    };
                    let v = match op {
                        BinOp::Add => a.checked_add(b),
                        BinOp::Sub => a.checked_sub(b),
                        BinOp::Mul => a.checked_mul(b),
                        _ if b == 0 => return Err(ExecError::DivisionByZero { routine: env.routine.clone() }),
                        _ => a.checked_div(b),
                    };
                    Scalar::Int(v.ok_or_else(overflow)?)
                }
                BinOp::Eq | BinOp::Ne => {
                    let same = match (l.ordinal(), r.ordinal()) {
                        (Some(a), Some(b)) => a == b,
                        _ if l.ty() == r.ty() => l == r,
                        _ => return Err(env.type_error("cannot compare a boolean with a number")),
                    };
                    Scalar::Bool(same == (*op == BinOp::Eq))
                }
                BinOp::Ge | BinOp::Gt | BinOp::Lt => {
                    let (Some(a), Some(b)) = (l.ordinal(), r.ordinal()) else {
                        return Err(env.type_error("booleans are not ordered"));
                    };
                    Scalar::Bool(match op {
                        BinOp::Ge => a >= b,
                        BinOp::Gt => a > b,
                        _ => a < b,
                    })
                }
            };
            Value::Scalar(result)
        }
    })
}

/// Runs the task's instruction and returns its outcome. Reads only the
/// task's bindings and the store; the graph is not modified.
pub fn execute_task(task: &Task, program: &Program, graph: &Graph) -> Result<Outcome, ExecError> {
    let routine =
        program.routine(&task.instruction).ok_or_else(|| ExecError::UnknownRoutine(task.instruction.clone()))?;
    let mismatch = || ExecError::ModeMismatch { routine: routine.name.clone() };
    if routine.params.len() != task.bindings.len()
        || routine.params.iter().zip(&task.bindings).any(|(p, b)| p.mode != b.mode)
    {
        return Err(mismatch());
    }

    let mut env = Env::new(graph, &routine.name);
    for (p, b) in routine.params.iter().zip(&task.bindings) {
        let entry = match &b.target {
            Target::Literal(v) if p.mode == Mode::In => Entry::value(v, declared_extent(p, v.elements().len())),
            Target::Literal(_) => return Err(mismatch()),
            Target::Region(r) => {
                let extent = declared_extent(p, r.len())
                    .ok_or_else(|| ExecError::ExtentOverflow { routine: routine.name.clone(), name: p.name.clone() })?;
                if p.mode == Mode::In && !b.del {
                    let item = graph.item(r.item).ok_or_else(|| env.unbound(&p.name))?;
                    let slots = item.slots()[r.lo..=r.hi].to_vec();
                    if slots.iter().any(Option::is_none) {
                        return Err(ExecError::ReadOfUnsetSlot { routine: routine.name.clone(), name: p.name.clone() });
                    }
                    Entry::Value { ty: p.ty, extent, is_array: p.shape.is_array(), slots }
                } else {
                    Entry::Ref {
                        region: (*r).into(),
                        ty: p.ty,
                        extent,
                        is_array: p.shape.is_array(),
                        mode: p.mode,
                        del: b.del,
                        delegated: false,
                    }
                }
            }
        };
        env.names.insert(p.name.clone(), entry);
    }

    let mut out = Outcome::default();
    match &routine.body {
        Body::Builtin(b) => builtins::run(*b, routine, task, &env, &mut out)?,
        Body::Stmts(stmts) => {
            let mut exec = Exec { program, env, out };
            exec.stmts(stmts)?;
            let Exec { env, out: mut o, .. } = exec;
            o.writes = env
                .writes
                .into_iter()
                .map(|((item, at), v)| Write { region: crate::graph::Region { item, lo: at, hi: at }, values: vec![v] })
                .collect();
            out = o;
        }
        Body::Prototype => return Err(ExecError::UnknownRoutine(routine.name.clone())),
    }
    Ok(out)
}

/// Extent a parameter sees when bound to `len` elements.
fn declared_extent(p: &ParamDecl, len: usize) -> Option<Extent> {
    match p.shape {
        Shape::Scalar => (len == 1).then_some(Extent::SCALAR),
        Shape::Array(e) => (e.len() == len).then_some(e),
        Shape::Unsized => Some(Extent::of_len(len)),
    }
}

struct Exec<'a, 'g> {
    program: &'a Program,
    env: Env<'g>,
    out: Outcome,
}

impl Exec<'_, '_> {
    fn stmts(&mut self, stmts: &[Stmt]) -> Result<(), ExecError> {
        stmts.iter().try_for_each(|s| self.stmt(s))
    }

    fn stmt(&mut self, stmt: &Stmt) -> Result<(), ExecError> {
        match &stmt.kind {
            StmtKind::VarDecl { name, ty, shape, init } => {
                let (extent, is_array) = match shape {
                    Shape::Array(e) => (*e, true),
                    _ => (Extent::SCALAR, false),
                };
                let mut slots = vec![None; extent.len()];
                if let Some(init) = init {
                    let v = eval_expr(&self.env, init)?;
                    let elems = v.elements();
                    if elems.len() > slots.len() {
                        return Err(ExecError::ExtentOverflow {
                            routine: self.env.routine.clone(),
                            name: name.clone(),
                        });
                    }
                    for (slot, e) in slots.iter_mut().zip(elems) {
                        *slot = Some(*e);
                    }
                }
                self.env.names.insert(name.clone(), Entry::Value { ty: *ty, extent, is_array, slots });
            }
            StmtKind::Assign(target, value) => {
                let v = scalar(eval_expr(&self.env, value)?, &self.env)?;
                let (name, index) = match target {
                    LValue::Var(n) => (n, None),
                    LValue::Index(n, i) => (n, Some(int(eval_expr(&self.env, i)?, &self.env)?)),
                };
                let entry = self.env.entry(name)?;
                let offset = match index {
                    Some(k) => self.env.offset(name, entry.extent(), k)?,
                    None => 0,
                };
                let routine = self.env.routine.clone();
                match self.env.names.get_mut(name).expect("looked up above") {
                    Entry::Value { slots, .. } => slots[offset] = Some(v),
                    Entry::Ref { del: true, .. } => return Err(ExecError::DelAccess { routine, name: name.clone() }),
                    Entry::Ref { mode: Mode::In, .. } => {
                        return Err(ExecError::TypeMismatch {
                            routine,
                            message: format!("in item `{name}` is assigned"),
                        })
                    }
                    Entry::Ref { delegated: true, .. }
                    | Entry::Ref { region: RegionRef { item: ItemRef::Local(_), .. }, .. } => {
                        return Err(ExecError::ChildOutcome { routine, name: name.clone() })
                    }
                    Entry::Ref { region: RegionRef { item: ItemRef::Root(id), lo, .. }, .. } => {
                        let key = (*id, *lo + offset);
                        self.env.writes.insert(key, v);
                    }
                }
            }
            StmtKind::If(cond, then_branch, else_branch) => match scalar(eval_expr(&self.env, cond)?, &self.env)? {
                Scalar::Bool(true) => self.stmts(then_branch)?,
                Scalar::Bool(false) => self.stmts(else_branch)?,
                _ => return Err(self.env.type_error("condition is not a boolean")),
            },
            StmtKind::Call(call) => {
                let child = self.call(call)?;
                self.out.children.push(child);
            }
        }
        Ok(())
    }

    /// Moves a body-local value into the store so children can share it.
    fn allocate(&mut self, name: &str) -> Result<(), ExecError> {
        if let Some(Entry::Value { ty, extent, is_array, slots }) = self.env.names.get(name) {
            let k = self.out.allocs.len();
            self.out.allocs.push(Alloc {
                name: name.to_string(),
                ty: *ty,
                extent: *extent,
                is_array: *is_array,
                init: slots.clone(),
            });
            let entry = Entry::Ref {
                region: RegionRef { item: ItemRef::Local(k), lo: 0, hi: extent.len() - 1 },
                ty: *ty,
                extent: *extent,
                is_array: *is_array,
                mode: Mode::Inout,
                del: false,
                delegated: false,
            };
            self.env.names.insert(name.to_string(), entry);
        }
        Ok(())
    }

    /// Start offset and length of an item argument for `param`.
    fn span(&self, arg: &Expr, name: &str, param: &ParamDecl) -> Result<(usize, usize), ExecError> {
        let entry = self.env.entry(name)?;
        let len = entry.extent().len();
        let start = match arg {
            Expr::Index(_, index) => {
                let k = int(eval_expr(&self.env, index)?, &self.env)?;
                self.env.offset(name, entry.extent(), k)?
            }
            _ => 0,
        };
        let width = match param.shape {
            Shape::Scalar if matches!(arg, Expr::Var(_)) && entry.is_array() => {
                return Err(self.env.type_error(format!("array `{name}` passed to scalar `{}`", param.name)))
            }
            Shape::Scalar => 1,
            Shape::Array(e) => e.len(),
            Shape::Unsized => len - start,
        };
        if start + width > len {
            return Err(ExecError::ExtentOverflow { routine: self.env.routine.clone(), name: name.to_string() });
        }
        Ok((start, width))
    }

    fn reference(&mut self, arg: &Expr, name: &str, param: &ParamDecl) -> Result<Target<RegionRef>, ExecError> {
        self.allocate(name)?;
        let (start, width) = self.span(arg, name, param)?;
        let Entry::Ref { region, .. } = self.env.entry(name)? else { unreachable!("allocated above") };
        Ok(Target::Region(RegionRef { item: region.item, lo: region.lo + start, hi: region.lo + start + width - 1 }))
    }

    fn call(&mut self, call: &Call) -> Result<TaskTemplate, ExecError> {
        let callee: &RoutineDef =
            self.program.routine(&call.routine).ok_or_else(|| ExecError::UnknownRoutine(call.routine.clone()))?;
        let args: Vec<(Mode, &Expr)> = call.all_args().collect();
        if args.len() != callee.params.len() || args.iter().zip(&callee.params).any(|((m, _), p)| *m != p.mode) {
            return Err(ExecError::ModeMismatch { routine: callee.name.clone() });
        }

        let mut bindings = Vec::with_capacity(args.len());
        let mut delegated = Vec::new();
        for (index, ((mode, arg), param)) in args.into_iter().zip(&callee.params).enumerate() {
            let name = arg.item_name();
            let target = match name {
                Some(name) if mode.writes() => {
                    if !self.env.names.contains_key(name) {
                        let shape = callee.implicit_extent(index).ok_or_else(|| ExecError::ExtentOverflow {
                            routine: self.env.routine.clone(),
                            name: name.to_string(),
                        })?;
                        let (extent, is_array) = match shape {
                            Shape::Array(e) => (e, true),
                            _ => (Extent::SCALAR, false),
                        };
                        let local = Entry::Value { ty: param.ty, extent, is_array, slots: vec![None; extent.len()] };
                        self.env.names.insert(name.to_string(), local);
                    }
                    delegated.push(name);
                    self.reference(arg, name, param)?
                }
                None if mode.writes() => return Err(ExecError::ModeMismatch { routine: callee.name.clone() }),
                Some(name) if param.del => self.reference(arg, name, param)?,
                Some(name) if matches!(self.env.entry(name)?, Entry::Ref { .. }) => {
                    if !param.shape.is_array() && matches!(arg, Expr::Var(_)) && self.env.entry(name)?.is_array() {
                        return Err(self.env.type_error(format!("array `{name}` passed to scalar `{}`", param.name)));
                    }
                    self.reference(arg, name, param)?
                }
                Some(name) if param.shape.is_array() => {
                    let (start, width) = self.span(arg, name, param)?;
                    let elems =
                        (start..start + width).map(|k| self.env.element(name, k)).collect::<Result<Vec<_>, _>>()?;
                    Target::Literal(Value::Array(elems))
                }
                _ => {
                    let v = eval_expr(&self.env, arg)?;
                    if param.shape.is_array() != matches!(v, Value::Array(_)) {
                        return Err(self.env.type_error(format!("`{arg}` does not fit `{}`", param.name)));
                    }
                    Target::Literal(v)
                }
            };
            bindings.push(Binding { mode, del: param.del, target, is_array: param.shape.is_array() });
        }
        for name in delegated {
            if let Some(Entry::Ref { delegated, .. }) = self.env.names.get_mut(name) {
                *delegated = true;
            }
        }
        let channels = callee
            .nonlocals
            .iter()
            .map(|n| ChannelBinding { channel: n.channel.clone(), del: n.del, origin: n.origin })
            .collect();
        Ok(TaskTemplate { instruction: callee.name.clone(), bindings, channels })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::frontend::{compile, EffectMode};
    use crate::graph::Seq;

    fn env_with<'g>(graph: &'g Graph, vars: &[(&str, i64)]) -> Env<'g> {
        let mut env = Env::new(graph, "test");
        for (n, v) in vars {
            env.bind_value(n, Value::Scalar(Scalar::Int(*v)));
        }
        env
    }

    fn expr(src: &str) -> Expr {
        use crate::frontend::{parse_program, tokenize};
        let program = parse_program(&tokenize(&format!("f(;;int r) {{ r = {src}; }}")).unwrap()).unwrap();
        let Body::Stmts(stmts) = &program.routine("f").unwrap().body else { unreachable!() };
        let StmtKind::Assign(_, e) = &stmts[0].kind else { unreachable!() };
        e.clone()
    }

    #[test]
    fn expressions() {
        let g = Graph::new();
        let env = env_with(&g, &[("b", 1), ("e", 3)]);
        assert_eq!(eval_expr(&env, &expr("(b+e)/2")).unwrap(), Value::Scalar(Scalar::Int(2)));
        let env = env_with(&g, &[("b", 3), ("e", 3)]);
        assert_eq!(eval_expr(&env, &expr("b>=e")).unwrap(), Value::Scalar(Scalar::Bool(true)));
        assert_eq!(eval_expr(&env, &expr("0!=0")).unwrap(), Value::Scalar(Scalar::Bool(false)));
        assert_eq!(eval_expr(&env, &expr("(0-7)/2")).unwrap(), Value::Scalar(Scalar::Int(-3)));
        assert!(matches!(eval_expr(&env, &expr("b/(e-3)")), Err(ExecError::DivisionByZero { .. })));
    }

    #[test]
    fn overflow_is_an_error() {
        let g = Graph::new();
        let env = env_with(&g, &[("b", i64::MAX), ("e", 1)]);
        assert!(matches!(eval_expr(&env, &expr("b+e")), Err(ExecError::ArithmeticOverflow { .. })));
    }

    fn run_first(program: &str, graph: &str) -> (Graph, Outcome) {
        let program = compile(program, EffectMode::Infer).unwrap();
        let g = Graph::parse(graph).unwrap();
        let task = g.task(&Seq::root(1)).unwrap();
        let out = execute_task(task, &program, &g).unwrap();
        (g, out)
    }

    const FACT: &str = "fact(int b, int e;; int f)
        { if (b>=e) f=b; else { int m=(b+e)/2; fact(b,m;;x); fact(m+1,e;;y); mult(x,y;;f); } }";

    #[test]
    fn fact_delegates_to_three_children() {
        let (mut g, out) = run_first(FACT, "fact(1,3;;k)");
        assert!(out.writes.is_empty());
        assert_eq!(out.allocs.iter().map(|a| a.name.as_str()).collect::<Vec<_>>(), ["x", "y"]);
        g.complete_task(&Seq::root(1), out).unwrap();
        assert_eq!(g.render(), "fact(1,2;;x)\nfact(3,3;;y)\nmult(x,y;;k)\n");
    }

    #[test]
    fn base_case_writes() {
        let (g, out) = run_first(FACT, "fact(3,3;;y)");
        let y = g.item_named("y").unwrap().whole();
        assert_eq!(out.writes, vec![Write { region: y, values: vec![Scalar::Int(3)] }]);
        assert!(out.children.is_empty());
    }

    #[test]
    fn execution_is_repeatable() {
        let (g, out) = run_first(FACT, "fact(1,3;;k)");
        let program = compile(FACT, EffectMode::Infer).unwrap();
        let again = execute_task(g.task(&Seq::root(1)).unwrap(), &program, &g).unwrap();
        assert_eq!(out, again);
    }

    #[test]
    fn add3_macroexpands() {
        let (mut g, out) =
            run_first("add3(int a, int b, int c;; int d) { add(a,b;;r); add(r,c;;d); }", "add3(6,9,17;;p)");
        g.complete_task(&Seq::root(1), out).unwrap();
        assert_eq!(g.render(), "add(6,9;;r)\nadd(r,17;;p)\n");
    }

    #[test]
    fn puts_unfolds_one_character() {
        let src = "putc(char i;;)(;stdout;);
                   puts(char s[];;) { if (s[0]!=0) { putc(s[0];;); puts(s[1];;); } }";
        let program = compile(src, EffectMode::Infer).unwrap();
        let mut g = Graph::parse("puts(\"CD\";;)(;del stdout;)").unwrap();
        let out = execute_task(g.task(&Seq::root(1)).unwrap(), &program, &g).unwrap();
        g.complete_task(&Seq::root(1), out).unwrap();
        assert_eq!(g.render(), "putc('C';;)(;stdout;)\nputs(\"D\";;)\n");
    }

    #[test]
    fn sub_regions_map_onto_root_coordinates() {
        let src = "d(; int y[0:4999];) { y[0] = 1; }
                   e(; del int y[0:9999];) { d(;y;); d(;y[5000];); }";
        let (mut g, out) = run_first(src, "e(;del h[0:9999];)");
        g.complete_task(&Seq::root(1), out).unwrap();
        assert_eq!(g.render(), "d(;h[0:4999];)\nd(;h[5000:9999];)\n");
    }

    #[test]
    fn builtins() {
        let (_, out) = run_first("", "plus(6,9;;r)");
        assert_eq!(out.writes[0].values, vec![Scalar::Int(15)]);
        let (_, out) = run_first("", "mult(1,2;;x)");
        assert_eq!(out.writes[0].values, vec![Scalar::Int(2)]);
        let (_, out) = run_first("", "putc('A';;)(;stdout;)");
        assert_eq!(out.channel_writes, vec![("stdout".to_string(), Scalar::Char('A'))]);
        let (_, out) = run_first("", "intprint(-42;;)(;stdout;)");
        let text: String = out.channel_writes.iter().map(|(_, c)| c.to_output()).collect();
        assert_eq!(text, "-42");
        let (_, out) = run_first("", "int2chars(407;;s[0:5])");
        assert_eq!(Value::Array(out.writes[0].values.clone()).to_string(), "\"407\\0\\0\"");
        let program = Program::builtins();
        let g = Graph::parse("int2chars(12345;;s[0:2])").unwrap();
        assert!(matches!(
            execute_task(g.task(&Seq::root(1)).unwrap(), &program, &g),
            Err(ExecError::ExtentOverflow { .. })
        ));
        let g = Graph::parse("mult(9223372036854775807,2;;x)").unwrap();
        assert!(matches!(
            execute_task(g.task(&Seq::root(1)).unwrap(), &program, &g),
            Err(ExecError::ArithmeticOverflow { .. })
        ));
    }
}

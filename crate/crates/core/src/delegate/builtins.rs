use super::{eval_expr, int, scalar, Env, ExecError};
use crate::frontend::{Builtin, Expr, RoutineDef};
use crate::graph::{Outcome, Target, Task, Write};
use crate::value::Scalar;

fn arg(env: &Env, routine: &RoutineDef, k: usize) -> Result<Scalar, ExecError> {
    scalar(eval_expr(env, &Expr::Var(routine.params[k].name.clone()))?, env)
}

fn out_region(task: &Task, k: usize) -> crate::graph::Region {
    match &task.bindings[k].target {
        Target::Region(r) => *r,
        Target::Literal(_) => unreachable!("out bindings are regions"),
    }
}

pub(super) fn run(
    b: Builtin,
    routine: &RoutineDef,
    task: &Task,
    env: &Env,
    out: &mut Outcome,
) -> Result<(), ExecError> {
    let overflow = || ExecError::ArithmeticOverflow { routine: routine.name.clone() };
    match b {
        Builtin::Plus | Builtin::Add | Builtin::Mult => {
            let x = int(arg(env, routine, 0)?.into(), env)?;
            let y = int(arg(env, routine, 1)?.into(), env)?;
            let v = if b == Builtin::Mult { x.checked_mul(y) } else { x.checked_add(y) };
            out.writes.push(Write { region: out_region(task, 2), values: vec![Scalar::Int(v.ok_or_else(overflow)?)] });
        }
        Builtin::Putc => {
            let c = arg(env, routine, 0)?;
            out.channel_writes.push(("stdout".into(), c));
        }
        Builtin::Intprint => {
            let v = int(arg(env, routine, 0)?.into(), env)?;
            for c in v.to_string().chars() {
                out.channel_writes.push(("stdout".into(), Scalar::Char(c)));
            }
        }
        Builtin::Int2chars => {
            let v = int(arg(env, routine, 0)?.into(), env)?;
            let region = out_region(task, 1);
            let mut chars: Vec<Scalar> = v.to_string().chars().map(Scalar::Char).collect();
            if chars.len() + 1 > region.len() {
                return Err(ExecError::ExtentOverflow {
                    routine: routine.name.clone(),
                    name: routine.params[1].name.clone(),
                });
            }
            chars.resize(region.len(), Scalar::Char('\0'));
            out.writes.push(Write { region, values: chars });
        }
        Builtin::Fill => {
            let v = arg(env, routine, 0)?;
            let region = out_region(task, 1);
            out.writes.push(Write { region, values: vec![v; region.len()] });
        }
    }
    Ok(())
}

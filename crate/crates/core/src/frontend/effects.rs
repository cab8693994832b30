//! Nonlocal effect propagation over the call graph.

use super::ast::*;
use super::check::{Diagnostic, Rule};

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash)]
pub enum EffectMode {
    /// Add missing channel declarations as inferred `del` entries.
    #[default]
    Infer,
    /// Report missing declarations instead of adding them.
    Check,
    /// Leave declarations as written; the runtime orders every channel task
    /// after all prior tasks.
    Conservative,
}

/// Makes channel declarations transitive: a routine calling anything that
/// touches channel X declares X itself, as `del` unless it already does.
///
/// `main` is always inferred, even in check mode.
pub fn propagate_effects(mut program: Program, mode: EffectMode) -> Result<Program, Vec<Diagnostic>> {
    if mode == EffectMode::Conservative {
        return Ok(program);
    }
    let rounds = infer(&mut program);
    debug_assert!(rounds <= program.routines.len() + 1);

    if mode == EffectMode::Check {
        let diags: Vec<Diagnostic> = program
            .routines
            .values()
            .filter(|r| r.name != MAIN)
            .flat_map(|r| {
                r.nonlocals.iter().filter(|n| n.origin == Origin::Inferred).map(|n| Diagnostic {
                    rule: Rule::UndeclaredEffect,
                    routine: r.name.clone(),
                    message: format!("calls a routine touching `{}` without declaring it", n.channel),
                    pos: r.pos,
                })
            })
            .collect();
        if !diags.is_empty() {
            return Err(diags);
        }
    }
    Ok(program)
}

/// Runs the fixed point and returns the number of rounds taken.
fn infer(program: &mut Program) -> usize {
    let mut rounds = 0;
    loop {
        rounds += 1;
        let mut added = Vec::new();
        for (index, r) in program.routines.values().enumerate() {
            let Body::Stmts(stmts) = &r.body else { continue };
            let mut calls = Vec::new();
            for s in stmts {
                s.calls(&mut calls);
            }
            for call in calls {
                let Some(callee) = program.routine(&call.routine) else { continue };
                for n in &callee.nonlocals {
                    let known =
                        r.channel(&n.channel).is_some() || added.iter().any(|(i, c)| *i == index && c == &n.channel);
                    if !known {
                        added.push((index, n.channel.clone()));
                    }
                }
            }
        }
        if added.is_empty() {
            return rounds;
        }
        for (index, channel) in added {
            program.routines[index].nonlocals.push(NonlocalDecl { channel, del: true, origin: Origin::Inferred });
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::frontend::{lexer::tokenize, parser::parse_program};

    const PUTS: &str = "putc(char i;;)(;stdout;);
        puts(char s[];;) { if (s[0]!=0) { putc(s[0];;); puts(s[1];;); } }
        putint(int i;;) { int2chars(i;;s); puts(s;;); }
        puts(\"AB\";;); putc('C';;);";

    fn parse(src: &str) -> Program {
        parse_program(&tokenize(src).unwrap()).unwrap()
    }

    fn decl(p: &Program, routine: &str, channel: &str) -> Option<NonlocalDecl> {
        p.routine(routine)?.channel(channel).cloned()
    }

    #[test]
    fn puts_gains_del_stdout() {
        let p = propagate_effects(parse(PUTS), EffectMode::Infer).unwrap();
        let inferred = NonlocalDecl { channel: "stdout".into(), del: true, origin: Origin::Inferred };
        assert_eq!(decl(&p, "puts", "stdout"), Some(inferred.clone()));
        assert_eq!(decl(&p, "putint", "stdout"), Some(inferred.clone()));
        assert_eq!(decl(&p, MAIN, "stdout"), Some(inferred));
        assert!(!decl(&p, "putc", "stdout").unwrap().del);
    }

    #[test]
    fn check_mode_reports_missing_declarations() {
        let err = propagate_effects(parse(PUTS), EffectMode::Check).unwrap_err();
        let mut names: Vec<_> = err.iter().map(|d| (d.rule, d.routine.as_str())).collect();
        names.sort();
        assert_eq!(names, vec![(Rule::UndeclaredEffect, "putint"), (Rule::UndeclaredEffect, "puts")]);

        let declared = PUTS
            .replace("puts(char s[];;) {", "puts(char s[];;)(;del stdout;) {")
            .replace("putint(int i;;) {", "putint(int i;;)(;del stdout;) {");
        assert!(propagate_effects(parse(&declared), EffectMode::Check).is_ok());
    }

    #[test]
    fn pure_programs_are_unchanged() {
        let p = parse("add3(int a, int b, int c;; int d) { add(a,b;;r); add(r,c;;d); } add3(1,2,3;;p);");
        assert_eq!(propagate_effects(p.clone(), EffectMode::Infer).unwrap(), p);
    }

    #[test]
    fn idempotent() {
        let once = propagate_effects(parse(PUTS), EffectMode::Infer).unwrap();
        let twice = propagate_effects(once.clone(), EffectMode::Infer).unwrap();
        assert_eq!(once, twice);
    }

    #[test]
    fn rounds_are_bounded_by_call_depth() {
        let mut p = parse("f1(;;) { putc('a';;); } f2(;;) { f1(;;); } f3(;;) { f2(;;); } f4(;;) { f3(;;); }");
        let rounds = infer(&mut p);
        assert!(rounds <= p.routines.len());
        assert!(decl(&p, "f4", "stdout").is_some_and(|n| n.del));
    }

    #[test]
    fn conservative_mode_leaves_program_alone() {
        let p = parse(PUTS);
        assert_eq!(propagate_effects(p.clone(), EffectMode::Conservative).unwrap(), p);
    }
}

//! Source rendering of programs. Reparsing the output yields the same
//! program, positions aside.

use std::fmt::{self, Write};

use super::ast::*;
use crate::value::{escape_char, Scalar};

impl fmt::Display for Expr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Expr::Int(v) => write!(f, "{v}"),
            Expr::Bool(b) => write!(f, "{b}"),
            Expr::Char(c) => write!(f, "{}", Scalar::Char(*c)),
            Expr::Str(chars) => {
                let text: String =
                    chars[..chars.len().saturating_sub(1)].iter().map(|&c| escape_char(c, '"')).collect();
                write!(f, "\"{text}\"")
            }
            Expr::Var(n) => f.write_str(n),
            Expr::Index(n, i) => write!(f, "{n}[{i}]"),
            Expr::Binary(op, l, r) => {
                let prec = op.precedence();
                let wrap = |e: &Expr, strict: bool| match e {
                    Expr::Binary(inner, ..) if inner.precedence() < prec || (strict && inner.precedence() == prec) => {
                        format!("({e})")
                    }
                    // Negative literals read as subtraction on the right.
                    Expr::Int(v) if *v < 0 && strict => format!("({e})"),
                    _ => e.to_string(),
                };
                write!(f, "{}{}{}", wrap(l, false), op.symbol(), wrap(r, true))
            }
        }
    }
}

impl fmt::Display for Call {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}(", self.routine)?;
        let mut index = 0;
        for (slot, list) in self.args.iter().enumerate() {
            if slot > 0 {
                f.write_char(';')?;
            }
            for (i, e) in list.iter().enumerate() {
                if i > 0 {
                    f.write_char(',')?;
                }
                if self.del_marks.contains(&index) {
                    f.write_str("del ")?;
                }
                write!(f, "{e}")?;
                index += 1;
            }
        }
        f.write_char(')')
    }
}

impl fmt::Display for ParamDecl {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.del {
            f.write_str("del ")?;
        }
        write!(f, "{} {}", self.ty, self.name)?;
        match self.shape {
            Shape::Scalar => Ok(()),
            Shape::Array(e) => write!(f, "{e}"),
            Shape::Unsized => f.write_str("[]"),
        }
    }
}

fn signature(r: &RoutineDef) -> String {
    let mut s = format!("{}(", r.name);
    for (slot, mode) in Mode::ALL.into_iter().enumerate() {
        if slot > 0 {
            s.push(';');
        }
        let params: Vec<String> = r.params_of(mode).map(|p| p.to_string()).collect();
        s.push_str(&params.join(", "));
    }
    s.push(')');
    let declared: Vec<String> = r
        .nonlocals
        .iter()
        .filter(|n| n.origin == Origin::Declared)
        .map(|n| if n.del { format!("del {}", n.channel) } else { n.channel.clone() })
        .collect();
    if !declared.is_empty() {
        let _ = write!(s, "(;{};)", declared.join(","));
    }
    s
}

fn write_stmts(out: &mut String, stmts: &[Stmt], depth: usize) {
    for s in stmts {
        write_stmt(out, s, depth);
    }
}

fn write_stmt(out: &mut String, stmt: &Stmt, depth: usize) {
    let pad = "    ".repeat(depth);
    match &stmt.kind {
        StmtKind::VarDecl { name, ty, shape, init } => {
            let _ = write!(out, "{pad}{ty} {name}");
            if let Shape::Array(e) = shape {
                let _ = write!(out, "{e}");
            }
            if let Some(init) = init {
                let _ = write!(out, " = {init}");
            }
            out.push_str(";\n");
        }
        StmtKind::Assign(target, value) => {
            let _ = match target {
                LValue::Var(n) => writeln!(out, "{pad}{n} = {value};"),
                LValue::Index(n, i) => writeln!(out, "{pad}{n}[{i}] = {value};"),
            };
        }
        StmtKind::Call(call) => {
            let _ = writeln!(out, "{pad}{call};");
        }
        StmtKind::If(cond, then_branch, else_branch) => {
            let _ = writeln!(out, "{pad}if ({cond}) {{");
            write_stmts(out, then_branch, depth + 1);
            if else_branch.is_empty() {
                let _ = writeln!(out, "{pad}}}");
            } else {
                let _ = writeln!(out, "{pad}}} else {{");
                write_stmts(out, else_branch, depth + 1);
                let _ = writeln!(out, "{pad}}}");
            }
        }
    }
}

impl fmt::Display for Program {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut out = String::new();
        for r in self.routines.values().filter(|r| r.in_source) {
            if r.name == MAIN && self.implicit_main {
                continue;
            }
            out.push_str(&signature(r));
            match &r.body {
                Body::Stmts(stmts) => {
                    out.push_str(" {\n");
                    write_stmts(&mut out, stmts, 1);
                    out.push_str("}\n");
                }
                _ => out.push_str(";\n"),
            }
        }
        if self.implicit_main {
            if let Some(Body::Stmts(calls)) = self.main().map(|m| &m.body) {
                write_stmts(&mut out, calls, 0);
            }
        }
        f.write_str(&out)
    }
}

#[cfg(test)]
mod tests {
    use crate::frontend::{lexer::tokenize, parser::parse_program};

    fn round_trip(src: &str) {
        let mut first = parse_program(&tokenize(src).unwrap()).unwrap();
        let printed = first.to_string();
        let mut second = parse_program(&tokenize(&printed).unwrap()).unwrap_or_else(|e| panic!("{e}\n{printed}"));
        first.strip_positions();
        second.strip_positions();
        assert_eq!(first, second, "printed:\n{printed}");
    }

    #[test]
    fn fact_round_trips() {
        round_trip(
            "fact(int b, int e;; int f)
             { if (b>=e) f=b; else { int m=(b+e)/2; fact(b,m;;x); fact(m+1,e;;y); mult(x,y;;f); } }
             main(;;) { fact(1,3;;k); intprint(k;;); }",
        );
    }

    #[test]
    fn expressions_keep_their_grouping() {
        round_trip("f(;;int r) { r = (1 - (2 - 3)) * -4 - (-5); r = 1 - 2 * 3 / (4 / 2); }");
    }

    #[test]
    fn effects_and_strings_round_trip() {
        round_trip(
            "putc(char i;;)(;stdout;);
             intprint(int i;;);
             puts(char s[];;)(;del stdout;) { if (s[0]!=0) { putc(s[0];;); puts(s[1];;); } }
             puts(\"A\\\"B\";;); puts(\"CD\";;);",
        );
    }
}

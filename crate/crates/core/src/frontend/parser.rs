//! Recursive descent parser for routine declarations, definitions and
//! top-level calls.
//!
//! ```text
//! program   ::= ( routine | call ';' )*
//! routine   ::= IDENT '(' params ';' params ';' params ')' nonlocals? ( ';' | block )
//! params    ::= ( param ( ',' param )* )?
//! param     ::= 'del'? type IDENT ( '[' ( INT ':' INT )? ']' )?
//! nonlocals ::= '(' ';' ( 'del'? IDENT ( ',' 'del'? IDENT )* )? ';' ')'
//! block     ::= '{' stmt* '}'
//! stmt      ::= type IDENT extent? ( '=' expr )? ';'
//!             | 'if' '(' expr ')' branch ( 'else' branch )?
//!             | call ';'
//!             | IDENT ( '[' expr ']' )? '=' expr ';'
//! call      ::= IDENT '(' args ';' args ';' args ')'
//! ```

use thiserror::Error;

use super::ast::*;
use super::lexer::{Keyword, Pos, Punct, Token, TokenKind};
use crate::value::{BaseType, Extent};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("parse error at {pos}: {message}")]
pub struct ParseError {
    pub pos: Pos,
    pub message: String,
}

type PResult<T> = Result<T, ParseError>;

/// Parses a token stream into a program.
///
/// Prototypes register signatures only; a prototype naming a builtin binds
/// the builtin body. Bare top-level calls become the body of an implicit
/// `main(;;)`.
pub fn parse_program(tokens: &[Token]) -> PResult<Program> {
    let mut parser = Parser { toks: tokens, i: 0 };
    let mut program = Program::builtins();
    let mut top_calls = Vec::new();
    let mut first_call_pos = None;

    while !parser.at_end() {
        let pos = parser.pos();
        if parser.starts_routine() {
            let def = parser.routine()?;
            declare(&mut program, def)?;
        } else {
            let call = parser.call()?;
            parser.expect(Punct::Semi)?;
            first_call_pos.get_or_insert(pos);
            top_calls.push(Stmt { kind: StmtKind::Call(call), pos });
        }
    }

    if let Some(pos) = first_call_pos {
        if program.main().is_some_and(|m| m.in_source) {
            return Err(ParseError { pos, message: "top-level calls cannot be combined with an explicit main".into() });
        }
        program.routines.insert(
            MAIN.into(),
            RoutineDef {
                name: MAIN.into(),
                params: vec![],
                nonlocals: vec![],
                body: Body::Stmts(top_calls),
                in_source: true,
                pos,
            },
        );
        program.implicit_main = true;
    }
    Ok(program)
}

fn compatible(a: &[ParamDecl], b: &[ParamDecl]) -> bool {
    a.len() == b.len()
        && a.iter().zip(b).all(|(x, y)| {
            let shapes = match (x.shape, y.shape) {
                (Shape::Unsized, s) | (s, Shape::Unsized) => s.is_array(),
                (s, t) => s == t,
            };
            x.mode == y.mode && x.del == y.del && x.ty == y.ty && shapes
        })
}

fn merge_nonlocals(into: &mut Vec<NonlocalDecl>, from: Vec<NonlocalDecl>) {
    for n in from {
        match into.iter_mut().find(|m| m.channel == n.channel) {
            Some(m) => {
                // A declaration written in the source wins over an intrinsic one.
                if n.origin == Origin::Declared {
                    *m = n;
                }
            }
            None => into.push(n),
        }
    }
}

fn declare(program: &mut Program, def: RoutineDef) -> PResult<()> {
    fn conflict(what: &str, def: &RoutineDef) -> ParseError {
        ParseError { pos: def.pos, message: format!("{what} `{}`", def.name) }
    }
    let Some(existing) = program.routines.get_mut(&def.name) else {
        program.routines.insert(def.name.clone(), def);
        return Ok(());
    };

    let defines = matches!(def.body, Body::Stmts(_));
    if existing.in_source && !compatible(&existing.params, &def.params) {
        return Err(conflict("conflicting declarations of", &def));
    }
    match existing.body.clone() {
        Body::Builtin(_) if defines => {
            // A source definition replaces the builtin of the same name.
            let mut nonlocals = if existing.in_source {
                std::mem::take(&mut existing.nonlocals).into_iter().filter(|n| n.origin == Origin::Declared).collect()
            } else {
                Vec::new()
            };
            merge_nonlocals(&mut nonlocals, def.nonlocals.clone());
            *existing = RoutineDef { nonlocals, ..def };
        }
        Body::Builtin(b) => {
            if !compatible(&existing.params, &def.params) {
                return Err(conflict("prototype does not match builtin", &def));
            }
            let mut nonlocals = if existing.in_source { std::mem::take(&mut existing.nonlocals) } else { Vec::new() };
            merge_nonlocals(&mut nonlocals, def.nonlocals);
            merge_nonlocals(&mut nonlocals, b.channels());
            existing.params = def.params;
            existing.nonlocals = nonlocals;
            existing.in_source = true;
            existing.pos = def.pos;
        }
        Body::Stmts(_) if defines => return Err(conflict("duplicate definition of", &def)),
        body => {
            let prototype_first = matches!(body, Body::Prototype);
            let mut nonlocals = std::mem::take(&mut existing.nonlocals);
            merge_nonlocals(&mut nonlocals, def.nonlocals.clone());
            if prototype_first && defines {
                existing.params = def.params;
                existing.body = def.body;
                existing.pos = def.pos;
            }
            existing.nonlocals = nonlocals;
        }
    }
    Ok(())
}

struct Parser<'t> {
    toks: &'t [Token],
    i: usize,
}

impl Parser<'_> {
    fn at_end(&self) -> bool {
        self.i >= self.toks.len()
    }

    fn peek(&self) -> Option<&TokenKind> {
        self.toks.get(self.i).map(|t| &t.kind)
    }

    fn peek_at(&self, k: usize) -> Option<&TokenKind> {
        self.toks.get(self.i + k).map(|t| &t.kind)
    }

    fn pos(&self) -> Pos {
        self.toks.get(self.i).or(self.toks.last()).map(|t| t.pos).unwrap_or_default()
    }

    fn error<T>(&self, message: impl Into<String>) -> PResult<T> {
        let found = match self.toks.get(self.i) {
            Some(t) => format!(" (found `{}`)", t.text),
            None => " (found end of input)".into(),
        };
        Err(ParseError { pos: self.pos(), message: message.into() + &found })
    }

    fn is_punct(&self, p: Punct) -> bool {
        self.peek() == Some(&TokenKind::Punct(p))
    }

    fn is_keyword(&self, k: Keyword) -> bool {
        self.peek() == Some(&TokenKind::Keyword(k))
    }

    fn eat_punct(&mut self, p: Punct) -> bool {
        let hit = self.is_punct(p);
        if hit {
            self.i += 1;
        }
        hit
    }

    fn eat_keyword(&mut self, k: Keyword) -> bool {
        let hit = self.is_keyword(k);
        if hit {
            self.i += 1;
        }
        hit
    }

    fn expect(&mut self, p: Punct) -> PResult<()> {
        if self.eat_punct(p) {
            Ok(())
        } else {
            self.error(format!("expected `{}`", p.as_str()))
        }
    }

    fn ident(&mut self) -> PResult<String> {
        match self.peek() {
            Some(TokenKind::Ident(name)) => {
                let name = name.clone();
                self.i += 1;
                Ok(name)
            }
            _ => self.error("expected an identifier"),
        }
    }

    fn int_literal(&mut self) -> PResult<i64> {
        let negative = self.eat_punct(Punct::Minus);
        match self.peek() {
            Some(&TokenKind::Int(v)) => {
                self.i += 1;
                Ok(if negative { -v } else { v })
            }
            _ => self.error("expected an integer literal"),
        }
    }

    fn base_type(&self) -> Option<BaseType> {
        match self.peek() {
            Some(TokenKind::Keyword(Keyword::Int)) => Some(BaseType::Int),
            Some(TokenKind::Keyword(Keyword::Boolean)) => Some(BaseType::Boolean),
            Some(TokenKind::Keyword(Keyword::Char)) => Some(BaseType::Char),
            _ => None,
        }
    }

    /// Decides whether `IDENT (` at the cursor opens a routine declaration
    /// rather than a call: typed parameters, or an empty list followed by a
    /// body or a nonlocal group.
    fn starts_routine(&self) -> bool {
        if !matches!(self.peek(), Some(TokenKind::Ident(_)))
            || self.peek_at(1) != Some(&TokenKind::Punct(Punct::LParen))
        {
            return false;
        }
        let mut depth = 0usize;
        let mut k = 1;
        while let Some(kind) = self.peek_at(k) {
            match kind {
                TokenKind::Punct(Punct::LParen) => depth += 1,
                TokenKind::Punct(Punct::RParen) => {
                    depth -= 1;
                    if depth == 0 {
                        return matches!(self.peek_at(k + 1), Some(TokenKind::Punct(Punct::LBrace | Punct::LParen)));
                    }
                }
                TokenKind::Keyword(Keyword::Int | Keyword::Boolean | Keyword::Char) if depth == 1 => return true,
                _ => {}
            }
            k += 1;
        }
        false
    }

    fn routine(&mut self) -> PResult<RoutineDef> {
        let pos = self.pos();
        let name = self.ident()?;
        self.expect(Punct::LParen)?;
        let mut params = Vec::new();
        for (slot, mode) in Mode::ALL.into_iter().enumerate() {
            if !self.is_punct(Punct::Semi) && !self.is_punct(Punct::RParen) {
                loop {
                    params.push(self.param(mode)?);
                    if !self.eat_punct(Punct::Comma) {
                        break;
                    }
                }
            }
            if slot < 2 {
                self.expect(Punct::Semi)?;
            }
        }
        self.expect(Punct::RParen)?;

        let mut nonlocals = Vec::new();
        if self.eat_punct(Punct::LParen) {
            if !self.is_punct(Punct::Semi) {
                return self.error("nonlocal items are declared as inouts, as in `(;stdout;)`");
            }
            self.expect(Punct::Semi)?;
            if !self.is_punct(Punct::Semi) {
                loop {
                    let del = self.eat_keyword(Keyword::Del);
                    let channel = self.ident()?;
                    nonlocals.push(NonlocalDecl { channel, del, origin: Origin::Declared });
                    if !self.eat_punct(Punct::Comma) {
                        break;
                    }
                }
            }
            self.expect(Punct::Semi)?;
            if !self.is_punct(Punct::RParen) {
                return self.error("nonlocal items are declared as inouts, as in `(;stdout;)`");
            }
            self.expect(Punct::RParen)?;
        }

        let body = if self.eat_punct(Punct::Semi) { Body::Prototype } else { Body::Stmts(self.block()?) };
        Ok(RoutineDef { name, params, nonlocals, body, in_source: true, pos })
    }

    fn param(&mut self, mode: Mode) -> PResult<ParamDecl> {
        let del = self.eat_keyword(Keyword::Del);
        let Some(ty) = self.base_type() else {
            return self.error("expected a parameter type");
        };
        self.i += 1;
        let name = self.ident()?;
        let shape = if self.eat_punct(Punct::LBracket) {
            if self.eat_punct(Punct::RBracket) {
                Shape::Unsized
            } else {
                let extent = self.extent_bounds()?;
                Shape::Array(extent)
            }
        } else {
            Shape::Scalar
        };
        Ok(ParamDecl { name, mode, del, ty, shape })
    }

    /// `lo ':' hi ']'`, the opening bracket already consumed.
    fn extent_bounds(&mut self) -> PResult<Extent> {
        let pos = self.pos();
        let lo = self.int_literal()?;
        self.expect(Punct::Colon)?;
        let hi = self.int_literal()?;
        self.expect(Punct::RBracket)?;
        if lo > hi {
            return Err(ParseError { pos, message: format!("empty extent [{lo}:{hi}]") });
        }
        Ok(Extent::new(lo, hi))
    }

    fn block(&mut self) -> PResult<Vec<Stmt>> {
        self.expect(Punct::LBrace)?;
        let mut stmts = Vec::new();
        while !self.eat_punct(Punct::RBrace) {
            if self.at_end() {
                return self.error("unterminated block");
            }
            stmts.push(self.stmt()?);
        }
        Ok(stmts)
    }

    fn branch(&mut self) -> PResult<Vec<Stmt>> {
        if self.is_punct(Punct::LBrace) {
            self.block()
        } else {
            Ok(vec![self.stmt()?])
        }
    }

    fn stmt(&mut self) -> PResult<Stmt> {
        let pos = self.pos();
        if let Some(ty) = self.base_type() {
            self.i += 1;
            let name = self.ident()?;
            let shape =
                if self.eat_punct(Punct::LBracket) { Shape::Array(self.extent_bounds()?) } else { Shape::Scalar };
            let init = if self.eat_punct(Punct::Assign) { Some(self.expr()?) } else { None };
            self.expect(Punct::Semi)?;
            return Ok(Stmt { kind: StmtKind::VarDecl { name, ty, shape, init }, pos });
        }
        if self.eat_keyword(Keyword::If) {
            self.expect(Punct::LParen)?;
            let cond = self.expr()?;
            self.expect(Punct::RParen)?;
            let then_branch = self.branch()?;
            let else_branch = if self.eat_keyword(Keyword::Else) { self.branch()? } else { vec![] };
            return Ok(Stmt { kind: StmtKind::If(cond, then_branch, else_branch), pos });
        }
        if matches!(self.peek(), Some(TokenKind::Ident(_))) && self.peek_at(1) == Some(&TokenKind::Punct(Punct::LParen))
        {
            let call = self.call()?;
            self.expect(Punct::Semi)?;
            return Ok(Stmt { kind: StmtKind::Call(call), pos });
        }
        let name = self.ident()?;
        let target = if self.eat_punct(Punct::LBracket) {
            let index = self.expr()?;
            self.expect(Punct::RBracket)?;
            LValue::Index(name, index)
        } else {
            LValue::Var(name)
        };
        self.expect(Punct::Assign)?;
        let value = self.expr()?;
        self.expect(Punct::Semi)?;
        Ok(Stmt { kind: StmtKind::Assign(target, value), pos })
    }

    fn call(&mut self) -> PResult<Call> {
        let routine = self.ident()?;
        self.expect(Punct::LParen)?;
        let mut args: [Vec<Expr>; 3] = Default::default();
        let mut del_marks = Vec::new();
        let mut index = 0;
        for (slot, list) in args.iter_mut().enumerate() {
            if !self.is_punct(Punct::Semi) && !self.is_punct(Punct::RParen) {
                loop {
                    if self.eat_keyword(Keyword::Del) {
                        del_marks.push(index);
                    }
                    list.push(self.expr()?);
                    index += 1;
                    if !self.eat_punct(Punct::Comma) {
                        break;
                    }
                }
            }
            if slot < 2 {
                self.expect(Punct::Semi)?;
            }
        }
        self.expect(Punct::RParen)?;
        Ok(Call { routine, args, del_marks })
    }

    fn expr(&mut self) -> PResult<Expr> {
        self.binary(1)
    }

    fn binary_op(&self) -> Option<BinOp> {
        let TokenKind::Punct(p) = self.peek()? else { return None };
        Some(match p {
            Punct::Plus => BinOp::Add,
            Punct::Minus => BinOp::Sub,
            Punct::Star => BinOp::Mul,
            Punct::Slash => BinOp::Div,
            Punct::GtEq => BinOp::Ge,
            Punct::NotEq => BinOp::Ne,
            Punct::EqEq => BinOp::Eq,
            Punct::Gt => BinOp::Gt,
            Punct::Lt => BinOp::Lt,
            _ => return None,
        })
    }

    // Precedence climbing, all operators left-associative.
    fn binary(&mut self, min_prec: u8) -> PResult<Expr> {
        let mut lhs = self.primary()?;
        while let Some(op) = self.binary_op() {
            if op.precedence() < min_prec {
                break;
            }
            self.i += 1;
            let rhs = self.binary(op.precedence() + 1)?;
            lhs = Expr::Binary(op, Box::new(lhs), Box::new(rhs));
        }
        Ok(lhs)
    }

    fn primary(&mut self) -> PResult<Expr> {
        let Some(kind) = self.peek().cloned() else {
            return self.error("expected an expression");
        };
        match kind {
            TokenKind::Int(v) => {
                self.i += 1;
                Ok(Expr::Int(v))
            }
            TokenKind::Punct(Punct::Minus) if matches!(self.peek_at(1), Some(TokenKind::Int(_))) => {
                Ok(Expr::Int(self.int_literal()?))
            }
            TokenKind::Char(c) => {
                self.i += 1;
                Ok(Expr::Char(c))
            }
            TokenKind::Str(chars) => {
                self.i += 1;
                Ok(Expr::Str(chars))
            }
            TokenKind::Keyword(Keyword::True) => {
                self.i += 1;
                Ok(Expr::Bool(true))
            }
            TokenKind::Keyword(Keyword::False) => {
                self.i += 1;
                Ok(Expr::Bool(false))
            }
            TokenKind::Ident(name) => {
                self.i += 1;
                if self.eat_punct(Punct::LBracket) {
                    let index = self.expr()?;
                    self.expect(Punct::RBracket)?;
                    Ok(Expr::Index(name, Box::new(index)))
                } else {
                    Ok(Expr::Var(name))
                }
            }
            TokenKind::Punct(Punct::LParen) => {
                self.i += 1;
                let e = self.expr()?;
                self.expect(Punct::RParen)?;
                Ok(e)
            }
            _ => self.error("expected an expression"),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::frontend::lexer::tokenize;

    fn parse(src: &str) -> Program {
        parse_program(&tokenize(src).unwrap()).unwrap()
    }

    #[test]
    fn section7_program() {
        let p = parse(
            "mult(int a, int b;; int c);
             fact(int b, int e;; int f);
             intprint(int i;;);
             main(;;) { fact(1,3;;k); intprint(k;;); }",
        );
        let main = p.main().unwrap();
        let Body::Stmts(body) = &main.body else { panic!() };
        assert_eq!(body.len(), 2);
        assert!(!p.implicit_main);
        assert_eq!(p.routine("fact").unwrap().body, Body::Prototype);
        assert_eq!(p.routine("mult").unwrap().body, Body::Builtin(Builtin::Mult));
        // intprint keeps its intrinsic channel even though the prototype omits it.
        let ip = p.routine("intprint").unwrap();
        assert_eq!(ip.nonlocals[0].channel, "stdout");
        assert_eq!(ip.nonlocals[0].origin, Origin::Builtin);
    }

    #[test]
    fn nonlocal_declaration() {
        let p = parse("putc(char i;;)(;stdout;);");
        let putc = p.routine("putc").unwrap();
        assert_eq!(
            putc.nonlocals,
            vec![NonlocalDecl { channel: "stdout".into(), del: false, origin: Origin::Declared }]
        );
        let p = parse("puts(char s[];;)(;del stdout;);");
        assert!(p.routine("puts").unwrap().nonlocals[0].del);
    }

    #[test]
    fn del_out_array_parameter() {
        let p = parse("a(;; del int y[0:9999]) { b(;;y[0]); c(;;y[5000]); }");
        let a = p.routine("a").unwrap();
        assert_eq!(
            a.params,
            vec![ParamDecl {
                name: "y".into(),
                mode: Mode::Out,
                del: true,
                ty: BaseType::Int,
                shape: Shape::Array(Extent::new(0, 9999)),
            }]
        );
    }

    #[test]
    fn bare_calls_desugar_to_main() {
        let p = parse("puts(\"AB\";;); puts(\"CD\";;);");
        assert!(p.implicit_main);
        let Body::Stmts(body) = &p.main().unwrap().body else { panic!() };
        assert_eq!(body.len(), 2);
        let err = parse_program(&tokenize("main(;;) { } f(;;);").unwrap()).unwrap_err();
        assert!(err.message.contains("explicit main"));
    }

    #[test]
    fn fact_body_shape() {
        let p = parse(
            "fact(int b, int e;; int f)
             { if (b>=e) f=b;
               else { int m=(b+e)/2; fact(b,m;;x); fact(m+1,e;;y); mult(x,y;;f); } }",
        );
        let Body::Stmts(body) = &p.routine("fact").unwrap().body else { panic!() };
        let StmtKind::If(cond, t, e) = &body[0].kind else { panic!() };
        assert_eq!(*cond, Expr::Binary(BinOp::Ge, Box::new(Expr::Var("b".into())), Box::new(Expr::Var("e".into()))));
        assert_eq!(t.len(), 1);
        assert_eq!(e.len(), 4);
        let StmtKind::VarDecl { init: Some(init), .. } = &e[0].kind else { panic!() };
        let expected = Expr::Binary(
            BinOp::Div,
            Box::new(Expr::Binary(BinOp::Add, Box::new(Expr::Var("b".into())), Box::new(Expr::Var("e".into())))),
            Box::new(Expr::Int(2)),
        );
        assert_eq!(*init, expected);
    }

    #[test]
    fn precedence_and_associativity() {
        let p = parse("f(;;int r) { r = 1 - 2 - 3 * 4; }");
        let Body::Stmts(body) = &p.routine("f").unwrap().body else { panic!() };
        let StmtKind::Assign(_, e) = &body[0].kind else { panic!() };
        use Expr::*;
        assert_eq!(
            *e,
            Binary(
                BinOp::Sub,
                Box::new(Binary(BinOp::Sub, Box::new(Int(1)), Box::new(Int(2)))),
                Box::new(Binary(BinOp::Mul, Box::new(Int(3)), Box::new(Int(4)))),
            )
        );
    }

    #[test]
    fn prototype_then_definition_merges() {
        let p = parse(
            "puts(char s[];;)(;del stdout;);
             puts(char s[];;) { if (s[0]!=0) { putc(s[0];;); puts(s[1];;); } }",
        );
        let puts = p.routine("puts").unwrap();
        assert!(matches!(puts.body, Body::Stmts(_)));
        assert_eq!(puts.nonlocals.len(), 1);
    }

    #[test]
    fn conflicting_declarations_are_rejected() {
        let src = "f(int a;;); f(char a;;);";
        assert!(parse_program(&tokenize(src).unwrap()).is_err());
        let src = "f(;;) { } f(;;) { }";
        assert!(parse_program(&tokenize(src).unwrap()).is_err());
        let src = "putc(int i;;);";
        assert!(parse_program(&tokenize(src).unwrap()).is_err());
        let src = "f(int a;;)(stdout;;);";
        assert!(parse_program(&tokenize(src).unwrap()).is_err());
    }

    #[test]
    fn syntax_errors_report_position() {
        let err = parse_program(&tokenize("f(int a;;) { a = ; }").unwrap()).unwrap_err();
        assert_eq!(err.pos.col, 18);
    }
}

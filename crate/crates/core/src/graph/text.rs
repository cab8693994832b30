//! Parsing the textual graph form, e.g. `plus(u,v;;a) mult(a,b;;c)`.

use std::collections::BTreeMap;

use super::{Binding, ChannelBinding, Graph, GraphError, Seq, Target};
use crate::frontend::lexer::{tokenize, Keyword, Punct, Token, TokenKind};
use crate::frontend::{Mode, Origin};
use crate::value::{BaseType, Extent, Scalar, Value};

enum ArgTarget {
    Literal(Value),
    Name(String, Option<(i64, i64)>),
}

struct Arg {
    mode: Mode,
    del: bool,
    target: ArgTarget,
}

struct ParsedTask {
    instruction: String,
    args: Vec<Arg>,
    channels: Vec<ChannelBinding>,
}

struct Cursor<'t> {
    toks: &'t [Token],
    i: usize,
}

impl Cursor<'_> {
    fn error<T>(&self, message: impl Into<String>) -> Result<T, GraphError> {
        Err(GraphError::Parse { index: self.i, message: message.into() })
    }

    fn peek(&self) -> Option<&TokenKind> {
        self.toks.get(self.i).map(|t| &t.kind)
    }

    fn eat(&mut self, p: Punct) -> bool {
        if self.peek() == Some(&TokenKind::Punct(p)) {
            self.i += 1;
            true
        } else {
            false
        }
    }

    fn expect(&mut self, p: Punct) -> Result<(), GraphError> {
        if self.eat(p) {
            Ok(())
        } else {
            self.error(format!("expected `{}`", p.as_str()))
        }
    }

    fn eat_del(&mut self) -> bool {
        if self.peek() == Some(&TokenKind::Keyword(Keyword::Del)) {
            self.i += 1;
            true
        } else {
            false
        }
    }

    fn ident(&mut self) -> Result<String, GraphError> {
        match self.peek() {
            Some(TokenKind::Ident(n)) => {
                let n = n.clone();
                self.i += 1;
                Ok(n)
            }
            _ => self.error("expected a name"),
        }
    }

    fn int(&mut self) -> Result<i64, GraphError> {
        let negative = self.eat(Punct::Minus);
        match self.peek() {
            Some(TokenKind::Int(v)) => {
                let v = *v;
                self.i += 1;
                Ok(if negative { -v } else { v })
            }
            _ => self.error("expected an integer"),
        }
    }

    fn scalar(&mut self) -> Result<Scalar, GraphError> {
        let s = match self.peek() {
            Some(TokenKind::Char(c)) => Scalar::Char(*c),
            Some(TokenKind::Keyword(Keyword::True)) => Scalar::Bool(true),
            Some(TokenKind::Keyword(Keyword::False)) => Scalar::Bool(false),
            _ => return self.int().map(Scalar::Int),
        };
        self.i += 1;
        Ok(s)
    }

    fn task(&mut self) -> Result<ParsedTask, GraphError> {
        let instruction = self.ident()?;
        self.expect(Punct::LParen)?;
        let mut args = Vec::new();
        for (slot, mode) in Mode::ALL.into_iter().enumerate() {
            if slot > 0 {
                self.expect(Punct::Semi)?;
            }
            if matches!(self.peek(), Some(TokenKind::Punct(Punct::Semi | Punct::RParen))) {
                continue;
            }
            loop {
                let del = self.eat_del();
                let target = self.target()?;
                args.push(Arg { mode, del, target });
                if !self.eat(Punct::Comma) {
                    break;
                }
            }
        }
        self.expect(Punct::RParen)?;
        let mut channels = Vec::new();
        let group = self.peek() == Some(&TokenKind::Punct(Punct::LParen))
            && self.toks.get(self.i + 1).map(|t| &t.kind) == Some(&TokenKind::Punct(Punct::Semi));
        if group {
            self.i += 2;
            while !self.eat(Punct::Semi) {
                if !channels.is_empty() {
                    self.expect(Punct::Comma)?;
                }
                let del = self.eat_del();
                let channel = self.ident()?;
                channels.push(ChannelBinding { channel, del, origin: Origin::Declared });
            }
            self.expect(Punct::RParen)?;
        }
        Ok(ParsedTask { instruction, args, channels })
    }

    fn target(&mut self) -> Result<ArgTarget, GraphError> {
        match self.peek() {
            Some(TokenKind::Ident(_)) => {
                let name = self.ident()?;
                if !self.eat(Punct::LBracket) {
                    return Ok(ArgTarget::Name(name, None));
                }
                let lo = self.int()?;
                self.expect(Punct::Colon)?;
                let hi = self.int()?;
                self.expect(Punct::RBracket)?;
                if lo > hi {
                    return self.error(format!("empty range {lo}:{hi}"));
                }
                Ok(ArgTarget::Name(name, Some((lo, hi))))
            }
            Some(TokenKind::Str(chars)) => {
                let v = Value::Array(chars.iter().map(|&c| Scalar::Char(c)).collect());
                self.i += 1;
                Ok(ArgTarget::Literal(v))
            }
            Some(TokenKind::Punct(Punct::LBrace)) => {
                self.i += 1;
                let mut elems = vec![self.scalar()?];
                while self.eat(Punct::Comma) {
                    elems.push(self.scalar()?);
                }
                self.expect(Punct::RBrace)?;
                Ok(ArgTarget::Literal(Value::Array(elems)))
            }
            _ => self.scalar().map(|s| ArgTarget::Literal(Value::Scalar(s))),
        }
    }
}

impl Graph {
    /// Builds a graph from its textual form. Every distinct name becomes an
    /// observed, undefined int item, sized to cover the ranges used on it.
    /// Tasks receive sequence keys 1, 2, … in text order.
    pub fn parse(text: &str) -> Result<Graph, GraphError> {
        let toks = tokenize(text).map_err(|e| GraphError::Parse { index: 0, message: e.to_string() })?;
        let mut cur = Cursor { toks: &toks, i: 0 };
        let mut tasks = Vec::new();
        while cur.i < toks.len() {
            tasks.push(cur.task()?);
        }

        // name -> (lowest index, highest index, used as an array)
        let mut shapes: BTreeMap<&str, (i64, i64, bool)> = BTreeMap::new();
        for arg in tasks.iter().flat_map(|t| &t.args) {
            if let ArgTarget::Name(name, range) = &arg.target {
                let (lo, hi) = range.unwrap_or((0, 0));
                let e = shapes.entry(name).or_insert((0, 0, false));
                *e = (e.0.min(lo), e.1.max(hi), e.2 || range.is_some());
            }
        }
        let mut graph = Graph::new();
        let mut order: Vec<&str> = Vec::new();
        for arg in tasks.iter().flat_map(|t| &t.args) {
            if let ArgTarget::Name(name, _) = &arg.target {
                if !order.contains(&name.as_str()) {
                    order.push(name);
                }
            }
        }
        let mut ids = BTreeMap::new();
        for name in order {
            let (lo, hi, is_array) = shapes[name];
            let id = graph.alloc_item(BaseType::Int, Extent::new(lo, hi), is_array, name);
            graph.observe(id);
            ids.insert(name, id);
        }

        for (n, t) in tasks.iter().enumerate() {
            let bindings = t
                .args
                .iter()
                .map(|a| {
                    let (target, is_array) = match &a.target {
                        ArgTarget::Literal(v) => (Target::Literal(v.clone()), matches!(v, Value::Array(_))),
                        ArgTarget::Name(name, range) => {
                            let item = graph.item(ids[name.as_str()]).expect("allocated above");
                            let region = match range {
                                Some((lo, hi)) => super::Region {
                                    item: item.id,
                                    lo: (lo - item.extent.lo) as usize,
                                    hi: (hi - item.extent.lo) as usize,
                                },
                                None => item.whole(),
                            };
                            (Target::Region(region), item.is_array)
                        }
                    };
                    Binding { mode: a.mode, del: a.del, target, is_array }
                })
                .collect();
            graph.insert_task(Seq::root(n as u32 + 1), &t.instruction, bindings, t.channels.clone());
        }
        Ok(graph)
    }
}

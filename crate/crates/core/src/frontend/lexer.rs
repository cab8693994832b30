use std::fmt;

use thiserror::Error;

/// Line/column of a token, both 1-based.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Pos {
    pub line: u32,
    pub col: u32,
}

impl fmt::Display for Pos {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}:{}", self.line, self.col)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Keyword {
    Int,
    Boolean,
    Char,
    Del,
    If,
    Else,
    True,
    False,
}

impl Keyword {
    pub const ALL: [Keyword; 8] = [
        Keyword::Int,
        Keyword::Boolean,
        Keyword::Char,
        Keyword::Del,
        Keyword::If,
        Keyword::Else,
        Keyword::True,
        Keyword::False,
    ];

    pub fn as_str(&self) -> &'static str {
        match self {
            Keyword::Int => "int",
            Keyword::Boolean => "boolean",
            Keyword::Char => "char",
            Keyword::Del => "del",
            Keyword::If => "if",
            Keyword::Else => "else",
            Keyword::True => "true",
            Keyword::False => "false",
        }
    }

    fn lookup(word: &str) -> Option<Keyword> {
        Keyword::ALL.into_iter().find(|k| k.as_str() == word)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Punct {
    LParen,
    RParen,
    LBrace,
    RBrace,
    LBracket,
    RBracket,
    Semi,
    Comma,
    Colon,
    Assign,
    Plus,
    Minus,
    Star,
    Slash,
    EqEq,
    NotEq,
    GtEq,
    Gt,
    Lt,
}

impl Punct {
    pub fn as_str(&self) -> &'static str {
        match self {
            Punct::LParen => "(",
            Punct::RParen => ")",
            Punct::LBrace => "{",
            Punct::RBrace => "}",
            Punct::LBracket => "[",
            Punct::RBracket => "]",
            Punct::Semi => ";",
            Punct::Comma => ",",
            Punct::Colon => ":",
            Punct::Assign => "=",
            Punct::Plus => "+",
            Punct::Minus => "-",
            Punct::Star => "*",
            Punct::Slash => "/",
            Punct::EqEq => "==",
            Punct::NotEq => "!=",
            Punct::GtEq => ">=",
            Punct::Gt => ">",
            Punct::Lt => "<",
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum TokenKind {
    Ident(String),
    Int(i64),
    Char(char),
    /// Decoded characters, terminating 0 included.
    Str(Vec<char>),
    Keyword(Keyword),
    Punct(Punct),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Token {
    pub kind: TokenKind,
    pub text: String,
    pub pos: Pos,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("lex error at {pos}: {message}")]
pub struct LexError {
    pub pos: Pos,
    pub message: String,
}

struct Cursor<'a> {
    chars: std::iter::Peekable<std::str::Chars<'a>>,
    line: u32,
    col: u32,
}

impl Cursor<'_> {
    fn pos(&self) -> Pos {
        Pos { line: self.line, col: self.col }
    }

    fn peek(&mut self) -> Option<char> {
        self.chars.peek().copied()
    }

    fn bump(&mut self) -> Option<char> {
        let c = self.chars.next()?;
        if c == '\n' {
            self.line += 1;
            self.col = 1;
        } else {
            self.col += 1;
        }
        Some(c)
    }

    fn eat(&mut self, c: char) -> bool {
        if self.peek() == Some(c) {
            self.bump();
            true
        } else {
            false
        }
    }
}

/// Splits `source` into tokens. `//` comments and whitespace are dropped.
pub fn tokenize(source: &str) -> Result<Vec<Token>, LexError> {
    let mut cur = Cursor { chars: source.chars().peekable(), line: 1, col: 1 };
    let mut tokens = Vec::new();

    while let Some(c) = cur.peek() {
        let pos = cur.pos();
        if c.is_whitespace() {
            cur.bump();
            continue;
        }
        if c == '/' {
            cur.bump();
            if cur.eat('/') {
                while let Some(c) = cur.peek() {
                    if c == '\n' {
                        break;
                    }
                    cur.bump();
                }
            } else {
                tokens.push(punct(Punct::Slash, pos));
            }
            continue;
        }
        if c.is_ascii_alphabetic() || c == '_' {
            let mut word = String::new();
            while let Some(c) = cur.peek() {
                if c.is_ascii_alphanumeric() || c == '_' {
                    word.push(c);
                    cur.bump();
                } else {
                    break;
                }
            }
            let kind = match Keyword::lookup(&word) {
                Some(k) => TokenKind::Keyword(k),
                None => TokenKind::Ident(word.clone()),
            };
            tokens.push(Token { kind, text: word, pos });
            continue;
        }
        if c.is_ascii_digit() {
            let mut digits = String::new();
            while let Some(c) = cur.peek() {
                if c.is_ascii_digit() {
                    digits.push(c);
                    cur.bump();
                } else {
                    break;
                }
            }
            let value = digits
                .parse::<i64>()
                .map_err(|_| LexError { pos, message: format!("integer literal {digits} out of range") })?;
            tokens.push(Token { kind: TokenKind::Int(value), text: digits, pos });
            continue;
        }
        if c == '\'' {
            cur.bump();
            let ch = match cur.bump() {
                Some('\\') => escape(&mut cur, pos)?,
                Some('\'') | Some('\n') | None => {
                    return Err(LexError { pos, message: "empty or unterminated char literal".into() })
                }
                Some(ch) => ch,
            };
            if !cur.eat('\'') {
                return Err(LexError { pos, message: "unterminated char literal".into() });
            }
            let text = format!("'{}'", crate::value::escape_char(ch, '\''));
            tokens.push(Token { kind: TokenKind::Char(ch), text, pos });
            continue;
        }
        if c == '"' {
            cur.bump();
            let mut chars = Vec::new();
            loop {
                match cur.bump() {
                    Some('"') => break,
                    Some('\\') => chars.push(escape(&mut cur, pos)?),
                    Some('\n') | None => return Err(LexError { pos, message: "unterminated string literal".into() }),
                    Some(ch) => chars.push(ch),
                }
            }
            let text: String = chars.iter().map(|&c| crate::value::escape_char(c, '"')).collect();
            chars.push('\0');
            tokens.push(Token { kind: TokenKind::Str(chars), text: format!("\"{text}\""), pos });
            continue;
        }

        cur.bump();
        let p = match c {
            '(' => Punct::LParen,
            ')' => Punct::RParen,
            '{' => Punct::LBrace,
            '}' => Punct::RBrace,
            '[' => Punct::LBracket,
            ']' => Punct::RBracket,
            ';' => Punct::Semi,
            ',' => Punct::Comma,
            ':' => Punct::Colon,
            '+' => Punct::Plus,
            '-' => Punct::Minus,
            '*' => Punct::Star,
            '<' => Punct::Lt,
            '=' if cur.eat('=') => Punct::EqEq,
            '=' => Punct::Assign,
            '!' if cur.eat('=') => Punct::NotEq,
            '>' if cur.eat('=') => Punct::GtEq,
            '>' => Punct::Gt,
            other => {
                return Err(LexError { pos, message: format!("illegal character {other:?}") });
            }
        };
        tokens.push(punct(p, pos));
    }
    Ok(tokens)
}

fn punct(p: Punct, pos: Pos) -> Token {
    Token { kind: TokenKind::Punct(p), text: p.as_str().to_string(), pos }
}

fn escape(cur: &mut Cursor<'_>, pos: Pos) -> Result<char, LexError> {
    match cur.bump() {
        Some('0') => Ok('\0'),
        Some('n') => Ok('\n'),
        Some('t') => Ok('\t'),
        Some(c @ ('\\' | '\'' | '"')) => Ok(c),
        other => Err(LexError { pos, message: format!("unknown escape {other:?}") }),
    }
}

//! Source text to a validated, effect-complete [`Program`].

pub mod ast;
pub mod check;
pub mod effects;
pub mod lexer;
pub mod parser;
mod printer;

pub use ast::*;
pub use check::{check_program, Diagnostic, Rule};
pub use effects::{propagate_effects, EffectMode};
pub use lexer::{tokenize, LexError, Pos, Token, TokenKind};
pub use parser::{parse_program, ParseError};

use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum FrontendError {
    #[error(transparent)]
    Lex(#[from] LexError),
    #[error(transparent)]
    Parse(#[from] ParseError),
    #[error("{}", render_diagnostics(.0))]
    Diagnostics(Vec<Diagnostic>),
}

impl FrontendError {
    pub fn diagnostics(&self) -> &[Diagnostic] {
        match self {
            FrontendError::Diagnostics(d) => d,
            _ => &[],
        }
    }
}

fn render_diagnostics(diags: &[Diagnostic]) -> String {
    diags.iter().map(|d| d.to_string()).collect::<Vec<_>>().join("\n")
}

/// Tokenizes, parses, checks and propagates effects in one go.
pub fn compile(source: &str, effects: EffectMode) -> Result<Program, FrontendError> {
    let tokens = tokenize(source)?;
    let program = parse_program(&tokens)?;
    let program = check_program(program).map_err(FrontendError::Diagnostics)?;
    propagate_effects(program, effects).map_err(FrontendError::Diagnostics)
}

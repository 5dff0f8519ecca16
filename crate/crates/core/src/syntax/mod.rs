//! The `.lpm` text format.
//!
//! ```text
//! file     := item*
//! item     := IDENT ":" term "."
//!           | "def" IDENT ":" term ":=" term "."
//!           | "[" rulevars "]" term "-->" term "."
//! rulevars := (IDENT ("," IDENT)* (":" term)?) separated by ","
//! term     := "Type" | IDENT | term term
//!           | "(" IDENT ":" term ")" "->" term
//!           | term "->" term
//!           | "(" IDENT ":" term ")" "=>" term
//!           | "(" term ")"
//! ```
//!
//! Comments are `(; ... ;)` and nest. Identifiers match
//! `[A-Za-z_][A-Za-z0-9_']*`; `Type` and `def` are reserved.

mod lexer;
mod parser;
mod printer;

use thiserror::Error;

use crate::rewriting::RuleError;

pub use lexer::Pos;
pub use parser::{parse_file, parse_source, parse_term, SourceEntry, SourceFile, Span};
pub use printer::{print_entries, print_entry, print_term, print_term_in};

#[derive(Clone, Debug, PartialEq, Eq, Error)]
pub enum ParseErrorKind {
    #[error("expected {}, found {found}", expected.join(" or "))]
    Unexpected {
        expected: Vec<String>,
        found: String,
    },
    #[error("unterminated comment")]
    UnterminatedComment,
    #[error("invalid character `{0}`")]
    InvalidCharacter(char),
    #[error("invalid rewrite rule: {0}")]
    BadRule(RuleError),
}

#[derive(Clone, Debug, PartialEq, Eq, Error)]
#[error("{pos}: {kind}")]
pub struct ParseError {
    pub pos: Pos,
    pub kind: ParseErrorKind,
}

impl ParseError {
    pub(crate) fn new(pos: Pos, kind: ParseErrorKind) -> ParseError {
        ParseError { pos, kind }
    }
}

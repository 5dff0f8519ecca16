use std::path::PathBuf;

use super::lexer::{tokenize, Pos, Tok, Token};
use super::{ParseError, ParseErrorKind};
use crate::kernel::{Name, Term};
use crate::rewriting::{Pattern, RewriteRule, RuleVar};
use crate::signature::Entry;

/// Source region of an entry, from its first token to its terminating `.`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Span {
    pub start: Pos,
    pub end: Pos,
}

#[derive(Clone, Debug, PartialEq)]
pub struct SourceEntry {
    pub entry: Entry,
    pub span: Span,
}

/// A parsed `.lpm` file.
#[derive(Clone, Debug, PartialEq)]
pub struct SourceFile {
    pub path: Option<PathBuf>,
    pub items: Vec<SourceEntry>,
}

impl SourceFile {
    pub fn entries(&self) -> Vec<Entry> {
        self.items.iter().map(|i| i.entry.clone()).collect()
    }
}

pub fn parse_source(path: Option<PathBuf>, text: &str) -> Result<SourceFile, ParseError> {
    let mut p = Parser::new(text)?;
    let mut items = Vec::new();
    while p.peek() != &Tok::Eof {
        let start = p.tokens[p.at].start;
        let entry = p.item()?;
        let end = p.tokens[p.at - 1].end;
        items.push(SourceEntry {
            entry,
            span: Span { start, end },
        });
    }
    Ok(SourceFile { path, items })
}

pub fn parse_file(text: &str) -> Result<Vec<Entry>, ParseError> {
    Ok(parse_source(None, text)?.entries())
}

/// Parses a single term. Every free identifier becomes a constant.
pub fn parse_term(text: &str) -> Result<Term, ParseError> {
    let mut p = Parser::new(text)?;
    let t = p.term()?;
    p.expect(Tok::Eof, &["end of input"])?;
    Ok(t)
}

struct Parser {
    tokens: Vec<Token>,
    at: usize,
    /// Bound names, outermost first.
    scope: Vec<Name>,
}

impl Parser {
    fn new(text: &str) -> Result<Parser, ParseError> {
        Ok(Parser {
            tokens: tokenize(text)?,
            at: 0,
            scope: Vec::new(),
        })
    }

    fn peek(&self) -> &Tok {
        &self.tokens[self.at].tok
    }

    fn peek_at(&self, k: usize) -> &Tok {
        let i = (self.at + k).min(self.tokens.len() - 1);
        &self.tokens[i].tok
    }

    fn pos(&self) -> Pos {
        self.tokens[self.at].start
    }

    fn advance(&mut self) -> Token {
        let t = self.tokens[self.at].clone();
        if t.tok != Tok::Eof {
            self.at += 1;
        }
        t
    }

    fn unexpected(&self, expected: &[&str]) -> ParseError {
        ParseError::new(
            self.pos(),
            ParseErrorKind::Unexpected {
                expected: expected.iter().map(|s| s.to_string()).collect(),
                found: self.peek().to_string(),
            },
        )
    }

    fn expect(&mut self, tok: Tok, expected: &[&str]) -> Result<Token, ParseError> {
        if *self.peek() == tok {
            Ok(self.advance())
        } else {
            Err(self.unexpected(expected))
        }
    }

    fn ident(&mut self) -> Result<Name, ParseError> {
        match self.peek().clone() {
            Tok::Ident(s) => {
                self.advance();
                Ok(s.as_str().into())
            }
            _ => Err(self.unexpected(&["identifier"])),
        }
    }

    fn item(&mut self) -> Result<Entry, ParseError> {
        match self.peek() {
            Tok::Def => {
                self.advance();
                let name = self.ident()?;
                self.expect(Tok::Colon, &["`:`"])?;
                let ty = self.term()?;
                self.expect(Tok::ColonEq, &["`:=`"])?;
                let body = self.term()?;
                self.expect(Tok::Dot, &["`.`"])?;
                Ok(Entry::Definition { name, ty, body })
            }
            Tok::LBracket => self.rule(),
            Tok::Ident(_) => {
                let name = self.ident()?;
                self.expect(Tok::Colon, &["`:`"])?;
                let ty = self.term()?;
                self.expect(Tok::Dot, &["`.`"])?;
                Ok(Entry::Declaration { name, ty })
            }
            _ => Err(self.unexpected(&["identifier", "`def`", "`[`"])),
        }
    }

    fn rule(&mut self) -> Result<Entry, ParseError> {
        let start = self.pos();
        self.expect(Tok::LBracket, &["`[`"])?;
        let vars = self.rule_vars()?;
        debug_assert!(self.scope.is_empty());
        self.scope = vars.iter().map(|v| v.name.clone()).collect();
        let result = self.rule_sides(start, vars);
        self.scope.clear();
        result
    }

    /// `a, b : T, c : U ]`. Each group's type is written in the scope of
    /// the variables before the group.
    fn rule_vars(&mut self) -> Result<Vec<RuleVar>, ParseError> {
        let mut vars: Vec<RuleVar> = Vec::new();
        let mut pending: Vec<Name> = Vec::new();
        if self.peek() == &Tok::RBracket {
            self.advance();
            return Ok(vars);
        }
        loop {
            pending.push(self.ident()?);
            match self.peek() {
                Tok::Comma => {
                    self.advance();
                }
                Tok::Colon => {
                    self.advance();
                    self.scope = vars.iter().map(|v| v.name.clone()).collect();
                    let ty = self.term();
                    self.scope.clear();
                    let ty = ty?;
                    for (k, name) in pending.drain(..).enumerate() {
                        vars.push(RuleVar {
                            name,
                            ty: Some(ty.shift(k as isize, 0)),
                        });
                    }
                    match self.peek() {
                        Tok::Comma => {
                            self.advance();
                        }
                        Tok::RBracket => {
                            self.advance();
                            return Ok(vars);
                        }
                        _ => return Err(self.unexpected(&["`,`", "`]`"])),
                    }
                }
                Tok::RBracket => {
                    self.advance();
                    vars.extend(pending.drain(..).map(|name| RuleVar { name, ty: None }));
                    return Ok(vars);
                }
                _ => return Err(self.unexpected(&["`,`", "`:`", "`]`"])),
            }
        }
    }

    fn rule_sides(&mut self, start: Pos, vars: Vec<RuleVar>) -> Result<Entry, ParseError> {
        let lhs_pos = self.pos();
        let lhs = self.term()?;
        self.expect(Tok::LongArrow, &["`-->`"])?;
        let rhs = self.term()?;
        self.expect(Tok::Dot, &["`.`"])?;
        let pattern = Pattern::from_term(&lhs, &self.scope)
            .map_err(|e| ParseError::new(lhs_pos, ParseErrorKind::BadRule(e)))?;
        let rule = RewriteRule::new(vars, pattern, rhs)
            .map_err(|e| ParseError::new(start, ParseErrorKind::BadRule(e)))?;
        Ok(Entry::Rule(rule))
    }

    /// `(x : A) -> ...` or `(x : A) => ...` starts here.
    fn binder_ahead(&self) -> bool {
        self.peek() == &Tok::LParen
            && matches!(self.peek_at(1), Tok::Ident(_))
            && self.peek_at(2) == &Tok::Colon
    }

    fn term(&mut self) -> Result<Term, ParseError> {
        if self.binder_ahead() {
            self.advance();
            let name = self.ident()?;
            self.expect(Tok::Colon, &["`:`"])?;
            let domain = self.term()?;
            self.expect(Tok::RParen, &["`)`"])?;
            let is_pi = match self.peek() {
                Tok::Arrow => true,
                Tok::FatArrow => false,
                _ => return Err(self.unexpected(&["`->`", "`=>`"])),
            };
            self.advance();
            self.scope.push(name.clone());
            let body = self.term();
            self.scope.pop();
            let body = body?;
            return Ok(if is_pi {
                Term::Pi(name, domain.into(), body.into())
            } else {
                Term::Lam(name, domain.into(), body.into())
            });
        }
        let lhs = self.application()?;
        if self.peek() == &Tok::Arrow {
            self.advance();
            let rhs = self.term()?;
            return Ok(Term::arrow(lhs, rhs));
        }
        Ok(lhs)
    }

    fn starts_atom(&self) -> bool {
        matches!(self.peek(), Tok::Type | Tok::Ident(_) | Tok::LParen) && !self.binder_ahead()
    }

    fn application(&mut self) -> Result<Term, ParseError> {
        let mut t = self.atom()?;
        while self.starts_atom() {
            let a = self.atom()?;
            t = Term::app(t, a);
        }
        Ok(t)
    }

    fn atom(&mut self) -> Result<Term, ParseError> {
        match self.peek().clone() {
            Tok::Type => {
                self.advance();
                Ok(Term::TYPE)
            }
            Tok::Ident(s) => {
                self.advance();
                Ok(self.resolve(&s))
            }
            Tok::LParen if !self.binder_ahead() => {
                self.advance();
                let t = self.term()?;
                self.expect(Tok::RParen, &["`)`"])?;
                Ok(t)
            }
            _ => Err(self.unexpected(&["identifier", "`Type`", "`(`"])),
        }
    }

    fn resolve(&self, s: &str) -> Term {
        match self.scope.iter().rposition(|n| &**n == s) {
            Some(pos) => Term::Var(self.scope.len() - 1 - pos, s.into()),
            None => Term::Const(s.into()),
        }
    }
}

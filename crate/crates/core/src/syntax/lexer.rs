use std::fmt;

use super::{ParseError, ParseErrorKind};

/// 1-based line and column.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Pos {
    pub line: usize,
    pub col: usize,
}

impl fmt::Display for Pos {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}:{}", self.line, self.col)
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Tok {
    Ident(String),
    Type,
    Def,
    Colon,
    ColonEq,
    Dot,
    Arrow,
    FatArrow,
    LongArrow,
    LParen,
    RParen,
    LBracket,
    RBracket,
    Comma,
    Eof,
}

impl fmt::Display for Tok {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Tok::Ident(s) => write!(f, "identifier `{s}`"),
            Tok::Eof => f.write_str("end of input"),
            other => write!(f, "`{}`", other.text()),
        }
    }
}

impl Tok {
    pub fn text(&self) -> &str {
        match self {
            Tok::Ident(s) => s,
            Tok::Type => "Type",
            Tok::Def => "def",
            Tok::Colon => ":",
            Tok::ColonEq => ":=",
            Tok::Dot => ".",
            Tok::Arrow => "->",
            Tok::FatArrow => "=>",
            Tok::LongArrow => "-->",
            Tok::LParen => "(",
            Tok::RParen => ")",
            Tok::LBracket => "[",
            Tok::RBracket => "]",
            Tok::Comma => ",",
            Tok::Eof => "",
        }
    }
}

#[derive(Clone, Debug)]
pub struct Token {
    pub tok: Tok,
    pub start: Pos,
    pub end: Pos,
}

pub fn is_ident_start(c: char) -> bool {
    c.is_ascii_alphabetic() || c == '_'
}

pub fn is_ident_char(c: char) -> bool {
    c.is_ascii_alphanumeric() || c == '_' || c == '\''
}

struct Lexer<'a> {
    chars: std::iter::Peekable<std::str::Chars<'a>>,
    pos: Pos,
}

impl Lexer<'_> {
    fn peek(&mut self) -> Option<char> {
        self.chars.peek().copied()
    }

    fn bump(&mut self) -> Option<char> {
        let c = self.chars.next()?;
        if c == '\n' {
            self.pos.line += 1;
            self.pos.col = 1;
        } else {
            self.pos.col += 1;
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

    /// Skips a nestable `(; ... ;)` comment whose opening `(` was consumed
    /// and whose `;` is next.
    fn skip_comment(&mut self, start: Pos) -> Result<(), ParseError> {
        self.bump();
        let mut depth = 1;
        while depth > 0 {
            match self.bump() {
                None => return Err(ParseError::new(start, ParseErrorKind::UnterminatedComment)),
                Some('(') if self.eat(';') => depth += 1,
                Some(';') if self.eat(')') => depth -= 1,
                Some(_) => {}
            }
        }
        Ok(())
    }
}

pub fn tokenize(text: &str) -> Result<Vec<Token>, ParseError> {
    let mut lx = Lexer {
        chars: text.chars().peekable(),
        pos: Pos { line: 1, col: 1 },
    };
    let mut out = Vec::new();
    loop {
        let start = lx.pos;
        let Some(c) = lx.bump() else {
            out.push(Token {
                tok: Tok::Eof,
                start,
                end: start,
            });
            return Ok(out);
        };
        let tok = match c {
            c if c.is_whitespace() => continue,
            '(' if lx.peek() == Some(';') => {
                lx.skip_comment(start)?;
                continue;
            }
            '(' => Tok::LParen,
            ')' => Tok::RParen,
            '[' => Tok::LBracket,
            ']' => Tok::RBracket,
            ',' => Tok::Comma,
            '.' => Tok::Dot,
            ':' if lx.eat('=') => Tok::ColonEq,
            ':' => Tok::Colon,
            '=' if lx.eat('>') => Tok::FatArrow,
            '-' if lx.eat('-') => {
                if lx.eat('>') {
                    Tok::LongArrow
                } else {
                    return Err(ParseError::new(
                        start,
                        ParseErrorKind::InvalidCharacter('-'),
                    ));
                }
            }
            '-' if lx.eat('>') => Tok::Arrow,
            c if is_ident_start(c) => {
                let mut s = String::from(c);
                while let Some(c) = lx.peek().filter(|c| is_ident_char(*c)) {
                    s.push(c);
                    lx.bump();
                }
                match s.as_str() {
                    "Type" => Tok::Type,
                    "def" => Tok::Def,
                    _ => Tok::Ident(s),
                }
            }
            other => {
                return Err(ParseError::new(
                    start,
                    ParseErrorKind::InvalidCharacter(other),
                ))
            }
        };
        out.push(Token {
            tok,
            start,
            end: lx.pos,
        });
    }
}

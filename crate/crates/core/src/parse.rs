//! Reader for the textual program format.
//!
//! ```text
//! % comment
//! a | b :- c, not d.
//! fact.
//! :- a, not b.
//! ```

use std::collections::BTreeSet;

use thiserror::Error;

use crate::atom::{Atom, AtomError};
use crate::program::{Program, Rule};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ParseError {
    #[error("{line}:{col}: {message}")]
    Syntax {
        line: usize,
        col: usize,
        message: String,
    },
    #[error("{line}:{col}: atom `{atom}` uses a reserved prefix")]
    Reserved {
        line: usize,
        col: usize,
        atom: String,
    },
    #[error("{line}:{col}: empty rule")]
    EmptyRule { line: usize, col: usize },
}

#[derive(Clone, Copy, Debug, Default)]
pub struct ParseOptions {
    /// Accept marked and reserved atoms such as `p__a` or `__f`, as printed
    /// by the transformations.
    pub allow_reserved: bool,
}

#[derive(Clone, Debug, PartialEq)]
enum Tok {
    Ident(String),
    Pipe,
    If,
    Comma,
    Dot,
    Eof,
}

#[derive(Clone, Copy, Debug)]
struct Pos {
    line: usize,
    col: usize,
}

struct Lexer<'a> {
    chars: std::iter::Peekable<std::str::Chars<'a>>,
    line: usize,
    col: usize,
}

impl Lexer<'_> {
    fn bump(&mut self) -> Option<char> {
        let c = self.chars.next();
        if c == Some('\n') {
            self.line += 1;
            self.col = 1;
        } else if c.is_some() {
            self.col += 1;
        }
        c
    }

    fn pos(&self) -> Pos {
        Pos {
            line: self.line,
            col: self.col,
        }
    }
}

fn tokenize(text: &str) -> Result<Vec<(Tok, Pos)>, ParseError> {
    let mut out = Vec::new();
    let mut lx = Lexer {
        chars: text.chars().peekable(),
        line: 1,
        col: 1,
    };
    while let Some(&c) = lx.chars.peek() {
        let pos = lx.pos();
        let single = match c {
            '|' => Some(Tok::Pipe),
            ',' => Some(Tok::Comma),
            '.' => Some(Tok::Dot),
            _ => None,
        };
        if let Some(tok) = single {
            lx.bump();
            out.push((tok, pos));
            continue;
        }
        match c {
            '%' => {
                while matches!(lx.chars.peek(), Some(&c) if c != '\n') {
                    lx.bump();
                }
            }
            c if c.is_whitespace() => {
                lx.bump();
            }
            ':' => {
                lx.bump();
                if lx.bump() != Some('-') {
                    return Err(ParseError::Syntax {
                        line: pos.line,
                        col: pos.col,
                        message: "expected `:-`".to_string(),
                    });
                }
                out.push((Tok::If, pos));
            }
            c if c.is_ascii_alphanumeric() || c == '_' => {
                let mut ident = String::new();
                while let Some(&c) = lx.chars.peek() {
                    if !(c.is_ascii_alphanumeric() || c == '_') {
                        break;
                    }
                    ident.push(c);
                    lx.bump();
                }
                out.push((Tok::Ident(ident), pos));
            }
            other => {
                return Err(ParseError::Syntax {
                    line: pos.line,
                    col: pos.col,
                    message: format!("unexpected character `{other}`"),
                })
            }
        }
    }
    out.push((Tok::Eof, lx.pos()));
    Ok(out)
}

struct Parser {
    toks: Vec<(Tok, Pos)>,
    at: usize,
    options: ParseOptions,
}

impl Parser {
    fn peek(&self) -> &Tok {
        &self.toks[self.at].0
    }

    fn peek_at(&self, offset: usize) -> &Tok {
        let i = (self.at + offset).min(self.toks.len() - 1);
        &self.toks[i].0
    }

    fn pos(&self) -> Pos {
        self.toks[self.at].1
    }

    fn advance(&mut self) -> Tok {
        let tok = self.toks[self.at].0.clone();
        if self.at + 1 < self.toks.len() {
            self.at += 1;
        }
        tok
    }

    fn error(&self, message: impl Into<String>) -> ParseError {
        let Pos { line, col } = self.pos();
        ParseError::Syntax {
            line,
            col,
            message: message.into(),
        }
    }

    fn atom(&mut self) -> Result<Atom, ParseError> {
        let Pos { line, col } = self.pos();
        match self.advance() {
            Tok::Ident(name) if name == "not" => Err(ParseError::Syntax {
                line,
                col,
                message: "`not` is a keyword, not an atom".to_string(),
            }),
            Tok::Ident(name) => {
                let result = if self.options.allow_reserved {
                    Atom::from_rendered(&name)
                } else {
                    Atom::plain(&name)
                };
                result.map_err(|e| match e {
                    AtomError::Reserved(atom) => ParseError::Reserved { line, col, atom },
                    AtomError::Invalid(atom) => ParseError::Syntax {
                        line,
                        col,
                        message: format!("`{atom}` is not a valid atom name"),
                    },
                })
            }
            _ => Err(ParseError::Syntax {
                line,
                col,
                message: "expected an atom".to_string(),
            }),
        }
    }

    fn body(&mut self) -> Result<(BTreeSet<Atom>, BTreeSet<Atom>), ParseError> {
        let mut pos = BTreeSet::new();
        let mut neg = BTreeSet::new();
        loop {
            let negated = matches!(self.peek(), Tok::Ident(s) if s == "not")
                && matches!(self.peek_at(1), Tok::Ident(_));
            if negated {
                self.advance();
                neg.insert(self.atom()?);
            } else {
                pos.insert(self.atom()?);
            }
            let err = self.error("expected `,` or `.`");
            match self.advance() {
                Tok::Comma => continue,
                Tok::Dot => return Ok((pos, neg)),
                _ => return Err(err),
            }
        }
    }

    fn rule(&mut self) -> Result<Rule, ParseError> {
        let Pos { line, col } = self.pos();
        match self.peek() {
            Tok::Dot => return Err(ParseError::EmptyRule { line, col }),
            Tok::If => {
                self.advance();
                if *self.peek() == Tok::Dot {
                    return Err(ParseError::EmptyRule { line, col });
                }
                let (pos, neg) = self.body()?;
                return Ok(Rule::constraint(pos, neg));
            }
            _ => {}
        }
        let mut head = BTreeSet::new();
        head.insert(self.atom()?);
        loop {
            let err = self.error("expected `|`, `:-` or `.`");
            match self.advance() {
                Tok::Pipe => {
                    head.insert(self.atom()?);
                }
                Tok::Dot => return Ok(Rule::new(head, [], [])),
                Tok::If => {
                    let (pos, neg) = self.body()?;
                    return Ok(Rule::new(head, pos, neg));
                }
                _ => return Err(err),
            }
        }
    }
}

/// Parses a program written with user-level atoms only.
pub fn parse_program(text: &str) -> Result<Program, ParseError> {
    parse_program_with(text, ParseOptions::default())
}

pub fn parse_program_with(text: &str, options: ParseOptions) -> Result<Program, ParseError> {
    let mut parser = Parser {
        toks: tokenize(text)?,
        at: 0,
        options,
    };
    let mut program = Program::default();
    while *parser.peek() != Tok::Eof {
        program.push(parser.rule()?);
    }
    Ok(program)
}

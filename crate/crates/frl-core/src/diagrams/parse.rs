//! Concrete syntax for diagram terms.
//!
//! ```text
//! term   := tensor (';' tensor)*          left-associative
//! tensor := atom ('*' atom)*              left-associative
//! atom   := generator | '(' term ')'
//! ```
//!
//! `;` binds looser than `*`. The printer emits the minimal parentheses that
//! reparse to the same tree, so `parse ∘ print` is the identity on terms.

use super::{DiagramError, Generator, Term};
use crate::finrel::Polarity;
use std::fmt;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
enum Token {
    Gen(Generator),
    Swap,
    Pol(Polarity),
    LParen,
    RParen,
    Comma,
    Seq,
    Tensor,
}

struct Lexer<'a> {
    input: &'a str,
    bytes: &'a [u8],
    pos: usize,
}

impl<'a> Lexer<'a> {
    fn new(input: &'a str) -> Lexer<'a> {
        Lexer { input, bytes: input.as_bytes(), pos: 0 }
    }

    fn error(&self, pos: usize, message: impl Into<String>) -> DiagramError {
        DiagramError::Parse { pos, message: message.into() }
    }

    fn next(&mut self) -> Result<Option<(usize, Token)>, DiagramError> {
        while self.pos < self.bytes.len() && self.bytes[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
        if self.pos >= self.bytes.len() {
            return Ok(None);
        }
        let start = self.pos;
        let tok = match self.bytes[self.pos] {
            b'(' => {
                self.pos += 1;
                Token::LParen
            }
            b')' => {
                self.pos += 1;
                Token::RParen
            }
            b',' => {
                self.pos += 1;
                Token::Comma
            }
            b';' => {
                self.pos += 1;
                Token::Seq
            }
            b'*' => {
                self.pos += 1;
                Token::Tensor
            }
            b'+' => {
                self.pos += 1;
                Token::Pol(Polarity::Pos)
            }
            b'-' => {
                self.pos += 1;
                Token::Pol(Polarity::Neg)
            }
            c if c.is_ascii_alphabetic() => {
                while self.pos < self.bytes.len()
                    && (self.bytes[self.pos].is_ascii_alphanumeric())
                {
                    self.pos += 1;
                }
                let word = &self.input[start..self.pos];
                match word {
                    "mu3" => Token::Gen(Generator::Mu3),
                    "comu3" => Token::Gen(Generator::Comu3),
                    "cup" => Token::Gen(Generator::Cup),
                    "cupx" => Token::Gen(Generator::CupX),
                    "cap" => Token::Gen(Generator::Cap),
                    "capx" => Token::Gen(Generator::CapX),
                    "swap" => Token::Swap,
                    "id" => {
                        // `id+` / `id-`: the sign is part of the name.
                        match self.bytes.get(self.pos) {
                            Some(b'+') => {
                                self.pos += 1;
                                Token::Gen(Generator::IdPos)
                            }
                            Some(b'-') => {
                                self.pos += 1;
                                Token::Gen(Generator::IdNeg)
                            }
                            _ => return Err(self.error(start, "expected `id+` or `id-`")),
                        }
                    }
                    other => return Err(self.error(start, format!("unknown generator `{other}`"))),
                }
            }
            c => return Err(self.error(start, format!("unexpected character `{}`", c as char))),
        };
        Ok(Some((start, tok)))
    }
}

struct Parser {
    tokens: Vec<(usize, Token)>,
    index: usize,
    input_len: usize,
}

impl Parser {
    fn peek(&self) -> Option<Token> {
        self.tokens.get(self.index).map(|&(_, t)| t)
    }

    fn here(&self) -> usize {
        self.tokens
            .get(self.index)
            .map(|&(p, _)| p)
            .unwrap_or(self.input_len)
    }

    fn bump(&mut self) -> Option<Token> {
        let t = self.peek();
        if t.is_some() {
            self.index += 1;
        }
        t
    }

    fn expect(&mut self, want: Token, what: &str) -> Result<(), DiagramError> {
        let pos = self.here();
        match self.bump() {
            Some(t) if t == want => Ok(()),
            _ => Err(DiagramError::Parse { pos, message: format!("expected {what}") }),
        }
    }

    fn term(&mut self) -> Result<Term, DiagramError> {
        let mut t = self.tensor()?;
        while self.peek() == Some(Token::Seq) {
            self.bump();
            t = t.then(self.tensor()?);
        }
        Ok(t)
    }

    fn tensor(&mut self) -> Result<Term, DiagramError> {
        let mut t = self.atom()?;
        while self.peek() == Some(Token::Tensor) {
            self.bump();
            t = t.beside(self.atom()?);
        }
        Ok(t)
    }

    fn polarity(&mut self) -> Result<Polarity, DiagramError> {
        let pos = self.here();
        match self.bump() {
            Some(Token::Pol(p)) => Ok(p),
            _ => Err(DiagramError::Parse { pos, message: "expected `+` or `-`".into() }),
        }
    }

    fn atom(&mut self) -> Result<Term, DiagramError> {
        let pos = self.here();
        match self.bump() {
            Some(Token::Gen(g)) => Ok(Term::Gen(g)),
            Some(Token::Swap) => {
                self.expect(Token::LParen, "`(` after swap")?;
                let p = self.polarity()?;
                self.expect(Token::Comma, "`,` between swap polarities")?;
                let q = self.polarity()?;
                self.expect(Token::RParen, "`)` closing swap")?;
                Ok(Term::Gen(Generator::Swap(p, q)))
            }
            Some(Token::LParen) => {
                let t = self.term()?;
                self.expect(Token::RParen, "closing `)`")?;
                Ok(t)
            }
            _ => Err(DiagramError::Parse { pos, message: "expected a generator or `(`".into() }),
        }
    }
}

pub(super) fn parse(input: &str) -> Result<Term, DiagramError> {
    let mut lexer = Lexer::new(input);
    let mut tokens = Vec::new();
    while let Some(tok) = lexer.next()? {
        tokens.push(tok);
    }
    let mut parser = Parser { tokens, index: 0, input_len: input.len() };
    let term = parser.term()?;
    if parser.index != parser.tokens.len() {
        return Err(DiagramError::Parse {
            pos: parser.here(),
            message: "trailing input after term".into(),
        });
    }
    Ok(term)
}

impl fmt::Display for Generator {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Generator::Mu3 => write!(f, "mu3"),
            Generator::Comu3 => write!(f, "comu3"),
            Generator::Cup => write!(f, "cup"),
            Generator::CupX => write!(f, "cupx"),
            Generator::Cap => write!(f, "cap"),
            Generator::CapX => write!(f, "capx"),
            Generator::IdPos => write!(f, "id+"),
            Generator::IdNeg => write!(f, "id-"),
            Generator::Swap(p, q) => write!(f, "swap({},{})", p.symbol(), q.symbol()),
        }
    }
}

/// Precedence levels: `;` at 0, `*` at 1, atoms at 2. A child is wrapped in
/// parentheses when its own level is below what its position requires.
fn fmt_prec(t: &Term, min: u8, f: &mut fmt::Formatter<'_>) -> fmt::Result {
    let level = match t {
        Term::Seq(_, _) => 0,
        Term::Tensor(_, _) => 1,
        Term::Gen(_) => 2,
    };
    if level < min {
        write!(f, "(")?;
    }
    match t {
        Term::Gen(g) => write!(f, "{g}")?,
        Term::Seq(l, r) => {
            fmt_prec(l, 0, f)?;
            write!(f, " ; ")?;
            fmt_prec(r, 1, f)?;
        }
        Term::Tensor(l, r) => {
            fmt_prec(l, 1, f)?;
            write!(f, " * ")?;
            fmt_prec(r, 2, f)?;
        }
    }
    if level < min {
        write!(f, ")")?;
    }
    Ok(())
}

impl fmt::Display for Term {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt_prec(self, 0, f)
    }
}

//! Recursive-descent parser for the term and formula DSL.
//!
//! ```text
//! formula := quant | impl
//! quant   := ("exists" | "forall") ident "." formula
//! impl    := or {"->" or}          (right-associative)
//! or      := and {"|" and}
//! and     := unary {"&" unary}
//! unary   := "!" unary | atom
//! atom    := term "=" term | "(" formula ")"
//! term    := ident | ident "(" [term {"," term}] ")"
//! ```
//!
//! Bare identifiers parse as variables; [`parse_formula_in`] then reads the
//! ones naming constants of a signature as constants.

use crate::algebra::Signature;
use crate::error::{Error, Position, Result};
use crate::formula::Formula;
use crate::term::Term;

#[derive(Debug, Clone, PartialEq)]
enum Tok {
    Ident(String),
    LParen,
    RParen,
    Comma,
    Dot,
    Equals,
    Bang,
    Amp,
    Pipe,
    Arrow,
    End,
}

impl Tok {
    fn describe(&self) -> String {
        match self {
            Tok::Ident(s) => format!("`{s}`"),
            Tok::LParen => "`(`".into(),
            Tok::RParen => "`)`".into(),
            Tok::Comma => "`,`".into(),
            Tok::Dot => "`.`".into(),
            Tok::Equals => "`=`".into(),
            Tok::Bang => "`!`".into(),
            Tok::Amp => "`&`".into(),
            Tok::Pipe => "`|`".into(),
            Tok::Arrow => "`->`".into(),
            Tok::End => "end of input".into(),
        }
    }
}

fn tokenize(text: &str) -> Result<Vec<(Tok, Position)>> {
    let mut out = Vec::new();
    let mut line = 1;
    let mut col = 1;
    let mut chars = text.chars().peekable();
    while let Some(&c) = chars.peek() {
        let pos = Position { line, column: col };
        let mut advance = |chars: &mut std::iter::Peekable<std::str::Chars>| {
            let c = chars.next().expect("peeked");
            if c == '\n' {
                line += 1;
                col = 1;
            } else {
                col += 1;
            }
        };
        if c.is_whitespace() {
            advance(&mut chars);
            continue;
        }
        if c.is_ascii_alphabetic() || c == '_' {
            let mut ident = String::new();
            while let Some(&d) = chars.peek() {
                if d.is_ascii_alphanumeric() || d == '_' {
                    ident.push(d);
                    advance(&mut chars);
                } else {
                    break;
                }
            }
            out.push((Tok::Ident(ident), pos));
            continue;
        }
        let tok = match c {
            '(' => Tok::LParen,
            ')' => Tok::RParen,
            ',' => Tok::Comma,
            '.' => Tok::Dot,
            '=' => Tok::Equals,
            '!' => Tok::Bang,
            '&' => Tok::Amp,
            '|' => Tok::Pipe,
            '-' => {
                advance(&mut chars);
                if chars.peek() == Some(&'>') {
                    advance(&mut chars);
                    out.push((Tok::Arrow, pos));
                    continue;
                }
                return Err(Error::Syntax {
                    pos,
                    msg: "expected `->`".into(),
                });
            }
            other => {
                return Err(Error::Syntax {
                    pos,
                    msg: format!("unexpected character {other:?}"),
                })
            }
        };
        advance(&mut chars);
        out.push((tok, pos));
    }
    out.push((Tok::End, Position { line, column: col }));
    Ok(out)
}

struct Parser {
    toks: Vec<(Tok, Position)>,
    at: usize,
}

impl Parser {
    fn new(text: &str) -> Result<Self> {
        Ok(Parser {
            toks: tokenize(text)?,
            at: 0,
        })
    }

    fn peek(&self) -> &Tok {
        &self.toks[self.at].0
    }

    fn pos(&self) -> Position {
        self.toks[self.at].1
    }

    fn bump(&mut self) -> Tok {
        let t = self.toks[self.at].0.clone();
        if t != Tok::End {
            self.at += 1;
        }
        t
    }

    fn fail<T>(&self, expected: &str) -> Result<T> {
        Err(Error::Syntax {
            pos: self.pos(),
            msg: format!("expected {expected}, found {}", self.peek().describe()),
        })
    }

    fn expect(&mut self, tok: Tok) -> Result<()> {
        if *self.peek() == tok {
            self.bump();
            Ok(())
        } else {
            self.fail(&tok.describe())
        }
    }

    fn finish(&self) -> Result<()> {
        if *self.peek() == Tok::End {
            Ok(())
        } else {
            self.fail("end of input")
        }
    }

    fn ident(&mut self) -> Result<String> {
        match self.peek().clone() {
            Tok::Ident(s) if !is_keyword(&s) => {
                self.bump();
                Ok(s)
            }
            _ => self.fail("an identifier"),
        }
    }

    fn formula(&mut self) -> Result<Formula> {
        if let Tok::Ident(kw) = self.peek() {
            if kw == "exists" || kw == "forall" {
                let universal = kw == "forall";
                self.bump();
                let var = self.ident()?;
                self.expect(Tok::Dot)?;
                let body = self.formula()?;
                return Ok(if universal {
                    Formula::forall(var, body)
                } else {
                    Formula::exists(var, body)
                });
            }
        }
        self.implication()
    }

    fn implication(&mut self) -> Result<Formula> {
        let lhs = self.disjunction()?;
        if *self.peek() == Tok::Arrow {
            self.bump();
            let rhs = self.implication()?;
            return Ok(Formula::implies(lhs, rhs));
        }
        Ok(lhs)
    }

    fn disjunction(&mut self) -> Result<Formula> {
        let mut acc = self.conjunction()?;
        while *self.peek() == Tok::Pipe {
            self.bump();
            acc = Formula::or(acc, self.conjunction()?);
        }
        Ok(acc)
    }

    fn conjunction(&mut self) -> Result<Formula> {
        let mut acc = self.unary()?;
        while *self.peek() == Tok::Amp {
            self.bump();
            acc = Formula::and(acc, self.unary()?);
        }
        Ok(acc)
    }

    fn unary(&mut self) -> Result<Formula> {
        if *self.peek() == Tok::Bang {
            self.bump();
            return Ok(Formula::not(self.unary()?));
        }
        self.atom()
    }

    fn atom(&mut self) -> Result<Formula> {
        match self.peek() {
            Tok::LParen => {
                self.bump();
                let f = self.formula()?;
                self.expect(Tok::RParen)?;
                Ok(f)
            }
            Tok::Ident(kw) if is_keyword(kw) => self.fail("an equality or `(` (parenthesize quantified subformulas)"),
            Tok::Ident(_) => {
                let w = self.term()?;
                self.expect(Tok::Equals)?;
                let w2 = self.term()?;
                Ok(Formula::eq(w, w2))
            }
            _ => self.fail("an equality, `!` or `(`"),
        }
    }

    fn term(&mut self) -> Result<Term> {
        let name = self.ident()?;
        if *self.peek() != Tok::LParen {
            return Ok(Term::Var(name));
        }
        self.bump();
        let mut args = Vec::new();
        if *self.peek() != Tok::RParen {
            args.push(self.term()?);
            while *self.peek() == Tok::Comma {
                self.bump();
                args.push(self.term()?);
            }
        }
        self.expect(Tok::RParen)?;
        Ok(Term::App(name, args))
    }
}

fn is_keyword(s: &str) -> bool {
    s == "exists" || s == "forall"
}

pub fn parse_term(text: &str) -> Result<Term> {
    let mut p = Parser::new(text)?;
    let t = p.term()?;
    p.finish()?;
    Ok(t)
}

pub fn parse_formula(text: &str) -> Result<Formula> {
    let mut p = Parser::new(text)?;
    let f = p.formula()?;
    p.finish()?;
    Ok(f)
}

/// Parses, resolves constants against `signature`, and checks arities.
pub fn parse_formula_in(text: &str, signature: &Signature) -> Result<Formula> {
    let f = parse_formula(text)?.resolve_constants(signature);
    f.check(signature)?;
    Ok(f)
}

pub fn parse_term_in(text: &str, signature: &Signature) -> Result<Term> {
    let t = parse_term(text)?.resolve_constants(signature, &[]);
    t.check(signature)?;
    Ok(t)
}

/// `name = term` bindings separated by `,` or `;`, e.g. `y=add(x,x); z=e`.
pub fn parse_bindings(text: &str, signature: &Signature) -> Result<Vec<(String, Term)>> {
    let mut p = Parser::new(&text.replace(';', ","))?;
    let mut out = Vec::new();
    while *p.peek() != Tok::End {
        let name = p.ident()?;
        p.expect(Tok::Equals)?;
        let t = p.term()?.resolve_constants(signature, &[]);
        t.check(signature)?;
        out.push((name, t));
        if *p.peek() == Tok::Comma {
            p.bump();
        }
    }
    Ok(out)
}

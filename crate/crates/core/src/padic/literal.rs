//! Exact literal grammar for field elements:
//!
//! ```text
//! expr   := term (('+' | '-') term)*
//! term   := factor (('*' | '/') factor)*
//! factor := ('-' | '+') factor | power
//! power  := atom ('^' ['-'] integer)?
//! atom   := integer | 'p' | 'pi' | 'x' | 'zeta(' integer ')' | 'O(pi^' integer ')' | '(' expr ')'
//! ```

use num_bigint::BigInt;

use super::element::PAdic;
use super::field::FieldSpec;
use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq)]
enum Tok {
    Int(BigInt),
    Ident(String),
    Op(char),
}

fn lex(s: &str) -> Result<Vec<Tok>> {
    let mut out = Vec::new();
    let chars: Vec<char> = s.chars().collect();
    let mut i = 0;
    while i < chars.len() {
        let c = chars[i];
        if c.is_whitespace() {
            i += 1;
        } else if c.is_ascii_digit() {
            let start = i;
            while i < chars.len() && chars[i].is_ascii_digit() {
                i += 1;
            }
            let text: String = chars[start..i].iter().collect();
            out.push(Tok::Int(text.parse().map_err(|_| Error::Parse(text.clone()))?));
        } else if c.is_ascii_alphabetic() || c == '_' {
            let start = i;
            while i < chars.len() && (chars[i].is_ascii_alphanumeric() || chars[i] == '_') {
                i += 1;
            }
            out.push(Tok::Ident(chars[start..i].iter().collect()));
        } else if "+-*/^()".contains(c) {
            out.push(Tok::Op(c));
            i += 1;
        } else {
            return Err(Error::Parse(format!("unexpected character {c:?} in {s:?}")));
        }
    }
    Ok(out)
}

struct Parser<'a> {
    field: &'a FieldSpec,
    toks: Vec<Tok>,
    pos: usize,
}

impl Parser<'_> {
    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.pos)
    }

    fn eat_op(&mut self, c: char) -> bool {
        if self.peek() == Some(&Tok::Op(c)) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn expect_op(&mut self, c: char) -> Result<()> {
        if self.eat_op(c) {
            Ok(())
        } else {
            Err(Error::Parse(format!("expected '{c}' at token {}", self.pos)))
        }
    }

    fn integer(&mut self) -> Result<i64> {
        let neg = self.eat_op('-');
        match self.toks.get(self.pos) {
            Some(Tok::Int(n)) => {
                self.pos += 1;
                let v: i64 = n
                    .try_into()
                    .map_err(|_| Error::Parse(format!("integer {n} out of range")))?;
                Ok(if neg { -v } else { v })
            }
            _ => Err(Error::Parse(format!("expected integer at token {}", self.pos))),
        }
    }

    fn expr(&mut self) -> Result<PAdic> {
        let mut acc = self.term()?;
        loop {
            if self.eat_op('+') {
                acc = acc.try_add(&self.term()?)?;
            } else if self.eat_op('-') {
                acc = acc.try_sub(&self.term()?)?;
            } else {
                return Ok(acc);
            }
        }
    }

    fn term(&mut self) -> Result<PAdic> {
        let mut acc = self.factor()?;
        loop {
            if self.eat_op('*') {
                acc = acc.try_mul(&self.factor()?)?;
            } else if self.eat_op('/') {
                acc = acc.try_div(&self.factor()?)?;
            } else {
                return Ok(acc);
            }
        }
    }

    fn factor(&mut self) -> Result<PAdic> {
        if self.eat_op('-') {
            return Ok(self.factor()?.neg());
        }
        if self.eat_op('+') {
            return self.factor();
        }
        let base = self.atom()?;
        if self.eat_op('^') {
            let k = self.integer()?;
            return base.pow(k);
        }
        Ok(base)
    }

    fn atom(&mut self) -> Result<PAdic> {
        let tok = self
            .toks
            .get(self.pos)
            .cloned()
            .ok_or_else(|| Error::Parse("unexpected end of literal".into()))?;
        self.pos += 1;
        match tok {
            Tok::Int(n) => Ok(self.field.from_bigint(&n)),
            Tok::Op('(') => {
                let v = self.expr()?;
                self.expect_op(')')?;
                Ok(v)
            }
            Tok::Ident(name) => match name.as_str() {
                "p" => Ok(self.field.from_int(self.field.p() as i64)),
                "pi" => Ok(self.field.pi()),
                "x" => Ok(self.field.unramified_generator()),
                "zeta" => {
                    self.expect_op('(')?;
                    let n = self.integer()?;
                    self.expect_op(')')?;
                    if n <= 0 {
                        return Err(Error::Parse(format!("zeta({n}) needs a positive order")));
                    }
                    self.field.root_of_unity(n as u64)
                }
                "O" => {
                    self.expect_op('(')?;
                    match self.toks.get(self.pos) {
                        Some(Tok::Ident(s)) if s == "pi" => self.pos += 1,
                        _ => return Err(Error::Parse("expected O(pi^k)".into())),
                    }
                    self.expect_op('^')?;
                    let k = self.integer()?;
                    self.expect_op(')')?;
                    Ok(self.field.zero_to(k))
                }
                other => Err(Error::Parse(format!("unknown identifier {other:?}"))),
            },
            Tok::Op(c) => Err(Error::Parse(format!("unexpected '{c}'"))),
        }
    }
}

impl FieldSpec {
    /// Parses an element literal such as `zeta(3)*pi^2 - 1/(1 + x)`.
    pub fn parse(&self, s: &str) -> Result<PAdic> {
        let toks = lex(s)?;
        if toks.is_empty() {
            return Err(Error::Parse("empty literal".into()));
        }
        let mut parser = Parser { field: self, toks, pos: 0 };
        let v = parser.expr()?;
        if parser.pos != parser.toks.len() {
            return Err(Error::Parse(format!("trailing input in {s:?}")));
        }
        Ok(v)
    }
}

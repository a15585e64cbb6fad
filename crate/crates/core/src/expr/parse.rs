//! Recursive-descent parser for the scenario expression grammar.
//!
//! ```text
//! expr    := term (('+' | '-') term)*
//! term    := unary (('*' | '/') unary)*
//! unary   := '-' unary | power
//! power   := primary ('^' integer)*
//! integer := '-'? digits | '(' '-'? digits ')'
//! primary := number | 'x' digits | func '(' expr ')' | '(' expr ')'
//! func    := 'sin' | 'cos' | 'exp'
//! ```
//!
//! Columns in errors are 1-based character positions.

use alloc::format;
use alloc::string::{String, ToString};
use alloc::vec::Vec;

use super::ScalarExpr;
use crate::error::{Error, Result};

/// Parses `text` as an expression over `x1 .. x{dim}`.
pub fn parse(text: &str, dim: usize) -> Result<ScalarExpr> {
    let mut parser = Parser {
        chars: text.chars().collect(),
        pos: 0,
        dim,
    };
    let expr = parser.expr()?;
    parser.skip_ws();
    if let Some(c) = parser.peek() {
        return Err(parser.error(format!("unexpected `{c}`")));
    }
    Ok(expr)
}

struct Parser {
    chars: Vec<char>,
    pos: usize,
    dim: usize,
}

impl Parser {
    fn peek(&self) -> Option<char> {
        self.chars.get(self.pos).copied()
    }

    fn skip_ws(&mut self) {
        while self.peek().is_some_and(char::is_whitespace) {
            self.pos += 1;
        }
    }

    fn error(&self, message: String) -> Error {
        Error::Syntax {
            column: self.pos + 1,
            message,
        }
    }

    fn eat(&mut self, c: char) -> bool {
        self.skip_ws();
        if self.peek() == Some(c) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn expect(&mut self, c: char) -> Result<()> {
        if self.eat(c) {
            Ok(())
        } else {
            let found = match self.peek() {
                Some(f) => format!("`{f}`"),
                None => "end of input".to_string(),
            };
            Err(self.error(format!("expected `{c}`, found {found}")))
        }
    }

    fn expr(&mut self) -> Result<ScalarExpr> {
        let mut lhs = self.term()?;
        loop {
            if self.eat('+') {
                lhs = lhs.add(&self.term()?);
            } else if self.eat('-') {
                lhs = lhs.sub(&self.term()?);
            } else {
                return Ok(lhs);
            }
        }
    }

    fn term(&mut self) -> Result<ScalarExpr> {
        let mut lhs = self.unary()?;
        loop {
            if self.eat('*') {
                lhs = lhs.mul(&self.unary()?);
            } else if self.eat('/') {
                lhs = lhs.div(&self.unary()?);
            } else {
                return Ok(lhs);
            }
        }
    }

    fn unary(&mut self) -> Result<ScalarExpr> {
        if self.eat('-') {
            Ok(self.unary()?.neg())
        } else {
            self.power()
        }
    }

    fn power(&mut self) -> Result<ScalarExpr> {
        let mut base = self.primary()?;
        while self.eat('^') {
            let exponent = self.integer_exponent()?;
            base = base.powi(exponent);
        }
        Ok(base)
    }

    fn integer_exponent(&mut self) -> Result<i32> {
        let parenthesized = self.eat('(');
        let negative = self.eat('-');
        self.skip_ws();
        let start = self.pos;
        while self.peek().is_some_and(|c| c.is_ascii_digit()) {
            self.pos += 1;
        }
        if start == self.pos {
            return Err(self.error("expected an integer exponent".to_string()));
        }
        let digits: String = self.chars[start..self.pos].iter().collect();
        if self.peek() == Some('.') {
            return Err(self.error("exponents must be integers".to_string()));
        }
        let magnitude: i32 = digits.parse().map_err(|_| Error::Syntax {
            column: start + 1,
            message: format!("exponent `{digits}` is too large"),
        })?;
        if parenthesized {
            self.expect(')')?;
        }
        Ok(if negative { -magnitude } else { magnitude })
    }

    fn primary(&mut self) -> Result<ScalarExpr> {
        self.skip_ws();
        let start = self.pos;
        match self.peek() {
            None => Err(self.error("unexpected end of input".to_string())),
            Some('(') => {
                self.pos += 1;
                let inner = self.expr()?;
                self.expect(')')?;
                Ok(inner)
            }
            Some(c) if c.is_ascii_digit() || c == '.' => self.number(),
            Some(c) if c.is_ascii_alphabetic() => {
                while self
                    .peek()
                    .is_some_and(|c| c.is_ascii_alphanumeric() || c == '_')
                {
                    self.pos += 1;
                }
                let ident: String = self.chars[start..self.pos].iter().collect();
                self.identifier(ident, start)
            }
            Some(c) => Err(self.error(format!("unexpected `{c}`"))),
        }
    }

    fn identifier(&mut self, ident: String, start: usize) -> Result<ScalarExpr> {
        let function: Option<fn(&ScalarExpr) -> ScalarExpr> = match ident.as_str() {
            "sin" => Some(ScalarExpr::sin),
            "cos" => Some(ScalarExpr::cos),
            "exp" => Some(ScalarExpr::exp),
            _ => None,
        };
        if let Some(apply) = function {
            self.expect('(')?;
            let arg = self.expr()?;
            self.expect(')')?;
            return Ok(apply(&arg));
        }
        let index = ident
            .strip_prefix('x')
            .filter(|d| !d.is_empty() && d.bytes().all(|b| b.is_ascii_digit()))
            .and_then(|d| d.parse::<usize>().ok());
        match index {
            Some(i) if (1..=self.dim).contains(&i) => Ok(ScalarExpr::var(i - 1)),
            Some(i) => Err(Error::VariableOutOfRange {
                index: i,
                dim: self.dim,
            }),
            None => Err(Error::UnknownVariable {
                name: ident,
                column: start + 1,
            }),
        }
    }

    fn number(&mut self) -> Result<ScalarExpr> {
        let start = self.pos;
        while self.peek().is_some_and(|c| c.is_ascii_digit() || c == '.') {
            self.pos += 1;
        }
        let text: String = self.chars[start..self.pos].iter().collect();
        text.parse::<f64>()
            .map(ScalarExpr::constant)
            .map_err(|_| Error::Syntax {
                column: start + 1,
                message: format!("malformed number `{text}`"),
            })
    }
}

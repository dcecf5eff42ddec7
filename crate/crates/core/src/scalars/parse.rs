//! Recursive-descent parser for scalar expressions:
//! integers, symbols, parentheses, `+ - * /` and integer powers `^k`.

use num_bigint::BigInt;

use crate::error::{Error, Result};
use crate::field::Field;

#[derive(Debug, Clone, PartialEq)]
enum Tok {
    Int(BigInt),
    Ident(String),
    Op(char),
}

fn lex(text: &str, line: usize) -> Result<Vec<(Tok, usize)>> {
    let chars: Vec<char> = text.chars().collect();
    let mut out = Vec::new();
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
            let s: String = chars[start..i].iter().collect();
            out.push((Tok::Int(s.parse().expect("digits")), start + 1));
        } else if c.is_alphabetic() || c == '_' {
            let start = i;
            while i < chars.len() && (chars[i].is_alphanumeric() || chars[i] == '_') {
                i += 1;
            }
            out.push((Tok::Ident(chars[start..i].iter().collect()), start + 1));
        } else if "+-*/^()".contains(c) {
            out.push((Tok::Op(c), i + 1));
            i += 1;
        } else {
            return Err(Error::parse(line, i + 1, format!("unexpected character `{c}`")));
        }
    }
    Ok(out)
}

struct Parser<'a, F> {
    toks: Vec<(Tok, usize)>,
    pos: usize,
    line: usize,
    end_col: usize,
    resolve: &'a dyn Fn(&str) -> Option<F>,
}

impl<F: Field> Parser<'_, F> {
    fn col(&self) -> usize {
        self.toks.get(self.pos).map_or(self.end_col, |t| t.1)
    }

    fn err(&self, msg: impl Into<String>) -> Error {
        Error::parse(self.line, self.col(), msg)
    }

    fn peek_op(&self) -> Option<char> {
        match self.toks.get(self.pos) {
            Some((Tok::Op(c), _)) => Some(*c),
            _ => None,
        }
    }

    fn expr(&mut self) -> Result<F> {
        let mut acc = self.term()?;
        while let Some(op @ ('+' | '-')) = self.peek_op() {
            self.pos += 1;
            let rhs = self.term()?;
            acc = if op == '+' { acc.add_ref(&rhs) } else { acc.sub_ref(&rhs) };
        }
        Ok(acc)
    }

    fn term(&mut self) -> Result<F> {
        let mut acc = self.unary()?;
        while let Some(op @ ('*' | '/')) = self.peek_op() {
            self.pos += 1;
            let col = self.col();
            let rhs = self.unary()?;
            acc = if op == '*' { acc.mul_ref(&rhs) } else { acc.div_ref(&rhs).ok_or_else(|| Error::parse(self.line, col, "division by zero"))? };
        }
        Ok(acc)
    }

    fn unary(&mut self) -> Result<F> {
        match self.peek_op() {
            Some('-') => {
                self.pos += 1;
                Ok(-self.unary()?)
            }
            Some('+') => {
                self.pos += 1;
                self.unary()
            }
            _ => self.power(),
        }
    }

    fn power(&mut self) -> Result<F> {
        let base = self.atom()?;
        if self.peek_op() != Some('^') {
            return Ok(base);
        }
        self.pos += 1;
        let col = self.col();
        let e = self.signed_int()?;
        base.powi(e).ok_or_else(|| Error::parse(self.line, col, "negative power of zero"))
    }

    fn signed_int(&mut self) -> Result<i64> {
        let neg = match self.peek_op() {
            Some('-') => {
                self.pos += 1;
                true
            }
            Some('(') => {
                self.pos += 1;
                let v = self.signed_int()?;
                if self.peek_op() != Some(')') {
                    return Err(self.err("expected `)`"));
                }
                self.pos += 1;
                return Ok(v);
            }
            _ => false,
        };
        match self.toks.get(self.pos) {
            Some((Tok::Int(n), _)) => {
                let v: i64 = n.try_into().map_err(|_| self.err("exponent out of range"))?;
                self.pos += 1;
                Ok(if neg { -v } else { v })
            }
            _ => Err(self.err("expected integer exponent")),
        }
    }

    fn atom(&mut self) -> Result<F> {
        let Some((tok, col)) = self.toks.get(self.pos).cloned() else {
            return Err(self.err("unexpected end of expression"));
        };
        self.pos += 1;
        match tok {
            Tok::Int(n) => Ok(F::from_bigint(n)),
            Tok::Ident(name) => (self.resolve)(&name).ok_or_else(|| Error::parse(self.line, col, format!("unknown symbol `{name}`"))),
            Tok::Op('(') => {
                let v = self.expr()?;
                if self.peek_op() != Some(')') {
                    return Err(self.err("expected `)`"));
                }
                self.pos += 1;
                Ok(v)
            }
            Tok::Op(c) => Err(Error::parse(self.line, col, format!("unexpected `{c}`"))),
        }
    }
}

/// Parses `text` as an element of `F`, resolving symbols through `resolve`.
/// Error positions are reported on `line`.
pub fn parse_expr<F: Field>(text: &str, line: usize, resolve: &dyn Fn(&str) -> Option<F>) -> Result<F> {
    let toks = lex(text, line)?;
    if toks.is_empty() {
        return Err(Error::parse(line, 1, "empty expression"));
    }
    let mut p = Parser { toks, pos: 0, line, end_col: text.chars().count() + 1, resolve };
    let v = p.expr()?;
    if p.pos != p.toks.len() {
        return Err(p.err("trailing input"));
    }
    Ok(v)
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_rational::BigRational;

    fn rat(s: &str) -> Result<BigRational> {
        parse_expr::<BigRational>(s, 1, &|_| None)
    }

    #[test]
    fn arithmetic_and_precedence() {
        assert_eq!(rat("1 + 2*3").unwrap(), BigRational::from_integer(7.into()));
        assert_eq!(rat("-2^2").unwrap(), BigRational::from_integer((-4).into()));
        assert_eq!(rat("(1/2)^-2").unwrap(), BigRational::from_integer(4.into()));
        assert_eq!(rat("2^(-1)").unwrap(), BigRational::new(1.into(), 2.into()));
        assert_eq!(rat("6/4/3").unwrap(), BigRational::new(1.into(), 2.into()));
    }

    #[test]
    fn errors_carry_columns() {
        match rat("1 + q") {
            Err(Error::Parse { line: 1, column: 5, .. }) => {}
            other => panic!("{other:?}"),
        }
        assert!(matches!(rat("1/0"), Err(Error::Parse { .. })));
        assert!(matches!(rat("(1"), Err(Error::Parse { .. })));
        assert!(matches!(rat("1 $"), Err(Error::Parse { column: 3, .. })));
    }
}

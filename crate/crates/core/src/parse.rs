//! Recursive-descent parser for rational polynomial expressions.
//!
//! ```text
//! expr   := term (('+' | '-') term)*
//! term   := unary (('*' | '/') unary)*        divisor must be a nonzero constant
//! unary  := ('+' | '-') unary | power
//! power  := atom ('^' digits)?
//! atom   := digits | 'X' | 'x' | '(' expr ')'
//! ```
//!
//! Rational literals are written as quotients, `9/2`; decimal points are
//! rejected so no value is ever rounded.

use std::str::FromStr;

use num_bigint::BigInt;

use crate::algebra::int;
use crate::Poly;

/// Exponents above this are refused.
pub const MAX_EXPONENT: u32 = 4096;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error("parse error at position {pos}: {msg}")]
pub struct ParseError {
    pub pos: usize,
    pub msg: String,
}

/// Source text together with its parsed polynomial.
#[derive(Debug, Clone, PartialEq)]
pub struct PolyExpr {
    pub source: String,
    pub poly: Poly,
}

impl FromStr for PolyExpr {
    type Err = ParseError;

    fn from_str(s: &str) -> Result<Self, ParseError> {
        Ok(PolyExpr { source: s.to_string(), poly: parse_poly(s)? })
    }
}

pub fn parse_poly(text: &str) -> Result<Poly, ParseError> {
    let mut p = Parser { src: text.as_bytes(), pos: 0 };
    let out = p.expr()?;
    p.skip_ws();
    if p.pos < p.src.len() {
        return Err(p.error(format!("unexpected '{}'", p.src[p.pos] as char)));
    }
    Ok(out)
}

struct Parser<'a> {
    src: &'a [u8],
    pos: usize,
}

impl Parser<'_> {
    fn error(&self, msg: impl Into<String>) -> ParseError {
        ParseError { pos: self.pos, msg: msg.into() }
    }

    fn skip_ws(&mut self) {
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
    }

    fn peek(&mut self) -> Option<u8> {
        self.skip_ws();
        self.src.get(self.pos).copied()
    }

    fn expr(&mut self) -> Result<Poly, ParseError> {
        let mut acc = self.term()?;
        while let Some(op @ (b'+' | b'-')) = self.peek() {
            self.pos += 1;
            let rhs = self.term()?;
            acc = if op == b'+' { &acc + &rhs } else { &acc - &rhs };
        }
        Ok(acc)
    }

    fn term(&mut self) -> Result<Poly, ParseError> {
        let mut acc = self.unary()?;
        while let Some(op @ (b'*' | b'/')) = self.peek() {
            self.pos += 1;
            let at = self.pos;
            let rhs = self.unary()?;
            if op == b'*' {
                acc = &acc * &rhs;
            } else {
                match rhs.degree() {
                    Some(0) => acc = acc.scale(&rhs.coeffs()[0].recip()),
                    None => return Err(ParseError { pos: at, msg: "division by zero".into() }),
                    Some(_) => {
                        return Err(ParseError {
                            pos: at,
                            msg: "division is only allowed by a constant".into(),
                        })
                    }
                }
            }
        }
        Ok(acc)
    }

    fn unary(&mut self) -> Result<Poly, ParseError> {
        match self.peek() {
            Some(b'-') => {
                self.pos += 1;
                Ok(-self.unary()?)
            }
            Some(b'+') => {
                self.pos += 1;
                self.unary()
            }
            _ => self.power(),
        }
    }

    fn power(&mut self) -> Result<Poly, ParseError> {
        let base = self.atom()?;
        if self.peek() == Some(b'^') {
            self.pos += 1;
            self.skip_ws();
            let at = self.pos;
            let digits = self.digits();
            if digits.is_empty() {
                return Err(self.error("exponent must be a non-negative integer"));
            }
            let e: u32 = digits
                .parse()
                .ok()
                .filter(|&e| e <= MAX_EXPONENT)
                .ok_or(ParseError { pos: at, msg: format!("exponent {digits} is too large") })?;
            return Ok(base.pow(e));
        }
        Ok(base)
    }

    fn digits(&mut self) -> String {
        let start = self.pos;
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_digit() {
            self.pos += 1;
        }
        String::from_utf8_lossy(&self.src[start..self.pos]).into_owned()
    }

    fn atom(&mut self) -> Result<Poly, ParseError> {
        match self.peek() {
            Some(b'(') => {
                self.pos += 1;
                let inner = self.expr()?;
                if self.peek() != Some(b')') {
                    return Err(self.error("expected ')'"));
                }
                self.pos += 1;
                Ok(inner)
            }
            Some(b'X' | b'x') => {
                self.pos += 1;
                Ok(Poly::x())
            }
            Some(c) if c.is_ascii_digit() => {
                let start = self.pos;
                let digits = self.digits();
                if matches!(self.src.get(self.pos), Some(b'.' | b'e' | b'E')) {
                    return Err(ParseError {
                        pos: start,
                        msg: "decimal literals are not accepted; use p/q rationals".into(),
                    });
                }
                let v: BigInt = digits.parse().expect("ascii digits");
                Ok(Poly::constant(int(v)))
            }
            Some(b'.') => Err(self.error("decimal literals are not accepted; use p/q rationals")),
            Some(c) => Err(self.error(format!("unexpected '{}'", c as char))),
            None => Err(self.error("unexpected end of input")),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rat;

    #[test]
    fn basic_forms() {
        assert_eq!(parse_poly("X^4").unwrap(), Poly::monomial(rat(1, 1), 4));
        assert_eq!(
            parse_poly("X^2 - 1/4").unwrap(),
            Poly::new(vec![rat(-1, 4), rat(0, 1), rat(1, 1)])
        );
        assert_eq!(
            parse_poly("2*X^2 + 2*X + 1").unwrap(),
            Poly::new(vec![rat(1, 1), rat(2, 1), rat(2, 1)])
        );
        assert_eq!(
            parse_poly("(x+10)^2 - 100").unwrap(),
            Poly::new(vec![rat(0, 1), rat(20, 1), rat(1, 1)])
        );
        assert_eq!(parse_poly("-X^2").unwrap(), Poly::monomial(rat(-1, 1), 2));
        assert_eq!(parse_poly("9/2*X").unwrap(), Poly::monomial(rat(9, 2), 1));
    }

    #[test]
    fn rejects_floats() {
        let e = parse_poly("X^2 + 0.5").unwrap_err();
        assert!(e.msg.contains("use p/q rationals"));
        assert_eq!(e.pos, 6);
        assert!(parse_poly(".5*X").unwrap_err().msg.contains("p/q"));
    }

    #[test]
    fn syntax_errors_have_positions() {
        let e = parse_poly("X^2 +").unwrap_err();
        assert_eq!(e.pos, 5);
        let e = parse_poly("(X+1").unwrap_err();
        assert_eq!(e.msg, "expected ')'");
        assert!(parse_poly("X / X").unwrap_err().msg.contains("constant"));
        assert!(parse_poly("1/0").unwrap_err().msg.contains("zero"));
        assert!(parse_poly("X^-1").is_err());
        assert!(parse_poly("2 X").is_err());
    }

    #[test]
    fn print_then_parse() {
        for s in ["3*X^3 + 9/2*X^2 + 15/4*X + 9/8", "-X^5 - 2/9", "X^2 - 1/4", "0"] {
            let p = parse_poly(s).unwrap();
            assert_eq!(p.to_string(), s);
            assert_eq!(parse_poly(&p.to_string()).unwrap(), p);
        }
    }
}

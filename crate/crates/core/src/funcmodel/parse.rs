//! Parser for the function-spec grammar
//!
//! ```text
//! spec  := term ("+" term)* "on" "[" FLOAT "," FLOAT "]"
//! term  := FLOAT "*" "(" "u" "-" FLOAT ")" "^" FLOAT
//! FLOAT := [+-]? digits ("." digits?)? ([eE] [+-]? digits)?
//! ```
//!
//! Whitespace may appear between any two tokens.

use super::{FunctionModel, PowerTerm};
use crate::error::{Error, Result};

struct Cursor<'a> {
    src: &'a str,
    pos: usize,
}

impl<'a> Cursor<'a> {
    fn new(src: &'a str) -> Self {
        Self { src, pos: 0 }
    }

    fn rest(&self) -> &'a str {
        &self.src[self.pos..]
    }

    fn skip_ws(&mut self) {
        let trimmed = self.rest().trim_start();
        self.pos = self.src.len() - trimmed.len();
    }

    fn error(&self, msg: impl Into<String>) -> Error {
        Error::Syntax { pos: self.pos, msg: msg.into() }
    }

    fn at_end(&mut self) -> bool {
        self.skip_ws();
        self.pos == self.src.len()
    }

    fn peek(&mut self, lit: &str) -> bool {
        self.skip_ws();
        self.rest().starts_with(lit)
    }

    fn expect(&mut self, lit: &str) -> Result<()> {
        if self.peek(lit) {
            self.pos += lit.len();
            Ok(())
        } else {
            let found = self.rest().chars().next().map_or("end of input".to_string(), |c| format!("'{c}'"));
            Err(self.error(format!("expected '{lit}', found {found}")))
        }
    }

    fn float(&mut self) -> Result<f64> {
        self.skip_ws();
        let bytes = self.rest().as_bytes();
        let mut i = 0;
        if i < bytes.len() && (bytes[i] == b'+' || bytes[i] == b'-') {
            i += 1;
        }
        let int_start = i;
        while i < bytes.len() && bytes[i].is_ascii_digit() {
            i += 1;
        }
        let mut digits = i - int_start;
        if i < bytes.len() && bytes[i] == b'.' {
            i += 1;
            let frac_start = i;
            while i < bytes.len() && bytes[i].is_ascii_digit() {
                i += 1;
            }
            digits += i - frac_start;
        }
        if digits == 0 {
            return Err(self.error("expected a number"));
        }
        if i < bytes.len() && (bytes[i] == b'e' || bytes[i] == b'E') {
            let mut j = i + 1;
            if j < bytes.len() && (bytes[j] == b'+' || bytes[j] == b'-') {
                j += 1;
            }
            let exp_start = j;
            while j < bytes.len() && bytes[j].is_ascii_digit() {
                j += 1;
            }
            if j == exp_start {
                return Err(Error::Syntax {
                    pos: self.pos + i,
                    msg: "malformed exponent".into(),
                });
            }
            i = j;
        }
        let text = &self.rest()[..i];
        let value: f64 = text
            .parse()
            .map_err(|_| self.error(format!("invalid number '{text}'")))?;
        if !value.is_finite() {
            return Err(self.error(format!("number '{text}' is out of range")));
        }
        self.pos += i;
        Ok(value)
    }

    fn term(&mut self) -> Result<PowerTerm> {
        let coeff = self.float()?;
        self.expect("*")?;
        self.expect("(")?;
        self.expect("u")?;
        self.expect("-")?;
        let shift = self.float()?;
        self.expect(")")?;
        self.expect("^")?;
        let exponent = self.float()?;
        Ok(PowerTerm::new(coeff, shift, exponent))
    }
}

/// Parses a single FLOAT, allowing surrounding whitespace.
pub fn parse_float(text: &str) -> Result<f64> {
    let mut cur = Cursor::new(text);
    let v = cur.float()?;
    if !cur.at_end() {
        return Err(cur.error("trailing characters after number"));
    }
    Ok(v)
}

/// Parses a function spec such as `1*(u-0)^2 + -0.5*(u-0)^1 on [0,2]`.
pub fn parse_function(spec: &str) -> Result<FunctionModel> {
    let mut cur = Cursor::new(spec);
    let mut terms = vec![cur.term()?];
    while cur.peek("+") {
        cur.expect("+")?;
        terms.push(cur.term()?);
    }
    cur.expect("on")?;
    cur.expect("[")?;
    let lo = cur.float()?;
    cur.expect(",")?;
    let hi = cur.float()?;
    cur.expect("]")?;
    if !cur.at_end() {
        return Err(cur.error("trailing characters after domain"));
    }
    FunctionModel::new(terms, lo, hi)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_examples() {
        let m = parse_function("1*(u-0)^2 on [0,1]").unwrap();
        assert_eq!(m.terms(), &[PowerTerm::new(1.0, 0.0, 2.0)]);
        assert_eq!((m.lo(), m.hi()), (0.0, 1.0));

        let m = parse_function("  0.5 * ( u - 0 ) ^ 2   on [ 0 , 1 ] ").unwrap();
        assert_eq!(m.terms(), &[PowerTerm::new(0.5, 0.0, 2.0)]);

        let m = parse_function("1*(u-0)^2 + -0.5*(u-0)^1 on [0,2]").unwrap();
        assert_eq!(m.terms().len(), 2);
        assert_eq!(m.terms()[1], PowerTerm::new(-0.5, 0.0, 1.0));

        let m = parse_function("2.5e-1*(u-1E0)^3 on [-1.5e0,2.]").unwrap();
        assert_eq!(m.terms(), &[PowerTerm::new(0.25, 1.0, 3.0)]);
        assert_eq!(m.lo(), -1.5);
    }

    #[test]
    fn undefined_term_is_domain_error() {
        let err = parse_function("2*(u-1)^0.5 on [0,0.5]").unwrap_err();
        assert!(matches!(err, Error::Domain(_)), "{err}");
    }

    #[test]
    fn syntax_errors_carry_position() {
        let cases = [
            ("", 0),
            ("1*(u-0)^2", 9),
            ("1*(x-0)^2 on [0,1]", 3),
            ("1*(u-0)^ on [0,1]", 9),
            ("1*(u-0)^2 on [0,1] junk", 19),
            ("1*(u-0)^2 on [0;1]", 15),
            ("1e*(u-0)^2 on [0,1]", 1),
        ];
        for (src, want) in cases {
            match parse_function(src) {
                Err(Error::Syntax { pos, .. }) => assert_eq!(pos, want, "{src:?}"),
                other => panic!("{src:?}: expected syntax error, got {other:?}"),
            }
        }
    }

    #[test]
    fn rejects_inverted_domain() {
        assert!(matches!(parse_function("1*(u-0)^2 on [1,0]"), Err(Error::Domain(_))));
    }

    #[test]
    fn parse_float_accepts_only_numbers() {
        assert_eq!(parse_float(" -3.5e2 ").unwrap(), -350.0);
        assert!(parse_float("nan").is_err());
        assert!(parse_float("1e999").is_err());
        assert!(parse_float("1.0x").is_err());
    }
}

//! Text syntax for polynomials.
//!
//! ```text
//! poly  := ['+'|'-'] term (('+'|'-') term)*
//! term  := [coeff ['*']] factor (['*'] factor)* | coeff
//! coeff := digits ['/' digits]
//! factor:= var ['^' digits]
//! ```
//!
//! Whitespace is insignificant. Variable names are matched greedily against
//! the declared list, so `xy` reads as `x*y` when `x` and `y` are declared.

use std::collections::BTreeMap;
use std::rc::Rc;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use thiserror::Error;

use super::{Monomial, PolyError, Polynomial, TermOrder};
use crate::field::Field;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("{line}:{column}: {message}")]
pub struct ParseError {
    pub line: usize,
    pub column: usize,
    pub message: String,
}

/// A field-independent polynomial with rational coefficients, as read from
/// text. Terms are kept canonically (no zero coefficients, one entry per
/// exponent vector).
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct ParsedPolynomial {
    arity: usize,
    terms: BTreeMap<Vec<u32>, BigRational>,
}

impl ParsedPolynomial {
    pub fn arity(&self) -> usize {
        self.arity
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Vec<u32>, &BigRational)> {
        self.terms.iter()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    fn add_term(&mut self, exps: Vec<u32>, c: BigRational) {
        let entry = self.terms.entry(exps.clone()).or_insert_with(BigRational::zero);
        *entry += c;
        if entry.is_zero() {
            self.terms.remove(&exps);
        }
    }

    /// Image in `field`; fails when a denominator vanishes there.
    pub fn to_polynomial<F: Field>(
        &self,
        field: &F,
        order: TermOrder,
    ) -> Result<Polynomial<F>, PolyError> {
        let mut terms = Vec::with_capacity(self.terms.len());
        for (exps, c) in &self.terms {
            let c = field.from_fraction(c.numer(), c.denom())?;
            terms.push((c, Monomial::from_exponents(exps)?));
        }
        Polynomial::from_terms(field.clone(), order, self.arity, terms)
    }

    /// Reads back a polynomial over a field through its signed fraction form.
    pub fn from_polynomial<F: Field>(p: &Polynomial<F>) -> Self {
        let mut out = ParsedPolynomial {
            arity: p.arity(),
            terms: BTreeMap::new(),
        };
        for (c, m) in p.terms() {
            let exps = m.exponents().iter().map(|&e| e as u32).collect();
            out.add_term(exps, p.field().to_fraction(c));
        }
        out
    }

    /// Formats in descending degrevlex order with the given variable names.
    pub fn format_with(&self, vars: &[String]) -> String {
        let mut terms: Vec<(&Vec<u32>, &BigRational)> = self.terms.iter().collect();
        let mono = |e: &Vec<u32>| Monomial::from_exponents(e).expect("parsed exponents fit");
        terms.sort_by(|a, b| TermOrder::DegRevLex.compare(&mono(b.0), &mono(a.0)));
        if terms.is_empty() {
            return "0".to_string();
        }
        let mut out = String::new();
        for (k, (exps, c)) in terms.into_iter().enumerate() {
            let negative = c.is_negative();
            if k == 0 {
                if negative {
                    out.push('-');
                }
            } else {
                out.push_str(if negative { " - " } else { " + " });
            }
            let mag = c.abs();
            let m = mono(exps);
            let mag_text = if mag.denom().is_one() {
                mag.numer().to_string()
            } else {
                format!("{}/{}", mag.numer(), mag.denom())
            };
            if m.is_one() {
                out.push_str(&mag_text);
            } else if mag.is_one() {
                out.push_str(&m.format_with(vars));
            } else {
                out.push_str(&mag_text);
                out.push('*');
                out.push_str(&m.format_with(vars));
            }
        }
        out
    }
}

/// Parses a polynomial in the declared variables.
pub fn parse_polynomial(text: &str, vars: &[String]) -> Result<ParsedPolynomial, ParseError> {
    let mut cur = Cursor::new(text);
    let p = cur.polynomial(vars)?;
    cur.skip_ws();
    if !cur.at_end() {
        return Err(cur.error("unexpected trailing input"));
    }
    Ok(p)
}

/// Character cursor with line/column tracking, shared by the ring-file and
/// ideal-expression readers.
#[derive(Clone)]
pub(crate) struct Cursor<'a> {
    chars: Rc<[(usize, usize, char)]>,
    pos: usize,
    src: &'a str,
}

impl<'a> Cursor<'a> {
    pub(crate) fn new(src: &'a str) -> Self {
        Self::with_origin(src, 1, 1)
    }

    pub(crate) fn with_origin(src: &'a str, line: usize, column: usize) -> Self {
        let mut chars = Vec::with_capacity(src.len());
        let (mut l, mut c) = (line, column);
        for ch in src.chars() {
            chars.push((l, c, ch));
            if ch == '\n' {
                l += 1;
                c = 1;
            } else {
                c += 1;
            }
        }
        chars.push((l, c, '\0'));
        Cursor {
            chars: chars.into(),
            pos: 0,
            src,
        }
    }

    #[allow(dead_code)]
    pub(crate) fn source(&self) -> &'a str {
        self.src
    }

    pub(crate) fn peek(&self) -> char {
        self.chars[self.pos].2
    }

    pub(crate) fn at_end(&self) -> bool {
        self.pos + 1 >= self.chars.len()
    }

    pub(crate) fn bump(&mut self) -> char {
        let c = self.peek();
        if !self.at_end() {
            self.pos += 1;
        }
        c
    }

    pub(crate) fn position(&self) -> (usize, usize) {
        let (l, c, _) = self.chars[self.pos];
        (l, c)
    }

    pub(crate) fn error(&self, message: impl Into<String>) -> ParseError {
        let (line, column) = self.position();
        ParseError {
            line,
            column,
            message: message.into(),
        }
    }

    pub(crate) fn skip_ws(&mut self) {
        while !self.at_end() && self.peek().is_whitespace() {
            self.bump();
        }
    }

    /// Consumes `c` after optional whitespace.
    pub(crate) fn eat(&mut self, c: char) -> bool {
        self.skip_ws();
        if self.peek() == c && !self.at_end() {
            self.bump();
            true
        } else {
            false
        }
    }

    pub(crate) fn expect(&mut self, c: char) -> Result<(), ParseError> {
        if self.eat(c) {
            Ok(())
        } else {
            Err(self.error(format!("expected '{c}'")))
        }
    }

    pub(crate) fn digits(&mut self) -> Option<String> {
        self.skip_ws();
        let mut s = String::new();
        while !self.at_end() && self.peek().is_ascii_digit() {
            s.push(self.bump());
        }
        (!s.is_empty()).then_some(s)
    }

    pub(crate) fn unsigned(&mut self) -> Result<u64, ParseError> {
        let at = self.clone();
        let d = self.digits().ok_or_else(|| at.error("expected an integer"))?;
        d.parse().map_err(|_| at.error("integer out of range"))
    }

    pub(crate) fn identifier(&mut self) -> Option<String> {
        self.skip_ws();
        let c = self.peek();
        if self.at_end() || !(c.is_ascii_alphabetic() || c == '_') {
            return None;
        }
        let mut s = String::new();
        while !self.at_end() && (self.peek().is_ascii_alphanumeric() || self.peek() == '_') {
            s.push(self.bump());
        }
        Some(s)
    }

    fn starts_term(&mut self) -> bool {
        self.skip_ws();
        let c = self.peek();
        !self.at_end() && (c.is_ascii_alphanumeric() || c == '_')
    }

    pub(crate) fn polynomial(&mut self, vars: &[String]) -> Result<ParsedPolynomial, ParseError> {
        let mut out = ParsedPolynomial {
            arity: vars.len(),
            terms: BTreeMap::new(),
        };
        let mut negative = if self.eat('-') {
            true
        } else {
            self.eat('+');
            false
        };
        loop {
            let (exps, mut c) = self.term(vars)?;
            if negative {
                c = -c;
            }
            out.add_term(exps, c);
            if self.eat('+') {
                negative = false;
            } else if self.eat('-') {
                negative = true;
            } else {
                break;
            }
        }
        Ok(out)
    }

    fn term(&mut self, vars: &[String]) -> Result<(Vec<u32>, BigRational), ParseError> {
        let start = self.clone();
        let mut exps = vec![0u32; vars.len()];
        let mut coeff = BigRational::one();
        let mut seen = false;
        if let Some(num) = self.digits() {
            let num: BigInt = num.parse().expect("digits");
            let mut den = BigInt::one();
            if self.eat('/') {
                let at = self.clone();
                let d = self.digits().ok_or_else(|| at.error("expected a denominator"))?;
                den = d.parse().expect("digits");
                if den.is_zero() {
                    return Err(at.error("zero denominator"));
                }
            }
            coeff = BigRational::new(num, den);
            seen = true;
            let save = self.clone();
            if self.eat('*') && !self.starts_term() {
                *self = save;
            }
        }
        loop {
            let save = self.clone();
            let Some(ident) = self.identifier() else {
                *self = save;
                break;
            };
            let mut rest = ident.as_str();
            let mut last = None;
            while !rest.is_empty() {
                let best = vars
                    .iter()
                    .enumerate()
                    .filter(|(_, v)| rest.starts_with(v.as_str()))
                    .max_by_key(|(_, v)| v.len());
                match best {
                    Some((i, v)) => {
                        exps[i] += 1;
                        last = Some(i);
                        rest = &rest[v.len()..];
                    }
                    None => return Err(save.error(format!("unknown variable in '{ident}'"))),
                }
            }
            if self.eat('^') {
                let e = self.unsigned()?;
                let i = last.expect("identifier is nonempty");
                let e = u32::try_from(e).map_err(|_| self.error("exponent too large"))?;
                exps[i] = exps[i] - 1 + e;
            }
            seen = true;
            let save = self.clone();
            if !(self.eat('*') && self.starts_term()) {
                *self = save;
            }
        }
        if !seen {
            return Err(start.error("expected a term"));
        }
        Ok((exps, coeff))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn vars(names: &[&str]) -> Vec<String> {
        names.iter().map(|s| s.to_string()).collect()
    }

    #[test]
    fn reads_the_documented_syntax() {
        let v = vars(&["x", "y"]);
        let a = parse_polynomial("x^6*y + y^7", &v).unwrap();
        let b = parse_polynomial("  y^7+x^6 y ", &v).unwrap();
        let c = parse_polynomial("x^6y+y^7", &v).unwrap();
        assert_eq!(a, b);
        assert_eq!(a, c);
        assert_eq!(a.format_with(&v), "x^6*y + y^7");
        let d = parse_polynomial("-3x^2 + 2*x*y - 5 + x - x", &v).unwrap();
        assert_eq!(d.format_with(&v), "-3*x^2 + 2*x*y - 5");
        assert!(parse_polynomial("x - x", &v).unwrap().is_zero());
        assert!(parse_polynomial("0", &v).unwrap().is_zero());
    }

    #[test]
    fn longest_variable_match() {
        let v = vars(&["x", "x1", "y"]);
        let p = parse_polynomial("x1x^2", &v).unwrap();
        assert_eq!(p.format_with(&v), "x^2*x1");
    }

    #[test]
    fn errors_carry_positions() {
        let v = vars(&["x", "y"]);
        let e = parse_polynomial("x + \n  z^2", &v).unwrap_err();
        assert_eq!((e.line, e.column), (2, 3));
        let e = parse_polynomial("x +", &v).unwrap_err();
        assert_eq!(e.column, 4);
        assert!(parse_polynomial("x y )", &v).is_err());
        assert!(parse_polynomial("1/0 x", &v).is_err());
    }
}

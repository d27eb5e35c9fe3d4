use std::cmp::Ordering;
use std::fmt;

use serde::{Deserialize, Serialize};

use super::PolyError;

/// Largest number of ambient variables a ring may have.
pub const MAX_VARS: usize = 12;

/// A power product `x_1^a_1 ... x_n^a_n` with a cached total degree.
///
/// Unused exponent slots beyond the arity are always zero, so derived
/// equality and hashing are structural.
#[derive(Clone, Copy, PartialEq, Eq, Hash)]
pub struct Monomial {
    exps: [u16; MAX_VARS],
    arity: u8,
    degree: u32,
}

impl Monomial {
    pub fn one(arity: usize) -> Self {
        assert!(arity <= MAX_VARS, "at most {MAX_VARS} variables are supported");
        Monomial {
            exps: [0; MAX_VARS],
            arity: arity as u8,
            degree: 0,
        }
    }

    pub fn variable(arity: usize, index: usize) -> Self {
        let mut m = Monomial::one(arity);
        assert!(index < arity);
        m.exps[index] = 1;
        m.degree = 1;
        m
    }

    pub fn from_exponents(exps: &[u32]) -> Result<Self, PolyError> {
        if exps.len() > MAX_VARS {
            return Err(PolyError::TooManyVariables(exps.len()));
        }
        let mut m = Monomial::one(exps.len());
        for (slot, &e) in m.exps.iter_mut().zip(exps) {
            *slot = u16::try_from(e).map_err(|_| PolyError::ExponentOverflow)?;
            m.degree += e;
        }
        Ok(m)
    }

    pub fn arity(&self) -> usize {
        self.arity as usize
    }

    pub fn degree(&self) -> u32 {
        self.degree
    }

    pub fn exponents(&self) -> &[u16] {
        &self.exps[..self.arity as usize]
    }

    pub fn exponent(&self, var: usize) -> u32 {
        self.exps[var] as u32
    }

    pub fn is_one(&self) -> bool {
        self.degree == 0
    }

    /// Index of the variable if this is a pure power `x_i^k` with `k >= 1`.
    pub fn pure_power_variable(&self) -> Option<usize> {
        let mut found = None;
        for (i, &e) in self.exponents().iter().enumerate() {
            if e > 0 {
                if found.is_some() {
                    return None;
                }
                found = Some(i);
            }
        }
        found
    }

    /// Bitmask of the variables that occur.
    pub fn support_mask(&self) -> u32 {
        self.exponents()
            .iter()
            .enumerate()
            .filter(|(_, &e)| e > 0)
            .fold(0, |acc, (i, _)| acc | (1 << i))
    }

    pub fn checked_mul(&self, other: &Monomial) -> Option<Monomial> {
        debug_assert_eq!(self.arity, other.arity);
        let mut out = *self;
        for i in 0..self.arity as usize {
            out.exps[i] = self.exps[i].checked_add(other.exps[i])?;
        }
        out.degree = self.degree + other.degree;
        Some(out)
    }

    pub fn divides(&self, other: &Monomial) -> bool {
        self.degree <= other.degree
            && (0..self.arity as usize).all(|i| self.exps[i] <= other.exps[i])
    }

    /// `other / self`, if `self` divides `other`.
    pub fn quotient_of(&self, other: &Monomial) -> Option<Monomial> {
        if !self.divides(other) {
            return None;
        }
        let mut out = *other;
        for i in 0..self.arity as usize {
            out.exps[i] -= self.exps[i];
        }
        out.degree = other.degree - self.degree;
        Some(out)
    }

    pub fn lcm(&self, other: &Monomial) -> Monomial {
        let mut out = *self;
        let mut degree = 0;
        for i in 0..self.arity as usize {
            out.exps[i] = self.exps[i].max(other.exps[i]);
            degree += out.exps[i] as u32;
        }
        out.degree = degree;
        out
    }

    pub fn is_coprime(&self, other: &Monomial) -> bool {
        (0..self.arity as usize).all(|i| self.exps[i] == 0 || other.exps[i] == 0)
    }

    /// Writes the monomial using the given variable names (`x^2*y`).
    pub fn format_with(&self, vars: &[String]) -> String {
        if self.is_one() {
            return "1".to_string();
        }
        let mut parts = Vec::new();
        for (i, &e) in self.exponents().iter().enumerate() {
            match e {
                0 => {}
                1 => parts.push(vars[i].clone()),
                _ => parts.push(format!("{}^{}", vars[i], e)),
            }
        }
        parts.join("*")
    }
}

impl std::ops::Mul for Monomial {
    type Output = Monomial;

    fn mul(self, rhs: Monomial) -> Monomial {
        self.checked_mul(&rhs).expect("exponent overflow")
    }
}

impl fmt::Debug for Monomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:?}", self.exponents())
    }
}

/// Global monomial orders. Variable precedence follows declaration order.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum TermOrder {
    #[default]
    DegRevLex,
    DegLex,
    Lex,
}

impl TermOrder {
    pub fn compare(&self, a: &Monomial, b: &Monomial) -> Ordering {
        let n = a.arity();
        match self {
            TermOrder::Lex => lex(a, b, n),
            TermOrder::DegLex => a.degree.cmp(&b.degree).then_with(|| lex(a, b, n)),
            TermOrder::DegRevLex => a.degree.cmp(&b.degree).then_with(|| {
                for i in (0..n).rev() {
                    match a.exps[i].cmp(&b.exps[i]) {
                        Ordering::Equal => continue,
                        // a smaller power of the last variable wins
                        other => return other.reverse(),
                    }
                }
                Ordering::Equal
            }),
        }
    }

    pub fn name(&self) -> &'static str {
        match self {
            TermOrder::DegRevLex => "degrevlex",
            TermOrder::DegLex => "deglex",
            TermOrder::Lex => "lex",
        }
    }

    pub fn is_degree_compatible(&self) -> bool {
        !matches!(self, TermOrder::Lex)
    }
}

fn lex(a: &Monomial, b: &Monomial, n: usize) -> Ordering {
    for i in 0..n {
        match a.exps[i].cmp(&b.exps[i]) {
            Ordering::Equal => continue,
            other => return other,
        }
    }
    Ordering::Equal
}

/// Compares two monomials of equal arity under `order`.
pub fn compare_monomials(
    order: TermOrder,
    a: &Monomial,
    b: &Monomial,
) -> Result<Ordering, PolyError> {
    if a.arity() != b.arity() {
        return Err(PolyError::ArityMismatch {
            expected: a.arity(),
            found: b.arity(),
        });
    }
    Ok(order.compare(a, b))
}

/// All monomials of total degree exactly `degree` in `arity` variables,
/// in descending degrevlex order.
pub fn monomials_of_degree(arity: usize, degree: u32) -> Vec<Monomial> {
    let mut out = Vec::new();
    let mut exps = vec![0u32; arity];
    fn rec(i: usize, left: u32, exps: &mut Vec<u32>, out: &mut Vec<Monomial>) {
        let n = exps.len();
        if i + 1 == n {
            exps[i] = left;
            out.push(Monomial::from_exponents(exps).expect("small exponents"));
            return;
        }
        for e in (0..=left).rev() {
            exps[i] = e;
            rec(i + 1, left - e, exps, out);
        }
        exps[i] = 0;
    }
    if arity == 0 {
        if degree == 0 {
            out.push(Monomial::one(0));
        }
        return out;
    }
    rec(0, degree, &mut exps, &mut out);
    out.sort_by(|a, b| TermOrder::DegRevLex.compare(b, a));
    out
}

//! Sparse multivariate polynomials over an exact field.

mod monomial;
pub mod parse;

use std::cmp::Ordering;
use std::collections::HashMap;

use thiserror::Error;

use crate::field::{format_elem, Field, FieldError, FieldSpec};

pub use monomial::{compare_monomials, monomials_of_degree, Monomial, TermOrder, MAX_VARS};
pub use parse::{parse_polynomial, ParseError, ParsedPolynomial};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum PolyError {
    #[error("arity mismatch: expected {expected} variables, found {found}")]
    ArityMismatch { expected: usize, found: usize },
    #[error("polynomials over different fields ({0} vs {1})")]
    MixedFields(FieldSpec, FieldSpec),
    #[error("polynomials sorted by different term orders")]
    OrderMismatch,
    #[error("operation undefined on the zero polynomial")]
    ZeroPolynomial,
    #[error("exponent overflow")]
    ExponentOverflow,
    #[error("{0} variables requested, at most {max} supported", max = MAX_VARS)]
    TooManyVariables(usize),
    #[error(transparent)]
    Field(#[from] FieldError),
}

/// A polynomial as a strictly descending list of nonzero terms.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Polynomial<F: Field> {
    field: F,
    order: TermOrder,
    arity: usize,
    terms: Vec<(F::Elem, Monomial)>,
}

impl<F: Field> std::fmt::Debug for Polynomial<F> {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let vars: Vec<String> = (0..self.arity).map(|i| format!("x{i}")).collect();
        write!(f, "{}", self.format_with(&vars))
    }
}

impl<F: Field> Polynomial<F> {
    pub fn zero(field: F, order: TermOrder, arity: usize) -> Self {
        Polynomial {
            field,
            order,
            arity,
            terms: Vec::new(),
        }
    }

    pub fn constant(field: F, order: TermOrder, arity: usize, c: F::Elem) -> Self {
        Self::monomial(field, order, c, Monomial::one(arity))
    }

    pub fn monomial(field: F, order: TermOrder, c: F::Elem, m: Monomial) -> Self {
        let arity = m.arity();
        let terms = if field.is_zero(&c) { vec![] } else { vec![(c, m)] };
        Polynomial {
            field,
            order,
            arity,
            terms,
        }
    }

    pub fn variable(field: F, order: TermOrder, arity: usize, index: usize) -> Self {
        let one = field.one();
        Self::monomial(field, order, one, Monomial::variable(arity, index))
    }

    /// Builds a polynomial from arbitrary terms, collecting like monomials.
    pub fn from_terms(
        field: F,
        order: TermOrder,
        arity: usize,
        terms: impl IntoIterator<Item = (F::Elem, Monomial)>,
    ) -> Result<Self, PolyError> {
        let mut acc: HashMap<Monomial, F::Elem> = HashMap::new();
        for (c, m) in terms {
            if m.arity() != arity {
                return Err(PolyError::ArityMismatch {
                    expected: arity,
                    found: m.arity(),
                });
            }
            match acc.get_mut(&m) {
                Some(v) => *v = field.add(v, &c),
                None => {
                    acc.insert(m, c);
                }
            }
        }
        Ok(Self::from_map(field, order, arity, acc))
    }

    fn from_map(field: F, order: TermOrder, arity: usize, acc: HashMap<Monomial, F::Elem>) -> Self {
        let mut terms: Vec<(F::Elem, Monomial)> = acc
            .into_iter()
            .filter(|(_, c)| !field.is_zero(c))
            .map(|(m, c)| (c, m))
            .collect();
        terms.sort_by(|a, b| order.compare(&b.1, &a.1));
        Polynomial {
            field,
            order,
            arity,
            terms,
        }
    }

    /// Wraps terms already sorted strictly descending with nonzero coefficients.
    pub(crate) fn from_sorted_terms(
        field: F,
        order: TermOrder,
        arity: usize,
        terms: Vec<(F::Elem, Monomial)>,
    ) -> Self {
        debug_assert!(terms
            .windows(2)
            .all(|w| order.compare(&w[0].1, &w[1].1) == Ordering::Greater));
        Polynomial {
            field,
            order,
            arity,
            terms,
        }
    }

    pub fn field(&self) -> &F {
        &self.field
    }

    pub fn order(&self) -> TermOrder {
        self.order
    }

    pub fn arity(&self) -> usize {
        self.arity
    }

    pub fn terms(&self) -> &[(F::Elem, Monomial)] {
        &self.terms
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_monomial(&self) -> bool {
        self.terms.len() == 1
    }

    /// Leading coefficient and monomial under the polynomial's order.
    pub fn leading_term(&self) -> Result<(&F::Elem, &Monomial), PolyError> {
        self.terms
            .first()
            .map(|(c, m)| (c, m))
            .ok_or(PolyError::ZeroPolynomial)
    }

    pub fn leading_monomial(&self) -> Option<&Monomial> {
        self.terms.first().map(|(_, m)| m)
    }

    pub fn leading_coefficient(&self) -> Option<&F::Elem> {
        self.terms.first().map(|(c, _)| c)
    }

    /// Constant coefficient (zero if absent).
    pub fn constant_term(&self) -> F::Elem {
        match self.terms.last() {
            Some((c, m)) if m.is_one() => c.clone(),
            _ => self.field.zero(),
        }
    }

    /// Largest total degree of a term; `None` for zero.
    pub fn total_degree(&self) -> Option<u32> {
        self.terms.iter().map(|(_, m)| m.degree()).max()
    }

    /// Smallest total degree of a term; `None` for zero.
    pub fn low_degree(&self) -> Option<u32> {
        self.terms.iter().map(|(_, m)| m.degree()).min()
    }

    /// All terms share one total degree (the zero polynomial counts).
    pub fn is_homogeneous(&self) -> bool {
        match self.terms.first() {
            None => true,
            Some((_, m)) => self.terms.iter().all(|(_, t)| t.degree() == m.degree()),
        }
    }

    /// Re-sorts the terms under another order.
    pub fn with_order(&self, order: TermOrder) -> Self {
        let mut out = self.clone();
        out.order = order;
        out.terms.sort_by(|a, b| order.compare(&b.1, &a.1));
        out
    }

    /// Drops every term of total degree `>= degree`.
    pub fn truncate_below(&self, degree: u32) -> Self {
        let mut out = self.clone();
        out.terms.retain(|(_, m)| m.degree() < degree);
        out
    }

    pub fn make_monic(&self) -> Self {
        let Some(lc) = self.leading_coefficient() else {
            return self.clone();
        };
        if self.field.is_one(lc) {
            return self.clone();
        }
        let inv = self.field.inv(lc).expect("leading coefficient is nonzero");
        self.scale(&inv)
    }

    pub fn scale(&self, c: &F::Elem) -> Self {
        if self.field.is_zero(c) {
            return Self::zero(self.field.clone(), self.order, self.arity);
        }
        let terms = self
            .terms
            .iter()
            .map(|(a, m)| (self.field.mul(a, c), *m))
            .collect();
        Polynomial { terms, ..self.clone_shape() }
    }

    /// `c * m * self`.
    pub fn mul_term(&self, c: &F::Elem, m: &Monomial) -> Self {
        if self.field.is_zero(c) {
            return Self::zero(self.field.clone(), self.order, self.arity);
        }
        let terms = self
            .terms
            .iter()
            .map(|(a, t)| (self.field.mul(a, c), *t * *m))
            .collect();
        Polynomial { terms, ..self.clone_shape() }
    }

    fn clone_shape(&self) -> Self {
        Polynomial {
            field: self.field.clone(),
            order: self.order,
            arity: self.arity,
            terms: Vec::new(),
        }
    }

    fn check_compatible(&self, other: &Self) -> Result<(), PolyError> {
        if self.field != other.field {
            return Err(PolyError::MixedFields(self.field.spec(), other.field.spec()));
        }
        if self.arity != other.arity {
            return Err(PolyError::ArityMismatch {
                expected: self.arity,
                found: other.arity,
            });
        }
        if self.order != other.order {
            return Err(PolyError::OrderMismatch);
        }
        Ok(())
    }

    pub fn add(&self, other: &Self) -> Result<Self, PolyError> {
        self.check_compatible(other)?;
        Ok(self.combine(other, false))
    }

    pub fn sub(&self, other: &Self) -> Result<Self, PolyError> {
        self.check_compatible(other)?;
        Ok(self.combine(other, true))
    }

    pub fn neg(&self) -> Self {
        let terms = self
            .terms
            .iter()
            .map(|(c, m)| (self.field.neg(c), *m))
            .collect();
        Polynomial { terms, ..self.clone_shape() }
    }

    /// Merge of two sorted term lists.
    fn combine(&self, other: &Self, subtract: bool) -> Self {
        let f = &self.field;
        let mut terms = Vec::with_capacity(self.terms.len() + other.terms.len());
        let (mut i, mut j) = (0, 0);
        while i < self.terms.len() && j < other.terms.len() {
            let (a, ma) = &self.terms[i];
            let (b, mb) = &other.terms[j];
            match self.order.compare(ma, mb) {
                Ordering::Greater => {
                    terms.push((a.clone(), *ma));
                    i += 1;
                }
                Ordering::Less => {
                    terms.push((if subtract { f.neg(b) } else { b.clone() }, *mb));
                    j += 1;
                }
                Ordering::Equal => {
                    let c = if subtract { f.sub(a, b) } else { f.add(a, b) };
                    if !f.is_zero(&c) {
                        terms.push((c, *ma));
                    }
                    i += 1;
                    j += 1;
                }
            }
        }
        terms.extend(self.terms[i..].iter().cloned());
        terms.extend(
            other.terms[j..]
                .iter()
                .map(|(b, m)| (if subtract { f.neg(b) } else { b.clone() }, *m)),
        );
        Polynomial { terms, ..self.clone_shape() }
    }

    pub fn mul(&self, other: &Self) -> Result<Self, PolyError> {
        self.check_compatible(other)?;
        if self.is_zero() || other.is_zero() {
            return Ok(self.clone_shape());
        }
        if other.is_monomial() {
            let (c, m) = &other.terms[0];
            return Ok(self.mul_term(c, m));
        }
        let f = &self.field;
        let mut acc: HashMap<Monomial, F::Elem> =
            HashMap::with_capacity(self.terms.len() * other.terms.len());
        for (a, ma) in &self.terms {
            for (b, mb) in &other.terms {
                let m = ma.checked_mul(mb).ok_or(PolyError::ExponentOverflow)?;
                let c = f.mul(a, b);
                match acc.get_mut(&m) {
                    Some(v) => *v = f.add(v, &c),
                    None => {
                        acc.insert(m, c);
                    }
                }
            }
        }
        Ok(Self::from_map(f.clone(), self.order, self.arity, acc))
    }

    pub fn pow(&self, k: u32) -> Result<Self, PolyError> {
        let one = self.field.one();
        let mut out = Self::constant(self.field.clone(), self.order, self.arity, one);
        for _ in 0..k {
            out = out.mul(self)?;
        }
        Ok(out)
    }

    /// Linear combination `sum c_i * p_i`.
    pub fn linear_combination(coeffs: &[F::Elem], polys: &[Self]) -> Result<Self, PolyError> {
        let first = polys.first().ok_or(PolyError::ZeroPolynomial)?;
        let mut out = first.clone_shape();
        for (c, p) in coeffs.iter().zip(polys) {
            out = out.add(&p.scale(c))?;
        }
        Ok(out)
    }

    /// Formats with the given variable names, e.g. `x^6*y + y^7`.
    pub fn format_with(&self, vars: &[String]) -> String {
        if self.terms.is_empty() {
            return "0".to_string();
        }
        let mut out = String::new();
        for (k, (c, m)) in self.terms.iter().enumerate() {
            let text = format_elem(&self.field, c);
            let (negative, magnitude) = match text.strip_prefix('-') {
                Some(rest) => (true, rest.to_string()),
                None => (false, text),
            };
            if k == 0 {
                if negative {
                    out.push('-');
                }
            } else {
                out.push_str(if negative { " - " } else { " + " });
            }
            if m.is_one() {
                out.push_str(&magnitude);
            } else if crate::field::is_unit_magnitude(&self.field, c) {
                out.push_str(&m.format_with(vars));
            } else {
                out.push_str(&magnitude);
                out.push('*');
                out.push_str(&m.format_with(vars));
            }
        }
        out
    }
}

/// Leading term of a nonzero polynomial under `order`.
pub fn leading_term<F: Field>(
    f: &Polynomial<F>,
    order: TermOrder,
) -> Result<(F::Elem, Monomial), PolyError> {
    let sorted;
    let f = if f.order() == order {
        f
    } else {
        sorted = f.with_order(order);
        &sorted
    };
    f.leading_term().map(|(c, m)| (c.clone(), *m))
}

/// `S(f, g) = (L / lt(f)) f - (L / lt(g)) g` with `L` the lcm of the leading
/// monomials.
pub fn s_polynomial<F: Field>(
    f: &Polynomial<F>,
    g: &Polynomial<F>,
    order: TermOrder,
) -> Result<Polynomial<F>, PolyError> {
    f.check_compatible(g)?;
    let f = f.with_order(order);
    let g = g.with_order(order);
    let (cf, mf) = f.leading_term()?;
    let (cg, mg) = g.leading_term()?;
    let lcm = mf.lcm(mg);
    let field = f.field();
    let uf = mf.quotient_of(&lcm).expect("lcm is a multiple");
    let ug = mg.quotient_of(&lcm).expect("lcm is a multiple");
    let a = field.inv(cf).expect("nonzero");
    let b = field.inv(cg).expect("nonzero");
    f.mul_term(&a, &uf).sub(&g.mul_term(&b, &ug))
}

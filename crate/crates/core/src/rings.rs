//! Ring presentations `A = S/I_A` localized at the origin, and ideals of `A`
//! given by lifted generators in `S`.
//!
//! Ideal operations work on generator lists in the ambient polynomial ring.
//! Membership is decided there, which is exact for homogeneous data and a
//! sufficient condition otherwise; local questions go through the truncated
//! lengths in [`crate::invariants`].

use std::collections::HashMap;
use std::sync::{Arc, Mutex, OnceLock};

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::field::Field;
use crate::groebner::{buchberger_in, monomial_ideal_dimension, normal_form, GroebnerBasis, GroebnerError};
use crate::poly::{parse_polynomial, Monomial, ParseError, PolyError, Polynomial, TermOrder, MAX_VARS};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum RingError {
    #[error("the defining ideal is the unit ideal")]
    UnitDefiningIdeal,
    #[error("the origin is not on the variety: defining generator {index} has a nonzero constant term")]
    OriginNotOnVariety { index: usize },
    #[error("bad variable names: {0}")]
    BadVariableNames(String),
    #[error("dimension override {given} exceeds the number of variables {arity}")]
    BadDimension { given: usize, arity: usize },
    #[error("ideals belong to different rings")]
    RingMismatch,
    #[error("parse error at {0}")]
    Parse(#[from] ParseError),
    #[error(transparent)]
    Poly(#[from] PolyError),
    #[error(transparent)]
    Groebner(#[from] GroebnerError),
}

/// Where the ring's dimension came from.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum DimSource {
    Computed,
    Override,
}

/// Resource caps applied by default to computations on a ring.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct Limits {
    /// Largest truncation degree tried by the local length.
    pub n_cap: u32,
    /// Largest reduction number searched for.
    pub r_cap: u32,
    /// Draws allowed when sampling a minimal reduction.
    pub max_draws: u32,
}

impl Default for Limits {
    fn default() -> Self {
        Limits {
            n_cap: 30,
            r_cap: 10,
            max_draws: 20,
        }
    }
}

#[derive(Debug, Clone, Default)]
pub struct RingOptions {
    pub name: Option<String>,
    pub dim: Option<usize>,
    pub cm: bool,
    pub limits: Limits,
}

/// `A = S/I_A` with `S = k[x_1..x_n]`, read locally at the origin. The
/// maximal ideal is always `(x_1, ..., x_n)`.
pub struct RingPresentation<F: Field> {
    name: String,
    field: F,
    variables: Vec<String>,
    defining: Vec<Polynomial<F>>,
    order: TermOrder,
    basis: Arc<GroebnerBasis<F>>,
    dim: usize,
    computed_dim: usize,
    dim_source: DimSource,
    cm_asserted: bool,
    homogeneous: bool,
    limits: Limits,
    lengths: Mutex<HashMap<Vec<Polynomial<F>>, usize>>,
}

impl<F: Field> std::fmt::Debug for RingPresentation<F> {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("RingPresentation")
            .field("name", &self.name)
            .field("field", &self.field.spec())
            .field("variables", &self.variables)
            .field("defining", &self.defining_strings())
            .field("dim", &self.dim)
            .finish()
    }
}

fn valid_identifier(s: &str) -> bool {
    let mut chars = s.chars();
    matches!(chars.next(), Some(c) if c.is_ascii_alphabetic() || c == '_')
        && chars.all(|c| c.is_ascii_alphanumeric() || c == '_')
}

/// Builds a ring presentation and caches the Gröbner basis of `I_A`.
pub fn make_ring<F: Field>(
    field: F,
    variables: Vec<String>,
    defining: Vec<Polynomial<F>>,
    order: TermOrder,
    options: RingOptions,
) -> Result<Arc<RingPresentation<F>>, RingError> {
    if variables.len() > MAX_VARS {
        return Err(PolyError::TooManyVariables(variables.len()).into());
    }
    for (i, v) in variables.iter().enumerate() {
        if !valid_identifier(v) {
            return Err(RingError::BadVariableNames(format!("'{v}' is not an identifier")));
        }
        if variables[..i].contains(v) {
            return Err(RingError::BadVariableNames(format!("'{v}' declared twice")));
        }
    }
    let n = variables.len();
    let mut gens = Vec::with_capacity(defining.len());
    for g in defining {
        if g.arity() != n {
            return Err(PolyError::ArityMismatch {
                expected: n,
                found: g.arity(),
            }
            .into());
        }
        if *g.field() != field {
            return Err(PolyError::MixedFields(field.spec(), g.field().spec()).into());
        }
        gens.push(g.with_order(order));
    }
    let basis = buchberger_in(field.clone(), n, &gens, order)?;
    if basis.is_unit() {
        return Err(RingError::UnitDefiningIdeal);
    }
    if let Some(index) = gens.iter().position(|g| !field.is_zero(&g.constant_term())) {
        return Err(RingError::OriginNotOnVariety { index });
    }
    let computed_dim = monomial_ideal_dimension(&basis.leading_monomials(), n)?;
    let (dim, dim_source) = match options.dim {
        Some(d) if d > n => return Err(RingError::BadDimension { given: d, arity: n }),
        Some(d) => (d, DimSource::Override),
        None => (computed_dim, DimSource::Computed),
    };
    let homogeneous = gens.iter().all(Polynomial::is_homogeneous);
    let name = options.name.unwrap_or_else(|| {
        let body = gens
            .iter()
            .map(|g| g.format_with(&variables))
            .collect::<Vec<_>>()
            .join(", ");
        if body.is_empty() {
            format!("{}[{}]", field.spec(), variables.join(","))
        } else {
            format!("{}[{}]/({})", field.spec(), variables.join(","), body)
        }
    });
    Ok(Arc::new(RingPresentation {
        name,
        field,
        variables,
        defining: gens,
        order,
        basis: Arc::new(basis),
        dim,
        computed_dim,
        dim_source,
        cm_asserted: options.cm,
        homogeneous,
        limits: options.limits,
        lengths: Mutex::new(HashMap::new()),
    }))
}

impl<F: Field> RingPresentation<F> {
    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn field(&self) -> &F {
        &self.field
    }

    pub fn variables(&self) -> &[String] {
        &self.variables
    }

    pub fn arity(&self) -> usize {
        self.variables.len()
    }

    pub fn order(&self) -> TermOrder {
        self.order
    }

    pub fn defining(&self) -> &[Polynomial<F>] {
        &self.defining
    }

    pub fn defining_strings(&self) -> Vec<String> {
        self.defining.iter().map(|g| self.format(g)).collect()
    }

    /// Reduced Gröbner basis of `I_A`.
    pub fn basis(&self) -> &Arc<GroebnerBasis<F>> {
        &self.basis
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    /// Dimension read off the leading ideal of `I_A`, ignoring overrides.
    pub fn computed_dim(&self) -> usize {
        self.computed_dim
    }

    pub fn dim_source(&self) -> DimSource {
        self.dim_source
    }

    pub fn cm_asserted(&self) -> bool {
        self.cm_asserted
    }

    /// True when every defining generator is homogeneous.
    pub fn is_homogeneous(&self) -> bool {
        self.homogeneous
    }

    pub fn limits(&self) -> Limits {
        self.limits
    }

    pub fn format(&self, f: &Polynomial<F>) -> String {
        f.format_with(&self.variables)
    }

    pub fn parse_poly(&self, text: &str) -> Result<Polynomial<F>, RingError> {
        let p = parse_polynomial(text, &self.variables)?;
        Ok(p.to_polynomial(&self.field, self.order)?)
    }

    pub fn variable(&self, index: usize) -> Polynomial<F> {
        Polynomial::variable(self.field.clone(), self.order, self.arity(), index)
    }

    pub fn one(&self) -> Polynomial<F> {
        Polynomial::constant(self.field.clone(), self.order, self.arity(), self.field.one())
    }

    pub(crate) fn cached_length(&self, key: &[Polynomial<F>]) -> Option<usize> {
        self.lengths.lock().expect("length cache poisoned").get(key).copied()
    }

    pub(crate) fn store_length(&self, key: Vec<Polynomial<F>>, value: usize) {
        self.lengths.lock().expect("length cache poisoned").insert(key, value);
    }
}

/// Extra constructors that need a shared handle on the ring.
pub trait RingExt<F: Field> {
    fn ideal(&self, generators: Vec<Polynomial<F>>) -> Result<IdealHandle<F>, RingError>;
    fn ideal_from_strs(&self, generators: &[&str]) -> Result<IdealHandle<F>, RingError>;
    fn maximal_ideal(&self) -> IdealHandle<F>;
    fn unit_ideal(&self) -> IdealHandle<F>;
    fn zero_ideal(&self) -> IdealHandle<F>;
}

impl<F: Field> RingExt<F> for Arc<RingPresentation<F>> {
    fn ideal(&self, generators: Vec<Polynomial<F>>) -> Result<IdealHandle<F>, RingError> {
        let n = self.arity();
        let mut gens = Vec::with_capacity(generators.len());
        for g in generators {
            if g.arity() != n {
                return Err(PolyError::ArityMismatch {
                    expected: n,
                    found: g.arity(),
                }
                .into());
            }
            if *g.field() != self.field {
                return Err(PolyError::MixedFields(self.field.spec(), g.field().spec()).into());
            }
            gens.push(if g.order() == self.order {
                g
            } else {
                g.with_order(self.order)
            });
        }
        Ok(IdealHandle::new(self.clone(), gens))
    }

    fn ideal_from_strs(&self, generators: &[&str]) -> Result<IdealHandle<F>, RingError> {
        let gens = generators
            .iter()
            .map(|t| self.parse_poly(t))
            .collect::<Result<Vec<_>, _>>()?;
        self.ideal(gens)
    }

    fn maximal_ideal(&self) -> IdealHandle<F> {
        let gens = (0..self.arity()).map(|i| self.variable(i)).collect();
        IdealHandle::new(self.clone(), gens)
    }

    fn unit_ideal(&self) -> IdealHandle<F> {
        IdealHandle::new(self.clone(), vec![self.one()])
    }

    fn zero_ideal(&self) -> IdealHandle<F> {
        IdealHandle::new(self.clone(), Vec::new())
    }
}

/// An ideal of `A` given by generators in the ambient ring.
#[derive(Clone)]
pub struct IdealHandle<F: Field> {
    ring: Arc<RingPresentation<F>>,
    generators: Vec<Polynomial<F>>,
    basis: OnceLock<Arc<GroebnerBasis<F>>>,
}

impl<F: Field> std::fmt::Debug for IdealHandle<F> {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{}", self.format())
    }
}

impl<F: Field> IdealHandle<F> {
    fn new(ring: Arc<RingPresentation<F>>, generators: Vec<Polynomial<F>>) -> Self {
        IdealHandle {
            ring,
            generators,
            basis: OnceLock::new(),
        }
    }

    pub fn ring(&self) -> &Arc<RingPresentation<F>> {
        &self.ring
    }

    pub fn generators(&self) -> &[Polynomial<F>] {
        &self.generators
    }

    pub fn len(&self) -> usize {
        self.generators.len()
    }

    pub fn is_empty(&self) -> bool {
        self.generators.is_empty()
    }

    pub fn format(&self) -> String {
        let gens: Vec<String> = self.generators.iter().map(|g| self.ring.format(g)).collect();
        format!("({})", gens.join(", "))
    }

    pub fn generator_strings(&self) -> Vec<String> {
        self.generators.iter().map(|g| self.ring.format(g)).collect()
    }

    fn same_ring(&self, other: &Self) -> Result<(), RingError> {
        if Arc::ptr_eq(&self.ring, &other.ring) {
            Ok(())
        } else {
            Err(RingError::RingMismatch)
        }
    }

    /// Concatenation of generator lists.
    pub fn sum(&self, other: &Self) -> Result<Self, RingError> {
        self.same_ring(other)?;
        let mut gens = self.generators.clone();
        gens.extend(other.generators.iter().cloned());
        Ok(Self::new(self.ring.clone(), gens))
    }

    /// All pairwise products of generators, without pruning.
    pub fn product(&self, other: &Self) -> Result<Self, RingError> {
        self.same_ring(other)?;
        let mut gens = Vec::with_capacity(self.len() * other.len());
        for f in &self.generators {
            for g in &other.generators {
                gens.push(f.mul(g)?);
            }
        }
        Ok(Self::new(self.ring.clone(), gens))
    }

    /// `I^k` by repeated products, pruned after every step; `I^0 = (1)`.
    pub fn power(&self, k: u32) -> Result<Self, RingError> {
        match k {
            0 => Ok(self.ring.unit_ideal()),
            1 => Ok(self.clone()),
            _ => {
                let base = self.simplified()?;
                let mut acc = base.clone();
                for _ in 1..k {
                    acc = acc.product(&base)?.simplified()?;
                }
                Ok(acc)
            }
        }
    }

    /// The same ideal of `A` with a tidier generator list: generators are
    /// reduced modulo `I_A`, made monic and deduplicated; zero generators
    /// and generators whose terms all lie in a monomial generator's ideal
    /// are dropped. The result is sorted by descending leading monomial.
    pub fn simplified(&self) -> Result<Self, RingError> {
        let ring_basis = self.ring.basis();
        let mut gens: Vec<Polynomial<F>> = Vec::with_capacity(self.len());
        for g in &self.generators {
            let r = if ring_basis.is_empty() {
                g.clone()
            } else {
                normal_form(g, ring_basis)?
            };
            if r.is_zero() {
                continue;
            }
            let r = r.make_monic();
            if !gens.contains(&r) {
                gens.push(r);
            }
        }
        let monomials: Vec<(usize, Monomial)> = gens
            .iter()
            .enumerate()
            .filter(|(_, g)| g.is_monomial())
            .map(|(i, g)| (i, *g.leading_monomial().expect("nonzero")))
            .collect();
        // gens are deduplicated, so a monomial never strikes itself out
        let keep: Vec<bool> = gens
            .iter()
            .enumerate()
            .map(|(i, g)| {
                !monomials
                    .iter()
                    .any(|&(j, m)| j != i && g.terms().iter().all(|(_, t)| m.divides(t)))
            })
            .collect();
        let order = self.ring.order;
        let mut out: Vec<Polynomial<F>> = gens
            .into_iter()
            .zip(keep)
            .filter_map(|(g, k)| k.then_some(g))
            .collect();
        out.sort_by(|a, b| {
            order.compare(
                b.leading_monomial().expect("nonzero"),
                a.leading_monomial().expect("nonzero"),
            )
        });
        Ok(Self::new(self.ring.clone(), out))
    }

    /// Gröbner basis of `I_A + I` in the ambient ring, computed once.
    pub fn ambient_basis(&self) -> Result<Arc<GroebnerBasis<F>>, RingError> {
        if let Some(b) = self.basis.get() {
            return Ok(b.clone());
        }
        let b = Arc::new(self.ring.basis().extend(&self.generators)?);
        Ok(self.basis.get_or_init(|| b).clone())
    }

    /// Ambient membership `f ∈ I + I_A`.
    pub fn contains(&self, f: &Polynomial<F>) -> Result<bool, RingError> {
        let basis = self.ambient_basis()?;
        Ok(normal_form(f, &basis)?.is_zero())
    }

    /// Ambient containment of every generator of `other`.
    pub fn contains_ideal(&self, other: &Self) -> Result<bool, RingError> {
        self.same_ring(other)?;
        for g in &other.generators {
            if !self.contains(g)? {
                return Ok(false);
            }
        }
        Ok(true)
    }

    /// True when every generator is homogeneous.
    pub fn is_homogeneous(&self) -> bool {
        self.generators.iter().all(Polynomial::is_homogeneous)
    }

    /// Indices of generators that vanish modulo `I_A`.
    pub fn redundant_generators(&self) -> Result<Vec<usize>, RingError> {
        let mut out = Vec::new();
        for (i, g) in self.generators.iter().enumerate() {
            if g.is_zero() || normal_form(g, self.ring.basis())?.is_zero() {
                out.push(i);
            }
        }
        Ok(out)
    }
}

pub fn ideal_sum<F: Field>(i: &IdealHandle<F>, j: &IdealHandle<F>) -> Result<IdealHandle<F>, RingError> {
    i.sum(j)
}

pub fn ideal_product<F: Field>(
    i: &IdealHandle<F>,
    j: &IdealHandle<F>,
) -> Result<IdealHandle<F>, RingError> {
    i.product(j)
}

pub fn ideal_power<F: Field>(i: &IdealHandle<F>, k: u32) -> Result<IdealHandle<F>, RingError> {
    i.power(k)
}

pub fn contains<F: Field>(i: &IdealHandle<F>, f: &Polynomial<F>) -> Result<bool, RingError> {
    i.contains(f)
}

pub fn is_homogeneous<F: Field>(i: &IdealHandle<F>) -> bool {
    i.is_homogeneous()
}

//! Buchberger's algorithm, normal forms and staircase counting.
//!
//! Pair handling follows the Gebauer–Möller installation of the product and
//! chain criteria; pairs are processed by the normal strategy (smallest lcm
//! first). Every basis handed out is reduced, monic and sorted by descending
//! leading monomial, which makes it unique for a given ideal and order.

use std::cmp::Ordering;

use thiserror::Error;

use crate::field::Field;
use crate::poly::{Monomial, PolyError, Polynomial, TermOrder};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GroebnerError {
    #[error("quotient is not finite-dimensional: no pure power of variable {variable} among leading monomials")]
    InfiniteStaircase { variable: usize },
    #[error("the ideal is the whole ring")]
    IdealIsUnit,
    #[error(transparent)]
    Poly(#[from] PolyError),
}

/// A reduced Gröbner basis together with the order it was computed for.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GroebnerBasis<F: Field> {
    field: F,
    order: TermOrder,
    arity: usize,
    generators: Vec<Polynomial<F>>,
    reduced: bool,
}

impl<F: Field> GroebnerBasis<F> {
    pub fn generators(&self) -> &[Polynomial<F>] {
        &self.generators
    }

    pub fn order(&self) -> TermOrder {
        self.order
    }

    pub fn arity(&self) -> usize {
        self.arity
    }

    pub fn field(&self) -> &F {
        &self.field
    }

    pub fn is_reduced(&self) -> bool {
        self.reduced
    }

    pub fn len(&self) -> usize {
        self.generators.len()
    }

    pub fn is_empty(&self) -> bool {
        self.generators.is_empty()
    }

    pub fn leading_monomials(&self) -> Vec<Monomial> {
        self.generators
            .iter()
            .map(|g| *g.leading_monomial().expect("basis elements are nonzero"))
            .collect()
    }

    pub fn is_unit(&self) -> bool {
        self.generators
            .iter()
            .any(|g| g.leading_monomial().is_some_and(Monomial::is_one))
    }

    pub fn contains(&self, f: &Polynomial<F>) -> Result<bool, GroebnerError> {
        Ok(normal_form(f, self)?.is_zero())
    }

    /// Basis of the ideal generated by `self` and `extra`. Pairs among the
    /// existing elements are known to reduce to zero and are not revisited.
    pub fn extend(&self, extra: &[Polynomial<F>]) -> Result<GroebnerBasis<F>, GroebnerError> {
        let extra = prepare(extra, &self.field, self.order, self.arity)?;
        let mut b = Builder::new(self.field.clone(), self.order);
        for g in &self.generators {
            b.install_without_pairs(g.clone());
        }
        b.run(extra);
        Ok(b.finish(self.arity))
    }

    /// Checks Buchberger's criterion directly: every S-polynomial of basis
    /// elements reduces to zero.
    pub fn satisfies_buchberger_criterion(&self) -> bool {
        let gs = &self.generators;
        for i in 0..gs.len() {
            for j in i + 1..gs.len() {
                let s = crate::poly::s_polynomial(&gs[i], &gs[j], self.order)
                    .expect("compatible basis elements");
                if !divide(&s, gs).is_zero() {
                    return false;
                }
            }
        }
        true
    }
}

/// Remainder of `f` on division by `G`: the highest reducible term is
/// reduced first, using the first dividing element in basis order.
pub fn normal_form<F: Field>(
    f: &Polynomial<F>,
    basis: &GroebnerBasis<F>,
) -> Result<Polynomial<F>, GroebnerError> {
    if f.arity() != basis.arity {
        return Err(PolyError::ArityMismatch {
            expected: basis.arity,
            found: f.arity(),
        }
        .into());
    }
    if *f.field() != basis.field {
        return Err(PolyError::MixedFields(basis.field.spec(), f.field().spec()).into());
    }
    let f = if f.order() == basis.order {
        f.clone()
    } else {
        f.with_order(basis.order)
    };
    Ok(divide(&f, &basis.generators))
}

/// Multivariate division of `f` by an arbitrary list of divisors.
pub fn divide<F: Field>(f: &Polynomial<F>, divisors: &[Polynomial<F>]) -> Polynomial<F> {
    let ds: Vec<Divisor<F>> = divisors
        .iter()
        .enumerate()
        .filter(|(_, g)| !g.is_zero())
        .map(|(i, g)| Divisor::new(g, i))
        .collect();
    reduce_with(f, &ds, divisors)
}

struct Divisor<F: Field> {
    lm: Monomial,
    mask: u32,
    lc_inv: F::Elem,
    index: usize,
}

impl<F: Field> Divisor<F> {
    fn new(g: &Polynomial<F>, index: usize) -> Self {
        let (lc, lm) = g.leading_term().expect("nonzero divisor");
        Divisor {
            lm: *lm,
            mask: lm.support_mask(),
            lc_inv: g.field().inv(lc).expect("nonzero leading coefficient"),
            index,
        }
    }
}

fn reduce_with<F: Field>(
    f: &Polynomial<F>,
    ds: &[Divisor<F>],
    polys: &[Polynomial<F>],
) -> Polynomial<F> {
    let field = f.field().clone();
    let order = f.order();
    // ascending work list: the current leading term sits at the end
    let mut work: Vec<(F::Elem, Monomial)> = f.terms().iter().rev().cloned().collect();
    let mut rem: Vec<(F::Elem, Monomial)> = Vec::new();
    while let Some((c, m)) = work.last() {
        let mask = m.support_mask();
        let hit = ds
            .iter()
            .find(|d| d.mask & !mask == 0 && d.lm.divides(m));
        match hit {
            None => rem.push(work.pop().expect("nonempty")),
            Some(d) => {
                let q = d.lm.quotient_of(m).expect("divides");
                let coef = field.mul(c, &d.lc_inv);
                work.pop();
                let tail = &polys[d.index].terms()[1..];
                work = subtract_multiple(&field, order, &work, &coef, &q, tail);
            }
        }
    }
    Polynomial::from_sorted_terms(field, order, f.arity(), rem)
}

/// `work - coef * q * tail`, where `work` is ascending and `tail` descending.
fn subtract_multiple<F: Field>(
    field: &F,
    order: TermOrder,
    work: &[(F::Elem, Monomial)],
    coef: &F::Elem,
    q: &Monomial,
    tail: &[(F::Elem, Monomial)],
) -> Vec<(F::Elem, Monomial)> {
    let mut out = Vec::with_capacity(work.len() + tail.len());
    let mut other = tail.iter().rev().map(|(c, m)| (field.mul(c, coef), *m * *q));
    let mut next = other.next();
    let mut i = 0;
    while let Some((b, mb)) = &next {
        if i == work.len() {
            break;
        }
        let (a, ma) = &work[i];
        match order.compare(ma, mb) {
            Ordering::Less => {
                out.push((a.clone(), *ma));
                i += 1;
            }
            Ordering::Greater => {
                out.push((field.neg(b), *mb));
                next = other.next();
            }
            Ordering::Equal => {
                let c = field.sub(a, b);
                if !field.is_zero(&c) {
                    out.push((c, *ma));
                }
                i += 1;
                next = other.next();
            }
        }
    }
    out.extend(work[i..].iter().cloned());
    while let Some((b, mb)) = next {
        out.push((field.neg(&b), mb));
        next = other.next();
    }
    out
}

/// Reduced Gröbner basis of the ideal generated by `gens` under `order`.
/// Zero generators are dropped; an empty list gives the zero ideal.
pub fn buchberger<F: Field>(
    gens: &[Polynomial<F>],
    order: TermOrder,
) -> Result<GroebnerBasis<F>, GroebnerError> {
    let first = gens.first().ok_or(PolyError::ZeroPolynomial)?;
    buchberger_in(first.field().clone(), first.arity(), gens, order)
}

/// Like [`buchberger`], but well-defined for an empty generator list.
pub fn buchberger_in<F: Field>(
    field: F,
    arity: usize,
    gens: &[Polynomial<F>],
    order: TermOrder,
) -> Result<GroebnerBasis<F>, GroebnerError> {
    let gens = prepare(gens, &field, order, arity)?;
    if gens.iter().all(Polynomial::is_monomial) {
        return Ok(monomial_basis(field, order, arity, gens));
    }
    let mut b = Builder::new(field, order);
    b.run(gens);
    Ok(b.finish(arity))
}

fn prepare<F: Field>(
    gens: &[Polynomial<F>],
    field: &F,
    order: TermOrder,
    arity: usize,
) -> Result<Vec<Polynomial<F>>, GroebnerError> {
    let mut out = Vec::with_capacity(gens.len());
    for g in gens {
        if g.arity() != arity {
            return Err(PolyError::ArityMismatch {
                expected: arity,
                found: g.arity(),
            }
            .into());
        }
        if g.field() != field {
            return Err(PolyError::MixedFields(field.spec(), g.field().spec()).into());
        }
        if g.is_zero() {
            continue;
        }
        out.push(if g.order() == order {
            g.clone()
        } else {
            g.with_order(order)
        });
    }
    Ok(out)
}

/// Minimal generators of a monomial ideal; already a reduced basis.
fn monomial_basis<F: Field>(
    field: F,
    order: TermOrder,
    arity: usize,
    gens: Vec<Polynomial<F>>,
) -> GroebnerBasis<F> {
    let mut lms: Vec<Monomial> = gens
        .iter()
        .map(|g| *g.leading_monomial().expect("nonzero"))
        .collect();
    lms.sort_by(|a, b| a.degree().cmp(&b.degree()).then(order.compare(a, b)));
    lms.dedup();
    let mut minimal: Vec<Monomial> = Vec::new();
    for m in lms {
        if !minimal.iter().any(|d| d.divides(&m)) {
            minimal.push(m);
        }
    }
    minimal.sort_by(|a, b| order.compare(b, a));
    let generators = minimal
        .into_iter()
        .map(|m| Polynomial::monomial(field.clone(), order, field.one(), m))
        .collect();
    GroebnerBasis {
        field,
        order,
        arity,
        generators,
        reduced: true,
    }
}

struct Pair {
    i: usize,
    j: usize,
    lcm: Monomial,
}

struct Builder<F: Field> {
    field: F,
    order: TermOrder,
    polys: Vec<Polynomial<F>>,
    lms: Vec<Monomial>,
    /// Indices of the current basis, in insertion order.
    active: Vec<usize>,
    divisors: Vec<Divisor<F>>,
    pairs: Vec<Pair>,
}

impl<F: Field> Builder<F> {
    fn new(field: F, order: TermOrder) -> Self {
        Builder {
            field,
            order,
            polys: Vec::new(),
            lms: Vec::new(),
            active: Vec::new(),
            divisors: Vec::new(),
            pairs: Vec::new(),
        }
    }

    fn install_without_pairs(&mut self, g: Polynomial<F>) {
        let idx = self.polys.len();
        self.lms.push(*g.leading_monomial().expect("nonzero"));
        self.polys.push(g);
        self.active.push(idx);
        self.divisors.push(Divisor::new(&self.polys[idx], idx));
    }

    fn reduce(&self, f: &Polynomial<F>) -> Polynomial<F> {
        reduce_with(f, &self.divisors, &self.polys)
    }

    fn run(&mut self, inputs: Vec<Polynomial<F>>) {
        for f in inputs {
            let h = self.reduce(&f);
            if !h.is_zero() {
                self.insert(h.make_monic());
                if self.lms.last().is_some_and(Monomial::is_one) {
                    self.pairs.clear();
                    return;
                }
            }
        }
        while let Some(pair) = self.select() {
            let s = crate::poly::s_polynomial(&self.polys[pair.i], &self.polys[pair.j], self.order)
                .expect("compatible basis elements");
            let h = self.reduce(&s);
            if !h.is_zero() {
                self.insert(h.make_monic());
                if self.lms.last().is_some_and(Monomial::is_one) {
                    self.pairs.clear();
                    return;
                }
            }
        }
    }

    fn select(&mut self) -> Option<Pair> {
        let order = self.order;
        let best = self
            .pairs
            .iter()
            .enumerate()
            .min_by(|(_, a), (_, b)| {
                order
                    .compare(&a.lcm, &b.lcm)
                    .then(a.i.cmp(&b.i))
                    .then(a.j.cmp(&b.j))
            })
            .map(|(k, _)| k)?;
        Some(self.pairs.swap_remove(best))
    }

    /// Gebauer–Möller update for a new element `h`.
    fn insert(&mut self, h: Polynomial<F>) {
        let hi = self.polys.len();
        let lh = *h.leading_monomial().expect("nonzero");
        self.polys.push(h);
        self.lms.push(lh);

        let mut candidates: Vec<(usize, Monomial, bool)> = self
            .active
            .iter()
            .map(|&g| (g, lh.lcm(&self.lms[g]), lh.is_coprime(&self.lms[g])))
            .collect();
        let mut kept: Vec<(usize, Monomial, bool)> = Vec::new();
        while !candidates.is_empty() {
            let (g1, l1, coprime) = candidates.remove(0);
            let dominated = candidates
                .iter()
                .chain(kept.iter())
                .any(|(_, l2, _)| l2.divides(&l1));
            if coprime || !dominated {
                kept.push((g1, l1, coprime));
            }
        }

        let lms = &self.lms;
        self.pairs.retain(|p| {
            !(lh.divides(&p.lcm)
                && lms[p.i].lcm(&lh) != p.lcm
                && lh.lcm(&lms[p.j]) != p.lcm)
        });
        self.pairs.extend(
            kept.into_iter()
                .filter(|(_, _, coprime)| !coprime)
                .map(|(g, lcm, _)| Pair {
                    i: g.min(hi),
                    j: g.max(hi),
                    lcm,
                }),
        );

        self.active.retain(|&g| !lh.divides(&lms[g]));
        self.active.push(hi);
        let divisors = self
            .active
            .iter()
            .map(|&g| Divisor::new(&self.polys[g], g))
            .collect();
        self.divisors = divisors;
    }

    fn finish(self, arity: usize) -> GroebnerBasis<F> {
        let Builder {
            field,
            order,
            polys,
            active,
            ..
        } = self;
        let basis: Vec<&Polynomial<F>> = active.iter().map(|&g| &polys[g]).collect();
        if let Some(unit) = basis.iter().find(|g| g.leading_monomial().is_some_and(Monomial::is_one)) {
            return GroebnerBasis {
                field: field.clone(),
                order,
                arity,
                generators: vec![unit.make_monic()],
                reduced: true,
            };
        }
        // the active set is a minimal basis; reduce tails against the others
        let mut generators = Vec::with_capacity(basis.len());
        for (k, g) in basis.iter().enumerate() {
            let others: Vec<Polynomial<F>> = basis
                .iter()
                .enumerate()
                .filter(|(l, _)| *l != k)
                .map(|(_, p)| (*p).clone())
                .collect();
            generators.push(divide(g, &others).make_monic());
        }
        generators.sort_by(|a, b| {
            order.compare(
                b.leading_monomial().expect("nonzero"),
                a.leading_monomial().expect("nonzero"),
            )
        });
        GroebnerBasis {
            field,
            order,
            arity,
            generators,
            reduced: true,
        }
    }
}

/// Monomials outside the leading ideal of `basis`, in ascending exponent
/// order. Errors when the staircase is infinite.
pub fn standard_monomials<F: Field>(
    basis: &GroebnerBasis<F>,
) -> Result<Vec<Monomial>, GroebnerError> {
    let mut out = Vec::new();
    walk_staircase(basis, |m| out.push(*m))?;
    Ok(out)
}

/// Number of standard monomials, i.e. the dimension of the quotient.
pub fn count_standard_monomials<F: Field>(
    basis: &GroebnerBasis<F>,
) -> Result<usize, GroebnerError> {
    let mut n = 0;
    walk_staircase(basis, |_| n += 1)?;
    Ok(n)
}

fn walk_staircase<F: Field>(
    basis: &GroebnerBasis<F>,
    mut visit: impl FnMut(&Monomial),
) -> Result<(), GroebnerError> {
    let lms = basis.leading_monomials();
    if lms.iter().any(Monomial::is_one) {
        return Ok(());
    }
    let n = basis.arity;
    let mut bounds = vec![u32::MAX; n];
    for m in &lms {
        if let Some(v) = m.pure_power_variable() {
            bounds[v] = bounds[v].min(m.exponent(v));
        }
    }
    if let Some(variable) = bounds.iter().position(|&b| b == u32::MAX) {
        return Err(GroebnerError::InfiniteStaircase { variable });
    }
    let mut exps = vec![0u32; n];
    fn rec(
        i: usize,
        exps: &mut Vec<u32>,
        bounds: &[u32],
        lms: &[Monomial],
        visit: &mut dyn FnMut(&Monomial),
    ) {
        if i == exps.len() {
            visit(&Monomial::from_exponents(exps).expect("bounded exponents"));
            return;
        }
        for e in 0..bounds[i] {
            exps[i] = e;
            let m = Monomial::from_exponents(exps).expect("bounded exponents");
            if lms.iter().any(|l| l.divides(&m)) {
                break;
            }
            rec(i + 1, exps, bounds, lms, visit);
        }
        exps[i] = 0;
    }
    rec(0, &mut exps, &bounds, &lms, &mut visit);
    Ok(())
}

/// Krull dimension of `S / (monomials)`: the size of a largest set of
/// variables containing the support of no generator.
pub fn monomial_ideal_dimension(monomials: &[Monomial], arity: usize) -> Result<usize, GroebnerError> {
    if monomials.iter().any(Monomial::is_one) {
        return Err(GroebnerError::IdealIsUnit);
    }
    let supports: Vec<u32> = monomials.iter().map(Monomial::support_mask).collect();
    let best = (0u32..1 << arity)
        .filter(|&set| supports.iter().all(|&s| s & !set != 0))
        .map(|set| set.count_ones() as usize)
        .max()
        .unwrap_or(0);
    Ok(best)
}

//! Engine-side drivers shared by the integration tests and the acceptance
//! target.
#![allow(dead_code)]

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use redinv::corpus;
use redinv::groebner::{buchberger_in, count_standard_monomials, divide, GroebnerBasis};
use redinv::input::{parse_input, ParsedInput};
use redinv::invariants::{colength_homogeneous, colength_local};
use redinv::rings::RingExt;
use redinv::{Field, Monomial, Polynomial, PrimeField, Rationals, TermOrder};

use crate::oracles;

pub const VARS: [&str; 3] = ["x", "y", "z"];

pub fn corpus_ring(name: &str) -> ParsedInput<PrimeField> {
    corpus::entry(name).unwrap().load(PrimeField::default()).unwrap()
}

pub fn corpus_ring_q(name: &str) -> ParsedInput<Rationals> {
    corpus::entry(name).unwrap().load(Rationals).unwrap()
}

pub fn polynomial_ring(arity: usize) -> ParsedInput<PrimeField> {
    parse_input(&format!("char 32003; vars {};", VARS[..arity].join(" ")), PrimeField::default()).unwrap()
}

pub fn monomial_text(exps: &[u32], vars: &[&str]) -> String {
    let factors: Vec<String> = exps
        .iter()
        .zip(vars)
        .filter(|(e, _)| **e > 0)
        .map(|(e, v)| format!("{v}^{e}"))
        .collect();
    if factors.is_empty() {
        "1".into()
    } else {
        factors.join("*")
    }
}

pub fn random_monomial_ideal(rng: &mut impl Rng, arity: usize) -> Vec<Vec<u32>> {
    let mut gens = Vec::new();
    for v in 0..arity {
        // occasionally leave a variable without a pure power
        if rng.gen_ratio(1, 12) {
            continue;
        }
        let mut g = vec![0; arity];
        g[v] = rng.gen_range(1..=6);
        gens.push(g);
    }
    for _ in 0..rng.gen_range(0..5) {
        gens.push((0..arity).map(|_| rng.gen_range(0..5)).collect());
    }
    gens
}

/// Compares the staircase oracle with the graded and the local length on
/// `count` random monomial ideals in one to three variables. Returns the
/// number of cases with a finite quotient.
pub fn staircase_agreement(count: usize, seed: u64) -> Result<usize, String> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let rings: Vec<_> = (1..=3).map(polynomial_ring).collect();
    let mut finite = 0;
    for case in 0..count {
        let arity = 1 + case % 3;
        let gens = random_monomial_ideal(&mut rng, arity);
        let ring = &rings[arity - 1].ring;
        let texts: Vec<String> = gens.iter().map(|g| monomial_text(g, &VARS[..arity])).collect();
        let k = ring
            .ideal_from_strs(&texts.iter().map(String::as_str).collect::<Vec<_>>())
            .map_err(|e| e.to_string())?;
        let oracle = oracles::staircase_count(&gens, arity);
        let graded = colength_homogeneous(&k).ok();
        if graded != oracle {
            return Err(format!("{texts:?}: graded {graded:?}, staircase {oracle:?}"));
        }
        if let Some(v) = oracle {
            finite += 1;
            let local = colength_local(&k, 30).map_err(|e| format!("{texts:?}: {e}"))?;
            if local != v {
                return Err(format!("{texts:?}: local {local}, staircase {v}"));
            }
        }
    }
    Ok(finite)
}

pub fn random_polynomial<F: Field>(
    field: &F,
    rng: &mut impl Rng,
    arity: usize,
    max_terms: usize,
    max_exp: u32,
) -> Polynomial<F> {
    loop {
        let terms = (0..rng.gen_range(1..=max_terms)).map(|_| {
            let exps: Vec<u32> = (0..arity).map(|_| rng.gen_range(0..=max_exp)).collect();
            let c = field.from_i64(rng.gen_range(-9..=9));
            (c, Monomial::from_exponents(&exps).unwrap())
        });
        let p = Polynomial::from_terms(field.clone(), TermOrder::DegRevLex, arity, terms.collect::<Vec<_>>()).unwrap();
        if !p.is_zero() {
            return p;
        }
    }
}

/// `S(f, g)` assembled from leading terms and monomial shifts.
fn s_pair<F: Field>(f: &Polynomial<F>, g: &Polynomial<F>) -> Polynomial<F> {
    let (cf, mf) = f.leading_term().unwrap();
    let (cg, mg) = g.leading_term().unwrap();
    let field = f.field();
    let exps: Vec<u32> = (0..f.arity()).map(|v| mf.exponent(v).max(mg.exponent(v))).collect();
    let shift = |m: &Monomial| {
        let e: Vec<u32> = (0..f.arity()).map(|v| exps[v] - m.exponent(v)).collect();
        Monomial::from_exponents(&e).unwrap()
    };
    let a = f.mul_term(&field.inv(cf).unwrap(), &shift(mf));
    let b = g.mul_term(&field.inv(cg).unwrap(), &shift(mg));
    a.sub(&b).unwrap()
}

fn sorted_generators<F: Field>(g: &GroebnerBasis<F>) -> Vec<String> {
    let names: Vec<String> = VARS[..g.arity()].iter().map(|s| s.to_string()).collect();
    let mut v: Vec<String> = g.generators().iter().map(|p| p.format_with(&names)).collect();
    v.sort();
    v
}

/// S-pairs, membership of random combinations, shuffle invariance and
/// order independence of the staircase size, on one random ideal.
pub fn groebner_case<F: Field>(field: F, rng: &mut impl Rng, arity: usize) -> Result<(), String> {
    let n_gens = rng.gen_range(1..=3);
    let gens: Vec<Polynomial<F>> = (0..n_gens).map(|_| random_polynomial(&field, rng, arity, 3, 3)).collect();
    let g = buchberger_in(field.clone(), arity, &gens, TermOrder::DegRevLex).map_err(|e| e.to_string())?;
    let basis = g.generators();
    for i in 0..basis.len() {
        for j in i + 1..basis.len() {
            if !divide(&s_pair(&basis[i], &basis[j]), basis).is_zero() {
                return Err(format!("S-pair ({i},{j}) of {gens:?} does not reduce to 0"));
            }
        }
    }
    for f in &gens {
        if !g.contains(f).map_err(|e| e.to_string())? {
            return Err(format!("generator {f:?} not a member"));
        }
    }
    let mut combo = Polynomial::zero(field.clone(), TermOrder::DegRevLex, arity);
    for f in &gens {
        let c = random_polynomial(&field, rng, arity, 2, 2);
        combo = combo.add(&c.mul(f).unwrap()).unwrap();
    }
    if !g.contains(&combo).map_err(|e| e.to_string())? {
        return Err(format!("combination of {gens:?} not a member"));
    }
    let mut shuffled = gens.clone();
    shuffled.shuffle(rng);
    let h = buchberger_in(field.clone(), arity, &shuffled, TermOrder::DegRevLex).map_err(|e| e.to_string())?;
    if sorted_generators(&g) != sorted_generators(&h) {
        return Err(format!("shuffling changed the reduced basis of {gens:?}"));
    }
    let lex = buchberger_in(field, arity, &gens, TermOrder::Lex).map_err(|e| e.to_string())?;
    let (a, b) = (count_standard_monomials(&g).ok(), count_standard_monomials(&lex).ok());
    if a != b {
        return Err(format!("staircase sizes differ between orders: {a:?} vs {b:?} for {gens:?}"));
    }
    Ok(())
}

/// Runs [`groebner_case`] on `count` ideals over F_32003, F_101 and the
/// rationals.
pub fn groebner_properties(count: usize, seed: u64) -> Result<(), String> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for case in 0..count {
        let arity = 2 + case % 2;
        match case % 10 {
            0 => groebner_case(Rationals, &mut rng, 2),
            1..=3 => groebner_case(PrimeField::new(101).unwrap(), &mut rng, arity),
            _ => groebner_case(PrimeField::default(), &mut rng, arity),
        }
        .map_err(|e| format!("case {case}: {e}"))?;
    }
    Ok(())
}

//! Brute-force references for the test suite. Nothing here calls into the
//! engine: monomials are exponent vectors, semigroup rings are integer sets
//! and graded hypersurfaces are binomial sums.
#![allow(dead_code)]

use std::cmp::Ordering;
use std::collections::BTreeSet;

/// Degree first; on a tie the monomial with the smaller exponent in the last
/// differing variable is larger.
pub fn degrevlex_cmp(a: &[u32], b: &[u32]) -> Ordering {
    let (da, db): (u32, u32) = (a.iter().sum(), b.iter().sum());
    if da != db {
        return da.cmp(&db);
    }
    for i in (0..a.len()).rev() {
        if a[i] != b[i] {
            return b[i].cmp(&a[i]);
        }
    }
    Ordering::Equal
}

pub fn lex_cmp(a: &[u32], b: &[u32]) -> Ordering {
    a.cmp(b)
}

fn divides(a: &[u32], b: &[u32]) -> bool {
    a.iter().zip(b).all(|(x, y)| x <= y)
}

/// Number of monomials outside the ideal generated by `gens`, or `None`
/// when some variable has no pure power among them.
pub fn staircase_count(gens: &[Vec<u32>], arity: usize) -> Option<usize> {
    if gens.iter().any(|g| g.iter().all(|&e| e == 0)) {
        return Some(0);
    }
    let mut bounds = Vec::with_capacity(arity);
    for v in 0..arity {
        let pure = gens
            .iter()
            .filter(|g| g.iter().enumerate().all(|(i, &e)| i == v || e == 0))
            .map(|g| g[v])
            .min()?;
        bounds.push(pure);
    }
    let mut count = 0;
    let mut point = vec![0u32; arity];
    loop {
        if !gens.iter().any(|g| divides(g, &point)) {
            count += 1;
        }
        let mut i = 0;
        loop {
            if i == arity {
                return Some(count);
            }
            point[i] += 1;
            if point[i] < bounds[i] {
                break;
            }
            point[i] = 0;
            i += 1;
        }
    }
}

/// Generators of the product of two monomial ideals (not minimalized).
pub fn monomial_product(a: &[Vec<u32>], b: &[Vec<u32>]) -> Vec<Vec<u32>> {
    let mut out = BTreeSet::new();
    for x in a {
        for y in b {
            out.insert(x.iter().zip(y).map(|(p, q)| p + q).collect::<Vec<_>>());
        }
    }
    out.into_iter().collect()
}

pub fn monomial_power(a: &[Vec<u32>], k: u32, arity: usize) -> Vec<Vec<u32>> {
    let mut acc = vec![vec![0; arity]];
    for _ in 0..k {
        acc = monomial_product(&acc, a);
    }
    acc
}

/// `times`-fold forward differences of `values`.
pub fn differences(values: &[i64], times: usize) -> Vec<i64> {
    let mut v = values.to_vec();
    for _ in 0..times {
        v = v.windows(2).map(|w| w[1] - w[0]).collect();
    }
    v
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SemigroupInvariants {
    pub e: usize,
    pub mu_m: usize,
    pub mu_m2: usize,
    /// `λ(m³/t^a m²)` for the smallest generator `a`.
    pub lambda3_with_j_smallest: usize,
    /// `λ(A/m^n)` for `n = 0, 1, ...`.
    pub hilbert_samuel: Vec<usize>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct NotNumericalSemigroup;

fn gcd(a: u32, b: u32) -> u32 {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}

/// Invariants of `k[[t^a : a in gens]]` with `m^k` read as the set of sums
/// of `k` nonzero semigroup elements.
pub fn semigroup_invariants(gens: &[u32]) -> Result<SemigroupInvariants, NotNumericalSemigroup> {
    if gens.is_empty() || gens.contains(&0) || gens.iter().copied().fold(0, gcd) != 1 {
        return Err(NotNumericalSemigroup);
    }
    let top = *gens.iter().max().expect("nonempty") as usize;
    let n = 64 * top + 64;
    let mut in_s = vec![false; n];
    in_s[0] = true;
    for s in 1..n {
        in_s[s] = gens.iter().any(|&g| g as usize <= s && in_s[s - g as usize]);
    }
    let m1: Vec<bool> = (0..n).map(|s| s > 0 && in_s[s]).collect();
    let levels = 2 * top + 4;
    let mut powers = vec![in_s.clone(), m1.clone()];
    for _ in 2..=levels {
        let prev = powers.last().expect("nonempty");
        let mut next = vec![false; n];
        for s in 0..n {
            if prev[s] {
                for t in 1..n - s {
                    if m1[t] {
                        next[s + t] = true;
                    }
                }
            }
        }
        powers.push(next);
    }
    for (k, p) in powers.iter().enumerate() {
        // the window must see the whole complement of m^k
        assert!((n / 2..n).all(|s| !in_s[s] || p[s]), "window too small for m^{k}");
    }
    let colength = |p: &Vec<bool>| (0..n).filter(|&s| in_s[s] && !p[s]).count();
    let hilbert_samuel: Vec<usize> = powers.iter().map(colength).collect();
    let gap = |a: &Vec<bool>, b: &Vec<bool>| (0..n).filter(|&s| a[s] && !b[s]).count();
    let mu = |k: usize| gap(&powers[k], &powers[k + 1]);
    let tail: Vec<usize> = (levels - 4..levels).map(mu).collect();
    assert!(tail.windows(2).all(|w| w[0] == w[1]), "Hilbert function not yet constant");
    let a = *gens.iter().min().expect("nonempty") as usize;
    let mut shifted = vec![false; n];
    shifted[a..].copy_from_slice(&powers[2][..n - a]);
    Ok(SemigroupInvariants {
        e: tail[0],
        mu_m: mu(1),
        mu_m2: mu(2),
        lambda3_with_j_smallest: gap(&powers[3], &shifted),
        hilbert_samuel,
    })
}

fn binomial(n: i64, k: i64) -> i64 {
    if k < 0 || n < k {
        return 0;
    }
    (0..k).fold(1i64, |acc, i| acc * (n - i) / (i + 1))
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GradedInvariants {
    pub d: usize,
    pub e: usize,
    pub mu_m: usize,
    pub mu_m2: usize,
    /// `λ(A/m^n)` for `n = 0, 1, ...`.
    pub hilbert_samuel: Vec<usize>,
}

/// Hilbert function of `k[x_1..x_n]/(f)` for `f` of degree `degree`, or of
/// the polynomial ring when `degree` is `None`: the coefficients of
/// `(1 − t^s)/(1 − t)^n`.
pub fn hypersurface_hilbert_function(n_vars: u32, degree: Option<u32>, upto: usize) -> Vec<i64> {
    let n = i64::from(n_vars);
    (0..=upto as i64)
        .map(|k| {
            let full = binomial(k + n - 1, n - 1);
            match degree {
                None => full,
                Some(s) => full - binomial(k - i64::from(s) + n - 1, n - 1),
            }
        })
        .collect()
}

/// Invariants of a standard graded hypersurface (or polynomial ring) from its
/// Hilbert series alone.
pub fn graded_invariants(n_vars: u32, degree: Option<u32>) -> GradedInvariants {
    let upto = 40;
    let h = hypersurface_hilbert_function(n_vars, degree, upto);
    let d = if degree.is_some() { n_vars - 1 } else { n_vars } as usize;
    let diffs = differences(&h, d - 1);
    let e = *diffs.last().expect("long enough");
    assert!(diffs[diffs.len() - 5..].iter().all(|&v| v == e));
    let mut hs = vec![0usize];
    for v in &h {
        hs.push(hs.last().expect("nonempty") + *v as usize);
    }
    GradedInvariants {
        d,
        e: e as usize,
        mu_m: h[1] as usize,
        mu_m2: h[2] as usize,
        hilbert_samuel: hs,
    }
}

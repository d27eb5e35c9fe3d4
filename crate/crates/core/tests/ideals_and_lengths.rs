mod common;
mod oracles;

use common::{corpus_ring, polynomial_ring, random_polynomial};
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use redinv::experiments::{invariant_report, DEFAULT_SEED};
use redinv::input::parse_input;
use redinv::invariants::{
    check_cohen_macaulay, colength, colength_homogeneous, colength_local, hilbert_samuel, length_quotient,
    CmVerdict,
};
use redinv::reduction::sample_minimal_reduction;
use redinv::rings::RingExt;
use redinv::{Field, IdealHandle, Monomial, Polynomial, PrimeField, TermOrder};

fn random_form(field: &PrimeField, rng: &mut impl Rng, arity: usize, degree: u32) -> Polynomial<PrimeField> {
    loop {
        let monomials = redinv::poly::monomials_of_degree(arity, degree);
        let terms: Vec<(u64, Monomial)> = (0..rng.gen_range(1..=3))
            .map(|_| (field.from_i64(rng.gen_range(1..=20)), monomials[rng.gen_range(0..monomials.len())]))
            .collect();
        let p = Polynomial::from_terms(*field, TermOrder::DegRevLex, arity, terms).unwrap();
        if !p.is_zero() {
            return p;
        }
    }
}

fn random_ideal(ring_arity: usize, rng: &mut impl Rng, ring: &redinv::input::ParsedInput<PrimeField>) -> IdealHandle<PrimeField> {
    let f = PrimeField::default();
    let gens = (0..rng.gen_range(1..=2))
        .map(|_| random_polynomial(&f, rng, ring_arity, 2, 2))
        .collect();
    ring.ring.ideal(gens).unwrap()
}

fn same_ideal(a: &IdealHandle<PrimeField>, b: &IdealHandle<PrimeField>) -> bool {
    a.contains_ideal(b).unwrap() && b.contains_ideal(a).unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(40))]

    #[test]
    fn product_is_commutative_and_associative(seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let ring = polynomial_ring(2);
        let (i, j, k) = (random_ideal(2, &mut rng, &ring), random_ideal(2, &mut rng, &ring), random_ideal(2, &mut rng, &ring));
        prop_assert!(same_ideal(&i.product(&j).unwrap(), &j.product(&i).unwrap()));
        let left = i.product(&j).unwrap().product(&k).unwrap();
        let right = i.product(&j.product(&k).unwrap()).unwrap();
        prop_assert!(same_ideal(&left, &right));
    }

    #[test]
    fn powers_multiply(seed in any::<u64>(), a in 1u32..=3, b in 1u32..=2) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let ring = polynomial_ring(2);
        let i = random_ideal(2, &mut rng, &ring);
        let lhs = i.power(a).unwrap().product(&i.power(b).unwrap()).unwrap();
        prop_assert!(same_ideal(&lhs, &i.power(a + b).unwrap()));
    }

    #[test]
    fn ideals_contain_their_combinations(seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let input = corpus_ring(["quadric", "curve345", "space"][seed as usize % 3]);
        let arity = input.ring.arity();
        let i = random_ideal(arity, &mut rng, &input);
        let f = PrimeField::default();
        let mut combo = Polynomial::zero(f, TermOrder::DegRevLex, arity);
        for g in i.generators() {
            prop_assert!(i.contains(g).unwrap());
            combo = combo.add(&random_polynomial(&f, &mut rng, arity, 2, 2).mul(g).unwrap()).unwrap();
        }
        prop_assert!(i.contains(&combo).unwrap());
    }

    #[test]
    fn length_is_monotone(seed in any::<u64>(), a in 2u32..=4) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let input = corpus_ring(["plane", "quadric", "curve345", "cubic"][seed as usize % 4]);
        let arity = input.ring.arity();
        let small = input.ring.maximal_ideal().power(a).unwrap().sum(&random_ideal(arity, &mut rng, &input)).unwrap();
        let big = small.sum(&random_ideal(arity, &mut rng, &input)).unwrap();
        prop_assert!(colength(&big).unwrap() <= colength(&small).unwrap());
    }

    #[test]
    fn graded_and_local_lengths_agree(seed in any::<u64>(), a in 2u32..=4) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let input = corpus_ring(["plane", "space", "quadric", "cubic"][seed as usize % 4]);
        let arity = input.ring.arity();
        let f = PrimeField::default();
        let forms: Vec<_> = (0..rng.gen_range(0..=2)).map(|_| {
            let d = rng.gen_range(1..=a);
            random_form(&f, &mut rng, arity, d)
        }).collect();
        let k = input.ring.maximal_ideal().power(a).unwrap().sum(&input.ring.ideal(forms).unwrap()).unwrap();
        prop_assert!(k.is_homogeneous());
        prop_assert_eq!(colength_local(&k, 30).unwrap(), colength_homogeneous(&k).unwrap());
    }
}

#[test]
fn lengths_add_along_jm2_in_jm() {
    for name in ["plane", "space", "quadric", "cubic", "curve345", "curve4567"] {
        let input = corpus_ring(name);
        let m = input.ring.maximal_ideal();
        for seed in 0..5 {
            let j = sample_minimal_reduction(&m, seed, 20).unwrap().ideal;
            let jm = j.product(&m).unwrap();
            let jm2 = j.product(&m.power(2).unwrap()).unwrap();
            let direct = length_quotient(&jm2, &jm).unwrap();
            assert_eq!(colength(&jm2).unwrap() - colength(&jm).unwrap(), direct, "{name}");
        }
    }
}

#[test]
fn hilbert_samuel_differences_settle_at_e() {
    for name in ["plane", "space", "quadric", "cubic", "curve345", "curve4567"] {
        let input = corpus_ring(name);
        let e = invariant_report(&input.ring, DEFAULT_SEED).unwrap().e as i64;
        let mut hs: Vec<i64> = vec![0];
        hs.extend(hilbert_samuel(&input.ring, 10).unwrap().iter().map(|&v| v as i64));
        let diffs = oracles::differences(&hs, input.ring.dim());
        assert!(diffs[diffs.len() - 3..].iter().all(|&v| v == e), "{name}: {diffs:?}");
    }
}

#[test]
fn embedded_point_is_not_cohen_macaulay() {
    // k[x,y]/(x^2, xy): e from the staircase of (x^2, xy) + m^n; modulo a
    // linear form y + ax the ring is k[x]/(x^2)
    let hs: Vec<i64> = (1..=8)
        .map(|n| {
            let mut gens = vec![vec![2, 0], vec![1, 1]];
            gens.extend((0..=n).map(|i| vec![i, n - i]));
            oracles::staircase_count(&gens, 2).unwrap() as i64
        })
        .collect();
    let e = *oracles::differences(&hs, 1).last().unwrap();
    let input = parse_input("char 32003; vars x y; mod x^2, x*y;", PrimeField::default()).unwrap();
    let check = check_cohen_macaulay(&input.ring, DEFAULT_SEED);
    assert_eq!(check.verdict, CmVerdict::NotCm);
    assert_eq!(check.multiplicity, Some(e as usize));
    assert_eq!(check.colength_of_reduction, Some(2));
}

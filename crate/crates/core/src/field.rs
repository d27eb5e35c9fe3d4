//! Exact coefficient fields.
//!
//! The engine is generic over [`Field`]; the two implementations are
//! [`PrimeField`] (residues modulo a word-size prime) and [`Rationals`]
//! (arbitrary-precision fractions). [`FieldSpec`] and [`FieldElement`] give a
//! runtime-tagged view of the same arithmetic for callers that only learn the
//! characteristic at run time.

use std::fmt;
use std::hash::Hash;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use rand::Rng;
use thiserror::Error;

/// Characteristic used by experiments unless told otherwise.
pub const DEFAULT_PRIME: u64 = 32003;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum FieldError {
    #[error("division by zero")]
    DivisionByZero,
    #[error("operands belong to different fields ({0} vs {1})")]
    MixedFields(FieldSpec, FieldSpec),
    #[error("{0} is not prime")]
    NotPrime(u64),
}

/// Arithmetic contract shared by all coefficient fields.
///
/// Elements are plain values; the field object carries whatever context the
/// arithmetic needs (the modulus for prime fields).
#[allow(clippy::wrong_self_convention)]
pub trait Field: Clone + PartialEq + Eq + Hash + fmt::Debug + Send + Sync + 'static {
    type Elem: Clone + PartialEq + Eq + Hash + fmt::Debug + Send + Sync;

    fn spec(&self) -> FieldSpec;
    fn zero(&self) -> Self::Elem;
    fn one(&self) -> Self::Elem;
    fn is_zero(&self, a: &Self::Elem) -> bool;
    fn add(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    fn sub(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    fn neg(&self, a: &Self::Elem) -> Self::Elem;
    fn mul(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    fn inv(&self, a: &Self::Elem) -> Result<Self::Elem, FieldError>;
    fn from_bigint(&self, v: &BigInt) -> Self::Elem;
    /// Image of the fraction `num/den`; fails when `den` vanishes in the field.
    fn from_fraction(&self, num: &BigInt, den: &BigInt) -> Result<Self::Elem, FieldError> {
        let d = self.from_bigint(den);
        let n = self.from_bigint(num);
        self.div(&n, &d)
    }
    /// A random element. Prime fields draw uniformly from all residues;
    /// the rationals draw small integers.
    fn random<R: Rng + ?Sized>(&self, rng: &mut R) -> Self::Elem;
    /// Canonical signed representation as a fraction, used for printing.
    fn to_fraction(&self, a: &Self::Elem) -> BigRational;

    fn is_one(&self, a: &Self::Elem) -> bool {
        *a == self.one()
    }

    fn from_i64(&self, v: i64) -> Self::Elem {
        self.from_bigint(&BigInt::from(v))
    }

    fn div(&self, a: &Self::Elem, b: &Self::Elem) -> Result<Self::Elem, FieldError> {
        Ok(self.mul(a, &self.inv(b)?))
    }
}

/// The prime field F_p for a word-size prime p.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct PrimeField {
    p: u64,
}

impl PrimeField {
    pub fn new(p: u64) -> Result<Self, FieldError> {
        if !is_prime(p) {
            return Err(FieldError::NotPrime(p));
        }
        Ok(PrimeField { p })
    }

    pub fn modulus(&self) -> u64 {
        self.p
    }

    /// Reduces an arbitrary integer into `[0, p)`.
    pub fn reduce_i128(&self, v: i128) -> u64 {
        v.rem_euclid(self.p as i128) as u64
    }
}

impl Default for PrimeField {
    fn default() -> Self {
        PrimeField { p: DEFAULT_PRIME }
    }
}

impl Field for PrimeField {
    type Elem = u64;

    fn spec(&self) -> FieldSpec {
        FieldSpec::Prime(self.p)
    }

    fn zero(&self) -> u64 {
        0
    }

    fn one(&self) -> u64 {
        1 % self.p
    }

    fn is_zero(&self, a: &u64) -> bool {
        *a == 0
    }

    fn add(&self, a: &u64, b: &u64) -> u64 {
        let s = *a as u128 + *b as u128;
        (s % self.p as u128) as u64
    }

    fn sub(&self, a: &u64, b: &u64) -> u64 {
        if a >= b {
            a - b
        } else {
            self.p - (b - a)
        }
    }

    fn neg(&self, a: &u64) -> u64 {
        if *a == 0 {
            0
        } else {
            self.p - a
        }
    }

    fn mul(&self, a: &u64, b: &u64) -> u64 {
        ((*a as u128 * *b as u128) % self.p as u128) as u64
    }

    fn inv(&self, a: &u64) -> Result<u64, FieldError> {
        if *a == 0 {
            return Err(FieldError::DivisionByZero);
        }
        // extended Euclid on (a, p)
        let (mut r0, mut r1) = (self.p as i128, *a as i128);
        let (mut t0, mut t1) = (0i128, 1i128);
        while r1 != 0 {
            let q = r0 / r1;
            (r0, r1) = (r1, r0 - q * r1);
            (t0, t1) = (t1, t0 - q * t1);
        }
        debug_assert_eq!(r0, 1);
        Ok(self.reduce_i128(t0))
    }

    fn from_bigint(&self, v: &BigInt) -> u64 {
        let r = v.mod_floor(&BigInt::from(self.p));
        r.to_u64().expect("residue fits in a word")
    }

    fn random<R: Rng + ?Sized>(&self, rng: &mut R) -> u64 {
        rng.gen_range(0..self.p)
    }

    fn to_fraction(&self, a: &u64) -> BigRational {
        // symmetric residue in (-p/2, p/2]
        let v = if *a > self.p / 2 {
            *a as i128 - self.p as i128
        } else {
            *a as i128
        };
        BigRational::from_integer(BigInt::from(v))
    }
}

/// The field of rational numbers.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Hash)]
pub struct Rationals;

/// Magnitude bound for random rational coefficients.
const RATIONAL_SAMPLE_BOUND: i64 = 1000;

impl Field for Rationals {
    type Elem = BigRational;

    fn spec(&self) -> FieldSpec {
        FieldSpec::Rational
    }

    fn zero(&self) -> BigRational {
        BigRational::zero()
    }

    fn one(&self) -> BigRational {
        BigRational::one()
    }

    fn is_zero(&self, a: &BigRational) -> bool {
        a.is_zero()
    }

    fn add(&self, a: &BigRational, b: &BigRational) -> BigRational {
        a + b
    }

    fn sub(&self, a: &BigRational, b: &BigRational) -> BigRational {
        a - b
    }

    fn neg(&self, a: &BigRational) -> BigRational {
        -a
    }

    fn mul(&self, a: &BigRational, b: &BigRational) -> BigRational {
        a * b
    }

    fn inv(&self, a: &BigRational) -> Result<BigRational, FieldError> {
        if a.is_zero() {
            return Err(FieldError::DivisionByZero);
        }
        Ok(a.recip())
    }

    fn from_bigint(&self, v: &BigInt) -> BigRational {
        BigRational::from_integer(v.clone())
    }

    fn from_fraction(&self, num: &BigInt, den: &BigInt) -> Result<BigRational, FieldError> {
        if den.is_zero() {
            return Err(FieldError::DivisionByZero);
        }
        Ok(BigRational::new(num.clone(), den.clone()))
    }

    fn random<R: Rng + ?Sized>(&self, rng: &mut R) -> BigRational {
        let v = rng.gen_range(-RATIONAL_SAMPLE_BOUND..=RATIONAL_SAMPLE_BOUND);
        BigRational::from_integer(BigInt::from(v))
    }

    fn to_fraction(&self, a: &BigRational) -> BigRational {
        a.clone()
    }
}

/// Runtime description of a coefficient field.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum FieldSpec {
    Prime(u64),
    Rational,
}

impl FieldSpec {
    /// Builds a spec from a characteristic, `0` meaning the rationals.
    pub fn from_characteristic(c: u64) -> Result<Self, FieldError> {
        if c == 0 {
            Ok(FieldSpec::Rational)
        } else if is_prime(c) {
            Ok(FieldSpec::Prime(c))
        } else {
            Err(FieldError::NotPrime(c))
        }
    }

    pub fn characteristic(&self) -> u64 {
        match self {
            FieldSpec::Prime(p) => *p,
            FieldSpec::Rational => 0,
        }
    }

    pub fn element_from_i64(&self, v: i64) -> FieldElement {
        match self {
            FieldSpec::Prime(p) => FieldElement::Prime {
                value: PrimeField { p: *p }.from_i64(v),
                modulus: *p,
            },
            FieldSpec::Rational => FieldElement::Rational(BigRational::from_integer(v.into())),
        }
    }

    pub fn element_from_fraction(&self, num: i64, den: i64) -> Result<FieldElement, FieldError> {
        let (n, d) = (BigInt::from(num), BigInt::from(den));
        match self {
            FieldSpec::Prime(p) => Ok(FieldElement::Prime {
                value: PrimeField { p: *p }.from_fraction(&n, &d)?,
                modulus: *p,
            }),
            FieldSpec::Rational => Ok(FieldElement::Rational(Rationals.from_fraction(&n, &d)?)),
        }
    }
}

impl fmt::Display for FieldSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            FieldSpec::Prime(p) => write!(f, "F_{p}"),
            FieldSpec::Rational => write!(f, "Q"),
        }
    }
}

/// A field element tagged with its field.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum FieldElement {
    Prime { value: u64, modulus: u64 },
    Rational(BigRational),
}

/// Binary operations of [`FieldElement::apply`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FieldOp {
    Add,
    Sub,
    Mul,
    Div,
}

impl FieldElement {
    pub fn spec(&self) -> FieldSpec {
        match self {
            FieldElement::Prime { modulus, .. } => FieldSpec::Prime(*modulus),
            FieldElement::Rational(_) => FieldSpec::Rational,
        }
    }

    pub fn is_zero(&self) -> bool {
        match self {
            FieldElement::Prime { value, .. } => *value == 0,
            FieldElement::Rational(r) => r.is_zero(),
        }
    }

    pub fn apply(&self, op: FieldOp, other: &FieldElement) -> Result<FieldElement, FieldError> {
        match (self, other) {
            (
                FieldElement::Prime { value: a, modulus: p },
                FieldElement::Prime { value: b, modulus: q },
            ) if p == q => {
                let f = PrimeField { p: *p };
                let value = match op {
                    FieldOp::Add => f.add(a, b),
                    FieldOp::Sub => f.sub(a, b),
                    FieldOp::Mul => f.mul(a, b),
                    FieldOp::Div => f.div(a, b)?,
                };
                Ok(FieldElement::Prime { value, modulus: *p })
            }
            (FieldElement::Rational(a), FieldElement::Rational(b)) => {
                let f = Rationals;
                let value = match op {
                    FieldOp::Add => f.add(a, b),
                    FieldOp::Sub => f.sub(a, b),
                    FieldOp::Mul => f.mul(a, b),
                    FieldOp::Div => f.div(a, b)?,
                };
                Ok(FieldElement::Rational(value))
            }
            _ => Err(FieldError::MixedFields(self.spec(), other.spec())),
        }
    }

    pub fn inverse(&self) -> Result<FieldElement, FieldError> {
        match self {
            FieldElement::Prime { value, modulus } => Ok(FieldElement::Prime {
                value: PrimeField { p: *modulus }.inv(value)?,
                modulus: *modulus,
            }),
            FieldElement::Rational(r) => Ok(FieldElement::Rational(Rationals.inv(r)?)),
        }
    }
}

impl fmt::Display for FieldElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            FieldElement::Prime { value, .. } => write!(f, "{value}"),
            FieldElement::Rational(r) => write!(f, "{r}"),
        }
    }
}

/// Formats an element as a signed fraction (`-3`, `5/7`).
pub fn format_elem<F: Field>(field: &F, a: &F::Elem) -> String {
    let r = field.to_fraction(a);
    if r.denom().is_one() {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

/// True when the absolute value of the fraction form is one.
pub(crate) fn is_unit_magnitude<F: Field>(field: &F, a: &F::Elem) -> bool {
    let r = field.to_fraction(a);
    r.abs().is_one()
}

/// Deterministic Miller–Rabin, exact for every `u64`.
pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    for p in [2u64, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37] {
        if n.is_multiple_of(p) {
            return n == p;
        }
    }
    let mul = |a: u64, b: u64| ((a as u128 * b as u128) % n as u128) as u64;
    let pow = |mut b: u64, mut e: u64| {
        let mut r = 1u64;
        while e > 0 {
            if e & 1 == 1 {
                r = mul(r, b);
            }
            b = mul(b, b);
            e >>= 1;
        }
        r
    };
    let mut d = n - 1;
    let mut s = 0;
    while d.is_multiple_of(2) {
        d /= 2;
        s += 1;
    }
    'witness: for a in [2u64, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37] {
        let mut x = pow(a, d);
        if x == 1 || x == n - 1 {
            continue;
        }
        for _ in 1..s {
            x = mul(x, x);
            if x == n - 1 {
                continue 'witness;
            }
        }
        return false;
    }
    true
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn rat(n: i64, d: i64) -> BigRational {
        BigRational::new(n.into(), d.into())
    }

    #[test]
    fn prime_field_division() {
        let f = PrimeField::new(7).unwrap();
        assert_eq!(f.div(&3, &5).unwrap(), 2);
        assert_eq!(f.inv(&3).unwrap(), 5);
        assert_eq!(f.inv(&1).unwrap(), 1);
        assert_eq!(f.inv(&0), Err(FieldError::DivisionByZero));
    }

    #[test]
    fn rational_arithmetic() {
        let q = Rationals;
        assert_eq!(q.add(&rat(1, 2), &rat(1, 3)), rat(5, 6));
        assert_eq!(q.inv(&rat(-2, 3)).unwrap(), rat(-3, 2));
        assert_eq!(q.inv(&rat(0, 1)), Err(FieldError::DivisionByZero));
    }

    #[test]
    fn tagged_elements_reject_mixing() {
        let a = FieldSpec::Prime(7).element_from_i64(3);
        let b = FieldSpec::Prime(11).element_from_i64(3);
        let c = FieldSpec::Rational.element_from_i64(3);
        assert!(matches!(a.apply(FieldOp::Add, &b), Err(FieldError::MixedFields(..))));
        assert!(matches!(a.apply(FieldOp::Mul, &c), Err(FieldError::MixedFields(..))));
        let five = FieldSpec::Prime(7).element_from_i64(5);
        assert_eq!(
            a.apply(FieldOp::Div, &five).unwrap(),
            FieldSpec::Prime(7).element_from_i64(2)
        );
        let zero = FieldSpec::Prime(7).element_from_i64(0);
        assert_eq!(a.apply(FieldOp::Div, &zero), Err(FieldError::DivisionByZero));
        let half = FieldSpec::Rational.element_from_fraction(1, 2).unwrap();
        let third = FieldSpec::Rational.element_from_fraction(1, 3).unwrap();
        assert_eq!(
            half.apply(FieldOp::Add, &third).unwrap(),
            FieldSpec::Rational.element_from_fraction(5, 6).unwrap()
        );
        assert_eq!(
            FieldSpec::Rational
                .element_from_fraction(-2, 3)
                .unwrap()
                .inverse()
                .unwrap(),
            FieldSpec::Rational.element_from_fraction(-3, 2).unwrap()
        );
    }

    #[test]
    fn primality() {
        let small: Vec<u64> = (0..60).filter(|&n| is_prime(n)).collect();
        assert_eq!(
            small,
            vec![2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41, 43, 47, 53, 59]
        );
        assert!(is_prime(32003));
        assert!(!is_prime(32001));
        assert!(is_prime(18446744073709551557));
        assert!(!is_prime(3215031751)); // strong pseudoprime to 2,3,5,7
        assert!(FieldSpec::from_characteristic(4).is_err());
        assert_eq!(FieldSpec::from_characteristic(0).unwrap(), FieldSpec::Rational);
    }

    #[test]
    fn symmetric_printing() {
        let f = PrimeField::new(7).unwrap();
        assert_eq!(format_elem(&f, &6), "-1");
        assert_eq!(format_elem(&f, &3), "3");
        assert_eq!(format_elem(&Rationals, &rat(6, -4)), "-3/2");
    }

    fn fp() -> PrimeField {
        PrimeField::default()
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(10_000))]

        #[test]
        fn prime_field_axioms(a in 0u64..32003, b in 0u64..32003, c in 0u64..32003) {
            let f = fp();
            prop_assert_eq!(f.add(&f.add(&a, &b), &c), f.add(&a, &f.add(&b, &c)));
            prop_assert_eq!(f.mul(&f.mul(&a, &b), &c), f.mul(&a, &f.mul(&b, &c)));
            prop_assert_eq!(f.add(&a, &b), f.add(&b, &a));
            prop_assert_eq!(f.mul(&a, &b), f.mul(&b, &a));
            prop_assert_eq!(f.mul(&a, &f.add(&b, &c)), f.add(&f.mul(&a, &b), &f.mul(&a, &c)));
            prop_assert_eq!(f.add(&a, &f.neg(&a)), 0);
            prop_assert_eq!(f.sub(&f.add(&a, &b), &b), a);
            if a != 0 {
                prop_assert_eq!(f.mul(&a, &f.inv(&a).unwrap()), 1);
            }
        }

        #[test]
        fn rational_field_axioms(
            an in -50i64..50, ad in 1i64..20,
            bn in -50i64..50, bd in 1i64..20,
            cn in -50i64..50, cd in -20i64..-1,
        ) {
            let q = Rationals;
            let (a, b, c) = (rat(an, ad), rat(bn, bd), rat(cn, cd));
            let results = [
                q.add(&q.add(&a, &b), &c),
                q.mul(&q.mul(&a, &b), &c),
                q.mul(&a, &q.add(&b, &c)),
                q.sub(&a, &c),
            ];
            prop_assert_eq!(&results[0], &q.add(&a, &q.add(&b, &c)));
            prop_assert_eq!(&results[1], &q.mul(&a, &q.mul(&b, &c)));
            prop_assert_eq!(&results[2], &q.add(&q.mul(&a, &b), &q.mul(&a, &c)));
            for r in &results {
                // lowest terms, positive denominator
                prop_assert!(r.denom().is_positive());
                prop_assert!(r.numer().gcd(r.denom()).is_one());
            }
            if !a.is_zero() {
                prop_assert_eq!(q.mul(&a, &q.inv(&a).unwrap()), q.one());
            }
        }
    }
}

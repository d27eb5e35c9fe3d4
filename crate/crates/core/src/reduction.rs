//! Reductions of m-primary ideals: testing `JI^r = I^{r+1}` through lengths,
//! and sampling minimal reductions as random combinations of generators.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::field::{format_elem, Field};
use crate::invariants::{check_containment, colength, length_difference, mu, LengthError};
use crate::poly::Polynomial;
use crate::rings::{IdealHandle, RingError, RingExt};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ReductionError {
    #[error(transparent)]
    Length(#[from] LengthError),
    #[error("no verified minimal reduction among {0} draws")]
    ExhaustedDraws(u32),
    #[error("no reduction number up to the cap {0}")]
    RCapExceeded(u32),
    #[error("J is not contained in I")]
    NotContained,
    #[error("the ideal has no generators to combine")]
    NoGenerators,
}

impl From<RingError> for ReductionError {
    fn from(e: RingError) -> Self {
        ReductionError::Length(e.into())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case", tag = "result", content = "r")]
pub enum ReductionTest {
    Yes(u32),
    No,
}

/// Smallest `r <= r_cap` with `λ(I^{r+1}/JI^r) = 0`. A `J` whose products
/// are not of finite colength cannot be a reduction and yields `No`.
pub fn is_reduction<F: Field>(
    j: &IdealHandle<F>,
    i: &IdealHandle<F>,
    r_cap: u32,
) -> Result<ReductionTest, ReductionError> {
    match check_containment(j, i) {
        Ok(()) => {}
        Err(LengthError::ContainmentFailed { .. }) => return Err(ReductionError::NotContained),
        Err(e) => return Err(e.into()),
    }
    colength(i)?;
    let base = i.simplified()?;
    let mut power = i.ring().unit_ideal();
    for r in 0..=r_cap {
        let next = if r == 0 {
            base.clone()
        } else {
            power.product(&base)?.simplified()?
        };
        let jr = j.product(&power)?;
        match length_difference(&jr, &next) {
            Ok(0) => return Ok(ReductionTest::Yes(r)),
            Ok(_) => {}
            Err(e) if e.is_not_finite() => return Ok(ReductionTest::No),
            Err(e) => return Err(e.into()),
        }
        power = next;
    }
    Ok(ReductionTest::No)
}

/// `J` is a reduction of `I` with exactly `d` listed generators and
/// `μ(J) = d`.
pub fn is_minimal_reduction<F: Field>(
    j: &IdealHandle<F>,
    i: &IdealHandle<F>,
    r_cap: u32,
) -> Result<bool, ReductionError> {
    Ok(minimality(j, i, r_cap)?.is_ok())
}

/// Either the reduction number of a minimal reduction or why `J` fails.
fn minimality<F: Field>(
    j: &IdealHandle<F>,
    i: &IdealHandle<F>,
    r_cap: u32,
) -> Result<Result<u32, String>, ReductionError> {
    let d = i.ring().dim();
    if j.len() != d {
        return Ok(Err(format!("{} generators, dimension {d}", j.len())));
    }
    let r = match is_reduction(j, i, r_cap)? {
        ReductionTest::Yes(r) => r,
        ReductionTest::No => return Ok(Err(format!("not a reduction up to r = {r_cap}"))),
    };
    let m = mu(j)?;
    if m != d {
        return Ok(Err(format!("μ(J) = {m}, dimension {d}")));
    }
    Ok(Ok(r))
}

/// The least `r` with `JI^r = I^{r+1}`.
pub fn reduction_number<F: Field>(
    j: &IdealHandle<F>,
    i: &IdealHandle<F>,
    r_cap: u32,
) -> Result<u32, ReductionError> {
    match is_reduction(j, i, r_cap)? {
        ReductionTest::Yes(r) => Ok(r),
        ReductionTest::No => Err(ReductionError::RCapExceeded(r_cap)),
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum SampleStatus {
    Verified,
    Rejected(String),
}

/// A candidate minimal reduction built from a coefficient matrix.
#[derive(Debug, Clone)]
pub struct ReductionSample<F: Field> {
    pub ideal: IdealHandle<F>,
    /// Row `k` holds the coefficients of the `k`-th generator of `J` on the
    /// listed generators of `I`.
    pub coefficients: Vec<Vec<F::Elem>>,
    pub status: SampleStatus,
    pub reduction_number: Option<u32>,
    pub seed: u64,
    pub stream: u64,
    pub draw_index: u32,
}

/// Serializable form of a [`ReductionSample`].
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ReductionRecord {
    pub generators: Vec<String>,
    pub coefficients: Vec<Vec<String>>,
    /// `verified` or `rejected`.
    pub status: String,
    pub reason: Option<String>,
    pub reduction_number: Option<u32>,
    pub seed: u64,
    pub stream: u64,
    pub draw_index: u32,
}

impl<F: Field> ReductionSample<F> {
    /// Forms `J` from `coefficients` and classifies it.
    pub fn from_coefficients(
        i: &IdealHandle<F>,
        coefficients: Vec<Vec<F::Elem>>,
        r_cap: u32,
    ) -> Result<Self, ReductionError> {
        let gens = coefficients
            .iter()
            .map(|row| Polynomial::linear_combination(row, i.generators()))
            .collect::<Result<Vec<_>, _>>()
            .map_err(RingError::from)?;
        let ideal = i.ring().ideal(gens)?;
        let (status, reduction_number) = if ideal.generators().iter().any(Polynomial::is_zero) {
            (SampleStatus::Rejected("a combination vanished".into()), None)
        } else {
            match minimality(&ideal, i, r_cap)? {
                Ok(r) => (SampleStatus::Verified, Some(r)),
                Err(reason) => (SampleStatus::Rejected(reason), None),
            }
        };
        Ok(ReductionSample {
            ideal,
            coefficients,
            status,
            reduction_number,
            seed: 0,
            stream: 0,
            draw_index: 0,
        })
    }

    pub fn is_verified(&self) -> bool {
        self.status == SampleStatus::Verified
    }

    pub fn record(&self) -> ReductionRecord {
        let field = self.ideal.ring().field();
        ReductionRecord {
            generators: self.ideal.generator_strings(),
            coefficients: self
                .coefficients
                .iter()
                .map(|row| row.iter().map(|c| format_elem(field, c)).collect())
                .collect(),
            status: match self.status {
                SampleStatus::Verified => "verified".into(),
                SampleStatus::Rejected(_) => "rejected".into(),
            },
            reason: match &self.status {
                SampleStatus::Verified => None,
                SampleStatus::Rejected(r) => Some(r.clone()),
            },
            reduction_number: self.reduction_number,
            seed: self.seed,
            stream: self.stream,
            draw_index: self.draw_index,
        }
    }
}

/// First verified minimal reduction of `I` among `max_draws` random
/// coefficient matrices drawn from stream 0 of `seed`.
pub fn sample_minimal_reduction<F: Field>(
    i: &IdealHandle<F>,
    seed: u64,
    max_draws: u32,
) -> Result<ReductionSample<F>, ReductionError> {
    sample_minimal_reduction_on_stream(i, seed, 0, max_draws).map(|(s, _)| s)
}

/// Like [`sample_minimal_reduction`] on an independent ChaCha stream, so
/// parallel samplers can share one seed without sharing draws. Also returns
/// the number of rejected draws.
pub fn sample_minimal_reduction_on_stream<F: Field>(
    i: &IdealHandle<F>,
    seed: u64,
    stream: u64,
    max_draws: u32,
) -> Result<(ReductionSample<F>, u32), ReductionError> {
    let ring = i.ring();
    if i.is_empty() {
        return Err(ReductionError::NoGenerators);
    }
    let field = ring.field();
    let d = ring.dim();
    let k = i.len();
    let r_cap = ring.limits().r_cap;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(stream);
    for draw_index in 0..max_draws {
        let coefficients: Vec<Vec<F::Elem>> = (0..d)
            .map(|_| (0..k).map(|_| field.random(&mut rng)).collect())
            .collect();
        let mut sample = ReductionSample::from_coefficients(i, coefficients, r_cap)?;
        sample.seed = seed;
        sample.stream = stream;
        sample.draw_index = draw_index;
        if sample.is_verified() {
            return Ok((sample, draw_index));
        }
    }
    Err(ReductionError::ExhaustedDraws(max_draws))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::PrimeField;
    use crate::poly::{parse_polynomial, TermOrder};
    use crate::rings::{make_ring, RingOptions, RingPresentation};
    use std::sync::Arc;

    fn ring(vars: &[&str], defining: &[&str]) -> Arc<RingPresentation<PrimeField>> {
        let f = PrimeField::default();
        let v: Vec<String> = vars.iter().map(|s| s.to_string()).collect();
        let gens = defining
            .iter()
            .map(|t| parse_polynomial(t, &v).unwrap().to_polynomial(&f, TermOrder::DegRevLex).unwrap())
            .collect();
        let opts = RingOptions { cm: true, ..RingOptions::default() };
        make_ring(f, v, gens, TermOrder::DegRevLex, opts).unwrap()
    }

    #[test]
    fn reduction_tests() {
        let r = ring(&["x", "y"], &[]);
        let m = r.maximal_ideal();
        assert_eq!(is_reduction(&m, &m, 10).unwrap(), ReductionTest::Yes(0));
        let x = r.ideal_from_strs(&["x"]).unwrap();
        assert_eq!(is_reduction(&x, &m, 5).unwrap(), ReductionTest::No);
        assert!(is_minimal_reduction(&m, &m, 10).unwrap());
        assert_eq!(reduction_number(&m, &m, 10).unwrap(), 0);
        assert_eq!(reduction_number(&x, &m, 3), Err(ReductionError::RCapExceeded(3)));
        let y2 = r.ideal_from_strs(&["y^2"]).unwrap();
        assert_eq!(is_reduction(&m, &y2, 3), Err(ReductionError::NotContained));
    }

    #[test]
    fn example_ideal_reductions() {
        let r = ring(&["x", "y"], &[]);
        let i = r.ideal_from_strs(&["x^7", "x^6*y", "x^2*y^5", "y^7"]).unwrap();
        let j2 = r.ideal_from_strs(&["x^7", "x^6*y + y^7"]).unwrap();
        assert!(is_minimal_reduction(&j2, &i, 10).unwrap());
        let j3 = r.ideal_from_strs(&["x^7", "y^7", "x^6*y"]).unwrap();
        assert!(!is_minimal_reduction(&j3, &i, 10).unwrap());
        let j1 = r.ideal_from_strs(&["x^7", "y^7"]).unwrap();
        assert!(reduction_number(&j1, &i, 10).unwrap() >= 3);
        assert!(reduction_number(&j2, &i, 10).unwrap() >= 3);
    }

    #[test]
    fn sampling_is_deterministic() {
        let r = ring(&["x", "y", "z"], &["y^2 - x*z", "x^3 - y*z", "x^2*y - z^2"]);
        let m = r.maximal_ideal();
        let a = sample_minimal_reduction(&m, 7, 10).unwrap();
        let b = sample_minimal_reduction(&m, 7, 10).unwrap();
        assert_eq!(a.record(), b.record());
        assert!(a.is_verified());
        assert_eq!(a.ideal.len(), 1);
        let c = sample_minimal_reduction_on_stream(&m, 7, 1, 10).unwrap().0;
        assert_ne!(a.record().coefficients, c.record().coefficients);
        assert_eq!(
            sample_minimal_reduction(&m, 7, 0).unwrap_err(),
            ReductionError::ExhaustedDraws(0)
        );
    }

    #[test]
    fn rejects_degenerate_matrices() {
        let r = ring(&["x", "y"], &[]);
        let m = r.maximal_ideal();
        let f = PrimeField::default();
        let same = vec![vec![f.one(), f.one()], vec![f.one(), f.one()]];
        let s = ReductionSample::from_coefficients(&m, same, 10).unwrap();
        assert!(!s.is_verified());
        let id = vec![vec![f.one(), f.zero()], vec![f.zero(), f.one()]];
        let s = ReductionSample::from_coefficients(&m, id, 10).unwrap();
        assert!(s.is_verified());
        assert_eq!(s.reduction_number, Some(0));
    }
}

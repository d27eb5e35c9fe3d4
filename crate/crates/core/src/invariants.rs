//! Lengths, minimal generator counts, Hilbert–Samuel functions and
//! multiplicities of the local ring at the origin.
//!
//! Every length is `λ(A/K)` for an `m`-primary `K`. Homogeneous input is
//! counted directly on the staircase of `I_A + K`; anything else is counted
//! on `I_A + K + m^N` for growing `N` until two consecutive values agree.

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::field::Field;
use crate::groebner::{count_standard_monomials, GroebnerError};
use crate::poly::{monomials_of_degree, Polynomial};
use crate::reduction::{sample_minimal_reduction, ReductionError};
use crate::rings::{IdealHandle, RingError, RingExt, RingPresentation};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum LengthError {
    #[error("colength_homogeneous needs homogeneous generators for the ideal and the ring")]
    NotHomogeneous,
    #[error("ideal is not m-primary: the quotient is not finite-dimensional")]
    NotMPrimary,
    #[error("truncated lengths did not stabilize by degree {cap}; values so far {growth:?}")]
    NoStabilization { cap: u32, growth: Vec<usize> },
    #[error("containment N ⊆ M failed: generator {generator} of N is not in M")]
    ContainmentFailed { generator: String },
    #[error(transparent)]
    Ring(#[from] RingError),
    #[error(transparent)]
    Groebner(#[from] GroebnerError),
}

impl LengthError {
    /// True for the errors that mean "the quotient is not of finite length"
    /// as far as this computation can tell.
    pub fn is_not_finite(&self) -> bool {
        matches!(
            self,
            LengthError::NotMPrimary | LengthError::NoStabilization { .. }
        )
    }
}

impl From<crate::poly::PolyError> for LengthError {
    fn from(e: crate::poly::PolyError) -> Self {
        LengthError::Groebner(e.into())
    }
}

/// `λ(A/K)` as the number of standard monomials of `I_A + K`.
pub fn colength_homogeneous<F: Field>(k: &IdealHandle<F>) -> Result<usize, LengthError> {
    if !k.ring().is_homogeneous() || !k.is_homogeneous() {
        return Err(LengthError::NotHomogeneous);
    }
    let basis = k.ambient_basis()?;
    match count_standard_monomials(&basis) {
        Ok(n) => Ok(n),
        Err(GroebnerError::InfiniteStaircase { .. }) => Err(LengthError::NotMPrimary),
        Err(e) => Err(e.into()),
    }
}

/// `λ(A/K)` at the origin via `dim S/(I_A + K + m^N)`, stopping at the first
/// `N` whose value repeats.
pub fn colength_local<F: Field>(k: &IdealHandle<F>, n_cap: u32) -> Result<usize, LengthError> {
    let ring = k.ring();
    let base = k.ambient_basis()?;
    let field = ring.field();
    let n = ring.arity();
    let mut growth = Vec::new();
    for degree in 1..=n_cap {
        let truncation: Vec<Polynomial<F>> = monomials_of_degree(n, degree)
            .into_iter()
            .map(|m| Polynomial::monomial(field.clone(), ring.order(), field.one(), m))
            .collect();
        let b = base.extend(&truncation)?;
        let value = count_standard_monomials(&b)?;
        if growth.last() == Some(&value) {
            return Ok(value);
        }
        growth.push(value);
    }
    Err(LengthError::NoStabilization {
        cap: n_cap,
        growth,
    })
}

/// `λ(A/K)`, choosing the graded count when both the ring and `K` are
/// homogeneous and the truncated count otherwise. Results are memoized on
/// the ring.
pub fn colength<F: Field>(k: &IdealHandle<F>) -> Result<usize, LengthError> {
    let ring = k.ring();
    let graded = ring.is_homogeneous() && k.is_homogeneous();
    let k = k.simplified()?;
    if let Some(v) = ring.cached_length(k.generators()) {
        return Ok(v);
    }
    let value = if graded {
        colength_homogeneous(&k)?
    } else {
        colength_local(&k, ring.limits().n_cap)?
    };
    ring.store_length(k.generators().to_vec(), value);
    Ok(value)
}

/// Checks `N ⊆ M` in the local ring. Ambient containment suffices; failing
/// that, for non-graded data, `λ(A/M) = λ(A/(M + N))` decides it locally.
pub fn check_containment<F: Field>(
    n: &IdealHandle<F>,
    m: &IdealHandle<F>,
) -> Result<(), LengthError> {
    let mut missing = None;
    for g in n.generators() {
        if !m.contains(g)? {
            missing = Some(g);
            break;
        }
    }
    let Some(g) = missing else {
        return Ok(());
    };
    let graded = m.ring().is_homogeneous() && m.is_homogeneous() && n.is_homogeneous();
    if !graded && colength(m)? == colength(&m.sum(n)?)? {
        return Ok(());
    }
    Err(LengthError::ContainmentFailed {
        generator: m.ring().format(g),
    })
}

/// `λ(M/N) = λ(A/N) − λ(A/M)` for `N ⊆ M` with `N` m-primary.
pub fn length_quotient<F: Field>(
    n: &IdealHandle<F>,
    m: &IdealHandle<F>,
) -> Result<usize, LengthError> {
    check_containment(n, m)?;
    length_difference(n, m)
}

/// `λ(A/N) − λ(A/M)` without checking `N ⊆ M`; callers guarantee it.
pub(crate) fn length_difference<F: Field>(
    n: &IdealHandle<F>,
    m: &IdealHandle<F>,
) -> Result<usize, LengthError> {
    let big = colength(n)?;
    let small = colength(m)?;
    Ok(big
        .checked_sub(small)
        .expect("colength is monotone under containment"))
}

/// `μ(K) = λ(K/mK)`.
pub fn mu<F: Field>(k: &IdealHandle<F>) -> Result<usize, LengthError> {
    let mk = k.ring().maximal_ideal().product(k)?;
    length_difference(&mk, k)
}

/// `λ(A/m^n)` for `n = 1..=n_max`.
pub fn hilbert_samuel<F: Field>(
    ring: &std::sync::Arc<RingPresentation<F>>,
    n_max: u32,
) -> Result<Vec<usize>, InvariantError> {
    let need = ring.dim() as u32 + 2;
    if n_max < need {
        return Err(InvariantError::Precondition(format!(
            "n_max = {n_max} is below d + 2 = {need}"
        )));
    }
    powers_colengths(&ring.maximal_ideal(), n_max)
}

fn powers_colengths<F: Field>(i: &IdealHandle<F>, n_max: u32) -> Result<Vec<usize>, InvariantError> {
    let base = i.simplified()?;
    let mut power = base.clone();
    let mut out = Vec::with_capacity(n_max as usize);
    for n in 1..=n_max {
        if n > 1 {
            power = power.product(&base)?.simplified()?;
        }
        out.push(colength(&power)?);
    }
    Ok(out)
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum InvariantError {
    #[error(transparent)]
    Length(#[from] LengthError),
    #[error(transparent)]
    Reduction(#[from] Box<ReductionError>),
    #[error("multiplicity via a reduction needs a ring asserted Cohen-Macaulay")]
    NotCmAsserted,
    #[error("multiplicity methods disagree: via_reduction {via_reduction}, via_differences {via_differences}")]
    MultiplicityMismatch {
        via_reduction: usize,
        via_differences: usize,
    },
    #[error("d-th differences of λ(A/I^n) did not stabilize up to n = {n_max}; values {values:?}")]
    DifferencesNotStabilized { n_max: u32, values: Vec<i64> },
    #[error("computed multiplicity {0} is not positive")]
    InvalidMultiplicity(i64),
    #[error("precondition violated: {0}")]
    Precondition(String),
}

impl From<RingError> for InvariantError {
    fn from(e: RingError) -> Self {
        InvariantError::Length(e.into())
    }
}

impl From<ReductionError> for InvariantError {
    fn from(e: ReductionError) -> Self {
        InvariantError::Reduction(Box::new(e))
    }
}

/// Default largest power tried when stabilizing finite differences.
pub const DEFAULT_DIFFERENCES_N_MAX: u32 = 16;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum MultiplicityMethod {
    /// `e₀(I) = λ(A/J)` for a sampled minimal reduction `J`; needs CM.
    ViaReduction { seed: u64 },
    /// Stable value of the `d`-th differences of `n ↦ λ(A/I^n)`.
    ViaDifferences { n_max: u32 },
}

/// The multiplicity `e₀(I)` of an m-primary ideal.
pub fn multiplicity<F: Field>(
    i: &IdealHandle<F>,
    method: MultiplicityMethod,
) -> Result<usize, InvariantError> {
    match method {
        MultiplicityMethod::ViaReduction { seed } => {
            if !i.ring().cm_asserted() {
                return Err(InvariantError::NotCmAsserted);
            }
            let sample = sample_minimal_reduction(i, seed, i.ring().limits().max_draws)?;
            Ok(colength(&sample.ideal)?)
        }
        MultiplicityMethod::ViaDifferences { n_max } => multiplicity_by_differences(i, n_max),
    }
}

fn multiplicity_by_differences<F: Field>(
    i: &IdealHandle<F>,
    n_max: u32,
) -> Result<usize, InvariantError> {
    let d = i.ring().dim();
    let need = d as u32 + 2;
    if n_max < need {
        return Err(InvariantError::Precondition(format!(
            "n_max = {n_max} is below d + 2 = {need}"
        )));
    }
    // h(0) = λ(A/A) = 0, then λ(A/I^n); grown lazily so that easy inputs stop early
    let base = i.simplified()?;
    let mut power = base.clone();
    let mut h: Vec<i64> = vec![0];
    let mut diffs: Vec<i64> = Vec::new();
    for n in 1..=n_max {
        if n > 1 {
            power = power.product(&base)?.simplified()?;
        }
        h.push(colength(&power)? as i64);
        if h.len() > d {
            diffs.push(nth_difference(&h[h.len() - 1 - d..], d));
        }
        if let [.., a, b, c] = diffs[..] {
            if a == b && b == c {
                return if c > 0 {
                    Ok(c as usize)
                } else {
                    Err(InvariantError::InvalidMultiplicity(c))
                };
            }
        }
    }
    Err(InvariantError::DifferencesNotStabilized {
        n_max,
        values: diffs,
    })
}

/// `Δ^d` evaluated at the last point of a window of `d + 1` values.
fn nth_difference(window: &[i64], d: usize) -> i64 {
    let mut v = window.to_vec();
    for _ in 0..d {
        v = v.windows(2).map(|w| w[1] - w[0]).collect();
    }
    debug_assert_eq!(v.len(), 1);
    v[0]
}

/// `C(n, 2)` with `C(n, 2) = 0` for `n < 2`.
pub fn binom2(n: i64) -> i64 {
    if n < 2 {
        0
    } else {
        n * (n - 1) / 2
    }
}

/// `e + (d−1)μ(m) − μ(m²) − C(d−1, 2)`.
pub fn predicted_lambda3(e: i64, d: i64, mu_m: i64, mu_m2: i64) -> i64 {
    e + (d - 1) * mu_m - mu_m2 - binom2(d - 1)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum CmVerdict {
    Cm,
    NotCm,
    Inconclusive,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CmCheck {
    pub verdict: CmVerdict,
    /// `λ(A/J)` for the sampled reduction `J` of `m`.
    pub colength_of_reduction: Option<usize>,
    /// `e₀(m)` by finite differences.
    pub multiplicity: Option<usize>,
    pub reduction: Option<Vec<String>>,
    pub seed: u64,
    pub note: Option<String>,
}

/// Compares `λ(A/J)` for a sampled minimal reduction `J` of `m` with `e₀(m)`.
/// Equality means Cohen-Macaulay; excess means not. Any failure to obtain
/// either number is reported as inconclusive.
pub fn check_cohen_macaulay<F: Field>(
    ring: &std::sync::Arc<RingPresentation<F>>,
    seed: u64,
) -> CmCheck {
    let mut out = CmCheck {
        verdict: CmVerdict::Inconclusive,
        colength_of_reduction: None,
        multiplicity: None,
        reduction: None,
        seed,
        note: None,
    };
    let m = ring.maximal_ideal();
    let e = match multiplicity(&m, MultiplicityMethod::ViaDifferences {
        n_max: DEFAULT_DIFFERENCES_N_MAX,
    }) {
        Ok(e) => e,
        Err(err) => {
            out.note = Some(err.to_string());
            return out;
        }
    };
    out.multiplicity = Some(e);
    let sample = match sample_minimal_reduction(&m, seed, ring.limits().max_draws) {
        Ok(s) => s,
        Err(err) => {
            out.note = Some(err.to_string());
            return out;
        }
    };
    out.reduction = Some(sample.ideal.generator_strings());
    let l = match colength(&sample.ideal) {
        Ok(l) => l,
        Err(err) => {
            out.note = Some(err.to_string());
            return out;
        }
    };
    out.colength_of_reduction = Some(l);
    out.verdict = match l.cmp(&e) {
        std::cmp::Ordering::Equal => CmVerdict::Cm,
        std::cmp::Ordering::Greater => CmVerdict::NotCm,
        std::cmp::Ordering::Less => {
            out.note = Some(format!("λ(A/J) = {l} below e = {e}; sample is not a reduction"));
            CmVerdict::Inconclusive
        }
    };
    out
}

/// Numbers entering the closed form for `λ(m³/Jm²)`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct InvariantReport {
    pub ring: String,
    pub d: usize,
    pub e: usize,
    pub mu_m: usize,
    pub mu_m2: usize,
    pub predicted_lambda3: i64,
    pub methods: InvariantMethods,
    pub seed: u64,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct InvariantMethods {
    /// `computed` (leading ideal of `I_A`) or `override`.
    pub d: crate::rings::DimSource,
    pub e: String,
    pub e_via_reduction: usize,
    pub e_via_differences: usize,
    pub mu: String,
}

impl InvariantReport {
    /// Recomputes the closed form from the stored fields.
    pub fn recomputed_prediction(&self) -> i64 {
        predicted_lambda3(self.e as i64, self.d as i64, self.mu_m as i64, self.mu_m2 as i64)
    }
}

//! A ring file loaded over the field it declares, with field-erased entry
//! points for the command line and the C bindings.

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::experiments::{
    invariant_report, reproduce_huckaba, scan_question, verify_koszul_count, verify_serre,
    verify_theorem1, verify_valabrega_valla, ExperimentError, ExperimentReport,
};
use crate::field::{FieldSpec, PrimeField, Rationals};
use crate::input::{InputError, ParsedInput, RingFile};
use crate::invariants::{
    check_cohen_macaulay, colength, hilbert_samuel, length_quotient, mu, CmCheck, InvariantError,
    InvariantReport, LengthError,
};
use crate::reduction::{sample_minimal_reduction, ReductionError, ReductionRecord};
use crate::rings::Limits;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SessionError {
    #[error(transparent)]
    Input(#[from] InputError),
    #[error(transparent)]
    Length(#[from] LengthError),
    #[error(transparent)]
    Invariant(#[from] InvariantError),
    #[error(transparent)]
    Reduction(#[from] ReductionError),
    #[error(transparent)]
    Experiment(#[from] ExperimentError),
}

impl SessionError {
    /// True when the input text, not the computation, is at fault.
    pub fn is_input_error(&self) -> bool {
        matches!(self, SessionError::Input(_))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Identity {
    Serre,
    ValabregaValla,
    Theorem1,
    Koszul,
}

/// `λ(A/K)`, or `λ(M/K)` when a containing ideal `M` was given.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct LengthReport {
    pub ring: String,
    pub ideal: Vec<String>,
    pub within: Option<Vec<String>>,
    pub length: usize,
}

pub enum Session {
    Prime(ParsedInput<PrimeField>),
    Rational(ParsedInput<Rationals>),
}

macro_rules! dispatch {
    ($self:expr, $input:ident => $body:expr) => {
        match $self {
            Session::Prime($input) => $body,
            Session::Rational($input) => $body,
        }
    };
}

impl Session {
    pub fn from_text(text: &str, name: Option<String>, limits: Limits) -> Result<Self, SessionError> {
        Self::from_ring_file(&RingFile::parse(text)?, name, limits)
    }

    pub fn from_ring_file(file: &RingFile, name: Option<String>, limits: Limits) -> Result<Self, SessionError> {
        Ok(match file.field {
            FieldSpec::Prime(p) => {
                let field = PrimeField::new(p).map_err(|e| InputError::Semantic {
                    line: 1,
                    column: 1,
                    message: e.to_string(),
                })?;
                Session::Prime(file.build(field, name, limits)?)
            }
            FieldSpec::Rational => Session::Rational(file.build(Rationals, name, limits)?),
        })
    }

    pub fn field(&self) -> FieldSpec {
        dispatch!(self, i => crate::field::Field::spec(i.ring.field()))
    }

    pub fn ring_name(&self) -> String {
        dispatch!(self, i => i.ring.name().to_string())
    }

    pub fn dim(&self) -> usize {
        dispatch!(self, i => i.ring.dim())
    }

    pub fn ideal_names(&self) -> Vec<String> {
        dispatch!(self, i => i.ideals.iter().map(|(n, _)| n.clone()).collect())
    }

    pub fn length(&self, ideal: &str, within: Option<&str>) -> Result<LengthReport, SessionError> {
        dispatch!(self, input => {
            let k = input.eval(ideal)?;
            let (length, within) = match within {
                None => (colength(&k)?, None),
                Some(text) => {
                    let m = input.eval(text)?;
                    (length_quotient(&k, &m)?, Some(m.generator_strings()))
                }
            };
            Ok(LengthReport {
                ring: input.ring.name().to_string(),
                ideal: k.generator_strings(),
                within,
                length,
            })
        })
    }

    pub fn mu(&self, ideal: &str) -> Result<usize, SessionError> {
        dispatch!(self, input => Ok(mu(&input.eval(ideal)?)?))
    }

    pub fn hilbert_samuel(&self, n_max: u32) -> Result<Vec<usize>, SessionError> {
        dispatch!(self, input => Ok(hilbert_samuel(&input.ring, n_max)?))
    }

    pub fn invariants(&self, seed: u64) -> Result<InvariantReport, SessionError> {
        dispatch!(self, input => Ok(invariant_report(&input.ring, seed)?))
    }

    pub fn reduce(&self, ideal: &str, seed: u64) -> Result<ReductionRecord, SessionError> {
        dispatch!(self, input => {
            let i = input.eval(ideal)?;
            let max_draws = input.ring.limits().max_draws;
            Ok(sample_minimal_reduction(&i, seed, max_draws)?.record())
        })
    }

    /// Runs one identity check. `ideal` is used by the Serre and
    /// Valabrega–Valla checks and defaults to `m`.
    pub fn verify(
        &self,
        identity: Identity,
        ideal: Option<&str>,
        samples: u32,
        seed: u64,
    ) -> Result<ExperimentReport, SessionError> {
        dispatch!(self, input => {
            let ring = &input.ring;
            let report = match identity {
                Identity::Serre => verify_serre(&input.eval(ideal.unwrap_or("m"))?, samples, seed)?,
                Identity::ValabregaValla => {
                    verify_valabrega_valla(&input.eval(ideal.unwrap_or("m"))?, samples, seed)?
                }
                Identity::Theorem1 => verify_theorem1(ring, samples, seed)?,
                Identity::Koszul => verify_koszul_count(ring, samples, seed)?,
            };
            Ok(report)
        })
    }

    pub fn scan_question(&self, n: u32, samples: u32, seed: u64) -> Result<ExperimentReport, SessionError> {
        dispatch!(self, input => Ok(scan_question(&input.ring, n, samples, seed)?))
    }

    pub fn cm_check(&self, seed: u64) -> CmCheck {
        dispatch!(self, input => check_cohen_macaulay(&input.ring, seed))
    }
}

/// The fixed two-reduction example over `F_p`, or over the rationals for
/// characteristic 0.
pub fn example_huckaba(characteristic: u64) -> Result<ExperimentReport, SessionError> {
    let spec = FieldSpec::from_characteristic(characteristic).map_err(|e| InputError::Semantic {
        line: 1,
        column: 1,
        message: e.to_string(),
    })?;
    Ok(match spec {
        FieldSpec::Prime(p) => reproduce_huckaba(PrimeField::new(p).expect("checked prime"))?,
        FieldSpec::Rational => reproduce_huckaba(Rationals)?,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn dispatches_on_the_declared_field() {
        let s = Session::from_text("char 0; vars x y;", None, Limits::default()).unwrap();
        assert_eq!(s.field(), FieldSpec::Rational);
        assert_eq!(s.length("(x,y)^2", None).unwrap().length, 3);
        let s = Session::from_text("char 7; vars x y; ideal I = x^2, y^3;", None, Limits::default()).unwrap();
        assert_eq!(s.field(), FieldSpec::Prime(7));
        assert_eq!(s.length("I", None).unwrap().length, 6);
        assert_eq!(s.length("I", Some("m")).unwrap().length, 5);
        assert_eq!(s.mu("I").unwrap(), 2);
        assert!(s.length("q", None).unwrap_err().is_input_error());
        assert!(!s.length("(x)", None).unwrap_err().is_input_error());
    }

    #[test]
    fn huckaba_over_q_and_fp() {
        for c in [0, 32003] {
            assert!(example_huckaba(c).unwrap().verdict.is_pass());
        }
        assert!(example_huckaba(4).unwrap_err().is_input_error());
    }
}

//! Identity checks over sampled minimal reductions, and their reports.
//!
//! Sample `s` of an experiment with seed `σ` draws its reduction from ChaCha
//! stream `s` of `σ`, so samples are independent and are evaluated in
//! parallel. Reports are assembled in sample order; apart from
//! `duration_ms` they are a deterministic function of the inputs.

use std::collections::BTreeMap;
use std::sync::Arc;
use std::time::Instant;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::corpus::HUCKABA;
use crate::field::Field;
use crate::input::{ring_file_of, InputError};
use crate::invariants::{
    binom2, check_cohen_macaulay, colength, multiplicity, mu, predicted_lambda3, CmVerdict,
    InvariantError, InvariantMethods, InvariantReport, LengthError, MultiplicityMethod,
    DEFAULT_DIFFERENCES_N_MAX,
};
use crate::reduction::{
    is_minimal_reduction, reduction_number, sample_minimal_reduction_on_stream, ReductionError,
    ReductionRecord, ReductionSample,
};
use crate::rings::{DimSource, IdealHandle, RingError, RingExt, RingPresentation};

/// Version of the JSON layout of [`ExperimentReport`].
pub const SCHEMA_VERSION: u32 = 1;

/// Seed used when none is given.
pub const DEFAULT_SEED: u64 = 20_050_301;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ExperimentError {
    #[error(transparent)]
    Invariant(#[from] InvariantError),
    #[error(transparent)]
    Reduction(#[from] ReductionError),
    #[error(transparent)]
    Input(#[from] InputError),
    #[error("precondition violated: {0}")]
    Precondition(String),
}

impl From<LengthError> for ExperimentError {
    fn from(e: LengthError) -> Self {
        ExperimentError::Invariant(e.into())
    }
}

impl From<RingError> for ExperimentError {
    fn from(e: RingError) -> Self {
        ExperimentError::Invariant(e.into())
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct RingRecord {
    pub name: String,
    /// Ring file text that rebuilds the ring.
    pub presentation: String,
    pub dim: usize,
    pub dim_source: DimSource,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Observation {
    pub index: u32,
    /// ChaCha stream the reduction was drawn from, if it was sampled.
    pub stream: Option<u64>,
    /// Draws rejected before the recorded reduction was found.
    pub rejected_draws: u32,
    pub reduction: ReductionRecord,
    pub quantities: BTreeMap<String, i64>,
    pub checks: BTreeMap<String, bool>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ScanSummary {
    pub quantity: String,
    /// Observed value → number of samples.
    pub values: BTreeMap<i64, u32>,
    pub min: Option<i64>,
    pub max: Option<i64>,
    pub all_equal: bool,
    /// Fewer than two samples: constancy says nothing.
    pub vacuous: bool,
    pub finding: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "status", rename_all = "snake_case")]
pub enum Verdict {
    Pass,
    Fail { details: Vec<String> },
}

impl Verdict {
    pub fn is_pass(&self) -> bool {
        matches!(self, Verdict::Pass)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ExperimentReport {
    pub schema_version: u32,
    pub experiment: String,
    pub ring: RingRecord,
    pub ideal: Option<Vec<String>>,
    pub seed: u64,
    pub sample_count: u32,
    pub constants: BTreeMap<String, i64>,
    pub notes: Vec<String>,
    pub observations: Vec<Observation>,
    pub scan: Option<ScanSummary>,
    pub verdict: Verdict,
    pub duration_ms: u64,
}

impl ExperimentReport {
    /// Pretty JSON with `duration_ms` zeroed, for replay comparisons.
    pub fn canonical_json(&self) -> String {
        let mut r = self.clone();
        r.duration_ms = 0;
        serde_json::to_string_pretty(&r).expect("reports serialize")
    }

    /// One CSV row per observation: index, stream, quantities, checks.
    pub fn to_csv(&self) -> Result<String, csv::Error> {
        let mut qkeys: Vec<&String> = Vec::new();
        let mut ckeys: Vec<&String> = Vec::new();
        for o in &self.observations {
            for k in o.quantities.keys() {
                if !qkeys.contains(&k) {
                    qkeys.push(k);
                }
            }
            for k in o.checks.keys() {
                if !ckeys.contains(&k) {
                    ckeys.push(k);
                }
            }
        }
        let mut w = csv::Writer::from_writer(Vec::new());
        let mut header = vec!["index".to_string(), "stream".to_string(), "generators".to_string()];
        header.extend(qkeys.iter().map(|k| k.to_string()));
        header.extend(ckeys.iter().map(|k| k.to_string()));
        w.write_record(&header)?;
        for o in &self.observations {
            let mut row = vec![
                o.index.to_string(),
                o.stream.map(|s| s.to_string()).unwrap_or_default(),
                o.reduction.generators.join("; "),
            ];
            row.extend(qkeys.iter().map(|k| {
                o.quantities.get(*k).map(|v| v.to_string()).unwrap_or_default()
            }));
            row.extend(ckeys.iter().map(|k| {
                o.checks.get(*k).map(|v| v.to_string()).unwrap_or_default()
            }));
            w.write_record(&row)?;
        }
        let bytes = w.into_inner().map_err(|e| e.into_error())?;
        Ok(String::from_utf8(bytes).expect("csv output is UTF-8"))
    }
}

fn ring_record<F: Field>(ring: &RingPresentation<F>) -> RingRecord {
    RingRecord {
        name: ring.name().to_string(),
        presentation: ring_file_of(ring).to_text(),
        dim: ring.dim(),
        dim_source: ring.dim_source(),
    }
}

fn require_cm<F: Field>(ring: &RingPresentation<F>) -> Result<(), ExperimentError> {
    if ring.cm_asserted() {
        Ok(())
    } else {
        Err(ExperimentError::Precondition(format!(
            "ring '{}' is not asserted Cohen-Macaulay",
            ring.name()
        )))
    }
}

fn as_i64(v: usize) -> i64 {
    i64::try_from(v).expect("lengths fit in i64")
}

fn e0_by_differences<F: Field>(i: &IdealHandle<F>) -> Result<usize, ExperimentError> {
    Ok(multiplicity(
        i,
        MultiplicityMethod::ViaDifferences {
            n_max: DEFAULT_DIFFERENCES_N_MAX,
        },
    )?)
}

/// Per-sample computation: quantities and checks for one reduction.
type Measure<'a, F> = dyn Fn(&ReductionSample<F>) -> Result<(BTreeMap<String, i64>, BTreeMap<String, bool>), ExperimentError>
    + Sync
    + 'a;

/// Samples `samples` minimal reductions of `i` on streams `0..samples` and
/// measures each, in parallel, returning observations in stream order.
fn run_samples<F: Field>(
    i: &IdealHandle<F>,
    samples: u32,
    seed: u64,
    measure: &Measure<'_, F>,
) -> Result<Vec<Observation>, ExperimentError> {
    let max_draws = i.ring().limits().max_draws;
    (0..samples)
        .into_par_iter()
        .map(|index| {
            let stream = u64::from(index);
            let (sample, rejected_draws) =
                sample_minimal_reduction_on_stream(i, seed, stream, max_draws)?;
            let (quantities, checks) = measure(&sample)?;
            Ok(Observation {
                index,
                stream: Some(stream),
                rejected_draws,
                reduction: sample.record(),
                quantities,
                checks,
            })
        })
        .collect()
}

fn verdict_from_checks(observations: &[Observation], extra: Vec<String>) -> Verdict {
    let mut details = extra;
    for o in observations {
        for (name, ok) in &o.checks {
            if !ok {
                details.push(format!("sample {}: check '{name}' failed", o.index));
            }
        }
    }
    if details.is_empty() {
        Verdict::Pass
    } else {
        Verdict::Fail { details }
    }
}

struct Shell {
    experiment: &'static str,
    started: Instant,
}

impl Shell {
    fn start(experiment: &'static str) -> Self {
        Shell {
            experiment,
            started: Instant::now(),
        }
    }

    #[allow(clippy::too_many_arguments)]
    fn finish<F: Field>(
        self,
        ring: &RingPresentation<F>,
        ideal: Option<&IdealHandle<F>>,
        seed: u64,
        constants: BTreeMap<String, i64>,
        notes: Vec<String>,
        observations: Vec<Observation>,
        scan: Option<ScanSummary>,
        verdict: Verdict,
    ) -> ExperimentReport {
        ExperimentReport {
            schema_version: SCHEMA_VERSION,
            experiment: self.experiment.to_string(),
            ring: ring_record(ring),
            ideal: ideal.map(IdealHandle::generator_strings),
            seed,
            sample_count: observations.len() as u32,
            constants,
            notes,
            observations,
            scan,
            verdict,
            duration_ms: self.started.elapsed().as_millis() as u64,
        }
    }
}

fn map<const N: usize, V>(entries: [(&str, V); N]) -> BTreeMap<String, V> {
    entries.into_iter().map(|(k, v)| (k.to_string(), v)).collect()
}

/// `λ(I/J) = e₀(I) − λ(A/I)` for sampled minimal reductions `J` of `I`.
pub fn verify_serre<F: Field>(
    i: &IdealHandle<F>,
    samples: u32,
    seed: u64,
) -> Result<ExperimentReport, ExperimentError> {
    let shell = Shell::start("serre");
    let ring = i.ring();
    require_cm(ring)?;
    let colength_i = as_i64(colength(i)?);
    let e0 = as_i64(e0_by_differences(i)?);
    let rhs = e0 - colength_i;
    let observations = run_samples(i, samples, seed, &|s| {
        let lhs = as_i64(colength(&s.ideal)?) - colength_i;
        Ok((
            map([("lambda_I_over_J", lhs), ("rhs", rhs)]),
            map([("serre", lhs == rhs)]),
        ))
    })?;
    let verdict = verdict_from_checks(&observations, Vec::new());
    let constants = map([("e0", e0), ("colength_I", colength_i)]);
    Ok(shell.finish(ring, Some(i), seed, constants, Vec::new(), observations, None, verdict))
}

/// `λ(I²/JI) = e₀(I) + (d−1)λ(A/I) − λ(I/I²)` for sampled minimal
/// reductions `J` of `I`.
pub fn verify_valabrega_valla<F: Field>(
    i: &IdealHandle<F>,
    samples: u32,
    seed: u64,
) -> Result<ExperimentReport, ExperimentError> {
    let shell = Shell::start("valabrega_valla");
    let ring = i.ring();
    require_cm(ring)?;
    let d = as_i64(ring.dim());
    let colength_i = as_i64(colength(i)?);
    let i2 = i.power(2)?;
    let colength_i2 = as_i64(colength(&i2)?);
    let lambda_i_i2 = colength_i2 - colength_i;
    let e0 = as_i64(e0_by_differences(i)?);
    let rhs = e0 + (d - 1) * colength_i - lambda_i_i2;
    let observations = run_samples(i, samples, seed, &|s| {
        let ji = s.ideal.product(i)?;
        let lhs = as_i64(colength(&ji)?) - colength_i2;
        Ok((
            map([("lambda_I2_over_JI", lhs), ("rhs", rhs)]),
            map([("valabrega_valla", lhs == rhs)]),
        ))
    })?;
    let verdict = verdict_from_checks(&observations, Vec::new());
    let constants = map([
        ("d", d),
        ("e0", e0),
        ("colength_I", colength_i),
        ("lambda_I_over_I2", lambda_i_i2),
    ]);
    Ok(shell.finish(ring, Some(i), seed, constants, Vec::new(), observations, None, verdict))
}

struct MaximalData<F: Field> {
    m: IdealHandle<F>,
    m2: IdealHandle<F>,
    d: i64,
    e: i64,
    mu_m: i64,
    mu_m2: i64,
}

fn maximal_data<F: Field>(ring: &Arc<RingPresentation<F>>) -> Result<MaximalData<F>, ExperimentError> {
    let m = ring.maximal_ideal();
    let m2 = m.power(2)?;
    Ok(MaximalData {
        d: as_i64(ring.dim()),
        e: as_i64(e0_by_differences(&m)?),
        mu_m: as_i64(mu(&m)?),
        mu_m2: as_i64(mu(&m2)?),
        m,
        m2,
    })
}

/// Runs the Cohen-Macaulay check and turns a negative answer into a
/// failing report; an inconclusive answer becomes a note.
fn cm_gate<F: Field>(
    ring: &Arc<RingPresentation<F>>,
    seed: u64,
    notes: &mut Vec<String>,
) -> Option<Vec<String>> {
    let check = check_cohen_macaulay(ring, seed);
    match check.verdict {
        CmVerdict::Cm => None,
        CmVerdict::NotCm => Some(vec![format!(
            "NonCMDetected: λ(A/J) = {} exceeds e = {} for J = ({})",
            check.colength_of_reduction.unwrap_or_default(),
            check.multiplicity.unwrap_or_default(),
            check.reduction.unwrap_or_default().join(", ")
        )]),
        CmVerdict::Inconclusive => {
            notes.push(format!(
                "Cohen-Macaulay check inconclusive: {}",
                check.note.unwrap_or_default()
            ));
            None
        }
    }
}

/// `λ(m³/Jm²) = e + (d−1)μ(m) − μ(m²) − C(d−1, 2)` for sampled minimal
/// reductions `J` of `m`, with the intermediate identity
/// `λ(Jm/Jm²) = μ(m²) + λ(m³/Jm²) − (e − (1 + μ(m) − d))`, the `d = 1` form
/// `μ(m²) + λ(m³/Jm²) = e`, and constancy of `λ(m³/Jm²)` across samples.
pub fn verify_theorem1<F: Field>(
    ring: &Arc<RingPresentation<F>>,
    samples: u32,
    seed: u64,
) -> Result<ExperimentReport, ExperimentError> {
    let shell = Shell::start("theorem1");
    require_cm(ring)?;
    if ring.dim() < 1 {
        return Err(ExperimentError::Precondition("dimension must be at least 1".into()));
    }
    let mut notes = Vec::new();
    if let Some(details) = cm_gate(ring, seed, &mut notes) {
        let verdict = Verdict::Fail { details };
        return Ok(shell.finish(ring, None, seed, BTreeMap::new(), notes, Vec::new(), None, verdict));
    }
    let md = maximal_data(ring)?;
    let predicted = predicted_lambda3(md.e, md.d, md.mu_m, md.mu_m2);
    let m3 = md.m.power(3)?;
    let colength_m3 = as_i64(colength(&m3)?);
    let observations = run_samples(&md.m, samples, seed, &|s| {
        let jm = s.ideal.product(&md.m)?;
        let jm2 = s.ideal.product(&md.m2)?;
        let colength_jm = as_i64(colength(&jm)?);
        let colength_jm2 = as_i64(colength(&jm2)?);
        let lambda3 = colength_jm2 - colength_m3;
        let koszul = colength_jm2 - colength_jm;
        let chain_rhs = md.mu_m2 + lambda3 - (md.e - (1 + md.mu_m - md.d));
        let mut checks = map([
            ("closed_form", lambda3 == predicted),
            ("proof_chain", koszul == chain_rhs),
        ]);
        if md.d == 1 {
            checks.insert("d1_specialization".into(), md.mu_m2 + lambda3 == md.e);
        }
        Ok((
            map([
                ("lambda_m3_over_Jm2", lambda3),
                ("lambda_Jm_over_Jm2", koszul),
                ("proof_chain_rhs", chain_rhs),
            ]),
            checks,
        ))
    })?;
    let summary = summarize("lambda_m3_over_Jm2", &observations, false);
    let mut extra = Vec::new();
    if !summary.all_equal {
        extra.push(format!(
            "λ(m³/Jm²) is not constant across samples: {:?}",
            summary.values
        ));
    }
    let verdict = verdict_from_checks(&observations, extra);
    let constants = map([
        ("d", md.d),
        ("e", md.e),
        ("mu_m", md.mu_m),
        ("mu_m2", md.mu_m2),
        ("predicted_lambda3", predicted),
    ]);
    Ok(shell.finish(ring, None, seed, constants, notes, observations, Some(summary), verdict))
}

/// `λ(Jm/Jm²) = dμ(m) − C(d, 2)` for sampled minimal reductions `J` of `m`;
/// needs `d ≥ 2`.
pub fn verify_koszul_count<F: Field>(
    ring: &Arc<RingPresentation<F>>,
    samples: u32,
    seed: u64,
) -> Result<ExperimentReport, ExperimentError> {
    let shell = Shell::start("koszul");
    require_cm(ring)?;
    if ring.dim() < 2 {
        return Err(ExperimentError::Precondition(format!(
            "the count needs d >= 2, ring has d = {}",
            ring.dim()
        )));
    }
    let mut notes = Vec::new();
    if let Some(details) = cm_gate(ring, seed, &mut notes) {
        let verdict = Verdict::Fail { details };
        return Ok(shell.finish(ring, None, seed, BTreeMap::new(), notes, Vec::new(), None, verdict));
    }
    let m = ring.maximal_ideal();
    let m2 = m.power(2)?;
    let d = as_i64(ring.dim());
    let mu_m = as_i64(mu(&m)?);
    let rhs = d * mu_m - binom2(d);
    let observations = run_samples(&m, samples, seed, &|s| {
        let jm = s.ideal.product(&m)?;
        let jm2 = s.ideal.product(&m2)?;
        let lhs = as_i64(colength(&jm2)?) - as_i64(colength(&jm)?);
        Ok((
            map([("lambda_Jm_over_Jm2", lhs), ("rhs", rhs)]),
            map([("koszul_count", lhs == rhs)]),
        ))
    })?;
    let verdict = verdict_from_checks(&observations, Vec::new());
    let constants = map([("d", d), ("mu_m", mu_m)]);
    Ok(shell.finish(ring, None, seed, constants, notes, observations, None, verdict))
}

fn fixed_observation<F: Field>(
    index: u32,
    j: &IdealHandle<F>,
    i: &IdealHandle<F>,
    colength_i3: i64,
) -> Result<Observation, ExperimentError> {
    let r_cap = i.ring().limits().r_cap;
    let i2 = i.power(2)?;
    let lambda = as_i64(colength(&j.product(&i2)?)?) - colength_i3;
    let minimal = is_minimal_reduction(j, i, r_cap)?;
    let r = reduction_number(j, i, r_cap)?;
    let status = if minimal { "verified" } else { "rejected" };
    Ok(Observation {
        index,
        stream: None,
        rejected_draws: 0,
        reduction: ReductionRecord {
            generators: j.generator_strings(),
            coefficients: Vec::new(),
            status: status.into(),
            reason: (!minimal).then(|| "not a minimal reduction".into()),
            reduction_number: Some(r),
            seed: 0,
            stream: 0,
            draw_index: 0,
        },
        quantities: map([("lambda_I3_over_JI2", lambda), ("reduction_number", i64::from(r))]),
        checks: map([("minimal_reduction", minimal)]),
    })
}

/// The monomial ideal `I = (x⁷, x⁶y, x²y⁵, y⁷)` of `k[x,y]` with its minimal
/// reductions `J1 = (x⁷, y⁷)` and `J2 = (x⁷, x⁶y + y⁷)`: checks
/// `λ(I³/J1·I²) = 3` and `λ(I³/J2·I²) = 2` over `field`.
pub fn reproduce_huckaba<F: Field>(field: F) -> Result<ExperimentReport, ExperimentError> {
    let shell = Shell::start("huckaba");
    let input = HUCKABA.load(field)?;
    let ring = input.ring.clone();
    let get = |n: &str| input.ideal(n).expect("fixture declares I, J1, J2").clone();
    let (i, j1, j2) = (get("I"), get("J1"), get("J2"));
    let i3 = i.power(3)?;
    let colength_i3 = as_i64(colength(&i3)?);
    let observations = vec![
        fixed_observation(0, &j1, &i, colength_i3)?,
        fixed_observation(1, &j2, &i, colength_i3)?,
    ];
    let expected = [3, 2];
    let mut details = Vec::new();
    for (o, want) in observations.iter().zip(expected) {
        let got = o.quantities["lambda_I3_over_JI2"];
        if got != want {
            details.push(format!("J{}: λ(I³/JI²) = {got}, expected {want}", o.index + 1));
        }
    }
    let verdict = verdict_from_checks(&observations, details);
    let constants = map([
        ("colength_I", as_i64(colength(&i)?)),
        ("colength_I3", colength_i3),
        ("e0", as_i64(e0_by_differences(&i)?)),
    ]);
    let summary = summarize("lambda_I3_over_JI2", &observations, true);
    Ok(shell.finish(&ring, Some(&i), 0, constants, Vec::new(), observations, Some(summary), verdict))
}

fn summarize(quantity: &str, observations: &[Observation], expect_variation: bool) -> ScanSummary {
    let mut values = BTreeMap::new();
    for o in observations {
        if let Some(v) = o.quantities.get(quantity) {
            *values.entry(*v).or_insert(0u32) += 1;
        }
    }
    let all_equal = values.len() <= 1;
    let vacuous = observations.len() < 2;
    let finding = (!all_equal && !expect_variation).then(|| {
        format!(
            "{quantity} takes {} distinct values on a ring asserted Cohen-Macaulay; \
             confirm with an independent system before drawing conclusions",
            values.len()
        )
    });
    ScanSummary {
        quantity: quantity.to_string(),
        min: values.keys().next().copied(),
        max: values.keys().next_back().copied(),
        values,
        all_equal,
        vacuous,
        finding,
    }
}

/// Distribution of `λ(m^{n+1}/Jm^n)` over sampled minimal reductions `J` of
/// `m`. The verdict only records that the scan ran; any variation is put in
/// the summary's `finding`.
pub fn scan_question<F: Field>(
    ring: &Arc<RingPresentation<F>>,
    n: u32,
    samples: u32,
    seed: u64,
) -> Result<ExperimentReport, ExperimentError> {
    let shell = Shell::start("scan_question");
    require_cm(ring)?;
    if n < 3 {
        return Err(ExperimentError::Precondition(format!("n must be at least 3, got {n}")));
    }
    let m = ring.maximal_ideal();
    let mn = m.power(n)?;
    let colength_next = as_i64(colength(&m.power(n + 1)?)?);
    let key = format!("lambda_m{}_over_Jm{}", n + 1, n);
    let observations = run_samples(&m, samples, seed, &|s| {
        let v = as_i64(colength(&s.ideal.product(&mn)?)?) - colength_next;
        Ok((map([(key.as_str(), v)]), BTreeMap::new()))
    })?;
    let summary = summarize(&key, &observations, false);
    let mut notes = Vec::new();
    if summary.vacuous {
        notes.push("fewer than two samples: constancy is vacuous".into());
    }
    let constants = map([("n", i64::from(n))]);
    Ok(shell.finish(ring, None, seed, constants, notes, observations, Some(summary), Verdict::Pass))
}

/// `d`, `e` (by a sampled reduction and by finite differences, which must
/// agree), `μ(m)`, `μ(m²)` and the predicted `λ(m³/Jm²)`.
pub fn invariant_report<F: Field>(
    ring: &Arc<RingPresentation<F>>,
    seed: u64,
) -> Result<InvariantReport, ExperimentError> {
    require_cm(ring)?;
    let m = ring.maximal_ideal();
    let via_reduction = multiplicity(&m, MultiplicityMethod::ViaReduction { seed })?;
    let via_differences = e0_by_differences(&m)?;
    if via_reduction != via_differences {
        return Err(InvariantError::MultiplicityMismatch {
            via_reduction,
            via_differences,
        }
        .into());
    }
    let mu_m = mu(&m)?;
    let mu_m2 = mu(&m.power(2)?)?;
    let d = ring.dim();
    Ok(InvariantReport {
        ring: ring.name().to_string(),
        d,
        e: via_differences,
        mu_m,
        mu_m2,
        predicted_lambda3: predicted_lambda3(as_i64(via_differences), as_i64(d), as_i64(mu_m), as_i64(mu_m2)),
        methods: InvariantMethods {
            d: ring.dim_source(),
            e: "via_reduction and via_differences agree".into(),
            e_via_reduction: via_reduction,
            e_via_differences: via_differences,
            mu: "λ(K/mK) by lengths".into(),
        },
        seed,
    })
}

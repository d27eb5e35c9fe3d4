//! Argument parsing, dispatch and report rendering for the `redinv` binary.
//!
//! Exit status: 0 success or pass, 1 verdict fail, 2 usage or input error,
//! 3 computational error.

use std::ffi::OsString;
use std::fmt::Write as _;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;

use crate::corpus;
use crate::experiments::{ExperimentReport, Verdict, DEFAULT_SEED};
use crate::field::DEFAULT_PRIME;
use crate::invariants::{CmCheck, CmVerdict, InvariantReport};
use crate::reduction::ReductionRecord;
use crate::rings::Limits;
use crate::session::{example_huckaba, Identity, LengthReport, Session, SessionError};

pub const EXIT_OK: i32 = 0;
pub const EXIT_FAIL: i32 = 1;
pub const EXIT_USAGE: i32 = 2;
pub const EXIT_COMPUTATION: i32 = 3;

#[derive(Debug, Parser)]
#[command(name = "redinv", version, about = "Lengths, multiplicities and minimal reductions in local rings")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Args)]
pub struct RingArgs {
    /// Ring file, or the name of a shipped corpus ring.
    #[arg(long)]
    pub ring: String,
    /// Largest reduction number searched for.
    #[arg(long)]
    pub rcap: Option<u32>,
    /// Largest truncation degree for local lengths.
    #[arg(long)]
    pub ncap: Option<u32>,
}

#[derive(Debug, Args)]
pub struct SampleArgs {
    #[arg(long, default_value_t = 20)]
    pub samples: u32,
    #[arg(long, default_value_t = DEFAULT_SEED)]
    pub seed: u64,
    /// Also write one CSV row per observation to this path.
    #[arg(long)]
    pub csv: Option<PathBuf>,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
pub enum VerifyWhat {
    Serre,
    Vv,
    Theorem1,
    Koszul,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
pub enum ExampleWhat {
    Huckaba,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
pub enum ScanWhat {
    Question,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// λ(A/K), or λ(M/K) with --in M.
    Length {
        #[command(flatten)]
        ring: RingArgs,
        #[arg(long)]
        ideal: String,
        #[arg(long = "in")]
        within: Option<String>,
        #[arg(long)]
        json: bool,
    },
    /// d, e, μ(m), μ(m²) and the predicted λ(m³/Jm²).
    Invariants {
        #[command(flatten)]
        ring: RingArgs,
        #[arg(long, default_value_t = DEFAULT_SEED)]
        seed: u64,
        #[arg(long)]
        json: bool,
    },
    /// Sample and print a minimal reduction.
    Reduce {
        #[command(flatten)]
        ring: RingArgs,
        #[arg(long, default_value = "m")]
        ideal: String,
        #[arg(long, default_value_t = DEFAULT_SEED)]
        seed: u64,
        #[arg(long)]
        json: bool,
    },
    /// Check an identity over sampled minimal reductions.
    Verify {
        what: VerifyWhat,
        #[command(flatten)]
        ring: RingArgs,
        /// Ideal for serre and vv; defaults to m.
        #[arg(long)]
        ideal: Option<String>,
        #[command(flatten)]
        sampling: SampleArgs,
        #[arg(long)]
        json: bool,
    },
    /// Reproduce a fixed worked example.
    Example {
        what: ExampleWhat,
        /// Characteristic, 0 for the rationals. Without it both F_32003 and
        /// the rationals are run.
        #[arg(long = "char")]
        characteristic: Option<u64>,
        #[arg(long)]
        json: bool,
    },
    /// Distribution of λ(m^{n+1}/Jm^n) over sampled reductions.
    Scan {
        what: ScanWhat,
        #[command(flatten)]
        ring: RingArgs,
        #[arg(long, default_value_t = 3)]
        n: u32,
        #[arg(long, default_value_t = 100)]
        samples: u32,
        #[arg(long, default_value_t = DEFAULT_SEED)]
        seed: u64,
        #[arg(long)]
        csv: Option<PathBuf>,
        #[arg(long)]
        json: bool,
    },
    /// Compare λ(A/J) with e(m) for a sampled reduction J of m.
    CmCheck {
        #[command(flatten)]
        ring: RingArgs,
        #[arg(long, default_value_t = DEFAULT_SEED)]
        seed: u64,
        #[arg(long)]
        json: bool,
    },
}

#[derive(Debug)]
struct Failure {
    code: i32,
    message: String,
}

impl From<SessionError> for Failure {
    fn from(e: SessionError) -> Self {
        let code = if e.is_input_error() { EXIT_USAGE } else { EXIT_COMPUTATION };
        Failure {
            code,
            message: e.to_string(),
        }
    }
}

/// Parses `args` (including the program name) and runs the command.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let text = e.render().to_string();
            return if e.use_stderr() {
                let _ = write!(err, "{text}");
                EXIT_USAGE
            } else {
                let _ = write!(out, "{text}");
                EXIT_OK
            };
        }
    };
    match execute(cli.command) {
        Ok((code, text)) => {
            let _ = write!(out, "{text}");
            code
        }
        Err(f) => {
            let _ = writeln!(err, "error: {}", f.message);
            f.code
        }
    }
}

fn load(args: &RingArgs) -> Result<Session, Failure> {
    let mut limits = Limits::default();
    if let Some(r) = args.rcap {
        limits.r_cap = r;
    }
    if let Some(n) = args.ncap {
        limits.n_cap = n;
    }
    let path = Path::new(&args.ring);
    let (text, name) = match std::fs::read_to_string(path) {
        Ok(text) => {
            let stem = path.file_stem().map(|s| s.to_string_lossy().into_owned());
            (text, stem)
        }
        Err(io) => match corpus::entry(&args.ring) {
            Some(e) => (e.text.to_string(), Some(e.name.to_string())),
            None => {
                return Err(Failure {
                    code: EXIT_USAGE,
                    message: format!("cannot read ring file {}: {io}", path.display()),
                })
            }
        },
    };
    Ok(Session::from_text(&text, name, limits)?)
}

fn json<T: Serialize + ?Sized>(value: &T) -> String {
    let mut s = serde_json::to_string_pretty(value).expect("reports serialize");
    s.push('\n');
    s
}

fn write_csv(path: &Option<PathBuf>, report: &ExperimentReport) -> Result<(), Failure> {
    let Some(path) = path else { return Ok(()) };
    let text = report.to_csv().map_err(|e| Failure {
        code: EXIT_COMPUTATION,
        message: e.to_string(),
    })?;
    std::fs::write(path, text).map_err(|e| Failure {
        code: EXIT_USAGE,
        message: format!("cannot write {}: {e}", path.display()),
    })
}

fn verdict_code(v: &Verdict) -> i32 {
    if v.is_pass() {
        EXIT_OK
    } else {
        EXIT_FAIL
    }
}

fn execute(command: Command) -> Result<(i32, String), Failure> {
    match command {
        Command::Length {
            ring,
            ideal,
            within,
            json: as_json,
        } => {
            let r = load(&ring)?.length(&ideal, within.as_deref())?;
            Ok((EXIT_OK, if as_json { json(&r) } else { render_length(&r) }))
        }
        Command::Invariants { ring, seed, json: as_json } => {
            let r = load(&ring)?.invariants(seed)?;
            Ok((EXIT_OK, if as_json { json(&r) } else { render_invariants(&r) }))
        }
        Command::Reduce {
            ring,
            ideal,
            seed,
            json: as_json,
        } => {
            let r = load(&ring)?.reduce(&ideal, seed)?;
            Ok((EXIT_OK, if as_json { json(&r) } else { render_reduction(&r) }))
        }
        Command::Verify {
            what,
            ring,
            ideal,
            sampling,
            json: as_json,
        } => {
            let identity = match what {
                VerifyWhat::Serre => Identity::Serre,
                VerifyWhat::Vv => Identity::ValabregaValla,
                VerifyWhat::Theorem1 => Identity::Theorem1,
                VerifyWhat::Koszul => Identity::Koszul,
            };
            let r = load(&ring)?.verify(identity, ideal.as_deref(), sampling.samples, sampling.seed)?;
            write_csv(&sampling.csv, &r)?;
            let text = if as_json { json(&r) } else { render_report(&r) };
            Ok((verdict_code(&r.verdict), text))
        }
        Command::Example {
            what: ExampleWhat::Huckaba,
            characteristic,
            json: as_json,
        } => {
            let chars = match characteristic {
                Some(c) => vec![c],
                None => vec![DEFAULT_PRIME, 0],
            };
            let reports = chars
                .iter()
                .map(|&c| example_huckaba(c))
                .collect::<Result<Vec<_>, _>>()?;
            let code = reports.iter().map(|r| verdict_code(&r.verdict)).max().unwrap_or(EXIT_OK);
            let text = if as_json {
                json(&reports)
            } else {
                chars
                    .iter()
                    .zip(&reports)
                    .map(|(&c, r)| render_huckaba(c, r))
                    .collect::<Vec<_>>()
                    .join("\n")
            };
            Ok((code, text))
        }
        Command::Scan {
            what: ScanWhat::Question,
            ring,
            n,
            samples,
            seed,
            csv,
            json: as_json,
        } => {
            let r = load(&ring)?.scan_question(n, samples, seed)?;
            write_csv(&csv, &r)?;
            let text = if as_json { json(&r) } else { render_report(&r) };
            Ok((verdict_code(&r.verdict), text))
        }
        Command::CmCheck { ring, seed, json: as_json } => {
            let r = load(&ring)?.cm_check(seed);
            let code = match r.verdict {
                CmVerdict::Cm => EXIT_OK,
                CmVerdict::NotCm => EXIT_FAIL,
                CmVerdict::Inconclusive => EXIT_COMPUTATION,
            };
            Ok((code, if as_json { json(&r) } else { render_cm(&r) }))
        }
    }
}

fn render_length(r: &LengthReport) -> String {
    format!("{}\n", r.length)
}

fn render_invariants(r: &InvariantReport) -> String {
    let mut s = String::new();
    let _ = writeln!(s, "ring: {}", r.ring);
    let _ = writeln!(s, "d = {}  ({:?})", r.d, r.methods.d);
    let _ = writeln!(
        s,
        "e = {}  (via reduction {}, via differences {})",
        r.e, r.methods.e_via_reduction, r.methods.e_via_differences
    );
    let _ = writeln!(s, "μ(m) = {}", r.mu_m);
    let _ = writeln!(s, "μ(m²) = {}", r.mu_m2);
    let _ = writeln!(s, "predicted λ(m³/Jm²) = {}", r.predicted_lambda3);
    s
}

fn render_reduction(r: &ReductionRecord) -> String {
    let mut s = String::new();
    let _ = writeln!(s, "J = ({})", r.generators.join(", "));
    let _ = writeln!(s, "status: {}", r.status);
    if let Some(reason) = &r.reason {
        let _ = writeln!(s, "reason: {reason}");
    }
    if let Some(n) = r.reduction_number {
        let _ = writeln!(s, "reduction number: {n}");
    }
    let _ = writeln!(s, "seed {} stream {} draw {}", r.seed, r.stream, r.draw_index);
    s
}

fn render_cm(r: &CmCheck) -> String {
    let mut s = String::new();
    let verdict = match r.verdict {
        CmVerdict::Cm => "Cohen-Macaulay",
        CmVerdict::NotCm => "not Cohen-Macaulay",
        CmVerdict::Inconclusive => "inconclusive",
    };
    let _ = writeln!(s, "{verdict}");
    if let (Some(l), Some(e)) = (r.colength_of_reduction, r.multiplicity) {
        let _ = writeln!(s, "λ(A/J) = {l}, e(m) = {e}");
    }
    if let Some(j) = &r.reduction {
        let _ = writeln!(s, "J = ({})", j.join(", "));
    }
    if let Some(note) = &r.note {
        let _ = writeln!(s, "note: {note}");
    }
    s
}

fn render_verdict(s: &mut String, v: &Verdict) {
    match v {
        Verdict::Pass => {
            let _ = writeln!(s, "verdict: pass");
        }
        Verdict::Fail { details } => {
            let _ = writeln!(s, "verdict: FAIL");
            for d in details {
                let _ = writeln!(s, "  {d}");
            }
        }
    }
}

fn render_huckaba(characteristic: u64, r: &ExperimentReport) -> String {
    let mut s = String::new();
    let field = if characteristic == 0 {
        "Q".to_string()
    } else {
        format!("F_{characteristic}")
    };
    let _ = writeln!(s, "over {field}: I = ({})", r.ideal.as_deref().unwrap_or_default().join(", "));
    for (o, sub) in r.observations.iter().zip(["₁", "₂"]) {
        let l = o.quantities["lambda_I3_over_JI2"];
        let _ = writeln!(s, "  λ(I³/J{sub}I²) = {l}    J{sub} = ({})", o.reduction.generators.join(", "));
    }
    for (k, v) in &r.constants {
        let _ = writeln!(s, "  {k} = {v}");
    }
    render_verdict(&mut s, &r.verdict);
    s
}

fn render_report(r: &ExperimentReport) -> String {
    let mut s = String::new();
    let _ = writeln!(s, "experiment: {}", r.experiment);
    let _ = writeln!(s, "ring: {} (d = {})", r.ring.name, r.ring.dim);
    if let Some(i) = &r.ideal {
        let _ = writeln!(s, "ideal: ({})", i.join(", "));
    }
    let _ = writeln!(s, "seed: {}  samples: {}", r.seed, r.sample_count);
    for (k, v) in &r.constants {
        let _ = writeln!(s, "  {k} = {v}");
    }
    let mut quantities: std::collections::BTreeMap<&str, std::collections::BTreeMap<i64, u32>> =
        Default::default();
    let mut checks: std::collections::BTreeMap<&str, (u32, u32)> = Default::default();
    for o in &r.observations {
        for (k, v) in &o.quantities {
            *quantities.entry(k).or_default().entry(*v).or_default() += 1;
        }
        for (k, ok) in &o.checks {
            let e = checks.entry(k).or_default();
            e.1 += 1;
            if *ok {
                e.0 += 1;
            }
        }
    }
    for (k, values) in &quantities {
        let dist: Vec<String> = values.iter().map(|(v, c)| format!("{v} (x{c})")).collect();
        let _ = writeln!(s, "{k}: {}", dist.join(", "));
    }
    for (k, (ok, total)) in &checks {
        let _ = writeln!(s, "check {k}: {ok}/{total}");
    }
    if let Some(scan) = &r.scan {
        if let (Some(lo), Some(hi)) = (scan.min, scan.max) {
            let _ = writeln!(s, "{}: min {lo}, max {hi}", scan.quantity);
        }
        if let Some(f) = &scan.finding {
            let _ = writeln!(s, "FINDING: {f}");
        }
    }
    for n in &r.notes {
        let _ = writeln!(s, "note: {n}");
    }
    render_verdict(&mut s, &r.verdict);
    s
}

#[cfg(test)]
mod tests {
    use super::*;

    fn run_args(args: &[&str]) -> (i32, String, String) {
        let (mut out, mut err) = (Vec::new(), Vec::new());
        let code = run(std::iter::once("redinv").chain(args.iter().copied()), &mut out, &mut err);
        (code, String::from_utf8(out).unwrap(), String::from_utf8(err).unwrap())
    }

    #[test]
    fn length_of_the_square_of_m() {
        let (code, out, _) = run_args(&["length", "--ring", "plane", "--ideal", "(x,y)^2"]);
        assert_eq!((code, out.as_str()), (0, "3\n"));
    }

    #[test]
    fn usage_and_input_errors_exit_2() {
        assert_eq!(run_args(&["frobnicate"]).0, 2);
        assert_eq!(run_args(&["length", "--ring", "/nonexistent.ring", "--ideal", "m"]).0, 2);
        assert_eq!(run_args(&["length", "--ring", "plane", "--ideal", "(q)"]).0, 2);
    }

    #[test]
    fn computational_errors_exit_3() {
        let (code, _, err) = run_args(&["length", "--ring", "plane", "--ideal", "(x)"]);
        assert_eq!(code, 3, "{err}");
    }

    #[test]
    fn huckaba_prints_both_lengths_over_both_fields() {
        let (code, out, _) = run_args(&["example", "huckaba"]);
        assert_eq!(code, 0);
        assert_eq!(out.matches("λ(I³/J₁I²) = 3").count(), 2, "{out}");
        assert_eq!(out.matches("λ(I³/J₂I²) = 2").count(), 2, "{out}");
        assert!(out.contains("over F_32003") && out.contains("over Q"));
    }

    #[test]
    fn help_exits_0() {
        assert_eq!(run_args(&["--help"]).0, 0);
    }
}

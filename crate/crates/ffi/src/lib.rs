//! C ABI over the `redinv` engine.
//!
//! Rings are opaque handles created by [`redinv_ring_parse`] and released by
//! [`redinv_ring_free`]. Every fallible call returns a [`RedinvStatus`]; on
//! failure [`redinv_last_error`] describes the most recent error raised on
//! the calling thread. Strings returned through `char **` are owned by the
//! caller and must be released with [`redinv_string_free`].

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use redinv::experiments::Verdict;
use redinv::invariants::CmVerdict;
use redinv::rings::Limits;
use redinv::session::{example_huckaba, Identity, Session, SessionError};

/// Result of a call. Values match the command-line exit codes where both
/// exist.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum RedinvStatus {
    Ok = 0,
    /// The computation finished and its verdict is a failure.
    VerdictFail = 1,
    /// Malformed ring text, ideal expression or argument value.
    InputError = 2,
    /// The input was well-formed but the computation could not finish.
    ComputationError = 3,
    NullArgument = 4,
    InvalidUtf8 = 5,
    Panic = 6,
}

/// A parsed ring together with the ideals declared in its file.
pub struct RedinvRing {
    session: Session,
}

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn set_error(message: impl Into<String>) {
    let text = message.into().replace('\0', " ");
    LAST_ERROR.with(|e| *e.borrow_mut() = Some(CString::new(text).expect("no interior NUL")));
}

struct Failure(RedinvStatus, String);

impl From<SessionError> for Failure {
    fn from(e: SessionError) -> Self {
        let status = if e.is_input_error() {
            RedinvStatus::InputError
        } else {
            RedinvStatus::ComputationError
        };
        Failure(status, e.to_string())
    }
}

/// Runs `body`, converting failures and panics into a status and recording
/// the message.
fn guard(body: impl FnOnce() -> Result<RedinvStatus, Failure>) -> RedinvStatus {
    match catch_unwind(AssertUnwindSafe(body)) {
        Ok(Ok(status)) => status,
        Ok(Err(Failure(status, message))) => {
            set_error(message);
            status
        }
        Err(_) => {
            set_error("internal panic");
            RedinvStatus::Panic
        }
    }
}

unsafe fn text<'a>(p: *const c_char, what: &str) -> Result<&'a str, Failure> {
    if p.is_null() {
        return Err(Failure(RedinvStatus::NullArgument, format!("{what} is null")));
    }
    CStr::from_ptr(p)
        .to_str()
        .map_err(|_| Failure(RedinvStatus::InvalidUtf8, format!("{what} is not UTF-8")))
}

unsafe fn ring<'a>(p: *const RedinvRing) -> Result<&'a Session, Failure> {
    p.as_ref()
        .map(|r| &r.session)
        .ok_or_else(|| Failure(RedinvStatus::NullArgument, "ring is null".into()))
}

unsafe fn write_out<T>(out: *mut T, value: T) -> Result<(), Failure> {
    if out.is_null() {
        return Err(Failure(RedinvStatus::NullArgument, "output pointer is null".into()));
    }
    out.write(value);
    Ok(())
}

unsafe fn write_json<T: serde::Serialize + ?Sized>(out: *mut *mut c_char, value: &T) -> Result<(), Failure> {
    let json = serde_json::to_string(value).expect("reports serialize");
    write_out(out, CString::new(json).expect("JSON has no NUL").into_raw())
}

/// Parses a ring file. On success `*out` receives a handle to release with
/// [`redinv_ring_free`].
///
/// # Safety
/// `text` must be a NUL-terminated string and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn redinv_ring_parse(text_ptr: *const c_char, out: *mut *mut RedinvRing) -> RedinvStatus {
    guard(|| {
        let source = text(text_ptr, "ring text")?;
        if out.is_null() {
            return Err(Failure(RedinvStatus::NullArgument, "output pointer is null".into()));
        }
        let session = Session::from_text(source, None, Limits::default())?;
        write_out(out, Box::into_raw(Box::new(RedinvRing { session })))?;
        Ok(RedinvStatus::Ok)
    })
}

/// Releases a ring handle. Null is ignored.
///
/// # Safety
/// `ring` must come from [`redinv_ring_parse`] and not be used afterwards.
#[no_mangle]
pub unsafe extern "C" fn redinv_ring_free(ring: *mut RedinvRing) {
    if !ring.is_null() {
        drop(Box::from_raw(ring));
    }
}

/// `λ(A/K)` for the ideal expression `ideal`.
///
/// # Safety
/// Pointers must be valid; `ideal` NUL-terminated.
#[no_mangle]
pub unsafe extern "C" fn redinv_length(
    handle: *const RedinvRing,
    ideal: *const c_char,
    out: *mut usize,
) -> RedinvStatus {
    guard(|| {
        let report = ring(handle)?.length(text(ideal, "ideal")?, None)?;
        write_out(out, report.length)?;
        Ok(RedinvStatus::Ok)
    })
}

/// `λ(M/N)` for ideal expressions `inner` = N ⊆ `outer` = M.
///
/// # Safety
/// Pointers must be valid; strings NUL-terminated.
#[no_mangle]
pub unsafe extern "C" fn redinv_length_quotient(
    handle: *const RedinvRing,
    inner: *const c_char,
    outer: *const c_char,
    out: *mut usize,
) -> RedinvStatus {
    guard(|| {
        let report = ring(handle)?.length(text(inner, "inner ideal")?, Some(text(outer, "outer ideal")?))?;
        write_out(out, report.length)?;
        Ok(RedinvStatus::Ok)
    })
}

/// Minimal number of generators of an m-primary ideal.
///
/// # Safety
/// Pointers must be valid; `ideal` NUL-terminated.
#[no_mangle]
pub unsafe extern "C" fn redinv_mu(handle: *const RedinvRing, ideal: *const c_char, out: *mut usize) -> RedinvStatus {
    guard(|| {
        let v = ring(handle)?.mu(text(ideal, "ideal")?)?;
        write_out(out, v)?;
        Ok(RedinvStatus::Ok)
    })
}

/// Invariant report of the maximal ideal as JSON.
///
/// # Safety
/// Pointers must be valid.
#[no_mangle]
pub unsafe extern "C" fn redinv_invariants_json(
    handle: *const RedinvRing,
    seed: u64,
    out: *mut *mut c_char,
) -> RedinvStatus {
    guard(|| {
        let report = ring(handle)?.invariants(seed)?;
        write_json(out, &report)?;
        Ok(RedinvStatus::Ok)
    })
}

/// Cohen–Macaulay check as JSON. Returns `VerdictFail` when the ring is
/// found not Cohen–Macaulay and `ComputationError` when inconclusive; the
/// report is written in every case.
///
/// # Safety
/// Pointers must be valid.
#[no_mangle]
pub unsafe extern "C" fn redinv_cm_check_json(
    handle: *const RedinvRing,
    seed: u64,
    out: *mut *mut c_char,
) -> RedinvStatus {
    guard(|| {
        let check = ring(handle)?.cm_check(seed);
        write_json(out, &check)?;
        Ok(match check.verdict {
            CmVerdict::Cm => RedinvStatus::Ok,
            CmVerdict::NotCm => RedinvStatus::VerdictFail,
            CmVerdict::Inconclusive => RedinvStatus::ComputationError,
        })
    })
}

/// Runs an identity check over `samples` sampled reductions and writes the
/// report as JSON. `experiment` is one of `serre`, `vv`, `theorem1`,
/// `koszul` or `scan` (the `λ(m⁴/Jm³)` scan). `ideal` may be null and is
/// only read by `serre` and `vv`, defaulting to `m`. A failed verdict
/// returns `VerdictFail` with the report still written.
///
/// # Safety
/// Pointers must be valid; strings NUL-terminated.
#[no_mangle]
pub unsafe extern "C" fn redinv_experiment_json(
    handle: *const RedinvRing,
    experiment: *const c_char,
    ideal: *const c_char,
    samples: u32,
    seed: u64,
    out: *mut *mut c_char,
) -> RedinvStatus {
    guard(|| {
        let session = ring(handle)?;
        let name = text(experiment, "experiment")?;
        let ideal = if ideal.is_null() { None } else { Some(text(ideal, "ideal")?) };
        let identity = match name {
            "serre" => Some(Identity::Serre),
            "vv" => Some(Identity::ValabregaValla),
            "theorem1" => Some(Identity::Theorem1),
            "koszul" => Some(Identity::Koszul),
            "scan" => None,
            other => return Err(Failure(RedinvStatus::InputError, format!("unknown experiment '{other}'"))),
        };
        let report = match identity {
            Some(id) => session.verify(id, ideal, samples, seed)?,
            None => session.scan_question(3, samples, seed)?,
        };
        write_json(out, &report)?;
        Ok(match report.verdict {
            Verdict::Pass => RedinvStatus::Ok,
            Verdict::Fail { .. } => RedinvStatus::VerdictFail,
        })
    })
}

/// The fixed two-reduction example over `F_p` (or the rationals for
/// characteristic 0) as JSON.
///
/// # Safety
/// `out` must be valid.
#[no_mangle]
pub unsafe extern "C" fn redinv_example_huckaba_json(characteristic: u64, out: *mut *mut c_char) -> RedinvStatus {
    guard(|| {
        let report = example_huckaba(characteristic)?;
        write_json(out, &report)?;
        Ok(match report.verdict {
            Verdict::Pass => RedinvStatus::Ok,
            Verdict::Fail { .. } => RedinvStatus::VerdictFail,
        })
    })
}

/// Releases a string returned by this library. Null is ignored.
///
/// # Safety
/// `s` must come from this library and not be used afterwards.
#[no_mangle]
pub unsafe extern "C" fn redinv_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}

/// Message of the last error on this thread, or null. Valid until the next
/// failing call on the same thread.
#[no_mangle]
pub extern "C" fn redinv_last_error() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ref().map_or(ptr::null(), |s| s.as_ptr()))
}

/// Library version as a static string.
#[no_mangle]
pub extern "C" fn redinv_version() -> *const c_char {
    concat!(env!("CARGO_PKG_VERSION"), "\0").as_ptr().cast()
}

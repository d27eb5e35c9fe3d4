//! Exact computation of lengths, multiplicities and minimal reductions in
//! Cohen-Macaulay local rings presented as quotients of polynomial rings.
//!
//! The crate is organised bottom-up:
//!
//! * [`field`]: prime fields and the rationals,
//! * [`poly`]: sparse polynomials, term orders and their text syntax,
//! * [`groebner`]: Buchberger's algorithm and staircase counting,
//! * [`rings`]: ring presentations `A = S/I_A` and ideal algebra,
//! * [`invariants`]: lengths, minimal generator counts, Hilbert–Samuel data,
//!   multiplicity and a Cohen–Macaulay test,
//! * [`reduction`]: reduction testing and randomized minimal reductions,
//! * [`experiments`]: identity checks over sampled reductions and reports,
//! * [`input`] and [`session`]: the ring-file grammar and a field-erased
//!   front end shared by the CLI and the C bindings.

pub mod cli;
pub mod corpus;
pub mod experiments;
pub mod field;
pub mod groebner;
pub mod input;
pub mod invariants;
pub mod poly;
pub mod reduction;
pub mod rings;
pub mod session;

pub use field::{Field, FieldElement, FieldSpec, PrimeField, Rationals};
pub use poly::{Monomial, Polynomial, TermOrder};
pub use rings::{IdealHandle, RingPresentation};

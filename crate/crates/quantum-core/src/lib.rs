//! Exact state-vector algebra for small multi-partite quantum systems whose
//! amplitudes live in the real number field Q(sqrt2, sqrt3).
//!
//! The crate provides three layers:
//!
//! * [`FieldElement`] — exact arithmetic on the basis {1, sqrt2, sqrt3,
//!   sqrt6}, including inverses via Galois conjugation and sign decisions via
//!   interval refinement;
//! * [`Ket`] — sparse vectors over a roster of named two-level subsystems,
//!   with tensor products and inner products;
//! * [`Projector`] — orthonormal-span projectors with exact Born
//!   probabilities and commutation tests.
//!
//! Everything is computed symbolically; there is no floating point anywhere,
//! so equalities asserted by callers are genuine identities.

mod field;
mod ket;
mod projector;

pub use field::{ratio, FieldElement};
pub use ket::{BasisLabel, Ket, Subsystem, Symbol, SymbolKind};
pub use projector::Projector;

use thiserror::Error;

/// Errors surfaced by exact-algebra operations.
#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("division by zero in field")]
    DivisionByZero,
    #[error("roster mismatch: {left} vs {right}")]
    RosterMismatch { left: String, right: String },
    #[error("overlapping rosters: {shared} appears on both sides")]
    OverlappingRosters { shared: &'static str },
    #[error("projector roster is not contained in the state roster")]
    NotSubRoster,
    #[error("state is not normalized")]
    Unnormalized,
    #[error("label {symbol} is not valid for subsystem {subsystem}")]
    InvalidLabel {
        symbol: &'static str,
        subsystem: &'static str,
    },
    #[error("duplicate subsystem {0} in roster")]
    DuplicateSubsystem(&'static str),
    #[error("projector span is empty")]
    EmptySpan,
    #[error("projector span is not orthonormal")]
    SpanNotOrthonormal,
    #[error("amplitude key length {got} does not match roster size {want}")]
    KeyLength { got: usize, want: usize },
}

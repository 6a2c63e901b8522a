//! Orchestration of the extended Wigner's-friend argument.
//!
//! This crate wires the exact quantum simulator to the epistemic derivation
//! engine:
//!
//! * [`premises`] encodes the agents' shared rulebook, the observed run, and
//!   the trust relation, cross-checking every physical claim against the
//!   simulator in exact arithmetic;
//! * [`contradiction`] reproduces, under naive trust, the run where the top
//!   observer ends up both knowing and not knowing its own outcome, as a
//!   certificate the independent trace checker validates;
//! * [`block`] certifies that once knowledge operators are tagged with their
//!   measurement contexts, the same material reaches a fixpoint with no
//!   contradiction and no collapsed cross-context prediction;
//! * [`report`] renders both outcomes as a one-page verdict.

pub mod block;
pub mod contradiction;
pub mod premises;
pub mod report;

use thiserror::Error as ThisError;

pub use block::{certify_block, naive_closure, BlockCertificate};
pub use contradiction::{
    reproduce_agent_variants, reproduce_contradiction, ContradictionCertificate,
};
pub use premises::{
    collapsed_prediction, encode_premises, measurement_context, null_conclusion, trust,
    verify_quantum_grounding,
};
pub use report::verdict_report;

/// Errors surfaced while building or validating certificates.
#[derive(Clone, Debug, ThisError, PartialEq)]
pub enum Error {
    /// The exact simulator refuted a physical claim a premise encodes.
    #[error("exact simulation contradicts the encoded claim: {claim}")]
    QuantumMismatch { claim: String },
    /// An arithmetic or protocol-layer failure (malformed state, key, etc.).
    #[error("quantum layer error: {0}")]
    Quantum(String),
    /// The derivation engine gave up or rejected its inputs.
    #[error(transparent)]
    Engine(#[from] epistemic_logic::EngineError),
    /// A produced certificate failed one of its own validity conditions.
    #[error("certificate check failed: {0}")]
    Certificate(String),
}

impl From<fr_protocol::Error> for Error {
    fn from(e: fr_protocol::Error) -> Self {
        Error::Quantum(e.to_string())
    }
}

impl From<quantum_core::Error> for Error {
    fn from(e: quantum_core::Error) -> Self {
        Error::Quantum(e.to_string())
    }
}

impl From<epistemic_logic::TraceError> for Error {
    fn from(e: epistemic_logic::TraceError) -> Self {
        Error::Certificate(e.to_string())
    }
}

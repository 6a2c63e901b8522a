//! Exact model of the two-lab nested-observer protocol (an extended
//! Wigner's-friend experiment).
//!
//! Two friends, F1 and F2, sit in sealed labs. F1 measures a spin S1 whose
//! state is sqrt(1/3) phi + sqrt(2/3) psi, records the outcome, and sends a
//! second spin S2 prepared accordingly; F2 measures S2 and records. Two
//! outside observers, W1 and W2, then measure the *entire* labs (spin plus
//! friend's memory) in a basis containing the "flip" vector
//! chi = (phi xi - psi zeta)/sqrt2, and publicly announce whether they hit it
//! (`nonnull`) or not (`null`). A round halts when both announcements are
//! nonnull, which happens with exact probability 1/12.
//!
//! Everything here is computed symbolically over Q(sqrt2, sqrt3) via
//! [`quantum_core`]: the global entangled state, the flip bases, the joint
//! outcome table, and the per-round sampler (whose only randomness is a
//! seeded stream of u64 draws compared against exact rational thresholds).

mod sample;
mod scenario;
mod state;
mod steps;

pub use sample::{sample_until_halt, TrialRecord};
pub use scenario::{
    branch_weights, enumerate_scenarios, outcome_distribution, w_joint, Scenario,
};
pub use state::{
    build_global_state, chi, full_roster, p_chi, p_chi_complement, product_basis,
    record_projector, record_state, w_basis,
};
pub use steps::{protocol_steps, ProtocolStep, StepAction};

use std::fmt;
use thiserror::Error;

/// The four reasoning agents of the protocol.
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub enum Agent {
    F1,
    F2,
    W1,
    W2,
}

impl Agent {
    pub const ALL: [Agent; 4] = [Agent::F1, Agent::F2, Agent::W1, Agent::W2];

    pub fn name(self) -> &'static str {
        match self {
            Agent::F1 => "F1",
            Agent::F2 => "F2",
            Agent::W1 => "W1",
            Agent::W2 => "W2",
        }
    }

    pub fn parse(s: &str) -> Option<Agent> {
        match s.to_ascii_uppercase().as_str() {
            "F1" => Some(Agent::F1),
            "F2" => Some(Agent::F2),
            "W1" => Some(Agent::W1),
            "W2" => Some(Agent::W2),
            _ => None,
        }
    }
}

impl fmt::Display for Agent {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// One of the two sealed labs.
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub enum Lab {
    L1,
    L2,
}

impl Lab {
    pub fn roster(self) -> [quantum_core::Subsystem; 2] {
        use quantum_core::Subsystem;
        match self {
            Lab::L1 => [Subsystem::S1, Subsystem::F1],
            Lab::L2 => [Subsystem::S2, Subsystem::F2],
        }
    }
}

impl fmt::Display for Lab {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Lab::L1 => "L1",
            Lab::L2 => "L2",
        })
    }
}

/// A friend's measurement record.
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub enum SystemOutcome {
    Phi,
    Psi,
}

impl fmt::Display for SystemOutcome {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            SystemOutcome::Phi => "phi",
            SystemOutcome::Psi => "psi",
        })
    }
}

/// An outside observer's announced flip-measurement outcome.
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub enum WignerOutcome {
    Nonnull,
    Null,
}

impl fmt::Display for WignerOutcome {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            WignerOutcome::Nonnull => "nonnull",
            WignerOutcome::Null => "null",
        })
    }
}

/// Errors surfaced by the protocol layer.
#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error(transparent)]
    Quantum(#[from] quantum_core::Error),
    /// An exact identity the outcome table is built on failed to hold;
    /// indicates a corrupted state construction, never expected at runtime.
    #[error("state certification failed: {0}")]
    CertificationFailed(&'static str),
    #[error("scenario probability is not rational")]
    IrrationalProbability,
}

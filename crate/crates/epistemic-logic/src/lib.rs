//! A multi-agent epistemic logic for reasoning about the extended
//! Wigner's-friend protocol.
//!
//! The logic's formulas combine eight measurement-outcome atoms with
//! negation, conjunction, material implication, and knowledge operators
//! `K[agent@times](...)` indexed by an agent, a window of protocol steps,
//! and optionally the measurement context the agent reasons in. The crate
//! provides:
//!
//! - [`formula`]: the AST, canonical forms, a structural entailment check,
//!   and a stable printing ([`Formula`], [`TimeSet`], [`AgentInstance`]).
//! - [`parse`]: a parser for the printed syntax with byte-accurate error
//!   positions ([`parse_formula`]).
//! - [`kripke`]: possible-world semantics over sampled protocol outcomes
//!   ([`KripkeModel`]), used to sanity-check the propositional layer.
//! - [`rules`]: the inference catalog — knowledge distribution, implication
//!   chaining, cross-agent trust, introspection, conjunction handling, and
//!   the self-defeater lift — each application named by a [`RuleId`] so it
//!   can be replayed ([`apply_rule`]).
//! - [`engine`]: a deterministic forward-chaining engine producing
//!   checkable traces ([`derive`], [`DerivationTrace`], [`check_trace`]).
//!
//! Trust comes in two strengths ([`TrustMode`]): naive trust lets a
//! licensed agent adopt another's knowledge unconditionally, while
//! contextual trust additionally demands that both knowledge operators
//! carry the same measurement-context tag. The same premise material that
//! yields a self-defeating conclusion under naive trust saturates without
//! one under contextual trust; both behaviors are exercised by the
//! higher-level protocol crates.

pub mod engine;
pub mod formula;
pub mod kripke;
pub mod parse;
pub mod rules;

pub use engine::{
    check_trace, derive, Derivation, DerivationTrace, EngineConfig, EngineError, PremiseEntry,
    PremiseRole, SearchGoal, TraceError, TraceStep,
};
pub use formula::{AgentInstance, Atom, Context, Formula, TimeSet};
pub use fr_protocol::Agent;
pub use kripke::{KripkeModel, ModelError};
pub use parse::{parse_formula, ParseError};
pub use rules::{apply_rule, condition_s_lift, epistemic_clash, RuleId, TrustMode, TrustRelation};

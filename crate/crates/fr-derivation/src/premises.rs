//! The inputs of the extended Wigner's-friend argument: the rulebook every
//! agent signed off on before the run, the facts observed in the halting
//! run itself, and the trust relation between the four agents.
//!
//! Each rulebook entry carries physical content ("if the friend records psi,
//! the outside chi-measurement of her colleague's lab comes out null").
//! Encoding fails hard if the exact simulator disagrees with any of those
//! claims, so the epistemic layer can never drift away from the physics.

use std::sync::OnceLock;

use epistemic_logic::{
    parse_formula, Agent, AgentInstance, Context, Formula, PremiseEntry, PremiseRole,
    TimeSet, TrustMode, TrustRelation,
};
use fr_protocol::{
    build_global_state, outcome_distribution, p_chi, record_projector, Lab, SystemOutcome,
};
use quantum_core::{ratio, FieldElement};

use crate::Error;

/// The rulebook: protocol-level agreements, including each agent's copy of
/// the other agents' reasoning rules (relayed before the run started).
const AGREEMENTS: [(&str, &str); 9] = [
    (
        "f1-prediction",
        "K[F1@<3](K[F1@1](S1=psi) -> K[W2@4](PchiL2=0))",
    ),
    (
        "f2-inference",
        "K[F2@<3](K[F2@1](S2=psi) -> K[F1@<3](S1=psi))",
    ),
    (
        "w1-certification",
        "K[W1@<4](K[W1@3](PchiL1!=0) -> K[F2@1,2](S2=psi))",
    ),
    (
        "f1-prediction-at-f2",
        "K[F2@2](K[F1@<3](K[F1@1](S1=psi) -> K[W2@4](PchiL2=0)))",
    ),
    (
        "f2-inference-at-w1",
        "K[W1@3](K[F2@<3](K[F2@1](S2=psi) -> K[F1@<3](S1=psi)))",
    ),
    (
        "f1-prediction-at-w1-f2",
        "K[W1@3](K[F2@2](K[F1@<3](K[F1@1](S1=psi) -> K[W2@4](PchiL2=0))))",
    ),
    (
        "w1-certification-at-w2",
        "K[W2@4](K[W1@<4](K[W1@3](PchiL1!=0) -> K[F2@1,2](S2=psi)))",
    ),
    (
        "f2-inference-at-w2-w1",
        "K[W2@4](K[W1@3](K[F2@<3](K[F2@1](S2=psi) -> K[F1@<3](S1=psi))))",
    ),
    (
        "f1-prediction-at-w2-w1-f2",
        "K[W2@4](K[W1@3](K[F2@2](K[F1@<3](K[F1@1](S1=psi) -> K[W2@4](PchiL2=0)))))",
    ),
];

/// What actually happened in the followed run: both friends recorded psi,
/// both outside observers saw the nonnull chi-outcome, and each observer's
/// announcement reached the other agents.
const OBSERVATIONS: [(&str, &str); 8] = [
    ("f1-records-psi", "K[F1@<3](S1=psi)"),
    ("f2-records-psi", "K[F2@1,2](S2=psi)"),
    ("w1-observes-nonnull", "K[W1@>=2](PchiL1!=0)"),
    ("w2-observes-nonnull", "K[W2@3,4](PchiL2!=0)"),
    ("w1-announcement-at-w2", "K[W2@3,4](K[W1@>=2](PchiL1!=0))"),
    ("w2-announcement-at-f1", "K[F1@4](K[W2@3,4](PchiL2!=0))"),
    ("w2-announcement-at-f2", "K[F2@4](K[W2@3,4](PchiL2!=0))"),
    ("w2-announcement-at-w1", "K[W1@4](K[W2@3,4](PchiL2!=0))"),
];

/// The fully collapsed implication the top observer ends up holding once
/// every delegation in the trust chain has been absorbed: "W2 knows that W1
/// knows: if W1 saw nonnull, then W2 will see null."
const COLLAPSED_PREDICTION: &str =
    "K[W2@4](K[W1@3](K[W1@3](PchiL1!=0) -> K[W2@4](PchiL2=0)))";

/// Each remaining agent's own collapsed conclusion that the top observer's
/// chi-measurement must come out null.
const NULL_CONCLUSIONS: [(Agent, &str); 3] = [
    (Agent::F1, "K[F1@<3](K[W2@4](PchiL2=0))"),
    (Agent::F2, "K[F2@2](K[W2@4](PchiL2=0))"),
    (Agent::W1, "K[W1@3](K[W2@4](PchiL2=0))"),
];

fn parse(text: &str) -> Formula {
    parse_formula(text).expect("built-in encodings parse")
}

fn instance(agent: Agent, times: &[u8]) -> AgentInstance {
    AgentInstance::new(agent, TimeSet::from_times(times).expect("nonempty window"))
}

/// The measurement context each agent's knowledge lives in: the friends
/// measure in the product (record) basis, the outside observers in the
/// entangled chi-basis.
pub fn measurement_context(agent: Agent) -> Context {
    match agent {
        Agent::F1 | Agent::F2 => Context::C1,
        Agent::W1 | Agent::W2 => Context::C2,
    }
}

fn tag(mode: TrustMode, formula: Formula) -> Formula {
    match mode {
        TrustMode::Naive => formula,
        TrustMode::Contextual => formula.with_agent_contexts(measurement_context),
    }
}

/// The trust relation: the announcement-ordered chain from the final agent
/// down to the first friend, plus the two pairs induced by the top
/// observer's public announcement.  Self-trust (one agent across times) is
/// structural and needs no pairs.
pub fn trust(mode: TrustMode) -> TrustRelation {
    TrustRelation::new(
        mode,
        vec![
            (instance(Agent::F1, &[4]), instance(Agent::W2, &[3, 4])),
            (
                instance(Agent::W2, &[3, 4]),
                instance(Agent::W1, &[2, 3, 4]),
            ),
            (instance(Agent::W1, &[2, 3, 4]), instance(Agent::F2, &[2])),
            (instance(Agent::F2, &[2]), instance(Agent::F1, &[0, 1, 2])),
            (instance(Agent::F2, &[4]), instance(Agent::W2, &[3, 4])),
            (instance(Agent::W1, &[4]), instance(Agent::W2, &[3, 4])),
        ],
    )
}

/// All premises: the rulebook as tautologies, the run record as scenario
/// facts.  In contextual mode every knowledge operator is tagged with its
/// agent's measurement context.
///
/// Fails if the exact simulator does not certify the physical claims the
/// rulebook encodes; see [`verify_quantum_grounding`].
pub fn encode_premises(mode: TrustMode) -> Result<Vec<PremiseEntry>, Error> {
    verify_quantum_grounding()?;
    let mut premises = Vec::with_capacity(AGREEMENTS.len() + OBSERVATIONS.len());
    for (name, text) in AGREEMENTS {
        premises.push(PremiseEntry::new(
            name,
            PremiseRole::Tautology,
            tag(mode, parse(text)),
        ));
    }
    for (name, text) in OBSERVATIONS {
        premises.push(PremiseEntry::new(
            name,
            PremiseRole::ScenarioFact,
            tag(mode, parse(text)),
        ));
    }
    Ok(premises)
}

/// The collapsed deep implication (see [`COLLAPSED_PREDICTION`]), tagged
/// according to the mode.
pub fn collapsed_prediction(mode: TrustMode) -> Formula {
    tag(mode, parse(COLLAPSED_PREDICTION))
}

/// `agent`'s own collapsed "the top observer will see null" conclusion, the
/// waypoint its per-agent contradiction routes through.  Defined for the
/// three agents other than the top observer (whose waypoint is
/// [`collapsed_prediction`]).
pub fn null_conclusion(agent: Agent, mode: TrustMode) -> Option<Formula> {
    NULL_CONCLUSIONS
        .iter()
        .find(|(a, _)| *a == agent)
        .map(|(_, text)| tag(mode, parse(text)))
}

fn check(ok: bool, claim: &str) -> Result<(), Error> {
    if ok {
        Ok(())
    } else {
        Err(Error::QuantumMismatch {
            claim: claim.to_string(),
        })
    }
}

fn run_grounding() -> Result<(), Error> {
    let state = build_global_state();

    // The followed scenario happens: both observers see nonnull in exactly
    // one run out of twelve, so the single-valuedness clash is physical.
    let both_nonnull = p_chi(Lab::L2)
        .project(&p_chi(Lab::L1).project(&state)?)?
        .norm_sq();
    check(
        both_nonnull == FieldElement::from_rational(ratio(1, 12)),
        "both outside measurements fire together in 1/12 of runs",
    )?;
    check(
        outcome_distribution()?
            .iter()
            .any(|row| row.halted() && !row.probability.is_zero()),
        "the halting scenario has nonzero probability",
    )?;

    // First friend's prediction: once lab one records psi, lab two sits in
    // the chi-orthogonal state, so the outside measurement must be null.
    let psi_branch = record_projector(Lab::L1, SystemOutcome::Psi).project(&state)?;
    check(
        !psi_branch.is_zero_vector(),
        "the psi branch of lab one is populated",
    )?;
    check(
        p_chi(Lab::L2).project(&psi_branch)?.is_zero_vector(),
        "in the psi branch, lab two is orthogonal to chi",
    )?;

    // First observer's certification: a nonnull click on lab one leaves a
    // state whose lab-two component records psi with certainty.
    let clicked = p_chi(Lab::L1).project(&state)?;
    check(
        clicked.norm_sq() == FieldElement::from_rational(ratio(1, 6)),
        "the nonnull click on lab one has weight 1/6",
    )?;
    check(
        record_projector(Lab::L2, SystemOutcome::Phi)
            .project(&clicked)?
            .is_zero_vector(),
        "after a nonnull click on lab one, lab two holds psi for certain",
    )?;

    // Second friend's inference: a psi record in lab two pins lab one's
    // record to psi as well.
    let lab2_psi = record_projector(Lab::L2, SystemOutcome::Psi).project(&state)?;
    check(
        record_projector(Lab::L1, SystemOutcome::Phi)
            .project(&lab2_psi)?
            .is_zero_vector(),
        "a psi record in lab two certifies a psi record in lab one",
    )?;

    Ok(())
}

/// Re-derives, in exact arithmetic, the physical claim embedded in each
/// rulebook entry.  Cached: the checks are pure functions of the protocol.
pub fn verify_quantum_grounding() -> Result<(), Error> {
    static CHECKED: OnceLock<Result<(), Error>> = OnceLock::new();
    CHECKED.get_or_init(run_grounding).clone()
}

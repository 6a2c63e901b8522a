//! The naive-trust contradiction, packaged as independently checkable
//! certificates: one for the top observer and one per remaining agent.

use epistemic_logic::{
    check_trace, derive, epistemic_clash, Agent, DerivationTrace, EngineConfig, Formula,
    RuleId, SearchGoal, TrustMode,
};

use crate::premises::{collapsed_prediction, encode_premises, null_conclusion, trust};
use crate::Error;

/// A validated derivation of a self-contradictory knowledge state
/// `K_a(p) & !K_a(p)` for one agent.
#[derive(Clone, Debug)]
pub struct ContradictionCertificate {
    /// The agent whose knowledge clashes.
    pub agent: Agent,
    /// A checkable trace ending in the self-defeater lift for `agent`.
    pub trace: DerivationTrace,
    /// The collapsed conclusion the trace is required to pass through.
    pub waypoint: Formula,
}

impl ContradictionCertificate {
    /// The final, self-contradictory formula.
    pub fn clash(&self) -> &Formula {
        self.trace.conclusion()
    }
}

fn certify(agent: Agent, waypoint: Formula) -> Result<ContradictionCertificate, Error> {
    let premises = encode_premises(TrustMode::Naive)?;
    let trust = trust(TrustMode::Naive);
    let derivation = derive(
        &premises,
        &trust,
        &SearchGoal::ContradictionFor(agent),
        &EngineConfig::default(),
    )?;
    if !derivation.goal_met() {
        return Err(Error::Certificate(format!(
            "no self-contradictory knowledge state for {} was derivable",
            agent.name()
        )));
    }
    let trace = derivation
        .trace_with_milestones(&[&waypoint])
        .ok_or_else(|| {
            Error::Certificate(format!(
                "the closure misses the required waypoint {waypoint}"
            ))
        })?;

    // The certificate must stand on its own: every step re-checks, the
    // final step is the self-defeater lift, and the clash belongs to the
    // requested agent.
    check_trace(&trace, &premises, &trust)?;
    let last = trace.steps.last().expect("traces are nonempty");
    if last.rule != RuleId::ConditionS {
        return Err(Error::Certificate(format!(
            "final step uses {:?} instead of the self-defeater lift",
            last.rule
        )));
    }
    match epistemic_clash(&last.formula) {
        Some(instance) if instance.agent == agent => {}
        _ => {
            return Err(Error::Certificate(format!(
                "final formula {} is not a knowledge clash for {}",
                last.formula,
                agent.name()
            )));
        }
    }
    if !trace.contains(&waypoint) {
        return Err(Error::Certificate(format!(
            "trace does not pass through {waypoint}"
        )));
    }

    Ok(ContradictionCertificate {
        agent,
        trace,
        waypoint,
    })
}

/// Derives the top observer's contradiction under naive trust.  The
/// certificate's trace passes through the fully collapsed deep prediction
/// and ends in the condition-(S) self-defeater lift for that observer.
pub fn reproduce_contradiction() -> Result<ContradictionCertificate, Error> {
    certify(Agent::W2, collapsed_prediction(TrustMode::Naive))
}

/// Derives the same clash for each remaining agent, routed through that
/// agent's own collapsed "the top observer will see null" conclusion.
pub fn reproduce_agent_variants() -> Result<Vec<ContradictionCertificate>, Error> {
    [Agent::F1, Agent::F2, Agent::W1]
        .into_iter()
        .map(|agent| {
            let waypoint = null_conclusion(agent, TrustMode::Naive)
                .expect("the three lower agents have null conclusions");
            certify(agent, waypoint)
        })
        .collect()
}

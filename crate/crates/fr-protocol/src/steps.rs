//! The five-step schedule of one protocol round.

use std::fmt;

use crate::Agent;

/// What happens during a step.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum StepAction {
    /// Measure a spin, record the outcome, prepare and send the second spin.
    PrepareMeasureSend,
    /// Measure a spin and record the outcome.
    MeasureRecord,
    /// Measure a whole lab in its flip basis and announce nonnull/null.
    MeasureAnnounce,
    /// Halt if both announcements were nonnull, otherwise restart.
    HaltCheck,
}

/// One scheduled step of a round.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub struct ProtocolStep {
    pub index: u8,
    pub actor: Option<Agent>,
    pub action: StepAction,
    pub description: &'static str,
}

/// The canonical schedule. Time sets used by the reasoning layer refer to
/// these indices: an agent "at time t" holds the beliefs it has once step t
/// has run.
pub fn protocol_steps() -> [ProtocolStep; 5] {
    [
        ProtocolStep {
            index: 0,
            actor: Some(Agent::F1),
            action: StepAction::PrepareMeasureSend,
            description:
                "F1 measures S1 in the phi/psi basis, records the outcome, and sends S2 \
                 prepared as phi on outcome phi, or (phi + psi)/sqrt2 on outcome psi",
        },
        ProtocolStep {
            index: 1,
            actor: Some(Agent::F2),
            action: StepAction::MeasureRecord,
            description: "F2 measures S2 in the phi/psi basis and records the outcome",
        },
        ProtocolStep {
            index: 2,
            actor: Some(Agent::W1),
            action: StepAction::MeasureAnnounce,
            description:
                "W1 measures lab 1 (spin and record together) in its flip basis and announces \
                 nonnull on the flip vector, null otherwise",
        },
        ProtocolStep {
            index: 3,
            actor: Some(Agent::W2),
            action: StepAction::MeasureAnnounce,
            description:
                "W2 measures lab 2 in its flip basis and announces nonnull or null",
        },
        ProtocolStep {
            index: 4,
            actor: None,
            action: StepAction::HaltCheck,
            description: "halt if both announcements were nonnull, otherwise restart the round",
        },
    ]
}

impl fmt::Display for ProtocolStep {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.actor {
            Some(actor) => write!(f, "step {} [{}]: {}", self.index, actor, self.description),
            None => write!(f, "step {}: {}", self.index, self.description),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn schedule_is_five_steps_with_one_actor_per_measurement() {
        let steps = protocol_steps();
        assert_eq!(steps.len(), 5);
        for (i, step) in steps.iter().enumerate() {
            assert_eq!(step.index as usize, i);
        }
        let actors: Vec<Option<Agent>> = steps.iter().map(|s| s.actor).collect();
        assert_eq!(
            actors,
            vec![
                Some(Agent::F1),
                Some(Agent::F2),
                Some(Agent::W1),
                Some(Agent::W2),
                None
            ]
        );
        assert_eq!(steps[4].action, StepAction::HaltCheck);
    }
}

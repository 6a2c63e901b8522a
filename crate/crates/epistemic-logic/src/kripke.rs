//! Possible-world semantics for the knowledge operators.
//!
//! States are protocol scenarios; each agent instance carries its own
//! accessibility relation. `K[a@T](f)` holds at a state when `f` holds at
//! every state the instance can access from it — vacuously true when it
//! accesses none. Context tags are ignored by evaluation: contexts restrict
//! which *inference rules* may combine formulas, not what a formula says
//! about the model.

use std::collections::{BTreeMap, BTreeSet};

use fr_protocol::{Agent, Scenario};
use thiserror::Error;

use crate::formula::{AgentInstance, Atom, Formula};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ModelError {
    #[error("state is not in the model")]
    StateNotInModel,
    #[error("no interpretation for atom {atom} at state {state}")]
    MissingAtom { state: usize, atom: Atom },
    #[error("no accessibility relation for instance {0}")]
    MissingRelation(AgentInstance),
}

/// A finite Kripke model over protocol scenarios.
#[derive(Clone, Debug)]
pub struct KripkeModel {
    states: Vec<Scenario>,
    interpretation: BTreeMap<(usize, Atom), bool>,
    access: BTreeMap<AgentInstance, BTreeSet<(usize, usize)>>,
}

impl KripkeModel {
    /// A model over the given states with the full atomic interpretation
    /// and no accessibility relations yet.
    pub fn new(states: Vec<Scenario>) -> Self {
        let mut interpretation = BTreeMap::new();
        for (index, scenario) in states.iter().enumerate() {
            for atom in Atom::ALL {
                interpretation.insert((index, atom), atom.holds_in(scenario));
            }
        }
        KripkeModel {
            states,
            interpretation,
            access: BTreeMap::new(),
        }
    }

    /// Adds (or replaces) one instance's accessibility relation.
    pub fn with_access(
        mut self,
        instance: AgentInstance,
        pairs: impl IntoIterator<Item = (usize, usize)>,
    ) -> Self {
        self.access.insert(instance, pairs.into_iter().collect());
        self
    }

    /// The observational model: an instance accesses the states that agree
    /// with its own outcome and with every announcement it has heard (W1's
    /// from step 3 on, W2's from step 4 on).
    pub fn observational(states: Vec<Scenario>, instances: &[AgentInstance]) -> Self {
        let mut model = KripkeModel::new(states);
        for &instance in instances {
            let mut pairs = BTreeSet::new();
            for (i, s) in model.states.iter().enumerate() {
                for (j, t) in model.states.iter().enumerate() {
                    if Self::indistinguishable(instance, s, t) {
                        pairs.insert((i, j));
                    }
                }
            }
            model.access.insert(instance, pairs);
        }
        model
    }

    fn indistinguishable(instance: AgentInstance, s: &Scenario, t: &Scenario) -> bool {
        let own_agrees = match instance.agent {
            Agent::F1 => s.f1 == t.f1,
            Agent::F2 => s.f2 == t.f2,
            Agent::W1 => s.w1 == t.w1,
            Agent::W2 => s.w2 == t.w2,
        };
        let min_time = instance.times.earliest().unwrap_or(0);
        let heard_w1 = min_time < 3 || s.w1 == t.w1;
        let heard_w2 = min_time < 4 || s.w2 == t.w2;
        own_agrees && heard_w1 && heard_w2
    }

    pub fn states(&self) -> &[Scenario] {
        &self.states
    }

    /// Evaluates a formula at the state equal to `scenario`.
    pub fn evaluate_at(&self, scenario: &Scenario, formula: &Formula) -> Result<bool, ModelError> {
        let index = self
            .states
            .iter()
            .position(|s| s == scenario)
            .ok_or(ModelError::StateNotInModel)?;
        self.evaluate(index, formula)
    }

    /// Evaluates a formula at a state index.
    pub fn evaluate(&self, state: usize, formula: &Formula) -> Result<bool, ModelError> {
        if state >= self.states.len() {
            return Err(ModelError::StateNotInModel);
        }
        match formula {
            Formula::Atom(atom) => self
                .interpretation
                .get(&(state, *atom))
                .copied()
                .ok_or(ModelError::MissingAtom { state, atom: *atom }),
            Formula::Not(f) => Ok(!self.evaluate(state, f)?),
            Formula::And(a, b) => Ok(self.evaluate(state, a)? && self.evaluate(state, b)?),
            Formula::Implies(a, b) => Ok(!self.evaluate(state, a)? || self.evaluate(state, b)?),
            Formula::Knows(instance, _context, body) => {
                let relation = self
                    .access
                    .get(instance)
                    .ok_or(ModelError::MissingRelation(*instance))?;
                for &(from, to) in relation {
                    if from == state && !self.evaluate(to, body)? {
                        return Ok(false);
                    }
                }
                Ok(true)
            }
        }
    }
}

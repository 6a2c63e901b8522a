//! Certificate that contextual trust blocks the contradiction: the same
//! premise material, tagged with measurement contexts, saturates to a
//! fixpoint that contains neither a knowledge clash nor the collapsed
//! cross-context prediction.

use epistemic_logic::{derive, Derivation, EngineConfig, SearchGoal, TrustMode};

use crate::premises::{collapsed_prediction, encode_premises, trust};
use crate::Error;

/// Proof-by-saturation that the contradiction is underivable: the closed
/// contextual formula set plus the facts certified about it.
#[derive(Debug)]
pub struct BlockCertificate {
    /// The closed contextual derivation.
    closure: Derivation,
    /// The round budget the saturation was given.
    pub depth_budget: usize,
}

impl BlockCertificate {
    /// Number of formulas in the contextual fixpoint.
    pub fn fixpoint_size(&self) -> usize {
        self.closure.len()
    }

    /// Saturation rounds the closure actually needed.
    pub fn rounds(&self) -> usize {
        self.closure.rounds()
    }

    /// The closed contextual set, for containment and monotonicity checks.
    pub fn closure(&self) -> &Derivation {
        &self.closure
    }
}

/// Saturates the naive premise set to its closure.  Its round count is the
/// natural depth budget for [`certify_block`]; its formula set is the
/// superset the contextual closure must stay inside.
pub fn naive_closure() -> Result<Derivation, Error> {
    let premises = encode_premises(TrustMode::Naive)?;
    let relation = trust(TrustMode::Naive);
    let closure = derive(
        &premises,
        &relation,
        &SearchGoal::Saturate,
        &EngineConfig::default(),
    )?;
    if !closure.reached_fixpoint() {
        return Err(Error::Certificate(
            "naive saturation did not reach a fixpoint within the default budget".into(),
        ));
    }
    Ok(closure)
}

/// Saturates the contextual premise set within `depth` rounds and certifies
/// the block:
///
/// * the search reaches a true fixpoint inside the budget,
/// * no formula of clash shape `K_a(p) & !K_a(p)` is ever produced,
/// * no contextual dressing of the collapsed prediction appears,
/// * every original premise is still present (saturation never deletes).
///
/// `depth` should be at least the naive closure's round count; a clash or a
/// collapsed prediction in the closure is a hard error, not a certificate.
pub fn certify_block(depth: usize) -> Result<BlockCertificate, Error> {
    let premises = encode_premises(TrustMode::Contextual)?;
    let relation = trust(TrustMode::Contextual);
    let config = EngineConfig {
        max_rounds: depth,
        ..EngineConfig::default()
    };
    // Searching for *any* agent's clash means every inserted formula is
    // checked; meeting the goal would falsify the block.
    let closure = derive(
        &premises,
        &relation,
        &SearchGoal::AnyContradiction,
        &config,
    )?;
    if closure.goal_met() {
        let clash = closure
            .trace()
            .map(|t| t.conclusion().to_string())
            .unwrap_or_default();
        return Err(Error::Certificate(format!(
            "contextual saturation derived a knowledge clash: {clash}"
        )));
    }
    if !closure.reached_fixpoint() {
        return Err(Error::Certificate(format!(
            "contextual saturation still open after {depth} rounds"
        )));
    }
    let collapsed = collapsed_prediction(TrustMode::Naive);
    if closure.contains_up_to_contexts(&collapsed) {
        return Err(Error::Certificate(format!(
            "contextual closure contains a dressing of {collapsed}"
        )));
    }
    for premise in &premises {
        if !closure.contains(&premise.formula) {
            return Err(Error::Certificate(format!(
                "contextual closure lost premise {}",
                premise.name
            )));
        }
    }
    Ok(BlockCertificate {
        closure,
        depth_budget: depth,
    })
}

//! The `report` verb: both derivations, one combined verdict.

use std::fmt::Write as _;

use fr_derivation::{
    certify_block, naive_closure, report::DEPTH_MARGIN, reproduce_contradiction, verdict_report,
};
use serde_json::json;

use crate::{CliError, Format};

pub(crate) fn run(format: Format) -> Result<String, CliError> {
    match format {
        Format::Text => Ok(verdict_report()?),
        Format::Jsonl => {
            let contradiction = reproduce_contradiction()?;
            let naive = naive_closure()?;
            let block = certify_block(naive.rounds() + DEPTH_MARGIN)?;
            let mut out = String::new();
            let naive_line = json!({
                "type": "verdict",
                "mode": "naive",
                "outcome": "contradiction",
                "agent": contradiction.agent.to_string(),
                "steps": contradiction.trace.len(),
            });
            let contextual_line = json!({
                "type": "verdict",
                "mode": "contextual",
                "outcome": "blocked",
                "fixpoint_size": block.fixpoint_size(),
                "rounds": block.rounds(),
                "depth_budget": block.depth_budget,
            });
            let _ = writeln!(out, "{naive_line}");
            let _ = writeln!(out, "{contextual_line}");
            Ok(out)
        }
    }
}

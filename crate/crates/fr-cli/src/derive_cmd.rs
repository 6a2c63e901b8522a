//! The `derive` verb: run the epistemic engine in one trust mode and print
//! either a contradiction trace (naive) or a block certificate (contextual).

use std::fmt::Write as _;

use fr_derivation::{
    certify_block, naive_closure, report::DEPTH_MARGIN, reproduce_agent_variants,
    reproduce_contradiction, ContradictionCertificate,
};
use fr_protocol::Agent;
use serde_json::json;

use crate::{CliError, Format, Mode};

pub(crate) fn run(
    mode: Mode,
    agent: Option<&str>,
    depth: Option<usize>,
    format: Format,
) -> Result<String, CliError> {
    match mode {
        Mode::Naive => {
            if depth.is_some() {
                return Err(CliError::usage(
                    "--depth applies to --mode contextual only",
                ));
            }
            let agent = match agent {
                None => Agent::W2,
                Some(s) => Agent::parse(s).ok_or_else(|| {
                    CliError::usage(format!("unknown agent {s:?} (expected F1, F2, W1, or W2)"))
                })?,
            };
            naive(agent, format)
        }
        Mode::Contextual => {
            if agent.is_some() {
                return Err(CliError::usage("--agent applies to --mode naive only"));
            }
            contextual(depth, format)
        }
    }
}

fn naive(agent: Agent, format: Format) -> Result<String, CliError> {
    let certificate = if agent == Agent::W2 {
        reproduce_contradiction()?
    } else {
        reproduce_agent_variants()?
            .into_iter()
            .find(|c| c.agent == agent)
            .ok_or_else(|| {
                CliError::failure(format!("no contradiction variant produced for {agent}"))
            })?
    };
    Ok(match format {
        Format::Text => render_naive_text(&certificate),
        Format::Jsonl => render_naive_jsonl(&certificate),
    })
}

fn render_naive_text(certificate: &ContradictionCertificate) -> String {
    let mut out = certificate.trace.render();
    let _ = writeln!(
        out,
        "CONTRADICTION for {} in {} checked steps (via {})",
        certificate.agent,
        certificate.trace.len(),
        certificate.waypoint
    );
    out
}

fn render_naive_jsonl(certificate: &ContradictionCertificate) -> String {
    let mut out = String::new();
    for step in &certificate.trace.steps {
        let line = json!({
            "type": "step",
            "index": step.index,
            "formula": step.formula.to_string(),
            "rule": step.rule.label(certificate.trace.mode),
            "premises": step.premises,
            "tautology": step.tautology,
            "note": step.note,
        });
        let _ = writeln!(out, "{line}");
    }
    let verdict = json!({
        "type": "verdict",
        "outcome": "contradiction",
        "agent": certificate.agent.to_string(),
        "steps": certificate.trace.len(),
        "waypoint": certificate.waypoint.to_string(),
    });
    let _ = writeln!(out, "{verdict}");
    out
}

fn contextual(depth: Option<usize>, format: Format) -> Result<String, CliError> {
    let depth = match depth {
        Some(d) => d,
        None => naive_closure()?.rounds() + DEPTH_MARGIN,
    };
    let block = certify_block(depth)?;
    Ok(match format {
        Format::Text => format!(
            "BLOCKED at fixpoint (no contradiction derivable)\nfixpoint: {} formulas in {} rounds (depth budget {})\n",
            block.fixpoint_size(),
            block.rounds(),
            block.depth_budget
        ),
        Format::Jsonl => {
            let line = json!({
                "type": "verdict",
                "outcome": "blocked",
                "fixpoint_size": block.fixpoint_size(),
                "rounds": block.rounds(),
                "depth_budget": block.depth_budget,
            });
            format!("{line}\n")
        }
    })
}

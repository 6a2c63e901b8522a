//! A one-page verdict: the naive-trust contradiction with its trace, and
//! the contextual block with its fixpoint statistics.

use std::fmt::Write;

use epistemic_logic::TrustMode;

use crate::block::{certify_block, naive_closure};
use crate::contradiction::reproduce_contradiction;
use crate::premises::trust;
use crate::Error;

/// Extra saturation rounds granted to the contextual run beyond the naive
/// closure depth, so the block is certified with slack rather than at the
/// exact boundary.
pub const DEPTH_MARGIN: usize = 4;

/// Renders the trust chain as the agents ordered by announcement, highest
/// first, with the two announcement-induced pairs listed separately.
fn hierarchy_line() -> String {
    let relation = trust(TrustMode::Naive);
    let pairs = relation.pairs();
    let chain = &pairs[..4];
    let mut line = String::new();
    for (i, (truster, trusted)) in chain.iter().enumerate() {
        if i == 0 {
            let _ = write!(line, "{truster}");
        }
        let _ = write!(line, " \u{22b3} {trusted}");
    }
    for (truster, trusted) in &pairs[4..] {
        let _ = write!(line, ", {truster} \u{22b3} {trusted}");
    }
    line.push_str(", plus reflexive trust within each agent");
    line
}

/// Builds the full verdict report: both certificates, rendered for humans.
pub fn verdict_report() -> Result<String, Error> {
    let certificate = reproduce_contradiction()?;
    let naive = naive_closure()?;
    let block = certify_block(naive.rounds() + DEPTH_MARGIN)?;

    let mut out = String::new();
    let _ = writeln!(out, "Extended Wigner's-friend run: derivation verdicts");
    let _ = writeln!(out, "=================================================");
    let _ = writeln!(out);
    let _ = writeln!(out, "Trust hierarchy: {}", hierarchy_line());
    let _ = writeln!(out);
    let _ = writeln!(
        out,
        "Naive trust: CONTRADICTION ({} ends up both knowing and not knowing \
         its own outcome).",
        certificate.agent.name()
    );
    let _ = writeln!(
        out,
        "Derivation ({} steps, checker-validated):",
        certificate.trace.len()
    );
    let _ = writeln!(out, "{}", certificate.trace.render());
    let _ = writeln!(
        out,
        "Contextual trust: BLOCKED at fixpoint (no contradiction derivable)."
    );
    let _ = writeln!(
        out,
        "Fixpoint: {} formulas, closed after {} rounds within a budget of {} \
         (naive closure depth {} + margin {}).",
        block.fixpoint_size(),
        block.rounds(),
        block.depth_budget,
        naive.rounds(),
        DEPTH_MARGIN,
    );
    let _ = writeln!(
        out,
        "The collapsed prediction is absent from the contextual closure, and \
         every contextual conclusion already occurs, tags erased, in the \
         naive closure of {} formulas.",
        naive.len()
    );
    Ok(out)
}

//! The `check` verb: recompute every exact quantum identity the derivation
//! premises stand on, and print one PASS/FAIL line per identity.

use std::fmt::Write as _;

use fr_protocol::{
    build_global_state, chi, outcome_distribution, p_chi, product_basis, record_projector,
    w_basis, w_joint, Lab, SystemOutcome,
};
use quantum_core::{ratio, FieldElement, Ket, Projector};
use serde_json::json;

use crate::{CliError, Format};

pub(crate) fn run(format: Format) -> Result<String, CliError> {
    let results = identity_results()?;
    let mut out = String::new();
    let mut failures = 0usize;
    for (name, pass) in &results {
        match format {
            Format::Text => {
                let _ = writeln!(out, "{} {}", name, if *pass { "PASS" } else { "FAIL" });
            }
            Format::Jsonl => {
                let line = json!({ "type": "check", "name": name, "pass": pass });
                let _ = writeln!(out, "{line}");
            }
        }
        failures += usize::from(!pass);
    }
    if failures > 0 {
        return Err(CliError {
            code: 1,
            message: format!("{failures} identity check(s) failed"),
            stdout: Some(out),
        });
    }
    Ok(out)
}

fn rational(n: i64, d: i64) -> FieldElement {
    FieldElement::from_rational(ratio(n, d))
}

/// Project onto one lab's record, then renormalize by the exact in-field
/// square root of the branch weight's inverse.
fn renormalized_record_branch(
    lab: Lab,
    outcome: SystemOutcome,
    scale: FieldElement,
) -> Result<Ket, CliError> {
    let branch = record_projector(lab, outcome).project(&build_global_state())?;
    Ok(branch.scaled(&scale))
}

fn basis_is_orthonormal(basis: &[Ket]) -> Result<bool, CliError> {
    for (i, a) in basis.iter().enumerate() {
        for (j, b) in basis.iter().enumerate() {
            let expected = if i == j {
                FieldElement::one()
            } else {
                FieldElement::zero()
            };
            if a.inner(b)? != expected {
                return Ok(false);
            }
        }
    }
    Ok(true)
}

/// Every identity the artifact relies on, in display order.
fn identity_results() -> Result<Vec<(String, bool)>, CliError> {
    let state = build_global_state();
    let mut results: Vec<(String, bool)> = Vec::new();

    results.push(("norm(Psi) = 1".into(), state.is_normalized()));

    // Three-line factorization of the global state in the flip bases.
    let product1 = product_basis(Lab::L1);
    let product2 = product_basis(Lab::L2);
    let inv_sqrt3 = FieldElement::sqrt3().scaled(&ratio(1, 3));
    let line1 = product1[0]
        .try_add(&product1[3])?
        .tensor(&product2[0].try_add(&product2[3].scaled(&rational(1, 2)))?)?
        .scaled(&inv_sqrt3);
    let line2 = product1[0]
        .try_add(&product1[3].scaled(&-FieldElement::one()))?
        .tensor(&product2[0].try_add(&product2[3])?)?
        .scaled(&inv_sqrt3.scaled(&ratio(-1, 4)));
    let line3 = chi(Lab::L1)
        .tensor(&chi(Lab::L2))?
        .scaled(&inv_sqrt3.scaled(&ratio(1, 2)));
    let recombined = line1.try_add(&line2)?.try_add(&line3)?;
    results.push(("three-line factorization = Psi".into(), recombined == state));

    for lab in [Lab::L1, Lab::L2] {
        results.push((
            format!("flip basis of {lab:?} is orthonormal"),
            basis_is_orthonormal(&w_basis(lab))?,
        ));
    }

    let both = Projector::new(vec![chi(Lab::L1).tensor(&chi(Lab::L2))?])?;
    results.push((
        "P(both nonnull) = 1/12".into(),
        both.born_probability(&state)? == rational(1, 12),
    ));

    for lab in [Lab::L1, Lab::L2] {
        let weight = p_chi(lab).project(&state)?.norm_sq();
        results.push((
            format!("P(nonnull at {lab:?}) = 1/6"),
            weight == rational(1, 6),
        ));
    }

    // Conditional certainties behind the agents' forecasts.  Each branch
    // weight (2/3, 1/6, 1/3) has an in-field inverse square root.
    let psi_branch = renormalized_record_branch(
        Lab::L1,
        SystemOutcome::Psi,
        FieldElement::sqrt6().scaled(&ratio(1, 2)),
    )?;
    results.push((
        "P(nonnull at L2 | F1 recorded psi) = 0".into(),
        psi_branch.is_normalized()
            && p_chi(Lab::L2).born_probability(&psi_branch)? == FieldElement::zero(),
    ));

    let nonnull_branch = p_chi(Lab::L1)
        .project(&state)?
        .scaled(&FieldElement::sqrt6());
    results.push((
        "P(F2 recorded psi | nonnull at L1) = 1".into(),
        nonnull_branch.is_normalized()
            && record_projector(Lab::L2, SystemOutcome::Psi).born_probability(&nonnull_branch)?
                == FieldElement::one(),
    ));

    let f2_psi_branch =
        renormalized_record_branch(Lab::L2, SystemOutcome::Psi, FieldElement::sqrt3())?;
    results.push((
        "P(F1 recorded psi | F2 recorded psi) = 1".into(),
        f2_psi_branch.is_normalized()
            && record_projector(Lab::L1, SystemOutcome::Psi).born_probability(&f2_psi_branch)?
                == FieldElement::one(),
    ));

    let announcement_total = w_joint()?
        .iter()
        .fold(FieldElement::zero(), |acc, (_, _, p)| &acc + p);
    results.push((
        "announcement table total = 1".into(),
        announcement_total.is_one(),
    ));

    let scenario_total = outcome_distribution()?
        .iter()
        .fold(FieldElement::zero(), |acc, row| &acc + &row.probability);
    results.push(("scenario table total = 1".into(), scenario_total.is_one()));

    Ok(results)
}

//! The exact joint outcome table of one protocol round.
//!
//! The two announced flip outcomes have a genuine quantum joint distribution,
//! computed here by Born projections on the global state. The friends'
//! records do not commute with the flip measurements, so rows also carry the
//! record values *as the agents themselves reconstruct them*: a nonnull
//! announcement by W1 certifies that F2's record was psi (the flip component
//! of the global state has only psi-zeta support on lab 2), which pins F1's
//! record to psi as well; a null from W1 followed by nonnull from W2
//! certifies F1's record was phi (the lab-2 flip component has only phi-xi
//! support on lab 1), pinning F2's to phi; and when both announcements are
//! null, no certification exists, so the mass splits over the three
//! preparation branches with their exact Born weights.

use num_rational::BigRational;
use quantum_core::{FieldElement, Ket, Projector, Subsystem, Symbol};

use crate::state::{build_global_state, p_chi, p_chi_complement, record_projector};
use crate::{Error, Lab, SystemOutcome, WignerOutcome};

/// One joint outcome of a round: both records, both announcements, and the
/// row's exact probability.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct Scenario {
    pub f1: SystemOutcome,
    pub f2: SystemOutcome,
    pub w1: WignerOutcome,
    pub w2: WignerOutcome,
    pub probability: FieldElement,
}

impl Scenario {
    /// A round halts exactly when both announcements are nonnull.
    pub fn halted(&self) -> bool {
        self.w1 == WignerOutcome::Nonnull && self.w2 == WignerOutcome::Nonnull
    }

    /// Compact comma-separated form: `psi,psi,nonnull,nonnull,1/12`.
    pub fn record_line(&self) -> String {
        let p = match self.probability.to_rational() {
            Some(r) => r.to_string(),
            None => self.probability.to_string(),
        };
        format!("{},{},{},{},{}", self.f1, self.f2, self.w1, self.w2, p)
    }
}

fn flip_projector(lab: Lab, outcome: WignerOutcome) -> Projector {
    match outcome {
        WignerOutcome::Nonnull => p_chi(lab),
        WignerOutcome::Null => p_chi_complement(lab),
    }
}

/// The exact joint distribution of the two announcements.
pub fn w_joint() -> Result<[(WignerOutcome, WignerOutcome, FieldElement); 4], Error> {
    let state = build_global_state();
    let mut rows = Vec::with_capacity(4);
    for w1 in [WignerOutcome::Nonnull, WignerOutcome::Null] {
        for w2 in [WignerOutcome::Nonnull, WignerOutcome::Null] {
            let projected = flip_projector(Lab::L2, w2)
                .project(&flip_projector(Lab::L1, w1).project(&state)?)?;
            rows.push((w1, w2, projected.norm_sq()));
        }
    }
    Ok(rows.try_into().expect("four rows"))
}

/// The exact weights of the three preparation branches (f1, f2): the branch
/// (phi, psi) never occurs because F1 sends phi+psi only after seeing psi.
pub fn branch_weights() -> Result<[(SystemOutcome, SystemOutcome, FieldElement); 3], Error> {
    let state = build_global_state();
    let weight = |f1: SystemOutcome, f2: SystemOutcome| -> Result<FieldElement, Error> {
        let projected = record_projector(Lab::L2, f2)
            .project(&record_projector(Lab::L1, f1).project(&state)?)?;
        Ok(projected.norm_sq())
    };
    let rows = [
        (SystemOutcome::Phi, SystemOutcome::Phi),
        (SystemOutcome::Psi, SystemOutcome::Phi),
        (SystemOutcome::Psi, SystemOutcome::Psi),
    ];
    let excluded = weight(SystemOutcome::Phi, SystemOutcome::Psi)?;
    if !excluded.is_zero() {
        return Err(Error::CertificationFailed(
            "branch (phi, psi) should have weight zero",
        ));
    }
    let mut out = Vec::with_capacity(3);
    for (f1, f2) in rows {
        out.push((f1, f2, weight(f1, f2)?));
    }
    Ok(out.try_into().expect("three rows"))
}

/// Checks that every term of `state` carries the given symbols on the given
/// subsystems (used for the record certifications behind the table).
fn support_is(state: &Ket, fixed: &[(Subsystem, Symbol)]) -> bool {
    let positions: Vec<(usize, Symbol)> = fixed
        .iter()
        .map(|(sub, sym)| {
            let pos = state
                .roster()
                .iter()
                .position(|s| s == sub)
                .expect("subsystem present");
            (pos, *sym)
        })
        .collect();
    state
        .terms()
        .all(|(key, _)| positions.iter().all(|&(pos, sym)| key[pos] == sym))
}

/// The full six-row joint outcome table. Rows are exact, sum to one, and
/// contain no (phi, psi) record pair.
pub fn outcome_distribution() -> Result<Vec<Scenario>, Error> {
    let state = build_global_state();

    // Record certifications used to dress the nonnull rows.
    let l1_flip = p_chi(Lab::L1).project(&state)?;
    if !support_is(&l1_flip, &[(Subsystem::S2, Symbol::Psi), (Subsystem::F2, Symbol::Zeta)]) {
        return Err(Error::CertificationFailed(
            "lab-1 flip component should have only psi-zeta support on lab 2",
        ));
    }
    let l2_flip = p_chi(Lab::L2).project(&state)?;
    if !support_is(&l2_flip, &[(Subsystem::S1, Symbol::Phi), (Subsystem::F1, Symbol::Xi)]) {
        return Err(Error::CertificationFailed(
            "lab-2 flip component should have only phi-xi support on lab 1",
        ));
    }

    let joint = w_joint()?;
    let cell = |w1: WignerOutcome, w2: WignerOutcome| -> FieldElement {
        joint
            .iter()
            .find(|(a, b, _)| (*a, *b) == (w1, w2))
            .map(|(_, _, p)| p.clone())
            .expect("all four cells present")
    };

    let mut rows = Vec::with_capacity(6);
    // W1 nonnull certifies (psi, psi) regardless of W2's outcome.
    for w2 in [WignerOutcome::Nonnull, WignerOutcome::Null] {
        rows.push(Scenario {
            f1: SystemOutcome::Psi,
            f2: SystemOutcome::Psi,
            w1: WignerOutcome::Nonnull,
            w2,
            probability: cell(WignerOutcome::Nonnull, w2),
        });
    }
    // W1 null, W2 nonnull certifies (phi, phi).
    rows.push(Scenario {
        f1: SystemOutcome::Phi,
        f2: SystemOutcome::Phi,
        w1: WignerOutcome::Null,
        w2: WignerOutcome::Nonnull,
        probability: cell(WignerOutcome::Null, WignerOutcome::Nonnull),
    });
    // Both null: no certification; split over the preparation branches.
    let both_null = cell(WignerOutcome::Null, WignerOutcome::Null);
    for (f1, f2, weight) in branch_weights()? {
        rows.push(Scenario {
            f1,
            f2,
            w1: WignerOutcome::Null,
            w2: WignerOutcome::Null,
            probability: &both_null * &weight,
        });
    }

    let total = rows
        .iter()
        .fold(FieldElement::zero(), |acc, row| &acc + &row.probability);
    if !total.is_one() {
        return Err(Error::CertificationFailed("outcome table should sum to one"));
    }
    Ok(rows)
}

/// Alias for [`outcome_distribution`]: the table *is* the scenario space.
pub fn enumerate_scenarios() -> Result<Vec<Scenario>, Error> {
    outcome_distribution()
}

/// The rows with their probabilities as plain rationals (every row of this
/// table is rational even though intermediate amplitudes are not).
pub fn rational_probabilities(rows: &[Scenario]) -> Result<Vec<BigRational>, Error> {
    rows.iter()
        .map(|row| row.probability.to_rational().ok_or(Error::IrrationalProbability))
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use quantum_core::ratio;

    fn rational(n: i64, d: i64) -> FieldElement {
        FieldElement::from_rational(ratio(n, d))
    }

    #[test]
    fn announcement_joint_matches_known_cells() {
        let joint = w_joint().unwrap();
        let expect = |w1, w2, n, d| {
            let got = joint.iter().find(|(a, b, _)| (*a, *b) == (w1, w2)).unwrap();
            assert_eq!(got.2, rational(n, d));
        };
        expect(WignerOutcome::Nonnull, WignerOutcome::Nonnull, 1, 12);
        expect(WignerOutcome::Nonnull, WignerOutcome::Null, 1, 12);
        expect(WignerOutcome::Null, WignerOutcome::Nonnull, 1, 12);
        expect(WignerOutcome::Null, WignerOutcome::Null, 3, 4);
    }

    #[test]
    fn preparation_branches_are_uniform_thirds() {
        let weights = branch_weights().unwrap();
        for (_, _, w) in &weights {
            assert_eq!(*w, rational(1, 3));
        }
    }

    #[test]
    fn table_has_six_rows_summing_to_one() {
        let rows = outcome_distribution().unwrap();
        assert_eq!(rows.len(), 6);
        let total = rows
            .iter()
            .fold(FieldElement::zero(), |acc, row| &acc + &row.probability);
        assert!(total.is_one());
        assert_eq!(enumerate_scenarios().unwrap(), rows);
    }

    #[test]
    fn halting_row_is_the_double_psi_record_at_one_twelfth() {
        let rows = outcome_distribution().unwrap();
        let halting: Vec<&Scenario> = rows.iter().filter(|r| r.halted()).collect();
        assert_eq!(halting.len(), 1);
        let s = halting[0];
        assert_eq!(s.f1, SystemOutcome::Psi);
        assert_eq!(s.f2, SystemOutcome::Psi);
        assert_eq!(s.probability, rational(1, 12));
        assert_eq!(s.record_line(), "psi,psi,nonnull,nonnull,1/12");
    }

    #[test]
    fn no_row_pairs_phi_with_psi() {
        for row in outcome_distribution().unwrap() {
            assert!(!(row.f1 == SystemOutcome::Phi && row.f2 == SystemOutcome::Psi));
        }
    }

    #[test]
    fn w1_nonnull_certifies_f2_psi() {
        let rows = outcome_distribution().unwrap();
        for row in rows.iter().filter(|r| r.w1 == WignerOutcome::Nonnull) {
            assert_eq!(row.f2, SystemOutcome::Psi);
            assert_eq!(row.f1, SystemOutcome::Psi);
        }
    }

    #[test]
    fn marginals_match_the_announcement_joint() {
        let rows = outcome_distribution().unwrap();
        let joint = w_joint().unwrap();
        for (w1, w2, p) in joint {
            let marginal = rows
                .iter()
                .filter(|r| r.w1 == w1 && r.w2 == w2)
                .fold(FieldElement::zero(), |acc, r| &acc + &r.probability);
            assert_eq!(marginal, p);
        }
    }

    #[test]
    fn probabilities_are_rational() {
        let rows = outcome_distribution().unwrap();
        let rationals = rational_probabilities(&rows).unwrap();
        assert_eq!(rationals.len(), 6);
        assert_eq!(rationals[0], ratio(1, 12));
    }
}

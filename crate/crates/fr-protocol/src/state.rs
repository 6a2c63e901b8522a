//! The protocol's quantum states and the projectors the observers use.

use quantum_core::{ratio, FieldElement, Ket, Projector, Subsystem, Symbol};

use crate::{Error, Lab, SystemOutcome};

/// The full roster, in the fixed order (spin 1, memory 1, spin 2, memory 2).
pub fn full_roster() -> [Subsystem; 4] {
    [Subsystem::S1, Subsystem::F1, Subsystem::S2, Subsystem::F2]
}

fn lab_term(lab: Lab, sys: Symbol, rec: Symbol, amp: FieldElement) -> Result<Ket, Error> {
    let mut ket = Ket::zero(&lab.roster())?;
    ket.add_term(&[sys, rec], amp)?;
    Ok(ket)
}

/// The post-measurement record state of one lab: phi goes with record xi,
/// psi with record zeta.
pub fn record_state(lab: Lab, outcome: SystemOutcome) -> Ket {
    let (sys, rec) = match outcome {
        SystemOutcome::Phi => (Symbol::Phi, Symbol::Xi),
        SystemOutcome::Psi => (Symbol::Psi, Symbol::Zeta),
    };
    lab_term(lab, sys, rec, FieldElement::one()).expect("valid lab labels")
}

/// Rank-one projector onto one lab's record state.
pub fn record_projector(lab: Lab, outcome: SystemOutcome) -> Projector {
    Projector::new(vec![record_state(lab, outcome)]).expect("record state is normalized")
}

/// The global state after both friends have measured and recorded:
/// sqrt(1/3) (phi xi phi xi + psi zeta phi xi + psi zeta psi zeta).
pub fn build_global_state() -> Ket {
    let third_sqrt3 = FieldElement::sqrt3().scaled(&ratio(1, 3));
    let mut state = Ket::zero(&full_roster()).expect("distinct roster");
    for key in [
        [Symbol::Phi, Symbol::Xi, Symbol::Phi, Symbol::Xi],
        [Symbol::Psi, Symbol::Zeta, Symbol::Phi, Symbol::Xi],
        [Symbol::Psi, Symbol::Zeta, Symbol::Psi, Symbol::Zeta],
    ] {
        state.add_term(&key, third_sqrt3.clone()).expect("valid keys");
    }
    debug_assert!(state.is_normalized());
    state
}

/// The orthonormal basis in which an outside observer measures a whole lab.
/// Index 1 is the "flip" vector chi; hitting it is the `nonnull` outcome.
pub fn w_basis(lab: Lab) -> [Ket; 4] {
    let half_sqrt2 = FieldElement::sqrt2().scaled(&ratio(1, 2));
    let neg = -&half_sqrt2;
    let combine = |s1, r1, s2, r2, second_amp: &FieldElement| {
        lab_term(lab, s1, r1, half_sqrt2.clone())
            .and_then(|k| Ok(k.try_add(&lab_term(lab, s2, r2, second_amp.clone())?)?))
            .expect("valid lab labels")
    };
    [
        combine(Symbol::Phi, Symbol::Xi, Symbol::Psi, Symbol::Zeta, &half_sqrt2),
        combine(Symbol::Phi, Symbol::Xi, Symbol::Psi, Symbol::Zeta, &neg),
        combine(Symbol::Psi, Symbol::Xi, Symbol::Phi, Symbol::Zeta, &half_sqrt2),
        combine(Symbol::Psi, Symbol::Xi, Symbol::Phi, Symbol::Zeta, &neg),
    ]
}

/// The flip vector chi = (phi xi - psi zeta)/sqrt2 of one lab.
pub fn chi(lab: Lab) -> Ket {
    let [_, chi, _, _] = w_basis(lab);
    chi
}

/// Projector onto the flip outcome (`nonnull`).
pub fn p_chi(lab: Lab) -> Projector {
    Projector::new(vec![chi(lab)]).expect("chi is normalized")
}

/// Projector onto the three non-flip outcomes (`null`), the orthogonal
/// complement of [`p_chi`] within the lab.
pub fn p_chi_complement(lab: Lab) -> Projector {
    let [a, _, c, d] = w_basis(lab);
    Projector::new(vec![a, c, d]).expect("w basis is orthonormal")
}

/// The product (record-reading) basis of one lab, the context in which the
/// friends' own records make sense.
pub fn product_basis(lab: Lab) -> [Ket; 4] {
    let one = FieldElement::one;
    [
        lab_term(lab, Symbol::Phi, Symbol::Xi, one()).expect("valid"),
        lab_term(lab, Symbol::Phi, Symbol::Zeta, one()).expect("valid"),
        lab_term(lab, Symbol::Psi, Symbol::Xi, one()).expect("valid"),
        lab_term(lab, Symbol::Psi, Symbol::Zeta, one()).expect("valid"),
    ]
}

//! Orthogonal projectors given by an orthonormal span, acting on any state
//! whose roster contains the span's roster (the identity is implied on the
//! remaining subsystems).

use std::collections::BTreeMap;

use crate::ket::roster_string;
use crate::{Error, FieldElement, Ket, Subsystem, Symbol};

/// A projector P = sum_i |e_i><e_i| for an orthonormal family {e_i}.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct Projector {
    roster: Vec<Subsystem>,
    span: Vec<Ket>,
}

impl Projector {
    /// Builds a projector from its span, checking exact pairwise
    /// orthonormality on a shared roster.
    pub fn new(span: Vec<Ket>) -> Result<Self, Error> {
        let first = span.first().ok_or(Error::EmptySpan)?;
        let roster = first.roster().to_vec();
        for ket in &span {
            if ket.roster() != roster {
                return Err(Error::RosterMismatch {
                    left: roster_string(&roster),
                    right: roster_string(ket.roster()),
                });
            }
        }
        for (i, a) in span.iter().enumerate() {
            for (j, b) in span.iter().enumerate() {
                let prod = a.inner(b)?;
                let ok = if i == j { prod.is_one() } else { prod.is_zero() };
                if !ok {
                    return Err(Error::SpanNotOrthonormal);
                }
            }
        }
        Ok(Projector { roster, span })
    }

    pub fn rank(&self) -> usize {
        self.span.len()
    }

    pub fn roster(&self) -> &[Subsystem] {
        &self.roster
    }

    pub fn span(&self) -> &[Ket] {
        &self.span
    }

    /// Applies P (x) identity to `state`. The projector's roster must appear
    /// within the state's roster; grouping the state's terms by their
    /// amplitude pattern on the remaining slots reduces the application to
    /// independent small projections.
    pub fn project(&self, state: &Ket) -> Result<Ket, Error> {
        let positions: Vec<usize> = self
            .roster
            .iter()
            .map(|s| {
                state
                    .roster()
                    .iter()
                    .position(|t| t == s)
                    .ok_or(Error::NotSubRoster)
            })
            .collect::<Result<_, _>>()?;
        let residual: Vec<usize> = (0..state.roster().len())
            .filter(|i| !positions.contains(i))
            .collect();

        let mut groups: BTreeMap<Vec<Symbol>, Ket> = BTreeMap::new();
        for (key, amp) in state.terms() {
            let span_key: Vec<Symbol> = positions.iter().map(|&i| key[i]).collect();
            let residual_key: Vec<Symbol> = residual.iter().map(|&i| key[i]).collect();
            let partial = groups
                .entry(residual_key)
                .or_insert_with(|| Ket::zero(&self.roster).expect("span roster is valid"));
            partial.add_term(&span_key, amp.clone())?;
        }

        let mut out = Ket::zero(state.roster())?;
        for (residual_key, partial) in &groups {
            for basis_ket in &self.span {
                let coeff = basis_ket.inner(partial)?;
                if coeff.is_zero() {
                    continue;
                }
                for (span_key, amp) in basis_ket.terms() {
                    let mut full = vec![Symbol::Phi; state.roster().len()];
                    for (&pos, &sym) in positions.iter().zip(span_key) {
                        full[pos] = sym;
                    }
                    for (&pos, &sym) in residual.iter().zip(residual_key) {
                        full[pos] = sym;
                    }
                    out.add_term(&full, amp * &coeff)?;
                }
            }
        }
        Ok(out)
    }

    /// Born probability of this outcome in the given normalized state:
    /// <v, P v>, computed as the squared norm of the projection.
    pub fn born_probability(&self, state: &Ket) -> Result<FieldElement, Error> {
        if !state.is_normalized() {
            return Err(Error::Unnormalized);
        }
        Ok(self.project(state)?.norm_sq())
    }

    /// Exact commutation test against another projector on the same roster,
    /// by comparing both composition orders on every basis vector.
    pub fn commutes_with(&self, other: &Projector) -> Result<bool, Error> {
        if self.roster != other.roster {
            return Err(Error::RosterMismatch {
                left: roster_string(&self.roster),
                right: roster_string(&other.roster),
            });
        }
        for key in enumerate_keys(&self.roster) {
            let mut basis = Ket::zero(&self.roster)?;
            basis.add_term(&key, FieldElement::one())?;
            let ab = self.project(&other.project(&basis)?)?;
            let ba = other.project(&self.project(&basis)?)?;
            if ab != ba {
                return Ok(false);
            }
        }
        Ok(true)
    }
}

/// All basis keys of a roster, each slot running over its own alphabet.
fn enumerate_keys(roster: &[Subsystem]) -> Vec<Vec<Symbol>> {
    let mut keys = vec![Vec::new()];
    for slot in roster {
        let mut next = Vec::with_capacity(keys.len() * 2);
        for key in &keys {
            for sym in Symbol::alphabet(slot.kind()) {
                let mut k = key.clone();
                k.push(sym);
                next.push(k);
            }
        }
        keys = next;
    }
    keys
}

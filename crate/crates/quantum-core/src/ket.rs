//! Sparse state vectors over a roster of named two-level subsystems.
//!
//! A roster lists which subsystems a vector lives on, in a fixed order; each
//! amplitude is indexed by one basis symbol per subsystem. S-type subsystems
//! (the measured spins) carry the symbols `phi`/`psi`, F-type subsystems (the
//! friends' memory registers) carry `xi`/`zeta`, and mixing them up is a
//! construction error, not a silent relabeling.

use std::collections::BTreeMap;
use std::fmt;

use crate::{Error, FieldElement};

/// The four subsystems of the two-lab experiment: spin and memory of lab 1,
/// spin and memory of lab 2.
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub enum Subsystem {
    S1,
    F1,
    S2,
    F2,
}

impl Subsystem {
    pub fn kind(self) -> SymbolKind {
        match self {
            Subsystem::S1 | Subsystem::S2 => SymbolKind::System,
            Subsystem::F1 | Subsystem::F2 => SymbolKind::Record,
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            Subsystem::S1 => "S1",
            Subsystem::F1 => "F1",
            Subsystem::S2 => "S2",
            Subsystem::F2 => "F2",
        }
    }
}

impl fmt::Display for Subsystem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// Which alphabet a subsystem's basis uses.
#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug)]
pub enum SymbolKind {
    /// Spin states phi / psi.
    System,
    /// Memory-record states xi / zeta.
    Record,
}

/// A single-subsystem basis symbol.
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub enum Symbol {
    Phi,
    Psi,
    Xi,
    Zeta,
}

impl Symbol {
    pub fn kind(self) -> SymbolKind {
        match self {
            Symbol::Phi | Symbol::Psi => SymbolKind::System,
            Symbol::Xi | Symbol::Zeta => SymbolKind::Record,
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            Symbol::Phi => "phi",
            Symbol::Psi => "psi",
            Symbol::Xi => "xi",
            Symbol::Zeta => "zeta",
        }
    }

    /// Both symbols of one alphabet, in canonical order.
    pub fn alphabet(kind: SymbolKind) -> [Symbol; 2] {
        match kind {
            SymbolKind::System => [Symbol::Phi, Symbol::Psi],
            SymbolKind::Record => [Symbol::Xi, Symbol::Zeta],
        }
    }
}

impl fmt::Display for Symbol {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// A validated (subsystem, symbol) pair.
#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug)]
pub struct BasisLabel {
    pub subsystem: Subsystem,
    pub symbol: Symbol,
}

impl BasisLabel {
    pub fn new(subsystem: Subsystem, symbol: Symbol) -> Result<Self, Error> {
        if subsystem.kind() != symbol.kind() {
            return Err(Error::InvalidLabel {
                symbol: symbol.name(),
                subsystem: subsystem.name(),
            });
        }
        Ok(BasisLabel { subsystem, symbol })
    }
}

/// A sparse vector over the tensor basis of its roster. Zero amplitudes are
/// never stored, so structural equality is equality of vectors.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct Ket {
    roster: Vec<Subsystem>,
    amps: BTreeMap<Vec<Symbol>, FieldElement>,
}

impl Ket {
    /// The zero vector on a roster of distinct subsystems.
    pub fn zero(roster: &[Subsystem]) -> Result<Self, Error> {
        for (i, s) in roster.iter().enumerate() {
            if roster[..i].contains(s) {
                return Err(Error::DuplicateSubsystem(s.name()));
            }
        }
        Ok(Ket {
            roster: roster.to_vec(),
            amps: BTreeMap::new(),
        })
    }

    /// A basis vector: one validated label per roster slot, amplitude one.
    pub fn basis(labels: &[BasisLabel]) -> Result<Self, Error> {
        let roster: Vec<Subsystem> = labels.iter().map(|l| l.subsystem).collect();
        let mut ket = Ket::zero(&roster)?;
        let key: Vec<Symbol> = labels.iter().map(|l| l.symbol).collect();
        ket.add_term(&key, FieldElement::one())?;
        Ok(ket)
    }

    pub fn roster(&self) -> &[Subsystem] {
        &self.roster
    }

    /// Adds `amp` to the coefficient of the given basis key, validating its
    /// length and per-slot alphabet, and pruning the entry if it cancels.
    pub fn add_term(&mut self, key: &[Symbol], amp: FieldElement) -> Result<(), Error> {
        if key.len() != self.roster.len() {
            return Err(Error::KeyLength {
                got: key.len(),
                want: self.roster.len(),
            });
        }
        for (slot, symbol) in self.roster.iter().zip(key) {
            if slot.kind() != symbol.kind() {
                return Err(Error::InvalidLabel {
                    symbol: symbol.name(),
                    subsystem: slot.name(),
                });
            }
        }
        if amp.is_zero() {
            return Ok(());
        }
        let entry = self.amps.entry(key.to_vec()).or_insert_with(FieldElement::zero);
        *entry = &*entry + &amp;
        if entry.is_zero() {
            self.amps.remove(key);
        }
        Ok(())
    }

    /// The coefficient of a basis key (zero when absent).
    pub fn amplitude(&self, key: &[Symbol]) -> FieldElement {
        self.amps.get(key).cloned().unwrap_or_else(FieldElement::zero)
    }

    pub fn terms(&self) -> impl Iterator<Item = (&[Symbol], &FieldElement)> {
        self.amps.iter().map(|(k, v)| (k.as_slice(), v))
    }

    pub fn is_zero_vector(&self) -> bool {
        self.amps.is_empty()
    }

    pub fn scaled(&self, k: &FieldElement) -> Ket {
        let mut out = Ket {
            roster: self.roster.clone(),
            amps: BTreeMap::new(),
        };
        if k.is_zero() {
            return out;
        }
        for (key, amp) in &self.amps {
            out.amps.insert(key.clone(), amp * k);
        }
        out
    }

    pub fn try_add(&self, rhs: &Ket) -> Result<Ket, Error> {
        self.check_same_roster(rhs)?;
        let mut out = self.clone();
        for (key, amp) in &rhs.amps {
            out.add_term(key, amp.clone())?;
        }
        Ok(out)
    }

    pub fn try_sub(&self, rhs: &Ket) -> Result<Ket, Error> {
        self.try_add(&rhs.scaled(&-FieldElement::one()))
    }

    /// Tensor product; rosters must be disjoint and are concatenated.
    pub fn tensor(&self, rhs: &Ket) -> Result<Ket, Error> {
        for s in &self.roster {
            if rhs.roster.contains(s) {
                return Err(Error::OverlappingRosters { shared: s.name() });
            }
        }
        let mut roster = self.roster.clone();
        roster.extend_from_slice(&rhs.roster);
        let mut out = Ket {
            roster,
            amps: BTreeMap::new(),
        };
        for (k1, a1) in &self.amps {
            for (k2, a2) in &rhs.amps {
                let mut key = k1.clone();
                key.extend_from_slice(k2);
                out.amps.insert(key, a1 * a2);
            }
        }
        Ok(out)
    }

    /// Inner product. The field is real, so no conjugation is involved; the
    /// rosters must agree exactly (same subsystems, same order).
    pub fn inner(&self, rhs: &Ket) -> Result<FieldElement, Error> {
        self.check_same_roster(rhs)?;
        let mut acc = FieldElement::zero();
        for (key, amp) in &self.amps {
            if let Some(other) = rhs.amps.get(key) {
                acc = &acc + &(amp * other);
            }
        }
        Ok(acc)
    }

    pub fn norm_sq(&self) -> FieldElement {
        self.inner(self).expect("roster always matches itself")
    }

    pub fn is_normalized(&self) -> bool {
        self.norm_sq().is_one()
    }

    fn check_same_roster(&self, rhs: &Ket) -> Result<(), Error> {
        if self.roster != rhs.roster {
            return Err(Error::RosterMismatch {
                left: roster_string(&self.roster),
                right: roster_string(&rhs.roster),
            });
        }
        Ok(())
    }
}

pub(crate) fn roster_string(roster: &[Subsystem]) -> String {
    let names: Vec<&str> = roster.iter().map(|s| s.name()).collect();
    names.join(",")
}

impl fmt::Display for Ket {
    /// One line per stored term, in key order: `phi,xi: 1/2 + 0*sqrt2 + ...`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.amps.is_empty() {
            return write!(f, "0 (on {})", roster_string(&self.roster));
        }
        let mut first = true;
        for (key, amp) in &self.amps {
            if !first {
                writeln!(f)?;
            }
            first = false;
            let labels: Vec<&str> = key.iter().map(|s| s.name()).collect();
            write!(f, "{}: {}", labels.join(","), amp)?;
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::ratio;

    fn label(sub: Subsystem, sym: Symbol) -> BasisLabel {
        BasisLabel::new(sub, sym).unwrap()
    }

    /// (phi xi - psi zeta)/sqrt2 on one lab's roster.
    fn chi(system: Subsystem, record: Subsystem) -> Ket {
        let half_sqrt2 = FieldElement::sqrt2().scaled(&ratio(1, 2));
        let mut ket = Ket::zero(&[system, record]).unwrap();
        ket.add_term(&[Symbol::Phi, Symbol::Xi], half_sqrt2.clone()).unwrap();
        ket.add_term(&[Symbol::Psi, Symbol::Zeta], -half_sqrt2).unwrap();
        ket
    }

    #[test]
    fn labels_validate_their_alphabet() {
        assert!(BasisLabel::new(Subsystem::S1, Symbol::Phi).is_ok());
        let err = BasisLabel::new(Subsystem::S1, Symbol::Xi).unwrap_err();
        assert_eq!(err.to_string(), "label xi is not valid for subsystem S1");
        assert!(BasisLabel::new(Subsystem::F2, Symbol::Zeta).is_ok());
        assert!(BasisLabel::new(Subsystem::F2, Symbol::Psi).is_err());
    }

    #[test]
    fn zero_rejects_duplicate_subsystems() {
        let err = Ket::zero(&[Subsystem::S1, Subsystem::S1]).unwrap_err();
        assert_eq!(err.to_string(), "duplicate subsystem S1 in roster");
    }

    #[test]
    fn cancelling_terms_are_pruned() {
        let mut ket = Ket::zero(&[Subsystem::S1]).unwrap();
        ket.add_term(&[Symbol::Phi], FieldElement::one()).unwrap();
        ket.add_term(&[Symbol::Phi], -FieldElement::one()).unwrap();
        assert!(ket.is_zero_vector());
        assert_eq!(ket, Ket::zero(&[Subsystem::S1]).unwrap());
    }

    #[test]
    fn tensor_of_the_two_lab_flip_states_has_four_half_amplitudes() {
        let c1 = chi(Subsystem::S1, Subsystem::F1);
        let c2 = chi(Subsystem::S2, Subsystem::F2);
        let both = c1.tensor(&c2).unwrap();
        let half = FieldElement::from_rational(ratio(1, 2));
        assert_eq!(
            both.amplitude(&[Symbol::Phi, Symbol::Xi, Symbol::Phi, Symbol::Xi]),
            half
        );
        assert_eq!(
            both.amplitude(&[Symbol::Phi, Symbol::Xi, Symbol::Psi, Symbol::Zeta]),
            -&half
        );
        assert_eq!(
            both.amplitude(&[Symbol::Psi, Symbol::Zeta, Symbol::Phi, Symbol::Xi]),
            -&half
        );
        assert_eq!(
            both.amplitude(&[Symbol::Psi, Symbol::Zeta, Symbol::Psi, Symbol::Zeta]),
            half
        );
        assert!(both.is_normalized());
    }

    #[test]
    fn tensor_rejects_overlapping_rosters() {
        let a = Ket::basis(&[label(Subsystem::S1, Symbol::Phi)]).unwrap();
        let b = Ket::basis(&[label(Subsystem::S1, Symbol::Psi)]).unwrap();
        let err = a.tensor(&b).unwrap_err();
        assert_eq!(err.to_string(), "overlapping rosters: S1 appears on both sides");
    }

    #[test]
    fn inner_requires_matching_rosters() {
        let a = Ket::basis(&[label(Subsystem::S1, Symbol::Phi)]).unwrap();
        let b = Ket::basis(&[label(Subsystem::S2, Symbol::Phi)]).unwrap();
        let err = a.inner(&b).unwrap_err();
        assert_eq!(err.to_string(), "roster mismatch: S1 vs S2");
    }

    #[test]
    fn display_lists_terms_in_key_order() {
        let half_sqrt2 = FieldElement::sqrt2().scaled(&ratio(1, 2));
        let c = chi(Subsystem::S1, Subsystem::F1);
        assert_eq!(
            c.to_string(),
            format!(
                "phi,xi: {}\npsi,zeta: {}",
                half_sqrt2,
                -&half_sqrt2
            )
        );
    }
}

//! Property-based checks of the exact-algebra layer: field axioms, sign
//! consistency, inner-product geometry, and projector laws.

use std::cmp::Ordering;

use num_rational::BigRational;
use proptest::prelude::*;
use quantum_core::{ratio, FieldElement, Ket, Projector, Subsystem, Symbol};

fn rational() -> impl Strategy<Value = BigRational> {
    (-24i64..=24, 1i64..=12).prop_map(|(n, d)| ratio(n, d))
}

fn field_element() -> impl Strategy<Value = FieldElement> {
    (rational(), rational(), rational(), rational())
        .prop_map(|(a, b, c, d)| FieldElement::new(a, b, c, d))
}

fn lab_roster() -> [Subsystem; 2] {
    [Subsystem::S1, Subsystem::F1]
}

fn lab_keys() -> [[Symbol; 2]; 4] {
    [
        [Symbol::Phi, Symbol::Xi],
        [Symbol::Phi, Symbol::Zeta],
        [Symbol::Psi, Symbol::Xi],
        [Symbol::Psi, Symbol::Zeta],
    ]
}

fn lab_ket() -> impl Strategy<Value = Ket> {
    proptest::collection::vec(field_element(), 4).prop_map(|amps| {
        let mut ket = Ket::zero(&lab_roster()).unwrap();
        for (key, amp) in lab_keys().iter().zip(amps) {
            ket.add_term(key, amp).unwrap();
        }
        ket
    })
}

/// The flip-basis of one lab; orthonormal and complete in its 4-dim space.
fn flip_basis() -> [Ket; 4] {
    let s = FieldElement::sqrt2().scaled(&ratio(1, 2));
    let term = |sys, rec, coeff: &FieldElement| {
        let mut k = Ket::zero(&lab_roster()).unwrap();
        k.add_term(&[sys, rec], coeff.clone()).unwrap();
        k
    };
    let combine = |s1, r1, s2, r2, sign: i64| {
        term(s1, r1, &s)
            .try_add(&term(s2, r2, &s.scaled(&ratio(sign, 1))))
            .unwrap()
    };
    [
        combine(Symbol::Phi, Symbol::Xi, Symbol::Psi, Symbol::Zeta, 1),
        combine(Symbol::Phi, Symbol::Xi, Symbol::Psi, Symbol::Zeta, -1),
        combine(Symbol::Psi, Symbol::Xi, Symbol::Phi, Symbol::Zeta, 1),
        combine(Symbol::Psi, Symbol::Xi, Symbol::Phi, Symbol::Zeta, -1),
    ]
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(1000))]

    #[test]
    fn field_ring_axioms(x in field_element(), y in field_element(), z in field_element()) {
        prop_assert_eq!(&x + &y, &y + &x);
        prop_assert_eq!(&x * &y, &y * &x);
        prop_assert_eq!(&(&x + &y) + &z, &x + &(&y + &z));
        prop_assert_eq!(&(&x * &y) * &z, &x * &(&y * &z));
        prop_assert_eq!(&x * &(&y + &z), &(&x * &y) + &(&x * &z));
        prop_assert_eq!(&x + &FieldElement::zero(), x.clone());
        prop_assert_eq!(&x * &FieldElement::one(), x.clone());
        prop_assert_eq!(&x - &x, FieldElement::zero());
    }

    #[test]
    fn field_inverses_cancel(x in field_element()) {
        if x.is_zero() {
            prop_assert!(x.inverse().is_err());
        } else {
            let inv = x.inverse().unwrap();
            prop_assert!((&x * &inv).is_one());
        }
    }

    #[test]
    fn sign_is_multiplicative(x in field_element(), y in field_element()) {
        let prod_sign = (&x * &y).sign();
        let expected = match (x.sign(), y.sign()) {
            (Ordering::Equal, _) | (_, Ordering::Equal) => Ordering::Equal,
            (a, b) if a == b => Ordering::Greater,
            _ => Ordering::Less,
        };
        prop_assert_eq!(prod_sign, expected);
    }

    #[test]
    fn squares_are_nonnegative(x in field_element()) {
        prop_assert!((&x * &x).is_nonnegative());
    }

    #[test]
    fn cauchy_schwarz_holds_exactly(v in lab_ket(), w in lab_ket()) {
        let vw = v.inner(&w).unwrap();
        let lhs = &vw * &vw;
        let rhs = &v.norm_sq() * &w.norm_sq();
        prop_assert_ne!((&lhs - &rhs).sign(), Ordering::Greater);
    }

    #[test]
    fn projection_is_idempotent_and_contracting(v in lab_ket(), pick in 0usize..4) {
        let basis = flip_basis();
        let p = Projector::new(vec![basis[pick].clone()]).unwrap();
        let once = p.project(&v).unwrap();
        let twice = p.project(&once).unwrap();
        prop_assert_eq!(&once, &twice);
        prop_assert_ne!(
            (&once.norm_sq() - &v.norm_sq()).sign(),
            Ordering::Greater
        );
    }

    #[test]
    fn orthonormal_basis_is_complete(v in lab_ket()) {
        let full = Projector::new(flip_basis().to_vec()).unwrap();
        prop_assert_eq!(full.project(&v).unwrap(), v);
    }

    #[test]
    fn complementary_projectors_decompose_every_vector(v in lab_ket()) {
        let basis = flip_basis();
        let p = Projector::new(vec![basis[1].clone()]).unwrap();
        let q = Projector::new(vec![basis[0].clone(), basis[2].clone(), basis[3].clone()])
            .unwrap();
        let recombined = p.project(&v).unwrap().try_add(&q.project(&v).unwrap()).unwrap();
        prop_assert_eq!(recombined, v.clone());
        // Orthogonal parts: Pythagoras holds exactly.
        let parts = &p.project(&v).unwrap().norm_sq() + &q.project(&v).unwrap().norm_sq();
        prop_assert_eq!(parts, v.norm_sq());
    }
}

//! Exact arithmetic in the real number field Q(sqrt2, sqrt3).
//!
//! Every element is stored as four rational coordinates on the basis
//! {1, sqrt2, sqrt3, sqrt6}; sums, products and inverses stay in the field,
//! so no rounding ever occurs. Sign queries are decided by refining rational
//! interval enclosures of the three surds until the enclosure of the value
//! excludes zero (zero itself is recognised syntactically, since the basis is
//! linearly independent over the rationals).

use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::Error;

/// A rational built from machine integers; convenience for constants.
pub fn ratio(numer: i64, denom: i64) -> BigRational {
    BigRational::new(BigInt::from(numer), BigInt::from(denom))
}

/// An element a + b*sqrt2 + c*sqrt3 + d*sqrt6 of Q(sqrt2, sqrt3).
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct FieldElement {
    a: BigRational,
    b: BigRational,
    c: BigRational,
    d: BigRational,
}

impl FieldElement {
    pub fn new(a: BigRational, b: BigRational, c: BigRational, d: BigRational) -> Self {
        FieldElement { a, b, c, d }
    }

    pub fn zero() -> Self {
        Self::from_rational(BigRational::zero())
    }

    pub fn one() -> Self {
        Self::from_rational(BigRational::one())
    }

    pub fn from_rational(a: BigRational) -> Self {
        FieldElement {
            a,
            b: BigRational::zero(),
            c: BigRational::zero(),
            d: BigRational::zero(),
        }
    }

    pub fn from_integer(n: i64) -> Self {
        Self::from_rational(ratio(n, 1))
    }

    pub fn sqrt2() -> Self {
        FieldElement::new(ratio(0, 1), ratio(1, 1), ratio(0, 1), ratio(0, 1))
    }

    pub fn sqrt3() -> Self {
        FieldElement::new(ratio(0, 1), ratio(0, 1), ratio(1, 1), ratio(0, 1))
    }

    pub fn sqrt6() -> Self {
        FieldElement::new(ratio(0, 1), ratio(0, 1), ratio(0, 1), ratio(1, 1))
    }

    /// Coordinates on the basis {1, sqrt2, sqrt3, sqrt6}.
    pub fn coords(&self) -> (&BigRational, &BigRational, &BigRational, &BigRational) {
        (&self.a, &self.b, &self.c, &self.d)
    }

    pub fn is_zero(&self) -> bool {
        self.a.is_zero() && self.b.is_zero() && self.c.is_zero() && self.d.is_zero()
    }

    pub fn is_one(&self) -> bool {
        self.a.is_one() && self.b.is_zero() && self.c.is_zero() && self.d.is_zero()
    }

    pub fn is_rational(&self) -> bool {
        self.b.is_zero() && self.c.is_zero() && self.d.is_zero()
    }

    /// The value as a rational, when it lies in Q.
    pub fn to_rational(&self) -> Option<BigRational> {
        if self.is_rational() {
            Some(self.a.clone())
        } else {
            None
        }
    }

    pub fn scaled(&self, k: &BigRational) -> Self {
        FieldElement {
            a: &self.a * k,
            b: &self.b * k,
            c: &self.c * k,
            d: &self.d * k,
        }
    }

    /// Image under the automorphism sending sqrt2 to -sqrt2.
    fn conj2(&self) -> Self {
        FieldElement {
            a: self.a.clone(),
            b: -self.b.clone(),
            c: self.c.clone(),
            d: -self.d.clone(),
        }
    }

    /// Image under the automorphism sending sqrt3 to -sqrt3.
    fn conj3(&self) -> Self {
        FieldElement {
            a: self.a.clone(),
            b: self.b.clone(),
            c: -self.c.clone(),
            d: -self.d.clone(),
        }
    }

    /// Multiplicative inverse, via the product of the element's three
    /// nontrivial Galois images: x * conj2(x) * conj3(x) * conj2(conj3(x))
    /// is the rational field norm, so dividing the conjugate product by it
    /// inverts x without ever leaving the field.
    pub fn inverse(&self) -> Result<FieldElement, Error> {
        if self.is_zero() {
            return Err(Error::DivisionByZero);
        }
        let y = &(&self.conj2() * &self.conj3()) * &self.conj2().conj3();
        let norm = self * &y;
        debug_assert!(norm.is_rational(), "field norm must be rational");
        debug_assert!(!norm.a.is_zero(), "field norm of a nonzero element is nonzero");
        Ok(y.scaled(&norm.a.recip()))
    }

    pub fn checked_div(&self, rhs: &FieldElement) -> Result<FieldElement, Error> {
        Ok(self * &rhs.inverse()?)
    }

    /// Sign of the value as a real number.
    pub fn sign(&self) -> Ordering {
        if self.is_zero() {
            return Ordering::Equal;
        }
        // Enclose each surd in a rational interval and tighten by Newton's
        // method (from above; quadratic convergence) until the enclosure of
        // the whole value excludes zero. A nonzero element of the field is a
        // nonzero real, so this terminates.
        let mut enclosures = [
            Enclosure::new(2),
            Enclosure::new(3),
            Enclosure::new(6),
        ];
        for _ in 0..256 {
            let mut lo = self.a.clone();
            let mut hi = self.a.clone();
            for (coeff, enc) in [&self.b, &self.c, &self.d].into_iter().zip(&enclosures) {
                if coeff.is_positive() {
                    lo += coeff * &enc.lo;
                    hi += coeff * &enc.hi;
                } else if coeff.is_negative() {
                    lo += coeff * &enc.hi;
                    hi += coeff * &enc.lo;
                }
            }
            if lo.is_positive() {
                return Ordering::Greater;
            }
            if hi.is_negative() {
                return Ordering::Less;
            }
            for enc in &mut enclosures {
                enc.tighten();
            }
        }
        unreachable!("interval refinement failed to separate a nonzero value from zero")
    }

    pub fn is_nonnegative(&self) -> bool {
        self.sign() != Ordering::Less
    }

    /// Exact comparison of two field elements as real numbers.
    pub fn cmp_value(&self, other: &FieldElement) -> Ordering {
        (self - other).sign()
    }
}

/// A shrinking rational interval around sqrt(n).
struct Enclosure {
    n: BigRational,
    lo: BigRational,
    hi: BigRational,
}

impl Enclosure {
    fn new(n: i64) -> Self {
        let n = ratio(n, 1);
        // n/2 + 1 > sqrt(n) for the n we use; lo = n/hi < sqrt(n).
        let hi = &n / ratio(2, 1) + BigRational::one();
        let lo = &n / &hi;
        Enclosure { n, lo, hi }
    }

    fn tighten(&mut self) {
        self.hi = (&self.hi + &self.n / &self.hi) / ratio(2, 1);
        self.lo = &self.n / &self.hi;
    }
}

impl fmt::Display for FieldElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "{} + {}*sqrt2 + {}*sqrt3 + {}*sqrt6",
            self.a, self.b, self.c, self.d
        )
    }
}

impl fmt::Debug for FieldElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "FieldElement({})", self)
    }
}

impl Add for &FieldElement {
    type Output = FieldElement;

    fn add(self, rhs: &FieldElement) -> FieldElement {
        FieldElement {
            a: &self.a + &rhs.a,
            b: &self.b + &rhs.b,
            c: &self.c + &rhs.c,
            d: &self.d + &rhs.d,
        }
    }
}

impl Sub for &FieldElement {
    type Output = FieldElement;

    fn sub(self, rhs: &FieldElement) -> FieldElement {
        FieldElement {
            a: &self.a - &rhs.a,
            b: &self.b - &rhs.b,
            c: &self.c - &rhs.c,
            d: &self.d - &rhs.d,
        }
    }
}

impl Neg for &FieldElement {
    type Output = FieldElement;

    fn neg(self) -> FieldElement {
        FieldElement {
            a: -self.a.clone(),
            b: -self.b.clone(),
            c: -self.c.clone(),
            d: -self.d.clone(),
        }
    }
}

impl Mul for &FieldElement {
    type Output = FieldElement;

    /// Multiplication on the basis {1, sqrt2, sqrt3, sqrt6}, using
    /// sqrt2*sqrt3 = sqrt6, sqrt2*sqrt6 = 2*sqrt3, sqrt3*sqrt6 = 3*sqrt2.
    fn mul(self, rhs: &FieldElement) -> FieldElement {
        let (a1, b1, c1, d1) = (&self.a, &self.b, &self.c, &self.d);
        let (a2, b2, c2, d2) = (&rhs.a, &rhs.b, &rhs.c, &rhs.d);
        let two = ratio(2, 1);
        let three = ratio(3, 1);
        let six = ratio(6, 1);
        FieldElement {
            a: a1 * a2 + &two * (b1 * b2) + &three * (c1 * c2) + &six * (d1 * d2),
            b: a1 * b2 + b1 * a2 + &three * &(c1 * d2 + d1 * c2),
            c: a1 * c2 + c1 * a2 + &two * &(b1 * d2 + d1 * b2),
            d: a1 * d2 + d1 * a2 + b1 * c2 + c1 * b2,
        }
    }
}

macro_rules! forward_owned_binop {
    ($trait:ident, $method:ident) => {
        impl $trait for FieldElement {
            type Output = FieldElement;
            fn $method(self, rhs: FieldElement) -> FieldElement {
                (&self).$method(&rhs)
            }
        }
        impl $trait<&FieldElement> for FieldElement {
            type Output = FieldElement;
            fn $method(self, rhs: &FieldElement) -> FieldElement {
                (&self).$method(rhs)
            }
        }
        impl $trait<FieldElement> for &FieldElement {
            type Output = FieldElement;
            fn $method(self, rhs: FieldElement) -> FieldElement {
                self.$method(&rhs)
            }
        }
    };
}

forward_owned_binop!(Add, add);
forward_owned_binop!(Sub, sub);
forward_owned_binop!(Mul, mul);

impl Neg for FieldElement {
    type Output = FieldElement;

    fn neg(self) -> FieldElement {
        -&self
    }
}

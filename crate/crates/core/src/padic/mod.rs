//! Exact arithmetic modulo `p^E`: the computational substrate for everything
//! else in this crate. No floating point anywhere.

mod matrix;

pub use matrix::{
    howell_form, howell_with_transform, preimage_lattice, row_kernel, smith_form,
    span_index, span_index_log, span_intersection, span_membership, HowellForm, Pivot,
    ResidueMatrix, SmithForm,
};

use crate::error::{Error, Result};
use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use std::fmt;

/// Exact rational scalar with arbitrary-precision numerator and denominator.
/// Values fed into [`Modulus::reduce_rational`] must have denominator coprime
/// to `p`; this is exactly the class-smaller-than-`p` condition for the BCH
/// coefficients.
pub type PRational = BigRational;

/// A prime power modulus `p^E`.
///
/// `p` is checked prime by trial division at construction, `E >= 1`. The
/// value `p^E` is cached since every reduction needs it.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Modulus {
    p: u64,
    e: u32,
    pe: BigUint,
}

impl fmt::Debug for Modulus {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Z/{}^{}", self.p, self.e)
    }
}

fn is_prime_u64(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    if n % 2 == 0 {
        return n == 2;
    }
    let mut d = 3u64;
    while d.checked_mul(d).map_or(false, |sq| sq <= n) {
        if n % d == 0 {
            return false;
        }
        d += 2;
    }
    true
}

impl Modulus {
    pub fn new(p: u64, e: u32) -> Result<Self> {
        if !is_prime_u64(p) {
            return Err(Error::Schema(format!("p = {p} is not prime")));
        }
        if e == 0 {
            return Err(Error::Schema("exponent E must be at least 1".into()));
        }
        let pe = BigUint::from(p).pow(e);
        Ok(Modulus { p, e, pe })
    }

    pub fn p(&self) -> u64 {
        self.p
    }

    pub fn exponent(&self) -> u32 {
        self.e
    }

    /// The cached working modulus `p^E`.
    pub fn value(&self) -> &BigUint {
        &self.pe
    }

    pub fn p_big(&self) -> BigUint {
        BigUint::from(self.p)
    }

    /// `p^k` for `k <= E` (panics above; nothing in the crate needs more).
    pub fn p_pow(&self, k: u32) -> BigUint {
        assert!(k <= self.e, "p^{k} exceeds the working modulus");
        BigUint::from(self.p).pow(k)
    }

    /// Same prime, working exponent raised to `e`.
    pub fn with_exponent(&self, e: u32) -> Modulus {
        Modulus {
            p: self.p,
            e,
            pe: BigUint::from(self.p).pow(e),
        }
    }

    pub fn reduce(&self, n: &BigUint) -> BigUint {
        n % &self.pe
    }

    pub fn reduce_int(&self, n: &BigInt) -> BigUint {
        let m = BigInt::from(self.pe.clone());
        let r = n.mod_floor(&m);
        r.to_biguint().expect("mod_floor of positive modulus")
    }

    pub fn add(&self, a: &BigUint, b: &BigUint) -> BigUint {
        (a + b) % &self.pe
    }

    pub fn sub(&self, a: &BigUint, b: &BigUint) -> BigUint {
        ((a + &self.pe) - b) % &self.pe
    }

    pub fn neg(&self, a: &BigUint) -> BigUint {
        if a.is_zero() {
            BigUint::zero()
        } else {
            &self.pe - a
        }
    }

    pub fn mul(&self, a: &BigUint, b: &BigUint) -> BigUint {
        (a * b) % &self.pe
    }

    /// p-adic valuation of a residue, capped at `E`; `None` encodes the
    /// infinity marker for the zero residue.
    pub fn valuation(&self, n: &BigUint) -> Option<u32> {
        let n = self.reduce(n);
        if n.is_zero() {
            return None;
        }
        let p = self.p_big();
        let mut v = 0u32;
        let mut n = n;
        while (&n % &p).is_zero() {
            n /= &p;
            v += 1;
        }
        Some(v)
    }

    /// Inverse of a unit mod `p^E` via the extended Euclidean algorithm.
    pub fn inverse(&self, a: &BigUint) -> Result<BigUint> {
        let a = self.reduce(a);
        let e = BigInt::from(a.clone()).extended_gcd(&BigInt::from(self.pe.clone()));
        if !e.gcd.is_one() {
            return Err(Error::DenominatorNotInvertible {
                denominator: a.to_string(),
                p: self.p,
                e: self.e,
            });
        }
        Ok(self.reduce_int(&e.x))
    }

    /// Evaluate a p-integral rational in `Z/p^E`: numerator times the inverse
    /// of the denominator. Signals `DenominatorNotInvertible` when `p`
    /// divides the denominator, which is how class >= p misuse surfaces.
    pub fn reduce_rational(&self, q: &PRational) -> Result<Residue> {
        let denom = q.denom();
        let num = q.numer();
        let denom_u = denom
            .to_biguint()
            .expect("BigRational keeps the denominator positive");
        let inv = self.inverse(&denom_u).map_err(|_| Error::DenominatorNotInvertible {
            denominator: denom.to_string(),
            p: self.p,
            e: self.e,
        })?;
        let num_red = self.reduce_int(num);
        Ok(Residue::new(self.mul(&num_red, &inv), self.clone()))
    }
}

/// Largest `k` with `p^k | n`, capped at `E`; `None` is the infinity marker
/// (`n` congruent to zero mod `p^E`, in particular `n = 0`).
pub fn valuation(n: &BigInt, m: &Modulus) -> Option<u32> {
    m.valuation(&m.reduce_int(n))
}

/// An element of `Z/p^E`, kept in canonical range `[0, p^E)`.
#[derive(Clone, PartialEq, Eq)]
pub struct Residue {
    value: BigUint,
    modulus: Modulus,
}

impl fmt::Debug for Residue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} (mod {}^{})", self.value, self.modulus.p, self.modulus.e)
    }
}

impl Residue {
    pub fn new(value: BigUint, modulus: Modulus) -> Self {
        let value = modulus.reduce(&value);
        Residue { value, modulus }
    }

    pub fn value(&self) -> &BigUint {
        &self.value
    }

    pub fn modulus(&self) -> &Modulus {
        &self.modulus
    }
}

/// `q` as a `PRational` from integer parts, reduced.
pub fn rational(numer: i64, denom: i64) -> PRational {
    BigRational::new(BigInt::from(numer), BigInt::from(denom))
}

/// p-adic valuation of a nonzero rational (negative for genuine denominators).
pub fn rational_valuation(q: &PRational, p: u64) -> Option<i64> {
    if q.is_zero() {
        return None;
    }
    let p = BigInt::from(p);
    let mut v = 0i64;
    let mut n = q.numer().abs();
    while (&n % &p).is_zero() {
        n /= &p;
        v += 1;
    }
    let mut d = q.denom().clone();
    while (&d % &p).is_zero() {
        d /= &p;
        v -= 1;
    }
    Some(v)
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_traits::ToPrimitive;
    use proptest::prelude::*;

    fn m(p: u64, e: u32) -> Modulus {
        Modulus::new(p, e).unwrap()
    }

    #[test]
    fn primality_is_checked() {
        assert!(Modulus::new(4, 1).is_err());
        assert!(Modulus::new(1, 1).is_err());
        assert!(Modulus::new(0, 2).is_err());
        assert!(Modulus::new(2, 1).is_ok());
        assert!(Modulus::new(97, 3).is_ok());
        assert!(Modulus::new(5, 0).is_err());
    }

    #[test]
    fn valuation_examples() {
        let m53 = m(5, 3);
        assert_eq!(valuation(&BigInt::from(0), &m53), None);
        assert_eq!(valuation(&BigInt::from(50), &m53), Some(2));
        assert_eq!(valuation(&BigInt::from(12), &m53), Some(0));
        // capped at E: 5^3 | 125, so 125 is zero mod 5^3
        assert_eq!(valuation(&BigInt::from(125), &m53), None);
        assert_eq!(valuation(&BigInt::from(-25), &m53), Some(2));
    }

    #[test]
    fn reduce_rational_examples() {
        let m52 = m(5, 2);
        let r = m52.reduce_rational(&rational(1, 2)).unwrap();
        assert_eq!(r.value().to_u64(), Some(13));
        let r = m52.reduce_rational(&rational(3, 1)).unwrap();
        assert_eq!(r.value().to_u64(), Some(3));
        assert!(m52.reduce_rational(&rational(1, 5)).is_err());
    }

    proptest! {
        // reduce is multiplicative on p-integral rationals
        #[test]
        fn reduce_rational_is_multiplicative(a in -200i64..200, b in 1i64..60, c in -200i64..200, d in 1i64..60) {
            let m72 = m(7, 2);
            prop_assume!(b % 7 != 0 && d % 7 != 0);
            let q = rational(a, b);
            let r = rational(c, d);
            let lhs = m72.reduce_rational(&(q.clone() * r.clone())).unwrap();
            let rhs = m72.mul(
                m72.reduce_rational(&q).unwrap().value(),
                m72.reduce_rational(&r).unwrap().value(),
            );
            prop_assert_eq!(lhs.value(), &rhs);
        }

        #[test]
        fn inverse_is_inverse(a in 1u64..10_000) {
            let m73 = m(7, 3);
            prop_assume!(a % 7 != 0);
            let a = BigUint::from(a);
            let inv = m73.inverse(&a).unwrap();
            prop_assert!(m73.mul(&a, &inv).is_one());
        }
    }

    #[test]
    fn rational_valuation_signs() {
        assert_eq!(rational_valuation(&rational(50, 3), 5), Some(2));
        assert_eq!(rational_valuation(&rational(3, 25), 5), Some(-2));
        assert_eq!(rational_valuation(&rational(0, 1), 5), None);
    }
}

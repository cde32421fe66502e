//! Coefficient rings.
//!
//! [`Ring`] is the runtime tag carried by every complex. The algorithms are
//! written once against [`Scalars`], a Euclidean-ring interface, and the
//! [`with_scalars!`] macro dispatches from the tag to a concrete
//! implementation. Over a field every nonzero element is a unit, so the same
//! Hermite and Smith routines degenerate into Gaussian elimination.

use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use super::IntMatrix;
use crate::error::{Error, Result};

/// Coefficient ring of a complex.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Ring {
    Integers,
    Rationals,
    PrimeField(u64),
}

impl Ring {
    pub fn prime_field(p: u64) -> Result<Ring> {
        if is_prime(p) {
            Ok(Ring::PrimeField(p))
        } else {
            Err(Error::InvalidRing(format!("{p} is not prime")))
        }
    }

    pub fn validate(&self) -> Result<()> {
        match self {
            Ring::PrimeField(p) if !is_prime(*p) => {
                Err(Error::InvalidRing(format!("{p} is not prime")))
            }
            _ => Ok(()),
        }
    }

    pub fn is_field(&self) -> bool {
        !matches!(self, Ring::Integers)
    }

    /// Canonical representative of an integer in this ring.
    pub fn reduce_int(&self, v: &BigInt) -> BigInt {
        match self {
            Ring::PrimeField(p) => v.mod_floor(&BigInt::from(*p)),
            _ => v.clone(),
        }
    }

    /// Whether an integer is zero once read in this ring.
    pub fn int_is_zero(&self, v: &BigInt) -> bool {
        self.reduce_int(v).is_zero()
    }

    /// Entrywise canonical representatives.
    pub fn reduce_matrix(&self, m: &IntMatrix) -> IntMatrix {
        match self {
            Ring::PrimeField(_) => m.map(|v| self.reduce_int(v)),
            _ => m.clone(),
        }
    }

    /// Whether a matrix vanishes once read in this ring.
    pub fn matrix_is_zero(&self, m: &IntMatrix) -> bool {
        m.entries().iter().all(|v| self.int_is_zero(v))
    }

    /// Short symbol used in tables: `Z`, `Q`, `F2`, ...
    pub fn symbol(&self) -> String {
        match self {
            Ring::Integers => "Z".into(),
            Ring::Rationals => "Q".into(),
            Ring::PrimeField(p) => format!("F{p}"),
        }
    }
}

impl fmt::Display for Ring {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.symbol())
    }
}

fn is_prime(p: u64) -> bool {
    if p < 2 {
        return false;
    }
    let mut d = 2u64;
    while d.saturating_mul(d) <= p {
        if p.is_multiple_of(d) {
            return false;
        }
        d += 1;
    }
    true
}

/// Euclidean-ring operations on a concrete element type.
pub trait Scalars {
    type E: Clone + PartialEq + fmt::Debug;

    fn zero(&self) -> Self::E;
    fn one(&self) -> Self::E;
    fn from_int(&self, v: &BigInt) -> Self::E;
    /// `None` when the rational has no image (non-integral over Z,
    /// denominator divisible by p over F_p).
    fn from_rational(&self, v: &BigRational) -> Option<Self::E>;
    fn to_rational(&self, v: &Self::E) -> BigRational;
    fn add(&self, a: &Self::E, b: &Self::E) -> Self::E;
    fn sub(&self, a: &Self::E, b: &Self::E) -> Self::E;
    fn mul(&self, a: &Self::E, b: &Self::E) -> Self::E;
    fn neg(&self, a: &Self::E) -> Self::E;
    fn is_zero(&self, a: &Self::E) -> bool;
    /// Strict comparison of Euclidean norms, used to pick pivots.
    fn smaller(&self, a: &Self::E, b: &Self::E) -> bool;
    /// Euclidean division `a = q b + r` with `r` canonical (non-negative
    /// and below `|b|` over Z, zero over a field). `b` must be nonzero.
    fn div_rem(&self, a: &Self::E, b: &Self::E) -> (Self::E, Self::E);
    /// A unit `u` (and its inverse) such that `a * u` is the canonical
    /// associate of `a`: positive over Z, one over a field.
    fn normalizing_unit(&self, a: &Self::E) -> (Self::E, Self::E);
    /// Whether `a` is a unit.
    fn is_unit(&self, a: &Self::E) -> bool;

    fn is_one(&self, a: &Self::E) -> bool {
        *a == self.one()
    }
}

/// The integers.
#[derive(Clone, Copy, Debug, Default)]
pub struct Integers;

impl Scalars for Integers {
    type E = BigInt;

    fn zero(&self) -> BigInt {
        BigInt::zero()
    }
    fn one(&self) -> BigInt {
        BigInt::one()
    }
    fn from_int(&self, v: &BigInt) -> BigInt {
        v.clone()
    }
    fn from_rational(&self, v: &BigRational) -> Option<BigInt> {
        v.is_integer().then(|| v.to_integer())
    }
    fn to_rational(&self, v: &BigInt) -> BigRational {
        BigRational::from_integer(v.clone())
    }
    fn add(&self, a: &BigInt, b: &BigInt) -> BigInt {
        a + b
    }
    fn sub(&self, a: &BigInt, b: &BigInt) -> BigInt {
        a - b
    }
    fn mul(&self, a: &BigInt, b: &BigInt) -> BigInt {
        a * b
    }
    fn neg(&self, a: &BigInt) -> BigInt {
        -a
    }
    fn is_zero(&self, a: &BigInt) -> bool {
        a.is_zero()
    }
    fn smaller(&self, a: &BigInt, b: &BigInt) -> bool {
        a.abs() < b.abs()
    }
    fn div_rem(&self, a: &BigInt, b: &BigInt) -> (BigInt, BigInt) {
        let r = a.mod_floor(&b.abs());
        let q = (a - &r) / b;
        (q, r)
    }
    fn normalizing_unit(&self, a: &BigInt) -> (BigInt, BigInt) {
        if a.is_negative() {
            (-BigInt::one(), -BigInt::one())
        } else {
            (BigInt::one(), BigInt::one())
        }
    }
    fn is_unit(&self, a: &BigInt) -> bool {
        a.abs().is_one()
    }
}

/// The rationals.
#[derive(Clone, Copy, Debug, Default)]
pub struct Rationals;

impl Scalars for Rationals {
    type E = BigRational;

    fn zero(&self) -> BigRational {
        BigRational::zero()
    }
    fn one(&self) -> BigRational {
        BigRational::one()
    }
    fn from_int(&self, v: &BigInt) -> BigRational {
        BigRational::from_integer(v.clone())
    }
    fn from_rational(&self, v: &BigRational) -> Option<BigRational> {
        Some(v.clone())
    }
    fn to_rational(&self, v: &BigRational) -> BigRational {
        v.clone()
    }
    fn add(&self, a: &BigRational, b: &BigRational) -> BigRational {
        a + b
    }
    fn sub(&self, a: &BigRational, b: &BigRational) -> BigRational {
        a - b
    }
    fn mul(&self, a: &BigRational, b: &BigRational) -> BigRational {
        a * b
    }
    fn neg(&self, a: &BigRational) -> BigRational {
        -a
    }
    fn is_zero(&self, a: &BigRational) -> bool {
        a.is_zero()
    }
    fn smaller(&self, a: &BigRational, b: &BigRational) -> bool {
        // All nonzero elements have the same norm; prefer small heights so
        // that entries stay readable.
        if a.is_zero() || b.is_zero() {
            return !a.is_zero() && b.is_zero();
        }
        let ha = a.numer().abs() + a.denom();
        let hb = b.numer().abs() + b.denom();
        ha < hb
    }
    fn div_rem(&self, a: &BigRational, b: &BigRational) -> (BigRational, BigRational) {
        (a / b, BigRational::zero())
    }
    fn normalizing_unit(&self, a: &BigRational) -> (BigRational, BigRational) {
        if a.is_zero() {
            (BigRational::one(), BigRational::one())
        } else {
            (a.recip(), a.clone())
        }
    }
    fn is_unit(&self, a: &BigRational) -> bool {
        !a.is_zero()
    }
}

/// The prime field `F_p`, elements stored as canonical residues.
#[derive(Clone, Copy, Debug)]
pub struct PrimeField {
    p: u64,
}

impl PrimeField {
    pub fn new(p: u64) -> Self {
        PrimeField { p }
    }

    pub fn modulus(&self) -> u64 {
        self.p
    }

    fn pow(&self, mut base: u64, mut exp: u64) -> u64 {
        let m = self.p as u128;
        let mut acc: u128 = 1;
        let mut b = base as u128 % m;
        while exp > 0 {
            if exp & 1 == 1 {
                acc = acc * b % m;
            }
            b = b * b % m;
            exp >>= 1;
        }
        base = acc as u64;
        base
    }

    fn inv(&self, a: u64) -> u64 {
        assert!(a != 0, "inverse of zero in F_{}", self.p);
        self.pow(a, self.p - 2)
    }
}

impl Scalars for PrimeField {
    type E = u64;

    fn zero(&self) -> u64 {
        0
    }
    fn one(&self) -> u64 {
        1 % self.p
    }
    fn from_int(&self, v: &BigInt) -> u64 {
        v.mod_floor(&BigInt::from(self.p))
            .to_u64()
            .expect("residue fits in u64")
    }
    fn from_rational(&self, v: &BigRational) -> Option<u64> {
        let d = self.from_int(v.denom());
        if d == 0 {
            return None;
        }
        Some(self.mul(&self.from_int(v.numer()), &self.inv(d)))
    }
    fn to_rational(&self, v: &u64) -> BigRational {
        BigRational::from_integer(BigInt::from(*v))
    }
    fn add(&self, a: &u64, b: &u64) -> u64 {
        ((*a as u128 + *b as u128) % self.p as u128) as u64
    }
    fn sub(&self, a: &u64, b: &u64) -> u64 {
        ((*a as u128 + self.p as u128 - *b as u128) % self.p as u128) as u64
    }
    fn mul(&self, a: &u64, b: &u64) -> u64 {
        ((*a as u128 * *b as u128) % self.p as u128) as u64
    }
    fn neg(&self, a: &u64) -> u64 {
        (self.p - *a) % self.p
    }
    fn is_zero(&self, a: &u64) -> bool {
        *a == 0
    }
    fn smaller(&self, a: &u64, b: &u64) -> bool {
        *a != 0 && *b == 0
    }
    fn div_rem(&self, a: &u64, b: &u64) -> (u64, u64) {
        (self.mul(a, &self.inv(*b)), 0)
    }
    fn normalizing_unit(&self, a: &u64) -> (u64, u64) {
        if *a == 0 {
            (1, 1)
        } else {
            (self.inv(*a), *a)
        }
    }
    fn is_unit(&self, a: &u64) -> bool {
        *a != 0
    }
}

/// Runs `$body` with `$s` bound to the concrete [`Scalars`] implementation
/// for `$ring`. The body must evaluate to a ring-independent type.
#[macro_export]
macro_rules! with_scalars {
    ($ring:expr, $s:ident => $body:expr) => {{
        match $ring {
            $crate::exactlin::Ring::Integers => {
                let $s = &$crate::exactlin::ring::Integers;
                $body
            }
            $crate::exactlin::Ring::Rationals => {
                let $s = &$crate::exactlin::ring::Rationals;
                $body
            }
            $crate::exactlin::Ring::PrimeField(p) => {
                let $s = &$crate::exactlin::ring::PrimeField::new(p);
                $body
            }
        }
    }};
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn integer_division_has_canonical_remainder() {
        let z = Integers;
        for (a, b) in [(7, 3), (-7, 3), (7, -3), (-7, -3), (0, 5)] {
            let (a, b) = (BigInt::from(a), BigInt::from(b));
            let (q, r) = z.div_rem(&a, &b);
            assert_eq!(&q * &b + &r, a);
            assert!(!r.is_negative() && r < b.abs());
        }
    }

    #[test]
    fn prime_field_inverse() {
        let f = PrimeField::new(7);
        for a in 1..7u64 {
            let (u, uinv) = f.normalizing_unit(&a);
            assert_eq!(f.mul(&a, &u), 1);
            assert_eq!(f.mul(&u, &uinv), 1);
        }
        let half = BigRational::new(BigInt::from(1), BigInt::from(2));
        assert_eq!(f.from_rational(&half), Some(4));
        let bad = BigRational::new(BigInt::from(1), BigInt::from(7));
        assert_eq!(f.from_rational(&bad), None);
    }

    #[test]
    fn prime_check() {
        assert!(Ring::prime_field(2).is_ok());
        assert!(Ring::prime_field(97).is_ok());
        assert!(Ring::prime_field(1).is_err());
        assert!(Ring::prime_field(91).is_err());
    }
}

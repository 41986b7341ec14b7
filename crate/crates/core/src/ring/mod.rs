//! Scalars in Z/p^N, rational exponents and canonical-form linear algebra.

mod howell;
mod rational;

pub use howell::{HowellMatrix, kernel};
pub use rational::{RatExponent, ceil_identity};

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// The coefficient ring Z/p^N.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Modulus {
    p: u64,
    prec: u32,
    order: u64,
}

impl Modulus {
    /// `p` must be prime and `p^prec` must stay below 2^62.
    pub fn new(p: u64, prec: u32) -> Result<Self> {
        if p < 2 || !is_prime(p) {
            return Err(Error::InvalidArgument(format!("{p} is not a prime")));
        }
        if prec == 0 {
            return Err(Error::InvalidArgument("precision must be at least 1".into()));
        }
        let mut order: u64 = 1;
        for _ in 0..prec {
            order = order
                .checked_mul(p)
                .filter(|o| *o < (1 << 62))
                .ok_or_else(|| Error::InvalidArgument(format!("{p}^{prec} does not fit in a word")))?;
        }
        Ok(Modulus { p, prec, order })
    }

    pub fn p(&self) -> u64 {
        self.p
    }

    pub fn precision(&self) -> u32 {
        self.prec
    }

    /// p^N.
    pub fn order(&self) -> u64 {
        self.order
    }

    /// The same prime at another precision.
    pub fn with_precision(&self, prec: u32) -> Result<Self> {
        Modulus::new(self.p, prec)
    }

    pub fn pow_p(&self, k: u32) -> u64 {
        if k >= self.prec {
            0
        } else {
            self.p.pow(k)
        }
    }

    #[inline]
    pub fn reduce_i64(&self, x: i64) -> u64 {
        x.rem_euclid(self.order as i64) as u64
    }

    #[inline]
    pub fn reduce_i128(&self, x: i128) -> u64 {
        x.rem_euclid(self.order as i128) as u64
    }

    #[inline]
    pub fn add(&self, a: u64, b: u64) -> u64 {
        let s = a + b;
        if s >= self.order {
            s - self.order
        } else {
            s
        }
    }

    #[inline]
    pub fn sub(&self, a: u64, b: u64) -> u64 {
        if a >= b {
            a - b
        } else {
            a + self.order - b
        }
    }

    #[inline]
    pub fn neg(&self, a: u64) -> u64 {
        if a == 0 {
            0
        } else {
            self.order - a
        }
    }

    #[inline]
    pub fn mul(&self, a: u64, b: u64) -> u64 {
        ((a as u128 * b as u128) % self.order as u128) as u64
    }

    pub fn pow(&self, mut a: u64, mut e: u64) -> u64 {
        let mut r = 1 % self.order;
        while e > 0 {
            if e & 1 == 1 {
                r = self.mul(r, a);
            }
            a = self.mul(a, a);
            e >>= 1;
        }
        r
    }

    /// p-adic valuation of a residue; `prec` for zero.
    pub fn valuation(&self, a: u64) -> u32 {
        if a == 0 {
            return self.prec;
        }
        let mut v = 0;
        let mut x = a;
        while x.is_multiple_of(self.p) {
            x /= self.p;
            v += 1;
        }
        v
    }

    /// Inverse of a unit residue.
    pub fn inv(&self, a: u64) -> Option<u64> {
        if a.is_multiple_of(self.p) {
            return None;
        }
        let (mut old_r, mut r) = (a as i128, self.order as i128);
        let (mut old_s, mut s) = (1i128, 0i128);
        while r != 0 {
            let q = old_r / r;
            (old_r, r) = (r, old_r - q * r);
            (old_s, s) = (s, old_s - q * s);
        }
        Some(self.reduce_i128(old_s))
    }

    /// Splits a nonzero residue as `p^v * unit`.
    pub fn split(&self, a: u64) -> (u32, u64) {
        let v = self.valuation(a);
        (v, a / self.p.pow(v))
    }

    pub fn scalar(&self, value: i64) -> Scalar {
        Scalar { value: self.reduce_i64(value), modulus: *self }
    }
}

impl fmt::Display for Modulus {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Z/{}^{}", self.p, self.prec)
    }
}

fn is_prime(p: u64) -> bool {
    if p < 4 {
        return p >= 2;
    }
    let mut d = 2;
    while d * d <= p {
        if p.is_multiple_of(d) {
            return false;
        }
        d += 1;
    }
    true
}

/// A residue class in Z/p^N tagged with its modulus.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Scalar {
    value: u64,
    modulus: Modulus,
}

impl Scalar {
    pub fn new(value: i64, modulus: Modulus) -> Self {
        modulus.scalar(value)
    }

    pub(crate) fn from_residue(value: u64, modulus: Modulus) -> Self {
        debug_assert!(value < modulus.order());
        Scalar { value, modulus }
    }

    pub fn zero(modulus: Modulus) -> Self {
        Scalar { value: 0, modulus }
    }

    pub fn one(modulus: Modulus) -> Self {
        Scalar { value: 1 % modulus.order(), modulus }
    }

    pub fn value(&self) -> u64 {
        self.value
    }

    pub fn modulus(&self) -> Modulus {
        self.modulus
    }

    pub fn is_zero(&self) -> bool {
        self.value == 0
    }

    pub fn is_unit(&self) -> bool {
        !self.value.is_multiple_of(self.modulus.p())
    }

    pub fn is_nilpotent(&self) -> bool {
        !self.is_unit()
    }

    pub fn valuation(&self) -> u32 {
        self.modulus.valuation(self.value)
    }

    fn check(&self, other: &Scalar) -> Result<()> {
        if self.modulus != other.modulus {
            return Err(Error::ModulusMismatch(format!("{} vs {}", self.modulus, other.modulus)));
        }
        Ok(())
    }

    pub fn try_add(&self, other: &Scalar) -> Result<Scalar> {
        self.check(other)?;
        Ok(Scalar { value: self.modulus.add(self.value, other.value), modulus: self.modulus })
    }

    pub fn try_sub(&self, other: &Scalar) -> Result<Scalar> {
        self.check(other)?;
        Ok(Scalar { value: self.modulus.sub(self.value, other.value), modulus: self.modulus })
    }

    pub fn try_mul(&self, other: &Scalar) -> Result<Scalar> {
        self.check(other)?;
        Ok(Scalar { value: self.modulus.mul(self.value, other.value), modulus: self.modulus })
    }

    pub fn neg(&self) -> Scalar {
        Scalar { value: self.modulus.neg(self.value), modulus: self.modulus }
    }

    pub fn inverse(&self) -> Result<Scalar> {
        self.modulus
            .inv(self.value)
            .map(|value| Scalar { value, modulus: self.modulus })
            .ok_or_else(|| Error::NotAUnit(format!("{} in {}", self.value, self.modulus)))
    }
}

impl fmt::Display for Scalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.value)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn unit_and_nilpotent() {
        let m = Modulus::new(3, 2).unwrap();
        assert!(m.scalar(4).is_unit());
        assert!(m.scalar(6).is_nilpotent());
        assert!(m.scalar(0).is_nilpotent());
        let u = m.scalar(4);
        assert_eq!(u.try_mul(&u.inverse().unwrap()).unwrap(), Scalar::one(m));
        assert!(m.scalar(3).inverse().is_err());
    }

    #[test]
    fn mixing_moduli_fails() {
        let a = Modulus::new(2, 2).unwrap().scalar(1);
        let b = Modulus::new(2, 3).unwrap().scalar(1);
        assert!(matches!(a.try_add(&b), Err(Error::ModulusMismatch(_))));
    }

    #[test]
    fn rejects_bad_modulus() {
        assert!(Modulus::new(4, 2).is_err());
        assert!(Modulus::new(2, 0).is_err());
        assert!(Modulus::new(2, 70).is_err());
    }

    #[test]
    fn valuation_and_split() {
        let m = Modulus::new(2, 5).unwrap();
        assert_eq!(m.valuation(12), 2);
        assert_eq!(m.split(12), (2, 3));
        assert_eq!(m.valuation(0), 5);
    }
}

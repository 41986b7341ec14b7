use std::cmp::Ordering;
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};

/// A reduced rational number, used for modulus multiplicities and filtration indices.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct RatExponent {
    num: i64,
    den: u64,
}

fn gcd(mut a: u64, mut b: u64) -> u64 {
    while b != 0 {
        (a, b) = (b, a % b);
    }
    a
}

impl RatExponent {
    pub fn new(num: i64, den: i64) -> Result<Self> {
        if den == 0 {
            return Err(Error::InvalidArgument("zero denominator".into()));
        }
        let (num, den) = if den < 0 { (-num, -den) } else { (num, den) };
        let g = gcd(num.unsigned_abs(), den as u64).max(1);
        Ok(RatExponent { num: num / g as i64, den: den as u64 / g })
    }

    pub fn integer(n: i64) -> Self {
        RatExponent { num: n, den: 1 }
    }

    pub fn numerator(&self) -> i64 {
        self.num
    }

    pub fn denominator(&self) -> u64 {
        self.den
    }

    pub fn is_zero(&self) -> bool {
        self.num == 0
    }

    pub fn is_negative(&self) -> bool {
        self.num < 0
    }

    /// Least integer not below `self`.
    pub fn ceil(&self) -> i64 {
        self.num.div_euclid(self.den as i64) + i64::from(self.num.rem_euclid(self.den as i64) != 0)
    }

    /// `self / e` for a positive integer `e`.
    pub fn div_int(&self, e: u64) -> Result<Self> {
        if e == 0 {
            return Err(Error::InvalidArgument("division by zero".into()));
        }
        RatExponent::new(self.num, (self.den * e) as i64)
    }

    pub fn mul_int(&self, k: i64) -> Self {
        RatExponent::new(self.num * k, self.den as i64).expect("nonzero denominator")
    }
}

/// Checks `ceil(ceil(r) / e) == ceil(r / e)`.
pub fn ceil_identity(r: RatExponent, e: u64) -> bool {
    let lhs = RatExponent::new(r.ceil(), e as i64).map(|q| q.ceil());
    let rhs = r.div_int(e).map(|q| q.ceil());
    matches!((lhs, rhs), (Ok(a), Ok(b)) if a == b)
}

impl PartialOrd for RatExponent {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for RatExponent {
    fn cmp(&self, other: &Self) -> Ordering {
        (self.num as i128 * other.den as i128).cmp(&(other.num as i128 * self.den as i128))
    }
}

impl fmt::Display for RatExponent {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.den == 1 {
            write!(f, "{}", self.num)
        } else {
            write!(f, "{}/{}", self.num, self.den)
        }
    }
}

impl FromStr for RatExponent {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        let bad = || Error::Parse(format!("invalid rational '{s}'"));
        match s.split_once('/') {
            Some((n, d)) => RatExponent::new(
                n.trim().parse().map_err(|_| bad())?,
                d.trim().parse().map_err(|_| bad())?,
            ),
            None => Ok(RatExponent::integer(s.parse().map_err(|_| bad())?)),
        }
    }
}

impl Serialize for RatExponent {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}

impl<'de> Deserialize<'de> for RatExponent {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn ceilings() {
        assert_eq!(RatExponent::new(5, 2).unwrap().ceil(), 3);
        assert_eq!(RatExponent::integer(0).ceil(), 0);
        assert_eq!(RatExponent::new(-5, 2).unwrap().ceil(), -2);
        assert_eq!(RatExponent::new(6, 3).unwrap().ceil(), 2);
    }

    #[test]
    fn ceiling_identity_examples() {
        let r = RatExponent::new(5, 2).unwrap();
        assert_eq!(RatExponent::new(r.ceil(), 3).unwrap().ceil(), 1);
        assert_eq!(r.div_int(3).unwrap().ceil(), 1);
        assert!(ceil_identity(r, 3));
        let r = RatExponent::new(7, 3).unwrap();
        assert!(ceil_identity(r, 1));
        assert_eq!(r.ceil(), 3);
    }

    #[test]
    fn parse_and_print() {
        let r: RatExponent = "6/4".parse().unwrap();
        assert_eq!(r.to_string(), "3/2");
        assert_eq!("3".parse::<RatExponent>().unwrap(), RatExponent::integer(3));
        assert!("x/2".parse::<RatExponent>().is_err());
        assert!("1/0".parse::<RatExponent>().is_err());
    }

    proptest! {
        #[test]
        fn ceiling_identity_holds(num in 0i64..=10_000, den in 1i64..=100, e in 1u64..=50) {
            let r = RatExponent::new(num, den).unwrap();
            prop_assert!(ceil_identity(r, e));
        }

        #[test]
        fn ceil_is_least_upper_integer(num in -1000i64..1000, den in 1i64..50) {
            let r = RatExponent::new(num, den).unwrap();
            let c = r.ceil();
            prop_assert!(RatExponent::integer(c) >= r);
            prop_assert!(RatExponent::integer(c - 1) < r);
        }
    }
}

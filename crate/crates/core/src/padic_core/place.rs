use std::fmt;
use std::str::FromStr;

use serde::{Serialize, Serializer};

use crate::error::CoreError;

/// A place of the rationals: the real absolute value or a p-adic one.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Place {
    Infinity,
    Prime(u64),
}

impl Place {
    /// Builds a p-adic place, checking that `p` is prime.
    pub fn prime(p: u64) -> Result<Place, CoreError> {
        if is_prime(p) {
            Ok(Place::Prime(p))
        } else {
            Err(CoreError::NotPrime(p))
        }
    }

    pub fn is_archimedean(self) -> bool {
        matches!(self, Place::Infinity)
    }

    pub fn as_prime(self) -> Option<u64> {
        match self {
            Place::Prime(p) => Some(p),
            Place::Infinity => None,
        }
    }
}

impl fmt::Display for Place {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Place::Infinity => f.write_str("inf"),
            Place::Prime(p) => write!(f, "{p}"),
        }
    }
}

impl FromStr for Place {
    type Err = CoreError;

    fn from_str(s: &str) -> Result<Place, CoreError> {
        match s.trim() {
            "inf" | "infinity" | "oo" => Ok(Place::Infinity),
            t => {
                let p: u64 = t.parse().map_err(|_| CoreError::BadPlace(t.to_string()))?;
                Place::prime(p)
            }
        }
    }
}

impl Serialize for Place {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

/// Deterministic trial division; primes used here are small.
pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    if n.is_multiple_of(2) {
        return n == 2;
    }
    let mut d = 3u64;
    while d.saturating_mul(d) <= n {
        if n.is_multiple_of(d) {
            return false;
        }
        d += 2;
    }
    true
}

/// Exponent of a prime in a rational; `Infinite` for zero.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Valuation {
    Finite(i64),
    Infinite,
}

impl Valuation {
    pub fn finite(self) -> Option<i64> {
        match self {
            Valuation::Finite(v) => Some(v),
            Valuation::Infinite => None,
        }
    }

    pub fn is_infinite(self) -> bool {
        matches!(self, Valuation::Infinite)
    }

    /// Adds an integer offset; infinity absorbs.
    pub fn shift(self, by: i64) -> Valuation {
        match self {
            Valuation::Finite(v) => Valuation::Finite(v + by),
            Valuation::Infinite => Valuation::Infinite,
        }
    }
}

impl std::ops::Add for Valuation {
    type Output = Valuation;
    fn add(self, rhs: Valuation) -> Valuation {
        match (self, rhs) {
            (Valuation::Finite(a), Valuation::Finite(b)) => Valuation::Finite(a + b),
            _ => Valuation::Infinite,
        }
    }
}

impl fmt::Display for Valuation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Valuation::Finite(v) => write!(f, "{v}"),
            Valuation::Infinite => f.write_str("inf"),
        }
    }
}

impl Serialize for Valuation {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        match self {
            Valuation::Finite(v) => s.serialize_i64(*v),
            Valuation::Infinite => s.serialize_str("inf"),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn primality_checked() {
        assert!(Place::prime(13).is_ok());
        assert!(matches!(Place::prime(15), Err(CoreError::NotPrime(15))));
        assert!(Place::prime(1).is_err());
        assert_eq!("inf".parse::<Place>().unwrap(), Place::Infinity);
        assert_eq!("7".parse::<Place>().unwrap(), Place::Prime(7));
        assert!("9".parse::<Place>().is_err());
    }

    #[test]
    fn valuation_order() {
        assert!(Valuation::Finite(1_000_000) < Valuation::Infinite);
        assert!(Valuation::Finite(-3) < Valuation::Finite(2));
        assert_eq!(Valuation::Finite(2).shift(-5), Valuation::Finite(-3));
        assert_eq!(Valuation::Infinite.shift(-5), Valuation::Infinite);
    }
}

use std::cmp::Ordering;
use std::fmt;
use std::ops::Add;
use std::str::FromStr;

use num_bigint::{BigInt, BigUint};
use num_traits::{One, Zero};
use serde::{Serialize, Serializer};

/// A multiplicity in `{0, 1, 2, ...} ∪ {∞}`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum ExtNat {
    Finite(BigUint),
    Infinite,
}

impl ExtNat {
    pub fn zero() -> Self {
        ExtNat::Finite(BigUint::zero())
    }

    pub fn one() -> Self {
        ExtNat::Finite(BigUint::one())
    }

    pub fn is_zero(&self) -> bool {
        matches!(self, ExtNat::Finite(n) if n.is_zero())
    }

    pub fn is_positive(&self) -> bool {
        !self.is_zero()
    }

    pub fn is_infinite(&self) -> bool {
        matches!(self, ExtNat::Infinite)
    }

    pub fn finite(&self) -> Option<&BigUint> {
        match self {
            ExtNat::Finite(n) => Some(n),
            ExtNat::Infinite => None,
        }
    }

    /// Finite value as a signed integer; `None` for `∞`.
    pub fn to_bigint(&self) -> Option<BigInt> {
        self.finite().map(|n| BigInt::from(n.clone()))
    }

    /// Finite value as `u64` when it fits.
    pub fn to_u64(&self) -> Option<u64> {
        self.finite().and_then(|n| u64::try_from(n).ok())
    }
}

impl From<u64> for ExtNat {
    fn from(n: u64) -> Self {
        ExtNat::Finite(BigUint::from(n))
    }
}

impl From<BigUint> for ExtNat {
    fn from(n: BigUint) -> Self {
        ExtNat::Finite(n)
    }
}

impl PartialOrd for ExtNat {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for ExtNat {
    fn cmp(&self, other: &Self) -> Ordering {
        match (self, other) {
            (ExtNat::Finite(a), ExtNat::Finite(b)) => a.cmp(b),
            (ExtNat::Finite(_), ExtNat::Infinite) => Ordering::Less,
            (ExtNat::Infinite, ExtNat::Finite(_)) => Ordering::Greater,
            (ExtNat::Infinite, ExtNat::Infinite) => Ordering::Equal,
        }
    }
}

impl Add for &ExtNat {
    type Output = ExtNat;

    fn add(self, rhs: &ExtNat) -> ExtNat {
        match (self, rhs) {
            (ExtNat::Finite(a), ExtNat::Finite(b)) => ExtNat::Finite(a + b),
            _ => ExtNat::Infinite,
        }
    }
}

impl Add for ExtNat {
    type Output = ExtNat;

    fn add(self, rhs: ExtNat) -> ExtNat {
        &self + &rhs
    }
}

impl std::iter::Sum for ExtNat {
    fn sum<I: Iterator<Item = ExtNat>>(iter: I) -> Self {
        iter.fold(ExtNat::zero(), |acc, x| acc + x)
    }
}

impl fmt::Display for ExtNat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ExtNat::Finite(n) => write!(f, "{n}"),
            ExtNat::Infinite => f.write_str("inf"),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error("not a multiplicity: {0:?}")]
pub struct ParseExtNatError(pub String);

impl FromStr for ExtNat {
    type Err = ParseExtNatError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let s = s.trim();
        if s.eq_ignore_ascii_case("inf") || s == "∞" {
            return Ok(ExtNat::Infinite);
        }
        if s.is_empty() || !s.bytes().all(|b| b.is_ascii_digit()) {
            return Err(ParseExtNatError(s.to_string()));
        }
        s.parse::<BigUint>()
            .map(ExtNat::Finite)
            .map_err(|_| ParseExtNatError(s.to_string()))
    }
}

impl Serialize for ExtNat {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        match self.to_u64() {
            Some(n) => serializer.serialize_u64(n),
            None => serializer.serialize_str(&self.to_string()),
        }
    }
}

//! Exact rationals and the extended levels `ℚ ∪ {∞}` used for filtration
//! cut-offs and Q-invariants.

use std::cmp::Ordering;
use std::fmt;
use std::str::FromStr;

use num_rational::Ratio;
use num_traits::{One, Zero};
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::ParseError;

/// Exact rational number. Always stored in lowest terms with positive denominator.
pub type Rational = Ratio<i64>;

/// Parses `"p/q"`, `"p"`, or a leading-sign variant of either.
pub fn parse_rational(s: &str) -> Result<Rational, ParseError> {
    let t = s.trim();
    Rational::from_str(t).map_err(|_| ParseError::Fraction(s.to_string()))
}

/// Lowest-terms rendering; integers print without a denominator.
pub fn format_rational(q: &Rational) -> String {
    if q.is_integer() {
        q.numer().to_string()
    } else {
        format!("{}/{}", q.numer(), q.denom())
    }
}

/// The representative of `q mod 1` in `[0, 1)`.
pub fn frac_part(q: &Rational) -> Rational {
    q - q.floor()
}

/// A filtration level or invariant value: a finite rational or `∞`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Level {
    Finite(Rational),
    Infinity,
}

impl Level {
    pub fn one() -> Self {
        Level::Finite(Rational::one())
    }

    pub fn zero() -> Self {
        Level::Finite(Rational::zero())
    }

    pub fn finite(&self) -> Option<Rational> {
        match self {
            Level::Finite(q) => Some(*q),
            Level::Infinity => None,
        }
    }

    pub fn is_infinite(&self) -> bool {
        matches!(self, Level::Infinity)
    }

    /// `true` iff the finite value `x` lies strictly below this level.
    pub fn exceeds(&self, x: &Rational) -> bool {
        match self {
            Level::Finite(q) => x < q,
            Level::Infinity => true,
        }
    }
}

impl From<Rational> for Level {
    fn from(q: Rational) -> Self {
        Level::Finite(q)
    }
}

impl PartialOrd for Level {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Level {
    fn cmp(&self, other: &Self) -> Ordering {
        match (self, other) {
            (Level::Finite(a), Level::Finite(b)) => a.cmp(b),
            (Level::Finite(_), Level::Infinity) => Ordering::Less,
            (Level::Infinity, Level::Finite(_)) => Ordering::Greater,
            (Level::Infinity, Level::Infinity) => Ordering::Equal,
        }
    }
}

impl fmt::Display for Level {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Level::Finite(q) => f.write_str(&format_rational(q)),
            Level::Infinity => f.write_str("inf"),
        }
    }
}

impl FromStr for Level {
    type Err = ParseError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.trim() {
            "inf" | "infinity" | "∞" => Ok(Level::Infinity),
            t => parse_rational(t).map(Level::Finite),
        }
    }
}

impl Serialize for Level {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}

impl<'de> Deserialize<'de> for Level {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

/// Serde adapter storing a [`Rational`] as a `"p/q"` string.
pub mod serde_fraction {
    use super::*;

    pub fn serialize<S: Serializer>(q: &Rational, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&format_rational(q))
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Rational, D::Error> {
        let s = String::deserialize(d)?;
        parse_rational(&s).map_err(serde::de::Error::custom)
    }
}

/// Serde adapter for `Vec<Rational>` as a list of `"p/q"` strings.
pub mod serde_fraction_vec {
    use super::*;

    pub fn serialize<S: Serializer>(v: &[Rational], s: S) -> Result<S::Ok, S::Error> {
        s.collect_seq(v.iter().map(format_rational))
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Vec<Rational>, D::Error> {
        let v = Vec::<String>::deserialize(d)?;
        v.iter()
            .map(|s| parse_rational(s).map_err(serde::de::Error::custom))
            .collect()
    }
}

use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};

/// A plausibility value in `D`: the distinguished impossible element, the
/// distinguished undefined element, or a measure-specific payload.
///
/// For kappa tables the GCPP zero is the rank `∞`, so a kappa rank of `∞` is
/// stored as [`Plaus::Zero`] and the kappa "undefined" `∞_D` as
/// [`Plaus::Undef`].
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Plaus {
    Zero,
    Undef,
    Value(Payload),
}

/// Exact payloads. Equality is structural; there is no floating tolerance.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Payload {
    /// Probability, possibility and consistency values (never zero).
    Rational(BigRational),
    /// Finite kappa rank.
    Rank(u64),
    /// Opaque equivalence-class identifier (tables derived from an SQCPP or
    /// read from a generic file).
    Class(u64),
}

/// A kappa rank: finite or the top element `∞`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Rank {
    Finite(u64),
    Top,
}

impl Plaus {
    /// A rational value; exact zero maps to [`Plaus::Zero`].
    pub fn rational(r: BigRational) -> Self {
        if r.is_zero() {
            Plaus::Zero
        } else {
            Plaus::Value(Payload::Rational(r))
        }
    }

    pub fn ratio(num: i64, den: i64) -> Self {
        Plaus::rational(BigRational::new(BigInt::from(num), BigInt::from(den)))
    }

    pub fn one() -> Self {
        Plaus::Value(Payload::Rational(BigRational::one()))
    }

    /// A kappa rank; `∞` maps to [`Plaus::Zero`].
    pub fn rank(r: Rank) -> Self {
        match r {
            Rank::Finite(k) => Plaus::Value(Payload::Rank(k)),
            Rank::Top => Plaus::Zero,
        }
    }

    pub fn class(id: u64) -> Self {
        Plaus::Value(Payload::Class(id))
    }

    pub fn is_zero(&self) -> bool {
        matches!(self, Plaus::Zero)
    }

    pub fn is_undef(&self) -> bool {
        matches!(self, Plaus::Undef)
    }

    pub fn is_value(&self) -> bool {
        matches!(self, Plaus::Value(_))
    }

    pub fn as_rational(&self) -> Option<&BigRational> {
        match self {
            Plaus::Value(Payload::Rational(r)) => Some(r),
            _ => None,
        }
    }
}

impl fmt::Display for Payload {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Payload::Rational(r) => write!(f, "{r}"),
            Payload::Rank(k) => write!(f, "rank:{k}"),
            Payload::Class(c) => write!(f, "class:{c}"),
        }
    }
}

impl fmt::Display for Plaus {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Plaus::Zero => f.write_str("zero"),
            Plaus::Undef => f.write_str("undef"),
            Plaus::Value(p) => write!(f, "{p}"),
        }
    }
}

impl fmt::Debug for Plaus {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl fmt::Debug for Payload {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl fmt::Display for Rank {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Rank::Finite(k) => write!(f, "{k}"),
            Rank::Top => f.write_str("top"),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn zero_rational_is_the_distinguished_zero() {
        assert_eq!(Plaus::ratio(0, 5), Plaus::Zero);
        assert_eq!(Plaus::ratio(2, 4), Plaus::ratio(1, 2));
        assert_ne!(Plaus::Zero, Plaus::Undef);
        assert_eq!(Plaus::rank(Rank::Top), Plaus::Zero);
    }

    #[test]
    fn display_forms() {
        assert_eq!(Plaus::ratio(3, 6).to_string(), "1/2");
        assert_eq!(Plaus::rank(Rank::Finite(2)).to_string(), "rank:2");
        assert_eq!(Plaus::class(7).to_string(), "class:7");
        assert_eq!(Plaus::Undef.to_string(), "undef");
    }
}

//! Exact rational scalars and points with cached multiplicative heights.
//!
//! `Rat` is an arbitrary-precision fraction kept in canonical form
//! (positive denominator, coprime numerator/denominator, zero as 0/1);
//! `num_rational::BigRational` maintains exactly these invariants.

use num_bigint::{BigInt, BigUint};
use num_traits::{One, Signed, Zero};

use crate::error::Error;

pub type Rat = num_rational::BigRational;

pub fn rat_int(n: i64) -> Rat {
    Rat::from_integer(BigInt::from(n))
}

pub fn rat(num: i64, den: i64) -> Rat {
    Rat::new(BigInt::from(num), BigInt::from(den))
}

/// Multiplicative height of a rational: max(|numerator|, denominator)
/// of the canonical form. Always >= 1.
pub fn height_rat(q: &Rat) -> BigUint {
    let n = q.numer().abs().to_biguint().unwrap();
    let d = q.denom().to_biguint().unwrap();
    n.max(d)
}

/// Parses "p/q" or "p" into a canonical rational.
pub fn parse_rat(s: &str) -> Result<Rat, Error> {
    let s = s.trim();
    let (num, den) = match s.split_once('/') {
        Some((n, d)) => (n.trim(), d.trim()),
        None => (s, "1"),
    };
    let n: BigInt = num
        .parse()
        .map_err(|_| Error::Parse(format!("bad numerator in {s:?}")))?;
    let d: BigInt = den
        .parse()
        .map_err(|_| Error::Parse(format!("bad denominator in {s:?}")))?;
    if d.is_zero() {
        return Err(Error::Parse(format!("zero denominator in {s:?}")));
    }
    Ok(Rat::new(n, d))
}

/// Formats a rational as "p/q", or "p" when the denominator is 1.
pub fn format_rat(q: &Rat) -> String {
    if q.denom().is_one() {
        q.numer().to_string()
    } else {
        format!("{}/{}", q.numer(), q.denom())
    }
}

/// A point of Q^n with its multiplicative height cached at construction.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct QPoint {
    coords: Vec<Rat>,
    height: BigUint,
}

impl QPoint {
    pub fn new(coords: Vec<Rat>) -> Self {
        // max over the empty set is 0 by convention
        let height = coords
            .iter()
            .map(height_rat)
            .max()
            .unwrap_or_else(BigUint::zero);
        QPoint { coords, height }
    }

    pub fn from_i64(coords: &[i64]) -> Self {
        QPoint::new(coords.iter().map(|&c| rat_int(c)).collect())
    }

    pub fn coords(&self) -> &[Rat] {
        &self.coords
    }

    pub fn arity(&self) -> usize {
        self.coords.len()
    }

    pub fn height(&self) -> &BigUint {
        &self.height
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn height_canonical_values() {
        assert_eq!(height_rat(&rat_int(0)), BigUint::from(1u32));
        assert_eq!(height_rat(&rat_int(1)), BigUint::from(1u32));
        assert_eq!(height_rat(&rat_int(-1)), BigUint::from(1u32));
        assert_eq!(height_rat(&rat(6, 4)), BigUint::from(3u32));
        assert_eq!(height_rat(&rat(-7, 5)), BigUint::from(7u32));
    }

    #[test]
    fn point_height_is_max() {
        let p = QPoint::new(vec![rat(1, 2), rat_int(3)]);
        assert_eq!(p.height(), &BigUint::from(3u32));
        assert_eq!(QPoint::new(vec![]).height(), &BigUint::zero());
        assert_eq!(QPoint::from_i64(&[0, 0, 0]).height(), &BigUint::from(1u32));
    }

    #[test]
    fn parse_roundtrip() {
        assert_eq!(parse_rat("3/6").unwrap(), rat(1, 2));
        assert_eq!(parse_rat("-4").unwrap(), rat_int(-4));
        assert_eq!(format_rat(&rat(-4, 6)), "-2/3");
        assert!(parse_rat("1/0").is_err());
        assert!(parse_rat("x").is_err());
    }
}

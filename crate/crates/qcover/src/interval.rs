//! Exact interval arithmetic over the rationals.
//!
//! Endpoints are arbitrary-precision rationals, so the only widening
//! comes from the interval operations themselves; there is no rounding.

use num_traits::{Signed, Zero};

use crate::error::Error;
use crate::rational::{rat_int, Rat};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RatInterval {
    pub lo: Rat,
    pub hi: Rat,
}

impl RatInterval {
    pub fn new(lo: Rat, hi: Rat) -> Self {
        assert!(lo <= hi, "interval endpoints out of order");
        RatInterval { lo, hi }
    }

    pub fn point(v: Rat) -> Self {
        RatInterval { lo: v.clone(), hi: v }
    }

    pub fn width(&self) -> Rat {
        &self.hi - &self.lo
    }

    pub fn contains(&self, v: &Rat) -> bool {
        &self.lo <= v && v <= &self.hi
    }

    pub fn contains_zero(&self) -> bool {
        self.contains(&Rat::zero())
    }

    pub fn midpoint(&self) -> Rat {
        (&self.lo + &self.hi) / rat_int(2)
    }

    pub fn add(&self, other: &RatInterval) -> RatInterval {
        RatInterval::new(&self.lo + &other.lo, &self.hi + &other.hi)
    }

    pub fn sub(&self, other: &RatInterval) -> RatInterval {
        RatInterval::new(&self.lo - &other.hi, &self.hi - &other.lo)
    }

    pub fn neg(&self) -> RatInterval {
        RatInterval::new(-self.hi.clone(), -self.lo.clone())
    }

    pub fn mul(&self, other: &RatInterval) -> RatInterval {
        let candidates = [
            &self.lo * &other.lo,
            &self.lo * &other.hi,
            &self.hi * &other.lo,
            &self.hi * &other.hi,
        ];
        let lo = candidates.iter().min().unwrap().clone();
        let hi = candidates.iter().max().unwrap().clone();
        RatInterval::new(lo, hi)
    }

    pub fn recip(&self) -> Result<RatInterval, Error> {
        if self.contains_zero() {
            return Err(Error::Pole);
        }
        Ok(RatInterval::new(self.hi.recip(), self.lo.recip()))
    }

    pub fn div(&self, other: &RatInterval) -> Result<RatInterval, Error> {
        Ok(self.mul(&other.recip()?))
    }

    pub fn scale(&self, c: &Rat) -> RatInterval {
        if c.is_negative() {
            RatInterval::new(&self.hi * c, &self.lo * c)
        } else {
            RatInterval::new(&self.lo * c, &self.hi * c)
        }
    }

    /// |x| <= bound for every x in the interval.
    pub fn abs_bounded_by(&self, bound: &Rat) -> bool {
        self.lo.abs() <= *bound && self.hi.abs() <= *bound
    }

    /// max |x| over the interval.
    pub fn mag(&self) -> Rat {
        self.lo.abs().max(self.hi.abs())
    }

    pub fn hull(&self, other: &RatInterval) -> RatInterval {
        RatInterval::new(
            self.lo.clone().min(other.lo.clone()),
            self.hi.clone().max(other.hi.clone()),
        )
    }

    pub fn split(&self) -> (RatInterval, RatInterval) {
        let mid = self.midpoint();
        (
            RatInterval::new(self.lo.clone(), mid.clone()),
            RatInterval::new(mid, self.hi.clone()),
        )
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::rat;

    #[test]
    fn arithmetic() {
        let a = RatInterval::new(rat(-1, 2), rat(1, 3));
        let b = RatInterval::new(rat_int(2), rat_int(3));
        assert_eq!(a.add(&b), RatInterval::new(rat(3, 2), rat(10, 3)));
        assert_eq!(a.mul(&b), RatInterval::new(rat(-3, 2), rat_int(1)));
        assert!(a.contains_zero());
        assert!(b.recip().is_ok());
        assert!(a.recip().is_err());
    }

    #[test]
    fn magnitude() {
        let a = RatInterval::new(rat(-3, 4), rat(1, 2));
        assert_eq!(a.mag(), rat(3, 4));
        assert!(a.abs_bounded_by(&rat_int(1)));
        assert!(!a.abs_bounded_by(&rat(1, 2)));
    }
}

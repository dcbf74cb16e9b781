//! Real algebraic numbers as irreducible minimal polynomial plus
//! isolating interval, and exact arithmetic in the number field they
//! generate. All sign decisions go through exact polynomial arithmetic;
//! no floating point anywhere.

use num_traits::{One, Signed, Zero};

use crate::error::Error;
use crate::poly::{count_roots_halfopen, refine_root, IPoly};
use crate::rational::Rat;

/// A real algebraic number.
///
/// The minimal polynomial is primitive with positive leading
/// coefficient. Irreducibility is checked as far as cheaply possible
/// (squarefree, no rational root; complete for degree <= 3); beyond
/// that the caller's claim of irreducibility is trusted and documented
/// as a trust boundary.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AlgNumber {
    minpoly: IPoly,
    lo: Rat,
    hi: Rat,
}

impl AlgNumber {
    pub fn new(minpoly: IPoly, lo: Rat, hi: Rat) -> Result<Self, Error> {
        let deg = minpoly
            .degree()
            .ok_or_else(|| Error::InvalidArgument("zero minimal polynomial".into()))?;
        if deg < 1 {
            return Err(Error::InvalidArgument("constant minimal polynomial".into()));
        }
        let minpoly = minpoly.primitive();
        if lo >= hi {
            return Err(Error::InvalidArgument("empty isolating interval".into()));
        }
        if minpoly.sign_at(&lo) == 0 || minpoly.sign_at(&hi) == 0 {
            return Err(Error::InvalidArgument(
                "isolating interval endpoints must not be roots".into(),
            ));
        }
        if minpoly.sign_at(&lo) == minpoly.sign_at(&hi) {
            return Err(Error::InvalidArgument(
                "no sign change over the isolating interval".into(),
            ));
        }
        if count_roots_halfopen(&minpoly, &lo, &hi) != 1 {
            return Err(Error::InvalidArgument(
                "isolating interval must contain exactly one root".into(),
            ));
        }
        // squarefree is necessary for irreducibility; a rational root
        // with degree > 1 refutes it outright
        if minpoly.squarefree() != minpoly {
            return Err(Error::InvalidArgument("minimal polynomial is not squarefree".into()));
        }
        if deg > 1 && has_rational_root(&minpoly) {
            return Err(Error::InvalidArgument(
                "minimal polynomial has a rational root, so it is reducible".into(),
            ));
        }
        Ok(AlgNumber { minpoly, lo, hi })
    }

    pub fn from_rational(q: &Rat) -> Self {
        // minpoly: den*x - num, interval (q-1, q+1) shrunk off roots
        let minpoly = IPoly::new(vec![-q.numer().clone(), q.denom().clone()]).primitive();
        AlgNumber {
            minpoly,
            lo: q - Rat::new(1.into(), 2.into()),
            hi: q + Rat::new(1.into(), 2.into()),
        }
    }

    pub fn minpoly(&self) -> &IPoly {
        &self.minpoly
    }

    pub fn degree(&self) -> usize {
        self.minpoly.degree().unwrap()
    }

    pub fn interval(&self) -> (&Rat, &Rat) {
        (&self.lo, &self.hi)
    }

    pub fn as_rational(&self) -> Option<Rat> {
        if self.degree() == 1 {
            let c = self.minpoly.coeffs();
            Some(Rat::new(-c[0].clone(), c[1].clone()))
        } else {
            None
        }
    }

    pub fn refine(&self, width: &Rat) -> (Rat, Rat) {
        if let Some(q) = self.as_rational() {
            let half = width / Rat::from_integer(2.into());
            return (&q - &half, &q + &half);
        }
        refine_root(&self.minpoly, &self.lo, &self.hi, width)
    }
}

fn has_rational_root(p: &IPoly) -> bool {
    // rational root theorem on the primitive polynomial
    let lead = p.leading().unwrap().abs();
    let constant = p.coeffs()[0].abs();
    if constant.is_zero() {
        return true;
    }
    let divisors = |v: &num_bigint::BigInt| -> Vec<num_bigint::BigInt> {
        let mut out = Vec::new();
        let mut d = num_bigint::BigInt::one();
        while &d * &d <= *v {
            if (v % &d).is_zero() {
                out.push(d.clone());
                out.push(v / &d);
            }
            d += 1;
        }
        out
    };
    for num in divisors(&constant) {
        for den in divisors(&lead) {
            let q = Rat::new(num.clone(), den.clone());
            if p.sign_at(&q) == 0 || p.sign_at(&(-q.clone())) == 0 {
                return true;
            }
        }
    }
    false
}

/// An element of Q(alpha) in the power basis 1, alpha, ..., alpha^{g-1}.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AlgElem {
    minpoly: IPoly,
    coeffs: Vec<Rat>,
}

impl AlgElem {
    pub fn new(alpha: &AlgNumber, mut coeffs: Vec<Rat>) -> Self {
        let g = alpha.degree();
        coeffs.resize(g, Rat::zero());
        AlgElem { minpoly: alpha.minpoly.clone(), coeffs }
    }

    pub fn from_rational(alpha: &AlgNumber, q: Rat) -> Self {
        let mut coeffs = vec![Rat::zero(); alpha.degree()];
        coeffs[0] = q;
        AlgElem { minpoly: alpha.minpoly.clone(), coeffs }
    }

    pub fn generator(alpha: &AlgNumber) -> Self {
        let g = alpha.degree();
        let mut coeffs = vec![Rat::zero(); g];
        if g == 1 {
            coeffs[0] = alpha.as_rational().unwrap();
        } else {
            coeffs[1] = Rat::one();
        }
        AlgElem { minpoly: alpha.minpoly.clone(), coeffs }
    }

    pub fn coeffs(&self) -> &[Rat] {
        &self.coeffs
    }

    pub fn is_compatible(&self, other: &AlgElem) -> bool {
        self.minpoly == other.minpoly
    }

    pub fn add(&self, other: &AlgElem) -> Result<AlgElem, Error> {
        if !self.is_compatible(other) {
            return Err(Error::InvalidArgument(
                "mixed incompatible algebraic coordinates".into(),
            ));
        }
        Ok(AlgElem {
            minpoly: self.minpoly.clone(),
            coeffs: self
                .coeffs
                .iter()
                .zip(&other.coeffs)
                .map(|(a, b)| a + b)
                .collect(),
        })
    }

    pub fn scale(&self, c: &Rat) -> AlgElem {
        AlgElem {
            minpoly: self.minpoly.clone(),
            coeffs: self.coeffs.iter().map(|a| a * c).collect(),
        }
    }

    pub fn mul(&self, other: &AlgElem) -> Result<AlgElem, Error> {
        if !self.is_compatible(other) {
            return Err(Error::InvalidArgument(
                "mixed incompatible algebraic coordinates".into(),
            ));
        }
        let g = self.coeffs.len();
        let mut raw = vec![Rat::zero(); 2 * g];
        for (i, a) in self.coeffs.iter().enumerate() {
            for (j, b) in other.coeffs.iter().enumerate() {
                raw[i + j] += a * b;
            }
        }
        Ok(AlgElem {
            minpoly: self.minpoly.clone(),
            coeffs: reduce_mod_minpoly(raw, &self.minpoly),
        })
    }
}

/// Reduces a coefficient vector of a polynomial in alpha modulo the
/// (monicized) minimal polynomial, returning exactly g coefficients.
pub fn reduce_mod_minpoly(mut raw: Vec<Rat>, minpoly: &IPoly) -> Vec<Rat> {
    let g = minpoly.degree().unwrap();
    let lead = Rat::from_integer(minpoly.leading().unwrap().clone());
    // monic rewrite: alpha^g = -(c_0 + ... + c_{g-1} alpha^{g-1}) / lead
    while raw.len() > g {
        let top = raw.pop().unwrap();
        if top.is_zero() {
            continue;
        }
        let deg = raw.len(); // reduced power alpha^deg, deg >= g
        let factor = &top / &lead;
        for i in 0..g {
            let c = Rat::from_integer(minpoly.coeffs()[i].clone());
            raw[deg - g + i] -= &factor * c;
        }
    }
    raw.resize(g, Rat::zero());
    raw
}

/// Power-basis coordinates of alpha^j.
pub fn power_in_basis(alpha: &AlgNumber, j: usize) -> Vec<Rat> {
    let mut raw = vec![Rat::zero(); j + 1];
    raw[j] = Rat::one();
    if alpha.degree() == 1 {
        let q = alpha.as_rational().unwrap();
        let mut acc = Rat::one();
        for _ in 0..j {
            acc *= &q;
        }
        return vec![acc];
    }
    reduce_mod_minpoly(raw, &alpha.minpoly)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::{rat, rat_int};

    fn sqrt2() -> AlgNumber {
        AlgNumber::new(IPoly::from_i64(&[-2, 0, 1]), rat_int(1), rat_int(2)).unwrap()
    }

    #[test]
    fn construction_checks() {
        assert!(sqrt2().degree() == 2);
        // interval with both roots rejected
        assert!(AlgNumber::new(IPoly::from_i64(&[-2, 0, 1]), rat_int(-2), rat_int(2)).is_err());
        // reducible: x^2 - 1 has rational roots
        assert!(AlgNumber::new(IPoly::from_i64(&[-1, 0, 1]), rat(1, 2), rat_int(2)).is_err());
        // not squarefree
        assert!(AlgNumber::new(IPoly::from_i64(&[1, -2, 1]), rat(1, 2), rat_int(2)).is_err());
    }

    #[test]
    fn field_arithmetic() {
        let a = sqrt2();
        let one_plus = AlgElem::new(&a, vec![rat_int(1), rat_int(1)]);
        let sq = one_plus.mul(&one_plus).unwrap();
        // (1 + sqrt2)^2 = 3 + 2 sqrt2
        assert_eq!(sq.coeffs(), &[rat_int(3), rat_int(2)]);
    }

    #[test]
    fn powers() {
        let a = sqrt2();
        assert_eq!(power_in_basis(&a, 0), vec![rat_int(1), rat_int(0)]);
        assert_eq!(power_in_basis(&a, 1), vec![rat_int(0), rat_int(1)]);
        assert_eq!(power_in_basis(&a, 2), vec![rat_int(2), rat_int(0)]);
        assert_eq!(power_in_basis(&a, 3), vec![rat_int(0), rat_int(2)]);
    }

    #[test]
    fn refine_narrows() {
        let a = sqrt2();
        let (lo, hi) = a.refine(&rat(1, 1 << 20));
        assert!(&hi - &lo <= rat(1, 1 << 20));
        assert!(lo < rat(1414214, 1000000) && hi > rat(1414213, 1000000));
    }
}

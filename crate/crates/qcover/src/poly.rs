//! Univariate integer-coefficient polynomials with exact evaluation,
//! Sturm sequences, and real root isolation.
//!
//! Coefficients are stored low degree first with no trailing zeros; the
//! zero polynomial is the empty vector.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use crate::error::Error;
use crate::interval::RatInterval;
use crate::rational::{rat_int, Rat};

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct IPoly {
    coeffs: Vec<BigInt>,
}

impl IPoly {
    pub fn new(mut coeffs: Vec<BigInt>) -> Self {
        while coeffs.last().map_or(false, |c| c.is_zero()) {
            coeffs.pop();
        }
        IPoly { coeffs }
    }

    pub fn from_i64(coeffs: &[i64]) -> Self {
        IPoly::new(coeffs.iter().map(|&c| BigInt::from(c)).collect())
    }

    pub fn zero() -> Self {
        IPoly { coeffs: vec![] }
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn coeffs(&self) -> &[BigInt] {
        &self.coeffs
    }

    /// Degree; zero polynomial reports None.
    pub fn degree(&self) -> Option<usize> {
        if self.coeffs.is_empty() {
            None
        } else {
            Some(self.coeffs.len() - 1)
        }
    }

    pub fn leading(&self) -> Option<&BigInt> {
        self.coeffs.last()
    }

    pub fn eval(&self, t: &Rat) -> Rat {
        let mut acc = Rat::zero();
        for c in self.coeffs.iter().rev() {
            acc = acc * t + Rat::from_integer(c.clone());
        }
        acc
    }

    /// Interval extension by Horner evaluation.
    pub fn eval_interval(&self, t: &RatInterval) -> RatInterval {
        let mut acc = RatInterval::point(Rat::zero());
        for c in self.coeffs.iter().rev() {
            acc = acc.mul(t).add(&RatInterval::point(Rat::from_integer(c.clone())));
        }
        acc
    }

    pub fn derivative(&self) -> IPoly {
        if self.coeffs.len() <= 1 {
            return IPoly::zero();
        }
        IPoly::new(
            self.coeffs[1..]
                .iter()
                .enumerate()
                .map(|(i, c)| c * BigInt::from(i + 1))
                .collect(),
        )
    }

    pub fn add(&self, other: &IPoly) -> IPoly {
        let n = self.coeffs.len().max(other.coeffs.len());
        let mut out = vec![BigInt::zero(); n];
        for (i, c) in self.coeffs.iter().enumerate() {
            out[i] += c;
        }
        for (i, c) in other.coeffs.iter().enumerate() {
            out[i] += c;
        }
        IPoly::new(out)
    }

    pub fn sub(&self, other: &IPoly) -> IPoly {
        self.add(&other.neg())
    }

    pub fn neg(&self) -> IPoly {
        IPoly::new(self.coeffs.iter().map(|c| -c).collect())
    }

    pub fn mul(&self, other: &IPoly) -> IPoly {
        if self.is_zero() || other.is_zero() {
            return IPoly::zero();
        }
        let mut out = vec![BigInt::zero(); self.coeffs.len() + other.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            for (j, b) in other.coeffs.iter().enumerate() {
                out[i + j] += a * b;
            }
        }
        IPoly::new(out)
    }

    pub fn scale(&self, c: &BigInt) -> IPoly {
        IPoly::new(self.coeffs.iter().map(|a| a * c).collect())
    }

    /// gcd of the coefficients; 0 for the zero polynomial.
    pub fn content(&self) -> BigInt {
        self.coeffs
            .iter()
            .fold(BigInt::zero(), |acc, c| acc.gcd(c))
    }

    /// Divides out the content and makes the leading coefficient positive.
    pub fn primitive(&self) -> IPoly {
        if self.is_zero() {
            return IPoly::zero();
        }
        let mut c = self.content();
        if self.leading().unwrap().is_negative() {
            c = -c;
        }
        IPoly::new(self.coeffs.iter().map(|a| a / &c).collect())
    }

    /// Composition self(g(x)).
    pub fn compose(&self, g: &IPoly) -> IPoly {
        let mut acc = IPoly::zero();
        for c in self.coeffs.iter().rev() {
            acc = acc.mul(g).add(&IPoly::new(vec![c.clone()]));
        }
        acc
    }

    /// Squarefree part: self / gcd(self, self').
    pub fn squarefree(&self) -> IPoly {
        if self.is_zero() {
            return IPoly::zero();
        }
        let g = ipoly_gcd(self, &self.derivative());
        if g.degree() == Some(0) {
            return self.primitive();
        }
        let (q, r) = qpoly_divrem(&to_qpoly(self), &to_qpoly(&g));
        debug_assert!(r.is_empty());
        from_qpoly(&q).primitive()
    }

    pub fn sign_at(&self, t: &Rat) -> i32 {
        sign_rat(&self.eval(t))
    }
}

fn sign_rat(q: &Rat) -> i32 {
    if q.is_zero() {
        0
    } else if q.numer().is_negative() {
        -1
    } else {
        1
    }
}

// ---- rational-coefficient helpers (internal) ----

type QPoly = Vec<Rat>;

fn trim(mut p: QPoly) -> QPoly {
    while p.last().map_or(false, |c| c.is_zero()) {
        p.pop();
    }
    p
}

fn to_qpoly(p: &IPoly) -> QPoly {
    p.coeffs().iter().map(|c| Rat::from_integer(c.clone())).collect()
}

fn from_qpoly(p: &QPoly) -> IPoly {
    // clear denominators
    let mut den = BigInt::one();
    for c in p {
        den = den.lcm(c.denom());
    }
    IPoly::new(
        p.iter()
            .map(|c| c.numer() * (&den / c.denom()))
            .collect(),
    )
}

fn qpoly_divrem(num: &QPoly, den: &QPoly) -> (QPoly, QPoly) {
    assert!(!den.is_empty(), "division by zero polynomial");
    let mut rem = num.clone();
    let dlead = den.last().unwrap().clone();
    let ddeg = den.len() - 1;
    let mut quo: QPoly = vec![Rat::zero(); num.len().saturating_sub(ddeg)];
    while rem.len() > ddeg || (rem.len() == den.len() && !rem.is_empty()) {
        if rem.len() < den.len() {
            break;
        }
        let shift = rem.len() - den.len();
        let factor = rem.last().unwrap() / &dlead;
        quo[shift] = factor.clone();
        for (i, dc) in den.iter().enumerate() {
            let v = rem[shift + i].clone() - &factor * dc;
            rem[shift + i] = v;
        }
        rem = trim(rem);
    }
    (trim(quo), trim(rem))
}

/// gcd of integer polynomials, returned primitive with positive leading
/// coefficient.
pub fn ipoly_gcd(a: &IPoly, b: &IPoly) -> IPoly {
    // primitive remainder sequence: renormalizing every step keeps the
    // coefficient growth polynomial instead of doubly exponential
    let mut x = a.primitive();
    let mut y = b.primitive();
    while !y.is_zero() {
        let (_, r) = qpoly_divrem(&to_qpoly(&x), &to_qpoly(&y));
        x = y;
        y = from_qpoly(&r).primitive();
    }
    x.primitive()
}

// ---- Sturm sequences ----

/// Sturm chain of the squarefree part of p.
fn sturm_chain(p: &IPoly) -> Vec<IPoly> {
    let p = p.squarefree();
    let mut chain = vec![p.clone(), p.derivative()];
    loop {
        let len = chain.len();
        if chain[len - 1].is_zero() {
            chain.pop();
            break;
        }
        let (_, r) = qpoly_divrem(&to_qpoly(&chain[len - 2]), &to_qpoly(&chain[len - 1]));
        if r.is_empty() {
            break;
        }
        chain.push(from_qpoly(&r).neg().primitive_signed());
    }
    chain
}

impl IPoly {
    /// Content removal that preserves the sign of the leading coefficient.
    fn primitive_signed(&self) -> IPoly {
        if self.is_zero() {
            return IPoly::zero();
        }
        let c = self.content();
        IPoly::new(self.coeffs.iter().map(|a| a / &c).collect())
    }
}

fn variations(signs: impl Iterator<Item = i32>) -> usize {
    let mut count = 0;
    let mut last = 0;
    for s in signs {
        if s == 0 {
            continue;
        }
        if last != 0 && s != last {
            count += 1;
        }
        last = s;
    }
    count
}

fn sign_at_neg_inf(p: &IPoly) -> i32 {
    match p.degree() {
        None => 0,
        Some(d) => {
            let s = if p.leading().unwrap().is_negative() { -1 } else { 1 };
            if d % 2 == 0 {
                s
            } else {
                -s
            }
        }
    }
}

fn sign_at_pos_inf(p: &IPoly) -> i32 {
    match p.leading() {
        None => 0,
        Some(l) => {
            if l.is_negative() {
                -1
            } else {
                1
            }
        }
    }
}

/// Number of distinct real roots of p in the half-open interval (a, b].
pub fn count_roots_halfopen(p: &IPoly, a: &Rat, b: &Rat) -> usize {
    let chain = sturm_chain(p);
    let va = variations(chain.iter().map(|q| q.sign_at(a)));
    let vb = variations(chain.iter().map(|q| q.sign_at(b)));
    va - vb.min(va)
}

/// Number of distinct real roots of p on all of R.
pub fn count_real_roots(p: &IPoly) -> usize {
    let chain = sturm_chain(p);
    let vn = variations(chain.iter().map(sign_at_neg_inf));
    let vp = variations(chain.iter().map(sign_at_pos_inf));
    vn - vp.min(vn)
}

/// Cauchy bound: all real roots lie in (-M, M).
pub fn root_bound(p: &IPoly) -> Rat {
    let lead = p.leading().expect("root bound of zero polynomial").abs();
    let mut m = Rat::zero();
    for c in p.coeffs() {
        let r = Rat::new(c.abs(), lead.clone());
        if r > m {
            m = r;
        }
    }
    m + rat_int(1)
}

/// Isolates the distinct real roots of a nonzero polynomial: returns
/// disjoint open intervals (lo, hi), each containing exactly one real
/// root, with neither endpoint a root, ordered left to right.
pub fn isolate_real_roots(p: &IPoly) -> Result<Vec<(Rat, Rat)>, Error> {
    if p.is_zero() {
        return Err(Error::InvalidArgument(
            "cannot isolate roots of the zero polynomial".into(),
        ));
    }
    let p = p.squarefree();
    if p.degree() == Some(0) {
        return Ok(vec![]);
    }
    let m = root_bound(&p);
    let mut out = Vec::new();
    // (-M, M) has nonroot endpoints by the Cauchy bound
    isolate_rec(&p, &-m.clone(), &m, &mut out);
    out.sort_by(|x, y| x.0.cmp(&y.0));
    debug_assert_eq!(out.len(), count_real_roots(&p));
    Ok(out)
}

fn isolate_rec(p: &IPoly, a: &Rat, b: &Rat, out: &mut Vec<(Rat, Rat)>) {
    let count = count_roots_halfopen(p, a, b);
    if count == 0 {
        return;
    }
    if count == 1 {
        out.push((a.clone(), b.clone()));
        return;
    }
    let mut mid = (a + b) / rat_int(2);
    // nudge off a root so subinterval endpoints stay sign-definite
    while p.sign_at(&mid) == 0 {
        mid = (a + &mid) / rat_int(2);
    }
    isolate_rec(p, a, &mid, out);
    isolate_rec(p, &mid, b, out);
}

/// Shrinks an isolating interval for the unique root of p inside it
/// until its width is at most `width`. Endpoints stay nonroots.
pub fn refine_root(p: &IPoly, lo: &Rat, hi: &Rat, width: &Rat) -> (Rat, Rat) {
    let mut lo = lo.clone();
    let mut hi = hi.clone();
    let slo = p.sign_at(&lo);
    debug_assert!(slo != 0 && p.sign_at(&hi) != 0 && slo != p.sign_at(&hi));
    while &(&hi - &lo) > width {
        let mut mid = (&lo + &hi) / rat_int(2);
        let mut smid = p.sign_at(&mid);
        if smid == 0 {
            // root is exactly mid; pick a nearby nonroot split
            mid = (&lo + &mid) / rat_int(2);
            smid = p.sign_at(&mid);
        }
        if smid == p.sign_at(&lo) {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    (lo, hi)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::rat;

    #[test]
    fn eval_and_derivative() {
        let p = IPoly::from_i64(&[1, -3, 2]); // 2t^2 - 3t + 1
        assert_eq!(p.eval(&rat_int(1)), rat_int(0));
        assert_eq!(p.eval(&rat(1, 2)), rat_int(0));
        assert_eq!(p.derivative(), IPoly::from_i64(&[-3, 4]));
    }

    #[test]
    fn isolate_sqrt2() {
        let p = IPoly::from_i64(&[-2, 0, 1]);
        let roots = isolate_real_roots(&p).unwrap();
        assert_eq!(roots.len(), 2);
        let (lo, hi) = refine_root(&p, &roots[1].0, &roots[1].1, &rat(1, 1000));
        assert!(lo < rat(1415, 1000) && hi > rat(1414, 1000));
    }

    #[test]
    fn isolate_no_real_roots() {
        let p = IPoly::from_i64(&[1, 0, 1]);
        assert!(isolate_real_roots(&p).unwrap().is_empty());
        assert_eq!(count_real_roots(&p), 0);
    }

    #[test]
    fn isolate_known_rational_roots() {
        // x(x-1)(2x-1)
        let p = IPoly::from_i64(&[0, 1, -3, 2]);
        let roots = isolate_real_roots(&p).unwrap();
        assert_eq!(roots.len(), 3);
        let targets = [rat_int(0), rat(1, 2), rat_int(1)];
        for ((lo, hi), t) in roots.iter().zip(targets.iter()) {
            assert!(lo < t && t < hi);
            assert_eq!(count_roots_halfopen(&p, lo, hi), 1);
        }
    }

    #[test]
    fn zero_poly_rejected() {
        assert!(isolate_real_roots(&IPoly::zero()).is_err());
    }

    #[test]
    fn gcd_and_squarefree() {
        let p = IPoly::from_i64(&[1, -2, 1]); // (x-1)^2
        assert_eq!(p.squarefree(), IPoly::from_i64(&[-1, 1]));
        let a = IPoly::from_i64(&[-1, 0, 1]);
        let b = IPoly::from_i64(&[-1, 1]);
        assert_eq!(ipoly_gcd(&a, &b), b);
    }
}

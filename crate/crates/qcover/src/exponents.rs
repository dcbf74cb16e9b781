//! Combinatorial exponent calculus: monomial counts, the intermediate
//! degree b, the exponent budget B, and the exponent epsilon = mneD/B.
//!
//! Everything here is exact big-integer arithmetic; asymptotic formulas
//! appear only in tests.

use num_bigint::{BigInt, BigUint};
use num_traits::{One, ToPrimitive, Zero};

use crate::error::Error;
use crate::rational::Rat;

/// Exponent vector alpha in N^n with |alpha| = sum of entries.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct MultiIndex {
    entries: Vec<u32>,
}

impl MultiIndex {
    pub fn new(entries: Vec<u32>) -> Self {
        MultiIndex { entries }
    }

    pub fn entries(&self) -> &[u32] {
        &self.entries
    }

    pub fn order(&self) -> u32 {
        self.entries.iter().sum()
    }
}

/// Binomial with the conventions binom(-1,-1) = 1 and binom(k,-1) = 0.
pub fn binomial(top: i64, bottom: i64) -> BigUint {
    if bottom == -1 {
        return if top == -1 {
            BigUint::one()
        } else {
            BigUint::zero()
        };
    }
    if bottom < 0 || top < 0 || bottom > top {
        return BigUint::zero();
    }
    let (top, bottom) = (top as u64, bottom as u64);
    let bottom = bottom.min(top - bottom);
    let mut acc = BigUint::one();
    for i in 0..bottom {
        acc = acc * BigUint::from(top - i) / BigUint::from(i + 1);
    }
    acc
}

/// D(n,e) = binom(e+n, n): number of alpha in N^n with |alpha| <= e.
pub fn dim_d(n: u32, e: u32) -> BigUint {
    binomial(e as i64 + n as i64, n as i64)
}

/// E(n,e) = binom(e+n-1, n-1): number of alpha in N^n with |alpha| = e.
pub fn dim_e(n: u32, e: u32) -> BigUint {
    binomial(e as i64 + n as i64 - 1, n as i64 - 1)
}

/// V(n,e) = sum_{i=0..e} i*E(n,i); equals n*D(n+1,e-1) for e >= 1.
pub fn vee_v(n: u32, e: u32) -> BigUint {
    let mut acc = BigUint::zero();
    for i in 0..=e {
        acc += BigUint::from(i) * dim_e(n, i);
    }
    acc
}

/// All alpha in N^n with |alpha| <= e in graded-lexicographic order:
/// by total degree ascending, ties broken by descending lexicographic
/// comparison of the exponent vectors. This ordering fixes matrix
/// column order for every determinant downstream.
pub fn monomials(n: u32, e: u32) -> Vec<MultiIndex> {
    let mut out = Vec::new();
    for deg in 0..=e {
        let mut prefix = Vec::with_capacity(n as usize);
        compositions(n, deg, &mut prefix, &mut out);
    }
    debug_assert_eq!(BigUint::from(out.len()), dim_d(n, e));
    out
}

fn compositions(slots: u32, total: u32, prefix: &mut Vec<u32>, out: &mut Vec<MultiIndex>) {
    if slots == 0 {
        if total == 0 {
            out.push(MultiIndex::new(prefix.clone()));
        }
        return;
    }
    if slots == 1 {
        prefix.push(total);
        out.push(MultiIndex::new(prefix.clone()));
        prefix.pop();
        return;
    }
    for first in (0..=total).rev() {
        prefix.push(first);
        compositions(slots - 1, total - first, prefix, out);
        prefix.pop();
    }
}

/// The unique b with D(m,b) <= D(n,e) < D(m,b+1), found by monotone
/// search (doubling then binary search) on D(m, .).
pub fn b_of(m: u32, n: u32, e: u32) -> u32 {
    assert!(m >= 1 && n >= 1 && e >= 1, "b_of needs m, n, e >= 1");
    let target = dim_d(n, e);
    // find hi with D(m, hi) > target
    let mut hi: u32 = 1;
    while dim_d(m, hi) <= target {
        hi *= 2;
    }
    let mut lo: u32 = 0;
    // invariant: D(m, lo) <= target < D(m, hi)
    while hi - lo > 1 {
        let mid = lo + (hi - lo) / 2;
        if dim_d(m, mid) <= target {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    lo
}

/// The full (m,n,e) record: dimensions, degree split, exponent budget,
/// epsilon = mneD/B, and the determinant-bound constant K.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ExponentProfile {
    pub m: u32,
    pub n: u32,
    pub e: u32,
    pub d: BigUint,
    pub b: u32,
    pub k: u32,
    pub big_b: BigUint,
    pub epsilon: Rat,
    pub bound_k: Rat,
}

impl ExponentProfile {
    /// neD as a big integer, the height exponent in the denominator bound.
    pub fn ned(&self) -> BigUint {
        BigUint::from(self.n) * BigUint::from(self.e) * &self.d
    }
}

/// Builds the profile for m < n, e >= 1. `exact_j` selects the exact
/// occupancy count for #J inside K (available for D <= 12) versus the
/// always-valid (b+2)^D upper bound.
pub fn profile(m: u32, n: u32, e: u32, exact_j: bool) -> Result<ExponentProfile, Error> {
    if m == 0 || e == 0 {
        return Err(Error::InvalidArgument("profile needs m >= 1, e >= 1".into()));
    }
    if m >= n {
        return Err(Error::InvalidArgument(format!(
            "profile needs m < n (epsilon -> 0 only then); got m={m}, n={n}"
        )));
    }
    let d = dim_d(n, e);
    let b = b_of(m, n, e);
    let k = b + 1;
    let big_b = vee_v(m, b) + BigUint::from(k) * (&d - dim_d(m, b));
    let mned = BigUint::from(m) * BigUint::from(n) * BigUint::from(e) * &d;
    let epsilon = Rat::new(BigInt::from(mned), BigInt::from(big_b.clone()));
    let bound_k = crate::cover::bound_constant_k(m, n, e, exact_j)?;
    Ok(ExponentProfile {
        m,
        n,
        e,
        d,
        b,
        k,
        big_b,
        epsilon,
        bound_k,
    })
}

/// f64 view of a big natural, for test-side asymptotics only.
pub fn to_f64(x: &BigUint) -> f64 {
    x.to_f64().unwrap_or(f64::INFINITY)
}

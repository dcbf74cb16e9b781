//! Bounded-height enumeration of rationals and rational points, exact
//! membership filtering, and the lambda projection.

use std::sync::Arc;

use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use crate::algnum::AlgElem;
use crate::error::Error;
use crate::mpoly::MPoly;
use crate::rational::{QPoint, Rat};

/// Every rational of height exactly h, ordered by absolute numerator
/// ascending, positive sign before negative.
fn rationals_of_height(h: u64) -> Vec<Rat> {
    let mut out = Vec::new();
    if h == 1 {
        return vec![Rat::zero(), Rat::one(), -Rat::one()];
    }
    let mut frames: Vec<(u64, u64)> = Vec::new();
    // |p| < h, q = h
    for p in 0..h {
        if p.gcd(&h) == 1 {
            frames.push((p, h));
        }
    }
    // |p| = h, q < h
    for q in 1..h {
        if h.gcd(&q) == 1 {
            frames.push((h, q));
        }
    }
    frames.sort_by_key(|&(p, _)| p);
    for (p, q) in frames {
        let r = Rat::new(BigInt::from(p), BigInt::from(q));
        out.push(r.clone());
        out.push(-r);
    }
    out
}

/// All rationals q with H(q) <= T, each exactly once, ordered by
/// increasing height, then by absolute numerator, positive before
/// negative. Restartable pull-based stream.
pub fn rationals_up_to(t: u64) -> impl Iterator<Item = Rat> {
    (1..=t).flat_map(rationals_of_height)
}

/// Exact, total membership test on rational points.
#[derive(Clone)]
pub enum MembershipPredicate {
    /// Conjunction of exact equations p = 0 and strict inequalities
    /// p < 0 over integer-coefficient polynomials in n variables.
    PolySystem {
        n: usize,
        equations: Vec<MPoly>,
        strict_negative: Vec<MPoly>,
    },
    /// The power-graph set {(a,b,c) : 1 < a,b < 2, c = a^b}; membership
    /// of rational points decided entirely in exact arithmetic.
    PowerGraph,
    /// Caller-supplied exact test.
    Custom {
        n: usize,
        test: Arc<dyn Fn(&QPoint) -> bool + Send + Sync>,
    },
}

impl MembershipPredicate {
    pub fn arity(&self) -> usize {
        match self {
            MembershipPredicate::PolySystem { n, .. } => *n,
            MembershipPredicate::PowerGraph => 3,
            MembershipPredicate::Custom { n, .. } => *n,
        }
    }

    pub fn accepts(&self, p: &QPoint) -> bool {
        if p.arity() != self.arity() {
            return false;
        }
        match self {
            MembershipPredicate::PolySystem { equations, strict_negative, .. } => {
                equations.iter().all(|f| f.eval(p.coords()).is_zero())
                    && strict_negative.iter().all(|f| f.eval(p.coords()).is_negative())
            }
            MembershipPredicate::PowerGraph => power_graph_member(p),
            MembershipPredicate::Custom { test, .. } => test(p),
        }
    }
}

/// Membership in {(a,b,c): 1 < a,b < 2, c = a^b} for a rational point:
/// with b = p/q in lowest terms this reduces to "a is an exact q-th
/// power u^q/v^q and c = u^p/v^p", decided by integer root extraction.
fn power_graph_member(pt: &QPoint) -> bool {
    let [a, b, c] = [&pt.coords()[0], &pt.coords()[1], &pt.coords()[2]];
    let one = Rat::one();
    let two = &one + &one;
    if !(a > &one && a < &two && b > &one && b < &two) {
        return false;
    }
    let p = b.numer().to_biguint().unwrap();
    let q = b.denom().to_biguint().unwrap();
    let (Ok(p), Ok(q)) = (u32::try_from(&p), u32::try_from(&q)) else {
        return false;
    };
    let num = a.numer().to_biguint().unwrap();
    let den = a.denom().to_biguint().unwrap();
    let u = num.nth_root(q);
    let v = den.nth_root(q);
    if u.pow(q) != num || v.pow(q) != den {
        return false;
    }
    let expected = Rat::new(BigInt::from(u.pow(p)), BigInt::from(v.pow(p)));
    c == &expected
}

/// Exactly the points of Q^n with height <= T satisfying the
/// predicate, in lexicographic order of the per-coordinate enumeration
/// order. Deterministic and reproducible.
pub fn set_points(pred: &MembershipPredicate, t: u64) -> Result<Vec<QPoint>, Error> {
    if t == 0 {
        return Err(Error::InvalidArgument("height bound must be >= 1".into()));
    }
    let n = pred.arity();
    let axis: Vec<Rat> = rationals_up_to(t).collect();
    let mut out = Vec::new();
    let mut idx = vec![0usize; n];
    if n == 0 {
        let p = QPoint::new(vec![]);
        if pred.accepts(&p) {
            out.push(p);
        }
        return Ok(out);
    }
    loop {
        let p = QPoint::new(idx.iter().map(|&i| axis[i].clone()).collect());
        if pred.accepts(&p) {
            out.push(p);
        }
        let mut i = n;
        loop {
            if i == 0 {
                return Ok(out);
            }
            i -= 1;
            idx[i] += 1;
            if idx[i] < axis.len() {
                break;
            }
            idx[i] = 0;
        }
    }
}

/// All rational points of the power graph with height <= T, found by
/// structured search: b = p/q in lowest terms with 1 < b < 2, a ranges
/// over exact q-th powers in (1, 2), c = a^{p/q} computed as an exact
/// power. Every returned point has rational b.
pub fn power_curve_points(t: u64) -> Vec<QPoint> {
    let mut out = Vec::new();
    let one = Rat::one();
    let two = &one + &one;
    // H(b) = p since p > q; so p <= t
    for q in 2..=64u32 {
        for p in q + 1..2 * q {
            if u64::from(p) > t {
                break;
            }
            if p.gcd(&q) != 1 {
                continue;
            }
            // a = (u/v)^q in (1,2) with H(a) = u^q <= t and H(c) = u^p <= t
            let mut u = 2u64;
            loop {
                let uq = match u.checked_pow(q) {
                    Some(x) if x <= t => x,
                    _ => break,
                };
                match u.checked_pow(p) {
                    Some(x) if x <= t => x,
                    _ => {
                        u += 1;
                        continue;
                    }
                };
                for v in 1..u {
                    if u.gcd(&v) != 1 {
                        continue;
                    }
                    let vq = v.pow(q);
                    if !(vq < uq && uq < 2 * vq) {
                        continue;
                    }
                    let a = Rat::new(BigInt::from(uq), BigInt::from(vq));
                    let b = Rat::new(BigInt::from(p), BigInt::from(q));
                    let c = Rat::new(BigInt::from(u.pow(p)), BigInt::from(v.pow(p)));
                    debug_assert!(a > one && a < two && b > one && b < two);
                    let pt = QPoint::new(vec![a, b, c]);
                    if pt.height() <= &BigUint::from(t) {
                        out.push(pt);
                    }
                }
                u += 1;
            }
        }
    }
    out.sort_by(|x, y| x.height().cmp(y.height()).then_with(|| {
        x.coords()[1].cmp(&y.coords()[1]).then(x.coords()[0].cmp(&y.coords()[0]))
    }));
    out
}

/// pi(lambda, a_1, ..., a_n) = (lambda . a_1, ..., lambda . a_n) for a
/// rational lambda-tuple; exact dot products.
pub fn project_lambda_rational(lambda: &[Rat], a: &[Vec<Rat>]) -> Result<QPoint, Error> {
    let mut coords = Vec::with_capacity(a.len());
    for v in a {
        if v.len() != lambda.len() {
            return Err(Error::ArityMismatch { expected: lambda.len(), got: v.len() });
        }
        coords.push(lambda.iter().zip(v).map(|(l, x)| l * x).sum());
    }
    Ok(QPoint::new(coords))
}

/// Number-field-exact projection for an algebraic lambda-tuple over a
/// common minimal polynomial; mixed incompatible coordinates rejected.
pub fn project_lambda_algebraic(lambda: &[AlgElem], a: &[Vec<Rat>]) -> Result<Vec<AlgElem>, Error> {
    if lambda.is_empty() {
        return Err(Error::InvalidArgument("empty lambda".into()));
    }
    for l in lambda {
        if !lambda[0].is_compatible(l) {
            return Err(Error::InvalidArgument(
                "mixed incompatible algebraic coordinates".into(),
            ));
        }
    }
    let mut out = Vec::with_capacity(a.len());
    for v in a {
        if v.len() != lambda.len() {
            return Err(Error::ArityMismatch { expected: lambda.len(), got: v.len() });
        }
        let mut acc = lambda[0].scale(&v[0]);
        for (l, x) in lambda.iter().zip(v).skip(1) {
            acc = acc.add(&l.scale(x))?;
        }
        out.push(acc);
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algnum::AlgNumber;
    use crate::poly::IPoly;
    use crate::rational::{height_rat, rat, rat_int};
    use std::collections::HashSet;

    #[test]
    fn rational_counts() {
        assert_eq!(rationals_up_to(1).count(), 3);
        assert_eq!(rationals_up_to(2).count(), 7);
        assert_eq!(rationals_up_to(3).count(), 15);
        assert_eq!(rationals_up_to(4).count(), 23);
    }

    #[test]
    fn rationals_no_duplicates_and_bounded() {
        for t in 1..=50u64 {
            let all: Vec<Rat> = rationals_up_to(t).collect();
            let set: HashSet<Rat> = all.iter().cloned().collect();
            assert_eq!(all.len(), set.len(), "duplicates at T={t}");
            assert!(all.iter().all(|q| height_rat(q) <= BigUint::from(t)));
            // brute-force coprime-pair oracle
            let mut count = 0u64;
            for b in 1..=t as i64 {
                for a in -(t as i64)..=t as i64 {
                    if num_integer::gcd(a, b) == 1 && a.unsigned_abs().max(b as u64) <= t {
                        count += 1;
                    }
                }
            }
            assert_eq!(all.len() as u64, count, "count mismatch at T={t}");
        }
    }

    #[test]
    fn unit_circle_points() {
        // x^2 + y^2 - 1 = 0, T = 5: 12 points including (3/5, 4/5)
        let x = MPoly::var(2, 0);
        let y = MPoly::var(2, 1);
        let circle = x
            .mul(&x)
            .add(&y.mul(&y))
            .sub(&MPoly::constant(2, 1.into()));
        let pred = MembershipPredicate::PolySystem {
            n: 2,
            equations: vec![circle],
            strict_negative: vec![],
        };
        let pts = set_points(&pred, 5).unwrap();
        assert_eq!(pts.len(), 12);
        assert!(pts.contains(&QPoint::new(vec![rat(3, 5), rat(4, 5)])));
    }

    #[test]
    fn parabola_points() {
        let x = MPoly::var(2, 0);
        let y = MPoly::var(2, 1);
        let par = y.sub(&x.mul(&x));
        let pred = MembershipPredicate::PolySystem {
            n: 2,
            equations: vec![par],
            strict_negative: vec![],
        };
        let pts = set_points(&pred, 3).unwrap();
        let expect: HashSet<QPoint> = [
            QPoint::from_i64(&[0, 0]),
            QPoint::from_i64(&[1, 1]),
            QPoint::from_i64(&[-1, 1]),
        ]
        .into_iter()
        .collect();
        assert_eq!(pts.iter().cloned().collect::<HashSet<_>>(), expect);
    }

    #[test]
    fn set_points_equals_filtered_product() {
        // oracle equivalence for n = 2, small T
        let x = MPoly::var(2, 0);
        let y = MPoly::var(2, 1);
        let curve = y.mul(&y).sub(&x.mul(&x).mul(&x)); // y^2 = x^3
        let pred = MembershipPredicate::PolySystem {
            n: 2,
            equations: vec![curve],
            strict_negative: vec![],
        };
        for t in [1u64, 5, 10, 20] {
            let fast = set_points(&pred, t).unwrap();
            let axis: Vec<Rat> = rationals_up_to(t).collect();
            let mut brute = Vec::new();
            for a in &axis {
                for b in &axis {
                    let p = QPoint::new(vec![a.clone(), b.clone()]);
                    if pred.accepts(&p) {
                        brute.push(p);
                    }
                }
            }
            assert_eq!(fast, brute);
        }
    }

    #[test]
    fn power_curve_examples() {
        assert!(power_curve_points(10).is_empty());
        let pts = power_curve_points(125);
        let target = QPoint::new(vec![rat(25, 16), rat(3, 2), rat(125, 64)]);
        assert!(pts.contains(&target));
        for p in &pts {
            // b rational by construction; verify membership exactly
            assert!(MembershipPredicate::PowerGraph.accepts(p));
        }
    }

    #[test]
    fn power_curve_matches_set_points_filter() {
        for t in [10u64, 130] {
            let direct: HashSet<QPoint> = power_curve_points(t).into_iter().collect();
            // brute force is far too slow at T = 130 over all of Q(T)^3;
            // instead verify every direct point and spot-check absence
            for p in &direct {
                assert!(MembershipPredicate::PowerGraph.accepts(p));
                assert!(p.height() <= &BigUint::from(t));
            }
            if t == 10 {
                assert!(direct.is_empty());
            }
        }
    }

    #[test]
    fn projection_examples() {
        let p = project_lambda_rational(
            &[rat_int(1), rat_int(1)],
            &[vec![rat(1, 2), rat(1, 3)]],
        )
        .unwrap();
        assert_eq!(p.coords(), &[rat(5, 6)]);
        let p = project_lambda_rational(
            &[rat_int(1), rat_int(0)],
            &[vec![rat_int(4), rat_int(7)], vec![rat_int(5), rat_int(9)]],
        )
        .unwrap();
        assert_eq!(p.coords(), &[rat_int(4), rat_int(5)]);
    }

    #[test]
    fn projection_algebraic() {
        let sqrt2 = AlgNumber::new(IPoly::from_i64(&[-2, 0, 1]), rat_int(1), rat_int(2)).unwrap();
        let lambda = vec![
            AlgElem::from_rational(&sqrt2, rat_int(1)),
            AlgElem::generator(&sqrt2),
        ];
        let out = project_lambda_algebraic(&lambda, &[vec![rat_int(1), rat_int(1)]]).unwrap();
        // 1 + sqrt2; check (1 + sqrt2)^2 = 3 + 2 sqrt2
        assert_eq!(out[0].coeffs(), &[rat_int(1), rat_int(1)]);
        let sq = out[0].mul(&out[0]).unwrap();
        assert_eq!(sq.coeffs(), &[rat_int(3), rat_int(2)]);
    }
}

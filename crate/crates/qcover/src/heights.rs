//! Multiplicative heights: the basic height on Q and Q^n, the height
//! relative to a lambda-tuple, and the degree-d polynomial height on
//! real algebraic numbers.

use num_bigint::{BigInt, BigUint};
use num_traits::{One, Zero};

use crate::algnum::{power_in_basis, AlgNumber};
use crate::enumerate::rationals_up_to;
use crate::error::Error;
use crate::linalg::{kernel_basis, solve_square, QMatrix};
use crate::rational::{height_rat, QPoint, Rat};

pub use crate::rational::height_rat as height_of_rational;

/// H(a) = max over coordinate heights; 0 for the empty point by the
/// max-of-empty convention.
pub fn height_point(a: &QPoint) -> BigUint {
    a.height().clone()
}

fn height_vec(v: &[Rat]) -> BigUint {
    v.iter().map(height_rat).max().unwrap_or_else(BigUint::zero)
}

/// Q-linear relations declared to hold among the entries of a
/// lambda-tuple. In independent mode the relation list is empty and
/// representations are unique.
///
/// Trust boundary: when the lambda values are irrational the caller's
/// relation vectors cannot be checked here and are taken on trust; use
/// [`LambdaSpec::with_rational_lambda`] to have them verified exactly.
#[derive(Debug, Clone)]
pub struct LambdaSpec {
    d: usize,
    relations: Vec<Vec<Rat>>,
}

impl LambdaSpec {
    pub fn independent(d: usize) -> Result<Self, Error> {
        if d == 0 {
            return Err(Error::InvalidArgument("lambda dimension must be >= 1".into()));
        }
        Ok(LambdaSpec { d, relations: vec![] })
    }

    pub fn dependent(d: usize, relations: Vec<Vec<Rat>>) -> Result<Self, Error> {
        if d == 0 {
            return Err(Error::InvalidArgument("lambda dimension must be >= 1".into()));
        }
        for r in &relations {
            if r.len() != d {
                return Err(Error::ArityMismatch { expected: d, got: r.len() });
            }
        }
        // relations must be linearly independent
        let rows = relations.len();
        if rows > 0 {
            let m = QMatrix::new(
                rows,
                d,
                relations.iter().flat_map(|r| r.iter().cloned()).collect(),
            );
            if crate::linalg::rank(&m) != rows {
                return Err(Error::InvalidArgument(
                    "relation vectors are linearly dependent".into(),
                ));
            }
        }
        Ok(LambdaSpec { d, relations })
    }

    /// Dependent-mode constructor that verifies r . lambda = 0 exactly
    /// for rational lambda tuples.
    pub fn with_rational_lambda(lambda: &[Rat], relations: Vec<Vec<Rat>>) -> Result<Self, Error> {
        for r in &relations {
            if r.len() != lambda.len() {
                return Err(Error::ArityMismatch { expected: lambda.len(), got: r.len() });
            }
            let dot: Rat = r.iter().zip(lambda).map(|(a, b)| a * b).sum();
            if !dot.is_zero() {
                return Err(Error::InvalidArgument(
                    "declared vector is not a relation of lambda".into(),
                ));
            }
        }
        LambdaSpec::dependent(lambda.len(), relations)
    }

    pub fn d(&self) -> usize {
        self.d
    }

    pub fn relations(&self) -> &[Vec<Rat>] {
        &self.relations
    }
}

/// H_lambda of a point presented by its coordinate vector q (so the
/// point is q . lambda). Independent mode returns H(q); dependent mode
/// returns the exact minimum of H(q + r) over the declared relation
/// space, with the minimizing witness.
pub fn height_lambda(q: &[Rat], spec: &LambdaSpec) -> Result<(BigUint, Vec<Rat>), Error> {
    if q.len() != spec.d {
        return Err(Error::ArityMismatch { expected: spec.d, got: q.len() });
    }
    if spec.relations.is_empty() {
        return Ok((height_vec(q).max(BigUint::one()), q.to_vec()));
    }
    min_height_in_affine_space(q, &spec.relations)
}

/// Exact minimum of H over the affine space particular + span(basis),
/// found by increasing target height h: for each h, pivot coordinates
/// range over all rationals of height <= h, the rest are solved
/// exactly, and the full vector is accepted iff every coordinate has
/// height <= h. Terminates at the incumbent H(particular).
fn min_height_in_affine_space(
    particular: &[Rat],
    basis: &[Vec<Rat>],
) -> Result<(BigUint, Vec<Rat>), Error> {
    let d = particular.len();
    let s = basis.len();
    let incumbent = height_vec(particular).max(BigUint::one());
    // pick s coordinates on which the basis matrix is invertible
    let pivot_rows = independent_rows(basis, d, s)?;
    let mut a = QMatrix::zero(s, s);
    for (i, &row) in pivot_rows.iter().enumerate() {
        for j in 0..s {
            *a.at_mut(i, j) = basis[j][row].clone();
        }
    }
    let mut h = BigUint::one();
    while h < incumbent {
        let t: u64 = (&h).try_into().map_err(|_| {
            Error::InvalidArgument("height bound too large for enumeration".into())
        })?;
        let candidates: Vec<Rat> = rationals_up_to(t).collect();
        let mut idx = vec![0usize; s];
        'outer: loop {
            // target values on pivot coordinates
            let rhs: Vec<Rat> = pivot_rows
                .iter()
                .enumerate()
                .map(|(i, &row)| &candidates[idx[i]] - &particular[row])
                .collect();
            if let Some(coeffs) = solve_square(&a, &rhs) {
                let mut v = particular.to_vec();
                for (j, c) in coeffs.iter().enumerate() {
                    for (row, slot) in v.iter_mut().enumerate() {
                        *slot += c * &basis[j][row];
                    }
                }
                if height_vec(&v).max(BigUint::one()) <= h {
                    return Ok((h, v));
                }
            }
            let mut i = 0;
            loop {
                if i == s {
                    break 'outer;
                }
                idx[i] += 1;
                if idx[i] < candidates.len() {
                    break;
                }
                idx[i] = 0;
                i += 1;
            }
        }
        h += BigUint::one();
    }
    Ok((incumbent, particular.to_vec()))
}

fn independent_rows(basis: &[Vec<Rat>], d: usize, s: usize) -> Result<Vec<usize>, Error> {
    // greedy: add rows while the rank grows
    let mut chosen: Vec<usize> = Vec::new();
    for row in 0..d {
        if chosen.len() == s {
            break;
        }
        let mut trial = chosen.clone();
        trial.push(row);
        let m = QMatrix::new(
            trial.len(),
            s,
            trial
                .iter()
                .flat_map(|&r| basis.iter().map(move |b| b[r].clone()))
                .collect(),
        );
        if crate::linalg::rank(&m) == trial.len() {
            chosen.push(row);
        }
    }
    if chosen.len() != s {
        return Err(Error::InvalidArgument("basis vectors are linearly dependent".into()));
    }
    Ok(chosen)
}

/// The degree-d polynomial height of a real algebraic number: the
/// minimal H(xi) over monic degree-d integer relations
/// alpha^d + xi_1 alpha^{d-1} + ... + xi_d = 0 with xi in Q^d, or None
/// (the infinity marker) when [Q(alpha):Q] > d.
pub fn height_poly_d(alpha: &AlgNumber, d: usize) -> Result<Option<BigUint>, Error> {
    if d == 0 {
        return Err(Error::InvalidArgument("height_poly_d needs d >= 1".into()));
    }
    let g = alpha.degree();
    if g > d {
        return Ok(None);
    }
    // constraint in the power basis of Q(alpha):
    // sum_i xi_i alpha^{d-i} = -alpha^d, a g x d rational system
    let powers: Vec<Vec<Rat>> = (0..=d).map(|j| power_in_basis(alpha, j)).collect();
    let mut m = QMatrix::zero(g, d);
    for i in 0..d {
        for row in 0..g {
            *m.at_mut(row, i) = powers[d - 1 - i][row].clone();
        }
    }
    let rhs: Vec<Rat> = powers[d].iter().map(|c| -c.clone()).collect();
    // particular solution: free xi_1..xi_{d-g} = 0, solve the last g
    // columns (powers alpha^{g-1}, ..., alpha^0 form a basis)
    let mut tail = QMatrix::zero(g, g);
    for i in 0..g {
        for row in 0..g {
            *tail.at_mut(row, i) = m.at(row, d - g + i).clone();
        }
    }
    let tail_sol = solve_square(&tail, &rhs)
        .ok_or_else(|| Error::InvalidArgument("power basis solve failed".into()))?;
    let mut particular = vec![Rat::zero(); d];
    particular[d - g..].clone_from_slice(&tail_sol);
    let kernel: Vec<Vec<Rat>> = kernel_basis(&m)
        .into_iter()
        .map(|v| v.into_iter().map(|c: BigInt| Rat::from_integer(c)).collect())
        .collect();
    let (h, _witness) = if kernel.is_empty() {
        (height_vec(&particular).max(BigUint::one()), particular)
    } else {
        min_height_in_affine_space(&particular, &kernel)?
    };
    Ok(Some(h))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::poly::IPoly;
    use crate::rational::{rat, rat_int};
    use rand::{Rng, SeedableRng};

    fn u(x: u32) -> BigUint {
        BigUint::from(x)
    }

    #[test]
    fn basic_height_properties() {
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(5);
        for _ in 0..1000 {
            let q = rat(rng.gen_range(-50..=50), rng.gen_range(1..=50));
            assert_eq!(height_rat(&q), height_rat(&-q.clone()));
            if !q.is_zero() {
                assert_eq!(height_rat(&q.clone().recip()), height_rat(&q));
            }
            if q != rat_int(0) && q != rat_int(1) && q != rat_int(-1) {
                assert!(height_rat(&q) >= u(2));
            }
        }
    }

    #[test]
    fn lambda_independent_is_point_height() {
        let spec = LambdaSpec::independent(2).unwrap();
        let (h, w) = height_lambda(&[rat(1, 2), rat_int(3)], &spec).unwrap();
        assert_eq!(h, u(3));
        assert_eq!(w, vec![rat(1, 2), rat_int(3)]);
        let (h0, _) = height_lambda(&[rat_int(0), rat_int(0)], &spec).unwrap();
        assert_eq!(h0, u(1));
    }

    #[test]
    fn lambda_dependent_example() {
        // lambda = (1, 1/2) with relation (1, -2); a = 1/2 via q = (1/2, 0)
        let spec = LambdaSpec::with_rational_lambda(
            &[rat_int(1), rat(1, 2)],
            vec![vec![rat_int(1), rat_int(-2)]],
        )
        .unwrap();
        let (h, w) = height_lambda(&[rat(1, 2), rat_int(0)], &spec).unwrap();
        assert_eq!(h, u(1));
        assert_eq!(w, vec![rat_int(0), rat_int(1)]);
    }

    #[test]
    fn lambda_rejects_non_relation() {
        assert!(LambdaSpec::with_rational_lambda(
            &[rat_int(1), rat(1, 2)],
            vec![vec![rat_int(1), rat_int(1)]],
        )
        .is_err());
    }

    #[test]
    fn poly_height_rational_d1() {
        let a = AlgNumber::from_rational(&rat(2, 3));
        assert_eq!(height_poly_d(&a, 1).unwrap(), Some(u(3)));
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(9);
        for _ in 0..50 {
            let q = rat(rng.gen_range(-30..=30), rng.gen_range(1..=30));
            let a = AlgNumber::from_rational(&q);
            assert_eq!(height_poly_d(&a, 1).unwrap(), Some(height_rat(&q)));
        }
    }

    #[test]
    fn poly_height_sqrt2() {
        let a = AlgNumber::new(IPoly::from_i64(&[-2, 0, 1]), rat_int(1), rat_int(2)).unwrap();
        assert_eq!(height_poly_d(&a, 2).unwrap(), Some(u(2)));
        assert_eq!(height_poly_d(&a, 1).unwrap(), None);
    }
}

//! Fraction-free exact linear algebra over Q: determinants, kernel
//! bases, monomial-evaluation matrices, hypersurface fitting, the
//! denominator bound, and the determinant-of-sum test oracle.

use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_traits::{One, Pow, Signed, Zero};

use crate::error::Error;
use crate::exponents::{dim_d, monomials, MultiIndex};
use crate::rational::{QPoint, Rat};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct QMatrix {
    rows: usize,
    cols: usize,
    entries: Vec<Rat>, // row-major
}

impl QMatrix {
    pub fn new(rows: usize, cols: usize, entries: Vec<Rat>) -> Self {
        assert_eq!(entries.len(), rows * cols, "entry count mismatch");
        QMatrix { rows, cols, entries }
    }

    pub fn zero(rows: usize, cols: usize) -> Self {
        QMatrix::new(rows, cols, vec![Rat::zero(); rows * cols])
    }

    pub fn identity(n: usize) -> Self {
        let mut m = QMatrix::zero(n, n);
        for i in 0..n {
            *m.at_mut(i, i) = Rat::one();
        }
        m
    }

    pub fn from_i64(rows: &[&[i64]]) -> Self {
        let r = rows.len();
        let c = rows.first().map_or(0, |row| row.len());
        let entries = rows
            .iter()
            .flat_map(|row| row.iter().map(|&v| Rat::from_integer(BigInt::from(v))))
            .collect();
        QMatrix::new(r, c, entries)
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn at(&self, i: usize, j: usize) -> &Rat {
        &self.entries[i * self.cols + j]
    }

    pub fn at_mut(&mut self, i: usize, j: usize) -> &mut Rat {
        &mut self.entries[i * self.cols + j]
    }

    pub fn add(&self, other: &QMatrix) -> Result<QMatrix, Error> {
        if self.rows != other.rows || self.cols != other.cols {
            return Err(Error::Shape("matrix addition shape mismatch".into()));
        }
        Ok(QMatrix::new(
            self.rows,
            self.cols,
            self.entries
                .iter()
                .zip(&other.entries)
                .map(|(a, b)| a + b)
                .collect(),
        ))
    }
}

/// Exact determinant: lift to an integer matrix by column-wise common
/// denominators, run fraction-free Bareiss elimination, then divide the
/// integer determinant back by the product of the column scalings.
pub fn det(m: &QMatrix) -> Result<Rat, Error> {
    if m.rows != m.cols {
        return Err(Error::Shape("determinant of non-square matrix".into()));
    }
    let n = m.rows;
    if n == 0 {
        return Ok(Rat::one());
    }
    let mut scale = BigInt::one();
    let mut a: Vec<Vec<BigInt>> = vec![vec![BigInt::zero(); n]; n];
    for j in 0..n {
        let mut den = BigInt::one();
        for i in 0..n {
            den = den.lcm(m.at(i, j).denom());
        }
        for i in 0..n {
            let q = m.at(i, j);
            a[i][j] = q.numer() * (&den / q.denom());
        }
        scale *= den;
    }
    let d = bareiss_det(&mut a);
    Ok(Rat::new(d, scale))
}

fn bareiss_det(a: &mut Vec<Vec<BigInt>>) -> BigInt {
    let n = a.len();
    let mut sign = 1i32;
    let mut prev = BigInt::one();
    for k in 0..n {
        if a[k][k].is_zero() {
            match (k + 1..n).find(|&i| !a[i][k].is_zero()) {
                Some(i) => {
                    a.swap(k, i);
                    sign = -sign;
                }
                None => return BigInt::zero(),
            }
        }
        for i in k + 1..n {
            for j in k + 1..n {
                let num = &a[i][j] * &a[k][k] - &a[i][k] * &a[k][j];
                a[i][j] = num / &prev; // exact division in Bareiss
            }
            a[i][k] = BigInt::zero();
        }
        prev = a[k][k].clone();
    }
    let d = a[n - 1][n - 1].clone();
    if sign < 0 {
        -d
    } else {
        d
    }
}

/// Reduced row echelon form; returns the pivot column of each pivot row.
fn rref(m: &QMatrix) -> (QMatrix, Vec<usize>) {
    let mut a = m.clone();
    let mut pivots = Vec::new();
    let mut row = 0;
    for col in 0..a.cols {
        if row >= a.rows {
            break;
        }
        let Some(p) = (row..a.rows).find(|&i| !a.at(i, col).is_zero()) else {
            continue;
        };
        if p != row {
            for j in 0..a.cols {
                let tmp = a.at(p, j).clone();
                *a.at_mut(p, j) = a.at(row, j).clone();
                *a.at_mut(row, j) = tmp;
            }
        }
        let inv = a.at(row, col).clone().recip();
        for j in col..a.cols {
            let v = a.at(row, j) * &inv;
            *a.at_mut(row, j) = v;
        }
        for i in 0..a.rows {
            if i == row || a.at(i, col).is_zero() {
                continue;
            }
            let factor = a.at(i, col).clone();
            for j in col..a.cols {
                let v = a.at(i, j) - &factor * a.at(row, j);
                *a.at_mut(i, j) = v;
            }
        }
        pivots.push(col);
        row += 1;
    }
    (a, pivots)
}

pub fn rank(m: &QMatrix) -> usize {
    rref(m).1.len()
}

/// Solves A x = b for square invertible A; None when A is singular.
pub fn solve_square(a: &QMatrix, b: &[Rat]) -> Option<Vec<Rat>> {
    let n = a.rows();
    assert_eq!(a.cols(), n);
    assert_eq!(b.len(), n);
    let mut aug = QMatrix::zero(n, n + 1);
    for i in 0..n {
        for j in 0..n {
            *aug.at_mut(i, j) = a.at(i, j).clone();
        }
        *aug.at_mut(i, n) = b[i].clone();
    }
    let (r, pivots) = rref(&aug);
    if pivots.len() != n || pivots.iter().enumerate().any(|(i, &p)| p != i) {
        return None;
    }
    Some((0..n).map(|i| r.at(i, n).clone()).collect())
}

/// Basis of the right kernel as primitive integer vectors with positive
/// first nonzero entry. Pivots are chosen left to right; free variables
/// are set to unit vectors in index order, so the output is
/// deterministic. Empty iff the matrix has full column rank.
pub fn kernel_basis(m: &QMatrix) -> Vec<Vec<BigInt>> {
    let (r, pivots) = rref(m);
    let mut is_pivot = vec![false; m.cols];
    for &p in &pivots {
        is_pivot[p] = true;
    }
    let mut basis = Vec::new();
    for free in (0..m.cols).filter(|&j| !is_pivot[j]) {
        let mut v = vec![Rat::zero(); m.cols];
        v[free] = Rat::one();
        for (row, &p) in pivots.iter().enumerate() {
            v[p] = -r.at(row, free).clone();
        }
        basis.push(primitive_vector(&v));
    }
    basis
}

/// Clears denominators, divides by the content, and flips sign so the
/// first nonzero entry is positive.
pub fn primitive_vector(v: &[Rat]) -> Vec<BigInt> {
    let mut den = BigInt::one();
    for q in v {
        den = den.lcm(q.denom());
    }
    let ints: Vec<BigInt> = v.iter().map(|q| q.numer() * (&den / q.denom())).collect();
    let mut content = BigInt::zero();
    for c in &ints {
        content = content.gcd(c);
    }
    if content.is_zero() {
        return ints;
    }
    if let Some(first) = ints.iter().find(|c| !c.is_zero()) {
        if first.is_negative() {
            content = -content;
        }
    }
    ints.iter().map(|c| c / &content).collect()
}

/// One row per point, one column per monomial of monomials(n, e) in
/// graded-lex order, entry a^alpha.
pub fn monomial_matrix(points: &[QPoint], n: u32, e: u32) -> Result<QMatrix, Error> {
    let mons = monomials(n, e);
    let mut entries = Vec::with_capacity(points.len() * mons.len());
    for p in points {
        if p.arity() != n as usize {
            return Err(Error::ArityMismatch { expected: n as usize, got: p.arity() });
        }
        for alpha in &mons {
            entries.push(eval_monomial(p, alpha));
        }
    }
    Ok(QMatrix::new(points.len(), mons.len(), entries))
}

fn eval_monomial(p: &QPoint, alpha: &MultiIndex) -> Rat {
    let mut acc = Rat::one();
    for (x, &k) in p.coords().iter().zip(alpha.entries()) {
        for _ in 0..k {
            acc *= x;
        }
    }
    acc
}

/// True iff all of S lies on a single hypersurface of degree <= e,
/// i.e. the monomial-evaluation matrix has rank < D(n,e).
pub fn on_common_hypersurface(points: &[QPoint], n: u32, e: u32) -> Result<bool, Error> {
    let m = monomial_matrix(points, n, e)?;
    let d: usize = dim_d(n, e).try_into().unwrap();
    Ok(rank(&m) < d)
}

/// Zero set of a nonzero integer polynomial of degree <= e in n
/// variables, coefficients indexed by monomials(n, e) in canonical form
/// (primitive, first nonzero coefficient positive).
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Hypersurface {
    pub n: u32,
    pub e: u32,
    pub coeffs: Vec<BigInt>,
}

impl Hypersurface {
    pub fn new(n: u32, e: u32, coeffs: Vec<BigInt>) -> Result<Self, Error> {
        let d: usize = dim_d(n, e).try_into().unwrap();
        if coeffs.len() != d {
            return Err(Error::Shape(format!(
                "hypersurface needs {d} coefficients, got {}",
                coeffs.len()
            )));
        }
        if coeffs.iter().all(|c| c.is_zero()) {
            return Err(Error::InvalidArgument("zero polynomial is not a hypersurface".into()));
        }
        let canon = primitive_vector(
            &coeffs
                .iter()
                .map(|c| Rat::from_integer(c.clone()))
                .collect::<Vec<_>>(),
        );
        Ok(Hypersurface { n, e, coeffs: canon })
    }

    pub fn eval(&self, p: &QPoint) -> Result<Rat, Error> {
        if p.arity() != self.n as usize {
            return Err(Error::ArityMismatch { expected: self.n as usize, got: p.arity() });
        }
        let mons = monomials(self.n, self.e);
        let mut acc = Rat::zero();
        for (c, alpha) in self.coeffs.iter().zip(&mons) {
            acc += Rat::from_integer(c.clone()) * eval_monomial(p, alpha);
        }
        Ok(acc)
    }

    pub fn vanishes_on(&self, p: &QPoint) -> Result<bool, Error> {
        Ok(self.eval(p)?.is_zero())
    }

    /// Line format "n e; c_0 c_1 ... c_{D-1}"; bit-exact certificate
    /// contract.
    pub fn serialize(&self) -> String {
        let coeffs: Vec<String> = self.coeffs.iter().map(|c| c.to_string()).collect();
        format!("{} {}; {}", self.n, self.e, coeffs.join(" "))
    }

    pub fn parse(line: &str) -> Result<Self, Error> {
        let (head, tail) = line
            .split_once(';')
            .ok_or_else(|| Error::Parse(format!("missing ';' in hypersurface line {line:?}")))?;
        let head: Vec<&str> = head.split_whitespace().collect();
        if head.len() != 2 {
            return Err(Error::Parse(format!("bad hypersurface header in {line:?}")));
        }
        let n: u32 = head[0]
            .parse()
            .map_err(|_| Error::Parse(format!("bad n in {line:?}")))?;
        let e: u32 = head[1]
            .parse()
            .map_err(|_| Error::Parse(format!("bad e in {line:?}")))?;
        let coeffs: Result<Vec<BigInt>, _> = tail.split_whitespace().map(str::parse).collect();
        let coeffs = coeffs.map_err(|_| Error::Parse(format!("bad coefficient in {line:?}")))?;
        Hypersurface::new(n, e, coeffs)
    }
}

/// Canonical hypersurface through every point of S, or None iff the
/// monomial matrix has full column rank D(n,e). Selection rule: first
/// kernel basis vector in the documented echelon order.
pub fn fit_hypersurface(points: &[QPoint], n: u32, e: u32) -> Result<Option<Hypersurface>, Error> {
    let m = monomial_matrix(points, n, e)?;
    let basis = kernel_basis(&m);
    let Some(first) = basis.into_iter().next() else {
        return Ok(None);
    };
    let h = Hypersurface::new(n, e, first)?;
    for p in points {
        debug_assert!(h.vanishes_on(p)?, "fitted hypersurface must vanish on input");
    }
    Ok(Some(h))
}

/// The denominator-bound certificate: s = prod over points and
/// coordinates of denominator^e, with the checks s <= t^{neD} and
/// s * det(monomial matrix) an exact integer.
pub fn denominator_bound(
    points: &[QPoint],
    n: u32,
    e: u32,
    t: &BigUint,
) -> Result<(BigUint, bool), Error> {
    let d_usize: usize = dim_d(n, e).try_into().unwrap();
    if points.len() != d_usize {
        return Err(Error::Shape(format!(
            "need exactly D(n,e) = {d_usize} points, got {}",
            points.len()
        )));
    }
    for p in points {
        if p.height() > t {
            return Err(Error::InvalidArgument(format!(
                "point height {} exceeds t = {t}",
                p.height()
            )));
        }
    }
    let mut s = BigUint::one();
    for p in points {
        for c in p.coords() {
            s *= c.denom().to_biguint().unwrap().pow(e);
        }
    }
    let ned = BigUint::from(n) * BigUint::from(e) * dim_d(n, e);
    let bound = big_pow(t, &ned);
    let dv = det(&monomial_matrix(points, n, e)?)?;
    let scaled = dv * Rat::from_integer(BigInt::from(s.clone()));
    let check = s <= bound && scaled.denom().is_one();
    Ok((s, check))
}

fn big_pow(base: &BigUint, exp: &BigUint) -> BigUint {
    // exponents here stay small (neD at desk scale)
    let e: u64 = exp.try_into().expect("exponent too large");
    let mut acc = BigUint::one();
    for _ in 0..e {
        acc *= base;
    }
    acc
}

/// Determinant of a sum of matrices via the restricted column-selection
/// expansion: sums det over tuples j with at most rank_caps[j]
/// occurrences of each summand index. Test oracle, exponential in N;
/// guarded to N <= 8.
pub fn det_of_sum(summands: &[QMatrix], rank_caps: &[usize]) -> Result<Rat, Error> {
    if summands.is_empty() {
        return Err(Error::Shape("need at least one summand".into()));
    }
    if summands.len() != rank_caps.len() {
        return Err(Error::Shape("one rank cap per summand required".into()));
    }
    let n = summands[0].rows();
    if n > 8 {
        return Err(Error::InvalidArgument("det_of_sum guarded to N <= 8".into()));
    }
    for m in summands {
        if m.rows() != n || m.cols() != n {
            return Err(Error::Shape("summands must share a square shape".into()));
        }
    }
    for (m, &cap) in summands.iter().zip(rank_caps) {
        if rank(m) > cap {
            return Err(Error::InvalidArgument(format!(
                "rank cap {cap} below true rank {}",
                rank(m)
            )));
        }
    }
    let r = summands.len();
    let mut total = Rat::zero();
    let mut selection = vec![0usize; n];
    loop {
        let mut occupancy = vec![0usize; r];
        for &j in &selection {
            occupancy[j] += 1;
        }
        if occupancy.iter().zip(rank_caps).all(|(&o, &cap)| o <= cap) {
            let mut mixed = QMatrix::zero(n, n);
            for (col, &j) in selection.iter().enumerate() {
                for row in 0..n {
                    *mixed.at_mut(row, col) = summands[j].at(row, col).clone();
                }
            }
            total += det(&mixed)?;
        }
        // advance the mixed-radix selection counter
        let mut i = 0;
        loop {
            if i == n {
                return Ok(total);
            }
            selection[i] += 1;
            if selection[i] < r {
                break;
            }
            selection[i] = 0;
            i += 1;
        }
    }
}

/// Height of a rational point list capped check helper used by tests.
pub fn max_height(points: &[QPoint]) -> BigUint {
    points
        .iter()
        .map(|p| p.height().clone())
        .max()
        .unwrap_or_else(BigUint::zero)
}

/// Naive cofactor-expansion determinant; independent oracle for tests.
pub fn det_cofactor(m: &QMatrix) -> Result<Rat, Error> {
    if m.rows() != m.cols() {
        return Err(Error::Shape("determinant of non-square matrix".into()));
    }
    fn go(m: &QMatrix, rows: &[usize], cols: &[usize]) -> Rat {
        if rows.is_empty() {
            return Rat::one();
        }
        let mut acc = Rat::zero();
        let r = rows[0];
        for (k, &c) in cols.iter().enumerate() {
            if m.at(r, c).is_zero() {
                continue;
            }
            let sub_rows = &rows[1..];
            let sub_cols: Vec<usize> = cols
                .iter()
                .enumerate()
                .filter(|&(i, _)| i != k)
                .map(|(_, &cc)| cc)
                .collect();
            let minor = go(m, sub_rows, &sub_cols);
            let term = m.at(r, c) * &minor;
            if k % 2 == 0 {
                acc += term;
            } else {
                acc -= term;
            }
        }
        acc
    }
    let idx: Vec<usize> = (0..m.rows()).collect();
    Ok(go(m, &idx, &idx))
}

pub fn height_le(p: &QPoint, t: &BigUint) -> bool {
    p.height() <= t
}

pub fn biguint(v: u64) -> BigUint {
    BigUint::from(v)
}

pub fn rat_from_biguint(v: &BigUint) -> Rat {
    Rat::from_integer(BigInt::from(v.clone()))
}

pub use crate::rational::height_rat as coord_height;

#[allow(unused_imports)]
use crate::rational::rat_int;

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::{rat, rat_int};
    use rand::{Rng, SeedableRng};

    #[test]
    fn det_examples() {
        assert_eq!(det(&QMatrix::identity(4)).unwrap(), rat_int(1));
        assert_eq!(
            det(&QMatrix::from_i64(&[&[1, 2], &[3, 4]])).unwrap(),
            rat_int(-2)
        );
        // 3x3 Hilbert matrix
        let mut h = QMatrix::zero(3, 3);
        for i in 0..3 {
            for j in 0..3 {
                *h.at_mut(i, j) = rat(1, (i + j + 1) as i64);
            }
        }
        assert_eq!(det(&h).unwrap(), rat(1, 2160));
        assert_eq!(det_cofactor(&h).unwrap(), rat(1, 2160));
        assert!(det(&QMatrix::zero(2, 3)).is_err());
    }

    #[test]
    fn det_matches_cofactor_oracle() {
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(7);
        for _ in 0..200 {
            let n = rng.gen_range(1..=5);
            let mut m = QMatrix::zero(n, n);
            for i in 0..n {
                for j in 0..n {
                    *m.at_mut(i, j) = rat(rng.gen_range(-9..=9), rng.gen_range(1..=9));
                }
            }
            assert_eq!(det(&m).unwrap(), det_cofactor(&m).unwrap());
        }
    }

    #[test]
    fn kernel_examples() {
        assert!(kernel_basis(&QMatrix::identity(3)).is_empty());
        let k = kernel_basis(&QMatrix::from_i64(&[&[1, 1]]));
        assert_eq!(k, vec![vec![BigInt::from(1), BigInt::from(-1)]]);
    }

    #[test]
    fn parabola_kernel_contains_vanishing_polynomial() {
        // 5 points on y = x^2, e = 2 in graded-lex monomials
        // [1, x, y, x^2, xy, y^2]: kernel must contain y - x^2.
        let points: Vec<QPoint> = [0i64, 1, -1, 2, 3]
            .iter()
            .map(|&x| QPoint::new(vec![rat_int(x), rat_int(x * x)]))
            .collect();
        let m = monomial_matrix(&points, 2, 2).unwrap();
        assert_eq!(m.rows(), 5);
        assert_eq!(m.cols(), 6);
        let target = Hypersurface::new(
            2,
            2,
            vec![
                BigInt::from(0),
                BigInt::from(0),
                BigInt::from(1),
                BigInt::from(-1),
                BigInt::from(0),
                BigInt::from(0),
            ],
        )
        .unwrap();
        let basis = kernel_basis(&m);
        let found = basis
            .iter()
            .any(|v| Hypersurface::new(2, 2, v.clone()).unwrap() == target);
        assert!(found, "kernel must contain the y - x^2 coefficient vector");
    }

    #[test]
    fn monomial_matrix_row() {
        let p = QPoint::from_i64(&[2]);
        let m = monomial_matrix(&[p], 1, 2).unwrap();
        assert_eq!(
            (0..3).map(|j| m.at(0, j).clone()).collect::<Vec<_>>(),
            vec![rat_int(1), rat_int(2), rat_int(4)]
        );
    }

    #[test]
    fn common_hypersurface_parabola() {
        let points: Vec<QPoint> = (0i64..6)
            .map(|x| QPoint::new(vec![rat_int(x), rat_int(x * x)]))
            .collect();
        assert!(on_common_hypersurface(&points, 2, 2).unwrap());
        let m = monomial_matrix(&points, 2, 2).unwrap();
        assert_eq!(det(&m).unwrap(), rat_int(0));
        // fewer than D points: always true by dimension count
        assert!(on_common_hypersurface(&points[..3], 2, 2).unwrap());
    }

    #[test]
    fn fit_hypersurface_parabola_heights() {
        // all parabola points of height <= 10 inside the arc
        let mut points = Vec::new();
        for q in 1i64..=3 {
            for p in -3i64..=3 {
                if num_integer::gcd(p, q) == 1 {
                    let x = rat(p, q);
                    let y = &x * &x;
                    let pt = QPoint::new(vec![x, y]);
                    if pt.height() <= &BigUint::from(10u32) {
                        points.push(pt);
                    }
                }
            }
        }
        assert!(points.len() >= 6);
        let h = fit_hypersurface(&points, 2, 2).unwrap().unwrap();
        assert_eq!(
            h.coeffs,
            vec![
                BigInt::from(0),
                BigInt::from(0),
                BigInt::from(1),
                BigInt::from(-1),
                BigInt::from(0),
                BigInt::from(0)
            ]
        );
        // full-rank set: no hypersurface
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(3);
        let generic: Vec<QPoint> = (0..6)
            .map(|_| {
                QPoint::new(vec![
                    rat(rng.gen_range(-20..=20), rng.gen_range(1..=7)),
                    rat(rng.gen_range(-20..=20), rng.gen_range(1..=7)),
                ])
            })
            .collect();
        if rank(&monomial_matrix(&generic, 2, 2).unwrap()) == 6 {
            assert!(fit_hypersurface(&generic, 2, 2).unwrap().is_none());
        }
    }

    #[test]
    fn denominator_bound_examples() {
        // integer points: s = 1
        let pts: Vec<QPoint> = (1i64..=3).map(|x| QPoint::from_i64(&[x, x + 1])).collect();
        let d: usize = dim_d(2, 1).try_into().unwrap();
        assert_eq!(pts.len(), d);
        let (s, ok) = denominator_bound(&pts, 2, 1, &BigUint::from(4u32)).unwrap();
        assert_eq!(s, BigUint::from(1u32));
        assert!(ok);
        // D(1,1) = 2 points 1/2, 1/3 at e = 1
        let pts = vec![QPoint::new(vec![rat(1, 2)]), QPoint::new(vec![rat(1, 3)])];
        let (s, ok) = denominator_bound(&pts, 1, 1, &BigUint::from(3u32)).unwrap();
        assert_eq!(s, BigUint::from(6u32));
        assert!(ok);
        // height violation
        let pts2 = vec![QPoint::new(vec![rat(1, 7)]), QPoint::new(vec![rat(1, 3)])];
        assert!(denominator_bound(&pts2, 1, 1, &BigUint::from(3u32)).is_err());
    }

    #[test]
    fn det_of_sum_examples() {
        let m = QMatrix::from_i64(&[&[1, 2], &[3, 4]]);
        assert_eq!(det_of_sum(&[m.clone()], &[2]).unwrap(), rat_int(-2));
        // two rank-1 summands
        let a = QMatrix::from_i64(&[&[1, 2], &[2, 4]]);
        let b = QMatrix::from_i64(&[&[1, 1], &[3, 3]]);
        let s = a.add(&b).unwrap();
        assert_eq!(det_of_sum(&[a.clone(), b.clone()], &[1, 1]).unwrap(), det(&s).unwrap());
        // cap below true rank rejected
        assert!(det_of_sum(&[a, b], &[0, 1]).is_err());
    }

    #[test]
    fn rank_bound_for_function_space_samples() {
        // rows = homogeneous degree-j monomials in m=2 vars evaluated at
        // sample points; rank is at most E(2, j) = j + 1.
        use crate::exponents::dim_e;
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(11);
        for j in 0..4u32 {
            let mons: Vec<MultiIndex> = monomials(2, j)
                .into_iter()
                .filter(|a| a.order() == j)
                .collect();
            let n = 6;
            let points: Vec<QPoint> = (0..n)
                .map(|_| {
                    QPoint::new(vec![
                        rat(rng.gen_range(-5..=5), rng.gen_range(1..=4)),
                        rat(rng.gen_range(-5..=5), rng.gen_range(1..=4)),
                    ])
                })
                .collect();
            // N x N matrix (f_mu(a_nu)) padded with zero rows beyond the space
            let mut m = QMatrix::zero(n, n);
            for (mu, alpha) in mons.iter().enumerate() {
                for (nu, p) in points.iter().enumerate() {
                    *m.at_mut(mu, nu) = eval_monomial(p, alpha);
                }
            }
            let e: usize = dim_e(2, j).try_into().unwrap();
            assert!(rank(&m) <= e, "rank exceeded dim at j={j}");
        }
    }

    #[test]
    fn hypersurface_serialization_roundtrip() {
        let h = Hypersurface::new(
            2,
            2,
            vec![
                BigInt::from(0),
                BigInt::from(0),
                BigInt::from(-2),
                BigInt::from(2),
                BigInt::from(0),
                BigInt::from(0),
            ],
        )
        .unwrap();
        // canonicalized: primitive with positive first nonzero coefficient
        assert_eq!(h.serialize(), "2 2; 0 0 1 -1 0 0");
        assert_eq!(Hypersurface::parse(&h.serialize()).unwrap(), h);
        assert!(Hypersurface::parse("2 2; 0 0").is_err());
    }
}

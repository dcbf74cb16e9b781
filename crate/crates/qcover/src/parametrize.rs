//! Constructive parametrizations: coordinate inversion, exactly
//! representable univariate rational-function pieces, the chain-rule
//! coefficient recurrence, affine rescaling to unit derivative bounds,
//! and univariate reparametrization with certified bound sweeps.

use std::sync::OnceLock;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use crate::error::Error;
use crate::interval::RatInterval;
use crate::mpoly::MPoly;
use crate::poly::{count_roots_halfopen, refine_root, IPoly};
use crate::rational::{rat, rat_int, QPoint, Rat};

pub use crate::poly::isolate_real_roots;

/// f_I: inverts the coordinates listed in `invert` (0-based), leaving
/// the rest unchanged. Height is preserved whenever |a_i| > 1 exactly
/// on the inverted coordinates and |a_i| <= 1 on the rest.
pub fn invert_coordinates(a: &QPoint, invert: &[usize]) -> Result<QPoint, Error> {
    let mut coords = a.coords().to_vec();
    for &i in invert {
        if i >= coords.len() {
            return Err(Error::InvalidArgument(format!(
                "coordinate index {i} out of range for arity {}",
                coords.len()
            )));
        }
        if coords[i].is_zero() {
            return Err(Error::InvalidArgument(format!(
                "cannot invert zero coordinate {i}"
            )));
        }
        coords[i] = coords[i].clone().recip();
    }
    Ok(QPoint::new(coords))
}

/// A univariate rational function with integer coefficients on an open
/// rational interval, certified pole-free on the closed interval.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RatFunc1 {
    num: IPoly,
    den: IPoly,
    lo: Rat,
    hi: Rat,
}

impl RatFunc1 {
    pub fn new(num: IPoly, den: IPoly, lo: Rat, hi: Rat) -> Result<Self, Error> {
        if den.is_zero() {
            return Err(Error::InvalidArgument("zero denominator".into()));
        }
        if lo >= hi {
            return Err(Error::InvalidArgument("empty domain interval".into()));
        }
        if den.degree().unwrap() > 0 {
            if den.sign_at(&lo) == 0
                || den.sign_at(&hi) == 0
                || count_roots_halfopen(&den, &lo, &hi) != 0
            {
                return Err(Error::InvalidArgument(format!(
                    "denominator has a root in the closed domain [{lo}, {hi}]"
                )));
            }
        }
        Ok(RatFunc1 { num, den, lo, hi })
    }

    pub fn poly(num: IPoly, lo: Rat, hi: Rat) -> Self {
        RatFunc1::new(num, IPoly::from_i64(&[1]), lo, hi).unwrap()
    }

    /// The affine function a + b t on (0,1).
    pub fn affine(a: &Rat, b: &Rat) -> Self {
        let s = a.denom().lcm(b.denom());
        let num = IPoly::new(vec![
            (a * Rat::from_integer(s.clone())).to_integer(),
            (b * Rat::from_integer(s.clone())).to_integer(),
        ]);
        RatFunc1::new(num, IPoly::new(vec![s]), Rat::zero(), Rat::one()).unwrap()
    }

    pub fn num(&self) -> &IPoly {
        &self.num
    }

    pub fn den(&self) -> &IPoly {
        &self.den
    }

    pub fn domain(&self) -> (&Rat, &Rat) {
        (&self.lo, &self.hi)
    }

    pub fn eval(&self, t: &Rat) -> Result<Rat, Error> {
        let d = self.den.eval(t);
        if d.is_zero() {
            return Err(Error::Pole);
        }
        Ok(self.num.eval(t) / d)
    }

    pub fn eval_interval(&self, t: &RatInterval) -> Result<RatInterval, Error> {
        self.num.eval_interval(t).div(&self.den.eval_interval(t))
    }

    /// Quotient-rule derivative on the same domain, reduced by the
    /// polynomial gcd so repeated differentiation keeps the denominator
    /// at q^{j+1} instead of doubling its degree every order.
    pub fn derivative(&self) -> RatFunc1 {
        let num = self.num.derivative().mul(&self.den).sub(&self.num.mul(&self.den.derivative()));
        let den = self.den.mul(&self.den);
        let (num, den) = reduce_fraction(num, den);
        RatFunc1 { num, den, lo: self.lo.clone(), hi: self.hi.clone() }
    }

    /// f(a + b t) on (0,1); pole-freeness follows when a + b·(0,1) lies
    /// in the original pole-free domain and is re-verified exactly.
    pub fn compose_affine(&self, a: &Rat, b: &Rat) -> Result<RatFunc1, Error> {
        let (pn, sn) = affine_substitute(&self.num, a, b);
        let (pd, sd) = affine_substitute(&self.den, a, b);
        let (num, den) = reduce_content(pn.scale(&sd), pd.scale(&sn));
        RatFunc1::new(num, den, Rat::zero(), Rat::one())
    }

    /// f(t^2) on (0,1).
    pub fn square_substitute(&self) -> Result<RatFunc1, Error> {
        let sq = IPoly::from_i64(&[0, 0, 1]);
        RatFunc1::new(self.num.compose(&sq), self.den.compose(&sq), Rat::zero(), Rat::one())
    }
}

/// Cancels the polynomial gcd and the common integer content of a
/// num/den pair.
fn reduce_fraction(num: IPoly, den: IPoly) -> (IPoly, IPoly) {
    if num.is_zero() {
        return (num, IPoly::from_i64(&[1]));
    }
    let g = crate::poly::ipoly_gcd(&num, &den);
    if g.degree() >= Some(1) {
        if let (Some(n2), Some(d2)) = (ipoly_div_exact(&num, &g), ipoly_div_exact(&den, &g)) {
            return reduce_content(n2, d2);
        }
    }
    reduce_content(num, den)
}

/// Exact integer polynomial division p / g, or None if it leaves a
/// remainder or fractional coefficients.
fn ipoly_div_exact(p: &IPoly, g: &IPoly) -> Option<IPoly> {
    let gd = g.degree()?;
    let glead = g.leading()?.clone();
    let mut rem: Vec<BigInt> = p.coeffs().to_vec();
    if rem.len() < gd + 1 {
        return None;
    }
    let qlen = rem.len() - gd;
    let mut quo = vec![BigInt::zero(); qlen];
    for i in (0..qlen).rev() {
        let top = rem[i + gd].clone();
        if top.is_zero() {
            continue;
        }
        if !(&top % &glead).is_zero() {
            return None;
        }
        let c = &top / &glead;
        for (j, gc) in g.coeffs().iter().enumerate() {
            rem[i + j] -= &c * gc;
        }
        quo[i] = c;
    }
    if rem.iter().any(|c| !c.is_zero()) {
        return None;
    }
    Some(IPoly::new(quo))
}

fn reduce_content(num: IPoly, den: IPoly) -> (IPoly, IPoly) {
    if num.is_zero() {
        return (num, IPoly::from_i64(&[1]));
    }
    let g = num.content().gcd(&den.content());
    if g <= BigInt::one() {
        return (num, den);
    }
    let div = |p: &IPoly| IPoly::new(p.coeffs().iter().map(|c| c / &g).collect());
    (div(&num), div(&den))
}

/// p(a + b t) as (integer polynomial, positive integer denominator).
fn affine_substitute(p: &IPoly, a: &Rat, b: &Rat) -> (IPoly, BigInt) {
    let mut acc: Vec<Rat> = vec![Rat::zero()];
    for c in p.coeffs().iter().rev() {
        // acc <- acc * (a + b t) + c
        let mut next = vec![Rat::zero(); acc.len() + 1];
        for (i, v) in acc.iter().enumerate() {
            next[i] += v * a;
            next[i + 1] += v * b;
        }
        next[0] += Rat::from_integer(c.clone());
        acc = next;
    }
    let mut l = BigInt::one();
    for v in &acc {
        l = l.lcm(v.denom());
    }
    let coeffs: Vec<BigInt> = acc
        .iter()
        .map(|v| (v * Rat::from_integer(l.clone())).to_integer())
        .collect();
    (IPoly::new(coeffs), l.abs())
}

/// Full composition f(g(t)) as a rational function on g's domain.
/// Used as the symbolic oracle for the chain-rule recurrence; the
/// caller must pick f, g so the composite is pole-free there.
pub fn rf_compose(f: &RatFunc1, g: &RatFunc1) -> Result<RatFunc1, Error> {
    let m = f.num.degree().unwrap_or(0).max(f.den.degree().unwrap());
    let build = |p: &IPoly| -> IPoly {
        let mut acc = IPoly::zero();
        for (i, c) in p.coeffs().iter().enumerate() {
            let term = ipoly_pow(&g.num, i).mul(&ipoly_pow(&g.den, m - i));
            acc = acc.add(&term.scale(c));
        }
        acc
    };
    RatFunc1::new(build(&f.num), build(&f.den), g.lo.clone(), g.hi.clone())
}

fn ipoly_pow(p: &IPoly, k: usize) -> IPoly {
    let mut acc = IPoly::from_i64(&[1]);
    for _ in 0..k {
        acc = acc.mul(p);
    }
    acc
}

/// Derivative tower f, f', ..., f^(k).
pub fn derivative_tower(f: &RatFunc1, k: usize) -> Vec<RatFunc1> {
    let mut out = vec![f.clone()];
    for _ in 0..k {
        out.push(out.last().unwrap().derivative());
    }
    out
}

/// The chain-rule coefficient polynomials p_{1,k}, ..., p_{k,k} in the
/// variables x_1 = g', ..., x_k = g^(k), built by the recurrence
/// p_{i,k} = x_1 p_{i-1,k-1} + D(p_{i,k-1}) with D(p) = sum_j
/// dp/dx_j * x_{j+1}; the leading polynomial is p_{k,k} = x_1^k.
pub fn chain_rule_coeffs(k: usize) -> Vec<MPoly> {
    assert!(k >= 1);
    static CACHE: OnceLock<Vec<Vec<MPoly>>> = OnceLock::new();
    let cache = CACHE.get_or_init(|| (1..=8).map(build_chain_coeffs).collect());
    if k <= 8 {
        return cache[k - 1].clone();
    }
    build_chain_coeffs(k)
}

fn build_chain_coeffs(k: usize) -> Vec<MPoly> {
    // work in k variables at every level
    let x1 = MPoly::var(k, 0);
    let mut prev: Vec<MPoly> = vec![x1.clone()]; // level 1: p_{1,1} = x_1
    for level in 2..=k {
        let mut cur = Vec::with_capacity(level);
        for i in 1..=level {
            let carry = if i >= 2 && i - 2 < prev.len() {
                x1.mul(&prev[i - 2])
            } else {
                MPoly::zero(k)
            };
            let shifted = if i - 1 < prev.len() {
                let p = &prev[i - 1];
                let mut acc = MPoly::zero(k);
                for j in 0..k - 1 {
                    acc = acc.add(&p.partial(j).mul(&MPoly::var(k, j + 1)));
                }
                acc
            } else {
                MPoly::zero(k)
            };
            cur.push(carry.add(&shifted));
        }
        prev = cur;
    }
    prev
}

/// Exact value of (f o g)^(k) at t via the chain-rule recurrence.
pub fn compose_derivative(f: &RatFunc1, g: &RatFunc1, k: usize, t: &Rat) -> Result<Rat, Error> {
    let gt = g.eval(t)?;
    if k == 0 {
        return f.eval(&gt);
    }
    let ftow = derivative_tower(f, k);
    let gtow = derivative_tower(g, k);
    let gvals: Vec<Rat> = (1..=k).map(|j| gtow[j].eval(t)).collect::<Result<_, _>>()?;
    let ps = chain_rule_coeffs(k);
    let mut acc = Rat::zero();
    for i in 1..=k {
        acc += ftow[i].eval(&gt)? * ps[i - 1].eval(&gvals);
    }
    Ok(acc)
}

fn mpoly_eval_interval(p: &MPoly, x: &[RatInterval]) -> RatInterval {
    let mut acc = RatInterval::point(Rat::zero());
    for (e, c) in p.terms() {
        let mut term = RatInterval::point(Rat::from_integer(c.clone()));
        for (xi, &k) in x.iter().zip(e.iter()) {
            for _ in 0..k {
                term = term.mul(xi);
            }
        }
        acc = acc.add(&term);
    }
    acc
}

/// Certification method for a claimed derivative bound.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CertTag {
    Exact,
    IntervalVerified,
    Declared,
}

/// Sup-norm bounds per derivative order 0..=k with their method tag.
#[derive(Debug, Clone)]
pub struct Certification {
    pub bounds: Vec<Rat>,
    pub tag: CertTag,
}

/// An evaluable map (0,1)^m -> R^n, exact at rational arguments for
/// the rational variants and interval-certified for inverse pieces.
#[derive(Debug, Clone)]
pub enum MapExpr {
    /// m = 1 with a cached derivative tower per coordinate.
    Curve { comps: Vec<Vec<RatFunc1>> },
    /// polynomial map comps/denom on (0,1)^m.
    PolyMap { m: usize, comps: Vec<MPoly>, denom: BigInt },
    /// x -> base(offset_i + scale_i * x_i), the affine box translate
    /// with per-axis widths so the image stays inside (0,1)^m.
    Rescaled { base: Box<MapExpr>, offset: Vec<Rat>, scales: Vec<Rat> },
    /// t -> base(t^2), the square substitution.
    Squared { base: Box<MapExpr> },
    /// phi(t) = f^{-1}(b0 + (b1 - b0) t), evaluated by bisection with
    /// exact sign tests; f strictly monotone on [x_lo, x_hi].
    InverseArc { ftower: Vec<RatFunc1>, x_lo: Rat, x_hi: Rat, b0: Rat, b1: Rat },
    /// 0-dimensional piece.
    ConstantPoint { value: Vec<Rat> },
}

impl MapExpr {
    pub fn curve(comps: Vec<RatFunc1>, max_order: usize) -> MapExpr {
        MapExpr::Curve {
            comps: comps.iter().map(|f| derivative_tower(f, max_order)).collect(),
        }
    }

    pub fn m(&self) -> usize {
        match self {
            MapExpr::Curve { .. } | MapExpr::Squared { .. } | MapExpr::InverseArc { .. } => 1,
            MapExpr::PolyMap { m, .. } => *m,
            MapExpr::Rescaled { base, .. } => base.m(),
            MapExpr::ConstantPoint { .. } => 0,
        }
    }

    pub fn n(&self) -> usize {
        match self {
            MapExpr::Curve { comps } => comps.len(),
            MapExpr::PolyMap { comps, .. } => comps.len(),
            MapExpr::Rescaled { base, .. } | MapExpr::Squared { base } => base.n(),
            MapExpr::InverseArc { .. } => 1,
            MapExpr::ConstantPoint { value } => value.len(),
        }
    }

    pub fn eval(&self, x: &[Rat]) -> Result<Vec<Rat>, Error> {
        self.deriv(&vec![0; self.m()], x)
    }

    /// Exact derivative f^(alpha)(x); inverse pieces reject exact
    /// evaluation (their values are algebraic, not rational).
    pub fn deriv(&self, alpha: &[u32], x: &[Rat]) -> Result<Vec<Rat>, Error> {
        match self {
            MapExpr::Curve { comps } => {
                let j = alpha[0] as usize;
                comps
                    .iter()
                    .map(|tower| {
                        tower
                            .get(j)
                            .ok_or_else(|| {
                                Error::InvalidArgument(
                                    "derivative order exceeds precomputed tower".into(),
                                )
                            })
                            .and_then(|f| f.eval(&x[0]))
                    })
                    .collect()
            }
            MapExpr::PolyMap { comps, denom, .. } => Ok(comps
                .iter()
                .map(|p| {
                    let mut q = p.clone();
                    for (i, &a) in alpha.iter().enumerate() {
                        for _ in 0..a {
                            q = q.partial(i);
                        }
                    }
                    q.eval(x) / Rat::from_integer(denom.clone())
                })
                .collect()),
            MapExpr::Rescaled { base, offset, scales } => {
                let y: Vec<Rat> = offset
                    .iter()
                    .zip(scales)
                    .zip(x)
                    .map(|((o, s), v)| o + v * s)
                    .collect();
                let mut factor = Rat::one();
                for (s, &a) in scales.iter().zip(alpha) {
                    for _ in 0..a {
                        factor *= s;
                    }
                }
                Ok(base.deriv(alpha, &y)?.into_iter().map(|v| v * &factor).collect())
            }
            MapExpr::Squared { base } => {
                let j = alpha[0] as usize;
                let t2 = &x[0] * &x[0];
                if j == 0 {
                    return base.deriv(&[0], &[t2]);
                }
                // inner derivatives of t^2: (2t, 2, 0, ...)
                let mut gvals = vec![Rat::zero(); j];
                gvals[0] = rat_int(2) * &x[0];
                if j >= 2 {
                    gvals[1] = rat_int(2);
                }
                let ps = chain_rule_coeffs(j);
                let mut acc = vec![Rat::zero(); self.n()];
                for i in 1..=j {
                    let fi = base.deriv(&[i as u32], &[t2.clone()])?;
                    let w = ps[i - 1].eval(&gvals);
                    for (a, v) in acc.iter_mut().zip(fi) {
                        *a += v * &w;
                    }
                }
                Ok(acc)
            }
            MapExpr::InverseArc { .. } => Err(Error::InvalidArgument(
                "inverse pieces support only interval evaluation".into(),
            )),
            MapExpr::ConstantPoint { value } => {
                if alpha.iter().all(|&a| a == 0) {
                    Ok(value.clone())
                } else {
                    Ok(vec![Rat::zero(); value.len()])
                }
            }
        }
    }

    /// Certified interval enclosure of f^(alpha) over the box x.
    pub fn deriv_interval(&self, alpha: &[u32], x: &[RatInterval]) -> Result<Vec<RatInterval>, Error> {
        match self {
            MapExpr::Curve { comps } => {
                let j = alpha[0] as usize;
                comps
                    .iter()
                    .map(|tower| {
                        tower
                            .get(j)
                            .ok_or_else(|| {
                                Error::InvalidArgument(
                                    "derivative order exceeds precomputed tower".into(),
                                )
                            })
                            .and_then(|f| f.eval_interval(&x[0]))
                    })
                    .collect()
            }
            MapExpr::PolyMap { comps, denom, .. } => Ok(comps
                .iter()
                .map(|p| {
                    let mut q = p.clone();
                    for (i, &a) in alpha.iter().enumerate() {
                        for _ in 0..a {
                            q = q.partial(i);
                        }
                    }
                    mpoly_eval_interval(&q, x).scale(&Rat::from_integer(denom.clone()).recip())
                })
                .collect()),
            MapExpr::Rescaled { base, offset, scales } => {
                let y: Vec<RatInterval> = offset
                    .iter()
                    .zip(scales)
                    .zip(x)
                    .map(|((o, s), v)| v.scale(s).add(&RatInterval::point(o.clone())))
                    .collect();
                let mut factor = Rat::one();
                for (s, &a) in scales.iter().zip(alpha) {
                    for _ in 0..a {
                        factor *= s;
                    }
                }
                Ok(base
                    .deriv_interval(alpha, &y)?
                    .into_iter()
                    .map(|v| v.scale(&factor))
                    .collect())
            }
            MapExpr::Squared { base } => {
                let j = alpha[0] as usize;
                let t2 = x[0].mul(&x[0]);
                if j == 0 {
                    return base.deriv_interval(&[0], &[t2]);
                }
                let mut gvals = vec![RatInterval::point(Rat::zero()); j];
                gvals[0] = x[0].scale(&rat_int(2));
                if j >= 2 {
                    gvals[1] = RatInterval::point(rat_int(2));
                }
                let ps = chain_rule_coeffs(j);
                let mut acc = vec![RatInterval::point(Rat::zero()); self.n()];
                for i in 1..=j {
                    let fi = base.deriv_interval(&[i as u32], &[t2.clone()])?;
                    let w = mpoly_eval_interval(&ps[i - 1], &gvals);
                    for (a, v) in acc.iter_mut().zip(fi) {
                        *a = a.add(&v.mul(&w));
                    }
                }
                Ok(acc)
            }
            MapExpr::InverseArc { ftower, x_lo, x_hi, b0, b1 } => {
                let j = alpha[0] as usize;
                let s = b1 - b0;
                let y = x[0].scale(&s).add(&RatInterval::point(b0.clone()));
                let enc = inverse_bracket(&ftower[0], x_lo, x_hi, b0, b1, &y)?;
                if j == 0 {
                    return Ok(vec![enc]);
                }
                let fp = ftower[1].eval_interval(&enc)?;
                let d1 = RatInterval::point(s).div(&fp)?;
                let mut ds = vec![d1];
                for jj in 2..=j {
                    let ps = chain_rule_coeffs(jj);
                    let mut gvals = ds.clone();
                    gvals.resize(jj, RatInterval::point(Rat::zero()));
                    let mut acc = RatInterval::point(Rat::zero());
                    for i in 2..=jj {
                        let fi = ftower
                            .get(i)
                            .ok_or_else(|| {
                                Error::InvalidArgument(
                                    "derivative order exceeds precomputed tower".into(),
                                )
                            })?
                            .eval_interval(&enc)?;
                        acc = acc.add(&fi.mul(&mpoly_eval_interval(&ps[i - 1], &gvals)));
                    }
                    ds.push(acc.neg().div(&fp)?);
                }
                Ok(vec![ds[j - 1].clone()])
            }
            MapExpr::ConstantPoint { value } => {
                if alpha.iter().all(|&a| a == 0) {
                    Ok(value.iter().cloned().map(RatInterval::point).collect())
                } else {
                    Ok(vec![RatInterval::point(Rat::zero()); value.len()])
                }
            }
        }
    }

    /// All univariate derivative orders 0..=k at once, for maps with a
    /// single output coordinate. For inverse-function arcs the bisection
    /// bracket is computed once and shared across every order, which is
    /// substantially cheaper than k+1 independent `deriv_interval` calls.
    pub fn deriv_interval_upto(&self, k: u32, x: &RatInterval) -> Result<Vec<RatInterval>, Error> {
        if self.n() != 1 {
            return Err(Error::InvalidArgument(
                "deriv_interval_upto needs a single output coordinate".into(),
            ));
        }
        if let MapExpr::InverseArc { ftower, x_lo, x_hi, b0, b1 } = self {
            let s = b1 - b0;
            let y = x.scale(&s).add(&RatInterval::point(b0.clone()));
            let enc = inverse_bracket(&ftower[0], x_lo, x_hi, b0, b1, &y)?;
            let mut out = vec![enc.clone()];
            if k == 0 {
                return Ok(out);
            }
            let fp = ftower[1].eval_interval(&enc)?;
            let mut ds = vec![RatInterval::point(s).div(&fp)?];
            for jj in 2..=k as usize {
                let ps = chain_rule_coeffs(jj);
                let mut gvals = ds.clone();
                gvals.resize(jj, RatInterval::point(Rat::zero()));
                let mut acc = RatInterval::point(Rat::zero());
                for i in 2..=jj {
                    let fi = ftower
                        .get(i)
                        .ok_or_else(|| {
                            Error::InvalidArgument(
                                "derivative order exceeds precomputed tower".into(),
                            )
                        })?
                        .eval_interval(&enc)?;
                    acc = acc.add(&fi.mul(&mpoly_eval_interval(&ps[i - 1], &gvals)));
                }
                ds.push(acc.neg().div(&fp)?);
            }
            out.append(&mut ds);
            return Ok(out);
        }
        (0..=k)
            .map(|j| {
                self.deriv_interval(&[j], std::slice::from_ref(x))
                    .map(|v| v.into_iter().next().unwrap())
            })
            .collect()
    }
}

/// Enclosure of f^{-1}(Y) on [x_lo, x_hi] for monotone f, by bisection
/// with exact rational sign tests down to width 2^-40.
fn inverse_bracket(
    f: &RatFunc1,
    x_lo: &Rat,
    x_hi: &Rat,
    b0: &Rat,
    b1: &Rat,
    y: &RatInterval,
) -> Result<RatInterval, Error> {
    let (ylo, yhi) = if b0 <= b1 { (b0, b1) } else { (b1, b0) };
    let clamp = |v: Rat| -> Rat {
        if &v < ylo {
            ylo.clone()
        } else if &v > yhi {
            yhi.clone()
        } else {
            v
        }
    };
    let ya = clamp(y.lo.clone());
    let yb = clamp(y.hi.clone());
    let a = inverse_point(f, x_lo, x_hi, b0, b1, &ya)?;
    let b = inverse_point(f, x_lo, x_hi, b0, b1, &yb)?;
    Ok(a.hull(&b))
}

fn inverse_point(
    f: &RatFunc1,
    x_lo: &Rat,
    x_hi: &Rat,
    b0: &Rat,
    b1: &Rat,
    y: &Rat,
) -> Result<RatInterval, Error> {
    let increasing = b0 < b1;
    let width = (x_hi - x_lo) * rat(1, 1i64 << 40);
    let (mut lo, mut hi) = (x_lo.clone(), x_hi.clone());
    while &hi - &lo > width {
        let mid = (&lo + &hi) / rat_int(2);
        let v = f.eval(&mid)?;
        if v == *y {
            return Ok(RatInterval::point(mid));
        }
        if (v < *y) == increasing {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    Ok(RatInterval::new(lo, hi))
}

/// A certified map piece over a sub-box of the global parameter domain.
#[derive(Debug, Clone)]
pub struct Piece {
    pub map: MapExpr,
    /// the sub-box of the global domain this piece parametrizes; its
    /// local domain is always (0,1)^m (or a point for 0-dim pieces)
    pub global_box: Vec<(Rat, Rat)>,
    pub cert: Certification,
}

/// A strong parametrization: finitely many pieces (0,1)^m -> R^n with
/// all derivatives up to order k certified bounded by the per-order
/// bound certificates; m < n.
#[derive(Debug, Clone)]
pub struct StrongParam {
    pub m: usize,
    pub n: usize,
    pub k: u32,
    pub pieces: Vec<Piece>,
}

impl StrongParam {
    pub fn new(m: usize, n: usize, k: u32, pieces: Vec<Piece>) -> Result<Self, Error> {
        if m >= n {
            return Err(Error::InvalidArgument("strong parametrization needs m < n".into()));
        }
        for p in &pieces {
            if p.map.m() != m || p.map.n() != n {
                return Err(Error::Shape("piece dimensions disagree with parametrization".into()));
            }
            if p.cert.bounds.len() < (k as usize) + 1 {
                return Err(Error::Certification(
                    "piece lacks bound certificates up to the required order".into(),
                ));
            }
        }
        Ok(StrongParam { m, n, k, pieces })
    }

    /// True when every certified bound is at most 1 through order k.
    pub fn strongly_bounded(&self) -> bool {
        self.pieces.iter().all(|p| {
            p.cert.bounds[..=(self.k as usize)]
                .iter()
                .all(|b| *b <= Rat::one())
        })
    }

    /// Finds the lexicographically first piece whose closed global box
    /// contains the global parameter, with its local coordinates.
    pub fn locate(&self, global: &[Rat]) -> Option<(usize, Vec<Rat>)> {
        'pieces: for (i, p) in self.pieces.iter().enumerate() {
            if p.global_box.len() != global.len() {
                continue;
            }
            let mut local = Vec::with_capacity(global.len());
            for ((lo, hi), g) in p.global_box.iter().zip(global) {
                if g < lo || g > hi || lo >= hi {
                    continue 'pieces;
                }
                local.push((g - lo) / (hi - lo));
            }
            return Some((i, local));
        }
        None
    }
}

/// Interval-sweep configuration: cells are split until a bound is
/// decided or the depth limit is hit, then certification fails loudly.
#[derive(Debug, Clone, Copy)]
pub struct SweepConfig {
    /// initial uniform split: 2^this cells per axis
    pub init_splits_log2: u32,
    /// cells smaller than 2^-this are not refined further for sup
    /// estimation (they still split while undecided in bound checks)
    pub min_width_log2: u32,
    pub max_depth: u32,
}

impl Default for SweepConfig {
    fn default() -> Self {
        SweepConfig { init_splits_log2: 4, min_width_log2: 20, max_depth: 40 }
    }
}

fn initial_cells(m: usize, cfg: &SweepConfig) -> Vec<Vec<RatInterval>> {
    let parts = 1u64 << cfg.init_splits_log2;
    let axis: Vec<RatInterval> = (0..parts)
        .map(|i| {
            RatInterval::new(
                Rat::new(BigInt::from(i), BigInt::from(parts)),
                Rat::new(BigInt::from(i + 1), BigInt::from(parts)),
            )
        })
        .collect();
    let mut cells: Vec<Vec<RatInterval>> = vec![vec![]];
    for _ in 0..m {
        cells = cells
            .iter()
            .flat_map(|c| {
                axis.iter().map(move |a| {
                    let mut cc = c.clone();
                    cc.push(a.clone());
                    cc
                })
            })
            .collect();
    }
    cells
}

fn split_cell(cell: &[RatInterval]) -> Vec<Vec<RatInterval>> {
    // split along the widest axis
    let (widest, _) = cell
        .iter()
        .enumerate()
        .max_by(|(_, a), (_, b)| a.width().cmp(&b.width()))
        .unwrap();
    let (l, r) = cell[widest].split();
    [l, r]
        .into_iter()
        .map(|half| {
            let mut cc = cell.to_vec();
            cc[widest] = half;
            cc
        })
        .collect()
}

fn multi_indices_of_order(m: usize, j: u32) -> Vec<Vec<u32>> {
    if j == 0 {
        return vec![vec![0; m]];
    }
    crate::exponents::monomials(m as u32, j)
        .into_iter()
        .filter(|mi| mi.order() == j)
        .map(|mi| mi.entries().to_vec())
        .collect()
}

/// Rigorous upper bounds for sup |f^(alpha)| over (0,1)^m for each
/// derivative order 0..=k, by adaptive interval sweep. Evaluation
/// failures (poles, unbounded inverse derivatives) propagate as
/// certification errors once the depth budget is exhausted.
pub fn certified_sup(map: &MapExpr, k: u32, cfg: &SweepConfig) -> Result<Vec<Rat>, Error> {
    let m = map.m();
    if m == 0 {
        let vals = map.deriv(&[], &[])?;
        let v0 = vals.iter().map(|v| v.abs()).max().unwrap_or_else(Rat::zero);
        let mut out = vec![v0];
        out.resize((k as usize) + 1, Rat::zero());
        return Ok(out);
    }
    let min_width = rat(1, 1i64 << cfg.min_width_log2.min(62));
    let mut out = Vec::with_capacity(k as usize + 1);
    for j in 0..=k {
        let mut sup = Rat::zero();
        for alpha in multi_indices_of_order(m, j) {
            let mut stack: Vec<(Vec<RatInterval>, u32)> =
                initial_cells(m, cfg).into_iter().map(|c| (c, 0)).collect();
            while let Some((cell, depth)) = stack.pop() {
                match map.deriv_interval(&alpha, &cell) {
                    Ok(vals) => {
                        let mag = vals.iter().map(|v| v.mag()).max().unwrap();
                        if mag > sup {
                            let wide = cell.iter().any(|c| c.width() > min_width);
                            if wide && depth < cfg.max_depth && mag > &sup + &sup + Rat::one() {
                                // grossly above the running sup: refine
                                stack.extend(split_cell(&cell).into_iter().map(|c| (c, depth + 1)));
                            } else {
                                sup = mag;
                            }
                        }
                    }
                    Err(e) => {
                        if depth >= cfg.max_depth {
                            return Err(Error::Certification(format!(
                                "order-{j} sweep failed near {:?}: {e}",
                                cell.iter().map(|c| c.midpoint().to_string()).collect::<Vec<_>>()
                            )));
                        }
                        stack.extend(split_cell(&cell).into_iter().map(|c| (c, depth + 1)));
                    }
                }
            }
        }
        out.push(sup);
    }
    Ok(out)
}

/// Certifies |f^(alpha)| <= bounds[|alpha|] on (0,1)^m for every order
/// up to k; fails loudly with the offending cell.
pub fn certify_bounds(map: &MapExpr, k: u32, bounds: &[Rat], cfg: &SweepConfig) -> Result<(), Error> {
    let m = map.m();
    if bounds.len() < (k as usize) + 1 {
        return Err(Error::Certification("missing bound for some derivative order".into()));
    }
    if m == 0 {
        let got = certified_sup(map, k, cfg)?;
        for (j, (g, b)) in got.iter().zip(bounds).enumerate() {
            if g > b {
                return Err(Error::Certification(format!("order-{j} value {g} exceeds bound {b}")));
            }
        }
        return Ok(());
    }
    for j in 0..=k {
        let bound = &bounds[j as usize];
        for alpha in multi_indices_of_order(m, j) {
            let mut stack: Vec<(Vec<RatInterval>, u32)> =
                initial_cells(m, cfg).into_iter().map(|c| (c, 0)).collect();
            while let Some((cell, depth)) = stack.pop() {
                let ok = match map.deriv_interval(&alpha, &cell) {
                    Ok(vals) => vals.iter().all(|v| v.abs_bounded_by(bound)),
                    Err(_) => false,
                };
                if ok {
                    continue;
                }
                if depth >= cfg.max_depth {
                    return Err(Error::Certification(format!(
                        "order-{j} bound {bound} undecided near {:?}",
                        cell.iter().map(|c| c.midpoint().to_string()).collect::<Vec<_>>()
                    )));
                }
                stack.extend(split_cell(&cell).into_iter().map(|c| (c, depth + 1)));
            }
        }
    }
    Ok(())
}

/// Affine rescaling: given f on (0,1)^d with |f| <= 1 and
/// |f^(alpha)| <= c^{|alpha|} for 1 <= |alpha| <= k (caller-certified),
/// returns (c+1)^d translated box pieces g = f o lambda_B with per-axis
/// widths w_i = min(1/c, 1 - offset_i), each with
/// |g^(alpha)| = (prod w_i^{alpha_i}) |f^(alpha)(lambda_B)| <= 1.
pub fn rescale_to_unit(f: &MapExpr, d: usize, c: u32, k: u32) -> Result<Vec<Piece>, Error> {
    if c == 0 {
        return Err(Error::InvalidArgument("rescale_to_unit needs c >= 1".into()));
    }
    if f.m() != d {
        return Err(Error::Shape("domain dimension mismatch".into()));
    }
    let scale = rat(1, c as i64);
    let step = rat(1, (c as i64) + 1);
    let mut pieces = Vec::new();
    let mut idx = vec![0u32; d];
    loop {
        let offset: Vec<Rat> = idx.iter().map(|&j| &step * rat_int(j as i64)).collect();
        let scales: Vec<Rat> = offset
            .iter()
            .map(|o| scale.clone().min(Rat::one() - o))
            .collect();
        let global_box: Vec<(Rat, Rat)> = offset
            .iter()
            .zip(&scales)
            .map(|(o, w)| (o.clone(), o + w))
            .collect();
        pieces.push(Piece {
            map: MapExpr::Rescaled {
                base: Box::new(f.clone()),
                offset,
                scales,
            },
            global_box,
            cert: Certification {
                bounds: vec![Rat::one(); (k as usize) + 1],
                tag: CertTag::Exact,
            },
        });
        let mut i = d;
        loop {
            if i == 0 {
                debug_assert_eq!(pieces.len(), ((c + 1) as usize).pow(d as u32));
                return Ok(pieces);
            }
            i -= 1;
            idx[i] += 1;
            if idx[i] <= c {
                break;
            }
            idx[i] = 0;
        }
    }
}

/// Builds a strong parametrization from a rational curve on (0,1):
/// certifies |f| <= 1, finds the derivative bound c by interval sweep,
/// and rescales into (c+1) strongly bounded pieces.
pub fn strong_param_from_curve(
    comps: Vec<RatFunc1>,
    n: usize,
    k: u32,
    cfg: &SweepConfig,
) -> Result<StrongParam, Error> {
    if comps.len() != n {
        return Err(Error::Shape("component count differs from target dimension".into()));
    }
    for f in &comps {
        if *f.domain().0 != Rat::zero() || *f.domain().1 != Rat::one() {
            return Err(Error::InvalidArgument("curve components must live on (0,1)".into()));
        }
    }
    let base = MapExpr::curve(comps, k as usize + 2);
    let sups = certified_sup(&base, k, cfg)?;
    if sups[0] > Rat::one() {
        return Err(Error::Certification(format!(
            "curve is not strongly bounded: |f| <= {} > 1",
            sups[0]
        )));
    }
    let cmax = sups[1..].iter().max().cloned().unwrap_or_else(Rat::zero);
    let c: u32 = if cmax <= Rat::one() {
        1
    } else {
        let ceil = cmax.ceil().to_integer();
        u32::try_from(ceil.magnitude().clone())
            .map_err(|_| Error::InvalidArgument("derivative bound too large".into()))?
    };
    let pieces = if c == 1 {
        vec![Piece {
            map: base,
            global_box: vec![(Rat::zero(), Rat::one())],
            cert: Certification {
                bounds: vec![Rat::one(); (k as usize) + 1],
                tag: CertTag::IntervalVerified,
            },
        }]
    } else {
        let mut ps = rescale_to_unit(&base, 1, c, k)?;
        for p in &mut ps {
            p.cert.tag = CertTag::IntervalVerified;
        }
        ps
    };
    StrongParam::new(1, n, k, pieces)
}

/// The square substitution g(t) = f(t^2) with re-certification at
/// order k; the underlying analytic fact needs k >= 2 (it fails for
/// k = 1, witnessed by the cube-root arc).
pub fn karep(f: &RatFunc1, k: u32, cfg: &SweepConfig) -> Result<(RatFunc1, Vec<Rat>), Error> {
    if k < 2 {
        return Err(Error::InvalidArgument("square substitution needs k >= 2".into()));
    }
    let g = f.square_substitute()?;
    let bounds = certified_sup(&MapExpr::curve(vec![g.clone()], k as usize + 1), k, cfg)?;
    Ok((g, bounds))
}

/// One reparametrization piece: phi into the global domain and the
/// composite f o phi, both with certified derivative bounds.
#[derive(Debug, Clone)]
pub struct ReparamPiece {
    pub phi: Piece,
    pub comp: Piece,
}

/// Univariate reparametrization: splits the domain at exact roots of
/// (f')^2 - 1 and of f^(k+1) (monotonicity of |f^(k)|), emits affine
/// pieces where |f'| <= 1 and inverse-function pieces where |f'| > 1,
/// applies the square substitution to tame higher derivatives where it
/// helps, and certifies every declared bound by interval sweep. The
/// piece images cover the domain minus finitely many points; interior
/// break points are kept as 0-dimensional constant pieces.
pub fn reparametrize_univariate(
    f: &RatFunc1,
    k: u32,
    cfg: &SweepConfig,
) -> Result<Vec<ReparamPiece>, Error> {
    if k < 1 {
        return Err(Error::InvalidArgument("reparametrization needs k >= 1".into()));
    }
    let (lo, hi) = (f.domain().0.clone(), f.domain().1.clone());
    let tower = derivative_tower(f, k as usize + 1);
    let f1 = &tower[1];
    // numerator of (f')^2 - 1
    let crit = f1.num().mul(f1.num()).sub(&f1.den().mul(f1.den()));
    // numerator of f^(k+1)
    let mono = tower[k as usize + 1].num().clone();
    let mut cuts = vec![lo.clone(), hi.clone()];
    let width = rat(1, 1i64 << 20);
    for p in [&crit, &mono] {
        if p.is_zero() {
            continue;
        }
        for (a, b) in isolate_real_roots(p)? {
            let (ra, rb) = refine_root(p, &a, &b, &width);
            if rb <= lo || ra >= hi {
                continue;
            }
            cuts.push(ra.max(lo.clone()));
            cuts.push(rb.min(hi.clone()));
        }
    }
    cuts.sort();
    cuts.dedup();
    let mut out = Vec::new();
    for w in cuts.windows(2) {
        let (a, b) = (&w[0], &w[1]);
        if a >= b {
            continue;
        }
        let mid = (a + b) / rat_int(2);
        let slope = f1.eval(&mid)?;
        if slope.abs() <= Rat::one() {
            out.push(affine_piece(f, a, b, k, cfg)?);
        } else {
            out.push(inverse_piece(f, &tower, a, b, k, cfg)?);
        }
    }
    // interior break points as 0-dimensional pieces
    for c in &cuts[1..cuts.len() - 1] {
        let val = f.eval(c)?;
        let zero_bounds = |v: Rat| {
            let mut bs = vec![v.abs()];
            bs.resize((k as usize) + 1, Rat::zero());
            bs
        };
        out.push(ReparamPiece {
            phi: Piece {
                map: MapExpr::ConstantPoint { value: vec![c.clone()] },
                global_box: vec![(c.clone(), c.clone())],
                cert: Certification { bounds: zero_bounds(c.clone()), tag: CertTag::Exact },
            },
            comp: Piece {
                map: MapExpr::ConstantPoint { value: vec![val.clone()] },
                global_box: vec![(c.clone(), c.clone())],
                cert: Certification { bounds: zero_bounds(val), tag: CertTag::Exact },
            },
        });
    }
    Ok(out)
}

fn affine_piece(
    f: &RatFunc1,
    a: &Rat,
    b: &Rat,
    k: u32,
    cfg: &SweepConfig,
) -> Result<ReparamPiece, Error> {
    let len = b - a;
    let mut phi_f = RatFunc1::affine(a, &len);
    let mut comp_f = f.compose_affine(a, &len)?;
    let mut comp_bounds =
        certified_sup(&MapExpr::curve(vec![comp_f.clone()], k as usize + 1), k, cfg)?;
    let mut phi_exact = true;
    // square substitution where it tames higher derivatives: orient so
    // the larger |comp^(k)| end sits at 0, substitute t^2, keep it if
    // the worst certified bound improves
    if k >= 2 && comp_bounds[2..].iter().any(|v| *v > Rat::one()) {
        let ctow = derivative_tower(&comp_f, k as usize);
        let near0 = ctow[k as usize].eval(&rat(1, 16))?.abs();
        let near1 = ctow[k as usize].eval(&rat(15, 16))?.abs();
        let (phi_or, comp_or) = if near0 >= near1 {
            (phi_f.clone(), comp_f.clone())
        } else {
            (
                phi_f.compose_affine(&Rat::one(), &rat_int(-1))?,
                comp_f.compose_affine(&Rat::one(), &rat_int(-1))?,
            )
        };
        if let (Ok(comp_sq), Ok(phi_sq)) = (comp_or.square_substitute(), phi_or.square_substitute())
        {
            if let Ok(sq_bounds) =
                certified_sup(&MapExpr::curve(vec![comp_sq.clone()], k as usize + 1), k, cfg)
            {
                let worst = |bs: &[Rat]| bs.iter().max().cloned().unwrap();
                if worst(&sq_bounds) < worst(&comp_bounds) {
                    phi_f = phi_sq;
                    comp_f = comp_sq;
                    comp_bounds = sq_bounds;
                    phi_exact = false;
                }
            }
        }
    }
    let phi_bounds = if phi_exact {
        let mut bs = vec![a.abs().max(b.abs()), len.abs()];
        bs.resize((k as usize) + 1, Rat::zero());
        bs
    } else {
        certified_sup(&MapExpr::curve(vec![phi_f.clone()], k as usize + 1), k, cfg)?
    };
    Ok(ReparamPiece {
        phi: Piece {
            map: MapExpr::curve(vec![phi_f], k as usize + 1),
            global_box: vec![(a.clone(), b.clone())],
            cert: Certification {
                bounds: phi_bounds,
                tag: if phi_exact { CertTag::Exact } else { CertTag::IntervalVerified },
            },
        },
        comp: Piece {
            map: MapExpr::curve(vec![comp_f], k as usize + 1),
            global_box: vec![(a.clone(), b.clone())],
            cert: Certification { bounds: comp_bounds, tag: CertTag::IntervalVerified },
        },
    })
}

fn inverse_piece(
    f: &RatFunc1,
    tower: &[RatFunc1],
    a: &Rat,
    b: &Rat,
    k: u32,
    cfg: &SweepConfig,
) -> Result<ReparamPiece, Error> {
    let b0 = f.eval(a)?;
    let b1 = f.eval(b)?;
    let phi_map = MapExpr::InverseArc {
        ftower: tower.to_vec(),
        x_lo: a.clone(),
        x_hi: b.clone(),
        b0: b0.clone(),
        b1: b1.clone(),
    };
    let phi_bounds = certified_sup(&phi_map, k, cfg)?;
    let delta = &b1 - &b0;
    let comp_f = RatFunc1::affine(&b0, &delta);
    let mut comp_bounds = vec![b0.abs().max(b1.abs()), delta.abs()];
    comp_bounds.resize((k as usize) + 1, Rat::zero());
    Ok(ReparamPiece {
        phi: Piece {
            map: phi_map,
            global_box: vec![(a.clone(), b.clone())],
            cert: Certification { bounds: phi_bounds, tag: CertTag::IntervalVerified },
        },
        comp: Piece {
            map: MapExpr::curve(vec![comp_f], k as usize + 1),
            global_box: vec![(a.clone(), b.clone())],
            cert: Certification { bounds: comp_bounds, tag: CertTag::Exact },
        },
    })
}

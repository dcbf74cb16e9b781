//! The covering engine: the explicit determinant-bound constant K, the
//! certified tile radius, unit-cube tiling, per-box hypersurface
//! fitting, covering certificates with bit-exact serialization, and an
//! independent certificate verifier.

use std::collections::BTreeMap;

use num_bigint::{BigInt, BigUint};
use num_traits::{One, Signed, Zero};

use crate::error::Error;
use crate::exponents::{binomial, dim_d, dim_e, ExponentProfile};
use crate::linalg::{det, fit_hypersurface, monomial_matrix, Hypersurface};
use crate::parametrize::StrongParam;
use crate::rational::{format_rat, parse_rat, QPoint, Rat};

/// K = #J * D! * c^D with c = D(m,k)^e and k = b+1. The tuple count
/// #J (tuples j in {0..b+1}^D with at most E(m,j) coordinates equal to
/// j for each j <= b) is computed exactly by dynamic programming when
/// D <= 12; beyond that, or when `exact_j` is false, the always-valid
/// upper bound (b+2)^D is used. A larger K only shrinks the certified
/// radius, so the fallback stays safe.
pub fn bound_constant_k(m: u32, n: u32, e: u32, exact_j: bool) -> Result<Rat, Error> {
    if m >= n {
        return Err(Error::InvalidArgument(format!(
            "determinant constant needs m < n; got m={m}, n={n}"
        )));
    }
    if m == 0 || e == 0 {
        return Err(Error::InvalidArgument("need m >= 1 and e >= 1".into()));
    }
    let d_big = dim_d(n, e);
    let d: u64 = (&d_big)
        .try_into()
        .map_err(|_| Error::InvalidArgument("D(n,e) too large".into()))?;
    let b = crate::exponents::b_of(m, n, e);
    let k = b + 1;
    let c = pow_big(&dim_d(m, k), e as u64);
    let count_j = if exact_j && d <= 12 {
        count_j_exact(m, b, d)
    } else {
        pow_big(&BigUint::from(b as u64 + 2), d)
    };
    let mut kk = count_j * factorial(d);
    kk *= pow_big(&c, d);
    Ok(Rat::from_integer(BigInt::from(kk)))
}

/// Exact #J by occupancy DP: distribute D coordinate slots over the
/// values 0..=b+1, value j <= b capped at E(m,j) occurrences, counting
/// ordered tuples via binomial slot choices.
fn count_j_exact(m: u32, b: u32, d: u64) -> BigUint {
    let mut dp = vec![BigUint::zero(); d as usize + 1];
    dp[0] = BigUint::one();
    for value in 0..=b + 1 {
        let cap: u64 = if value <= b {
            let e_cap = dim_e(m, value);
            (&e_cap).try_into().unwrap_or(d).min(d)
        } else {
            d
        };
        let mut next = vec![BigUint::zero(); d as usize + 1];
        for used in 0..=d {
            if dp[used as usize].is_zero() {
                continue;
            }
            for take in 0..=cap.min(d - used) {
                let ways = binomial((d - used) as i64, take as i64);
                next[(used + take) as usize] += &dp[used as usize] * ways;
            }
        }
        dp = next;
    }
    dp[d as usize].clone()
}

fn factorial(n: u64) -> BigUint {
    let mut acc = BigUint::one();
    for i in 2..=n {
        acc *= BigUint::from(i);
    }
    acc
}

fn pow_big(base: &BigUint, exp: u64) -> BigUint {
    let mut acc = BigUint::one();
    for _ in 0..exp {
        acc *= base;
    }
    acc
}

fn rat_pow(x: &Rat, exp: u64) -> Rat {
    let mut acc = Rat::one();
    for _ in 0..exp {
        acc *= x;
    }
    acc
}

/// The largest radius r = 2^{-j} <= 1 with K r^B <= T^{-neD}, certified
/// by exact comparison: doubling r (when r < 1) violates the
/// inequality. Powers of two are used because the closed-form real
/// root of the constraint is irrational.
pub fn radius_r(k_const: &Rat, profile: &ExponentProfile, t: u64) -> Rat {
    let ned: u64 = (&profile.ned()).try_into().expect("neD too large");
    let b: u64 = (&profile.big_b).try_into().expect("B too large");
    // need 2^{jB} >= K * T^{neD}
    let lhs = k_const * Rat::from_integer(BigInt::from(pow_big(&BigUint::from(t), ned)));
    let mut j: u64 = 0;
    let two_b = rat_pow(&Rat::from_integer(2.into()), b);
    let mut reached = Rat::one();
    while reached < lhs {
        reached *= &two_b;
        j += 1;
    }
    Rat::new(BigInt::one(), BigInt::from(pow_big(&BigUint::from(2u32), j)))
}

/// Per-axis center count for radius r: N = ceil(1/(2r)).
pub fn boxes_per_axis(r: &Rat) -> u64 {
    let n = (Rat::one() / (r + r)).ceil().to_integer();
    let n: u64 = n.magnitude().try_into().expect("box count too large");
    n.max(1)
}

fn clip_center(c: Rat, r: &Rat) -> Rat {
    let cap = (Rat::one() - r).max(Rat::new(1.into(), 2.into()));
    c.min(cap)
}

/// Centers of N^m closed boxes of radius r covering (0,1)^m, with
/// N = ceil(1/(2r)) <= 1/r per axis and centers (2j-1) r clipped
/// into (0,1).
pub fn tile_unit_cube(m: u32, r: &Rat) -> Result<Vec<Vec<Rat>>, Error> {
    if *r <= Rat::zero() || *r > Rat::one() {
        return Err(Error::InvalidArgument("radius must satisfy 0 < r <= 1".into()));
    }
    let n = boxes_per_axis(r);
    let total = n.checked_pow(m).filter(|&v| v <= 1_000_000).ok_or_else(|| {
        Error::InvalidArgument(format!("tiling too large to materialize: {n}^{m} boxes"))
    })?;
    let axis: Vec<Rat> = (1..=n)
        .map(|j| clip_center(Rat::from_integer(BigInt::from(2 * j - 1)) * r, r))
        .collect();
    let mut centers: Vec<Vec<Rat>> = vec![vec![]];
    for _ in 0..m {
        centers = centers
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
    debug_assert_eq!(centers.len() as u64, total);
    Ok(centers)
}

/// Index (1-based) of the lexicographically smallest closed box of
/// radius r covering x along one axis.
pub fn box_axis_index(x: &Rat, r: &Rat, n: u64) -> u64 {
    let j = (x / (r + r)).ceil().to_integer();
    if j.is_negative() || j.is_zero() {
        return 1;
    }
    let j: u64 = j.magnitude().try_into().unwrap_or(n);
    j.clamp(1, n)
}

/// Covering run parameters, kept as plain values so certificates
/// round-trip bit-exactly through their header line.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CoverParams {
    pub m: u32,
    pub n: u32,
    pub e: u32,
    pub t: u64,
    pub k_const: Rat,
    pub big_b: BigUint,
    pub epsilon: Rat,
    pub r: Rat,
}

impl CoverParams {
    pub fn from_profile(profile: &ExponentProfile, t: u64) -> CoverParams {
        let r = radius_r(&profile.bound_k, profile, t);
        CoverParams {
            m: profile.m,
            n: profile.n,
            e: profile.e,
            t,
            k_const: profile.bound_k.clone(),
            big_b: profile.big_b.clone(),
            epsilon: profile.epsilon.clone(),
            r,
        }
    }

    pub fn boxes_per_axis(&self) -> u64 {
        boxes_per_axis(&self.r)
    }

    /// Header line "m n e T; K=<p/q>; B=<int>; eps=<p/q>; r=<p/q>".
    pub fn header(&self) -> String {
        format!(
            "{} {} {} {}; K={}; B={}; eps={}; r={}",
            self.m,
            self.n,
            self.e,
            self.t,
            format_rat(&self.k_const),
            self.big_b,
            format_rat(&self.epsilon),
            format_rat(&self.r)
        )
    }

    pub fn parse_header(line: &str) -> Result<CoverParams, Error> {
        let parts: Vec<&str> = line.split(';').map(str::trim).collect();
        if parts.len() != 5 {
            return Err(Error::Parse(format!("bad certificate header {line:?}")));
        }
        let dims: Vec<&str> = parts[0].split_whitespace().collect();
        if dims.len() != 4 {
            return Err(Error::Parse(format!("bad dimensions in header {line:?}")));
        }
        let m: u32 = dims[0].parse().map_err(|_| Error::Parse("bad m".into()))?;
        let n: u32 = dims[1].parse().map_err(|_| Error::Parse("bad n".into()))?;
        let e: u32 = dims[2].parse().map_err(|_| Error::Parse("bad e".into()))?;
        let t: u64 = dims[3].parse().map_err(|_| Error::Parse("bad T".into()))?;
        let field = |s: &str, key: &str| -> Result<String, Error> {
            s.strip_prefix(key)
                .map(str::to_string)
                .ok_or_else(|| Error::Parse(format!("expected {key}... in header, got {s:?}")))
        };
        let k_const = parse_rat(&field(parts[1], "K=")?)?;
        let big_b: BigUint = field(parts[2], "B=")?
            .parse()
            .map_err(|_| Error::Parse("bad B".into()))?;
        let epsilon = parse_rat(&field(parts[3], "eps=")?)?;
        let r = parse_rat(&field(parts[4], "r=")?)?;
        Ok(CoverParams { m, n, e, t, k_const, big_b, epsilon, r })
    }
}

/// ceil((K^m T^{m n e D})^{1/B}): the certified hypersurface budget
/// ceil(K^{m/B} T^epsilon), computed by exact integer B-th root.
pub fn hypersurface_count_bound(params: &CoverParams) -> BigUint {
    let ned = BigUint::from(params.n) * BigUint::from(params.e) * dim_d(params.n, params.e);
    let mned: u64 = (&(BigUint::from(params.m) * ned)).try_into().expect("mneD too large");
    let val = rat_pow(&params.k_const, params.m as u64)
        * Rat::from_integer(BigInt::from(pow_big(&BigUint::from(params.t), mned)));
    let p = val.numer().to_biguint().expect("K must be positive");
    let q = val.denom().to_biguint().unwrap();
    let b: u32 = (&params.big_b).try_into().expect("B too large");
    // smallest M >= 1 with M^B q >= p
    let mut m = (&p / &q).nth_root(b).max(BigUint::one());
    while pow_big(&m, b as u64) * &q < p {
        m += BigUint::one();
    }
    m
}

/// One covered point: its assigned hypersurface (None only in the
/// impossible-by-theory case that a box failed to degenerate) and the
/// flattened id of the (piece, box) cell its preimage lies in.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CertPoint {
    pub point: QPoint,
    pub hyp: Option<usize>,
    pub box_id: u64,
}

/// A verifiable covering certificate.
#[derive(Debug, Clone)]
pub struct CoverCertificate {
    pub params: CoverParams,
    pub hypersurfaces: Vec<Hypersurface>,
    pub points: Vec<CertPoint>,
    /// boxes where fitting failed (rank = D); nonempty only if the
    /// parametrization's bound certificate was invalid
    pub theory_violations: Vec<u64>,
}

impl CoverCertificate {
    pub fn serialize(&self) -> String {
        let mut out = String::new();
        out.push_str(&self.params.header());
        out.push('\n');
        for h in &self.hypersurfaces {
            out.push_str(&h.serialize());
            out.push('\n');
        }
        for p in &self.points {
            let coords: Vec<String> = p.point.coords().iter().map(format_rat).collect();
            let target = match p.hyp {
                Some(i) => format!("h{i}"),
                None => "none".to_string(),
            };
            out.push_str(&format!("{} -> {} @ box{}\n", coords.join(","), target, p.box_id));
        }
        out
    }

    pub fn parse(text: &str) -> Result<CoverCertificate, Error> {
        let mut lines = text.lines().enumerate();
        let (_, header) = lines
            .next()
            .ok_or_else(|| Error::Parse("empty certificate".into()))?;
        let params = CoverParams::parse_header(header)?;
        let mut hypersurfaces = Vec::new();
        let mut points = Vec::new();
        let mut theory_violations = Vec::new();
        for (lineno, line) in lines {
            let line = line.trim();
            if line.is_empty() {
                continue;
            }
            if let Some((left, right)) = line.split_once("->") {
                let coords: Result<Vec<Rat>, Error> =
                    left.trim().split(',').map(parse_rat).collect();
                let coords =
                    coords.map_err(|e| Error::Parse(format!("line {}: {e}", lineno + 1)))?;
                let right = right.trim();
                let (target, boxpart) = right.split_once('@').ok_or_else(|| {
                    Error::Parse(format!("line {}: missing '@' in point line", lineno + 1))
                })?;
                let target = target.trim();
                let box_id: u64 = boxpart
                    .trim()
                    .strip_prefix("box")
                    .and_then(|s| s.parse().ok())
                    .ok_or_else(|| Error::Parse(format!("line {}: bad box id", lineno + 1)))?;
                let hyp = if target == "none" {
                    theory_violations.push(box_id);
                    None
                } else {
                    let idx: usize = target
                        .strip_prefix('h')
                        .and_then(|s| s.parse().ok())
                        .ok_or_else(|| {
                            Error::Parse(format!("line {}: bad hypersurface ref", lineno + 1))
                        })?;
                    Some(idx)
                };
                points.push(CertPoint { point: QPoint::new(coords), hyp, box_id });
            } else {
                hypersurfaces.push(
                    Hypersurface::parse(line)
                        .map_err(|e| Error::Parse(format!("line {}: {e}", lineno + 1)))?,
                );
            }
        }
        theory_violations.sort_unstable();
        theory_violations.dedup();
        Ok(CoverCertificate { params, hypersurfaces, points, theory_violations })
    }
}

/// Deterministic small-height fit: the sparsest, smallest-coefficient
/// integer combination of monomials vanishing on every point, searched
/// over supports of size <= max_support and coefficients of sup-norm
/// <= max_coeff in a fixed order (support size, then sup-norm, then
/// lexicographic). Recovers the defining equation of low-height curves
/// even from a single generic point.
pub fn fit_small_hypersurface(
    points: &[QPoint],
    n: u32,
    e: u32,
    max_support: usize,
    max_coeff: i64,
) -> Result<Option<Hypersurface>, Error> {
    let mm = monomial_matrix(points, n, e)?;
    let d = mm.cols();
    let rows: Vec<Vec<Rat>> = (0..mm.rows())
        .map(|i| (0..d).map(|j| mm.at(i, j).clone()).collect())
        .collect();
    for s in 1..=max_support.min(d) {
        for h in 1..=max_coeff {
            let mut support = (0..s).collect::<Vec<usize>>();
            loop {
                if let Some(coeffs) = search_coeffs(&rows, &support, h) {
                    let mut full = vec![BigInt::zero(); d];
                    for (&col, c) in support.iter().zip(&coeffs) {
                        full[col] = BigInt::from(*c);
                    }
                    return Ok(Some(Hypersurface::new(n, e, full)?));
                }
                // next combination in lexicographic order
                let mut i = s;
                loop {
                    if i == 0 {
                        break;
                    }
                    i -= 1;
                    if support[i] < d - (s - i) {
                        support[i] += 1;
                        for j in i + 1..s {
                            support[j] = support[j - 1] + 1;
                        }
                        break;
                    }
                }
                if i == 0 && support[0] == d - s {
                    // check final rollover: done when no index advanced
                    let exhausted = (0..s).all(|j| support[j] == d - s + j);
                    if exhausted {
                        break;
                    }
                }
            }
        }
    }
    Ok(None)
}

fn search_coeffs(rows: &[Vec<Rat>], support: &[usize], h: i64) -> Option<Vec<i64>> {
    let s = support.len();
    let mut coeffs = vec![-h; s];
    loop {
        let sup = coeffs.iter().map(|c| c.abs()).max().unwrap_or(0);
        if sup == h {
            // skip all-zero and already-tried smaller sup-norms
            let vanishes = rows.iter().all(|row| {
                let mut acc = Rat::zero();
                for (&col, &c) in support.iter().zip(coeffs.iter()) {
                    acc += Rat::from_integer(BigInt::from(c)) * &row[col];
                }
                acc.is_zero()
            });
            if vanishes {
                return Some(coeffs);
            }
        }
        let mut i = 0;
        loop {
            if i == s {
                return None;
            }
            coeffs[i] += 1;
            if coeffs[i] <= h {
                break;
            }
            coeffs[i] = -h;
            i += 1;
        }
    }
}

/// Runs the covering: computes K and r from the exponent profile,
/// assigns every point's preimage to the lexicographically smallest
/// covering (piece, box) cell, fits one hypersurface per nonempty cell
/// (reusing an already-emitted hypersurface whenever it vanishes on the
/// whole cell), and emits a deduplicated certificate. A cell where no
/// hypersurface exists (full rank D) is recorded as a theory violation,
/// which with valid bound certificates cannot happen.
pub fn cover_points(
    param: &StrongParam,
    e: u32,
    t: u64,
    points: &[(QPoint, Vec<Rat>)],
    exact_j: bool,
) -> Result<CoverCertificate, Error> {
    let m = param.m as u32;
    let n = param.n as u32;
    let profile = crate::exponents::profile(m, n, e, exact_j)?;
    if param.k < profile.k {
        return Err(Error::Certification(format!(
            "parametrization certified to order {}, covering needs k = {}",
            param.k, profile.k
        )));
    }
    if !param.strongly_bounded() {
        return Err(Error::Certification(
            "parametrization pieces are not certified strongly bounded".into(),
        ));
    }
    let params = CoverParams::from_profile(&profile, t);
    let n_axis = params.boxes_per_axis();
    let t_big = BigUint::from(t);
    let mut cells: BTreeMap<u64, Vec<usize>> = BTreeMap::new();
    for (i, (pt, pre)) in points.iter().enumerate() {
        if pt.arity() != n as usize {
            return Err(Error::ArityMismatch { expected: n as usize, got: pt.arity() });
        }
        if pt.height() > &t_big {
            return Err(Error::InvalidArgument(format!(
                "point height {} exceeds T = {t}",
                pt.height()
            )));
        }
        let gid = locate_cell(param, pre, &params.r, n_axis)?;
        cells.entry(gid).or_default().push(i);
    }
    let mut hypersurfaces: Vec<Hypersurface> = Vec::new();
    let mut assignment: Vec<Option<usize>> = vec![None; points.len()];
    let mut theory_violations = Vec::new();
    for (&gid, idxs) in &cells {
        let cell_pts: Vec<QPoint> = idxs.iter().map(|&i| points[i].0.clone()).collect();
        let mut chosen: Option<usize> = None;
        for (hi, h) in hypersurfaces.iter().enumerate() {
            let mut all = true;
            for p in &cell_pts {
                if !h.vanishes_on(p)? {
                    all = false;
                    break;
                }
            }
            if all {
                chosen = Some(hi);
                break;
            }
        }
        if chosen.is_none() {
            let fitted = match fit_small_hypersurface(&cell_pts, n, e, 3, 4)? {
                Some(h) => Some(h),
                None => fit_hypersurface(&cell_pts, n, e)?,
            };
            if let Some(h) = fitted {
                chosen = Some(match hypersurfaces.iter().position(|x| *x == h) {
                    Some(hi) => hi,
                    None => {
                        hypersurfaces.push(h);
                        hypersurfaces.len() - 1
                    }
                });
            } else {
                theory_violations.push(gid);
            }
        }
        for &i in idxs {
            assignment[i] = chosen;
        }
    }
    let cert_points = points
        .iter()
        .enumerate()
        .map(|(i, (pt, pre))| {
            Ok(CertPoint {
                point: pt.clone(),
                hyp: assignment[i],
                box_id: locate_cell(param, pre, &params.r, n_axis)?,
            })
        })
        .collect::<Result<Vec<_>, Error>>()?;
    Ok(CoverCertificate {
        params,
        hypersurfaces,
        points: cert_points,
        theory_violations,
    })
}

/// Flattened (piece, box) cell id of a global preimage.
fn locate_cell(param: &StrongParam, pre: &[Rat], r: &Rat, n_axis: u64) -> Result<u64, Error> {
    if pre.len() != param.m {
        return Err(Error::ArityMismatch { expected: param.m, got: pre.len() });
    }
    let (piece, local) = param
        .locate(pre)
        .ok_or_else(|| Error::InvalidArgument("preimage lies outside every piece".into()))?;
    let mut flat: u64 = 0;
    for x in &local {
        flat = flat
            .checked_mul(n_axis)
            .and_then(|v| v.checked_add(box_axis_index(x, r, n_axis) - 1))
            .ok_or_else(|| Error::InvalidArgument("box index overflow".into()))?;
    }
    let per_piece = n_axis
        .checked_pow(param.m as u32)
        .ok_or_else(|| Error::InvalidArgument("box index overflow".into()))?;
    (piece as u64)
        .checked_mul(per_piece)
        .and_then(|v| v.checked_add(flat))
        .ok_or_else(|| Error::InvalidArgument("box index overflow".into()))
}

/// Independent replay of the covering contract on a certificate: every
/// point vanishes exactly on its assigned hypersurface, its preimage
/// lies in the recorded cell, the radius satisfies K r^B <= T^{-neD}
/// with doubling maximality, the hypersurface count is within the
/// certified budget, and no theory violations are present. Pure in the
/// serialized certificate plus the (point, preimage) list.
pub fn verify_certificate(
    cert: &CoverCertificate,
    param: &StrongParam,
    preimages: &[(QPoint, Vec<Rat>)],
) -> Result<(), Error> {
    let p = &cert.params;
    if !cert.theory_violations.is_empty() {
        return Err(Error::Verification(format!(
            "certificate records theory violations in boxes {:?}",
            cert.theory_violations
        )));
    }
    // radius contract: K r^B <= T^{-neD}, i.e. K r^B T^{neD} <= 1
    let ned: u64 = (&(BigUint::from(p.n) * BigUint::from(p.e) * dim_d(p.n, p.e)))
        .try_into()
        .map_err(|_| Error::Verification("neD too large".into()))?;
    let b: u64 = (&p.big_b)
        .try_into()
        .map_err(|_| Error::Verification("B too large".into()))?;
    let t_pow = Rat::from_integer(BigInt::from(pow_big(&BigUint::from(p.t), ned)));
    if &p.k_const * rat_pow(&p.r, b) * &t_pow > Rat::one() {
        return Err(Error::Verification("radius violates K r^B <= T^{-neD}".into()));
    }
    let bound = hypersurface_count_bound(p);
    if BigUint::from(cert.hypersurfaces.len()) > bound {
        return Err(Error::Verification(format!(
            "{} hypersurfaces exceed the certified budget {bound}",
            cert.hypersurfaces.len()
        )));
    }
    let n_axis = p.boxes_per_axis();
    let t_big = BigUint::from(p.t);
    let mut pre_map: BTreeMap<Vec<String>, &Vec<Rat>> = BTreeMap::new();
    for (pt, pre) in preimages {
        pre_map.insert(pt.coords().iter().map(format_rat).collect(), pre);
    }
    for cp in &cert.points {
        let hyp = cp
            .hyp
            .and_then(|i| cert.hypersurfaces.get(i))
            .ok_or_else(|| {
                Error::Verification(format!("point {:?} has no valid hypersurface", cp.point))
            })?;
        if !hyp.vanishes_on(&cp.point)? {
            return Err(Error::Verification(format!(
                "hypersurface does not vanish on point ({})",
                cp.point.coords().iter().map(format_rat).collect::<Vec<_>>().join(",")
            )));
        }
        if cp.point.height() > &t_big {
            return Err(Error::Verification("point height exceeds T".into()));
        }
        let key: Vec<String> = cp.point.coords().iter().map(format_rat).collect();
        let pre = pre_map
            .get(&key)
            .ok_or_else(|| Error::Verification(format!("no preimage supplied for {key:?}")))?;
        let gid = locate_cell(param, pre, &p.r, n_axis)?;
        if gid != cp.box_id {
            return Err(Error::Verification(format!(
                "preimage of {key:?} lies in box {gid}, certificate claims {}",
                cp.box_id
            )));
        }
    }
    Ok(())
}

/// Report of the empirical determinant-bound check.
#[derive(Debug, Clone)]
pub struct ClusterReport {
    pub trials: usize,
    pub bound: Rat,
    pub max_abs_det: Rat,
    pub max_ratio: Rat,
}

/// Samples clusters of D points of sup-radius r in a piece's local
/// domain, evaluates the monomial determinant of their images exactly,
/// and checks |det| < K r^B for every trial.
pub fn cluster_determinant_check(
    param: &StrongParam,
    e: u32,
    r: &Rat,
    trials: usize,
    seed: u64,
) -> Result<ClusterReport, Error> {
    use rand::{Rng, SeedableRng};
    if *r <= Rat::zero() || *r > Rat::one() {
        return Err(Error::InvalidArgument("radius must satisfy 0 < r <= 1".into()));
    }
    let m = param.m as u32;
    let n = param.n as u32;
    let profile = crate::exponents::profile(m, n, e, true)?;
    if param.k < profile.k {
        return Err(Error::Certification(format!(
            "parametrization certified to order {}, check needs k = {}",
            param.k, profile.k
        )));
    }
    if !param.strongly_bounded() {
        return Err(Error::Certification(
            "parametrization pieces are not certified strongly bounded".into(),
        ));
    }
    let b: u64 = (&profile.big_b).try_into().expect("B too large");
    let bound = &profile.bound_k * rat_pow(r, b);
    let d: usize = (&profile.d).try_into().expect("D too large");
    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
    let denom = BigInt::from(1u64 << 20);
    let sample = |rng: &mut rand_chacha::ChaCha8Rng| {
        Rat::new(BigInt::from(rng.gen_range(0..=(1u64 << 20))), denom.clone())
    };
    let mut max_abs_det = Rat::zero();
    for trial in 0..trials {
        let piece = &param.pieces[trial % param.pieces.len()];
        // center at distance >= r from the local boundary when possible
        let margin = if &Rat::new(1.into(), 2.into()) > r {
            r.clone()
        } else {
            Rat::new(1.into(), 2.into())
        };
        let span = Rat::one() - &margin - &margin;
        let center: Vec<Rat> = (0..m).map(|_| &margin + &span * sample(&mut rng)).collect();
        let mut images = Vec::with_capacity(d);
        for _ in 0..d {
            let pt: Vec<Rat> = center
                .iter()
                .map(|c| {
                    let delta = (sample(&mut rng) + sample(&mut rng) - Rat::one()) * r;
                    (c + delta).max(Rat::zero()).min(Rat::one())
                })
                .collect();
            images.push(QPoint::new(piece.map.eval(&pt)?));
        }
        let dv = det(&monomial_matrix(&images, n, e)?)?.abs();
        if dv >= bound {
            return Err(Error::Verification(format!(
                "cluster determinant {} violates the bound {}",
                format_rat(&dv),
                format_rat(&bound)
            )));
        }
        if dv > max_abs_det {
            max_abs_det = dv;
        }
    }
    let max_ratio = if bound.is_zero() { Rat::zero() } else { &max_abs_det / &bound };
    Ok(ClusterReport { trials, bound, max_abs_det, max_ratio })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exponents::profile;
    use crate::parametrize::{strong_param_from_curve, SweepConfig};
    use crate::poly::IPoly;
    use crate::rational::{rat, rat_int};
    use crate::parametrize::RatFunc1;

    fn quick_cfg() -> SweepConfig {
        SweepConfig { init_splits_log2: 3, min_width_log2: 10, max_depth: 18 }
    }

    #[test]
    fn k_constant_example_121() {
        // (m,n,e)=(1,2,1): D=3, b=2, k=3, c = D(1,3) = 4, #J = 34
        let exact = bound_constant_k(1, 2, 1, true).unwrap();
        assert_eq!(exact, rat_int(34 * 6 * 64));
        let fallback = bound_constant_k(1, 2, 1, false).unwrap();
        assert_eq!(fallback, rat_int(64 * 6 * 64));
        assert!(fallback >= exact);
    }

    #[test]
    fn fallback_dominates_exact() {
        for (m, n, e) in [(1, 2, 1), (1, 2, 2), (1, 3, 1), (2, 3, 1), (1, 3, 2)] {
            let exact = bound_constant_k(m, n, e, true).unwrap();
            let fallback = bound_constant_k(m, n, e, false).unwrap();
            assert!(fallback >= exact, "({m},{n},{e})");
        }
        assert!(bound_constant_k(2, 2, 1, true).is_err());
    }

    #[test]
    fn radius_satisfies_and_maximizes() {
        for t in [1u64, 2, 5, 10, 30] {
            let pr = profile(1, 2, 2, true).unwrap();
            let r = radius_r(&pr.bound_k, &pr, t);
            let ned: u64 = (&pr.ned()).try_into().unwrap();
            let b: u64 = (&pr.big_b).try_into().unwrap();
            let tp = rat_pow(&Rat::from_integer(BigInt::from(t)), ned);
            assert!(&pr.bound_k * rat_pow(&r, b) * &tp <= Rat::one());
            if r < Rat::one() {
                let r2 = &r + &r;
                assert!(&pr.bound_k * rat_pow(&r2, b) * &tp > Rat::one(), "doubling must violate");
            }
        }
        // artificial K <= 1 at T = 1 keeps r = 1
        let pr = profile(1, 2, 1, true).unwrap();
        assert_eq!(radius_r(&rat(1, 2), &pr, 1), rat_int(1));
    }

    #[test]
    fn tiling_examples() {
        let centers = tile_unit_cube(1, &rat(1, 2)).unwrap();
        assert_eq!(centers, vec![vec![rat(1, 2)]]);
        let centers = tile_unit_cube(1, &rat(1, 6)).unwrap();
        assert_eq!(centers, vec![vec![rat(1, 6)], vec![rat(1, 2)], vec![rat(5, 6)]]);
        let centers = tile_unit_cube(2, &rat(1, 4)).unwrap();
        assert_eq!(centers.len(), 4);
        // covering check on a sample grid
        for r in [rat(1, 6), rat(1, 5), rat(2, 7), rat(1, 3)] {
            let centers = tile_unit_cube(1, &r).unwrap();
            let n = boxes_per_axis(&r);
            assert!(BigInt::from(n) <= (Rat::one() / &r).ceil().to_integer());
            for i in 1..100i64 {
                let x = rat(i, 100);
                assert!(
                    centers.iter().any(|c| (&x - &c[0]).abs() <= r),
                    "x={x} uncovered at r={r}"
                );
            }
        }
    }

    #[test]
    fn box_index_is_smallest_cover() {
        let r = rat(1, 6);
        let n = boxes_per_axis(&r);
        assert_eq!(n, 3);
        assert_eq!(box_axis_index(&rat(1, 10), &r, n), 1);
        assert_eq!(box_axis_index(&rat(1, 2), &r, n), 2);
        // boundary x = 1/3 is covered by boxes 1 and 2; tie to 1
        assert_eq!(box_axis_index(&rat(1, 3), &r, n), 1);
        assert_eq!(box_axis_index(&rat(99, 100), &r, n), 3);
    }

    fn parabola_param() -> StrongParam {
        let comps = vec![
            RatFunc1::poly(IPoly::from_i64(&[0, 1]), Rat::zero(), Rat::one()),
            RatFunc1::poly(IPoly::from_i64(&[0, 0, 1]), Rat::zero(), Rat::one()),
        ];
        strong_param_from_curve(comps, 2, 6, &quick_cfg()).unwrap()
    }

    fn parabola_points(t_param: u64) -> Vec<(QPoint, Vec<Rat>)> {
        crate::enumerate::rationals_up_to(t_param)
            .filter(|q| *q > Rat::zero() && *q < Rat::one())
            .map(|q| (QPoint::new(vec![q.clone(), &q * &q]), vec![q]))
            .collect()
    }

    #[test]
    fn parabola_cover_end_to_end() {
        let param = parabola_param();
        let pts = parabola_points(3);
        assert_eq!(pts.len(), 3); // 1/2, 1/3, 2/3
        let cert = cover_points(&param, 2, 9, &pts, true).unwrap();
        assert!(cert.theory_violations.is_empty());
        assert_eq!(cert.hypersurfaces.len(), 1);
        // the unique deduplicated hypersurface is canonical(y - x^2):
        // graded-lex coefficients (1, x, y, x^2, xy, y^2)
        let expect = Hypersurface::new(
            2,
            2,
            vec![0, 0, 1, -1, 0, 0].into_iter().map(BigInt::from).collect(),
        )
        .unwrap();
        assert_eq!(cert.hypersurfaces[0], expect);
        verify_certificate(&cert, &param, &pts).unwrap();
        let bound = hypersurface_count_bound(&cert.params);
        assert!(BigUint::from(cert.hypersurfaces.len()) <= bound);
    }

    #[test]
    fn certificate_round_trip_and_tampering() {
        let param = parabola_param();
        let pts = parabola_points(4);
        let cert = cover_points(&param, 2, 16, &pts, true).unwrap();
        let text = cert.serialize();
        let back = CoverCertificate::parse(&text).unwrap();
        assert_eq!(back.serialize(), text);
        verify_certificate(&back, &param, &pts).unwrap();
        // perturb one hypersurface coefficient
        let mut bad = back.clone();
        bad.hypersurfaces[0].coeffs[2] += BigInt::one();
        assert!(verify_certificate(&bad, &param, &pts).is_err());
        // move a point to a wrong box
        let mut bad = back.clone();
        bad.points[0].box_id += 1;
        assert!(verify_certificate(&bad, &param, &pts).is_err());
        // truncated text fails to parse
        assert!(CoverCertificate::parse("").is_err());
    }

    #[test]
    fn empty_input_yields_empty_certificate() {
        let param = parabola_param();
        let cert = cover_points(&param, 2, 1, &[], true).unwrap();
        assert!(cert.hypersurfaces.is_empty());
        assert!(cert.points.is_empty());
        verify_certificate(&cert, &param, &[]).unwrap();
    }

    #[test]
    fn small_fit_prefers_low_height_equation() {
        let p = QPoint::new(vec![rat(1, 2), rat(1, 4)]);
        let h = fit_small_hypersurface(&[p], 2, 2, 3, 2).unwrap().unwrap();
        let expect = Hypersurface::new(
            2,
            2,
            vec![0, 0, 1, -1, 0, 0].into_iter().map(BigInt::from).collect(),
        )
        .unwrap();
        assert_eq!(h, expect);
    }

    #[test]
    fn cluster_check_affine() {
        // f(t) = (t/2, t/3), e = 1: determinant bound holds with a
        // comfortable margin, and halving r shrinks the observed max
        let comps = vec![
            RatFunc1::new(IPoly::from_i64(&[0, 1]), IPoly::from_i64(&[2]), Rat::zero(), Rat::one())
                .unwrap(),
            RatFunc1::new(IPoly::from_i64(&[0, 1]), IPoly::from_i64(&[3]), Rat::zero(), Rat::one())
                .unwrap(),
        ];
        let param = strong_param_from_curve(comps, 2, 3, &quick_cfg()).unwrap();
        let rep = cluster_determinant_check(&param, 1, &rat(1, 8), 20, 7).unwrap();
        assert!(rep.max_ratio < Rat::one());
        let rep2 = cluster_determinant_check(&param, 1, &rat(1, 16), 20, 7).unwrap();
        assert!(rep2.max_abs_det <= rep.max_abs_det);
        // degenerate cluster: repeated points give det = 0 < bound
        assert!(rep.bound > Rat::zero());
    }

    #[test]
    fn count_bound_examples() {
        let pr = profile(1, 2, 2, true).unwrap();
        let mut last = BigUint::zero();
        for t in [1u64, 3, 10, 30, 100] {
            let params = CoverParams::from_profile(&pr, t);
            let bound = hypersurface_count_bound(&params);
            assert!(bound >= BigUint::one());
            assert!(bound >= last, "budget must grow with T");
            last = bound;
        }
    }
}

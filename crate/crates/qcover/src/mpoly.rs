//! Sparse multivariate polynomials over the integers, used by exact
//! membership predicates and the chain-rule coefficient polynomials.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_traits::{One, Zero};

use crate::rational::Rat;

/// Terms keyed by exponent vector; zero coefficients never stored.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MPoly {
    vars: usize,
    terms: BTreeMap<Vec<u32>, BigInt>,
}

impl MPoly {
    pub fn zero(vars: usize) -> Self {
        MPoly { vars, terms: BTreeMap::new() }
    }

    pub fn constant(vars: usize, c: BigInt) -> Self {
        let mut p = MPoly::zero(vars);
        if !c.is_zero() {
            p.terms.insert(vec![0; vars], c);
        }
        p
    }

    pub fn var(vars: usize, i: usize) -> Self {
        assert!(i < vars);
        let mut exps = vec![0; vars];
        exps[i] = 1;
        let mut p = MPoly::zero(vars);
        p.terms.insert(exps, BigInt::one());
        p
    }

    pub fn from_terms(vars: usize, terms: Vec<(Vec<u32>, BigInt)>) -> Self {
        let mut p = MPoly::zero(vars);
        for (e, c) in terms {
            assert_eq!(e.len(), vars);
            p.add_term(e, c);
        }
        p
    }

    pub fn vars(&self) -> usize {
        self.vars
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Vec<u32>, &BigInt)> {
        self.terms.iter()
    }

    fn add_term(&mut self, exps: Vec<u32>, c: BigInt) {
        if c.is_zero() {
            return;
        }
        let entry = self.terms.entry(exps).or_insert_with(BigInt::zero);
        *entry += c;
        if entry.is_zero() {
            // re-fetch the key to remove; easier to rebuild lazily
            self.terms.retain(|_, v| !v.is_zero());
        }
    }

    pub fn add(&self, other: &MPoly) -> MPoly {
        assert_eq!(self.vars, other.vars);
        let mut out = self.clone();
        for (e, c) in &other.terms {
            out.add_term(e.clone(), c.clone());
        }
        out
    }

    pub fn sub(&self, other: &MPoly) -> MPoly {
        self.add(&other.scale(&BigInt::from(-1)))
    }

    pub fn scale(&self, c: &BigInt) -> MPoly {
        if c.is_zero() {
            return MPoly::zero(self.vars);
        }
        MPoly {
            vars: self.vars,
            terms: self.terms.iter().map(|(e, a)| (e.clone(), a * c)).collect(),
        }
    }

    pub fn mul(&self, other: &MPoly) -> MPoly {
        assert_eq!(self.vars, other.vars);
        let mut out = MPoly::zero(self.vars);
        for (e1, c1) in &self.terms {
            for (e2, c2) in &other.terms {
                let exps: Vec<u32> = e1.iter().zip(e2).map(|(a, b)| a + b).collect();
                out.add_term(exps, c1 * c2);
            }
        }
        out
    }

    pub fn partial(&self, i: usize) -> MPoly {
        assert!(i < self.vars);
        let mut out = MPoly::zero(self.vars);
        for (e, c) in &self.terms {
            if e[i] == 0 {
                continue;
            }
            let mut exps = e.clone();
            exps[i] -= 1;
            out.add_term(exps, c * BigInt::from(e[i]));
        }
        out
    }

    pub fn eval(&self, point: &[Rat]) -> Rat {
        assert_eq!(point.len(), self.vars);
        let mut acc = Rat::zero();
        for (e, c) in &self.terms {
            let mut term = Rat::from_integer(c.clone());
            for (x, &k) in point.iter().zip(e.iter()) {
                for _ in 0..k {
                    term *= x;
                }
            }
            acc += term;
        }
        acc
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::{rat, rat_int};

    #[test]
    fn build_and_eval() {
        // y - x^2 in vars (x, y)
        let x = MPoly::var(2, 0);
        let y = MPoly::var(2, 1);
        let p = y.sub(&x.mul(&x));
        assert_eq!(p.eval(&[rat(1, 2), rat(1, 4)]), rat_int(0));
        assert_eq!(p.eval(&[rat_int(2), rat_int(3)]), rat_int(-1));
        assert_eq!(p.partial(0).eval(&[rat_int(3), rat_int(0)]), rat_int(-6));
        assert_eq!(p.partial(1).eval(&[rat_int(3), rat_int(0)]), rat_int(1));
    }
}

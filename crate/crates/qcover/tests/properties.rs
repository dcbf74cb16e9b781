//! Randomized invariants via proptest.

use std::collections::HashSet;

use num_bigint::BigUint;
use proptest::prelude::*;
use qcover::exponents::{b_of, dim_d};
use qcover::rational::{format_rat, height_rat, parse_rat, rat, Rat};

proptest! {
    // height is invariant under negation and reciprocal
    #[test]
    fn height_symmetries(num in -200i64..=200, den in 1i64..=200) {
        let q = rat(num, den);
        prop_assert_eq!(height_rat(&q), height_rat(&-q.clone()));
        if num != 0 {
            prop_assert_eq!(height_rat(&q.clone().recip()), height_rat(&q));
        }
    }

    // enumeration is duplicate-free, complete, and exactly bounded
    #[test]
    fn enumeration_exact(t in 1u64..=25) {
        let seen: Vec<Rat> = qcover::enumerate::rationals_up_to(t).collect();
        let keys: HashSet<String> = seen.iter().map(format_rat).collect();
        prop_assert_eq!(keys.len(), seen.len());
        for q in &seen {
            prop_assert!(height_rat(q) <= BigUint::from(t));
        }
        // every coprime pair within the bound appears
        for p in -(t as i64)..=(t as i64) {
            for d in 1..=(t as i64) {
                let q = rat(p, d);
                if height_rat(&q) <= BigUint::from(t) {
                    prop_assert!(keys.contains(&format_rat(&q)));
                }
            }
        }
    }

    // the degree threshold b is the exact sandwich point
    #[test]
    fn b_sandwich(m in 1u32..=3, dn in 1u32..=2, e in 1u32..=15) {
        let n = m + dn;
        let b = b_of(m, n, e);
        prop_assert!(dim_d(m, b) <= dim_d(n, e));
        prop_assert!(dim_d(n, e) < dim_d(m, b + 1));
    }

    // rational serialization round-trips exactly
    #[test]
    fn rat_roundtrip(num in -10_000i64..=10_000, den in 1i64..=10_000) {
        let q = rat(num, den);
        prop_assert_eq!(parse_rat(&format_rat(&q)).unwrap(), q);
    }
}

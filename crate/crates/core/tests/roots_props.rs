//! Sturm counts and root isolation checked against polynomials built from
//! known roots.

mod common;

use std::cmp::Ordering;

use common::props::{self, arb_c, arb_roots, known_roots, with_known_roots};
use proptest::prelude::*;
use qecad::rational::{int, ratio, to_f64};
use qecad::roots::{isolate_roots, sturm_count, AlgebraicNumber};

proptest! {
    #![proptest_config(ProptestConfig::with_cases(100))]

    #[test]
    fn sturm_and_isolation_agree_with_known_roots(roots in arb_roots(), c in arb_c()) {
        props::sturm_and_isolation_agree(&roots, c)?;
    }

    #[test]
    fn sturm_counts_subintervals(roots in arb_roots(), c in arb_c(), lo in -40i64..40, len in 1i64..40) {
        let p = with_known_roots(&roots, c);
        let (lo, hi) = (ratio(2 * lo + 1, 4), ratio(2 * (lo + len) + 1, 4));
        let expected = known_roots(&roots, c).iter().filter(|r| **r > to_f64(&lo) && **r <= to_f64(&hi)).count();
        match sturm_count(&p, &lo, &hi) {
            Ok(n) => prop_assert_eq!(n, expected),
            // Endpoints that are roots are refused, never miscounted.
            Err(_) => prop_assert!(roots.contains(&lo) || roots.contains(&hi)),
        }
    }

    #[test]
    fn comparison_is_a_total_order_matching_values(a in 2i64..30, b in 2i64..30, q in -6i64..6) {
        let s = |n: i64| {
            let isolated = isolate_roots(&[with_known_roots(&[], n)]).unwrap();
            isolated[1].clone()
        };
        prop_assume!(((a as f64).sqrt().fract() != 0.0) && ((b as f64).sqrt().fract() != 0.0));
        let (x, y) = (s(a), s(b));
        let r = AlgebraicNumber::from_rational(int(q));
        let mut v = vec![x.clone(), y.clone(), r.clone()];
        v.sort();
        for w in v.windows(2) {
            prop_assert!(w[0].to_f64() <= w[1].to_f64());
        }
        prop_assert_eq!(x.compare(&y), (a as f64).sqrt().partial_cmp(&(b as f64).sqrt()).unwrap());
        prop_assert_eq!(x.compare(&y).reverse(), y.compare(&x));
        prop_assert_eq!(x.compare(&x), Ordering::Equal);
    }
}

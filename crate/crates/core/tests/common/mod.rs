//! Shared generators for the integration suites.
#![allow(dead_code)]

pub mod props;

use proptest::prelude::*;
use qecad::formula::Formula;
use qecad::poly::{Monomial, Polynomial, VarOrder};
use qecad::qe::{evaluate_at_sample, Witness};
use rand::Rng;
use rand_chacha::ChaCha8Rng;
use qecad::rational::{int, ratio, Rational};

/// Dense univariate polynomial from low-degree-first integer coefficients.
pub fn upoly(vars: &VarOrder, v: usize, coeffs: &[i64]) -> Polynomial {
    let x = Polynomial::var(vars, v);
    let mut acc = Polynomial::zero(vars);
    for c in coeffs.iter().rev() {
        acc = &(&acc * &x) + &Polynomial::from_int(vars, *c);
    }
    acc
}

/// Random sparse polynomial with small integer coefficients and degree at most `deg` per variable.
pub fn arb_poly(vars: VarOrder, deg: u32, max_terms: usize) -> impl Strategy<Value = Polynomial> {
    let n = vars.len();
    prop::collection::vec((prop::collection::vec(0..=deg, n), -5i64..=5), 1..=max_terms).prop_map(move |terms| {
        Polynomial::from_terms(&vars, terms.into_iter().map(|(e, c)| (Monomial(e), int(c))))
    })
}

pub fn arb_rational() -> impl Strategy<Value = Rational> {
    (-20i64..=20, 1i64..=6).prop_map(|(n, d)| ratio(n, d))
}

pub fn eval_at(p: &Polynomial, pt: &[Rational]) -> Rational {
    p.eval_all(pt)
}

/// Points that hit small integers (and so sections) as well as generic fractions.
pub fn straddling_point(rng: &mut ChaCha8Rng, n: usize) -> Vec<Rational> {
    (0..n)
        .map(|_| match rng.gen_range(0..3) {
            0 => int(rng.gen_range(-3..=3)),
            1 => ratio(rng.gen_range(-30..=30), rng.gen_range(1..=7)),
            _ => ratio(rng.gen_range(-400..=400), rng.gen_range(1..=97)),
        })
        .collect()
}

/// Truth of a quantifier-free formula over the witness variables at the exact witness point.
pub fn holds_at_witness(m: &Formula, w: &Witness) -> bool {
    let order = VarOrder::new(&w.vars);
    fn remap(f: &Formula, order: &VarOrder) -> Formula {
        let r = |c: &Formula| Box::new(remap(c, order));
        match f {
            Formula::Atom(p, rel) => Formula::Atom(p.remap(order).unwrap(), *rel),
            Formula::And(v) => Formula::And(v.iter().map(|c| remap(c, order)).collect()),
            Formula::Or(v) => Formula::Or(v.iter().map(|c| remap(c, order)).collect()),
            Formula::Not(a) => Formula::Not(r(a)),
            Formula::Implies(a, b) => Formula::Implies(r(a), r(b)),
            Formula::Iff(a, b) => Formula::Iff(r(a), r(b)),
            other => other.clone(),
        }
    }
    evaluate_at_sample(&remap(m, &order), &w.point).unwrap()
}

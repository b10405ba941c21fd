//! Decision soundness against random search, short-circuit transparency,
//! determinism, and the substitution oracle for elimination.

use std::collections::HashMap;

use proptest::prelude::*;
use qecad::formula::{parse, Formula, Quantifier, Rel};
use qecad::poly::{Polynomial, VarOrder};
use qecad::qe::{decide, eliminate, evaluate_qf, Decision, QeOptions};
use qecad::rational::{ratio, Rational};

mod common;
use common::{holds_at_witness, straddling_point};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn xy() -> VarOrder {
    VarOrder::new(&["x", "y"])
}

fn arb_atom() -> impl Strategy<Value = Formula> {
    let rel = prop::sample::select(vec![Rel::Eq, Rel::Ne, Rel::Lt, Rel::Le, Rel::Gt, Rel::Ge]);
    (prop::collection::vec(-3i64..=3, 5), rel).prop_map(|(c, rel)| {
        let v = xy();
        let (x, y) = (Polynomial::var(&v, 0), Polynomial::var(&v, 1));
        let k = |n: i64| Polynomial::from_int(&v, n);
        let p = &(&(&(&k(c[0]) * &(&x * &x)) + &(&k(c[1]) * &(&x * &y))) + &(&k(c[2]) * &y)) + &(&(&k(c[3]) * &x) + &k(c[4]));
        Formula::atom(p, rel)
    })
}

fn arb_matrix() -> impl Strategy<Value = Formula> {
    arb_atom().prop_recursive(2, 6, 3, |inner| {
        prop_oneof![
            prop::collection::vec(inner.clone(), 2..=3).prop_map(Formula::And),
            prop::collection::vec(inner, 2..=3).prop_map(Formula::Or),
        ]
    })
}

fn holds_at(m: &Formula, x: &Rational, y: &Rational) -> bool {
    let env: HashMap<String, Rational> = [("x".to_string(), x.clone()), ("y".to_string(), y.clone())].into();
    evaluate_qf(m, &env).unwrap()
}

fn random_points(rng: &mut ChaCha8Rng, n: usize) -> Vec<(Rational, Rational)> {
    (0..n)
        .map(|_| {
            let mut r = || ratio(rng.gen_range(-24..=24), rng.gen_range(1..=4));
            (r(), r())
        })
        .collect()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(50))]

    #[test]
    fn decide_is_sound_against_random_search(m in arb_matrix(), exists in any::<bool>(), seed in any::<u64>()) {
        let q = if exists { Quantifier::Exists } else { Quantifier::Forall };
        let names = ["x".to_string(), "y".to_string()];
        let s = Formula::quantify(q, &names, m.clone());
        let d = decide(&s, &QeOptions::default()).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        for (x, y) in random_points(&mut rng, 300) {
            let v = holds_at(&m, &x, &y);
            if exists && v {
                prop_assert!(d.value, "{} has rational witness ({}, {})", s, x, y);
            }
            if !exists && !v {
                prop_assert!(!d.value, "{} has counterexample ({}, {})", s, x, y);
            }
        }
        if let Some(w) = &d.witness {
            prop_assert_eq!(holds_at_witness(&m, w), exists, "{} witness {}", s, w);
        }
        if d.value == exists {
            prop_assert!(d.witness.is_some());
        }
        let off = decide(&s, &QeOptions { short_circuit: false, ..Default::default() }).unwrap();
        prop_assert_eq!(off.value, d.value);
    }
}

pub const DECIDE_CORPUS: &[(&str, bool)] = &[
    ("(forall x) x*x >= 0", true),
    ("exists x. x^2 + 1 = 0", false),
    ("forall a b c. a /= 0 -> ((exists x. a*x^2 + b*x + c = 0) <-> b^2 - 4*a*c >= 0)", true),
    ("forall a b c. (exists x. a*x^2 + b*x + c = 0) <-> b^2 - 4*a*c >= 0", false),
    ("forall a b c. a /= 0 -> ((forall x. a*x^2 + b*x + c > 0) <-> (b^2 - 4*a*c < 0 and a > 0))", true),
    ("forall x. exists y. y > x^2", true),
    ("exists y. forall x. y > x^2", false),
    ("forall x. exists y. x*y = 1", false),
    ("forall x. x /= 0 -> exists y. x*y = 1", true),
    ("exists x y. x^2 + y^2 = 1 and x = y", true),
    ("exists x y. x^2 + y^2 < 0", false),
    ("forall x y. x^2 + y^2 >= 2*x*y", true),
    ("exists x. x^3 - 2 = 0 and x^2 < 2", true),
];

fn decision(text: &str, short: bool) -> Decision {
    decide(&parse(text).unwrap(), &QeOptions { short_circuit: short, ..Default::default() }).unwrap()
}

#[test]
fn corpus_decisions_with_and_without_short_circuit() {
    for (text, want) in DECIDE_CORPUS {
        let on = decision(text, true);
        let off = decision(text, false);
        assert_eq!(on.value, *want, "{text}");
        assert_eq!(off.value, *want, "{text}");
        assert!(on.stats.cells_built <= off.stats.cells_built, "{text}");
    }
}

#[test]
fn repeated_runs_agree() {
    for (text, _) in DECIDE_CORPUS {
        let a = decision(text, true);
        let b = decision(text, true);
        assert_eq!(a.value, b.value);
        assert_eq!(a.witness.map(|w| w.to_string()), b.witness.map(|w| w.to_string()));
        assert_eq!(a.stats, b.stats);
    }
    let f = parse("exists x. y = x^2 and z = x^3").unwrap();
    let first = eliminate(&f, &QeOptions::default()).unwrap().formula.to_string();
    for _ in 0..3 {
        assert_eq!(eliminate(&f, &QeOptions::default()).unwrap().formula.to_string(), first);
    }
}

#[test]
fn elimination_agrees_with_substituted_decisions() {
    let cases = [
        "exists x. y = x^2",
        "exists x. x - y = 0",
        "exists x. a*x + b = 0",
        "forall x. x^2 + b*x + c > 0",
        "exists x. x^2 + y^2 = 1",
        "exists x. y = x^2 and z = x^3",
    ];
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    for text in cases {
        let f = parse(text).unwrap();
        let out = eliminate(&f, &QeOptions::default()).unwrap().formula;
        let free = f.free_vars();
        for _ in 0..300 {
            let pt = straddling_point(&mut rng, free.len());
            let env: HashMap<String, Rational> = free.iter().cloned().zip(pt).collect();
            let want = decide(&f.substitute(&env), &QeOptions::default()).unwrap().value;
            assert_eq!(evaluate_qf(&out, &env).unwrap(), want, "{text} -> {out} at {env:?}");
        }
    }
}

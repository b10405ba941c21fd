//! Property bodies shared by the proptest suites and the acceptance runner.

use std::cmp::Ordering;
use std::collections::HashMap;

use proptest::prelude::*;
use proptest::test_runner::{Config, RngAlgorithm, TestRng, TestRunner};
use qecad::cad::{compute_cad, CadTree};
use qecad::formula::{parse, render, to_prenex, Formula, Quantifier, Rel};
use qecad::poly::{gcd, Polynomial, VarOrder};
use qecad::rational::{int, ratio, to_f64, Rational};
use qecad::resultant::{psc, sylvester_resultant};
use qecad::roots::{isolate_roots, root_bound, sturm_count, AlgebraicNumber, Sign};
use rand::Rng;
use rand_chacha::ChaCha8Rng;

use super::{arb_poly, upoly};

pub type Check = Result<(), TestCaseError>;

/// Runner with a fixed seed, for reproducible counts outside the test harness.
pub fn runner(cases: u32) -> TestRunner {
    let config = Config { cases, failure_persistence: None, ..Config::default() };
    TestRunner::new_with_rng(config, TestRng::deterministic_rng(RngAlgorithm::ChaCha))
}

pub fn yx() -> VarOrder {
    VarOrder::new(&["y", "x"])
}

// ---- resultants ----

pub fn arb_resultant_triple() -> impl Strategy<Value = (Polynomial, Polynomial, Polynomial)> {
    (arb_poly(yx(), 2, 3), arb_poly(yx(), 2, 3), arb_poly(yx(), 2, 3))
}

pub fn resultant_multiplicative(f: &Polynomial, g: &Polynomial, h: &Polynomial) -> Check {
    prop_assume!(f.degree_in(1) >= 1 && g.degree_in(1) >= 1 && h.degree_in(1) >= 1);
    let lhs = sylvester_resultant(&(f * g), h, 1).unwrap();
    let rhs = &sylvester_resultant(f, h, 1).unwrap() * &sylvester_resultant(g, h, 1).unwrap();
    prop_assert_eq!(lhs, rhs);
    Ok(())
}

pub fn arb_gcd_pair() -> impl Strategy<Value = (Vec<i64>, Vec<i64>, Vec<i64>)> {
    (
        prop::collection::vec(-3i64..=3, 1..=3),
        prop::collection::vec(-4i64..=4, 1..=4),
        prop::collection::vec(-4i64..=4, 1..=4),
    )
}

/// `a = g u`, `b = g w`: the first nonzero psc index equals the gcd degree.
pub fn psc_matches_gcd_degree(common: &[i64], u: &[i64], w: &[i64]) -> Check {
    let v = VarOrder::new(&["x"]);
    let g = upoly(&v, 0, common);
    let a = &g * &upoly(&v, 0, u);
    let b = &g * &upoly(&v, 0, w);
    prop_assume!(a.degree_in(0) >= 1 && b.degree_in(0) >= 1);
    // Degree of the gcd, certified independently: it divides both, and the
    // cofactors share no root (nonzero resultant, or one cofactor is constant).
    let d = gcd(&a, &b);
    let (ca, cb) = (a.div_exact(&d).unwrap(), b.div_exact(&d).unwrap());
    let coprime = ca.degree_in(0) == 0 || cb.degree_in(0) == 0 || !sylvester_resultant(&ca, &cb, 0).unwrap().is_zero();
    prop_assert!(coprime);
    let want = d.degree_in(0) as usize;
    let max = a.degree_in(0).min(b.degree_in(0)) as usize;
    let first = (0..=max).find(|&l| !psc(&a, &b, 0, l).unwrap().is_zero()).unwrap();
    prop_assert_eq!(first, want);
    Ok(())
}

// ---- roots ----

/// `∏ (d x - n)` times `x^2 - c`, with `c` never a rational square.
pub fn with_known_roots(roots: &[Rational], c: i64) -> Polynomial {
    let v = VarOrder::new(&["x"]);
    let x = Polynomial::var(&v, 0);
    let mut p = &(&x * &x) - &Polynomial::from_int(&v, c);
    for r in roots {
        let lin = &x.scale(&Rational::from_integer(r.denom().clone())) - &Polynomial::constant(&v, Rational::from_integer(r.numer().clone()));
        p = &p * &lin;
    }
    p
}

/// Known real roots as floats, ascending.
pub fn known_roots(roots: &[Rational], c: i64) -> Vec<f64> {
    let mut out: Vec<f64> = roots.iter().map(to_f64).collect();
    if c > 0 {
        let s = (c as f64).sqrt();
        out.push(s);
        out.push(-s);
    }
    out.sort_by(|a, b| a.partial_cmp(b).unwrap());
    out
}

pub fn arb_roots() -> impl Strategy<Value = Vec<Rational>> {
    prop::collection::btree_set((-12i64..=12, 1i64..=3), 0..=4).prop_map(|s| {
        let mut v: Vec<Rational> = s.into_iter().map(|(n, d)| ratio(n, d)).collect();
        v.sort();
        v.dedup();
        v
    })
}

pub fn arb_c() -> impl Strategy<Value = i64> {
    prop::sample::select(vec![-3i64, -1, 2, 3, 5, 7, 11])
}

pub fn sturm_and_isolation_agree(roots: &[Rational], c: i64) -> Check {
    let p = with_known_roots(roots, c);
    let want = known_roots(roots, c);
    let b = root_bound(&p).unwrap();
    prop_assert!(want.iter().all(|r| r.abs() < to_f64(&b)));
    prop_assert_eq!(sturm_count(&p, &-b.clone(), &b).unwrap(), want.len());
    let iso = isolate_roots(&[p.clone()]).unwrap();
    prop_assert_eq!(iso.len(), want.len());
    for (a, w) in iso.iter().zip(&want) {
        prop_assert!((a.to_f64() - w).abs() < 1e-9, "{} vs {}", a, w);
    }
    for r in roots {
        prop_assert!(iso.iter().any(|a| a.compare_rational(r) == Ordering::Equal));
    }
    Ok(())
}

// ---- decompositions ----

/// (polynomials as a formula, variable order)
pub const CAD_CORPUS: &[(&str, &[&str])] = &[
    ("x2^2 - x1 = 0", &["x1", "x2"]),
    ("x1^2 + x2^2 - 1 = 0", &["x1", "x2"]),
    ("x1*x2 - 1 = 0 and x2 - x1 = 0", &["x1", "x2"]),
    ("x1^2 - 2 = 0 and x2^3 - 2*x1 = 0", &["x1", "x2"]),
    ("x1*x2 = 0 and x2^2 + x1 - 1 = 0", &["x1", "x2"]),
    ("x1^2 + x2^2 + x3^2 - 4 = 0 and x3 - x1*x2 = 0", &["x1", "x2", "x3"]),
    ("r12 = 0 and r13 = 0 and r23 = 0", &["r12", "r13", "r23"]),
    ("a*x^2 + b*x + 1 = 0", &["a", "b", "x"]),
];

pub fn cad_tree(text: &str, names: &[&str]) -> CadTree {
    let f = parse(text).unwrap();
    let vars = VarOrder::new(names);
    compute_cad(&f.polynomials(), &vars, names.len()).unwrap()
}

/// Random rational strictly between `a` and `b` (either may be unbounded).
pub fn between(rng: &mut ChaCha8Rng, a: Option<&AlgebraicNumber>, b: Option<&AlgebraicNumber>) -> Rational {
    let t = ratio(rng.gen_range(1..100), 100);
    match (a, b) {
        (None, None) => ratio(rng.gen_range(-40..40), 7),
        (Some(a), None) => a.hi().clone() + ratio(rng.gen_range(1..40), 7),
        (None, Some(b)) => b.lo().clone() - ratio(rng.gen_range(1..40), 7),
        (Some(a), Some(b)) => {
            let mut w = ratio(1, 4);
            loop {
                let (ra, rb) = (a.refined_to(&w), b.refined_to(&w));
                let x = ra.as_rational().unwrap_or_else(|| ra.hi().clone());
                let y = rb.as_rational().unwrap_or_else(|| rb.lo().clone());
                if x < y {
                    return &x + &(&(&y - &x) * &t);
                }
                w = w / ratio(16, 1);
            }
        }
    }
}

pub fn signs_at(fam: &[Polynomial], pt: &[Rational], n: usize) -> Vec<Sign> {
    let mut full = pt.to_vec();
    full.resize(n, Rational::from_integer(0.into()));
    fam.iter().map(|p| Sign::of(&p.eval_all(&full))).collect()
}

/// Samples `per_leaf` random interior points of every full-dimensional leaf and
/// compares the family signs there with the signs recorded on the cell.
/// Returns the number of points checked.
pub fn full_leaves_sign_invariant(rng: &mut ChaCha8Rng, text: &str, names: &[&str], per_leaf: usize) -> Result<usize, String> {
    let t = cad_tree(text, names);
    let n = names.len();
    let full: Vec<_> = t.leaves().into_iter().filter(|c| c.is_full_dimensional()).cloned().collect();
    if full.is_empty() {
        return Err(format!("{text}: no full-dimensional leaves"));
    }
    let mut checked = 0;
    for cell in full {
        for _ in 0..per_leaf {
            let mut pt: Vec<Rational> = Vec::new();
            for k in 0..n {
                let roots = t.cad.roots_over(&pt).map_err(|e| e.to_string())?;
                if cell.path[k] % 2 != 1 {
                    return Err(format!("{text}: full cell {:?} has a section index", cell.path));
                }
                let gap = (cell.path[k] - 1) / 2;
                pt.push(between(rng, gap.checked_sub(1).map(|g| &roots[g]), roots.get(gap)));
                if signs_at(t.cad.family(k), &pt, n) != cell.signs[k] {
                    return Err(format!("{text}: cell {:?} at {:?}", cell.path, pt));
                }
            }
            checked += 1;
        }
    }
    Ok(checked)
}

// ---- formulas ----

/// Brute-force truth with quantifiers ranging over a finite domain. The
/// prenex rewrites are first-order equivalences, valid over any nonempty domain.
pub fn eval_finite(f: &Formula, env: &mut HashMap<String, Rational>, domain: &[Rational]) -> bool {
    match f {
        Formula::True => true,
        Formula::False => false,
        Formula::Atom(p, r) => {
            let v = p.eval_named(&|n| env.get(n).cloned()).expect("bound");
            r.holds(Sign::of(&v))
        }
        Formula::Not(a) => !eval_finite(a, env, domain),
        Formula::And(v) => v.iter().all(|c| eval_finite(c, env, domain)),
        Formula::Or(v) => v.iter().any(|c| eval_finite(c, env, domain)),
        Formula::Implies(a, b) => !eval_finite(a, env, domain) || eval_finite(b, env, domain),
        Formula::Iff(a, b) => eval_finite(a, env, domain) == eval_finite(b, env, domain),
        Formula::Quant(q, x, body) => {
            let saved = env.get(x).cloned();
            let mut result = *q == Quantifier::Forall;
            for d in domain {
                env.insert(x.clone(), d.clone());
                let v = eval_finite(body, env, domain);
                if (*q == Quantifier::Exists) == v {
                    result = v;
                    break;
                }
            }
            match saved {
                Some(s) => env.insert(x.clone(), s),
                None => env.remove(x),
            };
            result
        }
    }
}

const NAMES: [&str; 3] = ["x", "y", "z"];

fn arb_atom() -> impl Strategy<Value = Formula> {
    let rel = prop::sample::select(vec![Rel::Eq, Rel::Ne, Rel::Lt, Rel::Le, Rel::Gt, Rel::Ge]);
    (prop::collection::vec(-2i64..=2, 4), 0usize..3, 0usize..3, rel).prop_map(|(c, i, j, rel)| {
        let vars = VarOrder::new(&NAMES);
        let (a, b) = (Polynomial::var(&vars, i), Polynomial::var(&vars, j));
        let k = |n: i64| Polynomial::from_int(&vars, n);
        let p = &(&(&(&k(c[0]) * &a) * &b) + &(&k(c[1]) * &a)) + &(&(&k(c[2]) * &b) + &k(c[3]));
        Formula::atom(p, rel)
    })
}

/// Random formulas over x, y, z with every connective and both quantifiers.
pub fn arb_formula() -> impl Strategy<Value = Formula> {
    arb_atom().prop_recursive(4, 24, 3, |inner| {
        prop_oneof![
            inner.clone().prop_map(Formula::not),
            prop::collection::vec(inner.clone(), 2..=3).prop_map(Formula::And),
            prop::collection::vec(inner.clone(), 2..=3).prop_map(Formula::Or),
            (inner.clone(), inner.clone()).prop_map(|(a, b)| Formula::implies(a, b)),
            (inner.clone(), inner.clone()).prop_map(|(a, b)| Formula::iff(a, b)),
            (prop::sample::select(NAMES.to_vec()), inner.clone()).prop_map(|(v, b)| Formula::forall(v, b)),
            (prop::sample::select(NAMES.to_vec()), inner).prop_map(|(v, b)| Formula::exists(v, b)),
        ]
    })
}

pub fn arb_assignment() -> impl Strategy<Value = [i64; 3]> {
    [-2i64..=2, -2i64..=2, -2i64..=2]
}

pub fn prenex_preserves_truth(f: &Formula, assignment: [i64; 3]) -> Check {
    let domain: Vec<Rational> = (-2..=2).map(int).collect();
    let mut env: HashMap<String, Rational> = NAMES.iter().zip(assignment).map(|(k, v)| (k.to_string(), int(v))).collect();
    let p = to_prenex(f, None);
    prop_assert!(p.matrix.is_quantifier_free());
    let before = eval_finite(f, &mut env, &domain);
    let after = eval_finite(&p.to_formula(), &mut env, &domain);
    prop_assert_eq!(before, after, "{} became {}", f, p.to_formula());
    Ok(())
}

pub const ROUND_TRIP: &[&str] = &[
    "(forall x) x*x >= 0",
    "exists x. x^2 + 1 = 0",
    "forall a b c. a /= 0 -> ((exists x. a*x^2 + b*x + c = 0) <-> b^2 - 4*a*c >= 0)",
    "forall a b c. (exists x. a*x^2 + b*x + c = 0) <-> b^2 - 4*a*c >= 0",
    "forall a b c. a /= 0 -> ((forall x. a*x^2 + b*x + c > 0) <-> (b^2 - 4*a*c < 0 and a > 0))",
    "exists b1 b2 b3. r12 = b1*b2 and r13 = b1*b3 and r23 = b2*b3",
    "exists x1. forall x2. a*x2^2 + b*x2 + c - x1 > 0",
    "exists x. y = x^2",
    "exists x. x - y = 0",
    "r12 < 0 and r13 < 0 and r23 > 0 or r12 = 0 and r13 = 0",
    "not (x < 0 or y < 0)",
    "x > 0 -> y > 0 -> z > 0",
    "(x > 0 -> y > 0) -> z > 0",
    "x = 0 <-> y = 0 <-> z = 0",
    "x = 0 <-> (y = 0 <-> z = 0)",
    "not not x > 0",
    "true and false or true",
    "[x > 0 or y > 0] and z > 0",
    "x/2 + y/3 <= 1",
    "-x^3 + 2*x*y - 7 != 0",
    "∀x ∃y (y > x²)",
    "∃x (x ≥ 0 ∧ x ≤ 1) ∨ ¬(y ≠ 0)",
    "forall x, y: x^2 + y^2 >= 2*x*y",
    "(exists x) (forall y) x*y = 0",
    "exists x. (forall y. y^2 >= 0) and x > 0",
    "forall b1 b2 b3 b1' b2' b3'. b1*b2 = b1'*b2' -> b1 = b1'",
    "(x > 0 and y > 0) or (x < 0 and y < 0)",
    "x*(y - 1)^2 > 0",
    "forall r12 r13 r23. 1 - r12^2 > 0 and r12 = 0 -> r13 = 0",
    "exists t. x = t and y = t",
];

/// Text of every `.qe` file in the shipped corpus directory.
pub fn corpus_files() -> Vec<(String, String)> {
    let dir = std::path::Path::new(env!("CARGO_MANIFEST_DIR")).join("../../corpus");
    let mut out = Vec::new();
    for entry in std::fs::read_dir(dir).unwrap() {
        let path = entry.unwrap().path();
        if path.extension().and_then(|e| e.to_str()) == Some("qe") {
            out.push((path.display().to_string(), std::fs::read_to_string(&path).unwrap()));
        }
    }
    out.sort();
    out
}

/// Parse, render, reparse: same tree, and rendering is a fixed point.
pub fn round_trips(text: &str) -> Result<(), String> {
    let f = parse(text).map_err(|e| format!("{text}: {e}"))?;
    let r = render(&f);
    let back = parse(&r).map_err(|e| format!("{r}: {e}"))?;
    if back != f {
        return Err(format!("{text} rendered as {r} reparses differently"));
    }
    if render(&back) != r {
        return Err(format!("{r} is not a rendering fixed point"));
    }
    Ok(())
}

//! Acceptance criteria, one PASS/FAIL line each. Runs without the libtest
//! harness so the lines show up in ordinary `cargo test` output.

mod common;

use std::collections::{HashMap, HashSet};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::process::ExitCode;
use std::time::{Duration, Instant};

use common::props::{self, CAD_CORPUS, ROUND_TRIP};
use common::{holds_at_witness, straddling_point};
use qecad::cad::{compute_cad, project};
use qecad::formula::{parse, Formula};
use qecad::poly::{canonical_pieces, Polynomial, VarOrder};
use qecad::qe::{decide, eliminate, evaluate_qf, Decision, QeOptions};
use qecad::rational::{int, Rational};
use qecad::stats::{gaussian_complete_offdiag_3, heywood_model, membership_sentence, model_compare_sentence, CiStatement, CompareMode, HeywoodVariant};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

type Outcome = Result<String, String>;

fn corpus(name: &str) -> Formula {
    let path = std::path::Path::new(env!("CARGO_MANIFEST_DIR")).join("../../corpus").join(name);
    parse(&std::fs::read_to_string(&path).unwrap()).unwrap()
}

fn run(f: &Formula) -> Result<Decision, String> {
    decide(f, &QeOptions::default()).map_err(|e| e.to_string())
}

fn expect(ok: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if ok {
        Ok(())
    } else {
        Err(msg())
    }
}

fn env(names: &[&str], values: Vec<Rational>) -> HashMap<String, Rational> {
    names.iter().map(|s| s.to_string()).zip(values).collect()
}

/// Strips the quantifier prefix and splits `premise -> conclusion`.
fn implication_body(f: &Formula) -> (&Formula, &Formula) {
    let mut body = f;
    while let Formula::Quant(_, _, inner) = body {
        body = inner;
    }
    match body {
        Formula::Implies(a, b) => (a, b),
        other => panic!("not an implication: {other}"),
    }
}

/// Elimination output against decide-after-substitution at every point;
/// `also` is an extra independent characterization checked at the same points.
fn oracle_agreement(f: &Formula, out: &Formula, names: &[&str], points: &[Vec<Rational>], also: &dyn Fn(&[Rational]) -> bool) -> Result<(), String> {
    for pt in points {
        let e = env(names, pt.clone());
        let got = evaluate_qf(out, &e).map_err(|e| e.to_string())?;
        let want = run(&f.substitute(&e))?.value;
        expect(got == want, || format!("{out} gives {got} at {pt:?}, substitution gives {want}"))?;
        expect(got == also(pt), || format!("{out} gives {got} at {pt:?}, characterization disagrees"))?;
    }
    Ok(())
}

fn c1() -> Outcome {
    let d = run(&corpus("square_nonneg.qe"))?;
    expect(d.value, || "decided false".into())?;
    Ok("true".into())
}

fn c2() -> Outcome {
    let guarded = run(&corpus("quadratic_roots_guarded.qe"))?;
    expect(guarded.value, || "guarded reading decided false".into())?;
    let bare = run(&corpus("quadratic_roots_unguarded.qe"))?;
    expect(!bare.value, || "unguarded reading decided true".into())?;
    let w = bare.witness.ok_or("no witness for the unguarded reading")?;
    let vals = w.rational_values().ok_or_else(|| format!("irrational witness {w}"))?;
    let zero = Rational::from_integer(0.into());
    expect(vals["a"] == zero && vals["b"] == zero && vals["c"] != zero, || format!("witness {w} is not a = b = 0, c /= 0"))?;
    Ok(format!("guarded true, unguarded false at {w}"))
}

fn c3() -> Outcome {
    let d = run(&corpus("quadratic_positive_guarded.qe"))?;
    expect(d.value, || "decided false".into())?;
    Ok("true".into())
}

fn sign_patterns() -> Vec<Vec<Rational>> {
    let mut out = Vec::new();
    for i in -1..=1 {
        for j in -1..=1 {
            for k in -1..=1 {
                out.push(vec![int(i), int(j), int(k)]);
            }
        }
    }
    out
}

fn c4() -> Outcome {
    let f = corpus("heywood_implicit.qe");
    let out = eliminate(&f, &QeOptions::default()).map_err(|e| e.to_string())?.formula;
    expect(out.is_quantifier_free(), || format!("{out} has quantifiers"))?;
    let mut rng = ChaCha8Rng::seed_from_u64(4);
    let mut points = sign_patterns();
    points.extend((0..1000).map(|_| straddling_point(&mut rng, 3)));
    let zero = Rational::from_integer(0.into());
    // positive-product octants, the three axes and the origin
    let image = |p: &[Rational]| {
        let zeros = p.iter().filter(|v| **v == zero).count();
        zeros >= 2 || (zeros == 0 && &(&p[0] * &p[1]) * &p[2] > zero)
    };
    oracle_agreement(&f, &out, &["r12", "r13", "r23"], &points, &image)?;
    Ok(format!("{out}; {} points agree", points.len()))
}

fn c5() -> Outcome {
    let f = corpus("heywood_identify.qe");
    let d = run(&f)?;
    expect(!d.value, || "decided true".into())?;
    let w = d.witness.ok_or("no witness")?;
    let (premise, conclusion) = implication_body(&f);
    expect(holds_at_witness(premise, &w) && !holds_at_witness(conclusion, &w), || format!("witness {w} does not refute"))?;
    Ok(format!("false at {w}"))
}

fn c6() -> Outcome {
    let chain = membership_sentence(&[CiStatement::marginal(1, 2), CiStatement::conditional(1, 3, 2)], &[CiStatement::marginal(1, 3)], 3)
        .map_err(|e| e.to_string())?;
    let t = Instant::now();
    expect(run(&chain)?.value, || "first implication decided false".into())?;
    expect(t.elapsed() < Duration::from_secs(60), || "first implication over 60 s".into())?;
    let split = membership_sentence(
        &[CiStatement::marginal(1, 2), CiStatement::conditional(1, 2, 3)],
        &[CiStatement::marginal(1, 3), CiStatement::marginal(2, 3)],
        3,
    )
    .map_err(|e| e.to_string())?;
    let t = Instant::now();
    expect(run(&split)?.value, || "disjunctive implication decided false".into())?;
    expect(t.elapsed() < Duration::from_secs(60), || "disjunctive implication over 60 s".into())?;
    Ok("both true".into())
}

fn c7() -> Outcome {
    let (h, g) = (heywood_model(HeywoodVariant::Correlational), gaussian_complete_offdiag_3());
    let inc = model_compare_sentence(&h, &g, CompareMode::Inclusion).map_err(|e| e.to_string())?;
    expect(run(&inc)?.value, || "inclusion decided false".into())?;
    let eq = model_compare_sentence(&h, &g, CompareMode::Equality).map_err(|e| e.to_string())?;
    expect(!run(&eq)?.value, || "equality decided true".into())?;
    Ok(format!("{} included in {}, not equal", h.name, g.name))
}

fn c8() -> Outcome {
    let vars = VarOrder::new(&["x1", "a", "b", "c", "x2"]);
    let p = |s: &str| {
        let names: Vec<String> = ["x1", "a", "b", "c", "x2"].iter().map(|s| s.to_string()).collect();
        qecad::stats::parse_expression(s, &names).unwrap().remap(&vars).unwrap()
    };
    let got: HashSet<Polynomial> = project(&[p("a*x2^2 + b*x2 + c - x1")], 4).into_iter().collect();
    let want: HashSet<Polynomial> = ["a", "b", "c - x1", "4*a*(c - x1) - b^2"].iter().flat_map(|s| canonical_pieces(&p(s))).collect();
    expect(got == want, || {
        let show = |s: &HashSet<Polynomial>| s.iter().map(|q| q.to_string()).collect::<Vec<_>>().join(", ");
        format!("got {{{}}}, want {{{}}}", show(&got), show(&want))
    })?;
    Ok(format!("{} polynomials, no pairwise terms", got.len()))
}

fn c9() -> Outcome {
    let v1 = VarOrder::new(&["x"]);
    let x = Polynomial::var(&v1, 0);
    let quad = &(&x * &x) - &Polynomial::from_int(&v1, 2);
    let n1 = compute_cad(&[quad], &v1, 1).map_err(|e| e.to_string())?.leaves().len();
    expect(n1 == 5, || format!("quadratic gives {n1} cells"))?;
    let v2 = VarOrder::new(&["x1", "x2"]);
    let parabola = &(&Polynomial::var(&v2, 1) * &Polynomial::var(&v2, 1)) - &Polynomial::var(&v2, 0);
    let t = compute_cad(&[parabola], &v2, 2).map_err(|e| e.to_string())?;
    let counts: Vec<usize> = t.root.children.iter().map(|n| n.children.len()).collect();
    expect(t.leaves().len() == 9 && counts == [1, 3, 5], || format!("{} leaves, child counts {counts:?}", t.leaves().len()))?;
    Ok("5 cells; 9 leaves as 1/3/5".into())
}

fn c10() -> Outcome {
    let f = corpus("parabola_shift.qe");
    let out = eliminate(&f, &QeOptions::default()).map_err(|e| e.to_string())?.formula;
    let target = parse("a > 0 or (a = 0 and b = 0)").unwrap();
    let names = ["a", "b", "c"];
    let mut rng = ChaCha8Rng::seed_from_u64(10);
    let points: Vec<Vec<Rational>> = (0..1000).map(|_| straddling_point(&mut rng, 3)).collect();
    let reference = |p: &[Rational]| evaluate_qf(&target, &env(&names, p.to_vec())).unwrap();
    oracle_agreement(&f, &out, &names, &points, &reference)?;
    Ok(format!("{out}; {} points agree", points.len()))
}

fn c11() -> Outcome {
    let suites: [(&str, u32, Box<dyn Fn() -> Result<(), String>>); 4] = [
        ("resultant multiplicativity", 100, Box::new(|| {
            props::runner(100).run(&props::arb_resultant_triple(), |(f, g, h)| props::resultant_multiplicative(&f, &g, &h)).map_err(|e| e.to_string())
        })),
        ("psc/gcd degree", 100, Box::new(|| {
            props::runner(100).run(&props::arb_gcd_pair(), |(c, u, w)| props::psc_matches_gcd_degree(&c, &u, &w)).map_err(|e| e.to_string())
        })),
        ("Sturm vs isolation", 100, Box::new(|| {
            props::runner(100).run(&(props::arb_roots(), props::arb_c()), |(r, c)| props::sturm_and_isolation_agree(&r, c)).map_err(|e| e.to_string())
        })),
        ("prenex truth", 200, Box::new(|| {
            props::runner(200).run(&(props::arb_formula(), props::arb_assignment()), |(f, v)| props::prenex_preserves_truth(&f, v)).map_err(|e| e.to_string())
        })),
    ];
    let mut parts = Vec::new();
    for (name, n, check) in suites.iter() {
        check().map_err(|e| format!("{name}: {e}"))?;
        parts.push(format!("{name} x{n}"));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let mut sampled = 0;
    for (text, names) in CAD_CORPUS {
        sampled += props::full_leaves_sign_invariant(&mut rng, text, names, 5)?;
    }
    parts.push(format!("sign invariance at {sampled} leaf points"));
    let files = props::corpus_files();
    for text in ROUND_TRIP.iter().copied().chain(files.iter().map(|(_, t)| t.as_str())) {
        props::round_trips(text)?;
    }
    parts.push(format!("{} round trips", ROUND_TRIP.len() + files.len()));
    Ok(parts.join(", "))
}

fn main() -> ExitCode {
    let criteria: [(&str, u64, fn() -> Outcome); 11] = [
        ("square is non-negative", 1, c1),
        ("guarded quadratic roots", 60, c2),
        ("guarded quadratic positivity", 60, c3),
        ("Heywood implicitization", 600, c4),
        ("Heywood identifiability", 600, c5),
        ("independence implication", 120, c6),
        ("model comparison", 1200, c7),
        ("projection golden", 60, c8),
        ("decomposition structure", 60, c9),
        ("shifted parabola elimination", 600, c10),
        ("property suites", 1200, c11),
    ];
    let mut failed = 0;
    for (i, (name, budget, check)) in criteria.iter().enumerate() {
        let t = Instant::now();
        let outcome = catch_unwind(AssertUnwindSafe(check)).unwrap_or_else(|p| {
            Err(p.downcast_ref::<String>().cloned().or_else(|| p.downcast_ref::<&str>().map(|s| s.to_string())).unwrap_or_else(|| "panic".into()))
        });
        let secs = t.elapsed().as_secs_f64();
        let outcome = outcome.and_then(|d| if secs <= *budget as f64 { Ok(d) } else { Err(format!("{secs:.1} s exceeds {budget} s")) });
        match outcome {
            Ok(detail) => println!("criterion {:>2} PASS  {name} ({secs:.2} s): {detail}", i + 1),
            Err(e) => {
                failed += 1;
                println!("criterion {:>2} FAIL  {name} ({secs:.2} s): {e}", i + 1);
            }
        }
    }
    println!("{} of {} criteria passed", criteria.len() - failed, criteria.len());
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}

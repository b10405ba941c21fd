//! Model questions checked against direct substitution into the model maps.

use std::collections::HashMap;

use qecad::formula::Formula;
use qecad::qe::{decide, eliminate, evaluate_qf, QeOptions};
use qecad::rational::{int, Rational};
use qecad::stats::{
    gaussian_complete_offdiag_3, heywood_model, identifiability_sentence, implicitization_formula, model_compare_sentence,
    CompareMode, HeywoodVariant, PolynomialModel,
};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

mod common;
use common::{holds_at_witness, straddling_point};

fn env(names: &[String], values: &[Rational]) -> HashMap<String, Rational> {
    names.iter().cloned().zip(values.iter().cloned()).collect()
}

fn implicit(m: &PolynomialModel) -> Formula {
    eliminate(&implicitization_formula(m), &QeOptions::default()).unwrap().formula
}

fn small_models() -> Vec<PolynomialModel> {
    vec![
        PolynomialModel::from_text("sum-product", &["t", "u"], "t > 0 and u > 0", &["x", "y"], &["t + u", "t*u"]).unwrap(),
        PolynomialModel::from_text("square", &["t"], "true", &["x"], &["t^2"]).unwrap(),
        PolynomialModel::from_text("positive-square", &["t"], "t > 0", &["x"], &["t^2"]).unwrap(),
    ]
}

#[test]
fn forward_image_lies_in_implicitization() {
    let mut models = vec![heywood_model(HeywoodVariant::Correlational)];
    models.extend(small_models());
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    for m in &models {
        let answer = implicit(m);
        let mut hits = 0;
        while hits < 200 {
            let theta = straddling_point(&mut rng, m.params.len());
            if !m.constraint_holds(&theta).unwrap() {
                continue;
            }
            hits += 1;
            let image = env(&m.observables, &m.eval_map(&theta));
            assert!(evaluate_qf(&answer, &image).unwrap(), "{}: g({theta:?}) outside {answer}", m.name);
        }
    }
}

#[test]
fn heywood_rejects_negative_products() {
    let m = heywood_model(HeywoodVariant::Correlational);
    let answer = implicit(&m);
    let at = |v: [i64; 3]| evaluate_qf(&answer, &env(&m.observables, &v.map(int))).unwrap();
    assert!(!at([1, 1, -1]));
    for s in 0..8 {
        let v = [0, 1, 2].map(|k| if s >> k & 1 == 1 { -1 } else { 1 });
        assert_eq!(at(v), v[0] * v[1] * v[2] > 0, "{v:?}");
    }
    for axis in 0..3 {
        for t in [-2, 3] {
            let mut v = [0; 3];
            v[axis] = t;
            assert!(at(v), "{v:?}");
        }
    }
    assert!(at([0, 0, 0]));
}

#[test]
fn identifiability_counterexample_is_genuine() {
    let m = heywood_model(HeywoodVariant::Correlational);
    let sentence = identifiability_sentence(&m, None);
    let d = decide(&sentence, &QeOptions::default()).unwrap();
    assert!(!d.value);
    let mut body = &sentence;
    while let Formula::Quant(_, _, inner) = body {
        body = inner;
    }
    let Formula::Implies(premise, conclusion) = body else { panic!("unexpected shape {body}") };
    if let Some(w) = &d.witness {
        assert!(holds_at_witness(premise, w), "premise fails at {w}");
        assert!(!holds_at_witness(conclusion, w), "conclusion holds at {w}");
    }
    // beta and -beta give the same correlations
    let vars: Vec<String> = sentence.all_vars();
    let beta = [1, 2, 3];
    let point: HashMap<String, Rational> = vars
        .iter()
        .map(|v| {
            let k: usize = v.trim_end_matches('\'')[1..].parse().unwrap();
            let sign = if v.ends_with('\'') { -1 } else { 1 };
            (v.clone(), int(sign * beta[k - 1]))
        })
        .collect();
    assert!(evaluate_qf(premise, &point).unwrap());
    assert!(!evaluate_qf(conclusion, &point).unwrap());
}

#[test]
fn equality_is_mutual_inclusion() {
    let mut pairs: Vec<(PolynomialModel, PolynomialModel)> = vec![(heywood_model(HeywoodVariant::Correlational), gaussian_complete_offdiag_3())];
    let ms = small_models();
    let nonneg = PolynomialModel::from_text("nonneg", &["s"], "s >= 0", &["x"], &["s"]).unwrap();
    let pos = PolynomialModel::from_text("pos", &["s"], "s > 0", &["x"], &["s"]).unwrap();
    pairs.push((ms[1].clone(), nonneg.clone()));
    pairs.push((ms[1].clone(), pos.clone()));
    pairs.push((ms[2].clone(), pos));
    pairs.push((ms[2].clone(), nonneg));
    pairs.push((ms[1].clone(), ms[2].clone()));
    pairs.push((ms[0].clone(), ms[0].clone()));
    let truth = |f: Formula| decide(&f, &QeOptions::default()).unwrap().value;
    let mut seen = [false; 2];
    for (a, b) in &pairs {
        let ab = truth(model_compare_sentence(a, b, CompareMode::Inclusion).unwrap());
        let ba = truth(model_compare_sentence(b, a, CompareMode::Inclusion).unwrap());
        let eq = truth(model_compare_sentence(a, b, CompareMode::Equality).unwrap());
        assert_eq!(eq, ab && ba, "{} vs {}", a.name, b.name);
        assert!(truth(model_compare_sentence(a, a, CompareMode::Overlap).unwrap()));
        seen[eq as usize] = true;
    }
    assert_eq!(seen, [true, true]);
}

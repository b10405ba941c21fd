//! Polynomial models: a semi-algebraic parameter set mapped onto observables.

use std::collections::HashMap;
use std::fmt;

use super::StatsError;
use crate::formula::{parse, Formula, Quantifier, Rel};
use crate::poly::{Polynomial, VarOrder};
use crate::rational::Rational;

#[derive(Clone, Debug)]
pub struct PolynomialModel {
    pub name: String,
    pub params: Vec<String>,
    /// Quantifier-free condition on the parameters.
    pub constraint: Formula,
    pub observables: Vec<String>,
    /// One polynomial over `params` per observable.
    pub map: Vec<Polynomial>,
}

impl PolynomialModel {
    pub fn new(
        name: &str,
        params: Vec<String>,
        constraint: Formula,
        observables: Vec<String>,
        map: Vec<Polynomial>,
    ) -> Result<Self, StatsError> {
        let bad = |m: String| Err(StatsError::Invalid(format!("model {name}: {m}")));
        if map.len() != observables.len() {
            return bad(format!("{} observables but {} map entries", observables.len(), map.len()));
        }
        if !constraint.is_quantifier_free() {
            return bad("constraint must be quantifier-free".into());
        }
        for v in constraint.free_vars() {
            if !params.contains(&v) {
                return bad(format!("constraint mentions non-parameter {v}"));
            }
        }
        let order = VarOrder::new(&params);
        let map = map
            .into_iter()
            .map(|p| p.remap(&order).map_err(|_| StatsError::Invalid(format!("model {name}: map mentions non-parameters in {p}"))))
            .collect::<Result<Vec<_>, _>>()?;
        for o in &observables {
            if params.contains(o) {
                return bad(format!("{o} is both a parameter and an observable"));
            }
        }
        Ok(PolynomialModel { name: name.to_string(), params, constraint, observables, map })
    }

    /// Model from a textual map `["b1*b2", ...]`.
    pub fn from_text(name: &str, params: &[&str], constraint: &str, observables: &[&str], map: &[&str]) -> Result<Self, StatsError> {
        let params: Vec<String> = params.iter().map(|s| s.to_string()).collect();
        let constraint = parse(constraint)?;
        let map = map.iter().map(|e| parse_expression(e, &params)).collect::<Result<Vec<_>, _>>()?;
        PolynomialModel::new(name, params, constraint, observables.iter().map(|s| s.to_string()).collect(), map)
    }

    pub fn param_order(&self) -> VarOrder {
        VarOrder::new(&self.params)
    }

    /// `g(θ)` at a rational parameter point.
    pub fn eval_map(&self, theta: &[Rational]) -> Vec<Rational> {
        self.map.iter().map(|p| p.eval_all(theta)).collect()
    }

    pub fn constraint_holds(&self, theta: &[Rational]) -> Result<bool, StatsError> {
        let env: HashMap<&str, &Rational> = self.params.iter().map(|s| s.as_str()).zip(theta).collect();
        Ok(self.constraint.evaluate(&|v| env.get(v).map(|q| (*q).clone()))?)
    }

    /// Copy with parameters renamed.
    pub fn rename_params(&self, rename: &dyn Fn(&str) -> String) -> PolynomialModel {
        let params: Vec<String> = self.params.iter().map(|p| rename(p)).collect();
        let order = VarOrder::new(&params);
        PolynomialModel {
            name: self.name.clone(),
            constraint: self.constraint.rename_vars(rename),
            map: self.map.iter().map(|p| p.rename(&order, rename).expect("renamed parameters present")).collect(),
            params,
            observables: self.observables.clone(),
        }
    }

    /// `lhs_j = map_j` atoms, where `lhs` are polynomials over any order.
    fn map_equations(&self, lhs: &[Polynomial]) -> Formula {
        Formula::conjunction(lhs.iter().zip(&self.map).map(|(l, r)| equation(l, r)).collect())
    }
}

impl fmt::Display for PolynomialModel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "model {}", self.name)?;
        writeln!(f, "params {}", self.params.join(" "))?;
        writeln!(f, "constraint {}", self.constraint)?;
        writeln!(f, "observables {}", self.observables.join(" "))?;
        for (o, p) in self.observables.iter().zip(&self.map) {
            writeln!(f, "map {o} = {p}")?;
        }
        Ok(())
    }
}

/// Parses a polynomial expression whose variables all lie in `vars`.
pub fn parse_expression(text: &str, vars: &[String]) -> Result<Polynomial, StatsError> {
    match parse(&format!("({text}) = 0"))? {
        Formula::Atom(p, Rel::Eq) => p
            .remap(&VarOrder::new(vars))
            .map_err(|_| StatsError::Invalid(format!("{text:?} mentions variables outside {vars:?}"))),
        Formula::True | Formula::False => Err(StatsError::Invalid(format!("{text:?} is constant"))),
        _ => Err(StatsError::Invalid(format!("{text:?} is not a polynomial"))),
    }
}

/// `l = r` as a single atom over the union of both orders.
fn equation(l: &Polynomial, r: &Polynomial) -> Formula {
    let names = union(l.vars().names(), r.vars().names());
    let order = VarOrder::new(&names);
    let l = l.remap(&order).expect("subset");
    let r = r.remap(&order).expect("subset");
    Formula::atom(&l - &r, Rel::Eq)
}

fn union(a: &[String], b: &[String]) -> Vec<String> {
    let mut out = a.to_vec();
    for n in b {
        if !out.contains(n) {
            out.push(n.clone());
        }
    }
    out
}

fn variables(names: &[String]) -> Vec<Polynomial> {
    let order = VarOrder::new(names);
    (0..names.len()).map(|i| Polynomial::var(&order, i)).collect()
}

/// Fresh variant of `name` avoiding `taken`: `name'`, `name''`, ...
fn fresh(name: &str, taken: &[String]) -> String {
    let mut n = format!("{name}'");
    while taken.iter().any(|t| *t == n) {
        n.push('\'');
    }
    n
}

/// Renames `m`'s parameters away from `taken`.
fn apart(m: &PolynomialModel, taken: &[String]) -> PolynomialModel {
    let mut used: Vec<String> = taken.to_vec();
    used.extend(m.params.iter().cloned());
    let mut table: HashMap<String, String> = HashMap::new();
    for p in &m.params {
        if taken.contains(p) {
            let f = fresh(p, &used);
            used.push(f.clone());
            table.insert(p.clone(), f);
        }
    }
    if table.is_empty() {
        return m.clone();
    }
    m.rename_params(&|v| table.get(v).cloned().unwrap_or_else(|| v.to_string()))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum CompareMode {
    Inclusion,
    Equality,
    Overlap,
}

/// `g1 ⊆ g2`: `∀θ1 ∃θ2 [θ1 ∈ Θ1 → θ2 ∈ Θ2 ∧ g2(θ2) = g1(θ1)]`.
fn inclusion(m1: &PolynomialModel, m2: &PolynomialModel) -> Formula {
    let m2 = apart(m2, &m1.params);
    let body = Formula::implies(m1.constraint.clone(), Formula::conjunction(vec![m2.constraint.clone(), m2.map_equations(&m1.map)]));
    Formula::quantify(Quantifier::Forall, &m1.params, Formula::quantify(Quantifier::Exists, &m2.params, body))
}

pub fn model_compare_sentence(m1: &PolynomialModel, m2: &PolynomialModel, mode: CompareMode) -> Result<Formula, StatsError> {
    if m1.observables.len() != m2.observables.len() {
        return Err(StatsError::Mismatch(format!(
            "{} has {} observables, {} has {}",
            m1.name,
            m1.observables.len(),
            m2.name,
            m2.observables.len()
        )));
    }
    Ok(match mode {
        CompareMode::Inclusion => inclusion(m1, m2),
        CompareMode::Equality => Formula::conjunction(vec![inclusion(m1, m2), inclusion(m2, m1)]),
        CompareMode::Overlap => {
            let m2 = apart(m2, &m1.params);
            let body = Formula::conjunction(vec![m1.constraint.clone(), m2.constraint.clone(), m2.map_equations(&m1.map)]);
            Formula::quantify(Quantifier::Exists, &m1.params, Formula::quantify(Quantifier::Exists, &m2.params, body))
        }
    })
}

/// `∀θ ∀θ' [θ ∈ Θ ∧ θ' ∈ Θ ∧ g(θ) = g(θ') → Q(θ) = Q(θ')]`; `q` defaults to the identity.
pub fn identifiability_sentence(m: &PolynomialModel, q: Option<&[Polynomial]>) -> Formula {
    let identity = variables(&m.params);
    let q = q.unwrap_or(&identity);
    let m2 = apart(m, &m.params);
    let order2 = m2.param_order();
    let rename: HashMap<&str, &str> = m.params.iter().map(|s| s.as_str()).zip(m2.params.iter().map(|s| s.as_str())).collect();
    let q2: Vec<Polynomial> = q
        .iter()
        .map(|p| p.rename(&order2, &|v| rename.get(v).map_or(v.to_string(), |s| s.to_string())).expect("quantity over parameters"))
        .collect();
    let premise = Formula::conjunction(vec![m.constraint.clone(), m2.constraint.clone(), m2.map_equations(&m.map)]);
    let conclusion = Formula::conjunction(q.iter().zip(&q2).map(|(a, b)| equation(a, b)).collect());
    let all: Vec<String> = m.params.iter().chain(&m2.params).cloned().collect();
    Formula::quantify(Quantifier::Forall, &all, Formula::implies(premise, conclusion))
}

/// Name of the free variable in a region formula.
pub fn region_variable(m: &PolynomialModel) -> String {
    if m.params.iter().any(|p| p == "r") {
        fresh("r", &m.params)
    } else {
        "r".to_string()
    }
}

/// `∃θ (θ ∈ Θ ∧ r = Q(θ))` with `r` free: the set of values `Q` takes on the model.
pub fn quantity_region_formula(m: &PolynomialModel, q: &Polynomial) -> Formula {
    let r = variables(&[region_variable(m)]).remove(0);
    let body = Formula::conjunction(vec![m.constraint.clone(), equation(&r, q)]);
    Formula::quantify(Quantifier::Exists, &m.params, body)
}

/// `∃θ (θ ∈ Θ ∧ γ = g(θ))` with the observables free.
pub fn implicitization_formula(m: &PolynomialModel) -> Formula {
    let gammas = variables(&m.observables);
    let body = Formula::conjunction(vec![m.constraint.clone(), m.map_equations(&gammas)]);
    Formula::quantify(Quantifier::Exists, &m.params, body)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum HeywoodVariant {
    /// Error variances known and absorbed: `r_ij = b_i b_j`.
    Correlational,
    /// Hidden variance `eh`, error variances `e1..e3 > 0`, weights `b1..b3`.
    Covariance,
}

pub fn heywood_model(variant: HeywoodVariant) -> PolynomialModel {
    match variant {
        HeywoodVariant::Correlational => PolynomialModel::from_text(
            "heywood-corr",
            &["b1", "b2", "b3"],
            "true",
            &["r12", "r13", "r23"],
            &["b1*b2", "b1*b3", "b2*b3"],
        ),
        HeywoodVariant::Covariance => PolynomialModel::from_text(
            "heywood-cov",
            &["eh", "e1", "e2", "e3", "b1", "b2", "b3"],
            "eh > 0 and e1 > 0 and e2 > 0 and e3 > 0",
            &["s11", "s12", "s13", "s22", "s23", "s33"],
            &["eh*b1^2 + e1", "eh*b1*b2", "eh*b1*b3", "eh*b2^2 + e2", "eh*b2*b3", "eh*b3^2 + e3"],
        ),
    }
    .expect("built-in model is well formed")
}

/// Every positive definite 3 by 3 covariance matrix, parameterized by itself.
pub fn gaussian_complete_3() -> PolynomialModel {
    use super::gaussian::{matrix_symbols, positive_definite, MatrixForm};
    let params: Vec<String> = matrix_symbols(MatrixForm::Covariance, 3).iter().map(|s| format!("c{}", &s[1..])).collect();
    let pd = positive_definite(3, MatrixForm::Covariance).rename_vars(&|v| format!("c{}", &v[1..]));
    let map = variables(&params);
    PolynomialModel::new("gaussian-complete-3", params, pd, matrix_symbols(MatrixForm::Covariance, 3), map)
        .expect("built-in model is well formed")
}

/// The off-diagonal coordinates of the complete model, unconstrained: the
/// counterpart of the correlational Heywood map.
pub fn gaussian_complete_offdiag_3() -> PolynomialModel {
    PolynomialModel::from_text("gaussian-complete-offdiag-3", &["c12", "c13", "c23"], "true", &["r12", "r13", "r23"], &["c12", "c13", "c23"])
        .expect("built-in model is well formed")
}

/// Reads the line-oriented model format:
///
/// ```text
/// model heywood-corr
/// params b1 b2 b3
/// constraint true          # optional, repeated lines are conjoined
/// observables r12 r13 r23
/// map r12 = b1*b2          # one per observable, in order
/// ```
pub fn parse_model(text: &str) -> Result<PolynomialModel, StatsError> {
    let mut name = String::from("model");
    let mut params: Vec<String> = Vec::new();
    let mut constraints: Vec<String> = Vec::new();
    let mut observables: Vec<String> = Vec::new();
    let mut maps: Vec<(String, String)> = Vec::new();
    for (n, raw) in text.lines().enumerate() {
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let (key, rest) = line.split_once(char::is_whitespace).unwrap_or((line, ""));
        let key = key.trim_end_matches(':');
        let rest = rest.trim();
        let list = || rest.split([',', ' ', '\t']).filter(|s| !s.is_empty()).map(String::from).collect::<Vec<_>>();
        match key {
            "model" => name = rest.to_string(),
            "params" => params.extend(list()),
            "constraint" => constraints.push(rest.to_string()),
            "observables" => observables.extend(list()),
            "map" => {
                let (o, e) = rest
                    .split_once('=')
                    .ok_or_else(|| StatsError::Invalid(format!("line {}: expected `map name = expression`", n + 1)))?;
                maps.push((o.trim().to_string(), e.trim().to_string()));
            }
            other => return Err(StatsError::Invalid(format!("line {}: unknown key {other:?}", n + 1))),
        }
    }
    let constraint = if constraints.is_empty() {
        Formula::True
    } else {
        Formula::conjunction(constraints.iter().map(|c| parse(c)).collect::<Result<Vec<_>, _>>()?)
    };
    if observables.is_empty() {
        observables = maps.iter().map(|(o, _)| o.clone()).collect();
    }
    let mut map = Vec::new();
    for o in &observables {
        let (_, e) = maps
            .iter()
            .find(|(m, _)| m == o)
            .ok_or_else(|| StatsError::Invalid(format!("no map entry for observable {o}")))?;
        map.push(parse_expression(e, &params)?);
    }
    if maps.len() != observables.len() {
        return Err(StatsError::Invalid("map entries do not match the observables".into()));
    }
    PolynomialModel::new(&name, params, constraint, observables, map)
}

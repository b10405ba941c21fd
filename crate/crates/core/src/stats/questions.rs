//! Named statistical questions, each compiling to a decision or elimination task.

use std::collections::BTreeMap;

use super::gaussian::{membership_sentence, CiStatement};
use super::model::{
    gaussian_complete_3, gaussian_complete_offdiag_3, heywood_model, identifiability_sentence, implicitization_formula,
    model_compare_sentence, parse_expression, quantity_region_formula, CompareMode, HeywoodVariant, PolynomialModel,
};
use super::StatsError;
use crate::formula::Formula;

/// What to do with a compiled formula.
#[derive(Clone, Debug)]
pub enum Task {
    Decide(Formula),
    Eliminate(Formula),
}

impl Task {
    pub fn formula(&self) -> &Formula {
        match self {
            Task::Decide(f) | Task::Eliminate(f) => f,
        }
    }
}

/// Extra inputs some questions need.
#[derive(Clone, Debug, Default)]
pub struct QuestionArgs {
    /// Polynomial expressions over the first model's parameters.
    pub quantities: Vec<String>,
    pub premises: Vec<CiStatement>,
    pub conclusions: Vec<CiStatement>,
    /// Number of Gaussian variables; inferred from the statements when absent.
    pub dimension: Option<usize>,
}

pub trait Question: Send + Sync {
    fn name(&self) -> &'static str;
    fn summary(&self) -> &'static str;
    /// Number of models the question takes.
    fn arity(&self) -> usize;
    fn compile(&self, models: &[&PolynomialModel], args: &QuestionArgs) -> Result<Task, StatsError>;
}

struct Implicitize;
struct Identify;
struct Bound;
struct Compare(CompareMode, &'static str, &'static str);
struct CiImplication;

impl Question for Implicitize {
    fn name(&self) -> &'static str {
        "implicitize"
    }
    fn summary(&self) -> &'static str {
        "equalities and inequalities the model imposes on its observables"
    }
    fn arity(&self) -> usize {
        1
    }
    fn compile(&self, models: &[&PolynomialModel], _: &QuestionArgs) -> Result<Task, StatsError> {
        Ok(Task::Eliminate(implicitization_formula(models[0])))
    }
}

impl Question for Identify {
    fn name(&self) -> &'static str {
        "identify"
    }
    fn summary(&self) -> &'static str {
        "whether the quantities (default: all parameters) are determined by the observables"
    }
    fn arity(&self) -> usize {
        1
    }
    fn compile(&self, models: &[&PolynomialModel], args: &QuestionArgs) -> Result<Task, StatsError> {
        let m = models[0];
        if args.quantities.is_empty() {
            return Ok(Task::Decide(identifiability_sentence(m, None)));
        }
        let q = args.quantities.iter().map(|e| parse_expression(e, &m.params)).collect::<Result<Vec<_>, _>>()?;
        Ok(Task::Decide(identifiability_sentence(m, Some(&q))))
    }
}

impl Question for Bound {
    fn name(&self) -> &'static str {
        "bound"
    }
    fn summary(&self) -> &'static str {
        "the set of values a quantity takes over the model, as a formula in r"
    }
    fn arity(&self) -> usize {
        1
    }
    fn compile(&self, models: &[&PolynomialModel], args: &QuestionArgs) -> Result<Task, StatsError> {
        let m = models[0];
        let [e] = args.quantities.as_slice() else {
            return Err(StatsError::Invalid("bound takes exactly one quantity".into()));
        };
        Ok(Task::Eliminate(quantity_region_formula(m, &parse_expression(e, &m.params)?)))
    }
}

impl Question for Compare {
    fn name(&self) -> &'static str {
        self.1
    }
    fn summary(&self) -> &'static str {
        self.2
    }
    fn arity(&self) -> usize {
        2
    }
    fn compile(&self, models: &[&PolynomialModel], _: &QuestionArgs) -> Result<Task, StatsError> {
        Ok(Task::Decide(model_compare_sentence(models[0], models[1], self.0)?))
    }
}

impl Question for CiImplication {
    fn name(&self) -> &'static str {
        "ci-implication"
    }
    fn summary(&self) -> &'static str {
        "whether Gaussian independence premises imply one of the conclusions"
    }
    fn arity(&self) -> usize {
        0
    }
    fn compile(&self, _: &[&PolynomialModel], args: &QuestionArgs) -> Result<Task, StatsError> {
        if args.conclusions.is_empty() {
            return Err(StatsError::Invalid("ci-implication needs at least one conclusion".into()));
        }
        let n = args.dimension.unwrap_or_else(|| {
            args.premises.iter().chain(&args.conclusions).map(|s| s.max_index()).max().unwrap_or(0)
        });
        Ok(Task::Decide(membership_sentence(&args.premises, &args.conclusions, n)?))
    }
}

pub struct QuestionRegistry {
    entries: BTreeMap<&'static str, Box<dyn Question>>,
}

impl QuestionRegistry {
    pub fn empty() -> Self {
        QuestionRegistry { entries: BTreeMap::new() }
    }

    pub fn register(&mut self, q: Box<dyn Question>) {
        self.entries.insert(q.name(), q);
    }

    pub fn get(&self, name: &str) -> Result<&dyn Question, StatsError> {
        self.entries.get(name).map(|b| b.as_ref()).ok_or_else(|| StatsError::UnknownQuestion(name.to_string()))
    }

    pub fn iter(&self) -> impl Iterator<Item = &dyn Question> {
        self.entries.values().map(|b| b.as_ref())
    }

    pub fn compile(&self, name: &str, models: &[&PolynomialModel], args: &QuestionArgs) -> Result<Task, StatsError> {
        let q = self.get(name)?;
        if models.len() != q.arity() {
            return Err(StatsError::Invalid(format!("{name} takes {} model(s), got {}", q.arity(), models.len())));
        }
        q.compile(models, args)
    }
}

impl Default for QuestionRegistry {
    fn default() -> Self {
        let mut r = QuestionRegistry::empty();
        r.register(Box::new(Implicitize));
        r.register(Box::new(Identify));
        r.register(Box::new(Bound));
        r.register(Box::new(Compare(CompareMode::Inclusion, "include", "whether every distribution of the first model is in the second")));
        r.register(Box::new(Compare(CompareMode::Equality, "equal", "whether the two models describe the same distributions")));
        r.register(Box::new(Compare(CompareMode::Overlap, "overlap", "whether the two models share a distribution")));
        r.register(Box::new(CiImplication));
        r
    }
}

pub struct ModelRegistry {
    models: BTreeMap<String, PolynomialModel>,
}

impl ModelRegistry {
    pub fn empty() -> Self {
        ModelRegistry { models: BTreeMap::new() }
    }

    pub fn register(&mut self, m: PolynomialModel) {
        self.models.insert(m.name.clone(), m);
    }

    pub fn get(&self, name: &str) -> Result<&PolynomialModel, StatsError> {
        self.models.get(name).ok_or_else(|| StatsError::UnknownModel(name.to_string()))
    }

    pub fn names(&self) -> impl Iterator<Item = &str> {
        self.models.keys().map(|s| s.as_str())
    }
}

impl Default for ModelRegistry {
    fn default() -> Self {
        let mut r = ModelRegistry::empty();
        r.register(heywood_model(HeywoodVariant::Correlational));
        r.register(heywood_model(HeywoodVariant::Covariance));
        r.register(gaussian_complete_3());
        r.register(gaussian_complete_offdiag_3());
        r
    }
}

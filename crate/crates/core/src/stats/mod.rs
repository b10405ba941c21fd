//! Statistical questions about polynomial models, compiled to real sentences.

pub mod gaussian;
pub mod model;
pub mod questions;

use thiserror::Error;

use crate::error::AlgebraError;
use crate::formula::ParseError;

pub use gaussian::{
    gaussian_constraints, gaussian_constraints_in, membership_sentence, membership_sentence_in, positive_definite, CiStatement,
    MatrixForm,
};
pub use model::{
    gaussian_complete_3, gaussian_complete_offdiag_3, heywood_model, identifiability_sentence, implicitization_formula,
    model_compare_sentence, parse_expression, parse_model, quantity_region_formula, region_variable, CompareMode,
    HeywoodVariant, PolynomialModel,
};
pub use questions::{ModelRegistry, Question, QuestionArgs, QuestionRegistry, Task};

#[derive(Debug, Clone, Error, PartialEq, Eq)]
pub enum StatsError {
    #[error("{0}")]
    Invalid(String),
    #[error("unsupported: {0}")]
    Unsupported(String),
    #[error("{0}")]
    Mismatch(String),
    #[error("unknown model {0:?}")]
    UnknownModel(String),
    #[error("unknown question {0:?}")]
    UnknownQuestion(String),
    #[error("parse error: {0}")]
    Parse(#[from] ParseError),
    #[error(transparent)]
    Algebra(#[from] AlgebraError),
}

use thiserror::Error;

#[derive(Debug, Clone, Error, PartialEq, Eq)]
pub enum AlgebraError {
    #[error("variable orders differ: {left:?} vs {right:?}")]
    VarOrderMismatch { left: Vec<String>, right: Vec<String> },
    #[error("variable `{0}` is not bound")]
    Unbound(String),
    #[error("both polynomials are constant in the elimination variable")]
    ConstantInVariable,
    #[error("subresultant index {index} out of range 0..={max}")]
    PscIndex { index: usize, max: usize },
    #[error("polynomial is constant")]
    ConstantPolynomial,
    #[error("interval endpoint {0} is a root")]
    EndpointIsRoot(String),
    #[error("empty or inverted interval")]
    BadInterval,
    #[error("polynomial is not square-free")]
    NotSquareFree,
    #[error("polynomial is zero")]
    ZeroPolynomial,
    #[error("expected a univariate polynomial, got {0}")]
    NotUnivariate(String),
}

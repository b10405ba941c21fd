pub mod cad;
pub mod error;
pub mod formula;
pub mod poly;
pub mod qe;
pub mod rational;
pub mod resultant;
pub mod stats;
pub mod roots;

pub use error::AlgebraError;
pub use poly::{Polynomial, VarOrder};
pub use rational::Rational;

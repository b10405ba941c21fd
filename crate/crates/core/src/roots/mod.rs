//! Real root isolation, real algebraic numbers and exact sign determination.

mod algebraic;
pub mod field;
mod sample;
pub mod tower;
pub mod upoly;

pub use algebraic::{dense_coefficients, isolate_roots, root_bound, sturm_count, AlgebraicNumber};
pub(crate) use algebraic::{isolate_dense, rational_root_in};
pub use field::{Field, Rationals, Sign};
pub use sample::{sign_at, SamplePoint};
pub use tower::{Tower, TowerField};

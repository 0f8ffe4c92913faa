//! Exact verification engine for R(p,q)-deformed calculus, the deformed
//! W(1+infinity) algebra with its n-ary brackets, and matrix-model constraint operators.

pub mod check;
pub mod deform;
pub mod error;
pub mod laurent;
pub mod matrix_model;
pub mod operator;
pub mod scalar;
pub mod suite;
pub mod tseries;
pub mod w_multi;
pub mod w_single;

pub use deform::{CoefficientTable, Deformation, Family};
pub use error::{Error, Result};
pub use operator::{BracketSpec, Comparison, GradedOperator, Operator, Witness};
pub use scalar::Scalar;

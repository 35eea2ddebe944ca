//! Bigeometric calculus on the positive reals.
//!
//! Numbers are stored by their natural logarithm ([`NNReal`]); the field
//! operations `⊕ ⊖ ⊙ ⊘` become addition, subtraction, multiplication and
//! division of logs. On top of the arithmetic the crate provides symbolic
//! expressions, NN derivatives and product integrals, a gradient method and a
//! calculus of variations with direct and Euler–Lagrange solvers.

pub mod analysis;
pub mod error;
pub mod expr;
pub mod function;
pub(crate) mod linalg;
pub mod optim;
pub mod real;
pub mod varcalc;

pub use error::{NNError, Result};
pub use expr::{parse, parse_with_vars, Expr, LAGRANGIAN_VARS};
pub use function::NNFunction;
pub use real::{nn_sum, NNReal};

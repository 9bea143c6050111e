//! Exact Krawtchouk polynomials, the sl2 model behind them, and a classifier
//! for Leonard pairs of Krawtchouk type.

pub mod cli;
pub mod field;
pub mod json;
pub mod krawtchouk;
pub mod leonard;
pub mod linalg;
pub mod module;
pub mod sl2;
pub mod suites;

pub use field::{FieldError, FieldSpec, Scalar};
pub use krawtchouk::{KrawtchoukTable, Params, ParamsError};
pub use linalg::{LinalgError, Matrix, Poly};

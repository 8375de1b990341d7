//! Scenario files, an expression language for the product calculus, and the
//! built-in verification suite behind the `gencyc` command.

pub mod cli;
pub mod error;
pub mod eval;
pub mod expr;
pub mod report;
pub mod scenario;
pub mod suite;

pub use error::CliError;
pub use eval::{evaluate, Evaluator, Value};
pub use expr::{parse, Expr, ParseError, Poly};
pub use scenario::Scenario;

//! Decision procedures and certified evaluators for the computable side of
//! the model theory of abelian C*-algebras.
//!
//! * [`ordinal`]: Cantor normal form arithmetic and the order-equivalence
//!   criterion modulo `ω^ω`.
//! * [`efgames`]: Ehrenfeucht–Fraïssé solvers used as independent oracles.
//! * [`boolalg`]: finite Boolean algebras, Stone duality and an exhaustive
//!   first-order model checker.
//! * [`batheory`]: symbolic infinite Boolean algebras and their elementary
//!   invariants.
//! * [`clogic`]: finite-dimensional abelian C*-algebras and a certified
//!   continuous-logic evaluator.
//! * [`saturation`]: chain interpolation, degree-1 type realization and
//!   orthogonal families.
//! * [`cli`]: text grammars and the command front end.

pub mod batheory;
pub mod boolalg;
pub mod cli;
pub mod clogic;
pub mod efgames;
pub mod error;
pub mod ordinal;
pub mod saturation;

pub use error::{Error, Result};

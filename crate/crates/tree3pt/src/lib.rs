//! Tree-level structure constants of three SU(2) single-trace operators,
//! computed from determinant formulas of the rational six-vertex model and
//! checked against brute-force lattice and operator oracles.
//!
//! - [`numerics`]: determinants, truncated power series, damped Newton.
//! - [`vertex_model`]: vertex weights and line-transfer partition functions.
//! - [`algebraic_bethe`]: monodromy matrices, Bethe roots and states.
//! - [`determinants`]: closed-form determinant evaluations.
//! - [`gauge_map`]: operator words, three-point geometry, structure constants.
//! - [`cli`]: the command-line front end.

pub mod algebraic_bethe;
pub mod cli;
pub mod determinants;
pub mod error;
pub mod gauge_map;
pub mod numerics;
pub mod vertex_model;

pub use error::{Error, Result};

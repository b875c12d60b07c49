//! Octonion and split-Clifford numerics with octonionic Lorentz
//! transformations, open-string mode solutions and a polynomial-space
//! realization of the string's Lorentz algebra.

pub mod clifford;
pub mod error;
pub mod lorentz;
pub mod matrix;
pub mod minkowski;
pub mod octonion;
pub mod quantum_rep;
pub mod resolve;
pub mod sample;
pub mod string_modes;

pub use error::{Error, Result};
pub use matrix::{OctHermitian, OctMatrix2};
pub use octonion::{Octonion, SubspaceIndex};

//! Exact flexible linear systems over external numbers.
//!
//! Coefficients are external numbers `a + A`: an exact rational function of a
//! fixed positive infinitesimal `ε` plus a neutrix `A` modelling an order of
//! magnitude of imprecision. Systems `A·x ⊆ B` are solved by a Gauss-Jordan
//! procedure driven by a real representative matrix and, independently, by
//! Cramer's rule.

pub mod error;
pub mod eps_scalar;
pub mod eps_rational;
pub mod neutrix;
pub mod external_number;
pub mod flex_matrix;
pub mod gauss_jordan;
pub mod solver;
pub mod numeric_harness;
pub mod cli_io;
pub mod commands;
pub mod fixtures;
pub mod random;

pub use eps_rational::EpsRational;
pub use eps_scalar::{EpsScalar, Rational};
pub use error::{Error, Result};
pub use external_number::ExternalNumber;
pub use flex_matrix::{ExtMatrix, ExtVector, RealMatrix};
pub use gauss_jordan::GjTrace;
pub use neutrix::{Class, MagnitudeClass, Neutrix};
pub use solver::{FlexSystem, Solution, StabilityReport};

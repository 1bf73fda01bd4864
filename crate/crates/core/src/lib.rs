//! Fractional monodromy of two-degree-of-freedom integrable Hamiltonian
//! systems with a Hamiltonian circle action.
//!
//! The exact side ([`qalgebra`], [`seifert`], [`circle_action`]) turns the
//! isotropy data of the circle action into an Euler number and a rational
//! monodromy matrix. The numerical side ([`systems`], [`numverify`]) supplies
//! concrete systems, their bifurcation diagrams and independent checks.
//! [`monodromy`] ties the two together for a loop in the image of the
//! integral map.

pub mod circle_action;
pub mod format;
pub mod integrator;
pub mod linalg;
pub mod monodromy;
pub mod numverify;
pub mod plot;
pub mod qalgebra;
pub mod seifert;
pub mod systems;

pub use qalgebra::{Cycle, Lattice2, MonodromyMatrixQ, Rational};
pub use seifert::{SeifertData, Transport};

//! Exact computations with finite-dimensional differential graded Lie
//! algebras over the rationals: cohomology, Chevalley–Eilenberg double
//! complexes and their first-filtration spectral sequence, Euler classes
//! and formality obstructions, Maurer–Cartan systems, truncated enveloping
//! algebras, finite group averaging, and a small text format.
//!
//! All types are generic over [`scalar::Field`] and default to
//! [`Rational`]; the aliases below fix that choice.

pub mod ce;
pub mod dsl;
pub mod enveloping;
pub mod fixtures;
pub mod formality;
pub mod graded;
pub mod group;
pub mod linalg;
pub mod maurer_cartan;
pub mod multilinear;
pub mod scalar;
pub mod spectral;

pub use scalar::{Field, Rational};

pub type Matrix = linalg::Matrix<Rational>;
pub type Subspace = linalg::Subspace<Rational>;
pub type Subquotient = linalg::Subquotient<Rational>;
pub type Dgla = graded::Dgla<Rational>;
pub type DglaMorphism = graded::DglaMorphism<Rational>;
pub type ModuleStructure = graded::ModuleStructure<Rational>;
pub type CohomologyPresentation = graded::CohomologyPresentation<Rational>;
pub type FiniteAction = group::FiniteAction<Rational>;

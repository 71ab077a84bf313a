pub mod algebra;
pub mod atoric;
pub mod catalog;
pub mod character;
pub mod error;
pub mod functor;
pub mod group;
pub mod idempotents;
pub mod linalg;
pub mod mobius;
pub mod phase;
pub mod report;
pub mod scalar;
pub mod serial;
pub mod verify;

pub use error::{Error, Result};

/// Exact coefficients.
pub type Rational = num_rational::BigRational;
/// Algebra elements with exact rational coefficients.
pub type Element = algebra::AlgebraElement<Rational>;

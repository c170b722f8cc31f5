//! Exact computer algebra for odd symmetric algebras, Hochschild chains of
//! polynomial rings, Duflo/Todd series operators, nilpotent Lie exponentials
//! and Riemann-Roch on projective spaces, together with a verification
//! harness that checks the identities between them.

pub mod atiyah;
pub mod error;
pub mod graded;
pub mod harness;
pub mod hochschild;
pub mod lie;
pub mod linalg;
pub mod odd;
pub mod poly;
pub mod rr;
pub mod series;

pub use error::{Error, Result};
pub use graded::{compare_subsets, koszul_sign, subset_wedge, DegreeVector, Rational, SubsetLabel};
pub use odd::{BiSymbol, EndOperator, ExtElement, Side};

//! Exact-arithmetic quiver representations, finite-dimensional algebras and
//! the representation embeddings between their module categories.

pub mod error;
pub mod field;
pub mod matrix;
pub mod algebra;
pub mod poly;
pub mod homology;
pub mod quiver;
pub mod sample;
pub mod functors;
pub mod verify;

pub use error::{Error, Result};
pub use field::{FieldSpec, Scalar};
pub use matrix::{Matrix, Quotient};
pub use poly::Poly;

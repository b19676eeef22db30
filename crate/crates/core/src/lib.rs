//! Structure-constant superalgebras over exact fields: identity checks,
//! Peirce decompositions, graded isomorphism search, classification of
//! small Jordan superalgebras and speciality certificates.

pub mod algebra;
pub mod catalog;
pub mod cli;
pub mod envelope;
pub mod classify;
pub mod error;
pub mod field;
pub mod iso;
pub mod linalg;
pub mod peirce;
pub mod poly;
pub mod sca;

pub use algebra::{Element, IdentityReport, SignConvention, SuperAlgebra, Violation};
pub use error::{Error, Result};
pub use field::{field_sqrt, half, Field, Scalar};

//! Poincaré differential graded commutative algebras over the rationals.

pub mod catalog;
pub mod cochain;
pub mod cohomology;
pub mod dgca;
pub mod extension;
pub mod format;
pub mod hodge;
pub mod ideal;
pub mod linalg;
pub mod massey;
pub mod obstruction;
pub mod par;
pub mod scalar;
pub mod small;
pub mod sparse;
pub mod subspace;
pub mod transfer;

pub use dgca::{validate_dgca, Dgca, DgcaBuilder, ModelError, Violation};
pub use scalar::Scalar;

//! Exact computations for the two-parameter distance problem over finite
//! fields: generalized distance sets, distance spectra, isosceles-triple
//! counts, and heavy-fiber certificates for two-parameter distance pairs.

pub mod counting;
pub mod error;
pub mod experiment;
pub mod field;
pub mod format;
pub mod geometry;
pub mod proof;

pub use error::{Error, Result};
pub use field::{Elem, FieldElement, FieldSpec};
pub use geometry::{NormSpec, PairSet, PointSet, Space, Vector};

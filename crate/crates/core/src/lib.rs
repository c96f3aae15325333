//! Finite fields, cyclic and constacyclic codes, code equivalence and
//! quantum code parameters.

pub mod arith;
pub mod certificate;
pub mod constacyclic;
pub mod cosets;
pub mod cyclic;
pub mod error;
pub mod galois;
pub mod linear;
pub mod quantum;
pub mod search;

pub use error::{Error, Result};
pub use galois::{FieldElement, GaloisField};

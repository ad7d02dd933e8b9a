//! Valuations attached to clusters of infinitely near points of the
//! projective plane, and the Newton-Okounkov bodies of exceptional curve
//! valuations, computed in exact arithmetic.

pub mod cluster;
pub mod document;
pub mod error;
pub mod fixtures;
pub mod flagval;
pub mod invariants;
pub mod okbody;
pub mod oracle;
pub mod report;
pub mod scalar;
pub mod zariski;

pub use error::{Error, Result};

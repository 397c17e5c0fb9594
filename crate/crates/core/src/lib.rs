//! Finite semitopologies: point sets equipped with a union-closed family of
//! open sets ("actionable coalitions"), generated from a basis.
//!
//! The crate is `no_std` and only needs `alloc`. It provides
//!
//! - the data model ([`SemiTopology`], [`PointSet`]) and the openness test,
//! - the intertwined relation, its transitive closure and the resulting
//!   agreement components ([`relations`]),
//! - value assignments, continuity and a runtime check that continuous
//!   assignments agree on intertwined points ([`valuation`]),
//! - generators for the standard families and the bridge composition
//!   ([`generators`]),
//! - a deterministic legal-commit simulator with fork and deadlock detection
//!   ([`sim`]).
//!
//! Every fast path that reduces a question about all opens to a question about
//! basis elements has a brute-force counterpart that enumerates the open
//! family, so the two can be cross-checked on small instances.

#![cfg_attr(not(test), no_std)]

extern crate alloc;

mod dsu;
mod error;
pub mod generators;
mod point;
mod point_set;
pub mod relations;
mod semitopology;
pub mod sim;
pub mod valuation;

pub use error::Error;
pub use point::{Point, PointId};
pub use point_set::PointSet;
pub use semitopology::{CanonicalForm, Coverage, SemiTopology, DEFAULT_ORACLE_LIMIT};

pub type Result<T, E = Error> = core::result::Result<T, E>;

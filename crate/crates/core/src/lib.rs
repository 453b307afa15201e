//! Finite projective and affine geometries over GF(q), two-colorings of
//! their points, and the recognition of targets: colorings whose green set
//! is built by alternately adding green and red shells along a chain of
//! flats.
//!
//! The crate is organized bottom-up:
//!
//! - [`field`]: table-driven GF(q) arithmetic.
//! - [`geometry`]: point enumeration, closure, rank, hyperplanes, parallel
//!   classes, the affine-in-projective embedding and point quotients.
//! - [`coloring`]: colorings, nested sequences, the peeling recognizer,
//!   contraction and induced restrictions.
//! - [`catalog`]: small rank-table matroids, the forbidden catalogs and the
//!   search for forbidden induced restrictions.
//! - [`harness`]: exhaustive and sampled sweeps, minimal non-targets, the
//!   compatibility criterion for gluing an affine and a hyperplane target,
//!   and the structural property suites.

pub mod catalog;
pub mod coloring;
pub mod error;
pub mod field;
pub mod geometry;
pub mod harness;
mod linalg;
pub mod pointset;

pub use catalog::{ForbiddenWitness, SmallMatroid};
pub use coloring::{Coloring, FlatColor, NestedSequence, TargetDecision};
pub use error::{Error, Result};
pub use field::FiniteField;
pub use geometry::{Embedding, Flat, Geometry, GeometryId, Kind, PartitionGrid, Quotient};
pub use harness::{Mode, VerificationReport};
pub use linalg::MAX_DIM;
pub use pointset::PointSet;
